// Copyright 2026 The qjasim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qja/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qja/errors.hpp"

namespace qja {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericRangeError("double formatting failed");
  return std::string(buf, ptr);
}

namespace {

// True when the neighbour table is exactly the nearest-neighbour chain,
// optionally closed by the wrap edge.
bool is_chain(const CostFunction& cost, bool periodic) {
  const int n = cost.size();
  if (n < 2) return false;
  if (periodic && n <= 2) return false;
  for (int i = 0; i < n; ++i) {
    std::vector<int> expected;
    if (i > 0) expected.push_back(i - 1);
    if (i + 1 < n) expected.push_back(i + 1);
    if (periodic) {
      if (i == 0) expected.push_back(n - 1);
      if (i == n - 1) expected.insert(expected.begin(), 0);
    }
    std::vector<int> got = cost.neighbors_of(i);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    if (got != expected) return false;
  }
  return true;
}

}  // namespace

nlohmann::json instance_to_json(const InstanceRecord& record) {
  const CostFunction& cost = record.cost;
  nlohmann::json j;
  j["n"] = cost.size();
  j["energies"] = cost.energies();
  if (is_chain(cost, false)) {
    j["neighbors"] = "open-chain";
  } else if (is_chain(cost, true)) {
    j["neighbors"] = "periodic-chain";
  } else {
    nlohmann::json edges = nlohmann::json::array();
    for (int i = 0; i < cost.size(); ++i) {
      for (int k : cost.neighbors_of(i)) {
        if (i < k) edges.push_back({i, k});
      }
    }
    j["neighbors"] = edges;
  }
  if (record.seed) j["seed"] = *record.seed;
  return j;
}

InstanceRecord instance_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    auto energies = j.at("energies").get<std::vector<double>>();
    if (static_cast<int>(energies.size()) != n) {
      throw ParameterError("instance: energies length does not match n");
    }
    const auto& nbr = j.at("neighbors");
    std::optional<std::uint64_t> seed;
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (nbr.is_string()) {
      const std::string kind = nbr.get<std::string>();
      if (kind == "open-chain") {
        return {make_chain_cost(std::move(energies), false), seed};
      }
      if (kind == "periodic-chain") {
        return {make_chain_cost(std::move(energies), true), seed};
      }
      throw ParameterError("instance: unknown neighbors kind '" + kind + "'");
    }
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n));
    for (const auto& edge : nbr) {
      if (!edge.is_array() || edge.size() != 2) {
        throw ParameterError("instance: edges must be [i, j] pairs");
      }
      const int a = edge.at(0).get<int>();
      const int b = edge.at(1).get<int>();
      if (a < 0 || a >= n || b < 0 || b >= n) {
        throw ParameterError("instance: edge endpoint out of range");
      }
      table[static_cast<std::size_t>(a)].push_back(b);
      table[static_cast<std::size_t>(b)].push_back(a);
    }
    return {CostFunction(std::move(energies), std::move(table)), seed};
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("instance: malformed JSON: ") + e.what());
  }
}

void save_instance(const std::filesystem::path& path,
                   const InstanceRecord& record) {
  write_text_file(path, instance_to_json(record).dump(2) + "\n");
}

InstanceRecord load_instance(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("instance: " + path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return buf.str();
}

}  // namespace qja
