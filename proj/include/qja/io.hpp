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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qja/model.hpp"

namespace qja {

// Shortest decimal string that parses back to exactly the same double.
// All numeric file output goes through this, so emitted files are
// deterministic and round-trip bit for bit.
std::string format_double(double value);

// A cost function together with the seed it was generated from, if any.
struct InstanceRecord {
  CostFunction cost;
  std::optional<std::uint64_t> seed;
};

// JSON form:
//   {"n": <int>, "energies": [<double>...],
//    "neighbors": "open-chain" | "periodic-chain" | [[i, j], ...],
//    "seed": <uint64, optional>}
// Chain topologies are recognised and stored by name; anything else is
// stored as the explicit undirected edge list.  Energies are serialised
// with format_double, so a round trip reproduces them bit for bit.
nlohmann::json instance_to_json(const InstanceRecord& record);
InstanceRecord instance_from_json(const nlohmann::json& j);

void save_instance(const std::filesystem::path& path,
                   const InstanceRecord& record);
InstanceRecord load_instance(const std::filesystem::path& path);

// Writes text to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace qja
