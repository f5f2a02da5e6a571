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
#include <vector>

#include <json.hpp>

#include "qja/model.hpp"
#include "qja/stochastic.hpp"

namespace qja {

enum class Method { qa, qja, qa_interp, je_check, dilate_check, fig1, spectrum };

std::string method_name(Method method);
std::optional<Method> parse_method(const std::string& name);

// One problem found while validating a config, addressed by its JSON path.
struct ConfigIssue {
  std::string path;
  std::string message;
};

// Carries every issue found, not just the first; what() renders them all.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// How the problem instance is obtained: a generated random potential
// (default), explicit energies with a named chain topology, or a JSON
// instance file.
struct InstanceSpec {
  int n_sites = 50;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
  double v_low = 0.0;
  double v_high = 1.0;
  bool periodic = false;
  std::optional<std::vector<double>> energies;
  std::string neighbors = "open-chain";
  std::optional<std::string> path;
};

// Fully resolved experiment description: defaults applied, command-line
// overrides folded in, every field range-checked.  Construct only through
// validate_config.
struct ExperimentConfig {
  Method method = Method::qja;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir;
  InstanceSpec instance;
  double beta_max = 100.0;
  double tau = 10.0;
  std::vector<double> tau_list;
  std::int64_t n_steps = 0;  // 0: resolved from the resolution policy
  KernelKind kernel = KernelKind::metropolis;
  std::int64_t samples = 100000;
  std::int64_t repetitions = 100;
  double p_error_cap = 0.01;
  double transverse_strength = 1.0;
  std::int64_t grid = 101;
  double ground_tol = 0.0;

  // Canonical JSON of every field that defines the experiment's outputs
  // (output_dir and seed are reported separately in the manifest).
  nlohmann::json canonical() const;
  // "fnv1a64:" + 16 hex digits over the canonical JSON text.
  std::string config_hash() const;
};

// Parses and validates a JSON config against the schema for `method_token`
// (the command-line method name).  Optional overrides replace the config's
// seed and output directory.  Throws ConfigError listing every problem.
ExperimentConfig validate_config(
    const std::string& config_text, const std::string& method_token,
    std::optional<std::uint64_t> seed_override = {},
    std::optional<std::string> output_override = {});

// A completed output bundle: the directory, its file names sorted, and the
// config hash recorded in manifest.json.  Bundles are written to a staging
// directory and renamed into place, so a bundle either exists completely
// or not at all.
struct FigureBundle {
  std::filesystem::path directory;
  std::vector<std::string> files;
  std::string config_hash;
};

FigureBundle run_experiment(const ExperimentConfig& config);

// Process exit code for an error escaping the command-line driver:
// 2 for configuration and input problems, 3 for numeric range and resource
// exhaustion, 1 otherwise.
int cli_exit_code(const std::exception& error);

}  // namespace qja
