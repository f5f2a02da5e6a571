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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qja/errors.hpp"
#include "qja/experiment.hpp"
#include "qja/io.hpp"
#include "qja/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "qjasim: weighted and plain quantum annealing on classical cost "
      "functions"};
  app.set_version_flag("--version", std::string(qja::kVersion));

  std::string method;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  app.add_option("method", method,
                 "one of: qa, qja, qa-interp, je-check, dilate-check, fig1, "
                 "spectrum")
      ->required();
  app.add_option("--config", config_path, "JSON experiment config")
      ->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string config_text = qja::read_text_file(config_path);
    const qja::ExperimentConfig config =
        qja::validate_config(config_text, method, seed, out_dir);
    const qja::FigureBundle bundle = qja::run_experiment(config);
    std::cout << "wrote " << bundle.directory.string() << " ("
              << bundle.config_hash << ")\n";
    for (const std::string& name : bundle.files) {
      std::cout << "  " << name << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qja::cli_exit_code(e);
  }
}
