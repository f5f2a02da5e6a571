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

#include "qja/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "qja/anneal.hpp"
#include "qja/dilation.hpp"
#include "qja/errors.hpp"
#include "qja/io.hpp"
#include "qja/qmap.hpp"
#include "qja/rng.hpp"
#include "qja/version.hpp"

namespace qja {

namespace fs = std::filesystem;
using nlohmann::json;

std::string method_name(Method method) {
  switch (method) {
    case Method::qa:
      return "qa";
    case Method::qja:
      return "qja";
    case Method::qa_interp:
      return "qa-interp";
    case Method::je_check:
      return "je-check";
    case Method::dilate_check:
      return "dilate-check";
    case Method::fig1:
      return "fig1";
    case Method::spectrum:
      return "spectrum";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  static const std::map<std::string, Method> table = {
      {"qa", Method::qa},
      {"qja", Method::qja},
      {"qa-interp", Method::qa_interp},
      {"je-check", Method::je_check},
      {"dilate-check", Method::dilate_check},
      {"fig1", Method::fig1},
      {"spectrum", Method::spectrum}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string render_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  out << "invalid configuration (" << issues.size() << " issue"
      << (issues.size() == 1 ? "" : "s") << "):";
  for (const ConfigIssue& issue : issues) {
    out << "\n  " << issue.path << ": " << issue.message;
  }
  return out.str();
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::string kernel_name(KernelKind kind) {
  return kind == KernelKind::metropolis ? "metropolis" : "heat-bath";
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(render_issues(issues)), issues_(std::move(issues)) {}

json ExperimentConfig::canonical() const {
  json j;
  j["method"] = method_name(method);
  j["kernel"] = kernel_name(kernel);
  json inst;
  if (instance.path) {
    inst["path"] = *instance.path;
  } else if (instance.energies) {
    inst["energies"] = *instance.energies;
    inst["neighbors"] = instance.neighbors;
  } else {
    inst["n_sites"] = instance.n_sites;
    inst["v_low"] = instance.v_low;
    inst["v_high"] = instance.v_high;
    inst["periodic"] = instance.periodic;
    if (instance.seed) inst["seed"] = *instance.seed;
  }
  j["instance"] = inst;
  json sched;
  sched["beta_max"] = beta_max;
  switch (method) {
    case Method::qa:
    case Method::qja:
      sched["tau"] = tau;
      sched["n_steps"] = n_steps;
      j["ground_tol"] = ground_tol;
      break;
    case Method::qa_interp:
      sched["tau"] = tau;
      sched["n_steps"] = n_steps;
      j["ground_tol"] = ground_tol;
      j["transverse_strength"] = transverse_strength;
      break;
    case Method::fig1:
      sched["tau_list"] = tau_list;
      sched["n_steps"] = n_steps;
      j["ground_tol"] = ground_tol;
      break;
    case Method::je_check:
      sched["n_steps"] = n_steps;
      j["samples"] = samples;
      j["repetitions"] = repetitions;
      break;
    case Method::dilate_check:
      sched["tau"] = tau;
      sched["n_steps"] = n_steps;
      j["p_error_cap"] = p_error_cap;
      break;
    case Method::spectrum:
      j["grid"] = grid;
      break;
  }
  j["schedule"] = sched;
  return j;
}

std::string ExperimentConfig::config_hash() const {
  return "fnv1a64:" + hex16(fnv1a64(canonical().dump()));
}

namespace {

// Keys understood anywhere in a config, for distinguishing "unknown" from
// "inapplicable" in error messages.
const std::set<std::string>& top_level_universe() {
  static const std::set<std::string> keys = {
      "method",      "seed",   "output_dir",  "instance",
      "schedule",    "kernel", "samples",     "repetitions",
      "p_error_cap", "grid",   "ground_tol",  "transverse_strength"};
  return keys;
}

std::set<std::string> allowed_top_level(Method method) {
  std::set<std::string> keys = {"method",   "seed",     "output_dir",
                                "instance", "schedule", "kernel"};
  switch (method) {
    case Method::qa:
    case Method::qja:
      keys.insert("ground_tol");
      break;
    case Method::qa_interp:
      keys.insert("ground_tol");
      keys.insert("transverse_strength");
      break;
    case Method::fig1:
      keys.insert("ground_tol");
      break;
    case Method::je_check:
      keys.insert("samples");
      keys.insert("repetitions");
      break;
    case Method::dilate_check:
      keys.insert("p_error_cap");
      break;
    case Method::spectrum:
      keys.insert("grid");
      break;
  }
  return keys;
}

std::set<std::string> allowed_schedule(Method method) {
  std::set<std::string> keys = {"beta_max"};
  switch (method) {
    case Method::qa:
    case Method::qja:
    case Method::qa_interp:
    case Method::dilate_check:
      keys.insert("tau");
      keys.insert("n_steps");
      break;
    case Method::fig1:
      keys.insert("tau_list");
      keys.insert("n_steps");
      break;
    case Method::je_check:
      keys.insert("n_steps");
      break;
    case Method::spectrum:
      break;
  }
  return keys;
}

void apply_method_defaults(ExperimentConfig& cfg) {
  switch (cfg.method) {
    case Method::qa:
    case Method::qja:
    case Method::qa_interp:
      break;
    case Method::fig1:
      cfg.tau_list = {1.0, 10.0, 100.0};
      break;
    case Method::je_check:
      cfg.beta_max = 2.0;
      cfg.n_steps = 10;
      cfg.instance.n_sites = 4;
      break;
    case Method::dilate_check:
      cfg.beta_max = 1.0;
      cfg.tau = 1.0;
      cfg.n_steps = 12;
      cfg.instance.n_sites = 4;
      break;
    case Method::spectrum:
      break;
  }
}

class Validator {
 public:
  explicit Validator(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void add(const std::string& path, const std::string& message) {
    issues_.push_back({path, message});
  }

  std::optional<double> number(const json& obj, const std::string& path,
                               const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      add(path + key, "must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& path,
                                      const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      add(path + key, "must be an integer");
      return std::nullopt;
    }
    return v.get<std::int64_t>();
  }

  std::optional<std::uint64_t> unsigned64(const json& obj,
                                          const std::string& path,
                                          const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    add(path + key, "must be a nonnegative integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const json& obj, const std::string& path,
                                    const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      add(path + key, "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path,
                              const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      add(path + key, "must be a boolean");
      return std::nullopt;
    }
    return v.get<bool>();
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

void check_unknown_keys(const json& obj, const std::string& path,
                        const std::set<std::string>& allowed,
                        const std::set<std::string>& universe,
                        const std::string& method_token,
                        std::vector<ConfigIssue>& issues) {
  for (const auto& item : obj.items()) {
    if (allowed.count(item.key())) continue;
    if (universe.count(item.key())) {
      issues.push_back({path + item.key(),
                        "not applicable to method '" + method_token + "'"});
    } else {
      issues.push_back({path + item.key(), "unknown key"});
    }
  }
}

}  // namespace

ExperimentConfig validate_config(const std::string& config_text,
                                 const std::string& method_token,
                                 std::optional<std::uint64_t> seed_override,
                                 std::optional<std::string> output_override) {
  std::vector<ConfigIssue> issues;
  Validator v(issues);

  const std::optional<Method> method = parse_method(method_token);
  if (!method) {
    throw ConfigError(std::vector<ConfigIssue>{
        {"method", "unknown method '" + method_token +
                       "'; valid: qa, qja, qa-interp, je-check, "
                       "dilate-check, fig1, spectrum"}});
  }

  json root;
  try {
    root = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::vector<ConfigIssue>{
        {"$", std::string("not valid JSON: ") + e.what()}});
  }
  if (!root.is_object()) {
    throw ConfigError(
        std::vector<ConfigIssue>{{"$", "top level must be a JSON object"}});
  }

  ExperimentConfig cfg;
  cfg.method = *method;
  apply_method_defaults(cfg);

  check_unknown_keys(root, "", allowed_top_level(*method),
                     top_level_universe(), method_token, issues);

  if (auto name = v.string(root, "", "method")) {
    if (*name != method_token) {
      v.add("method", "config says '" + *name + "' but the command line says '" +
                          method_token + "'");
    }
  }
  if (auto seed = v.unsigned64(root, "", "seed")) cfg.seed = *seed;
  if (auto out = v.string(root, "", "output_dir")) {
    if (out->empty()) {
      v.add("output_dir", "must be a nonempty path");
    } else {
      cfg.output_dir = *out;
    }
  }
  if (auto kernel = v.string(root, "", "kernel")) {
    if (*kernel == "metropolis") {
      cfg.kernel = KernelKind::metropolis;
    } else if (*kernel == "heat-bath") {
      cfg.kernel = KernelKind::heat_bath;
    } else {
      v.add("kernel", "must be 'metropolis' or 'heat-bath'");
    }
  }
  if (auto tol = v.number(root, "", "ground_tol")) {
    if (!(*tol >= 0.0) || !std::isfinite(*tol)) {
      v.add("ground_tol", "must be a finite nonnegative number");
    } else {
      cfg.ground_tol = *tol;
    }
  }
  if (auto samples = v.integer(root, "", "samples")) {
    if (*samples < 1 || *samples > 1000000000) {
      v.add("samples", "must be between 1 and 1e9");
    } else {
      cfg.samples = *samples;
    }
  }
  if (auto reps = v.integer(root, "", "repetitions")) {
    if (*reps < 1 || *reps > 100000) {
      v.add("repetitions", "must be between 1 and 1e5");
    } else {
      cfg.repetitions = *reps;
    }
  }
  if (auto cap = v.number(root, "", "p_error_cap")) {
    if (!(*cap > 0.0) || !(*cap < 1.0)) {
      v.add("p_error_cap", "must lie strictly between 0 and 1");
    } else {
      cfg.p_error_cap = *cap;
    }
  }
  if (auto strength = v.number(root, "", "transverse_strength")) {
    if (!(*strength > 0.0) || !std::isfinite(*strength)) {
      v.add("transverse_strength", "must be a finite positive number");
    } else {
      cfg.transverse_strength = *strength;
    }
  }
  if (auto grid = v.integer(root, "", "grid")) {
    if (*grid < 2 || *grid > 1000000) {
      v.add("grid", "must be between 2 and 1e6");
    } else {
      cfg.grid = *grid;
    }
  }

  if (root.contains("schedule")) {
    const json& sched = root.at("schedule");
    if (!sched.is_object()) {
      v.add("schedule", "must be an object");
    } else {
      check_unknown_keys(sched, "schedule.", allowed_schedule(*method),
                         {"beta_max", "tau", "tau_list", "n_steps"},
                         method_token, issues);
      if (auto beta = v.number(sched, "schedule.", "beta_max")) {
        if (!(*beta >= 0.0) || !std::isfinite(*beta)) {
          v.add("schedule.beta_max", "must be a finite nonnegative number");
        } else {
          cfg.beta_max = *beta;
        }
      }
      if (auto tau = v.number(sched, "schedule.", "tau")) {
        if (!(*tau > 0.0) || !std::isfinite(*tau)) {
          v.add("schedule.tau", "must be a finite positive number");
        } else {
          cfg.tau = *tau;
        }
      }
      if (sched.contains("tau_list")) {
        const json& list = sched.at("tau_list");
        bool ok = list.is_array() && !list.empty();
        std::vector<double> taus;
        if (ok) {
          for (const json& item : list) {
            if (!item.is_number() || !(item.get<double>() > 0.0) ||
                !std::isfinite(item.get<double>())) {
              ok = false;
              break;
            }
            taus.push_back(item.get<double>());
          }
        }
        if (ok) {
          std::set<double> unique(taus.begin(), taus.end());
          if (unique.size() != taus.size()) {
            v.add("schedule.tau_list", "values must be distinct");
            ok = false;
          }
        }
        if (!ok) {
          if (issues.empty() || issues.back().path != "schedule.tau_list") {
            v.add("schedule.tau_list",
                  "must be a nonempty array of positive numbers");
          }
        } else {
          cfg.tau_list = taus;
        }
      }
      if (auto steps = v.integer(sched, "schedule.", "n_steps")) {
        const bool auto_allowed =
            *method == Method::qa || *method == Method::qja ||
            *method == Method::qa_interp || *method == Method::fig1;
        const std::int64_t lo = auto_allowed ? 0 : 1;
        if (*steps < lo || *steps > 10000000) {
          v.add("schedule.n_steps",
                auto_allowed
                    ? "must be between 0 (automatic) and 1e7"
                    : "must be between 1 and 1e7");
        } else {
          cfg.n_steps = *steps;
        }
      }
    }
  }

  if (root.contains("instance")) {
    const json& inst = root.at("instance");
    if (!inst.is_object()) {
      v.add("instance", "must be an object");
    } else {
      static const std::set<std::string> inst_keys = {
          "n_sites", "seed",      "v_low", "v_high",
          "periodic", "energies", "neighbors", "path"};
      check_unknown_keys(inst, "instance.", inst_keys, inst_keys,
                         method_token, issues);
      const bool has_path = inst.contains("path");
      const bool has_energies = inst.contains("energies");
      const bool has_generated =
          inst.contains("n_sites") || inst.contains("v_low") ||
          inst.contains("v_high") || inst.contains("periodic") ||
          inst.contains("seed");
      if ((has_path && has_energies) || (has_path && has_generated)) {
        v.add("instance.path",
              "cannot be combined with inline or generated instance keys");
      }
      if (has_energies && (inst.contains("n_sites") ||
                           inst.contains("v_low") || inst.contains("v_high"))) {
        v.add("instance.energies",
              "cannot be combined with random-potential keys");
      }
      if (auto path = v.string(inst, "instance.", "path")) {
        if (path->empty()) {
          v.add("instance.path", "must be a nonempty path");
        } else {
          cfg.instance.path = *path;
        }
      }
      if (has_energies) {
        const json& energies = inst.at("energies");
        bool ok = energies.is_array() && !energies.empty();
        std::vector<double> values;
        if (ok) {
          for (const json& item : energies) {
            if (!item.is_number()) {
              ok = false;
              break;
            }
            values.push_back(item.get<double>());
          }
        }
        if (!ok) {
          v.add("instance.energies", "must be a nonempty array of numbers");
        } else {
          cfg.instance.energies = std::move(values);
        }
      }
      if (auto kind = v.string(inst, "instance.", "neighbors")) {
        if (*kind != "open-chain" && *kind != "periodic-chain") {
          v.add("instance.neighbors",
                "must be 'open-chain' or 'periodic-chain'");
        } else {
          cfg.instance.neighbors = *kind;
        }
      }
      if (auto n = v.integer(inst, "instance.", "n_sites")) {
        if (*n < 2 || *n > 4096) {
          v.add("instance.n_sites", "must be between 2 and 4096");
        } else {
          cfg.instance.n_sites = static_cast<int>(*n);
        }
      }
      if (auto seed = v.unsigned64(inst, "instance.", "seed")) {
        cfg.instance.seed = *seed;
      }
      if (auto low = v.number(inst, "instance.", "v_low")) {
        if (!std::isfinite(*low)) {
          v.add("instance.v_low", "must be finite");
        } else {
          cfg.instance.v_low = *low;
        }
      }
      if (auto high = v.number(inst, "instance.", "v_high")) {
        if (!std::isfinite(*high)) {
          v.add("instance.v_high", "must be finite");
        } else {
          cfg.instance.v_high = *high;
        }
      }
      if (auto periodic = v.boolean(inst, "instance.", "periodic")) {
        cfg.instance.periodic = *periodic;
      }
      if (!cfg.instance.energies && !cfg.instance.path &&
          !(cfg.instance.v_low < cfg.instance.v_high)) {
        v.add("instance.v_low", "must be strictly below v_high");
      }
    }
  }

  if (seed_override) cfg.seed = *seed_override;
  if (output_override) {
    if (output_override->empty()) {
      v.add("output_dir", "override must be a nonempty path");
    } else {
      cfg.output_dir = *output_override;
    }
  }
  if (cfg.output_dir.empty()) {
    cfg.output_dir = fs::path("qjasim_out") /
                     (method_name(cfg.method) + "_" + std::to_string(cfg.seed));
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

namespace {

InstanceRecord realize_instance(const ExperimentConfig& cfg) {
  const InstanceSpec& spec = cfg.instance;
  if (spec.path) return load_instance(*spec.path);
  if (spec.energies) {
    return {make_chain_cost(*spec.energies, spec.neighbors == "periodic-chain",
                            "explicit"),
            std::nullopt};
  }
  const std::uint64_t instance_seed = spec.seed.value_or(cfg.seed);
  return {build_random_potential(spec.n_sites, instance_seed, spec.v_low,
                                 spec.v_high, spec.periodic),
          instance_seed};
}

// Resolution policy for automatic step counts: at least 1000 steps, and
// enough that each step moves beta * energy range by at most 0.01.
std::int64_t resolve_steps(const ExperimentConfig& cfg,
                           const CostFunction& cost) {
  if (cfg.n_steps > 0) return cfg.n_steps;
  const std::int64_t by_resolution = static_cast<std::int64_t>(
      std::ceil(cfg.beta_max * cost.energy_range() / 0.01));
  const std::int64_t steps = std::max<std::int64_t>(1000, by_resolution);
  if (steps > 10000000) {
    throw ResourceError("resolved step count exceeds 1e7; set n_steps");
  }
  return steps;
}

std::string run_csv(const RunResult& result) {
  std::string out = "step,t,beta,p_ground,p_ground_gibbs,fidelity,norm_sq\n";
  for (const StepRecord& rec : result.records) {
    out += std::to_string(rec.step);
    out += ',';
    out += format_double(rec.t);
    out += ',';
    out += format_double(rec.beta);
    out += ',';
    out += format_double(rec.p_ground);
    out += ',';
    out += format_double(rec.p_ground_gibbs);
    out += ',';
    out += format_double(rec.fidelity);
    out += ',';
    out += format_double(rec.norm_sq);
    out += '\n';
  }
  return out;
}

std::string run_file_name(const std::string& method_token, double tau,
                          std::uint64_t seed) {
  return method_token + "_" + format_double(tau) + "_" +
         std::to_string(seed) + ".csv";
}

RunResult run_protocol(Method method, const CostFunction& cost,
                       const Schedule& schedule,
                       const ExperimentConfig& cfg) {
  AnnealOptions options;
  options.ground_tol = cfg.ground_tol;
  options.kernel = cfg.kernel;
  switch (method) {
    case Method::qa:
      return run_qa(cost, schedule, options);
    case Method::qja:
      return run_qja(cost, schedule, options);
    case Method::qa_interp:
      return run_qa_interpolated(cost, schedule, cfg.transverse_strength,
                                 options);
    default:
      throw ParameterError("not a protocol method");
  }
}

std::map<std::string, std::string> make_protocol_outputs(
    const ExperimentConfig& cfg, const CostFunction& cost) {
  const std::int64_t n_steps = resolve_steps(cfg, cost);
  const Schedule schedule(cfg.beta_max, cfg.tau, static_cast<int>(n_steps));
  const RunResult result = run_protocol(cfg.method, cost, schedule, cfg);
  std::map<std::string, std::string> files;
  files[run_file_name(method_name(cfg.method), cfg.tau, cfg.seed)] =
      run_csv(result);
  return files;
}

std::map<std::string, std::string> make_fig1_outputs(
    const ExperimentConfig& cfg, const CostFunction& cost) {
  const std::int64_t n_steps = resolve_steps(cfg, cost);
  struct Job {
    std::string name;
    Method method;
    double tau;
  };
  std::vector<Job> jobs;
  for (double tau : cfg.tau_list) {
    jobs.push_back({run_file_name("qa", tau, cfg.seed), Method::qa, tau});
    jobs.push_back({run_file_name("qja", tau, cfg.seed), Method::qja, tau});
  }
  // Runs are independent; compute them concurrently, collect in job order.
  std::vector<std::future<std::string>> futures;
  futures.reserve(jobs.size());
  for (const Job& job : jobs) {
    futures.push_back(std::async(std::launch::async, [&cfg, &cost, &job,
                                                      n_steps] {
      const Schedule schedule(cfg.beta_max, job.tau,
                              static_cast<int>(n_steps));
      return run_csv(run_protocol(job.method, cost, schedule, cfg));
    }));
  }
  std::map<std::string, std::string> files;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    files[jobs[i].name] = futures[i].get();
  }
  return files;
}

std::map<std::string, std::string> make_je_outputs(
    const ExperimentConfig& cfg, const CostFunction& cost) {
  const Schedule schedule(cfg.beta_max, 1.0, static_cast<int>(cfg.n_steps));
  const double exact =
      exact_partition_ratio(cost, schedule.beta_at(0), cfg.beta_max);
  std::string csv = "sample_count,mean,std_error,exact_ratio,z_score\n";
  for (std::int64_t rep = 0; rep < cfg.repetitions; ++rep) {
    const JarzynskiEstimate est = jarzynski_estimate(
        cost, schedule, cfg.samples,
        stream_seed(cfg.seed, static_cast<std::uint64_t>(rep)), cfg.kernel);
    double z = 0.0;
    if (est.std_error > 0.0) {
      z = (est.mean - exact) / est.std_error;
    } else if (est.mean != exact) {
      z = std::numeric_limits<double>::infinity();
    }
    csv += std::to_string(est.n_samples);
    csv += ',';
    csv += format_double(est.mean);
    csv += ',';
    csv += format_double(est.std_error);
    csv += ',';
    csv += format_double(exact);
    csv += ',';
    csv += format_double(z);
    csv += '\n';
  }
  std::map<std::string, std::string> files;
  files["je_" + std::to_string(cfg.seed) + ".csv"] = std::move(csv);
  return files;
}

std::map<std::string, std::string> make_spectrum_outputs(
    const ExperimentConfig& cfg, const CostFunction& cost) {
  std::string csv = "beta,lambda_0,lambda_1,gap\n";
  for (std::int64_t i = 0; i < cfg.grid; ++i) {
    const double beta =
        cfg.beta_max * (static_cast<double>(i) /
                        static_cast<double>(cfg.grid - 1));
    const QuantumHamiltonian h = build_hq(cost, beta, cfg.kernel);
    const SpectralDecomposition& s = h.spectrum();
    if (h.size() < 2) {
      throw ParameterError("spectrum scan needs at least two states");
    }
    csv += format_double(beta);
    csv += ',';
    csv += format_double(s.eigenvalues(0));
    csv += ',';
    csv += format_double(s.eigenvalues(1));
    csv += ',';
    csv += format_double(s.eigenvalues(1) - s.eigenvalues(0));
    csv += '\n';
  }
  std::map<std::string, std::string> files;
  files["spectrum_" + std::to_string(cfg.seed) + ".csv"] = std::move(csv);
  return files;
}

std::map<std::string, std::string> make_dilation_outputs(
    const ExperimentConfig& cfg, const CostFunction& cost) {
  const ShiftedCost shifted = shift_nonnegative(cost);
  const Schedule schedule(cfg.beta_max, cfg.tau, static_cast<int>(cfg.n_steps));
  AnnealOptions options;
  options.kernel = cfg.kernel;
  const DilatedState state = run_qja_dilated(shifted.cost, schedule, options);
  const std::vector<double> classes =
      ancilla_weight_class_probabilities(state);

  std::string csv = "n_ancilla,pattern_weight_class,total_probability\n";
  for (std::size_t weight = 0; weight < classes.size(); ++weight) {
    csv += std::to_string(state.n_ancilla());
    csv += ',';
    csv += std::to_string(weight);
    csv += ',';
    csv += format_double(classes[weight]);
    csv += '\n';
  }

  const CostEstimate est = steps_estimate(shifted.cost, cfg.p_error_cap);
  const RepetitionEstimate reps =
      repetition_estimate(shifted.cost, est.beta_final, est.n_steps);
  json estimate;
  estimate["p_error_cap"] = est.p_error_cap;
  estimate["n_steps"] = est.n_steps;
  estimate["expected_repetitions"] = est.expected_repetitions;
  estimate["exact_expected_repetitions"] = reps.exact;

  std::map<std::string, std::string> files;
  files["dilation_" + std::to_string(cfg.seed) + ".csv"] = std::move(csv);
  files["cost_estimate_" + std::to_string(cfg.seed) + ".json"] =
      estimate.dump(2) + "\n";
  return files;
}

}  // namespace

FigureBundle run_experiment(const ExperimentConfig& cfg) {
  const InstanceRecord instance = realize_instance(cfg);

  std::map<std::string, std::string> files;
  switch (cfg.method) {
    case Method::qa:
    case Method::qja:
    case Method::qa_interp:
      files = make_protocol_outputs(cfg, instance.cost);
      break;
    case Method::fig1:
      files = make_fig1_outputs(cfg, instance.cost);
      break;
    case Method::je_check:
      files = make_je_outputs(cfg, instance.cost);
      break;
    case Method::dilate_check:
      files = make_dilation_outputs(cfg, instance.cost);
      break;
    case Method::spectrum:
      files = make_spectrum_outputs(cfg, instance.cost);
      break;
  }
  files["instance.json"] = instance_to_json(instance).dump(2) + "\n";

  const fs::path target = cfg.output_dir;
  if (fs::exists(target)) {
    throw IoError("output directory already exists: " + target.string());
  }
  fs::path stage = target;
  stage += ".staging-" + std::to_string(getpid());
  std::error_code ec;
  fs::remove_all(stage, ec);
  fs::create_directories(stage);

  json manifest;
  manifest["config_hash"] = cfg.config_hash();
  manifest["seed"] = cfg.seed;
  manifest["version"] = std::string(kVersion);
  json file_list = json::array();
  for (const auto& [name, content] : files) {
    write_text_file(stage / name, content);
    file_list.push_back({{"name", name},
                         {"bytes", content.size()},
                         {"fnv1a64", hex16(fnv1a64(content))}});
  }
  manifest["files"] = file_list;
  write_text_file(stage / "manifest.json", manifest.dump(2) + "\n");
  fs::rename(stage, target);

  FigureBundle bundle;
  bundle.directory = target;
  bundle.config_hash = cfg.config_hash();
  for (const auto& [name, content] : files) bundle.files.push_back(name);
  bundle.files.push_back("manifest.json");
  std::sort(bundle.files.begin(), bundle.files.end());
  return bundle;
}

int cli_exit_code(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) != nullptr ||
      dynamic_cast<const ParameterError*>(&error) != nullptr ||
      dynamic_cast<const IoError*>(&error) != nullptr) {
    return 2;
  }
  if (dynamic_cast<const NumericRangeError*>(&error) != nullptr ||
      dynamic_cast<const ResourceError*>(&error) != nullptr) {
    return 3;
  }
  return 1;
}

}  // namespace qja
