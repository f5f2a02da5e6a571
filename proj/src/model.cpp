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

#include "qja/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "qja/errors.hpp"
#include "qja/rng.hpp"

namespace qja {

namespace {

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw ParameterError(std::string(what) + " must be finite");
  }
}

}  // namespace

CostFunction::CostFunction(std::vector<double> energies,
                           std::vector<std::vector<int>> neighbors,
                           std::string label)
    : energies_(std::move(energies)),
      neighbors_(std::move(neighbors)),
      label_(std::move(label)) {
  const int n = static_cast<int>(energies_.size());
  if (n < 1) throw ParameterError("cost function needs at least one state");
  for (double e : energies_) check_finite(e, "energy");
  if (static_cast<int>(neighbors_.size()) != n) {
    throw ParameterError("neighbour table size does not match state count");
  }
  for (int i = 0; i < n; ++i) {
    std::set<int> seen;
    for (int j : neighbors_[i]) {
      if (j < 0 || j >= n) throw ParameterError("neighbour index out of range");
      if (j == i) throw ParameterError("self-loop in neighbour table");
      if (!seen.insert(j).second) {
        throw ParameterError("duplicate neighbour entry");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j : neighbors_[i]) {
      const auto& back = neighbors_[j];
      if (std::find(back.begin(), back.end(), i) == back.end()) {
        throw ParameterError("neighbour relation is not symmetric");
      }
    }
  }
  if (n > 1) {
    // Breadth-first reachability from state 0.
    std::vector<char> seen(n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int j : neighbors_[queue[head]]) {
        if (!seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw ParameterError("move graph is not connected");
    }
  }
  auto [lo, hi] = std::minmax_element(energies_.begin(), energies_.end());
  min_energy_ = *lo;
  max_energy_ = *hi;
}

CostFunction make_chain_cost(std::vector<double> energies, bool periodic,
                             std::string label) {
  const int n = static_cast<int>(energies.size());
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i + 1 < n; ++i) {
    nbr[i].push_back(i + 1);
    nbr[i + 1].push_back(i);
  }
  if (periodic && n > 2) {
    nbr[0].push_back(n - 1);
    nbr[n - 1].push_back(0);
  }
  return CostFunction(std::move(energies), std::move(nbr), std::move(label));
}

CostFunction build_random_potential(int n_sites, std::uint64_t seed,
                                    double v_low, double v_high,
                                    bool periodic) {
  if (n_sites < 2) throw ParameterError("random potential needs >= 2 sites");
  check_finite(v_low, "v_low");
  check_finite(v_high, "v_high");
  if (!(v_low < v_high)) {
    throw ParameterError("random potential needs v_low < v_high");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> energies(static_cast<std::size_t>(n_sites));
  for (double& e : energies) {
    e = -(v_low + (v_high - v_low) * unit_double(rng()));
  }
  std::ostringstream label;
  label << "random-potential(n=" << n_sites << ",seed=" << seed << ")";
  return make_chain_cost(std::move(energies), periodic, label.str());
}

Schedule::Schedule(double beta_max, double tau, int n_steps)
    : beta_max_(beta_max), tau_(tau), n_steps_(n_steps) {
  check_finite(beta_max, "beta_max");
  check_finite(tau, "tau");
  if (beta_max < 0) throw ParameterError("beta_max must be nonnegative");
  if (!(tau > 0)) throw ParameterError("tau must be positive");
  if (n_steps < 0) throw ParameterError("n_steps must be nonnegative");
  if (n_steps == 0 && beta_max != 0) {
    throw ParameterError("n_steps == 0 is only valid for beta_max == 0");
  }
  delta_t_ = n_steps > 0 ? tau / n_steps : 0.0;
}

double Schedule::time_at(int k) const {
  if (n_steps_ == 0) return k == 0 ? 0.0 : tau_;
  return tau_ * (static_cast<double>(k) / n_steps_);
}

double Schedule::beta_at(int k) const {
  if (n_steps_ == 0) return 0.0;
  return beta_max_ * (static_cast<double>(k) / n_steps_);
}

double Schedule::delta_beta(int k) const { return beta_at(k + 1) - beta_at(k); }

double Schedule::interpolation_fraction(int k) const {
  if (n_steps_ == 0) return k == 0 ? 0.0 : 1.0;
  return static_cast<double>(k) / n_steps_;
}

GibbsState gibbs_state(const CostFunction& cost, double beta) {
  check_finite(beta, "beta");
  if (beta < 0) throw ParameterError("beta must be nonnegative");
  const int n = cost.size();
  const double m = cost.min_energy();
  GibbsState out;
  out.beta = beta;
  out.probabilities.resize(static_cast<std::size_t>(n));
  out.amplitudes.resize(static_cast<std::size_t>(n));
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = std::exp(-beta * (cost.energy(i) - m));
    out.probabilities[static_cast<std::size_t>(i)] = w;
    z += w;
  }
  const double root_z = std::sqrt(z);
  for (int i = 0; i < n; ++i) {
    const double w = out.probabilities[static_cast<std::size_t>(i)];
    out.probabilities[static_cast<std::size_t>(i)] = w / z;
    out.amplitudes[static_cast<std::size_t>(i)] = std::sqrt(w) / root_z;
  }
  out.log_z = std::log(z) - beta * m;
  return out;
}

GroundStateInfo ground_state_set(const CostFunction& cost, double tol) {
  check_finite(tol, "tol");
  if (tol < 0) throw ParameterError("tol must be nonnegative");
  const double m = cost.min_energy();
  GroundStateInfo out;
  double eps = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cost.size(); ++i) {
    const double excess = cost.energy(i) - m;
    if (excess <= tol) {
      out.states.push_back(i);
    } else {
      eps = std::min(eps, excess);
    }
  }
  if (std::isfinite(eps)) out.epsilon = eps;
  return out;
}

ShiftedCost shift_nonnegative(const CostFunction& cost, double margin) {
  check_finite(margin, "margin");
  if (margin < 0) throw ParameterError("margin must be nonnegative");
  const double offset = std::max(0.0, -cost.min_energy()) + margin;
  std::vector<double> energies = cost.energies();
  for (double& e : energies) e += offset;
  return ShiftedCost{
      CostFunction(std::move(energies), cost.neighbors(), cost.label()),
      offset};
}

}  // namespace qja
