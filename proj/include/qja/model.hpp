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
#include <optional>
#include <string>
#include <vector>

namespace qja {

// A classical cost function over a finite state space: one real energy per
// basis state, plus a symmetric neighbour relation listing the single moves
// a local Markov chain may propose.  The move graph must be connected so
// that every kernel built on it is irreducible.
class CostFunction {
 public:
  // Throws ParameterError unless energies are finite and nonempty, the
  // neighbour lists are symmetric, self-loop free, duplicate free and in
  // range, and the move graph is connected.
  CostFunction(std::vector<double> energies,
               std::vector<std::vector<int>> neighbors, std::string label = "");

  int size() const { return static_cast<int>(energies_.size()); }
  double energy(int state) const { return energies_[state]; }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<int>& neighbors_of(int state) const {
    return neighbors_[state];
  }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  int degree(int state) const {
    return static_cast<int>(neighbors_[state].size());
  }
  const std::string& label() const { return label_; }

  double min_energy() const { return min_energy_; }
  double max_energy() const { return max_energy_; }
  double energy_range() const { return max_energy_ - min_energy_; }

 private:
  std::vector<double> energies_;
  std::vector<std::vector<int>> neighbors_;
  std::string label_;
  double min_energy_ = 0.0;
  double max_energy_ = 0.0;
};

// Chain of the given energies with nearest-neighbour moves; `periodic` adds
// the wrap-around edge when the chain has more than two sites.
CostFunction make_chain_cost(std::vector<double> energies,
                             bool periodic = false, std::string label = "");

// Random 1-D potential: site energies E(i) = -V_i with V_i drawn i.i.d.
// uniform from [v_low, v_high), moves between adjacent sites.  The draw is
// a fixed function of `seed` alone (mt19937_64 plus the unit_double
// mapping), so instances are portable across platforms.
CostFunction build_random_potential(int n_sites, std::uint64_t seed,
                                    double v_low = 0.0, double v_high = 1.0,
                                    bool periodic = false);

// Linear inverse-temperature ramp beta(t) = beta_max * t / tau sampled on
// n_steps uniform time steps.  Grid values are computed as
// beta_max * (k / n_steps) in one rounding each, which makes the increments
// telescope to beta_max exactly in IEEE arithmetic.
//
// n_steps == 0 is allowed only for the empty protocol beta_max == 0.
class Schedule {
 public:
  Schedule(double beta_max, double tau, int n_steps);

  double beta_max() const { return beta_max_; }
  double tau() const { return tau_; }
  int n_steps() const { return n_steps_; }
  double delta_t() const { return delta_t_; }

  // Grid point k in [0, n_steps].
  double time_at(int k) const;
  double beta_at(int k) const;
  // Increment beta_at(k + 1) - beta_at(k), for k in [0, n_steps).
  double delta_beta(int k) const;
  // Ramp fraction t_k / tau in [0, 1].
  double interpolation_fraction(int k) const;

 private:
  double beta_max_;
  double tau_;
  int n_steps_;
  double delta_t_;
};

// Gibbs distribution of a cost function at fixed inverse temperature,
// evaluated with the max-shift trick so any beta * energy_range up to about
// 700 is representable.  `amplitudes` are the nonnegative square roots of
// `probabilities`; `log_z` is the log partition function including the
// shift.
struct GibbsState {
  double beta = 0.0;
  std::vector<double> probabilities;
  std::vector<double> amplitudes;
  double log_z = 0.0;
};

GibbsState gibbs_state(const CostFunction& cost, double beta);

// States within `tol` of the minimum energy, ascending, plus the classical
// gap epsilon: the smallest excitation energy above the ground band, absent
// when every state is in the band.
struct GroundStateInfo {
  std::vector<int> states;
  std::optional<double> epsilon;
};

GroundStateInfo ground_state_set(const CostFunction& cost, double tol = 0.0);

// Cost function with all energies shifted so the minimum is `margin` when
// the original minimum is negative (and merely raised by `margin`
// otherwise), together with the offset that was added.  Shifting leaves
// every Gibbs distribution unchanged.
struct ShiftedCost {
  CostFunction cost;
  double offset = 0.0;
};

ShiftedCost shift_nonnegative(const CostFunction& cost, double margin = 0.0);

}  // namespace qja
