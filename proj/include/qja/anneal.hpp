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

#include <vector>

#include <Eigen/Dense>

#include "qja/model.hpp"
#include "qja/qmap.hpp"

namespace qja {

// Dense state vector over the classical basis.  The squared norm is stored
// alongside the amplitudes and recomputed on construction, so it is always
// consistent; the weighting step makes it decay below 1 on purpose.
class WaveVector {
 public:
  explicit WaveVector(Eigen::VectorXcd amplitudes);

  int size() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm_sq() const { return norm_sq_; }

 private:
  Eigen::VectorXcd amplitudes_;
  double norm_sq_;
};

// Equal real amplitudes 1/sqrt(n): the Gibbs-amplitude state at beta = 0.
WaveVector uniform_initial_state(int n);

// exp(-i dt H) psi through the Hamiltonian's cached eigendecomposition.
WaveVector propagate_step(const WaveVector& psi,
                          const QuantumHamiltonian& hamiltonian, double dt);

// Multiplies each amplitude by e^{-delta_beta E(sigma) / 2}, the
// half-weight that carries Gibbs amplitudes at one temperature to the next.
WaveVector apply_work_weight(const WaveVector& psi, const CostFunction& cost,
                             double delta_beta);

// |<gibbs amplitudes | psi>|^2 / ||psi||^2; requires a nonzero state.
double gibbs_fidelity(const WaveVector& psi, const CostFunction& cost,
                      double beta);

// Probability mass of the normalised state on ground_state_set(cost, tol).
double ground_state_probability(const WaveVector& psi,
                                const CostFunction& cost, double tol = 0.0);

// Whether a step applies the work weight before or after the unitary.  The
// two orderings agree up to O(dt * delta_beta) commutator terms.
enum class StepOrder { weight_then_unitary, unitary_then_weight };

struct AnnealOptions {
  double ground_tol = 0.0;
  KernelKind kernel = KernelKind::metropolis;
  StepOrder order = StepOrder::weight_then_unitary;
};

// Observables recorded at one schedule grid point.  `p_ground_gibbs` is the
// ground-set mass of the Gibbs distribution at the same beta, the reference
// the weighted protocol is expected to track.
struct StepRecord {
  int step = 0;
  double t = 0.0;
  double beta = 0.0;
  double p_ground = 0.0;
  double p_ground_gibbs = 0.0;
  double fidelity = 0.0;
  double norm_sq = 0.0;
};

struct RunResult {
  std::vector<StepRecord> records;
  WaveVector final_state;
};

// Weighted protocol: from the uniform state, alternate the work weight for
// delta_beta_k with one unitary step under the mapped Hamiltonian at the
// *new* temperature.  The recorded state then matches the Gibbs reference
// at every grid point regardless of tau, and norm_sq drops as
// Z(beta)/n, which is the protocol's success probability.
RunResult run_qja(const CostFunction& cost, const Schedule& schedule,
                  const AnnealOptions& options = {});

// Plain annealing along the same grid: unitary steps only, under the mapped
// Hamiltonian at the advancing temperature.  Tracks the Gibbs reference
// only as well as adiabaticity allows, so the outcome depends on tau.
RunResult run_qa(const CostFunction& cost, const Schedule& schedule,
                 const AnnealOptions& options = {});

// Conventional interpolation variant: evolves under
// H(f) = f diag(E) + (1 - f) * transverse_strength * (I - |u><u|), where
// |u> is the uniform state and f ramps 0 -> 1 along the schedule.  Records
// use the schedule's beta grid for the Gibbs reference columns.
RunResult run_qa_interpolated(const CostFunction& cost,
                              const Schedule& schedule,
                              double transverse_strength,
                              const AnnealOptions& options = {});

}  // namespace qja
