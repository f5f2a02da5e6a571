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

#include <Eigen/Dense>

#include "qja/anneal.hpp"
#include "qja/model.hpp"
#include "qja/qmap.hpp"

namespace qja {

// State vector on system (x) ancillas, one qubit per weighting step.  Flat
// index state * 2^n_ancilla + bits, where bit a of `bits` is ancilla a.
// Starts as the uniform system state with every ancilla |0>.  Allocation is
// capped at 2^22 amplitudes; larger requests throw ResourceError with a
// pointer at the weight-method runner, which needs no ancillas at all.
class DilatedState {
 public:
  DilatedState(int n_basis, int n_ancilla);

  int n_basis() const { return n_basis_; }
  int n_ancilla() const { return n_ancilla_; }
  // Number of ancillas already consumed by weight rotations.
  int ancillas_used() const { return ancillas_used_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm_sq() const { return amplitudes_.squaredNorm(); }
  std::complex<double> amplitude(int state, std::uint64_t bits) const;

 private:
  friend void apply_weight_rotation(DilatedState&,
                                    const struct WeightDilationUnitary&);
  friend void apply_system_unitary(DilatedState&, const QuantumHamiltonian&,
                                   double dt);
  int n_basis_;
  int n_ancilla_;
  int ancillas_used_ = 0;
  Eigen::VectorXcd amplitudes_;
};

// One weighting step as a real orthogonal rotation on a fresh ancilla,
// controlled on the system state: for keep probability
// y(s) = e^{-delta_beta E(s)}, the ancilla block at state s is
//
//   [  sqrt(y)      sqrt(1 - y) ]
//   [ -sqrt(1 - y)  sqrt(y)     ]
//
// in the (|0>, |1>) basis.  The |0> branch carries exactly the half-weight
// e^{-delta_beta E(s) / 2} of the weight method.  Requires a cost function
// shifted to nonnegative energies so y <= 1.
struct WeightDilationUnitary {
  int n_basis = 0;
  int n_ancilla = 0;
  int ancilla_index = 0;
  Eigen::VectorXd sqrt_keep;
  Eigen::VectorXd sqrt_reject;

  // Dense matrix over the full dilated space, for verification at small
  // sizes (dimension capped at 4096).
  Eigen::MatrixXd to_matrix() const;
};

WeightDilationUnitary build_w_unit(const CostFunction& cost,
                                   double delta_beta, int ancilla_index,
                                   int n_ancilla);

// Applies the rotation; marks its ancilla consumed.
void apply_weight_rotation(DilatedState& state,
                           const WeightDilationUnitary& w);

// exp(-i dt H) on the system factor, identity on the ancillas.
void apply_system_unitary(DilatedState& state, const QuantumHamiltonian& h,
                          double dt);

// Unitary realisation of the weighted protocol: one fresh ancilla per step,
// rotation then system evolution at the advancing temperature.  The
// all-zero ancilla branch reproduces run_qja's final state exactly, with
// branch probability Z_shifted(beta_max) / n.
DilatedState run_qja_dilated(const CostFunction& cost,
                             const Schedule& schedule,
                             const AnnealOptions& options = {});

// Normalised system state conditional on reading the given ancilla bit
// pattern ("0"/"1" chars, pattern[a] is ancilla a), plus the probability of
// that reading.  Patterns with exactly zero probability are rejected, as is
// a branch whose probability underflowed below the smallest normal double.
struct PostSelection {
  WaveVector state;
  double probability = 0.0;
};

PostSelection postselect(const DilatedState& state,
                         const std::string& pattern);

// Probability of measuring each ancilla Hamming-weight class 0..n_ancilla;
// entries sum to 1.
std::vector<double> ancilla_weight_class_probabilities(
    const DilatedState& state);

// Step count needed to keep every single-step rejection probability at or
// below p_error_cap on the way to beta_final (default: inverse classical
// gap 1 / epsilon).  All on a shifted, nondegenerate cost function.
// expected_repetitions = (1 - p_error_cap)^{-n_steps} is the resulting
// worst-case postselection overhead; it is finite except at the degenerate
// boundary p_error_cap = 1.
struct CostEstimate {
  double p_error_cap = 0.0;
  std::int64_t n_steps = 0;
  double delta_beta = 0.0;
  double beta_final = 0.0;
  double max_energy = 0.0;
  double epsilon = 0.0;
  double expected_repetitions = 0.0;
};

CostEstimate steps_estimate(const CostFunction& cost, double p_error_cap,
                            std::optional<double> beta_final = {});

// Postselection overhead for a concrete (beta_final, n_steps) protocol:
// the worst-case formula (1 - p_error_step)^{-n_steps} with
// p_error_step = (beta_final / n_steps) max E, next to the exact expected
// repetition count n / Z(beta_final) from direct summation.
struct RepetitionEstimate {
  double from_error_formula = 0.0;
  double exact = 0.0;
  double p_error_step = 0.0;
};

RepetitionEstimate repetition_estimate(const CostFunction& cost,
                                       double beta_final,
                                       std::int64_t n_steps);

}  // namespace qja
