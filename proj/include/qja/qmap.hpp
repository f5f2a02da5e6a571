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

#include <memory>

#include <Eigen/Dense>

#include "qja/model.hpp"
#include "qja/stochastic.hpp"

namespace qja {

struct SpectralDecomposition {
  // Ascending eigenvalues; eigenvectors as matching orthonormal columns.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

// Symmetric Hamiltonian obtained from a detailed-balanced kernel by the
// similarity transform H = I - D M D^{-1} with D = diag(e^{beta E / 2}).
// By construction its lowest eigenvalue is 0 with the Gibbs-amplitude
// vector as ground state, and the rest of the spectrum is nonnegative.
//
// The spectral decomposition is computed on first use and cached; the cache
// is shared across copies and safe to fill from concurrent threads.
class QuantumHamiltonian {
 public:
  // `symmetry_residual` is the largest asymmetry |H - H^T| observed before
  // the constructor's symmetrisation; builders pass what they measured.
  QuantumHamiltonian(Eigen::MatrixXd matrix, double beta,
                     double symmetry_residual = 0.0);

  int size() const { return static_cast<int>(matrix_.rows()); }
  double beta() const { return beta_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double symmetry_residual() const { return symmetry_residual_; }

  const SpectralDecomposition& spectrum() const;
  // lambda_1 - lambda_0; requires at least two states.
  double gap() const;

 private:
  struct Cache;
  Eigen::MatrixXd matrix_;
  double beta_;
  double symmetry_residual_;
  std::shared_ptr<Cache> cache_;
};

// Builds the mapped Hamiltonian for the given cost function at `beta` from
// the chosen kernel: H(t, s) = delta_{ts} - e^{beta E(t) / 2} M(t, s)
// e^{-beta E(s) / 2}, evaluated entrywise so only the bounded combination
// M(t, s) e^{beta (E(t) - E(s)) / 2} is ever formed.
QuantumHamiltonian build_hq(const CostFunction& cost, double beta,
                            KernelKind kind = KernelKind::metropolis);

// Residuals certifying that the Gibbs-amplitude vector is the ground state:
// energy_residual = ||H a||_2 and overlap_deficit = 1 - <a, v_0>^2 for the
// computed lowest eigenvector v_0.
struct GroundStateCheck {
  double energy_residual = 0.0;
  double overlap_deficit = 0.0;
};

GroundStateCheck ground_state_check(const QuantumHamiltonian& hamiltonian,
                                    const CostFunction& cost);

// lambda_1 - lambda_0 after asserting the mapped-Hamiltonian contract
// lambda_0 ~ 0; throws ParameterError for a single-state space where no gap
// exists.
double spectral_gap(const QuantumHamiltonian& hamiltonian);

// Scans the mapped Hamiltonian's gap over `grid` evenly spaced temperatures
// on [0, beta_max] and reports the minimum and where it occurred.
struct MinGapResult {
  double delta_min = 0.0;
  double beta_at_min = 0.0;
};

MinGapResult min_gap_along_schedule(const CostFunction& cost,
                                    const Schedule& schedule, int grid,
                                    KernelKind kind = KernelKind::metropolis);

}  // namespace qja
