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

#include "qja/qmap.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <utility>

#include "qja/errors.hpp"

namespace qja {

struct QuantumHamiltonian::Cache {
  std::once_flag flag;
  std::optional<SpectralDecomposition> decomposition;
};

QuantumHamiltonian::QuantumHamiltonian(Eigen::MatrixXd matrix, double beta,
                                       double symmetry_residual)
    : matrix_(std::move(matrix)),
      beta_(beta),
      symmetry_residual_(symmetry_residual),
      cache_(std::make_shared<Cache>()) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw ParameterError("Hamiltonian must be square and nonempty");
  }
  if (!std::isfinite(beta) || beta < 0) {
    throw ParameterError("beta must be finite and nonnegative");
  }
  if (!matrix_.allFinite()) {
    throw NumericRangeError("Hamiltonian has non-finite entries");
  }
  // Exact symmetry from here on; eigensolvers get to assume it.
  matrix_ = ((matrix_ + matrix_.transpose()) / 2.0).eval();
}

const SpectralDecomposition& QuantumHamiltonian::spectrum() const {
  std::call_once(cache_->flag, [this] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix_);
    if (solver.info() != Eigen::Success) {
      throw NumericRangeError("eigendecomposition failed to converge");
    }
    cache_->decomposition =
        SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
  });
  return *cache_->decomposition;
}

double QuantumHamiltonian::gap() const {
  if (size() < 2) {
    throw ParameterError("gap is undefined for a single-state space");
  }
  const SpectralDecomposition& s = spectrum();
  return s.eigenvalues(1) - s.eigenvalues(0);
}

QuantumHamiltonian build_hq(const CostFunction& cost, double beta,
                            KernelKind kind) {
  const TransitionMatrix kernel = build_kernel(cost, beta, kind);
  const int n = cost.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    h(s, s) = 1.0 - kernel(s, s);
    for (int t : cost.neighbors_of(s)) {
      const double exponent = beta * (cost.energy(t) - cost.energy(s)) / 2.0;
      if (exponent > 700.0) {
        throw NumericRangeError(
            "similarity factor overflows; reduce beta or the energy range");
      }
      // For detailed-balanced kernels this product stays bounded by the
      // proposal probability even when the factor alone is huge.
      h(t, s) = -kernel(t, s) * std::exp(exponent);
    }
  }
  double residual = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      residual = std::max(residual, std::abs(h(t, s) - h(s, t)));
    }
  }
  return QuantumHamiltonian(std::move(h), beta, residual);
}

GroundStateCheck ground_state_check(const QuantumHamiltonian& hamiltonian,
                                    const CostFunction& cost) {
  if (hamiltonian.size() != cost.size()) {
    throw ParameterError("Hamiltonian and cost function sizes differ");
  }
  const GibbsState g = gibbs_state(cost, hamiltonian.beta());
  const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(
      g.amplitudes.data(), static_cast<Eigen::Index>(g.amplitudes.size()));
  GroundStateCheck out;
  out.energy_residual = (hamiltonian.matrix() * a).norm();
  const Eigen::VectorXd v0 = hamiltonian.spectrum().eigenvectors.col(0);
  const double overlap = a.dot(v0);
  out.overlap_deficit = 1.0 - overlap * overlap;
  return out;
}

double spectral_gap(const QuantumHamiltonian& hamiltonian) {
  if (hamiltonian.size() < 2) {
    throw ParameterError("spectral gap is undefined for a single state");
  }
  const SpectralDecomposition& s = hamiltonian.spectrum();
  if (std::abs(s.eigenvalues(0)) > 1e-8) {
    throw NumericRangeError(
        "lowest eigenvalue is not ~0; not a mapped Hamiltonian");
  }
  return s.eigenvalues(1) - s.eigenvalues(0);
}

MinGapResult min_gap_along_schedule(const CostFunction& cost,
                                    const Schedule& schedule, int grid,
                                    KernelKind kind) {
  if (grid < 2) throw ParameterError("gap scan needs at least two points");
  MinGapResult out;
  out.delta_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double beta =
        schedule.beta_max() * (static_cast<double>(i) / (grid - 1));
    const double gap = spectral_gap(build_hq(cost, beta, kind));
    if (gap < out.delta_min) {
      out.delta_min = gap;
      out.beta_at_min = beta;
    }
  }
  return out;
}

}  // namespace qja
