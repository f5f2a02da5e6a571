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

#include "qja/anneal.hpp"

#include <cmath>
#include <complex>
#include <utility>

#include "qja/errors.hpp"

namespace qja {

namespace {

using std::complex;

Eigen::VectorXd gibbs_amplitudes(const CostFunction& cost, double beta) {
  const GibbsState g = gibbs_state(cost, beta);
  return Eigen::Map<const Eigen::VectorXd>(
      g.amplitudes.data(), static_cast<Eigen::Index>(g.amplitudes.size()));
}

// exp(-i dt H) psi via H = V diag(lambda) V^T, keeping all matrix products
// real: rotate the eigenbasis coefficients by the per-mode phases.
Eigen::VectorXcd evolve(const SpectralDecomposition& s,
                        const Eigen::VectorXcd& psi, double dt) {
  const Eigen::VectorXd c_re = s.eigenvectors.transpose() * psi.real();
  const Eigen::VectorXd c_im = s.eigenvectors.transpose() * psi.imag();
  const Eigen::ArrayXd angle = -dt * s.eigenvalues.array();
  const Eigen::ArrayXd cosv = angle.cos();
  const Eigen::ArrayXd sinv = angle.sin();
  const Eigen::VectorXd r_re =
      (c_re.array() * cosv - c_im.array() * sinv).matrix();
  const Eigen::VectorXd r_im =
      (c_re.array() * sinv + c_im.array() * cosv).matrix();
  Eigen::VectorXcd out(psi.size());
  out.real() = s.eigenvectors * r_re;
  out.imag() = s.eigenvectors * r_im;
  return out;
}

StepRecord observe(int step, double t, double beta, const WaveVector& psi,
                   const CostFunction& cost,
                   const std::vector<int>& ground_set, double gibbs_mass) {
  StepRecord rec;
  rec.step = step;
  rec.t = t;
  rec.beta = beta;
  rec.norm_sq = psi.norm_sq();
  double mass = 0.0;
  for (int s : ground_set) {
    mass += std::norm(psi.amplitudes()(s));
  }
  rec.p_ground = mass / psi.norm_sq();
  rec.p_ground_gibbs = gibbs_mass;
  rec.fidelity = gibbs_fidelity(psi, cost, beta);
  return rec;
}

double gibbs_ground_mass(const CostFunction& cost, double beta,
                         const std::vector<int>& ground_set) {
  const GibbsState g = gibbs_state(cost, beta);
  double mass = 0.0;
  for (int s : ground_set) {
    mass += g.probabilities[static_cast<std::size_t>(s)];
  }
  return mass;
}

void check_positive_steps(const Schedule& schedule) {
  if (schedule.n_steps() < 1) {
    throw ParameterError("annealing needs at least one step");
  }
}

}  // namespace

WaveVector::WaveVector(Eigen::VectorXcd amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) {
    throw ParameterError("state vector must be nonempty");
  }
  if (!amplitudes_.allFinite()) {
    throw NumericRangeError("state vector has non-finite amplitudes");
  }
  norm_sq_ = amplitudes_.squaredNorm();
}

WaveVector uniform_initial_state(int n) {
  if (n < 1) throw ParameterError("state space must be nonempty");
  return WaveVector(Eigen::VectorXcd::Constant(
      n, complex<double>(1.0 / std::sqrt(static_cast<double>(n)), 0.0)));
}

WaveVector propagate_step(const WaveVector& psi,
                          const QuantumHamiltonian& hamiltonian, double dt) {
  if (psi.size() != hamiltonian.size()) {
    throw ParameterError("state and Hamiltonian sizes differ");
  }
  if (!std::isfinite(dt)) throw ParameterError("dt must be finite");
  return WaveVector(evolve(hamiltonian.spectrum(), psi.amplitudes(), dt));
}

WaveVector apply_work_weight(const WaveVector& psi, const CostFunction& cost,
                             double delta_beta) {
  if (psi.size() != cost.size()) {
    throw ParameterError("state and cost function sizes differ");
  }
  if (!std::isfinite(delta_beta) || delta_beta < 0) {
    throw ParameterError("delta_beta must be finite and nonnegative");
  }
  Eigen::VectorXcd out = psi.amplitudes();
  for (int s = 0; s < cost.size(); ++s) {
    out(s) *= std::exp(-delta_beta * cost.energy(s) / 2.0);
  }
  return WaveVector(std::move(out));
}

double gibbs_fidelity(const WaveVector& psi, const CostFunction& cost,
                      double beta) {
  if (psi.size() != cost.size()) {
    throw ParameterError("state and cost function sizes differ");
  }
  if (psi.norm_sq() <= 0.0) {
    throw ParameterError("fidelity of the zero vector is undefined");
  }
  const Eigen::VectorXd a = gibbs_amplitudes(cost, beta);
  const double overlap_re = a.dot(psi.amplitudes().real());
  const double overlap_im = a.dot(psi.amplitudes().imag());
  return (overlap_re * overlap_re + overlap_im * overlap_im) / psi.norm_sq();
}

double ground_state_probability(const WaveVector& psi,
                                const CostFunction& cost, double tol) {
  if (psi.size() != cost.size()) {
    throw ParameterError("state and cost function sizes differ");
  }
  if (psi.norm_sq() <= 0.0) {
    throw ParameterError("probability in the zero vector is undefined");
  }
  double mass = 0.0;
  for (int s : ground_state_set(cost, tol).states) {
    mass += std::norm(psi.amplitudes()(s));
  }
  return mass / psi.norm_sq();
}

RunResult run_qja(const CostFunction& cost, const Schedule& schedule,
                  const AnnealOptions& options) {
  check_positive_steps(schedule);
  const std::vector<int> ground =
      ground_state_set(cost, options.ground_tol).states;
  WaveVector psi = uniform_initial_state(cost.size());
  RunResult out{{}, psi};
  out.records.reserve(static_cast<std::size_t>(schedule.n_steps()) + 1);
  out.records.push_back(observe(0, 0.0, schedule.beta_at(0), psi, cost,
                                ground,
                                gibbs_ground_mass(cost, schedule.beta_at(0),
                                                  ground)));
  for (int k = 0; k < schedule.n_steps(); ++k) {
    const double beta_next = schedule.beta_at(k + 1);
    const QuantumHamiltonian h = build_hq(cost, beta_next, options.kernel);
    if (options.order == StepOrder::weight_then_unitary) {
      psi = apply_work_weight(psi, cost, schedule.delta_beta(k));
      psi = propagate_step(psi, h, schedule.delta_t());
    } else {
      psi = propagate_step(psi, h, schedule.delta_t());
      psi = apply_work_weight(psi, cost, schedule.delta_beta(k));
    }
    if (psi.norm_sq() <= 0.0) {
      throw NumericRangeError("state norm underflowed to zero");
    }
    out.records.push_back(observe(k + 1, schedule.time_at(k + 1), beta_next,
                                  psi, cost, ground,
                                  gibbs_ground_mass(cost, beta_next, ground)));
  }
  out.final_state = psi;
  return out;
}

RunResult run_qa(const CostFunction& cost, const Schedule& schedule,
                 const AnnealOptions& options) {
  check_positive_steps(schedule);
  const std::vector<int> ground =
      ground_state_set(cost, options.ground_tol).states;
  WaveVector psi = uniform_initial_state(cost.size());
  RunResult out{{}, psi};
  out.records.reserve(static_cast<std::size_t>(schedule.n_steps()) + 1);
  out.records.push_back(observe(0, 0.0, schedule.beta_at(0), psi, cost,
                                ground,
                                gibbs_ground_mass(cost, schedule.beta_at(0),
                                                  ground)));
  for (int k = 0; k < schedule.n_steps(); ++k) {
    const double beta_next = schedule.beta_at(k + 1);
    psi = propagate_step(psi, build_hq(cost, beta_next, options.kernel),
                         schedule.delta_t());
    out.records.push_back(observe(k + 1, schedule.time_at(k + 1), beta_next,
                                  psi, cost, ground,
                                  gibbs_ground_mass(cost, beta_next, ground)));
  }
  out.final_state = psi;
  return out;
}

RunResult run_qa_interpolated(const CostFunction& cost,
                              const Schedule& schedule,
                              double transverse_strength,
                              const AnnealOptions& options) {
  check_positive_steps(schedule);
  if (!std::isfinite(transverse_strength) || transverse_strength <= 0) {
    throw ParameterError("transverse strength must be positive");
  }
  const int n = cost.size();
  const std::vector<int> ground =
      ground_state_set(cost, options.ground_tol).states;
  const Eigen::VectorXd u =
      Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const Eigen::MatrixXd driver =
      transverse_strength *
      (Eigen::MatrixXd::Identity(n, n) - u * u.transpose());
  Eigen::VectorXd diag(n);
  for (int s = 0; s < n; ++s) diag(s) = cost.energy(s);

  WaveVector psi = uniform_initial_state(n);
  RunResult out{{}, psi};
  out.records.reserve(static_cast<std::size_t>(schedule.n_steps()) + 1);
  out.records.push_back(observe(0, 0.0, schedule.beta_at(0), psi, cost,
                                ground,
                                gibbs_ground_mass(cost, schedule.beta_at(0),
                                                  ground)));
  for (int k = 0; k < schedule.n_steps(); ++k) {
    const double f = schedule.interpolation_fraction(k + 1);
    Eigen::MatrixXd h = (1.0 - f) * driver;
    h.diagonal() += f * diag;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
      throw NumericRangeError("eigendecomposition failed to converge");
    }
    const SpectralDecomposition spec{solver.eigenvalues(),
                                     solver.eigenvectors()};
    psi = WaveVector(evolve(spec, psi.amplitudes(), schedule.delta_t()));
    const double beta_next = schedule.beta_at(k + 1);
    out.records.push_back(observe(k + 1, schedule.time_at(k + 1), beta_next,
                                  psi, cost, ground,
                                  gibbs_ground_mass(cost, beta_next, ground)));
  }
  out.final_state = psi;
  return out;
}

}  // namespace qja
