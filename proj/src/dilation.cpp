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

#include "qja/dilation.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "qja/errors.hpp"

namespace qja {

namespace {

constexpr std::int64_t kMaxAmplitudes = std::int64_t(1) << 22;
constexpr int kMaxDenseDim = 4096;

void check_shifted(const CostFunction& cost) {
  if (cost.min_energy() < 0.0) {
    throw ParameterError(
        "energies must be nonnegative; apply shift_nonnegative first");
  }
}

}  // namespace

DilatedState::DilatedState(int n_basis, int n_ancilla)
    : n_basis_(n_basis), n_ancilla_(n_ancilla) {
  if (n_basis < 1) throw ParameterError("state space must be nonempty");
  if (n_ancilla < 0 || n_ancilla > 62) {
    throw ParameterError("ancilla count out of range");
  }
  const std::int64_t dim = std::int64_t(n_basis) << n_ancilla;
  if (dim > kMaxAmplitudes) {
    throw ResourceError(
        "dilated state exceeds the amplitude budget; use run_qja, which "
        "needs no ancillas");
  }
  amplitudes_ = Eigen::VectorXcd::Zero(dim);
  const double a = 1.0 / std::sqrt(static_cast<double>(n_basis));
  const std::int64_t block = std::int64_t(1) << n_ancilla;
  for (int s = 0; s < n_basis; ++s) {
    amplitudes_(s * block) = std::complex<double>(a, 0.0);
  }
}

std::complex<double> DilatedState::amplitude(int state,
                                             std::uint64_t bits) const {
  if (state < 0 || state >= n_basis_ ||
      bits >= (std::uint64_t(1) << n_ancilla_)) {
    throw ParameterError("dilated index out of range");
  }
  return amplitudes_(static_cast<std::int64_t>(
      (std::uint64_t(state) << n_ancilla_) + bits));
}

WeightDilationUnitary build_w_unit(const CostFunction& cost,
                                   double delta_beta, int ancilla_index,
                                   int n_ancilla) {
  check_shifted(cost);
  if (!std::isfinite(delta_beta) || delta_beta < 0) {
    throw ParameterError("delta_beta must be finite and nonnegative");
  }
  if (n_ancilla < 1 || ancilla_index < 0 || ancilla_index >= n_ancilla) {
    throw ParameterError("ancilla index out of range");
  }
  if (delta_beta * cost.max_energy() >= 1.0) {
    throw ParameterError(
        "delta_beta * max energy must stay below 1; take more steps");
  }
  const int n = cost.size();
  WeightDilationUnitary w;
  w.n_basis = n;
  w.n_ancilla = n_ancilla;
  w.ancilla_index = ancilla_index;
  w.sqrt_keep.resize(n);
  w.sqrt_reject.resize(n);
  for (int s = 0; s < n; ++s) {
    const double exponent = -delta_beta * cost.energy(s);
    w.sqrt_keep(s) = std::exp(exponent / 2.0);
    // 1 - e^{exponent} via expm1 keeps tiny rejection weights accurate.
    w.sqrt_reject(s) = std::sqrt(-std::expm1(exponent));
  }
  return w;
}

Eigen::MatrixXd WeightDilationUnitary::to_matrix() const {
  const std::int64_t dim = std::int64_t(n_basis) << n_ancilla;
  if (dim > kMaxDenseDim) {
    throw ResourceError("dense dilation matrix capped at dimension 4096");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const std::uint64_t mask = std::uint64_t(1) << ancilla_index;
  const std::uint64_t block = std::uint64_t(1) << n_ancilla;
  for (int s = 0; s < n_basis; ++s) {
    for (std::uint64_t b = 0; b < block; ++b) {
      const std::int64_t idx =
          static_cast<std::int64_t>(std::uint64_t(s) * block + b);
      if ((b & mask) == 0) {
        const std::int64_t idx1 = idx + static_cast<std::int64_t>(mask);
        m(idx, idx) = sqrt_keep(s);
        m(idx1, idx) = -sqrt_reject(s);
        m(idx, idx1) = sqrt_reject(s);
        m(idx1, idx1) = sqrt_keep(s);
      }
    }
  }
  return m;
}

void apply_weight_rotation(DilatedState& state,
                           const WeightDilationUnitary& w) {
  if (w.n_basis != state.n_basis() || w.n_ancilla != state.n_ancilla()) {
    throw ParameterError("rotation does not match the dilated space");
  }
  const std::uint64_t mask = std::uint64_t(1) << w.ancilla_index;
  const std::uint64_t block = std::uint64_t(1) << state.n_ancilla();
  Eigen::VectorXcd& amp = state.amplitudes_;
  for (int s = 0; s < state.n_basis(); ++s) {
    const double keep = w.sqrt_keep(s);
    const double reject = w.sqrt_reject(s);
    const std::uint64_t base = std::uint64_t(s) * block;
    for (std::uint64_t b = 0; b < block; ++b) {
      if (b & mask) continue;
      const std::int64_t i0 = static_cast<std::int64_t>(base + b);
      const std::int64_t i1 = static_cast<std::int64_t>(base + b + mask);
      const std::complex<double> a0 = amp(i0);
      const std::complex<double> a1 = amp(i1);
      amp(i0) = keep * a0 + reject * a1;
      amp(i1) = -reject * a0 + keep * a1;
    }
  }
  state.ancillas_used_ =
      std::max(state.ancillas_used_, w.ancilla_index + 1);
}

void apply_system_unitary(DilatedState& state, const QuantumHamiltonian& h,
                          double dt) {
  if (h.size() != state.n_basis()) {
    throw ParameterError("Hamiltonian does not match the dilated space");
  }
  if (!std::isfinite(dt)) throw ParameterError("dt must be finite");
  const SpectralDecomposition& spec = h.spectrum();
  const int n = state.n_basis();
  const std::int64_t block = std::int64_t(1) << state.n_ancilla();
  const Eigen::ArrayXd angle = -dt * spec.eigenvalues.array();
  const Eigen::ArrayXd cosv = angle.cos();
  const Eigen::ArrayXd sinv = angle.sin();
  Eigen::VectorXd v_re(n), v_im(n);
  Eigen::VectorXcd& amp = state.amplitudes_;
  for (std::int64_t b = 0; b < block; ++b) {
    for (int s = 0; s < n; ++s) {
      const std::complex<double> a = amp(s * block + b);
      v_re(s) = a.real();
      v_im(s) = a.imag();
    }
    const Eigen::VectorXd c_re = spec.eigenvectors.transpose() * v_re;
    const Eigen::VectorXd c_im = spec.eigenvectors.transpose() * v_im;
    const Eigen::VectorXd r_re =
        (c_re.array() * cosv - c_im.array() * sinv).matrix();
    const Eigen::VectorXd r_im =
        (c_re.array() * sinv + c_im.array() * cosv).matrix();
    const Eigen::VectorXd o_re = spec.eigenvectors * r_re;
    const Eigen::VectorXd o_im = spec.eigenvectors * r_im;
    for (int s = 0; s < n; ++s) {
      amp(s * block + b) = std::complex<double>(o_re(s), o_im(s));
    }
  }
}

DilatedState run_qja_dilated(const CostFunction& cost,
                             const Schedule& schedule,
                             const AnnealOptions& options) {
  check_shifted(cost);
  const int n_steps = schedule.n_steps();
  DilatedState state(cost.size(), n_steps);
  for (int k = 0; k < n_steps; ++k) {
    apply_weight_rotation(
        state, build_w_unit(cost, schedule.delta_beta(k), k, n_steps));
    apply_system_unitary(
        state, build_hq(cost, schedule.beta_at(k + 1), options.kernel),
        schedule.delta_t());
  }
  return state;
}

PostSelection postselect(const DilatedState& state,
                         const std::string& pattern) {
  const int m = state.n_ancilla();
  if (static_cast<int>(pattern.size()) != m) {
    throw ParameterError("pattern length does not match the ancilla count");
  }
  std::uint64_t bits = 0;
  for (int a = 0; a < m; ++a) {
    if (pattern[static_cast<std::size_t>(a)] == '1') {
      bits |= std::uint64_t(1) << a;
    } else if (pattern[static_cast<std::size_t>(a)] != '0') {
      throw ParameterError("pattern must consist of '0' and '1'");
    }
  }
  const std::int64_t block = std::int64_t(1) << m;
  Eigen::VectorXcd branch(state.n_basis());
  for (int s = 0; s < state.n_basis(); ++s) {
    branch(s) = state.amplitudes()(s * block + static_cast<std::int64_t>(bits));
  }
  const double probability = branch.squaredNorm();
  if (probability == 0.0) {
    throw ParameterError("postselection pattern has probability zero");
  }
  if (probability < std::numeric_limits<double>::min()) {
    throw NumericRangeError(
        "postselection probability underflowed; shorten the protocol");
  }
  return PostSelection{WaveVector(branch / std::sqrt(probability)),
                       probability};
}

std::vector<double> ancilla_weight_class_probabilities(
    const DilatedState& state) {
  const int m = state.n_ancilla();
  const std::int64_t block = std::int64_t(1) << m;
  std::vector<double> classes(static_cast<std::size_t>(m) + 1, 0.0);
  for (int s = 0; s < state.n_basis(); ++s) {
    for (std::int64_t b = 0; b < block; ++b) {
      const int weight = std::popcount(static_cast<std::uint64_t>(b));
      classes[static_cast<std::size_t>(weight)] +=
          std::norm(state.amplitudes()(s * block + b));
    }
  }
  return classes;
}

CostEstimate steps_estimate(const CostFunction& cost, double p_error_cap,
                            std::optional<double> beta_final) {
  check_shifted(cost);
  if (!(p_error_cap > 0.0) || p_error_cap > 1.0 ||
      !std::isfinite(p_error_cap)) {
    throw ParameterError("p_error_cap must lie in (0, 1]");
  }
  if (cost.max_energy() <= 0.0) {
    throw ParameterError("steps estimate needs a nonzero energy scale");
  }
  const GroundStateInfo info = ground_state_set(cost, 0.0);
  if (!info.epsilon) {
    throw ParameterError(
        "steps estimate needs a nondegenerate spectrum (no classical gap)");
  }
  CostEstimate est;
  est.p_error_cap = p_error_cap;
  est.max_energy = cost.max_energy();
  est.epsilon = *info.epsilon;
  est.beta_final = beta_final.value_or(1.0 / est.epsilon);
  if (!(est.beta_final > 0.0) || !std::isfinite(est.beta_final)) {
    throw ParameterError("beta_final must be positive and finite");
  }
  est.delta_beta = p_error_cap / est.max_energy;
  const double raw = est.beta_final / est.delta_beta;
  // Relative slack absorbs the rounding of ratios like 0.1 / 0.01 that land
  // a few ulps above an integer.
  est.n_steps = static_cast<std::int64_t>(std::ceil(raw * (1.0 - 1e-12)));
  est.expected_repetitions =
      p_error_cap < 1.0
          ? std::pow(1.0 - p_error_cap,
                     -static_cast<double>(est.n_steps))
          : std::numeric_limits<double>::infinity();
  return est;
}

RepetitionEstimate repetition_estimate(const CostFunction& cost,
                                       double beta_final,
                                       std::int64_t n_steps) {
  check_shifted(cost);
  if (n_steps < 1) throw ParameterError("n_steps must be positive");
  if (!(beta_final >= 0.0) || !std::isfinite(beta_final)) {
    throw ParameterError("beta_final must be finite and nonnegative");
  }
  RepetitionEstimate out;
  out.p_error_step =
      (beta_final / static_cast<double>(n_steps)) * cost.max_energy();
  if (out.p_error_step >= 1.0) {
    throw ParameterError(
        "per-step error reaches 1; take more steps or lower beta_final");
  }
  out.from_error_formula =
      std::pow(1.0 - out.p_error_step, -static_cast<double>(n_steps));
  double z = 0.0;
  for (int s = 0; s < cost.size(); ++s) {
    z += std::exp(-beta_final * cost.energy(s));
  }
  out.exact = static_cast<double>(cost.size()) / z;
  return out;
}

}  // namespace qja
