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

#include "qja/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "qja/errors.hpp"
#include "qja/rng.hpp"

namespace qja {

namespace {

constexpr double kColumnSumTol = 1e-12;

// Degree-weighted Gibbs factor g(s) / deg(s) with the minimum energy
// shifted out, the quantity whose pairwise flows define both kernels.
double degree_weight(const CostFunction& cost, double beta, int state) {
  return std::exp(-beta * (cost.energy(state) - cost.min_energy())) /
         cost.degree(state);
}

double pair_flow(double a, double b, KernelKind kind) {
  switch (kind) {
    case KernelKind::metropolis:
      return std::min(a, b);
    case KernelKind::heat_bath:
      return a * b / (a + b);
  }
  return 0.0;
}

// Draws an index from the cumulative column `cdf` (last entry 1 within
// roundoff); u is uniform in [0, 1).
int draw_from_cdf(const Eigen::VectorXd& cdf, double u) {
  const int n = static_cast<int>(cdf.size());
  for (int i = 0; i < n - 1; ++i) {
    if (u < cdf(i)) return i;
  }
  return n - 1;
}

Eigen::VectorXd gibbs_cdf(const CostFunction& cost, double beta) {
  const GibbsState g = gibbs_state(cost, beta);
  Eigen::VectorXd cdf(cost.size());
  double acc = 0.0;
  for (int i = 0; i < cost.size(); ++i) {
    acc += g.probabilities[static_cast<std::size_t>(i)];
    cdf(i) = acc;
  }
  return cdf;
}

Eigen::MatrixXd column_cdfs(const Eigen::MatrixXd& kernel) {
  Eigen::MatrixXd cdf = kernel;
  for (int c = 0; c < cdf.cols(); ++c) {
    for (int r = 1; r < cdf.rows(); ++r) cdf(r, c) += cdf(r - 1, c);
  }
  return cdf;
}

}  // namespace

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd entries, double beta)
    : entries_(std::move(entries)), beta_(beta) {
  if (!std::isfinite(beta) || beta < 0) {
    throw ParameterError("kernel beta must be finite and nonnegative");
  }
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw ParameterError("kernel must be square and nonempty");
  }
  for (int c = 0; c < entries_.cols(); ++c) {
    double sum = 0.0;
    for (int r = 0; r < entries_.rows(); ++r) {
      const double v = entries_(r, c);
      if (!(v >= 0.0)) throw ParameterError("kernel entries must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kColumnSumTol) {
      throw ParameterError("kernel columns must sum to 1");
    }
  }
}

TransitionMatrix build_kernel(const CostFunction& cost, double beta,
                              KernelKind kind) {
  if (!std::isfinite(beta) || beta < 0) {
    throw ParameterError("kernel beta must be finite and nonnegative");
  }
  if (beta * cost.energy_range() > 700.0) {
    throw NumericRangeError(
        "beta * energy range exceeds the stable kernel-weight range");
  }
  const int n = cost.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int from = 0; from < n; ++from) {
    if (cost.degree(from) == 0) {
      m(from, from) = 1.0;
      continue;
    }
    const double g_from = degree_weight(cost, beta, from);
    double off_sum = 0.0;
    for (int to : cost.neighbors_of(from)) {
      const double g_to = degree_weight(cost, beta, to);
      const double flow = pair_flow(g_from, g_to, kind);
      const double p = flow / (g_from * cost.degree(from));
      m(to, from) = p;
      off_sum += p;
    }
    m(from, from) = std::max(0.0, 1.0 - off_sum);
  }
  return TransitionMatrix(std::move(m), beta);
}

TransitionMatrix build_metropolis_matrix(const CostFunction& cost,
                                         double beta) {
  return build_kernel(cost, beta, KernelKind::metropolis);
}

double verify_detailed_balance(const TransitionMatrix& matrix,
                               const CostFunction& cost) {
  if (matrix.size() != cost.size()) {
    throw ParameterError("kernel and cost function sizes differ");
  }
  const double beta = matrix.beta();
  const double m = cost.min_energy();
  double worst = 0.0;
  for (int s = 0; s < cost.size(); ++s) {
    const double pi_s = std::exp(-beta * (cost.energy(s) - m));
    for (int t = s + 1; t < cost.size(); ++t) {
      const double pi_t = std::exp(-beta * (cost.energy(t) - m));
      worst = std::max(worst,
                       std::abs(matrix(t, s) * pi_s - matrix(s, t) * pi_t));
    }
  }
  return worst;
}

WorkSample sample_trajectory(const CostFunction& cost,
                             const Schedule& schedule, std::uint64_t rng_seed,
                             const KernelFactory& factory) {
  const KernelFactory build =
      factory ? factory : KernelFactory(build_metropolis_matrix);
  std::mt19937_64 rng(rng_seed);
  WorkSample out;
  out.trajectory.reserve(static_cast<std::size_t>(schedule.n_steps()) + 1);

  int state = draw_from_cdf(gibbs_cdf(cost, schedule.beta_at(0)),
                            unit_double(rng()));
  out.trajectory.push_back(state);
  for (int k = 0; k < schedule.n_steps(); ++k) {
    out.work_exponent -= schedule.delta_beta(k) * cost.energy(state);
    const TransitionMatrix kernel = build(cost, schedule.beta_at(k + 1));
    if (kernel.size() != cost.size()) {
      throw ParameterError("kernel factory returned mismatched size");
    }
    const Eigen::VectorXd column_cdf =
        column_cdfs(kernel.entries()).col(state);
    state = draw_from_cdf(column_cdf, unit_double(rng()));
    out.trajectory.push_back(state);
  }
  out.weight = std::exp(out.work_exponent);
  return out;
}

JarzynskiEstimate jarzynski_estimate(const CostFunction& cost,
                                     const Schedule& schedule,
                                     std::int64_t n_samples,
                                     std::uint64_t rng_seed, KernelKind kind) {
  if (n_samples < 1) throw ParameterError("need at least one sample");
  const int n_steps = schedule.n_steps();
  const int n = cost.size();

  // Kernels depend only on the step temperature; build each once and keep
  // the cumulative columns for O(n) draws.
  const Eigen::VectorXd initial_cdf = gibbs_cdf(cost, schedule.beta_at(0));
  std::vector<Eigen::MatrixXd> step_cdfs;
  step_cdfs.reserve(static_cast<std::size_t>(n_steps));
  for (int k = 0; k < n_steps; ++k) {
    step_cdfs.push_back(column_cdfs(
        build_kernel(cost, schedule.beta_at(k + 1), kind).entries()));
  }

  std::vector<double> weights(static_cast<std::size_t>(n_samples));
  auto run_chunk = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      std::mt19937_64 rng(
          stream_seed(rng_seed, static_cast<std::uint64_t>(i)));
      int state = draw_from_cdf(initial_cdf, unit_double(rng()));
      double exponent = 0.0;
      for (int k = 0; k < n_steps; ++k) {
        exponent -= schedule.delta_beta(k) * cost.energy(state);
        const double u = unit_double(rng());
        const auto& cdf = step_cdfs[static_cast<std::size_t>(k)];
        int next = n - 1;
        for (int r = 0; r < n - 1; ++r) {
          if (u < cdf(r, state)) {
            next = r;
            break;
          }
        }
        state = next;
      }
      weights[static_cast<std::size_t>(i)] = std::exp(exponent);
    }
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const std::int64_t n_threads =
      std::min<std::int64_t>(std::max(1u, hw), n_samples);
  if (n_threads <= 1) {
    run_chunk(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    const std::int64_t chunk = (n_samples + n_threads - 1) / n_threads;
    for (std::int64_t t = 0; t < n_threads; ++t) {
      const std::int64_t begin = t * chunk;
      const std::int64_t end = std::min(n_samples, begin + chunk);
      if (begin < end) pool.emplace_back(run_chunk, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  // Serial reduction in index order keeps the estimate independent of the
  // thread count.
  double sum = 0.0;
  for (double w : weights) sum += w;
  const double mean = sum / static_cast<double>(n_samples);
  double sq = 0.0;
  for (double w : weights) sq += (w - mean) * (w - mean);
  JarzynskiEstimate out;
  out.mean = mean;
  out.n_samples = n_samples;
  out.std_error =
      n_samples > 1
          ? std::sqrt(sq / (static_cast<double>(n_samples - 1) *
                            static_cast<double>(n_samples)))
          : 0.0;
  return out;
}

double exact_partition_ratio(const CostFunction& cost, double beta_start,
                             double beta_end) {
  for (double b : {beta_start, beta_end}) {
    if (!std::isfinite(b) || b < 0) {
      throw ParameterError("beta must be finite and nonnegative");
    }
  }
  const double m = cost.min_energy();
  double z_start = 0.0;
  double z_end = 0.0;
  for (int i = 0; i < cost.size(); ++i) {
    const double excess = cost.energy(i) - m;
    z_start += std::exp(-beta_start * excess);
    z_end += std::exp(-beta_end * excess);
  }
  // Z(b) = e^{-b m} sum e^{-b (E - m)}; both shifted sums lie in [1, N].
  const double log_ratio =
      -(beta_end - beta_start) * m + std::log(z_end) - std::log(z_start);
  if (std::abs(log_ratio) > 700.0) {
    throw NumericRangeError("partition ratio is not representable");
  }
  return std::exp(log_ratio);
}

}  // namespace qja
