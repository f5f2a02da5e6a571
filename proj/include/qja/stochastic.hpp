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
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qja/model.hpp"

namespace qja {

// Column-stochastic transition kernel at fixed inverse temperature:
// entries(to, from) is the probability of moving from `from` to `to`.
// Construction validates nonnegativity and column sums (within 1e-12).
// Detailed balance with respect to the matching Gibbs distribution is the
// builders' responsibility; verify_detailed_balance measures it.
class TransitionMatrix {
 public:
  TransitionMatrix(Eigen::MatrixXd entries, double beta);

  int size() const { return static_cast<int>(entries_.rows()); }
  double beta() const { return beta_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int to, int from) const { return entries_(to, from); }

 private:
  Eigen::MatrixXd entries_;
  double beta_;
};

enum class KernelKind { metropolis, heat_bath };

// Single-move kernel with uniform proposals over the neighbour list and the
// chosen acceptance flow.  Both kinds satisfy detailed balance on any move
// graph, including irregular ones, because acceptance carries the inverse
// proposal degrees: for Metropolis the off-diagonal entry is
//
//   M(to, from) = (1 / deg(from)) * min(1, e^{-beta (E(to) - E(from))}
//                                          * deg(from) / deg(to)),
//
// which reduces to plain Metropolis acceptance on regular graphs.  The
// heat-bath variant replaces min with the ratio flow
// a * b / (a + b) of the degree-weighted Gibbs factors.
TransitionMatrix build_kernel(const CostFunction& cost, double beta,
                              KernelKind kind);

// build_kernel with KernelKind::metropolis.
TransitionMatrix build_metropolis_matrix(const CostFunction& cost,
                                         double beta);

// Largest absolute detailed-balance residual
// max_{s,t} |M(t, s) pi(s) - M(s, t) pi(t)| over the Gibbs weights at the
// kernel's own temperature, using shifted weights e^{-beta (E - min E)} so
// the measure is meaningful at large beta.
double verify_detailed_balance(const TransitionMatrix& matrix,
                               const CostFunction& cost);

// One trajectory of the temperature-ramp protocol together with its
// accumulated work weight.  The trajectory holds n_steps + 1 states; the
// weight is exp(work_exponent) with
// work_exponent = sum_k -delta_beta_k E(sigma_k).
struct WorkSample {
  std::vector<int> trajectory;
  double work_exponent = 0.0;
  double weight = 1.0;
};

using KernelFactory =
    std::function<TransitionMatrix(const CostFunction&, double)>;

// Samples one trajectory: sigma_0 from Gibbs at beta(0), then for each step
// k the work increment at sigma_k followed by a kernel move at the *next*
// temperature beta(t_{k+1}).  That ordering is what makes the weighted
// average below reproduce the partition-function ratio exactly for any
// n_steps.  `factory` defaults to build_metropolis_matrix.
WorkSample sample_trajectory(const CostFunction& cost,
                             const Schedule& schedule, std::uint64_t rng_seed,
                             const KernelFactory& factory = {});

// Monte Carlo estimate of <exp(-work)> over independent trajectories, with
// the standard error of the mean.  Trajectory i uses
// stream_seed(rng_seed, i), so the estimate is reproducible and independent
// of how sampling is chunked.
struct JarzynskiEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

JarzynskiEstimate jarzynski_estimate(const CostFunction& cost,
                                     const Schedule& schedule,
                                     std::int64_t n_samples,
                                     std::uint64_t rng_seed,
                                     KernelKind kind = KernelKind::metropolis);

// Z(beta_end) / Z(beta_start) by direct shift-stabilised summation; the
// reference value the Monte Carlo estimate converges to.
double exact_partition_ratio(const CostFunction& cost, double beta_start,
                             double beta_end);

}  // namespace qja
