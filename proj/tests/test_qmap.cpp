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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "qja/errors.hpp"
#include "qja/model.hpp"
#include "qja/qmap.hpp"
#include "qja/stochastic.hpp"

namespace qja {
namespace {

Eigen::VectorXd gibbs_amplitudes(const CostFunction& cost, double beta) {
  const GibbsState g = gibbs_state(cost, beta);
  return Eigen::Map<const Eigen::VectorXd>(
      g.amplitudes.data(), static_cast<Eigen::Index>(g.amplitudes.size()));
}

// Squared norm lost when projecting the Gibbs amplitude vector onto the
// eigenvalue band lambda <= band_edge.  Unlike the single-vector overlap
// this stays well defined when the low spectrum is degenerate.
double band_projection_deficit(const QuantumHamiltonian& h,
                               const CostFunction& cost, double band_edge) {
  const Eigen::VectorXd a = gibbs_amplitudes(cost, h.beta());
  const SpectralDecomposition& s = h.spectrum();
  double captured = 0.0;
  for (int i = 0; i < h.size(); ++i) {
    if (s.eigenvalues(i) <= band_edge) {
      const double d = a.dot(s.eigenvectors.col(i));
      captured += d * d;
    }
  }
  return 1.0 - captured;
}

TEST_SUITE("qmap") {

TEST_CASE("two-state Hamiltonian matches the hand computation") {
  // E = (0, 1), beta = ln 2: the Metropolis kernel is M(1,0) = 1/2,
  // M(0,1) = 1, diag (1/2, 0), and the similarity transform gives
  // H = [[1/2, -1/sqrt 2], [-1/sqrt 2, 1]] with eigenvalues {0, 3/2}.
  const CostFunction cost = make_chain_cost({0.0, 1.0});
  const double beta = std::log(2.0);
  const QuantumHamiltonian h = build_hq(cost, beta);

  REQUIRE(h.size() == 2);
  CHECK(h.beta() == beta);
  CHECK(h.matrix()(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.matrix()(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  const double off = -1.0 / std::sqrt(2.0);
  CHECK(h.matrix()(0, 1) == doctest::Approx(off).epsilon(1e-15));
  CHECK(h.matrix()(1, 0) == doctest::Approx(off).epsilon(1e-15));
  CHECK(h.symmetry_residual() < 1e-15);

  const SpectralDecomposition& s = h.spectrum();
  CHECK(std::abs(s.eigenvalues(0)) < 1e-15);
  CHECK(s.eigenvalues(1) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(h.gap() == doctest::Approx(1.5).epsilon(1e-14));

  // Ground state is the Gibbs amplitude vector (sqrt(2/3), sqrt(1/3)).
  Eigen::VectorXd v0 = s.eigenvectors.col(0);
  if (v0.sum() < 0) v0 = -v0;
  CHECK(v0(0) == doctest::Approx(0.816496580927726032).epsilon(1e-14));
  CHECK(v0(1) == doctest::Approx(0.577350269189625764).epsilon(1e-14));

  const GroundStateCheck c = ground_state_check(h, cost);
  CHECK(c.energy_residual < 1e-14);
  CHECK(c.overlap_deficit < 1e-14);
}

TEST_CASE("flat energies give the graph Laplacian of the pair") {
  // Equal energies make every move accepted: M swaps the two states and
  // H = [[1, -1], [-1, 1]] regardless of beta.
  const CostFunction cost = make_chain_cost({0.7, 0.7});
  for (double beta : {0.0, 1.0, 42.0}) {
    const QuantumHamiltonian h = build_hq(cost, beta);
    CHECK(h.matrix()(0, 0) == 1.0);
    CHECK(h.matrix()(1, 1) == 1.0);
    CHECK(h.matrix()(0, 1) == -1.0);
    CHECK(h.matrix()(1, 0) == -1.0);
    CHECK(h.gap() == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("infinite-temperature Hamiltonian is exactly I - M") {
  // At beta = 0 every similarity factor is exp(0) = 1, so construction
  // must reproduce I - M entry for entry with no rounding at all.
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    for (const KernelKind kind :
         {KernelKind::metropolis, KernelKind::heat_bath}) {
      const CostFunction cost = build_random_potential(7, seed);
      const TransitionMatrix m = build_kernel(cost, 0.0, kind);
      const QuantumHamiltonian h = build_hq(cost, 0.0, kind);
      for (int s = 0; s < 7; ++s) {
        for (int t = 0; t < 7; ++t) {
          const double expected = (s == t ? 1.0 : 0.0) - m(t, s);
          CHECK(h.matrix()(t, s) == expected);
        }
      }
    }
  }
}

TEST_CASE("certification residuals hold across sizes, temperatures, kernels") {
  for (int n : {2, 3, 5, 8, 13}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const CostFunction cost = build_random_potential(n, seed);
      for (double beta : {0.0, 1.0, 10.0, 100.0}) {
        for (const KernelKind kind :
             {KernelKind::metropolis, KernelKind::heat_bath}) {
          CAPTURE(n);
          CAPTURE(seed);
          CAPTURE(beta);
          CAPTURE(kind == KernelKind::metropolis);
          const QuantumHamiltonian h = build_hq(cost, beta, kind);
          CHECK(h.symmetry_residual() < 1e-12);

          const SpectralDecomposition& s = h.spectrum();
          CHECK(std::abs(s.eigenvalues(0)) <= 1e-10);
          CHECK(s.eigenvalues(0) >= -1e-10);
          // Spectrum of I - (similar-to-stochastic) stays within [0, 2].
          CHECK(s.eigenvalues(n - 1) <= 2.0 + 1e-10);

          const GroundStateCheck c = ground_state_check(h, cost);
          CHECK(c.energy_residual < 1e-9);
          // The single-vector overlap is meaningful only when the gap is
          // resolvable above eigensolver noise; otherwise certify via the
          // low-band projection, which degeneracy cannot spoil.
          if (h.gap() > 1e-8) {
            CHECK(c.overlap_deficit < 1e-9);
          }
          CHECK(band_projection_deficit(h, cost, 1e-10) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("mapped spectrum agrees with the kernel's eigenvalues") {
  // H is similar to I - M, so eigenvalues must match 1 - mu exactly up to
  // solver tolerance even though M itself is not symmetric.
  const CostFunction cost = build_random_potential(6, 9);
  const double beta = 1.3;
  const TransitionMatrix m = build_kernel(cost, beta, KernelKind::metropolis);
  Eigen::MatrixXd dense(6, 6);
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) dense(t, s) = m(t, s);
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(dense);
  std::vector<double> from_kernel;
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(solver.eigenvalues()(i).imag()) < 1e-10);
    from_kernel.push_back(1.0 - solver.eigenvalues()(i).real());
  }
  std::sort(from_kernel.begin(), from_kernel.end());

  const QuantumHamiltonian h = build_hq(cost, beta);
  for (int i = 0; i < 6; ++i) {
    CHECK(h.spectrum().eigenvalues(i) ==
          doctest::Approx(from_kernel[i]).epsilon(1e-9));
  }
}

TEST_CASE("ground-state expectation reproduces the Gibbs average") {
  const CostFunction cost = build_random_potential(8, 2);
  const double beta = 3.0;
  const QuantumHamiltonian h = build_hq(cost, beta);
  Eigen::VectorXd v0 = h.spectrum().eigenvectors.col(0);
  if (v0.sum() < 0) v0 = -v0;
  const GibbsState g = gibbs_state(cost, beta);
  double from_vector = 0.0;
  double from_gibbs = 0.0;
  for (int i = 0; i < 8; ++i) {
    from_vector += v0(i) * v0(i) * cost.energy(i);
    from_gibbs += g.probabilities[i] * cost.energy(i);
  }
  CHECK(from_vector == doctest::Approx(from_gibbs).epsilon(1e-10));
}

TEST_CASE("tampering with an entry is caught by the residuals") {
  const CostFunction cost = build_random_potential(5, 3);
  const double beta = 2.0;
  const QuantumHamiltonian h = build_hq(cost, beta);
  const GroundStateCheck before = ground_state_check(h, cost);
  CHECK(before.energy_residual < 1e-12);

  Eigen::MatrixXd m = h.matrix();
  m(0, 1) += 1e-5;
  m(1, 0) += 1e-5;
  const QuantumHamiltonian tampered(m, beta);
  const GroundStateCheck after = ground_state_check(tampered, cost);
  CHECK(after.energy_residual > 1e-6);
  CHECK(after.energy_residual > 100.0 * before.energy_residual);
  // The perturbation also drags lambda_0 off zero past the contract bound.
  CHECK_THROWS_AS((void)spectral_gap(tampered), NumericRangeError);
}

TEST_CASE("constructor symmetrises and keeps the reported residual") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  const QuantumHamiltonian h(m, 0.0, 1.0);
  CHECK(h.matrix()(0, 1) == 0.5);
  CHECK(h.matrix()(1, 0) == 0.5);
  CHECK(h.symmetry_residual() == 1.0);
}

TEST_CASE("constructor rejects malformed input") {
  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(QuantumHamiltonian(rect, 1.0), ParameterError);
  Eigen::MatrixXd empty(0, 0);
  CHECK_THROWS_AS(QuantumHamiltonian(empty, 1.0), ParameterError);
  Eigen::MatrixXd fine = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(QuantumHamiltonian(fine, -1.0), ParameterError);
  Eigen::MatrixXd bad = fine;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(QuantumHamiltonian(bad, 1.0), NumericRangeError);
}

TEST_CASE("gap and spectral_gap enforce their contracts") {
  const CostFunction single({1.0}, {{}});
  const QuantumHamiltonian h1 = build_hq(single, 1.0);
  CHECK(h1.size() == 1);
  CHECK(h1.matrix()(0, 0) == 0.0);
  CHECK_THROWS_AS((void)h1.gap(), ParameterError);
  CHECK_THROWS_AS((void)spectral_gap(h1), ParameterError);

  // A matrix whose lowest eigenvalue is far from zero is not a mapped
  // Hamiltonian and must be refused, not silently measured.
  Eigen::MatrixXd shifted(2, 2);
  shifted << 1.0, 0.0, 0.0, 2.0;
  CHECK_THROWS_AS((void)spectral_gap(QuantumHamiltonian(shifted, 0.0)),
                  NumericRangeError);
}

TEST_CASE("similarity factors past the overflow guard are refused") {
  const CostFunction cost = make_chain_cost({0.0, 1500.0});
  CHECK_THROWS_AS((void)build_hq(cost, 1.0), NumericRangeError);
}

TEST_CASE("spectral cache is shared across copies") {
  const CostFunction cost = build_random_potential(4, 1);
  const QuantumHamiltonian h = build_hq(cost, 1.0);
  const QuantumHamiltonian copy = h;
  CHECK(&h.spectrum() == &copy.spectrum());
  CHECK(copy.gap() == h.gap());
}

TEST_CASE("gap scan finds the minimum and reports its location") {
  SUBCASE("beta-independent gap keeps the first grid point") {
    const CostFunction cost = make_chain_cost({0.5, 0.5, 0.5, 0.5});
    const Schedule schedule(8.0, 1.0, 16);
    const MinGapResult r = min_gap_along_schedule(cost, schedule, 9);
    CHECK(r.beta_at_min == 0.0);
    CHECK(r.delta_min ==
          doctest::Approx(spectral_gap(build_hq(cost, 0.0))).epsilon(1e-12));
  }
  SUBCASE("monotone closing gap puts the minimum at the end of the ramp") {
    const CostFunction cost = build_random_potential(6, 4);
    const Schedule schedule(10.0, 1.0, 100);
    const MinGapResult r = min_gap_along_schedule(cost, schedule, 11);
    CHECK(r.beta_at_min == 10.0);
    CHECK(r.delta_min == spectral_gap(build_hq(cost, 10.0)));
    CHECK(r.delta_min > 0.0);
    CHECK(r.delta_min < spectral_gap(build_hq(cost, 0.0)));
  }
  SUBCASE("full-size instance closes the gap to the noise floor") {
    const CostFunction cost = build_random_potential(50, 1);
    const Schedule schedule(100.0, 10.0, 100);
    const MinGapResult r = min_gap_along_schedule(cost, schedule, 21);
    CHECK(r.delta_min < 1e-12);
  }
  SUBCASE("a scan needs at least two grid points") {
    const CostFunction cost = make_chain_cost({0.0, 1.0});
    const Schedule schedule(1.0, 1.0, 4);
    CHECK_THROWS_AS((void)min_gap_along_schedule(cost, schedule, 1),
                    ParameterError);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace qja
