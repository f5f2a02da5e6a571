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
#include <complex>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qja/anneal.hpp"
#include "qja/errors.hpp"
#include "qja/model.hpp"
#include "qja/qmap.hpp"

namespace qja {
namespace {

// Max amplitude difference after normalising both states.  The protocols
// under test keep states real and positive-dominated, so no phase alignment
// is needed.
double state_deviation(const WaveVector& a, const WaveVector& b) {
  const Eigen::VectorXcd x = a.amplitudes() / std::sqrt(a.norm_sq());
  const Eigen::VectorXcd y = b.amplitudes() / std::sqrt(b.norm_sq());
  return (x - y).cwiseAbs().maxCoeff();
}

TEST_SUITE("anneal") {

TEST_CASE("uniform initial state is the infinite-temperature Gibbs state") {
  const WaveVector psi = uniform_initial_state(4);
  REQUIRE(psi.size() == 4);
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 4; ++i) {
    CHECK(psi.amplitudes()(i).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psi.amplitudes()(i).imag() == 0.0);
  }
  const CostFunction cost = build_random_potential(4, 11);
  CHECK(gibbs_fidelity(psi, cost, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)uniform_initial_state(0), ParameterError);
}

TEST_CASE("wave vector construction validates its input") {
  CHECK_THROWS_AS(WaveVector{Eigen::VectorXcd(0)}, ParameterError);
  Eigen::VectorXcd bad(2);
  bad << std::complex<double>(1.0, 0.0),
      std::complex<double>(std::nan(""), 0.0);
  CHECK_THROWS_AS(WaveVector{bad}, NumericRangeError);
  Eigen::VectorXcd v(2);
  v << std::complex<double>(3.0, 4.0), std::complex<double>(0.0, 0.0);
  CHECK(WaveVector(v).norm_sq() == 25.0);
}

TEST_CASE("propagation is unitary and leaves the ground state alone") {
  const CostFunction cost = build_random_potential(4, 11);
  const QuantumHamiltonian h = build_hq(cost, 1.5);

  SUBCASE("zero time is the identity") {
    const WaveVector psi = uniform_initial_state(4);
    const WaveVector out = propagate_step(psi, h, 0.0);
    CHECK(state_deviation(psi, out) < 1e-14);
  }
  SUBCASE("norm is preserved for a complex state") {
    Eigen::VectorXcd v(4);
    v << std::complex<double>(0.3, -0.1), std::complex<double>(0.0, 0.7),
        std::complex<double>(-0.4, 0.2), std::complex<double>(0.5, 0.5);
    const WaveVector psi(v);
    const WaveVector out = propagate_step(psi, h, 2.7);
    CHECK(out.norm_sq() == doctest::Approx(psi.norm_sq()).epsilon(1e-13));
  }
  SUBCASE("the Gibbs amplitude state has eigenvalue zero, so no phase") {
    const GibbsState g = gibbs_state(cost, 1.5);
    Eigen::VectorXcd a(4);
    for (int i = 0; i < 4; ++i) a(i) = g.amplitudes[i];
    const WaveVector psi(a);
    const WaveVector out = propagate_step(psi, h, 7.3);
    CHECK((out.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("contract checks") {
    const WaveVector psi = uniform_initial_state(3);
    CHECK_THROWS_AS((void)propagate_step(psi, h, 0.1), ParameterError);
    const WaveVector ok = uniform_initial_state(4);
    CHECK_THROWS_AS((void)propagate_step(ok, h, std::nan("")),
                    ParameterError);
  }
}

TEST_CASE("one full-ramp weight turns the uniform state into Gibbs") {
  const CostFunction cost = build_random_potential(5, 7);
  const double beta = 2.4;
  const WaveVector cooled =
      apply_work_weight(uniform_initial_state(5), cost, beta);
  CHECK(gibbs_fidelity(cooled, cost, beta) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // The squared norm collects exactly the partition-function ratio Z/n.
  const GibbsState g = gibbs_state(cost, beta);
  CHECK(cooled.norm_sq() ==
        doctest::Approx(std::exp(g.log_z) / 5.0).epsilon(1e-13));
  CHECK_THROWS_AS((void)apply_work_weight(cooled, cost, -0.1),
                  ParameterError);
}

TEST_CASE("fidelity and ground probability read out the expected masses") {
  const CostFunction flat = make_chain_cost({0.5, 0.5});
  Eigen::VectorXcd anti(2);
  anti << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(gibbs_fidelity(WaveVector(anti), flat, 3.0) < 1e-30);

  const CostFunction cost = make_chain_cost({0.0, 0.0, 1.0});
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(3);
  basis(0) = 5.0;  // Scaling must not matter: the readout normalises.
  CHECK(ground_state_probability(WaveVector(basis), cost) == 1.0);
  basis(0) = 0.0;
  basis(2) = 1.0;
  CHECK(ground_state_probability(WaveVector(basis), cost) == 0.0);
  CHECK(ground_state_probability(WaveVector(basis), cost, 1.5) == 1.0);
  CHECK(ground_state_probability(uniform_initial_state(3), cost) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const WaveVector zero(Eigen::VectorXcd::Zero(3));
  CHECK_THROWS_AS((void)gibbs_fidelity(zero, cost, 1.0), ParameterError);
  CHECK_THROWS_AS((void)ground_state_probability(zero, cost), ParameterError);
}

TEST_CASE("weighted protocol tracks the Gibbs reference at every step") {
  const CostFunction cost = build_random_potential(4, 11);
  const Schedule schedule(2.0, 1.0, 64);
  const RunResult r = run_qja(cost, schedule);

  REQUIRE(r.records.size() == 65);
  for (int k = 0; k <= 64; ++k) {
    const StepRecord& rec = r.records[static_cast<std::size_t>(k)];
    CHECK(rec.step == k);
    CHECK(rec.t == schedule.time_at(k));
    CHECK(rec.beta == schedule.beta_at(k));
    CHECK(std::abs(rec.p_ground - rec.p_ground_gibbs) < 1e-13);
    CHECK(std::abs(rec.fidelity - 1.0) < 1e-13);
    // norm_sq carries the success probability Z(beta)/n.
    const GibbsState g = gibbs_state(cost, rec.beta);
    const double want = std::exp(g.log_z) / 4.0;
    CHECK(rec.norm_sq == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(r.final_state.norm_sq() == r.records.back().norm_sq);
}

TEST_CASE("weighted protocol is exact for a constant cost function") {
  // Flat energies: the weight rescales uniformly and the unitary only adds
  // phases, so the state is the uniform Gibbs state at all temperatures.
  const CostFunction flat = make_chain_cost({2.0, 2.0, 2.0});
  const Schedule schedule(4.0, 3.0, 32);
  const RunResult r = run_qja(flat, schedule);
  for (const StepRecord& rec : r.records) {
    CHECK(rec.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    // Z = n e^{-2 beta}, so norm_sq = e^{-2 beta}.
    CHECK(rec.norm_sq ==
          doctest::Approx(std::exp(-2.0 * rec.beta)).epsilon(1e-12));
  }
}

TEST_CASE("weighted protocol matches the brute-force operator product") {
  // Oracle: apply diag(e^{-delta_beta E / 2}) then the dense matrix
  // exponential exp(-i dt H) step by step, built with an independent
  // algorithm (Pade approximation) rather than the eigendecomposition.
  const CostFunction cost = build_random_potential(5, 6);
  const Schedule schedule(3.0, 0.7, 8);
  const RunResult direct = run_qja(cost, schedule);

  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Constant(5, 1.0 / std::sqrt(5.0));
  for (int k = 0; k < 8; ++k) {
    Eigen::VectorXd w(5);
    for (int i = 0; i < 5; ++i) {
      w(i) = std::exp(-schedule.delta_beta(k) * cost.energy(i) / 2.0);
    }
    psi = w.asDiagonal() * psi;
    const QuantumHamiltonian h = build_hq(cost, schedule.beta_at(k + 1));
    const Eigen::MatrixXcd gen = std::complex<double>(0.0, -schedule.delta_t()) *
                                 h.matrix().cast<std::complex<double>>();
    psi = gen.exp() * psi;
  }
  CHECK((psi - direct.final_state.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("weight placement within a step only matters at first order") {
  const CostFunction cost = build_random_potential(4, 11);
  AnnealOptions before;
  before.order = StepOrder::weight_then_unitary;
  AnnealOptions after;
  after.order = StepOrder::unitary_then_weight;

  double dev[3];
  const int steps[3] = {64, 256, 1024};
  for (int i = 0; i < 3; ++i) {
    const Schedule schedule(2.0, 0.01, steps[i]);
    const RunResult a = run_qja(cost, schedule, before);
    const RunResult b = run_qja(cost, schedule, after);
    dev[i] = state_deviation(a.final_state, b.final_state);
  }
  CHECK(dev[2] < 5e-6);
  // Quadrupling the step count divides the discrepancy by four.
  CHECK(dev[0] / dev[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(dev[1] / dev[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("norm underflow in the weight is reported, not propagated") {
  const CostFunction high = make_chain_cost({800.0, 800.0});
  const Schedule schedule(2.0, 1.0, 1);
  CHECK_THROWS_AS((void)run_qja(high, schedule), NumericRangeError);
}

TEST_CASE("plain annealing is unitary and lags at fast ramps") {
  const CostFunction cost = build_random_potential(4, 11);
  const double final_gibbs_mass = 0.668988;  // ground mass at beta = 10

  const Schedule fast(10.0, 1.0, 1000);
  const RunResult rf = run_qa(cost, fast);
  for (const StepRecord& rec : rf.records) {
    CHECK(std::abs(rec.norm_sq - 1.0) < 1e-11);
  }
  CHECK(rf.records.back().p_ground_gibbs ==
        doctest::Approx(final_gibbs_mass).epsilon(1e-5));
  // A tau = 1 quench stays far from the Gibbs reference...
  CHECK(rf.records.back().p_ground < 0.45);

  const Schedule slow(10.0, 10.0, 1000);
  const RunResult rs = run_qa(cost, slow);
  // ...while tau = 10 has time to move most of the mass.
  CHECK(rs.records.back().p_ground > 0.55);
  CHECK(rs.records.back().p_ground > rf.records.back().p_ground + 0.2);
}

TEST_CASE("plain annealing keeps a constant cost function in place") {
  const CostFunction flat = make_chain_cost({1.0, 1.0, 1.0, 1.0});
  const Schedule schedule(5.0, 2.0, 100);
  const RunResult r = run_qa(flat, schedule);
  for (const StepRecord& rec : r.records) {
    CHECK(rec.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.p_ground == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("interpolated annealing starts uniform and obeys the adiabatic "
          "theorem") {
  const CostFunction cost = build_random_potential(4, 11);

  SUBCASE("the first record is the untouched uniform state") {
    const Schedule schedule(100.0, 20.0, 50);
    const RunResult r = run_qa_interpolated(cost, schedule, 1.0);
    CHECK(r.records[0].beta == 0.0);
    CHECK(r.records[0].fidelity == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.records[0].p_ground == 0.25);
  }
  SUBCASE("slower ramps end closer to the classical ground state") {
    double p[3];
    const double taus[3] = {20.0, 100.0, 400.0};
    for (int i = 0; i < 3; ++i) {
      const Schedule schedule(100.0, taus[i], 2000);
      p[i] = run_qa_interpolated(cost, schedule, 1.0)
                 .records.back()
                 .p_ground;
    }
    CHECK(p[0] < p[1]);
    CHECK(p[1] < p[2]);
    CHECK(p[2] > 0.95);
  }
  SUBCASE("a constant cost function commutes with the driver") {
    const CostFunction flat = make_chain_cost({0.3, 0.3, 0.3});
    const Schedule schedule(100.0, 20.0, 50);
    const RunResult r = run_qa_interpolated(flat, schedule, 2.0);
    CHECK(r.records.back().fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.records.back().p_ground == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("contract checks") {
    const Schedule schedule(1.0, 1.0, 4);
    CHECK_THROWS_AS((void)run_qa_interpolated(cost, schedule, 0.0),
                    ParameterError);
    CHECK_THROWS_AS((void)run_qa_interpolated(cost, schedule, -2.0),
                    ParameterError);
  }
}

TEST_CASE("protocols refuse an empty schedule") {
  const CostFunction cost = build_random_potential(3, 1);
  const Schedule empty(0.0, 1.0, 0);
  CHECK_THROWS_AS((void)run_qja(cost, empty), ParameterError);
  CHECK_THROWS_AS((void)run_qa(cost, empty), ParameterError);
  CHECK_THROWS_AS((void)run_qa_interpolated(cost, empty, 1.0),
                  ParameterError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace qja
