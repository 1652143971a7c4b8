/*
 * Copyright 2026 the sgpcn authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sgpcn/baselines.hpp"
#include "sgpcn/oracle.hpp"
#include "sgpcn/slot_solver.hpp"

using namespace sgpcn;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// Toy-scale fixture; prices and powers are O(1) units, which the contracts
// allow (only ratios matter to the solve).
struct Fixture {
  model::Topology topo;
  model::ChannelRealization ch;
  VectorXd qa_now, qa_frame, qu_frame, harvest;
  energy::EnergyPrices prices{1.6, 0.6};
  double v = 1.0;
  bool allow_exchange = true;

  slot_solver::PerSlotProblem problem(const controller::FrameSchedule& s) const {
    slot_solver::PerSlotProblem p;
    p.topology = &topo;
    p.channel = &ch;
    p.schedule = s;
    p.q_access_now = qa_now;
    p.q_access_frame = qa_frame;
    p.q_processing_frame = qu_frame;
    p.harvest_slot_mw = harvest;
    p.prices = prices;
    p.v = v;
    p.allow_exchange = allow_exchange;
    return p;
  }
};

Fixture make_fixture(int num_bsts, int antennas, std::vector<int> ues,
                     bool with_edge, RngStream& rng) {
  Fixture f;
  f.topo.num_bsts = num_bsts;
  f.topo.antennas_per_bst = antennas;
  f.topo.ues_per_bst = std::move(ues);
  int total = 0;
  for (int n : f.topo.ues_per_bst) total += n;
  f.topo.distance_m = Eigen::MatrixXd::Constant(num_bsts, total, 0.5);
  f.topo.carrier_freq_ghz = 0.5;  // pathloss ~ -1.7 dB: O(1) channels
  f.topo.noise_mw = VectorXd::Constant(total, 0.5);
  f.topo.pa_efficiency = 0.9;
  f.topo.max_tx_mw = VectorXd::Constant(num_bsts, 6.0);
  f.topo.baseband_mw = VectorXd::Constant(num_bsts, 1.0);
  if (with_edge && num_bsts >= 2) f.topo.lines.push_back({0, 1, 0.8});
  f.topo.finalize();

  f.ch = model::draw_channels(f.topo, rng);
  f.qa_now.resize(total);
  f.qa_frame.resize(total);
  f.qu_frame.resize(total);
  for (int u = 0; u < total; ++u) {
    f.qa_now(u) = rng.uniform(0.5, 2.0);
    f.qa_frame(u) = f.qa_now(u);
    f.qu_frame(u) = rng.uniform(0.0, 0.4);
  }
  f.harvest.resize(num_bsts);
  for (int m = 0; m < num_bsts; ++m) f.harvest(m) = rng.uniform(0.0, 4.0);
  return f;
}

controller::FrameSchedule all_active(int total) {
  controller::FrameSchedule s;
  s.active.assign(total, 1);
  return s;
}

}  // namespace

TEST_CASE("f_phi values") {
  CHECK(slot_solver::f_phi(7.0, 0.0) == 0.0);
  CHECK(slot_solver::f_phi(0.0, 0.7) == 0.0);
  CHECK(slot_solver::f_phi(2.0, 0.5) ==
        doctest::Approx(std::sqrt(std::exp(1.0) - 1.0)).epsilon(1e-9));
  CHECK(slot_solver::f_phi(1.0, std::log(2.0)) == doctest::Approx(1.0));
  CHECK(std::isinf(slot_solver::f_phi(1e6, 1.0)));
}

TEST_CASE("single-UE closed form: minimal beam meeting the active cone") {
  // M=1, N=1, L=1, h=1, sigma^2=1, f(phi)=1  ->  w = 1, tx power 1.
  Fixture f;
  f.topo.num_bsts = 1;
  f.topo.antennas_per_bst = 1;
  f.topo.ues_per_bst = {1};
  f.topo.distance_m = Eigen::MatrixXd::Constant(1, 1, 1.0);
  f.topo.carrier_freq_ghz = 1.0;
  f.topo.noise_mw = VectorXd::Constant(1, 1.0);
  f.topo.pa_efficiency = 1.0;
  f.topo.max_tx_mw = VectorXd::Constant(1, 10.0);
  f.topo.baseband_mw = VectorXd::Constant(1, 1.0);
  f.topo.finalize();
  f.ch.num_bsts = 1;
  f.ch.total_ues = 1;
  f.ch.h = {(VectorXcd(1) << std::complex<double>(1, 0)).finished()};
  f.qa_now = VectorXd::Constant(1, 1.0);
  f.qa_frame = f.qa_now;
  f.qu_frame = VectorXd::Zero(1);
  f.harvest = VectorXd::Zero(1);

  const double phi = std::log(2.0);  // f = sqrt(exp(qa*phi)-1) = 1
  const auto res = slot_solver::solve_fixed_phi(f.problem(all_active(1)), phi);
  REQUIRE(res.ok());
  CHECK(res.decision.beams[0](0).real() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(res.decision.beams[0](0).imag()) <= 1e-9);
  CHECK(res.decision.beams[0].squaredNorm() == doctest::Approx(1.0).epsilon(1e-6));

  const auto check = slot_solver::check_decision(f.problem(all_active(1)), res.decision);
  CHECK(check.cone_violation <= 1e-6);
  CHECK(check.activeness_residual <= 1e-5);
  CHECK(check.imag_residual <= 1e-9);
  CHECK(check.rate_limit_ok);
}

TEST_CASE("phi = 0 reduces to the exchange-only program") {
  RngStream rng(31, StreamTag::Channel);
  const Fixture f = make_fixture(2, 2, {1, 1}, true, rng);
  const auto prob = f.problem(all_active(2));
  const auto res = slot_solver::solve_fixed_phi(prob, 0.0);
  REQUIRE(res.ok());
  CHECK(res.decision.rates.isZero());
  for (int u = 0; u < 2; ++u) CHECK(res.decision.beams[u].isZero());

  const energy::ExchangePlan plan = slot_solver::exchange_only(prob);
  CHECK(res.decision.exchange.delta_mw(0) ==
        doctest::Approx(plan.delta_mw(0)).epsilon(1e-6));
}

TEST_CASE("exchange-only transfers iff beta * buy > sell, up to the need") {
  model::Topology topo;
  topo.num_bsts = 2;
  topo.antennas_per_bst = 1;
  topo.ues_per_bst = {1, 1};
  topo.distance_m = Eigen::MatrixXd::Constant(2, 2, 1.0);
  topo.noise_mw = VectorXd::Constant(2, 1.0);
  topo.max_tx_mw = VectorXd::Constant(2, 10.0);
  topo.baseband_mw = VectorXd::Constant(2, 1.0);
  topo.lines.push_back({0, 1, 0.8});
  topo.finalize();

  // BST0 surplus 100, BST1 deficit 100.
  const VectorXd powers = VectorXd::Constant(2, 50.0);
  const VectorXd harvest = (VectorXd(2) << 150.0, -50.0 + 0.0).finished();

  SUBCASE("transfer pays: beta*buy > sell") {
    const energy::EnergyPrices prices{1.6e-9, 0.6e-9};
    const auto plan = slot_solver::optimal_exchange(
        topo, prices, powers, (VectorXd(2) << 150.0, 0.0).finished());
    // Receiver needs 50; sender has 100 spare: delta = min(100, 50/0.8).
    CHECK(plan.delta_mw(0) == doctest::Approx(50.0 / 0.8).epsilon(1e-4));
  }
  SUBCASE("transfer loses: beta*buy < sell") {
    const energy::EnergyPrices prices{1.6e-9, 1.4e-9};
    const auto plan = slot_solver::optimal_exchange(
        topo, prices, powers, (VectorXd(2) << 150.0, 0.0).finished());
    CHECK(std::abs(plan.delta_mw(0)) <= 1e-6);
  }
  SUBCASE("symmetric deficit: no transfer") {
    const energy::EnergyPrices prices{1.6e-9, 0.6e-9};
    const auto plan = slot_solver::optimal_exchange(
        topo, prices, powers, (VectorXd(2) << 10.0, 10.0).finished());
    CHECK(std::abs(plan.delta_mw(0)) <= 1e-6);
  }
}

TEST_CASE("solver matches the brute-force oracle on tiny instances") {
  RngStream rng(77, StreamTag::Channel);
  int compared = 0;
  for (int trial = 0; trial < 6; ++trial) {
    Fixture f = (trial % 2 == 0) ? make_fixture(2, 2, {1, 1}, true, rng)
                                 : make_fixture(1, 2, {2}, false, rng);
    const auto prob = f.problem(all_active(2));
    const double phi = 0.2 + 0.1 * (trial % 3);
    const auto res = slot_solver::solve_fixed_phi(prob, phi);
    if (!res.ok()) continue;  // target occasionally infeasible; fine
    oracle::GridSpec spec;
    spec.points_per_dim = 5;
    const auto oracle_res = oracle::brute_force_slot(prob, phi, spec);
    REQUIRE(oracle_res.feasible);
    const double scale = std::max(1.0, std::abs(oracle_res.objective));
    // The grid can only overestimate the minimum.
    CHECK(oracle_res.objective >= res.decision.objective - 1e-3 * scale);
    CHECK(std::abs(oracle_res.objective - res.decision.objective) <=
          1e-3 * scale);
    ++compared;
  }
  CHECK(compared >= 3);
}

TEST_CASE("fixed-phi objective is nondecreasing in phi under zero rate weights") {
  RngStream rng(5, StreamTag::Channel);
  Fixture f = make_fixture(2, 2, {1, 1}, true, rng);
  f.qu_frame = f.qa_frame;  // rate weights 0
  const auto prob = f.problem(all_active(2));
  double prev = -1e300;
  for (double phi : {0.0, 0.1, 0.2, 0.3}) {
    const auto res = slot_solver::solve_fixed_phi(prob, phi);
    REQUIRE(res.ok());
    CHECK(res.decision.objective >= prev - 1e-7);
    prev = res.decision.objective;
  }
}

TEST_CASE("search_phi saturates at the feasibility edge when rate dominates") {
  RngStream rng(13, StreamTag::Channel);
  Fixture f = make_fixture(1, 2, {1}, false, rng);
  f.qa_frame = VectorXd::Constant(1, 1e6);  // weight q_U - q_A = -1e6
  f.qu_frame = VectorXd::Zero(1);
  f.v = 1e-12;
  const auto prob = f.problem(all_active(1));
  const auto res = slot_solver::search_phi(prob);
  REQUIRE(res.ok());

  // Oracle for the feasibility edge: bisection on solve_fixed_phi.
  double lo = 0.0, hi = 1.0;
  if (slot_solver::solve_fixed_phi(prob, 1.0).ok()) {
    lo = 1.0;
  } else {
    while (hi - lo > 1e-5)
      (slot_solver::solve_fixed_phi(prob, 0.5 * (lo + hi)).ok() ? lo : hi) =
          0.5 * (lo + hi);
  }
  CHECK(res.decision.phi >= lo - 2e-3);
}

TEST_CASE("search_phi collapses toward zero when energy dominates") {
  RngStream rng(14, StreamTag::Channel);
  Fixture f = make_fixture(1, 2, {1}, false, rng);
  f.qa_frame = f.qa_now + VectorXd::Constant(1, 1e-3);  // weight -1e-3
  f.qu_frame = VectorXd::Zero(1);
  f.v = 1e12;
  const auto prob = f.problem(all_active(1));
  const auto res = slot_solver::search_phi(prob);
  REQUIRE(res.ok());
  CHECK(res.decision.phi <= 0.08);
  // At phi ~ 0 the decision costs no more than staying idle.
  const auto idle = slot_solver::solve_fixed_phi(prob, 0.0);
  CHECK(res.decision.objective <=
        idle.decision.objective + 1e-6 * std::abs(idle.decision.objective));
}

TEST_CASE("tsube_slot with an empty schedule bills circuit power") {
  RngStream rng(15, StreamTag::Channel);
  Fixture f = make_fixture(2, 2, {1, 1}, true, rng);
  controller::FrameSchedule none;
  none.active.assign(2, 0);
  const auto res = slot_solver::tsube_slot(f.problem(none));
  REQUIRE(res.ok());
  CHECK(res.decision.phi == 0.0);
  for (int m = 0; m < 2; ++m)
    CHECK(res.decision.bst_power_mw(m) ==
          doctest::Approx(f.topo.circuit_power_mw(m)));
}

TEST_CASE("slot decision invariants hold on random instances") {
  RngStream rng(16, StreamTag::Channel);
  for (int trial = 0; trial < 5; ++trial) {
    Fixture f = make_fixture(2, 3, {2, 1}, true, rng);
    const auto prob = f.problem(all_active(3));
    const auto res = slot_solver::tsube_slot(prob);
    REQUIRE(res.ok());
    const auto check = slot_solver::check_decision(prob, res.decision);
    CHECK(check.exchange_violation == 0.0);
    CHECK(check.cone_violation <= 1e-6);
    CHECK(check.activeness_residual <= 1e-5);
    CHECK(check.imag_residual <= 1e-9);
    CHECK(check.power_violation <= 1e-6);
    CHECK(check.proportional_residual <= 1e-4);
    CHECK(check.rate_limit_ok);
    CHECK(res.decision.phi <= 1.0);
  }
}

TEST_CASE("feasible-set inclusion orders the three algorithms") {
  RngStream rng(18, StreamTag::Channel);
  for (int trial = 0; trial < 4; ++trial) {
    Fixture f = make_fixture(2, 3, {1, 1}, true, rng);
    const auto prob = f.problem(all_active(2));
    const auto tsube = slot_solver::tsube_slot(prob);
    const auto wolpe = baselines::wolpe_slot(prob);
    const auto zfbf = baselines::zfbf_slot(prob);
    REQUIRE(tsube.ok());
    REQUIRE(wolpe.ok());
    REQUIRE(zfbf.ok());
    const double tol =
        1e-5 * std::max({1.0, std::abs(tsube.decision.objective),
                         std::abs(zfbf.decision.objective)});
    CHECK(tsube.decision.objective <= wolpe.decision.objective + tol);
    // ZFBF with exchange dominates the full solve with exchange.
    CHECK(tsube.decision.objective <= zfbf.decision.objective + tol);
  }
}

TEST_CASE("wolpe equals tsube when there are no power lines") {
  RngStream rng(19, StreamTag::Channel);
  Fixture f = make_fixture(2, 2, {1, 1}, false, rng);
  const auto prob = f.problem(all_active(2));
  const auto tsube = slot_solver::tsube_slot(prob);
  const auto wolpe = baselines::wolpe_slot(prob);
  REQUIRE(tsube.ok());
  REQUIRE(wolpe.ok());
  CHECK(tsube.decision.phi == wolpe.decision.phi);
  CHECK(tsube.decision.objective == doctest::Approx(wolpe.decision.objective));
}

TEST_CASE("cone program dump is emitted for a positive-target slot") {
  RngStream rng(20, StreamTag::Channel);
  Fixture f = make_fixture(2, 2, {1, 1}, true, rng);
  std::ostringstream os;
  CHECK(slot_solver::dump_fixed_phi(f.problem(all_active(2)), 0.2, os));
  CHECK(os.str().find("soc") != std::string::npos);
  std::ostringstream empty;
  CHECK_FALSE(slot_solver::dump_fixed_phi(f.problem(all_active(2)), 0.0, empty));
}
