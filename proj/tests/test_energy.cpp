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

#include "sgpcn/energy.hpp"

using namespace sgpcn;
using Eigen::VectorXd;

namespace {

model::Topology line_topology(int num_bsts, std::vector<model::PowerLine> lines) {
  model::Topology t;
  t.num_bsts = num_bsts;
  t.antennas_per_bst = 1;
  t.ues_per_bst.assign(num_bsts, 1);
  t.distance_m = Eigen::MatrixXd::Constant(num_bsts, num_bsts, 100.0);
  t.noise_mw = VectorXd::Constant(num_bsts, 1.0);
  t.max_tx_mw = VectorXd::Constant(num_bsts, 400.0);
  t.baseband_mw = VectorXd::Constant(num_bsts, 100.0);
  t.lines = std::move(lines);
  t.finalize();
  return t;
}

}  // namespace

TEST_CASE("price invariant") {
  energy::EnergyPrices good;
  good.validate();
  energy::EnergyPrices bad{0.5e-9, 0.6e-9};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("net exchange debits senders fully and credits receivers beta-scaled") {
  model::Topology topo = line_topology(2, {{0, 1, 0.8}});
  energy::ExchangePlan plan = energy::ExchangePlan::zeros(topo);
  plan.delta_mw(0) = 10.0;
  CHECK(energy::net_exchange_mw(plan, 0, topo) == doctest::Approx(10.0));
  CHECK(energy::net_exchange_mw(plan, 1, topo) == doctest::Approx(-8.0));

  plan.delta_mw(0) = 0.0;
  CHECK(energy::net_exchange_mw(plan, 0, topo) == 0.0);
  CHECK(energy::net_exchange_mw(plan, 1, topo) == 0.0);
}

TEST_CASE("net exchange sums over a star of edges") {
  model::Topology topo = line_topology(3, {{0, 1, 0.8}, {0, 2, 0.8}});
  energy::ExchangePlan plan = energy::ExchangePlan::zeros(topo);
  plan.delta_mw(0) = 5.0;   // 0 -> 1 sends 5
  plan.delta_mw(1) = -5.0;  // 2 -> 0 sends 5, so BST0 receives 4
  CHECK(energy::net_exchange_mw(plan, 0, topo) == doctest::Approx(1.0));
}

TEST_CASE("edge endpoints never both report outflow") {
  model::Topology topo = line_topology(2, {{0, 1, 0.6}});
  RngStream rng(3);
  for (int i = 0; i < 200; ++i) {
    energy::ExchangePlan plan = energy::ExchangePlan::zeros(topo);
    plan.delta_mw(0) = rng.uniform(-50.0, 50.0);
    const double a = energy::net_exchange_mw(plan, 0, topo);
    const double b = energy::net_exchange_mw(plan, 1, topo);
    CHECK(a * b <= 0.0);
    // Receiver credit is exactly beta times the sender debit.
    if (a > 0.0) CHECK(-b == doctest::Approx(0.6 * a).epsilon(1e-12));
    if (b > 0.0) CHECK(-a == doctest::Approx(0.6 * b).epsilon(1e-12));
  }
}

TEST_CASE("grid expenditure branches exactly") {
  const energy::EnergyPrices prices{1.6e-9, 0.6e-9};
  CHECK(energy::grid_expenditure(100.0, 0.0, 0.0, prices) ==
        doctest::Approx(1.6e-7).epsilon(1e-12));
  CHECK(energy::grid_expenditure(0.0, 0.0, 100.0, prices) ==
        doctest::Approx(-0.6e-7).epsilon(1e-12));
  CHECK(energy::grid_expenditure(50.0, 25.0, 75.0, prices) == 0.0);

  // Piecewise-linear convexity and monotonicity along the net argument.
  double prev = energy::grid_expenditure(-200.0, 0.0, 0.0, prices);
  double prev_slope = -1.0;
  for (double net = -150.0; net <= 200.0; net += 50.0) {
    const double v = energy::grid_expenditure(net, 0.0, 0.0, prices);
    CHECK(v >= prev - 1e-18);
    const double slope = (v - prev) / 50.0;
    CHECK(slope >= prev_slope - 1e-18);
    prev = v;
    prev_slope = slope;
  }
}

TEST_CASE("harvest draws are frame-constant with the configured mean") {
  const VectorXd means = (VectorXd(2) << 300.0, 200.0).finished();
  RngStream rng(21, StreamTag::Harvest);
  VectorXd acc = VectorXd::Zero(2);
  const int frames = 100000;
  const int frame_slots = 5;
  for (int k = 0; k < frames; ++k) {
    const energy::HarvestState h = energy::draw_harvest(means, rng, frame_slots, k);
    acc += h.per_slot_mw(frame_slots);
  }
  CHECK(acc(0) / frames == doctest::Approx(300.0).epsilon(0.02));
  CHECK(acc(1) / frames == doctest::Approx(200.0).epsilon(0.02));

  RngStream a(4, StreamTag::Harvest), b(4, StreamTag::Harvest);
  const energy::HarvestState ha = energy::draw_harvest(means, a, frame_slots);
  const energy::HarvestState hb = energy::draw_harvest(means, b, frame_slots);
  CHECK(ha.per_frame_mw_slot == hb.per_frame_mw_slot);

  RngStream rz(9, StreamTag::Harvest);
  const energy::HarvestState hz =
      energy::draw_harvest(VectorXd::Zero(2), rz, frame_slots);
  CHECK(hz.per_frame_mw_slot.isZero());
}
