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
#include <complex>

#include "sgpcn/model.hpp"

using namespace sgpcn;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

model::Topology tiny_topology(int num_bsts, int antennas, std::vector<int> ues,
                              double distance = 200.0, double noise = 1.0) {
  model::Topology t;
  t.num_bsts = num_bsts;
  t.antennas_per_bst = antennas;
  t.ues_per_bst = std::move(ues);
  int total = 0;
  for (int n : t.ues_per_bst) total += n;
  t.distance_m = Eigen::MatrixXd::Constant(num_bsts, total, distance);
  t.noise_mw = VectorXd::Constant(total, noise);
  t.max_tx_mw = VectorXd::Constant(num_bsts, 400.0);
  t.baseband_mw = VectorXd::Constant(num_bsts, 100.0);
  t.finalize();
  return t;
}

}  // namespace

TEST_CASE("pathloss formula") {
  CHECK(model::pathloss_db(1.0, 1.0) == doctest::Approx(17.3));
  CHECK(model::pathloss_db(200.0, 2.1) == doctest::Approx(113.452709).epsilon(1e-8));
  CHECK(model::pathloss_db(10.0, 1.0) == doctest::Approx(55.6));
  CHECK_THROWS_AS(model::pathloss_db(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(model::pathloss_db(10.0, -1.0), std::domain_error);
}

TEST_CASE("pathloss is strictly increasing in distance and frequency") {
  double prev = model::pathloss_db(1.0, 2.1);
  for (double d : {5.0, 50.0, 500.0}) {
    const double v = model::pathloss_db(d, 2.1);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(model::pathloss_db(100.0, 2.5) > model::pathloss_db(100.0, 2.1));
}

TEST_CASE("channel draws are seed-deterministic and match the pathloss variance") {
  model::Topology topo = tiny_topology(1, 4, {2}, 50.0);
  RngStream rng_a(42, StreamTag::Channel);
  RngStream rng_b(42, StreamTag::Channel);
  const model::ChannelRealization a = model::draw_channels(topo, rng_a);
  const model::ChannelRealization b = model::draw_channels(topo, rng_b);
  for (std::size_t i = 0; i < a.h.size(); ++i) CHECK(a.h[i] == b.h[i]);

  RngStream rng_c(43, StreamTag::Channel);
  const model::ChannelRealization c = model::draw_channels(topo, rng_c);
  CHECK(a.h[0] != c.h[0]);

  // Law of large numbers: mean ||h||^2 / L -> omega^-1 within 2%.
  const double omega_inv = 1.0 / topo.pathloss_linear(0, 0);
  RngStream rng(7, StreamTag::Channel);
  double acc = 0.0;
  const int draws = 20000;  // 20000 draws x 8 complex entries
  for (int it = 0; it < draws; ++it) {
    const model::ChannelRealization ch = model::draw_channels(topo, rng);
    acc += (ch.of(0, 0).squaredNorm() + ch.of(0, 1).squaredNorm()) / (2.0 * 4);
  }
  CHECK(acc / draws == doctest::Approx(omega_inv).epsilon(0.02));
}

TEST_CASE("sinr of simple configurations") {
  // Single BST, single UE, L = 1, h = 1, w = 2, sigma^2 = 1 -> SINR 4.
  model::Topology topo = tiny_topology(1, 1, {1});
  model::ChannelRealization ch;
  ch.num_bsts = 1;
  ch.total_ues = 1;
  ch.h = {(VectorXcd(1) << std::complex<double>(1, 0)).finished()};
  model::BeamSet beams(1);
  beams[0] = (VectorXcd(1) << std::complex<double>(2, 0)).finished();
  CHECK(model::sinr(ch, {1}, beams, 0, topo) == doctest::Approx(4.0));
  CHECK(model::sinr(ch, {0}, beams, 0, topo) == 0.0);
}

TEST_CASE("orthogonal beams produce no intra-cell interference") {
  model::Topology topo = tiny_topology(1, 2, {2});
  model::ChannelRealization ch;
  ch.num_bsts = 1;
  ch.total_ues = 2;
  ch.h.resize(2);
  ch.of(0, 0) = (VectorXcd(2) << 1.0, 0.0).finished();
  ch.of(0, 1) = (VectorXcd(2) << 0.0, 1.0).finished();
  model::BeamSet beams(2);
  beams[0] = (VectorXcd(2) << 1.0, 0.0).finished();
  beams[1] = (VectorXcd(2) << 0.0, 1.0).finished();
  CHECK(model::sinr(ch, {1, 1}, beams, 0, topo) == doctest::Approx(1.0));
}

TEST_CASE("sinr is invariant to a common beam scaling at zero noise") {
  model::Topology topo = tiny_topology(2, 3, {2, 1}, 120.0, 1.0);
  topo.noise_mw.setConstant(1e-300);  // effectively zero
  topo.finalize();
  RngStream rng(3, StreamTag::Channel);
  const model::ChannelRealization ch = model::draw_channels(topo, rng);
  model::BeamSet beams(3);
  RngStream brng(5);
  for (auto& w : beams) {
    w.resize(3);
    for (int i = 0; i < 3; ++i)
      w(i) = std::complex<double>(brng.uniform(-1, 1), brng.uniform(-1, 1));
  }
  const std::vector<std::uint8_t> sched{1, 1, 1};
  const double base = model::sinr(ch, sched, beams, 1, topo);
  model::BeamSet scaled = beams;
  for (auto& w : scaled) w *= 3.7;
  CHECK(model::sinr(ch, sched, scaled, 1, topo) ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rate is the natural logarithm of 1 + sinr") {
  CHECK(model::rate_nats(0.0) == 0.0);
  CHECK(model::rate_nats(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
  CHECK(model::rate_nats(4.0) == doctest::Approx(std::log(5.0)).epsilon(1e-9));
}

TEST_CASE("bst power includes the circuit polynomial") {
  model::Topology t1 = tiny_topology(1, 1, {1});
  model::BeamSet none(1);
  CHECK(model::bst_power_mw(none, 0, t1) == doctest::Approx(100.0));

  model::Topology t6 = tiny_topology(1, 6, {1});
  t6.pa_efficiency = 0.8;
  t6.finalize();
  CHECK(model::bst_power_mw(none, 0, t6) == doctest::Approx(255.0));

  model::BeamSet one(1);
  one[0] = VectorXcd::Zero(6);
  one[0](0) = std::sqrt(80.0);
  CHECK(model::bst_power_mw(one, 0, t6) == doctest::Approx(355.0));
  CHECK(model::bst_power_mw(one, 0, t6) >= t6.circuit_power_mw(0));
}

TEST_CASE("topology invariants are validated") {
  model::Topology t;
  t.num_bsts = 2;
  t.antennas_per_bst = 2;
  t.ues_per_bst = {1, 1};
  t.distance_m = Eigen::MatrixXd::Constant(2, 2, 100.0);
  t.noise_mw = VectorXd::Constant(2, 1.0);
  t.max_tx_mw = VectorXd::Constant(2, 10.0);
  t.baseband_mw = VectorXd::Constant(2, 10.0);
  t.lines.push_back({0, 1, 0.8});
  t.finalize();
  CHECK(t.neighbors(0) == std::vector<int>{1});
  CHECK(t.neighbors(1) == std::vector<int>{0});

  model::Topology bad = t;
  bad.lines[0].efficiency = 1.0;
  CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);
  bad = t;
  bad.lines[0] = {1, 1, 0.8};
  CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);
  bad = t;
  bad.pa_efficiency = 0.0;
  CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);
  bad = t;
  bad.distance_m(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);
}
