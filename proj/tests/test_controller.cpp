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

#include "sgpcn/controller.hpp"

using namespace sgpcn;
using Eigen::VectorXd;

TEST_CASE("scheduling rule follows the backlog comparison") {
  auto rule = [](double qa, double qu) {
    const VectorXd a = VectorXd::Constant(1, qa);
    const VectorXd u = VectorXd::Constant(1, qu);
    return static_cast<int>(controller::schedule_frame(a, u).active[0]);
  };
  CHECK(rule(5.0, 2.0) == 1);
  CHECK(rule(2.0, 5.0) == 0);
  CHECK(rule(0.0, 0.0) == 0);
  CHECK(rule(3.0, 3.0) == 0);  // tie q_U - q_A = 0 stays unscheduled
  CHECK(rule(0.0, -0.0) == 0);
}

TEST_CASE("a scheduled UE always has positive access backlog exceeding processing") {
  RngStream rng(2);
  VectorXd qa(50), qu(50);
  for (int i = 0; i < 50; ++i) {
    qa(i) = rng.uniform(0.0, 4.0);
    qu(i) = rng.uniform(0.0, 4.0);
  }
  qa(7) = 0.0;
  const controller::FrameSchedule sched = controller::schedule_frame(qa, qu);
  for (int i = 0; i < 50; ++i) {
    if (sched.active[i]) {
      CHECK(qa(i) > 0.0);
      CHECK(qa(i) > qu(i));
    } else {
      CHECK((qu(i) >= qa(i) || qa(i) == 0.0));
    }
  }
}

TEST_CASE("lyapunov value") {
  CHECK(controller::lyapunov_value(VectorXd::Zero(3), VectorXd::Zero(3)) == 0.0);
  const VectorXd qa = (VectorXd(2) << 3.0, 4.0).finished();
  CHECK(controller::lyapunov_value(qa, VectorXd::Zero(2)) == doctest::Approx(12.5));
  CHECK(controller::lyapunov_value(2.0 * qa, VectorXd::Zero(2)) ==
        doctest::Approx(50.0));
}

TEST_CASE("drift terms reproduce the hand-evaluated single-queue case") {
  const VectorXd qa0 = VectorXd::Constant(1, 2.0);
  const VectorXd qu0 = VectorXd::Zero(1);
  const std::vector<VectorXd> nu{VectorXd::Constant(1, 1.0)};
  const std::vector<VectorXd> r{VectorXd::Zero(1)};
  const std::vector<VectorXd> s{VectorXd::Zero(1)};
  const controller::DriftTerms d = controller::drift_terms(qa0, qu0, nu, r, s);
  CHECK(d.drift == doctest::Approx(2.5));
  CHECK(d.access_inner == doctest::Approx(2.0));
  CHECK(d.processing_inner == 0.0);

  CHECK_THROWS_AS(controller::drift_terms(qa0, qu0, {}, {}, {}),
                  std::invalid_argument);
}

TEST_CASE("drift identity holds to machine precision on random frames") {
  RngStream rng(17);
  for (int frame = 0; frame < 100; ++frame) {
    const int ues = 4;
    const int slots = 5;
    VectorXd qa0(ues), qu0(ues);
    for (int i = 0; i < ues; ++i) {
      qa0(i) = rng.uniform(0.0, 20.0);
      qu0(i) = rng.uniform(0.0, 20.0);
    }
    std::vector<VectorXd> nu(slots), r(slots), s(slots);
    VectorXd qa = qa0, qu = qu0;
    for (int t = 0; t < slots; ++t) {
      nu[t].resize(ues);
      r[t].resize(ues);
      s[t].resize(ues);
      for (int i = 0; i < ues; ++i) {
        r[t](i) = rng.uniform(0.0, 1.0) * qa(i);
        nu[t](i) = rng.uniform(0.0, 4.0);
        s[t](i) = std::min(8.0, qu(i));
        qa(i) += nu[t](i) - r[t](i);
        qu(i) += r[t](i) - s[t](i);
      }
    }
    const controller::DriftTerms d = controller::drift_terms(qa0, qu0, nu, r, s);

    // Oracle: direct Lyapunov evaluation at the stepped state.
    const double direct =
        controller::lyapunov_value(qa, qu) - controller::lyapunov_value(qa0, qu0);
    CHECK(d.drift == doctest::Approx(direct).epsilon(1e-9));

    // Exact identity: drift = sum over queues of net^2/2 + q0 * net.
    double identity = 0.0;
    VectorXd net_a = VectorXd::Zero(ues), net_u = VectorXd::Zero(ues);
    for (int t = 0; t < slots; ++t) {
      net_a += nu[t] - r[t];
      net_u += r[t] - s[t];
    }
    identity += 0.5 * net_a.squaredNorm() + qa0.dot(net_a);
    identity += 0.5 * net_u.squaredNorm() + qu0.dot(net_u);
    CHECK(std::abs(d.drift - identity) <= 1e-9);
  }
}

TEST_CASE("lyapunov config derives the drift constant") {
  queueing::TrafficSpec traffic;
  traffic.mean_arrival = VectorXd::Constant(6, 2.1);
  traffic.max_arrival = 4.2;
  traffic.processing_rate = VectorXd::Constant(6, 8.0);
  traffic.max_rate = 10.0;
  traffic.max_service = 8.0;
  const controller::LyapunovConfig cfg =
      controller::LyapunovConfig::make(0.1, 5, traffic, 6);
  CHECK(cfg.psi ==
        doctest::Approx(0.5 * (64.0 + 200.0 + 17.64) * 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(controller::LyapunovConfig::make(0.0, 5, traffic, 6),
                  std::invalid_argument);
  CHECK_THROWS_AS(controller::LyapunovConfig::make(1.0, 0, traffic, 6),
                  std::invalid_argument);
}
