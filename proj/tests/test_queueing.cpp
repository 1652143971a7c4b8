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

#include "sgpcn/queueing.hpp"

using namespace sgpcn;
using Eigen::VectorXd;

namespace {

queueing::TrafficSpec spec_with_mean(double mean) {
  queueing::TrafficSpec s;
  s.mean_arrival = VectorXd::Constant(1, mean);
  s.max_arrival = 2.0 * std::max(mean, 1.0);
  s.processing_rate = VectorXd::Constant(1, 8.0);
  s.max_rate = 10.0;
  s.max_service = 8.0;
  return s;
}

}  // namespace

TEST_CASE("arrival draws have the configured mean and are deterministic") {
  queueing::TrafficSpec s = spec_with_mean(2.1);
  s.validate();

  RngStream rng(11, StreamTag::Arrival);
  double acc = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) acc += queueing::draw_arrivals(s, rng)(0);
  CHECK(acc / draws == doctest::Approx(2.1).epsilon(0.02));

  RngStream a(5, StreamTag::Arrival), b(5, StreamTag::Arrival);
  for (int i = 0; i < 50; ++i)
    CHECK(queueing::draw_arrivals(s, a)(0) == queueing::draw_arrivals(s, b)(0));

  queueing::TrafficSpec zero = spec_with_mean(0.0);
  RngStream rz(1, StreamTag::Arrival);
  for (int i = 0; i < 10; ++i) CHECK(queueing::draw_arrivals(zero, rz)(0) == 0.0);
}

TEST_CASE("arrival bound violations are configuration errors") {
  queueing::TrafficSpec s = spec_with_mean(2.1);
  s.max_arrival = 3.0;  // < 2 * 2.1
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("access queue stepping") {
  CHECK(queueing::step_access(5.0, 2.0, 1.0) == doctest::Approx(4.0));
  CHECK(queueing::step_access(0.0, 0.0, 3.0) == doctest::Approx(3.0));
  CHECK(queueing::step_access(2.5, 2.5, 0.0) == 0.0);
  CHECK_THROWS_AS(queueing::step_access(1.0, 1.5, 0.0), std::logic_error);
}

TEST_CASE("processing queue stepping") {
  CHECK(queueing::step_processing(3.0, 8.0, 2.0) == doctest::Approx(2.0));
  CHECK(queueing::step_processing(10.0, 8.0, 0.0) == doctest::Approx(2.0));
  CHECK(queueing::step_processing(0.0, 8.0, 0.0) == 0.0);
}

TEST_CASE("queues telescope exactly over a frame and conserve flow") {
  RngStream rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    double qa = rng.uniform(0.0, 10.0);
    double qu = rng.uniform(0.0, 10.0);
    const double qa0 = qa, qu0 = qu;
    const double s_tilde = rng.uniform(0.0, 5.0);
    double sum_nu = 0.0, sum_r = 0.0, sum_s = 0.0;
    for (int t = 0; t < 7; ++t) {
      const double r = rng.uniform(0.0, 1.0) * qa;  // rate <= backlog
      const double nu = rng.uniform(0.0, 3.0);
      const double served = std::min(s_tilde, qu);
      sum_r += r;
      sum_nu += nu;
      sum_s += served;
      qu = queueing::step_processing(qu, s_tilde, r);
      qa = queueing::step_access(qa, r, nu);
      CHECK(qa >= 0.0);
      CHECK(qu >= 0.0);
    }
    CHECK(qa == doctest::Approx(qa0 + sum_nu - sum_r).epsilon(1e-12));
    CHECK(qu == doctest::Approx(qu0 + sum_r - sum_s).epsilon(1e-12));
  }
}
