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

#pragma once

#include <Eigen/Dense>

#include "sgpcn/rng.hpp"

namespace sgpcn::queueing {

/// Per-UE backlogs of the two cascaded queues, in nats/Hz.
struct QueueState {
  Eigen::VectorXd access;      // q^A
  Eigen::VectorXd processing;  // q^U
  long slot = 0;
};

/// Traffic parameters and the rate envelopes used for the drift constant.
struct TrafficSpec {
  Eigen::VectorXd mean_arrival;     // per-UE nu_bar, nats/slot/Hz
  double max_arrival = 0.0;         // nu^max
  Eigen::VectorXd processing_rate;  // per-UE s~, nats/slot/Hz
  double max_rate = 0.0;            // r^max envelope
  double max_service = 0.0;         // s^max

  /// Throws std::invalid_argument when a bound is violated, in particular
  /// when 2 * nu_bar > nu^max (the uniform arrival draw would clip).
  void validate() const;
};

/// Per-slot arrivals, i.i.d. uniform on [0, 2 nu_bar] per UE.
Eigen::VectorXd draw_arrivals(const TrafficSpec& spec, RngStream& rng);

/// Access-queue update q - r + nu. The solver guarantees r <= q; a violation
/// beyond rounding noise throws std::logic_error.
double step_access(double backlog, double rate, double arrival);

/// Processing-queue update q - min(s~, q) + r.
double step_processing(double backlog, double processing_rate, double rate);

}  // namespace sgpcn::queueing
