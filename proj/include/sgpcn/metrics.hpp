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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sgpcn::metrics {

/// One simulated slot, as persisted to the trace CSV. Queue backlogs are the
/// state at the start of the slot (what the decision saw).
struct TraceRecord {
  long slot = 0;
  long frame = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  double v = 0.0;
  double phi = 0.0;
  double total_cost_cents = 0.0;
  Eigen::VectorXd bst_cost_cents;
  Eigen::VectorXd delta_mw;  // per power line
  Eigen::VectorXd q_access;
  Eigen::VectorXd q_processing;
  Eigen::VectorXd rate;
  Eigen::VectorXd arrival;
};

/// Trailing moving average: entry t is the mean of the last min(window, t+1)
/// samples.
std::vector<double> moving_average(const std::vector<double>& series, int window);

/// Little's-law delay over the trailing `window` records: mean total backlog
/// of the two cascaded queues divided by the mean total arrival rate, in
/// slots. Absent when the mean arrival is zero.
std::optional<double> little_delay(const std::vector<TraceRecord>& trace,
                                   int window);

/// Presentation-only currency scaling: cents/slot to dollars/year for a
/// BST fleet of bst_scale, assuming slot_ms milliseconds per slot.
double annualize(double mean_cost_cents_per_slot, double slot_ms,
                 double bst_scale);

}  // namespace sgpcn::metrics
