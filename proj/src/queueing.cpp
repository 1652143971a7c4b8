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

#include "sgpcn/queueing.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgpcn::queueing {

void TrafficSpec::validate() const {
  if (mean_arrival.size() == 0 || processing_rate.size() == 0)
    throw std::invalid_argument("traffic: per-UE vectors must be non-empty");
  if (mean_arrival.size() != processing_rate.size())
    throw std::invalid_argument("traffic: mean_arrival and processing_rate sizes differ");
  if ((mean_arrival.array() < 0.0).any())
    throw std::invalid_argument("traffic: mean arrival rates must be non-negative");
  if ((processing_rate.array() < 0.0).any())
    throw std::invalid_argument("traffic: processing rates must be non-negative");
  if (max_arrival < 0.0 || max_rate < 0.0 || max_service < 0.0)
    throw std::invalid_argument("traffic: rate bounds must be non-negative");
  if ((2.0 * mean_arrival.array() > max_arrival).any())
    throw std::invalid_argument(
        "traffic: max_arrival must be at least twice every mean arrival rate");
  if ((processing_rate.array() > max_service).any())
    throw std::invalid_argument("traffic: processing rate exceeds max_service");
}

Eigen::VectorXd draw_arrivals(const TrafficSpec& spec, RngStream& rng) {
  Eigen::VectorXd out(spec.mean_arrival.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double v = rng.uniform(0.0, 2.0 * spec.mean_arrival(i));
    out(i) = std::min(v, spec.max_arrival);
  }
  return out;
}

double step_access(double backlog, double rate, double arrival) {
  if (rate > backlog * (1.0 + 1e-12) + 1e-15)
    throw std::logic_error("step_access: rate exceeds backlog (solver bug upstream)");
  return std::max(backlog - rate, 0.0) + arrival;
}

double step_processing(double backlog, double processing_rate, double rate) {
  return backlog - std::min(processing_rate, backlog) + rate;
}

}  // namespace sgpcn::queueing
