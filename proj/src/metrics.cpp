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

#include "sgpcn/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgpcn::metrics {

std::vector<double> moving_average(const std::vector<double>& series,
                                   int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window >= 1");
  std::vector<double> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t span = std::min<std::size_t>(window, t + 1);
    double acc = 0.0;
    for (std::size_t i = t + 1 - span; i <= t; ++i) acc += series[i];
    out[t] = acc / static_cast<double>(span);
  }
  return out;
}

std::optional<double> little_delay(const std::vector<TraceRecord>& trace,
                                   int window) {
  if (window < 1) throw std::invalid_argument("little_delay: window >= 1");
  if (trace.empty()) return std::nullopt;
  const std::size_t span = std::min<std::size_t>(window, trace.size());
  double backlog = 0.0, arrivals = 0.0;
  for (std::size_t i = trace.size() - span; i < trace.size(); ++i) {
    backlog += trace[i].q_access.sum() + trace[i].q_processing.sum();
    arrivals += trace[i].arrival.sum();
  }
  if (arrivals <= 0.0) return std::nullopt;
  return backlog / arrivals;
}

double annualize(double mean_cost_cents_per_slot, double slot_ms,
                 double bst_scale) {
  if (slot_ms <= 0.0) throw std::invalid_argument("annualize: slot_ms > 0");
  const double slots_per_year = 3.1536e7 * (1000.0 / slot_ms);
  return mean_cost_cents_per_slot * slots_per_year * bst_scale / 100.0;
}

}  // namespace sgpcn::metrics
