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

#include "sgpcn/controller.hpp"

#include <numeric>
#include <stdexcept>

namespace sgpcn::controller {

int FrameSchedule::num_active() const {
  return static_cast<int>(std::accumulate(active.begin(), active.end(), 0));
}

std::vector<std::vector<int>> FrameSchedule::active_sets(
    const model::Topology& topology) const {
  std::vector<std::vector<int>> sets(topology.num_bsts);
  for (int u = 0; u < topology.total_ues(); ++u)
    if (active[u]) sets[topology.serving_bst(u)].push_back(u);
  return sets;
}

FrameSchedule schedule_frame(const Eigen::VectorXd& q_access,
                             const Eigen::VectorXd& q_processing, long frame) {
  FrameSchedule out;
  out.frame = frame;
  out.active.resize(q_access.size());
  for (Eigen::Index u = 0; u < q_access.size(); ++u) {
    const bool unscheduled =
        q_processing(u) - q_access(u) >= 0.0 || q_access(u) == 0.0;
    out.active[u] = unscheduled ? 0 : 1;
  }
  return out;
}

double lyapunov_value(const Eigen::VectorXd& q_access,
                      const Eigen::VectorXd& q_processing) {
  return 0.5 * (q_access.squaredNorm() + q_processing.squaredNorm());
}

DriftTerms drift_terms(const Eigen::VectorXd& q_access0,
                       const Eigen::VectorXd& q_processing0,
                       const std::vector<Eigen::VectorXd>& arrivals,
                       const std::vector<Eigen::VectorXd>& rates,
                       const std::vector<Eigen::VectorXd>& services) {
  const std::size_t slots = arrivals.size();
  if (slots == 0 || rates.size() != slots || services.size() != slots)
    throw std::invalid_argument("drift_terms: incomplete frame trace");

  Eigen::VectorXd net_access = Eigen::VectorXd::Zero(q_access0.size());
  Eigen::VectorXd net_processing = Eigen::VectorXd::Zero(q_processing0.size());
  DriftTerms out;
  for (std::size_t t = 0; t < slots; ++t) {
    net_access += arrivals[t] - rates[t];
    net_processing += rates[t] - services[t];
    out.access_inner += (arrivals[t] - rates[t]).dot(q_access0);
    out.processing_inner += (rates[t] - services[t]).dot(q_processing0);
  }
  const Eigen::VectorXd qa1 = q_access0 + net_access;
  const Eigen::VectorXd qu1 = q_processing0 + net_processing;
  out.drift = lyapunov_value(qa1, qu1) - lyapunov_value(q_access0, q_processing0);
  return out;
}

LyapunovConfig LyapunovConfig::make(double v, int frame_slots,
                                    const queueing::TrafficSpec& traffic,
                                    int total_ues) {
  if (v <= 0.0) throw std::invalid_argument("control: V must be positive");
  if (frame_slots < 1) throw std::invalid_argument("control: frame_slots must be >= 1");
  LyapunovConfig out;
  out.v = v;
  out.frame_slots = frame_slots;
  const double s2 = traffic.max_service * traffic.max_service;
  const double r2 = traffic.max_rate * traffic.max_rate;
  const double n2 = traffic.max_arrival * traffic.max_arrival;
  out.psi = 0.5 * (s2 + 2.0 * r2 + n2) * static_cast<double>(total_ues);
  return out;
}

}  // namespace sgpcn::controller
