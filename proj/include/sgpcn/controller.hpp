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
#include <vector>

#include "sgpcn/model.hpp"
#include "sgpcn/queueing.hpp"

namespace sgpcn::controller {

/// Scheduled-UE indicators for one frame.
struct FrameSchedule {
  std::vector<std::uint8_t> active;  // a_{m,n}[k], one per flat UE index
  long frame = 0;

  int num_active() const;
  /// Flat indices of the scheduled UEs of each BST.
  std::vector<std::vector<int>> active_sets(const model::Topology& topology) const;
};

/// The frame-scale scheduling rule: a UE is scheduled iff its access backlog
/// strictly exceeds its processing backlog and is positive. Ties
/// (q_U - q_A = 0) are left unscheduled.
FrameSchedule schedule_frame(const Eigen::VectorXd& q_access,
                             const Eigen::VectorXd& q_processing, long frame = 0);

/// Quadratic Lyapunov value (||q_A||^2 + ||q_U||^2) / 2.
double lyapunov_value(const Eigen::VectorXd& q_access,
                      const Eigen::VectorXd& q_processing);

struct DriftTerms {
  double drift = 0.0;             // L[k+1] - L[k], realized
  double access_inner = 0.0;      // sum_t (nu - r)' q_A[k]
  double processing_inner = 0.0;  // sum_t (r - s)' q_U[k]
};

/// Exact realized one-frame drift and the two inner-product terms, computed
/// by telescoping the queue dynamics over the frame. All three per-slot
/// vectors must have one entry per slot of the frame; throws
/// std::invalid_argument on an incomplete frame.
DriftTerms drift_terms(const Eigen::VectorXd& q_access0,
                       const Eigen::VectorXd& q_processing0,
                       const std::vector<Eigen::VectorXd>& arrivals,
                       const std::vector<Eigen::VectorXd>& rates,
                       const std::vector<Eigen::VectorXd>& services);

/// Control parameter, frame length and the drift constant Psi.
struct LyapunovConfig {
  double v = 0.1;
  int frame_slots = 5;
  double psi = 0.0;

  static LyapunovConfig make(double v, int frame_slots,
                             const queueing::TrafficSpec& traffic, int total_ues);
};

}  // namespace sgpcn::controller
