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
#include <vector>

#include "sgpcn/slot_solver.hpp"

namespace sgpcn::baselines {

/// Fixed zero-forcing beam directions: for each scheduled UE, the projection
/// of its own channel onto the null space of the channels its serving BST
/// sees toward every other scheduled UE network-wide.
struct ZfDirections {
  std::vector<Eigen::VectorXcd> direction;  // unit norm; empty if unscheduled
  Eigen::VectorXd gain;                     // ||Xi^H h||
};

/// Computes the directions via SVD of the stacked cross channels. Throws
/// std::runtime_error naming the UE and the deficient dimension when the
/// null space is empty or orthogonal to the UE's own channel.
ZfDirections zf_directions(const model::ChannelRealization& channel,
                           const controller::FrameSchedule& schedule,
                           const model::Topology& topology);

/// Zero-forcing slot decision: with interference nulled by construction the
/// per-UE transmit powers are fixed by the rate targets, so each phi
/// evaluation reduces to closed-form powers plus the exchange program. Uses
/// the same phi search as the full solver.
slot_solver::SlotResult zfbf_slot(const slot_solver::PerSlotProblem& problem);

/// The no-local-exchange variant: the full per-slot solve with every power
/// line flow fixed to zero.
slot_solver::SlotResult wolpe_slot(const slot_solver::PerSlotProblem& problem);

}  // namespace sgpcn::baselines
