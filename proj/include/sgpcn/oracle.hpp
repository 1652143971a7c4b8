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

#include "sgpcn/slot_solver.hpp"

namespace sgpcn::oracle {

/// Exhaustive-search configuration. points_per_dim is rounded up to an odd
/// count so the incumbent stays on the refined grid.
struct GridSpec {
  int points_per_dim = 5;
  long budget = 10'000'000;    // evaluations allowed per refinement round
  double objective_tol = 1e-4;  // relative improvement threshold to stop
  int max_rounds = 60;
};

struct BruteForceResult {
  bool feasible = false;
  double objective = 0.0;
  model::BeamSet beams;
  Eigen::VectorXd delta_mw;
  long evaluations = 0;
  int rounds = 0;
};

/// Independent validator for the fixed-phi slot problem: exhaustive search
/// over phase-fixed beam coordinates and exchange flows with box refinement
/// around the incumbent. Requires total beam dimension <= 4 and at most one
/// power line; throws std::invalid_argument otherwise, std::length_error when
/// a round would exceed the evaluation budget.
BruteForceResult brute_force_slot(const slot_solver::PerSlotProblem& problem,
                                  double phi, const GridSpec& spec = {});

/// A full frame of realized randomness for schedule enumeration.
struct FrameInputs {
  const model::Topology* topology = nullptr;
  Eigen::VectorXd q_access0;      // frame-start backlogs
  Eigen::VectorXd q_processing0;
  Eigen::VectorXd harvest_slot_mw;
  energy::EnergyPrices prices;
  double v = 0.1;
  bool allow_exchange = true;
  std::vector<model::ChannelRealization> channels;  // one per slot
  std::vector<Eigen::VectorXd> arrivals;            // one per slot
};

struct EnumerationResult {
  std::vector<std::uint8_t> best_schedule;
  double best_objective = 0.0;
  std::vector<std::uint8_t> rule_schedule;
  double rule_objective = 0.0;
  int skipped = 0;  // candidates dropped because a slot solve failed
};

/// Evaluates the realized frame objective (rate-weight term plus V times the
/// grid cost) for every one of the 2^N scheduled-UE indicator vectors on
/// identical channel and arrival realizations, and for the frame-scale rule.
/// Requires at most 6 UEs total.
EnumerationResult enumerate_schedules(const FrameInputs& inputs);

}  // namespace sgpcn::oracle
