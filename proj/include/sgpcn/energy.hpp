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

#include "sgpcn/model.hpp"
#include "sgpcn/rng.hpp"

namespace sgpcn::energy {

/// Two-way trading prices with the smart grid, cents/slot/mW.
struct EnergyPrices {
  double buy = 1.6e-9;   // alpha_b
  double sell = 0.6e-9;  // alpha_s

  /// Requires buy > sell >= 0; throws std::invalid_argument otherwise.
  void validate() const;
};

/// One signed flow per power line, in the line's a->b orientation. Storing a
/// single variable per edge makes the no-simultaneous-two-way-flow constraint
/// hold by construction.
struct ExchangePlan {
  Eigen::VectorXd delta_mw;  // one entry per Topology::lines edge

  static ExchangePlan zeros(const model::Topology& topology) {
    ExchangePlan p;
    p.delta_mw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(topology.lines.size()));
    return p;
  }
};

/// Per-frame harvested energy per BST, mW*slot.
struct HarvestState {
  Eigen::VectorXd per_frame_mw_slot;  // E^HAV[m] for the current frame
  long frame = 0;

  Eigen::VectorXd per_slot_mw(int frame_slots) const {
    return per_frame_mw_slot / static_cast<double>(frame_slots);
  }
};

/// Net energy leaving BST `bst` over its power lines:
/// sum over incident edges of max(delta, beta * delta), with delta read in
/// the BST's own orientation. Senders are debited the full flow, receivers
/// credited beta times it.
double net_exchange_mw(const ExchangePlan& plan, int bst,
                       const model::Topology& topology);

/// Grid-energy expenditure for one BST and slot, cents:
/// (alpha_b - alpha_s) * max(net, 0) + alpha_s * net,
/// where net = bst_power + net_exchange - harvest_per_slot. Deficits are
/// bought at alpha_b, surpluses sold at alpha_s (negative cost).
double grid_expenditure(double bst_power_mw, double net_exchange_mw,
                        double harvest_slot_mw, const EnergyPrices& prices);

/// Draws one frame of harvested energy: per BST the slot rate is uniform on
/// [0, 2 * mean] and constant within the frame, so the frame total is
/// frame_slots times the draw.
HarvestState draw_harvest(const Eigen::VectorXd& mean_rates_mw, RngStream& rng,
                          int frame_slots, long frame = 0);

}  // namespace sgpcn::energy
