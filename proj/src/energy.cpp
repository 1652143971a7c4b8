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

#include "sgpcn/energy.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgpcn::energy {

void EnergyPrices::validate() const {
  if (!(buy > sell && sell >= 0.0))
    throw std::invalid_argument("prices: require buy > sell >= 0");
}

double net_exchange_mw(const ExchangePlan& plan, int bst,
                       const model::Topology& topology) {
  double total = 0.0;
  for (std::size_t e = 0; e < topology.lines.size(); ++e) {
    const model::PowerLine& line = topology.lines[e];
    double delta;
    if (line.bst_a == bst)
      delta = plan.delta_mw(static_cast<Eigen::Index>(e));
    else if (line.bst_b == bst)
      delta = -plan.delta_mw(static_cast<Eigen::Index>(e));
    else
      continue;
    total += std::max(delta, line.efficiency * delta);
  }
  return total;
}

double grid_expenditure(double bst_power_mw, double net_exchange_mw,
                        double harvest_slot_mw, const EnergyPrices& prices) {
  const double net = bst_power_mw + net_exchange_mw - harvest_slot_mw;
  return (prices.buy - prices.sell) * std::max(net, 0.0) + prices.sell * net;
}

HarvestState draw_harvest(const Eigen::VectorXd& mean_rates_mw, RngStream& rng,
                          int frame_slots, long frame) {
  HarvestState out;
  out.frame = frame;
  out.per_frame_mw_slot.resize(mean_rates_mw.size());
  for (Eigen::Index m = 0; m < mean_rates_mw.size(); ++m)
    out.per_frame_mw_slot(m) =
        static_cast<double>(frame_slots) * rng.uniform(0.0, 2.0 * mean_rates_mw(m));
  return out;
}

}  // namespace sgpcn::energy
