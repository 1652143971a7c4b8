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

#include "sgpcn/rng.hpp"

namespace sgpcn::model {

/// Undirected power line between two base stations; `bst_a < bst_b`.
/// `delta > 0` on this edge means energy flows a -> b.
struct PowerLine {
  int bst_a = 0;
  int bst_b = 0;
  double efficiency = 0.8;  // beta, in (0, 1)
};

/// Static network description: base stations, UEs, link geometry, power
/// budgets and the local power-line graph. UEs are indexed both as (bst, n)
/// and by a flat index grouped by serving BST.
struct Topology {
  int num_bsts = 0;              // M
  int antennas_per_bst = 0;      // L
  std::vector<int> ues_per_bst;  // N_m
  Eigen::MatrixXd distance_m;    // (bst j, ue u) -> link distance in meters
  double carrier_freq_ghz = 2.1;
  Eigen::VectorXd noise_mw;      // per-UE AWGN power sigma^2
  double pa_efficiency = 0.8;    // eta, in (0, 1]
  Eigen::VectorXd max_tx_mw;     // per-BST transmit power cap
  Eigen::VectorXd baseband_mw;   // per-BST baseband processing power P^sp
  std::vector<PowerLine> lines;

  int total_ues() const { return total_ues_; }
  int ue_offset(int bst) const { return ue_offsets_[bst]; }
  int ue_index(int bst, int n) const { return ue_offsets_[bst] + n; }
  int serving_bst(int ue) const { return serving_bst_[ue]; }
  const std::vector<int>& neighbors(int bst) const { return neighbors_[bst]; }

  /// Circuit power P^CIR = P^sp * (0.87 + 0.1 L + 0.03 L^2), consumed every
  /// slot regardless of scheduling.
  double circuit_power_mw(int bst) const;

  /// Linear pathloss omega of the (bst -> ue) link.
  double pathloss_linear(int bst, int ue) const { return omega_(bst, ue); }

  /// Derives caches (offsets, neighbor sets, pathloss) and validates all
  /// invariants. Throws std::invalid_argument on violation. Must be called
  /// after the public fields are filled and before any accessor above.
  void finalize();

 private:
  int total_ues_ = 0;
  std::vector<int> ue_offsets_;
  std::vector<int> serving_bst_;
  std::vector<std::vector<int>> neighbors_;
  Eigen::MatrixXd omega_;
};

/// Per-slot channel tensor; h[(j, u)] is the complex L-vector from BST j's
/// array to UE u.
struct ChannelRealization {
  int num_bsts = 0;
  int total_ues = 0;
  long slot = 0;
  std::vector<Eigen::VectorXcd> h;

  const Eigen::VectorXcd& of(int bst, int ue) const {
    return h[static_cast<std::size_t>(bst) * total_ues + ue];
  }
  Eigen::VectorXcd& of(int bst, int ue) {
    return h[static_cast<std::size_t>(bst) * total_ues + ue];
  }
};

/// Beamformers keyed by flat UE index; an empty vector means no beam.
using BeamSet = std::vector<Eigen::VectorXcd>;

/// 17.3 + 38.3 log10(d) + 24.9 log10(f_c), in dB.
/// Throws std::domain_error for non-positive arguments.
double pathloss_db(double distance_m, double carrier_freq_ghz);

/// Draws the full channel tensor, every entry i.i.d. circularly-symmetric
/// complex Gaussian with per-component variance omega^-1 / 2.
ChannelRealization draw_channels(const Topology& topology, RngStream& rng,
                                 long slot = 0);

/// Received SINR of `ue` under the given schedule and beams.
double sinr(const ChannelRealization& channel,
            const std::vector<std::uint8_t>& scheduled, const BeamSet& beams,
            int ue, const Topology& topology);

/// log(1 + sinr), nats per slot per Hz.
double rate_nats(double sinr_value);

/// Consumed power of one BST: transmit power over amplifier efficiency plus
/// circuit power.
double bst_power_mw(const BeamSet& beams, int bst, const Topology& topology);

}  // namespace sgpcn::model
