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

#include "sgpcn/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sgpcn::model {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("topology: " + what);
}

}  // namespace

double Topology::circuit_power_mw(int bst) const {
  const double l = static_cast<double>(antennas_per_bst);
  return baseband_mw(bst) * (0.87 + 0.1 * l + 0.03 * l * l);
}

void Topology::finalize() {
  require(num_bsts >= 1, "need at least one BST");
  require(antennas_per_bst >= 1, "need at least one antenna");
  require(static_cast<int>(ues_per_bst.size()) == num_bsts,
          "ues_per_bst size must equal num_bsts");

  ue_offsets_.assign(num_bsts, 0);
  serving_bst_.clear();
  total_ues_ = 0;
  for (int m = 0; m < num_bsts; ++m) {
    require(ues_per_bst[m] >= 0, "negative UE count");
    ue_offsets_[m] = total_ues_;
    total_ues_ += ues_per_bst[m];
    for (int n = 0; n < ues_per_bst[m]; ++n) serving_bst_.push_back(m);
  }
  require(total_ues_ >= 1, "need at least one UE");

  require(distance_m.rows() == num_bsts && distance_m.cols() == total_ues_,
          "distance matrix must be num_bsts x total_ues");
  require((distance_m.array() > 0.0).all(), "distances must be positive");
  require(carrier_freq_ghz > 0.0, "carrier frequency must be positive");
  require(noise_mw.size() == total_ues_, "noise vector must have one entry per UE");
  require((noise_mw.array() > 0.0).all(), "noise power must be positive");
  require(pa_efficiency > 0.0 && pa_efficiency <= 1.0,
          "amplifier efficiency must lie in (0, 1]");
  require(max_tx_mw.size() == num_bsts, "max_tx vector must have one entry per BST");
  require((max_tx_mw.array() > 0.0).all(), "max transmit power must be positive");
  require(baseband_mw.size() == num_bsts,
          "baseband vector must have one entry per BST");
  require((baseband_mw.array() > 0.0).all(), "baseband power must be positive");

  neighbors_.assign(num_bsts, {});
  for (const PowerLine& e : lines) {
    require(e.bst_a >= 0 && e.bst_b < num_bsts && e.bst_a < e.bst_b,
            "power line endpoints must satisfy 0 <= a < b < num_bsts");
    require(e.efficiency > 0.0 && e.efficiency < 1.0,
            "line efficiency must lie in (0, 1)");
    for (int other : neighbors_[e.bst_a])
      require(other != e.bst_b, "duplicate power line");
    neighbors_[e.bst_a].push_back(e.bst_b);
    neighbors_[e.bst_b].push_back(e.bst_a);
  }

  omega_.resize(num_bsts, total_ues_);
  for (int j = 0; j < num_bsts; ++j)
    for (int u = 0; u < total_ues_; ++u)
      omega_(j, u) =
          std::pow(10.0, pathloss_db(distance_m(j, u), carrier_freq_ghz) / 10.0);
}

double pathloss_db(double distance_m, double carrier_freq_ghz) {
  if (distance_m <= 0.0 || carrier_freq_ghz <= 0.0)
    throw std::domain_error("pathloss_db: distance and frequency must be positive");
  return 17.3 + 38.3 * std::log10(distance_m) + 24.9 * std::log10(carrier_freq_ghz);
}

ChannelRealization draw_channels(const Topology& topology, RngStream& rng,
                                 long slot) {
  ChannelRealization out;
  out.num_bsts = topology.num_bsts;
  out.total_ues = topology.total_ues();
  out.slot = slot;
  out.h.resize(static_cast<std::size_t>(out.num_bsts) * out.total_ues);
  const int l = topology.antennas_per_bst;
  for (int j = 0; j < out.num_bsts; ++j) {
    for (int u = 0; u < out.total_ues; ++u) {
      const double var = 0.5 / topology.pathloss_linear(j, u);
      Eigen::VectorXcd& v = out.of(j, u);
      v.resize(l);
      for (int a = 0; a < l; ++a) v(a) = rng.complex_gaussian(var);
    }
  }
  return out;
}

double sinr(const ChannelRealization& channel,
            const std::vector<std::uint8_t>& scheduled, const BeamSet& beams,
            int ue, const Topology& topology) {
  if (!scheduled[ue]) return 0.0;
  const int serving = topology.serving_bst(ue);

  auto beam_power_into = [&](int tx_bst, int tx_ue) {
    const Eigen::VectorXcd& w = beams[tx_ue];
    if (w.size() == 0) return 0.0;
    return std::norm(channel.of(tx_bst, ue).dot(w));
  };

  const double signal = beam_power_into(serving, ue);
  double interference = 0.0;
  for (int other = 0; other < topology.total_ues(); ++other) {
    if (other == ue || !scheduled[other]) continue;
    interference += beam_power_into(topology.serving_bst(other), other);
  }
  return signal / (interference + topology.noise_mw(ue));
}

double rate_nats(double sinr_value) { return std::log1p(sinr_value); }

double bst_power_mw(const BeamSet& beams, int bst, const Topology& topology) {
  double tx = 0.0;
  for (int n = 0; n < topology.ues_per_bst[bst]; ++n) {
    const Eigen::VectorXcd& w = beams[topology.ue_index(bst, n)];
    if (w.size() > 0) tx += w.squaredNorm();
  }
  return tx / topology.pa_efficiency + topology.circuit_power_mw(bst);
}

}  // namespace sgpcn::model
