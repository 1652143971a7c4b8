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

#include "sgpcn/baselines.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sgpcn::baselines {

namespace {

using slot_solver::SlotResult;
using slot_solver::SlotStatus;

}  // namespace

ZfDirections zf_directions(const model::ChannelRealization& channel,
                           const controller::FrameSchedule& schedule,
                           const model::Topology& topology) {
  const int total = topology.total_ues();
  const int l = topology.antennas_per_bst;
  std::vector<int> active;
  for (int u = 0; u < total; ++u)
    if (schedule.active[u]) active.push_back(u);

  ZfDirections out;
  out.direction.resize(total);
  out.gain = Eigen::VectorXd::Zero(total);

  for (int u : active) {
    const int m = topology.serving_bst(u);
    const Eigen::VectorXcd& own = channel.of(m, u);

    const int others = static_cast<int>(active.size()) - 1;
    Eigen::MatrixXcd stacked(std::max(others, 1), l);
    int r = 0;
    for (int b : active) {
      if (b == u) continue;
      stacked.row(r++) = channel.of(m, b).adjoint();
    }

    Eigen::MatrixXcd null_basis;
    if (others == 0) {
      null_basis = Eigen::MatrixXcd::Identity(l, l);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
      const Eigen::VectorXd sv = svd.singularValues();
      const double tol =
          std::max(others, l) * 1e-14 * (sv.size() > 0 ? sv(0) : 0.0);
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
      if (rank >= l) {
        std::ostringstream msg;
        msg << "zf_directions: UE " << u << " has an empty null space ("
            << others << " cross channels span all " << l << " dimensions)";
        throw std::runtime_error(msg.str());
      }
      null_basis = svd.matrixV().rightCols(l - rank);
    }

    const Eigen::VectorXcd projected = null_basis.adjoint() * own;
    const double gain = projected.norm();
    if (gain <= 1e-12 * own.norm()) {
      std::ostringstream msg;
      msg << "zf_directions: UE " << u
          << " own channel is orthogonal to its null space (dimension "
          << null_basis.cols() << ")";
      throw std::runtime_error(msg.str());
    }
    out.direction[u] = (null_basis * projected) / gain;
    out.gain(u) = gain;
  }
  return out;
}

SlotResult zfbf_slot(const slot_solver::PerSlotProblem& problem) {
  const model::Topology& topo = *problem.topology;
  if (problem.schedule.num_active() == 0)
    return slot_solver::tsube_slot(problem);  // exchange-only degenerate case

  const ZfDirections dirs =
      zf_directions(*problem.channel, problem.schedule, topo);

  std::vector<int> active;
  for (int u = 0; u < topo.total_ues(); ++u)
    if (problem.schedule.active[u]) active.push_back(u);

  // With interference zero by construction, the SNR targets pin the powers:
  // p = f(phi)^2 sigma^2 / gain^2.
  auto evaluate = [&](double phi, const socp::Settings&) -> SlotResult {
    Eigen::VectorXd tx_power = Eigen::VectorXd::Zero(topo.num_bsts);
    std::vector<double> p_ue(active.size(), 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) {
      const int u = active[i];
      const double f = slot_solver::f_phi(problem.q_access_now(u), phi);
      if (f == 0.0) continue;
      if (std::isinf(f)) {
        SlotResult bad;
        bad.status = SlotStatus::Infeasible;
        bad.detail = "rate target overflows";
        return bad;
      }
      p_ue[i] = f * f * topo.noise_mw(u) / (dirs.gain(u) * dirs.gain(u));
      tx_power(topo.serving_bst(u)) += p_ue[i];
    }
    for (int m = 0; m < topo.num_bsts; ++m)
      if (tx_power(m) > topo.max_tx_mw(m) * (1.0 + 1e-12)) {
        SlotResult bad;
        bad.status = SlotStatus::Infeasible;
        bad.detail = "zero-forcing powers exceed the transmit cap";
        return bad;
      }

    model::BeamSet beams(topo.total_ues());
    for (std::size_t i = 0; i < active.size(); ++i)
      beams[active[i]] = std::sqrt(p_ue[i]) * dirs.direction[active[i]];

    Eigen::VectorXd bst_power(topo.num_bsts);
    for (int m = 0; m < topo.num_bsts; ++m)
      bst_power(m) = tx_power(m) / topo.pa_efficiency + topo.circuit_power_mw(m);

    energy::ExchangePlan plan =
        problem.allow_exchange
            ? slot_solver::optimal_exchange(topo, problem.prices, bst_power,
                                            problem.harvest_slot_mw)
            : energy::ExchangePlan::zeros(topo);

    SlotResult out;
    out.status = SlotStatus::Ok;
    out.decision = slot_solver::make_decision(problem, phi, std::move(beams),
                                              std::move(plan), 0);
    return out;
  };

  double phi_cap = 1.0;
  for (int u : active) {
    if (problem.q_access_now(u) <= 0.0) continue;
    const double snr_max =
        dirs.gain(u) * dirs.gain(u) *
        topo.max_tx_mw(topo.serving_bst(u)) / topo.noise_mw(u);
    phi_cap = std::min(phi_cap, std::log1p(snr_max) / problem.q_access_now(u));
  }
  return slot_solver::search_phi_generic(problem, evaluate, phi_cap);
}

SlotResult wolpe_slot(const slot_solver::PerSlotProblem& problem) {
  slot_solver::PerSlotProblem restricted = problem;
  restricted.allow_exchange = false;
  return slot_solver::tsube_slot(restricted);
}

}  // namespace sgpcn::baselines
