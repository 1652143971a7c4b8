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

// Brute-force validators, kept independent of the cone-program path.
//
// The slot optimum lies on the manifold where every SINR constraint is
// tight, which a plain box lattice over beam coordinates almost never hits.
// The search therefore grids over phase-fixed beam *directions* (plus the
// exchange flow); for fixed directions the tight-constraint power scalings
// solve a small linear system, so every candidate is evaluated exactly on
// that manifold and only the power caps remain as rejection tests.

#include "sgpcn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgpcn::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orthonormal columns with the first aligned to h (Gram-Schmidt over unit
// vectors, skipping the most parallel one for stability).
Eigen::MatrixXcd gs_basis(const Eigen::VectorXcd& h) {
  const int l = static_cast<int>(h.size());
  Eigen::MatrixXcd basis(l, l);
  basis.col(0) = h / h.norm();
  int filled = 1;
  for (int cand = 0; cand < l && filled < l; ++cand) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(l, cand);
    for (int k = 0; k < filled; ++k) v -= basis.col(k).dot(v) * basis.col(k);
    const double norm = v.norm();
    if (norm > 1e-8) basis.col(filled++) = v / norm;
  }
  if (filled != l) throw std::runtime_error("gs_basis: degenerate channel");
  return basis;
}

struct OracleBeam {
  int ue = 0;
  int bst = 0;
  double f = 0.0;
  Eigen::MatrixXcd basis;
  int offset = 0;  // first direction coordinate in the search vector
};

}  // namespace

BruteForceResult brute_force_slot(const slot_solver::PerSlotProblem& problem,
                                  double phi, const GridSpec& spec) {
  const model::Topology& topo = *problem.topology;
  const model::ChannelRealization& ch = *problem.channel;
  const int l = topo.antennas_per_bst;
  const int num_edges = static_cast<int>(topo.lines.size());
  const bool exchange = problem.allow_exchange && num_edges > 0;
  if (num_edges > 1)
    throw std::invalid_argument("brute_force_slot: at most one power line");

  // Beams with positive targets; scheduled zero-target UEs stay silent.
  std::vector<OracleBeam> beams;
  std::vector<int> active;
  int dims = 0;
  const int dir_dim = 2 * l - 1;  // phase-fixed direction coordinates
  for (int u = 0; u < topo.total_ues(); ++u) {
    if (!problem.schedule.active[u]) continue;
    active.push_back(u);
    const double target = problem.q_access_now(u) * phi;
    if (target <= 0.0) continue;
    OracleBeam b;
    b.ue = u;
    b.bst = topo.serving_bst(u);
    b.f = std::sqrt(std::expm1(target));
    b.basis = gs_basis(ch.of(b.bst, u));
    b.offset = dims;
    dims += dir_dim;
    beams.push_back(std::move(b));
  }
  const int nb = static_cast<int>(beams.size());
  if (nb * l > 4)
    throw std::invalid_argument("brute_force_slot: total beam dimension > 4");
  const int delta_dim = exchange ? 1 : 0;
  const int total_dims = dims + delta_dim;

  const Eigen::VectorXd weights = problem.rate_weights();
  double rate_term = 0.0;
  for (int u : active) rate_term += weights(u) * problem.q_access_now(u) * phi;

  // Search box: unit-scale direction coordinates (the first is nonnegative
  // by the phase convention), the exchange flow within the system's energy
  // scale.
  std::vector<double> lo(total_dims), hi(total_dims);
  for (const OracleBeam& b : beams) {
    lo[b.offset] = 0.0;
    hi[b.offset] = 1.0;
    for (int i = 1; i < dir_dim; ++i) {
      lo[b.offset + i] = -1.0;
      hi[b.offset + i] = 1.0;
    }
  }
  if (exchange) {
    double scale = 0.0;
    for (int m = 0; m < topo.num_bsts; ++m)
      scale += problem.harvest_slot_mw(m) + topo.circuit_power_mw(m) +
               topo.max_tx_mw(m) / topo.pa_efficiency;
    lo[dims] = -scale;
    hi[dims] = scale;
  }
  const std::vector<double> lo0 = lo, hi0 = hi;

  int np = spec.points_per_dim | 1;  // odd, so the incumbent stays on the grid
  np = std::max(np, 3);
  double per_round = 1.0;
  for (int d = 0; d < total_dims; ++d) per_round *= np;
  if (per_round > static_cast<double>(spec.budget))
    throw std::length_error("brute_force_slot: grid exceeds evaluation budget");

  BruteForceResult result;
  result.objective = kInf;
  std::vector<double> best_point(total_dims, 0.0);

  std::vector<Eigen::VectorXcd> dirs(nb);
  Eigen::MatrixXd sinr_system(nb, nb);
  Eigen::VectorXd noise(nb), scaling(nb);

  auto evaluate = [&](const std::vector<double>& x) -> double {
    // Directions from the phase-fixed coordinates.
    for (int k = 0; k < nb; ++k) {
      const OracleBeam& b = beams[k];
      Eigen::VectorXcd coords(l);
      coords(0) = x[b.offset];
      for (int a = 1; a < l; ++a)
        coords(a) = std::complex<double>(x[b.offset + 2 * a - 1],
                                         x[b.offset + 2 * a]);
      const double norm = coords.norm();
      if (norm < 1e-9) return kInf;
      dirs[k] = b.basis * (coords / norm);
    }
    // Tight-constraint power scalings: for y = per-beam power,
    //   y_i (g_ii / f_i)^2 - sum_j c_ij y_j = sigma_i^2.
    for (int i = 0; i < nb; ++i) {
      const double own = ch.of(beams[i].bst, beams[i].ue).dot(dirs[i]).real();
      if (own <= 0.0) return kInf;
      sinr_system(i, i) = own * own / (beams[i].f * beams[i].f);
      for (int j = 0; j < nb; ++j) {
        if (j == i) continue;
        sinr_system(i, j) =
            -std::norm(ch.of(beams[j].bst, beams[i].ue).dot(dirs[j]));
      }
      noise(i) = topo.noise_mw(beams[i].ue);
    }
    if (nb > 0) {
      scaling = sinr_system.fullPivLu().solve(noise);
      if ((scaling.array() < 0.0).any() ||
          (sinr_system * scaling - noise).norm() > 1e-8 * noise.norm())
        return kInf;
    }
    // Power caps.
    for (int m = 0; m < topo.num_bsts; ++m) {
      double tx = 0.0;
      for (int k = 0; k < nb; ++k)
        if (beams[k].bst == m) tx += scaling(k);
      if (tx > topo.max_tx_mw(m) * (1.0 + 1e-9)) return kInf;
    }
    // Objective.
    const double delta = exchange ? x[dims] : 0.0;
    double cost = 0.0;
    for (int m = 0; m < topo.num_bsts; ++m) {
      double tx = 0.0;
      for (int k = 0; k < nb; ++k)
        if (beams[k].bst == m) tx += scaling(k);
      const double power = tx / topo.pa_efficiency + topo.circuit_power_mw(m);
      double net_exchange = 0.0;
      if (exchange) {
        const model::PowerLine& line = topo.lines[0];
        const double signed_delta = line.bst_a == m ? delta
                                    : line.bst_b == m ? -delta
                                                      : 0.0;
        net_exchange = std::max(signed_delta, line.efficiency * signed_delta);
      }
      cost += energy::grid_expenditure(power, net_exchange,
                                       problem.harvest_slot_mw(m),
                                       problem.prices);
    }
    return problem.v * 3.1536e11 * cost + rate_term;  // same cost unit as the solver
  };

  std::vector<double> point(total_dims, 0.0);
  std::vector<int> idx(total_dims, 0);

  if (total_dims == 0) {
    // Only the constant decision (no beams, no exchange) exists.
    result.feasible = true;
    result.objective = evaluate(point);
    result.evaluations = 1;
    result.rounds = 1;
  }

  int stalled_rounds = 0;
  for (int round = 0; total_dims > 0 && round < spec.max_rounds; ++round) {
    const double incumbent_before = result.objective;
    std::fill(idx.begin(), idx.end(), 0);
    bool done = false;
    while (!done) {
      for (int d = 0; d < total_dims; ++d)
        point[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (np - 1);
      const double value = evaluate(point);
      ++result.evaluations;
      if (value < result.objective) {
        result.objective = value;
        result.feasible = true;
        best_point = point;
      }
      int d = 0;
      for (; d < total_dims; ++d) {
        if (++idx[d] < np) break;
        idx[d] = 0;
      }
      done = d == total_dims;
    }
    result.rounds = round + 1;

    if (!result.feasible) break;  // nothing to refine around
    // Shrink each dimension to one grid step around the incumbent; when the
    // incumbent sits on a box edge, recenter at the same width instead so
    // the search can keep walking toward an optimum outside the box.
    bool walked = false;
    double widest = 0.0;
    for (int d = 0; d < total_dims; ++d) {
      const double width = hi[d] - lo[d];
      const double step = width / (np - 1);
      const bool on_edge = best_point[d] <= lo[d] + 0.5 * step ||
                           best_point[d] >= hi[d] - 0.5 * step;
      const bool at_box_low = best_point[d] <= lo0[d] + 0.5 * step;
      const bool at_box_high = best_point[d] >= hi0[d] - 0.5 * step;
      double half = step;
      if (on_edge && !at_box_low && !at_box_high) {
        half = width;
        walked = true;
      }
      lo[d] = std::max(lo0[d], best_point[d] - half);
      hi[d] = std::min(hi0[d], best_point[d] + half);
      widest = std::max(widest, (hi[d] - lo[d]) / (hi0[d] - lo0[d]));
    }
    // The objective is piecewise linear along the exchange flow, so the
    // incumbent can plateau for a few halvings before locking onto a kink;
    // require the no-improvement condition to persist at fine resolution.
    const double rel = (incumbent_before - result.objective) /
                       std::max(1.0, std::abs(result.objective));
    stalled_rounds = (!walked && rel < spec.objective_tol) ? stalled_rounds + 1 : 0;
    if (widest < 1e-7) break;
    if (stalled_rounds >= 3 && widest < 1e-3) break;
  }

  if (result.feasible && total_dims > 0) {
    evaluate(best_point);  // recompute dirs and scalings at the incumbent
    result.beams.assign(topo.total_ues(), {});
    for (int u : active)
      result.beams[u] = Eigen::VectorXcd::Zero(l);
    for (int k = 0; k < nb; ++k)
      result.beams[beams[k].ue] = std::sqrt(scaling(k)) * dirs[k];
    result.delta_mw = Eigen::VectorXd::Zero(num_edges);
    if (exchange) result.delta_mw(0) = best_point[dims];
  } else if (result.feasible) {
    result.beams.assign(topo.total_ues(), {});
    for (int u : active) result.beams[u] = Eigen::VectorXcd::Zero(l);
    result.delta_mw = Eigen::VectorXd::Zero(num_edges);
  }
  return result;
}

EnumerationResult enumerate_schedules(const FrameInputs& inputs) {
  const model::Topology& topo = *inputs.topology;
  const int total = topo.total_ues();
  if (total > 6)
    throw std::invalid_argument("enumerate_schedules: at most 6 UEs");
  const std::size_t slots = inputs.channels.size();
  if (slots == 0 || inputs.arrivals.size() != slots)
    throw std::invalid_argument("enumerate_schedules: incomplete frame inputs");

  EnumerationResult out;
  out.best_objective = kInf;
  const controller::FrameSchedule rule =
      controller::schedule_frame(inputs.q_access0, inputs.q_processing0);
  out.rule_schedule = rule.active;
  out.rule_objective = kInf;

  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    controller::FrameSchedule candidate;
    candidate.active.resize(total);
    for (int u = 0; u < total; ++u) candidate.active[u] = (mask >> u) & 1u;

    Eigen::VectorXd qa = inputs.q_access0;
    double value = 0.0;
    bool failed = false;
    for (std::size_t t = 0; t < slots && !failed; ++t) {
      slot_solver::PerSlotProblem prob;
      prob.topology = inputs.topology;
      prob.channel = &inputs.channels[t];
      prob.schedule = candidate;
      prob.q_access_now = qa;
      prob.q_access_frame = inputs.q_access0;
      prob.q_processing_frame = inputs.q_processing0;
      prob.harvest_slot_mw = inputs.harvest_slot_mw;
      prob.prices = inputs.prices;
      prob.v = inputs.v;
      prob.allow_exchange = inputs.allow_exchange;

      const slot_solver::SlotResult res = slot_solver::tsube_slot(prob);
      if (!res.ok()) {
        failed = true;
        break;
      }
      value += res.decision.objective;
      for (int u = 0; u < total; ++u)
        qa(u) = qa(u) - res.decision.rates(u) + inputs.arrivals[t](u);
    }
    if (failed) {
      ++out.skipped;
      continue;
    }
    if (value < out.best_objective) {
      out.best_objective = value;
      out.best_schedule = candidate.active;
    }
    if (candidate.active == rule.active) out.rule_objective = value;
  }
  return out;
}

}  // namespace sgpcn::oracle
