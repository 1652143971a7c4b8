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

// The per-slot convexified problem: for a fixed rate fraction phi, the joint
// beamforming / energy-exchange program is a second-order cone program.
//
//   - Each beam is expressed in a unitary basis aligned with its own channel,
//     so Im(h^H w) = 0 holds structurally and the cone's top entry is a plain
//     real variable. Cone data of UE u is row-scaled by sqrt(omega_u) so the
//     solver sees O(1) numbers.
//   - The SINR equality target enters as the relaxed cone
//       h^H w >= f(phi) * || (cross-beam inner products, sigma) ||,
//     tight at the optimum.
//   - max(delta, beta delta) and the positive part of the grid draw enter
//     through per-BST epigraph variables; transmit power through a quadratic
//     epigraph p >= ||w||^2 with a linear cap p <= P^max.
//
// The energy part of the objective is scaled by 1/(V alpha_b); the decision
// for a fixed phi is independent of V, which only weighs the rate term of
// the phi search.

#include "sgpcn/slot_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace sgpcn::slot_solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid cost enters the drift-plus-penalty objective in the fleet-year unit
// the control parameter V is calibrated for: cents/slot scaled to
// dollars/year across a thousand BSTs at 1 ms slots. Reported costs stay in
// cents/slot; the fixed-phi solve is independent of this weight.
constexpr double kCostUnitPerCent = 3.1536e11;

struct ActiveBeam {
  int ue = 0;
  int bst = 0;
  double f = 0.0;           // rate-target amplitude
  double rho = 1.0;         // cone row scaling sqrt(omega of the serving link)
  double top_gain = 0.0;    // rho * ||h_own||
  Eigen::MatrixXcd basis;   // w = basis * c with Im(c_1) = 0 dropped
  int var_offset = 0;       // first real coordinate of c
};

// Unitary basis whose adjoint maps the own channel to ||h|| e1.
Eigen::MatrixXcd own_channel_basis(const Eigen::VectorXcd& h) {
  const Eigen::Index l = h.size();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(h);
  Eigen::MatrixXcd u = qr.householderQ();
  const std::complex<double> r = qr.matrixQR()(0, 0);
  if (std::abs(r) > 0.0) u.col(0) *= r / std::abs(r);
  else u = Eigen::MatrixXcd::Identity(l, l);
  return u;
}

// Real coordinates of a beam: [Re c_1, Re c_2, Im c_2, ..., Re c_L, Im c_L].
int beam_dim(int antennas) { return 2 * antennas - 1; }

// Adds the two rows (Re, Im) of scale * (t^H c) over beam coordinates.
void fill_cross_rows(Eigen::MatrixXd& g, int row, int col0,
                     const Eigen::VectorXcd& t, double scale) {
  const int l = static_cast<int>(t.size());
  g(row, col0) = -scale * t(0).real();
  g(row + 1, col0) = scale * t(0).imag();
  for (int a = 1; a < l; ++a) {
    const int cr = col0 + 1 + 2 * (a - 1);
    g(row, cr) = -scale * t(a).real();
    g(row, cr + 1) = -scale * t(a).imag();
    g(row + 1, cr) = scale * t(a).imag();
    g(row + 1, cr + 1) = -scale * t(a).real();
  }
}

struct Assembly {
  socp::Problem prob;
  std::vector<ActiveBeam> beams;
  std::vector<int> p_var;  // per BST, -1 when it has no beams
  int delta0 = -1;         // first exchange variable, -1 when absent
  int num_edges = 0;
};

// Builds the cone program for a fixed phi. Requires at least one beam with a
// positive rate target.
Assembly assemble(const PerSlotProblem& pr,
                  const std::vector<ActiveBeam>& beams) {
  const model::Topology& topo = *pr.topology;
  const model::ChannelRealization& ch = *pr.channel;
  const int num_bsts = topo.num_bsts;
  const int bd = beam_dim(topo.antennas_per_bst);
  const int s_plus = static_cast<int>(beams.size());

  Assembly as;
  as.beams = beams;
  as.num_edges =
      pr.allow_exchange ? static_cast<int>(topo.lines.size()) : 0;

  // Variable layout: beam coordinates, exchange flows, exchange epigraphs,
  // transmit-power epigraphs, grid-draw epigraphs.
  int n = 0;
  for (ActiveBeam& b : as.beams) {
    b.var_offset = n;
    n += bd;
  }
  as.delta0 = as.num_edges > 0 ? n : -1;
  n += as.num_edges;
  const int u0 = n;
  n += 2 * as.num_edges;
  as.p_var.assign(num_bsts, -1);
  std::vector<std::vector<const ActiveBeam*>> beams_of(num_bsts);
  for (const ActiveBeam& b : as.beams) beams_of[b.bst].push_back(&b);
  for (int m = 0; m < num_bsts; ++m)
    if (!beams_of[m].empty()) {
      as.p_var[m] = n;
      ++n;
    }
  const int t0 = n;
  n += num_bsts;

  int num_p = 0;
  for (int m = 0; m < num_bsts; ++m) num_p += as.p_var[m] >= 0 ? 1 : 0;
  const int nonneg_rows = 2 * num_bsts + 4 * as.num_edges + num_p;
  int soc_rows = 0;
  socp::ConeSpec cones;
  cones.nonneg = nonneg_rows;
  for (int k = 0; k < s_plus; ++k) {
    cones.soc.push_back(2 + 2 * (s_plus - 1));
    soc_rows += cones.soc.back();
  }
  for (int m = 0; m < num_bsts; ++m)
    if (as.p_var[m] >= 0) {
      cones.soc.push_back(2 + bd * static_cast<int>(beams_of[m].size()));
      soc_rows += cones.soc.back();
    }

  socp::Problem& p = as.prob;
  p.cones = cones;
  p.c = Eigen::VectorXd::Zero(n);
  p.G = Eigen::MatrixXd::Zero(nonneg_rows + soc_rows, n);
  p.h = Eigen::VectorXd::Zero(nonneg_rows + soc_rows);

  // Objective, scaled by 1/(V alpha_b).
  const double price_ratio = pr.prices.sell / pr.prices.buy;
  for (int m = 0; m < num_bsts; ++m) {
    p.c(t0 + m) = 1.0 - price_ratio;
    if (as.p_var[m] >= 0)
      p.c(as.p_var[m]) = price_ratio / topo.pa_efficiency;
  }
  for (int e = 0; e < 2 * as.num_edges; ++e) p.c(u0 + e) = price_ratio;

  int row = 0;
  // t_m >= 0.
  for (int m = 0; m < num_bsts; ++m) p.G(row++, t0 + m) = -1.0;
  // t_m >= P_m + E_m - H_m.
  for (int m = 0; m < num_bsts; ++m) {
    p.G(row, t0 + m) = -1.0;
    if (as.p_var[m] >= 0) p.G(row, as.p_var[m]) = 1.0 / topo.pa_efficiency;
    for (int e = 0; e < as.num_edges; ++e) {
      if (topo.lines[e].bst_a == m) p.G(row, u0 + 2 * e) = 1.0;
      if (topo.lines[e].bst_b == m) p.G(row, u0 + 2 * e + 1) = 1.0;
    }
    p.h(row) = pr.harvest_slot_mw(m) - topo.circuit_power_mw(m);
    ++row;
  }
  // Exchange epigraphs u >= delta, u >= beta delta on each side.
  for (int e = 0; e < as.num_edges; ++e) {
    const double beta = topo.lines[e].efficiency;
    const int d = as.delta0 + e;
    const int ua = u0 + 2 * e, ub = u0 + 2 * e + 1;
    p.G(row, ua) = -1.0;
    p.G(row++, d) = 1.0;
    p.G(row, ua) = -1.0;
    p.G(row++, d) = beta;
    p.G(row, ub) = -1.0;
    p.G(row++, d) = -1.0;
    p.G(row, ub) = -1.0;
    p.G(row++, d) = -beta;
  }
  // p_m <= P^max.
  for (int m = 0; m < num_bsts; ++m)
    if (as.p_var[m] >= 0) {
      p.G(row, as.p_var[m]) = 1.0;
      p.h(row) = topo.max_tx_mw(m);
      ++row;
    }

  // SINR cones: h^H w >= f * ||(cross products, sigma)||.
  for (const ActiveBeam& rx : as.beams) {
    p.G(row, rx.var_offset) = -rx.top_gain;
    ++row;
    for (const ActiveBeam& tx : as.beams) {
      if (tx.ue == rx.ue) continue;
      const Eigen::VectorXcd t =
          tx.basis.adjoint() * (rx.rho * ch.of(tx.bst, rx.ue));
      fill_cross_rows(p.G, row, tx.var_offset, t, rx.f);
      row += 2;
    }
    p.h(row) = rx.f * rx.rho * std::sqrt(topo.noise_mw(rx.ue));
    ++row;
  }
  // Transmit-power epigraphs p >= sum ||w||^2 as ||(x, (p-1)/2)|| <= (p+1)/2.
  for (int m = 0; m < num_bsts; ++m) {
    if (as.p_var[m] < 0) continue;
    p.G(row, as.p_var[m]) = -0.5;
    p.h(row) = 0.5;
    ++row;
    p.G(row, as.p_var[m]) = -0.5;
    p.h(row) = -0.5;
    ++row;
    for (const ActiveBeam* b : beams_of[m])
      for (int i = 0; i < bd; ++i) p.G(row++, b->var_offset + i) = -1.0;
  }

  return as;
}

// Active beams with positive rate targets, or infeasibility via the exact
// single-link bound: the target rate can never exceed ln(1 + ||h||^2 P / s2).
std::optional<std::vector<ActiveBeam>> positive_target_beams(
    const PerSlotProblem& pr, double phi, std::string* detail) {
  const model::Topology& topo = *pr.topology;
  std::vector<ActiveBeam> beams;
  for (int u = 0; u < topo.total_ues(); ++u) {
    if (!pr.schedule.active[u]) continue;
    const double target = pr.q_access_now(u) * phi;
    if (target <= 0.0) continue;
    const int m = topo.serving_bst(u);
    const Eigen::VectorXcd& h = pr.channel->of(m, u);
    const double snr_max = h.squaredNorm() * topo.max_tx_mw(m) / topo.noise_mw(u);
    if (target > std::log1p(snr_max) * (1.0 + 1e-12)) {
      if (detail)
        *detail = "rate target exceeds the single-link capacity bound";
      return std::nullopt;
    }
    ActiveBeam b;
    b.ue = u;
    b.bst = m;
    b.f = f_phi(pr.q_access_now(u), phi);
    b.rho = std::sqrt(topo.pathloss_linear(m, u));
    b.top_gain = b.rho * h.norm();
    b.basis = own_channel_basis(h);
    beams.push_back(std::move(b));
  }
  return beams;
}

SlotResult exchange_only_result(const PerSlotProblem& pr, double phi) {
  const model::Topology& topo = *pr.topology;
  model::BeamSet beams(topo.total_ues());
  for (int u = 0; u < topo.total_ues(); ++u)
    if (pr.schedule.active[u])
      beams[u] = Eigen::VectorXcd::Zero(topo.antennas_per_bst);
  energy::ExchangePlan plan =
      pr.allow_exchange ? exchange_only(pr) : energy::ExchangePlan::zeros(topo);
  SlotResult out;
  out.status = SlotStatus::Ok;
  out.decision = make_decision(pr, phi, std::move(beams), std::move(plan), 0);
  return out;
}

void validate_problem(const PerSlotProblem& pr) {
  if (pr.topology == nullptr || pr.channel == nullptr)
    throw std::invalid_argument("slot problem: missing topology or channel");
  const int total = pr.topology->total_ues();
  if (static_cast<int>(pr.schedule.active.size()) != total ||
      pr.q_access_now.size() != total || pr.q_access_frame.size() != total ||
      pr.q_processing_frame.size() != total ||
      pr.harvest_slot_mw.size() != pr.topology->num_bsts)
    throw std::invalid_argument("slot problem: dimension mismatch");
  if (pr.v <= 0.0) throw std::invalid_argument("slot problem: V must be positive");
  pr.prices.validate();
}

}  // namespace

double f_phi(double q_access, double phi) {
  const double arg = q_access * phi;
  if (arg <= 0.0) return 0.0;
  if (arg > 700.0) return kInf;  // exp would overflow: unattainable target
  return std::sqrt(std::expm1(arg));
}

socp::Settings search_settings() {
  socp::Settings st;
  st.feastol = 1e-6;
  st.abstol = 1e-8;
  st.reltol = 1e-6;
  st.max_iters = 50;
  st.refine_iters = 1;
  return st;
}

socp::Settings tight_settings() {
  socp::Settings st;
  st.feastol = 1e-7;
  st.abstol = 1e-8;
  st.reltol = 1e-8;
  st.max_iters = 80;
  st.refine_iters = 4;
  return st;
}

SlotDecision make_decision(const PerSlotProblem& problem, double phi,
                           model::BeamSet beams, energy::ExchangePlan exchange,
                           int solver_iterations) {
  const model::Topology& topo = *problem.topology;
  SlotDecision d;
  d.phi = phi;
  d.beams = std::move(beams);
  if (exchange.delta_mw.size() == 0) exchange = energy::ExchangePlan::zeros(topo);
  d.exchange = std::move(exchange);
  d.solver_iterations = solver_iterations;

  d.rates = Eigen::VectorXd::Zero(topo.total_ues());
  for (int u = 0; u < topo.total_ues(); ++u)
    if (problem.schedule.active[u]) d.rates(u) = problem.q_access_now(u) * phi;

  d.bst_power_mw.resize(topo.num_bsts);
  d.grid_cost_cents.resize(topo.num_bsts);
  for (int m = 0; m < topo.num_bsts; ++m) {
    d.bst_power_mw(m) = model::bst_power_mw(d.beams, m, topo);
    const double net = energy::net_exchange_mw(d.exchange, m, topo);
    d.grid_cost_cents(m) = energy::grid_expenditure(
        d.bst_power_mw(m), net, problem.harvest_slot_mw(m), problem.prices);
  }
  const Eigen::VectorXd weights = problem.rate_weights();
  d.objective = problem.v * kCostUnitPerCent * d.grid_cost_cents.sum() +
                weights.dot(d.rates);
  return d;
}

energy::ExchangePlan optimal_exchange(const model::Topology& topology,
                                      const energy::EnergyPrices& prices,
                                      const Eigen::VectorXd& bst_power_mw,
                                      const Eigen::VectorXd& harvest_slot_mw) {
  energy::ExchangePlan plan = energy::ExchangePlan::zeros(topology);
  const int num_edges = static_cast<int>(topology.lines.size());
  if (num_edges == 0) return plan;

  const int num_bsts = topology.num_bsts;
  const int u0 = num_edges;
  const int t0 = 3 * num_edges;
  const int n = 3 * num_edges + num_bsts;

  socp::Problem p;
  p.c = Eigen::VectorXd::Zero(n);
  const double price_ratio = prices.sell / prices.buy;
  for (int m = 0; m < num_bsts; ++m) p.c(t0 + m) = 1.0 - price_ratio;
  for (int e = 0; e < 2 * num_edges; ++e) p.c(u0 + e) = price_ratio;

  const int rows = 2 * num_bsts + 4 * num_edges;
  p.G = Eigen::MatrixXd::Zero(rows, n);
  p.h = Eigen::VectorXd::Zero(rows);
  p.cones.nonneg = rows;
  int row = 0;
  for (int m = 0; m < num_bsts; ++m) p.G(row++, t0 + m) = -1.0;
  for (int m = 0; m < num_bsts; ++m) {
    p.G(row, t0 + m) = -1.0;
    for (int e = 0; e < num_edges; ++e) {
      if (topology.lines[e].bst_a == m) p.G(row, u0 + 2 * e) = 1.0;
      if (topology.lines[e].bst_b == m) p.G(row, u0 + 2 * e + 1) = 1.0;
    }
    p.h(row) = harvest_slot_mw(m) - bst_power_mw(m);
    ++row;
  }
  for (int e = 0; e < num_edges; ++e) {
    const double beta = topology.lines[e].efficiency;
    p.G(row, u0 + 2 * e) = -1.0;
    p.G(row++, e) = 1.0;
    p.G(row, u0 + 2 * e) = -1.0;
    p.G(row++, e) = beta;
    p.G(row, u0 + 2 * e + 1) = -1.0;
    p.G(row++, e) = -1.0;
    p.G(row, u0 + 2 * e + 1) = -1.0;
    p.G(row++, e) = -beta;
  }

  const socp::Solution sol = socp::solve(p, search_settings());
  if (!socp::is_optimal(sol.status))
    throw std::runtime_error(std::string("exchange program failed: ") +
                             socp::to_string(sol.status));
  plan.delta_mw = sol.x.head(num_edges);
  return plan;
}

energy::ExchangePlan exchange_only(const PerSlotProblem& problem) {
  const model::Topology& topo = *problem.topology;
  Eigen::VectorXd powers(topo.num_bsts);
  for (int m = 0; m < topo.num_bsts; ++m) powers(m) = topo.circuit_power_mw(m);
  return optimal_exchange(topo, problem.prices, powers, problem.harvest_slot_mw);
}

SlotResult solve_fixed_phi(const PerSlotProblem& problem, double phi,
                           const socp::Settings& settings) {
  validate_problem(problem);
  if (phi < 0.0 || phi > 1.0)
    throw std::invalid_argument("solve_fixed_phi: phi outside [0, 1]");

  std::string detail;
  auto beams_opt = positive_target_beams(problem, phi, &detail);
  if (!beams_opt) {
    SlotResult out;
    out.status = SlotStatus::Infeasible;
    out.detail = detail;
    return out;
  }
  if (beams_opt->empty()) return exchange_only_result(problem, phi);

  const Assembly as = assemble(problem, *beams_opt);
  const socp::Solution sol = socp::solve(as.prob, settings);

  SlotResult out;
  if (socp::is_primal_infeasible(sol.status)) {
    out.status = SlotStatus::Infeasible;
    out.detail = socp::to_string(sol.status);
    return out;
  }
  if (!socp::is_optimal(sol.status)) {
    out.status = SlotStatus::SolverFailure;
    out.detail = socp::to_string(sol.status);
    return out;
  }

  const model::Topology& topo = *problem.topology;
  model::BeamSet beams(topo.total_ues());
  for (int u = 0; u < topo.total_ues(); ++u)
    if (problem.schedule.active[u])
      beams[u] = Eigen::VectorXcd::Zero(topo.antennas_per_bst);
  for (const ActiveBeam& b : as.beams) {
    Eigen::VectorXcd coords(topo.antennas_per_bst);
    coords(0) = sol.x(b.var_offset);
    for (int a = 1; a < topo.antennas_per_bst; ++a)
      coords(a) = std::complex<double>(sol.x(b.var_offset + 1 + 2 * (a - 1)),
                                       sol.x(b.var_offset + 2 + 2 * (a - 1)));
    beams[b.ue] = b.basis * coords;
  }
  energy::ExchangePlan plan = energy::ExchangePlan::zeros(topo);
  if (as.delta0 >= 0) plan.delta_mw = sol.x.segment(as.delta0, as.num_edges);

  out.status = SlotStatus::Ok;
  out.decision = make_decision(problem, phi, std::move(beams), std::move(plan),
                               sol.iterations);
  return out;
}

SlotResult solve_fixed_phi(const PerSlotProblem& problem, double phi) {
  return solve_fixed_phi(problem, phi, tight_settings());
}

bool dump_fixed_phi(const PerSlotProblem& problem, double phi,
                    std::ostream& os) {
  validate_problem(problem);
  auto beams_opt = positive_target_beams(problem, phi, nullptr);
  if (!beams_opt || beams_opt->empty()) return false;
  assemble(problem, *beams_opt).prob.dump(os);
  return true;
}

SlotResult search_phi_generic(const PerSlotProblem& problem,
                              const PhiEvaluator& evaluate, double phi_cap) {
  const socp::Settings loose = search_settings();
  const socp::Settings tight = tight_settings();
  phi_cap = std::clamp(phi_cap, 0.0, 1.0);

  // Degenerate frames: no backlog to drain, phi is irrelevant.
  double total_target = 0.0;
  for (int u = 0; u < problem.topology->total_ues(); ++u)
    if (problem.schedule.active[u]) total_target += problem.q_access_now(u);
  if (total_target <= 0.0 || phi_cap <= 0.0) return evaluate(0.0, tight);

  std::map<double, double> cache;  // phi -> objective, feasible only
  double best_phi = 0.0, best_obj = kInf;
  bool have_best = false;
  auto probe = [&](double phi) -> double {
    if (auto it = cache.find(phi); it != cache.end()) return it->second;
    const SlotResult r = evaluate(phi, loose);
    const double obj = r.ok() ? r.decision.objective : kInf;
    cache.emplace(phi, obj);
    if (r.ok() && (!have_best || obj < best_obj)) {
      have_best = true;
      best_obj = obj;
      best_phi = phi;
    }
    return obj;
  };

  // Largest feasible phi, by bisection unless the cap itself is feasible.
  double phi_hi = phi_cap;
  if (probe(phi_cap) == kInf) {
    double lo = 0.0, hi = phi_cap;
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      if (probe(mid) < kInf) lo = mid;
      else hi = mid;
    }
    phi_hi = lo;
  }
  if (phi_hi <= 0.0) return evaluate(0.0, tight);

  // Coarse grid on [0, phi_hi], then a golden-section refinement around the
  // grid minimizer. A non-unimodal coarse profile falls back to a fine grid.
  bool grid_fallback = false;
  auto grid_argmin = [&](int points, std::vector<double>& phis) {
    phis.resize(points);
    int gstar = 0;
    double fstar = kInf;
    for (int g = 0; g < points; ++g) {
      phis[g] = phi_hi * static_cast<double>(g) / (points - 1);
      const double v = probe(phis[g]);
      if (v < fstar) {
        fstar = v;
        gstar = g;
      }
    }
    return gstar;
  };
  std::vector<double> phis;
  int gstar = grid_argmin(16, phis);
  const double tol_u = 1e-7 * (1.0 + std::abs(best_obj));
  bool unimodal = true;
  for (int g = 0; g + 1 < static_cast<int>(phis.size()); ++g) {
    const double a = cache.at(phis[g]), b = cache.at(phis[g + 1]);
    if (g < gstar && b > a + tol_u) unimodal = false;
    if (g >= gstar && b < a - tol_u) unimodal = false;
  }
  if (!unimodal) {
    grid_fallback = true;
    gstar = grid_argmin(256, phis);
  }

  double a = phis[std::max(gstar - 1, 0)];
  double b = phis[std::min(gstar + 1, static_cast<int>(phis.size()) - 1)];
  const double ratio = 0.6180339887498949;
  const double tol_phi = std::max(1e-4, 1e-3 * phi_hi);
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = probe(x1);
  double f2 = probe(x2);
  while (b - a > tol_phi) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = probe(x2);
    }
  }

  SlotResult result = evaluate(best_phi, tight);
  if (!result.ok() && best_phi > 1e-4)
    result = evaluate(best_phi - 1e-4, tight);  // marginal feasibility backoff
  if (result.ok()) result.decision.grid_fallback = grid_fallback;
  return result;
}

SlotResult search_phi(const PerSlotProblem& problem) {
  validate_problem(problem);
  const model::Topology& topo = *problem.topology;
  double phi_cap = 1.0;
  for (int u = 0; u < topo.total_ues(); ++u) {
    if (!problem.schedule.active[u] || problem.q_access_now(u) <= 0.0) continue;
    const int m = topo.serving_bst(u);
    const double snr_max = problem.channel->of(m, u).squaredNorm() *
                           topo.max_tx_mw(m) / topo.noise_mw(u);
    phi_cap =
        std::min(phi_cap, std::log1p(snr_max) / problem.q_access_now(u));
  }
  return search_phi_generic(
      problem,
      [&problem](double phi, const socp::Settings& st) {
        return solve_fixed_phi(problem, phi, st);
      },
      phi_cap);
}

SlotResult tsube_slot(const PerSlotProblem& problem) {
  validate_problem(problem);
  if (problem.schedule.num_active() == 0) return exchange_only_result(problem, 0.0);
  return search_phi(problem);
}

DecisionCheck check_decision(const PerSlotProblem& problem,
                             const SlotDecision& decision) {
  const model::Topology& topo = *problem.topology;
  const model::ChannelRealization& ch = *problem.channel;
  DecisionCheck out;

  out.exchange_violation =
      decision.exchange.delta_mw.size() ==
              static_cast<Eigen::Index>(topo.lines.size())
          ? 0.0
          : 1.0;

  std::vector<int> active;
  for (int u = 0; u < topo.total_ues(); ++u)
    if (problem.schedule.active[u]) active.push_back(u);

  for (int u : active) {
    const int m = topo.serving_bst(u);
    const std::complex<double> own = ch.of(m, u).dot(decision.beams[u]);
    double interference = 0.0;
    for (int b : active) {
      if (b == u) continue;
      interference +=
          std::norm(ch.of(topo.serving_bst(b), u).dot(decision.beams[b]));
    }
    const double f = f_phi(problem.q_access_now(u), decision.phi);
    const double rhs = f * std::sqrt(interference + topo.noise_mw(u));
    const double lhs = own.real();
    out.cone_violation = std::max(
        out.cone_violation, std::max(0.0, rhs - lhs) / std::max(1.0, rhs));
    out.imag_residual =
        std::max(out.imag_residual,
                 std::abs(own.imag()) / std::max(1.0, std::abs(own)));
    if (rhs > 0.0)
      out.activeness_residual =
          std::max(out.activeness_residual, std::abs(lhs - rhs) / rhs);
    else
      out.activeness_residual = std::max(out.activeness_residual, std::abs(lhs));
    if (decision.rates(u) > problem.q_access_now(u)) out.rate_limit_ok = false;
  }

  for (int m = 0; m < topo.num_bsts; ++m) {
    double tx = 0.0;
    for (int n = 0; n < topo.ues_per_bst[m]; ++n) {
      const Eigen::VectorXcd& w = decision.beams[topo.ue_index(m, n)];
      if (w.size() > 0) tx += w.squaredNorm();
    }
    out.power_violation =
        std::max(out.power_violation, (tx - topo.max_tx_mw(m)) /
                                          std::max(1.0, topo.max_tx_mw(m)));
  }
  out.power_violation = std::max(out.power_violation, 0.0);

  for (int i : active)
    for (int j : active) {
      if (i == j) continue;
      const double lhs = decision.rates(i) * problem.q_access_now(j);
      const double rhs = decision.rates(j) * problem.q_access_now(i);
      const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      out.proportional_residual =
          std::max(out.proportional_residual, std::abs(lhs - rhs) / scale);
    }
  return out;
}

}  // namespace sgpcn::slot_solver
