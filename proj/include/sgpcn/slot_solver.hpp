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
#include <functional>
#include <iosfwd>
#include <string>

#include "sgpcn/controller.hpp"
#include "sgpcn/energy.hpp"
#include "sgpcn/model.hpp"
#include "sgpcn/socp.hpp"

namespace sgpcn::slot_solver {

/// Everything the per-slot optimization needs: the channel realization, the
/// frame schedule, the queue state it prices rates with, and the energy side.
struct PerSlotProblem {
  const model::Topology* topology = nullptr;
  const model::ChannelRealization* channel = nullptr;
  controller::FrameSchedule schedule;
  Eigen::VectorXd q_access_now;        // q^A(t_k), sets the per-UE rate targets
  Eigen::VectorXd q_access_frame;      // q^A[k]
  Eigen::VectorXd q_processing_frame;  // q^U[k]
  Eigen::VectorXd harvest_slot_mw;     // E^HAV[k] / T, per BST
  energy::EnergyPrices prices;
  double v = 0.1;
  bool allow_exchange = true;

  /// Rate weights q^U[k] - q^A[k]; negative for every scheduled UE.
  Eigen::VectorXd rate_weights() const {
    return q_processing_frame - q_access_frame;
  }
};

/// Joint beamforming / energy-exchange decision for one slot.
struct SlotDecision {
  model::BeamSet beams;          // per flat UE index; empty when unscheduled
  energy::ExchangePlan exchange;
  double phi = 0.0;
  Eigen::VectorXd rates;            // q^A(t_k) * phi for scheduled UEs, else 0
  // Drift-plus-penalty value: rate-weight term plus V times the grid cost in
  // fleet-year units (cents/slot * 3.1536e11).
  double objective = 0.0;
  Eigen::VectorXd grid_cost_cents;  // per BST
  Eigen::VectorXd bst_power_mw;     // per BST
  int solver_iterations = 0;
  bool grid_fallback = false;  // coarse phi grid was not unimodal
};

enum class SlotStatus { Ok, Infeasible, SolverFailure };

struct SlotResult {
  SlotStatus status = SlotStatus::SolverFailure;
  SlotDecision decision;
  std::string detail;

  bool ok() const { return status == SlotStatus::Ok; }
};

/// Per-UE rate-target amplitude sqrt(exp(q * phi) - 1).
double f_phi(double q_access, double phi);

/// Loose settings for feasibility probes and line-search evaluations; the
/// returned decision of a slot is always re-solved with tight settings.
socp::Settings search_settings();
socp::Settings tight_settings();

/// Builds a SlotDecision from physical quantities, recomputing powers, grid
/// costs and the objective from the beams and exchange plan.
SlotDecision make_decision(const PerSlotProblem& problem, double phi,
                           model::BeamSet beams, energy::ExchangePlan exchange,
                           int solver_iterations);

/// Minimizes the slot objective over exchange flows alone for fixed per-BST
/// powers (a small piecewise-linear program).
energy::ExchangePlan optimal_exchange(const model::Topology& topology,
                                      const energy::EnergyPrices& prices,
                                      const Eigen::VectorXd& bst_power_mw,
                                      const Eigen::VectorXd& harvest_slot_mw);

/// The zero-beam specialization: optimal exchange when only circuit power is
/// consumed.
energy::ExchangePlan exchange_only(const PerSlotProblem& problem);

/// Solves the convexified per-slot problem for a fixed rate fraction phi:
/// minimizes the energy objective over beams and exchange flows subject to
/// the per-UE SINR cones, the real-part constraint (structural, via a
/// per-beam basis change) and the per-BST power cap.
SlotResult solve_fixed_phi(const PerSlotProblem& problem, double phi,
                           const socp::Settings& settings);
SlotResult solve_fixed_phi(const PerSlotProblem& problem, double phi);

/// One evaluation of the slot problem at a given phi.
using PhiEvaluator =
    std::function<SlotResult(double phi, const socp::Settings& settings)>;

/// One-dimensional search over phi in [0, phi_cap]: bisection for the largest
/// feasible phi (1e-4 tolerance), then a 16-point coarse grid on [0, phi_hi]
/// and golden-section refinement around the grid minimizer. Falls back to a
/// 256-point grid when the coarse grid is not unimodal. The final decision is
/// re-solved with tight settings.
SlotResult search_phi_generic(const PerSlotProblem& problem,
                              const PhiEvaluator& evaluate, double phi_cap);

/// The TSUBE phi search over solve_fixed_phi.
SlotResult search_phi(const PerSlotProblem& problem);

/// Full slot decision: exchange-only when nothing is scheduled, otherwise the
/// phi search.
SlotResult tsube_slot(const PerSlotProblem& problem);

/// Constraint margins of a decision, recomputed from raw channels.
struct DecisionCheck {
  double exchange_violation = 0.0;       // flow antisymmetry (structural)
  double cone_violation = 0.0;           // SINR cone, relative
  double activeness_residual = 0.0;      // cone tightness, relative
  double imag_residual = 0.0;            // Im(h^H w), relative
  double power_violation = 0.0;          // per-BST cap, relative
  double proportional_residual = 0.0;    // cross-UE rate ratios, relative
  bool rate_limit_ok = true;             // r <= q^A(t_k), exact
};

DecisionCheck check_decision(const PerSlotProblem& problem,
                             const SlotDecision& decision);

/// Writes the cone program for a fixed phi in the documented plain-text
/// format (see socp::Problem::dump) for external cross-checks.
bool dump_fixed_phi(const PerSlotProblem& problem, double phi, std::ostream& os);

}  // namespace sgpcn::slot_solver
