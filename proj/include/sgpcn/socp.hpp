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
#include <iosfwd>
#include <vector>

namespace sgpcn::socp {

/// Cone layout of the slack vector s in G x + s = h: first `nonneg` scalar
/// rows with s_i >= 0, then one block per entry of `soc`, each block
/// (t, v) constrained to t >= ||v||.
struct ConeSpec {
  int nonneg = 0;
  std::vector<int> soc;

  int total_rows() const;
  int num_blocks() const { return nonneg + static_cast<int>(soc.size()); }
};

enum class SolveStatus {
  Optimal,
  OptimalInaccurate,
  PrimalInfeasible,
  PrimalInfeasibleInaccurate,
  DualInfeasible,
  DualInfeasibleInaccurate,
  MaxIterations,
  NumericalProblem,
};

bool is_optimal(SolveStatus s);
/// True for both exact and inaccurate infeasibility certificates.
bool is_primal_infeasible(SolveStatus s);
const char* to_string(SolveStatus s);

struct Settings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  // Exit classification thresholds applied when the iteration limit is hit.
  double feastol_inacc = 1e-4;
  double abstol_inacc = 5e-5;
  double reltol_inacc = 5e-5;
  int max_iters = 100;
  double step_damping = 0.98;
  double static_reg = 1e-11;
  int refine_iters = 3;
  bool equilibrate = true;
};

/// min c'x  s.t.  G x + s = h,  s in K.
struct Problem {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  ConeSpec cones;

  void validate() const;
  /// Plain-text dump (dimensions, cone layout, c and h entries, G triplets)
  /// for cross-checking against an external solver.
  void dump(std::ostream& os) const;
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalProblem;
  Eigen::VectorXd x;  // primal point; infeasibility certificate when dual infeasible
  Eigen::VectorXd s;
  Eigen::VectorXd z;  // dual point; certificate when primal infeasible
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

Solution solve(const Problem& problem, const Settings& settings = Settings{});

}  // namespace sgpcn::socp
