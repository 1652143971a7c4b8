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

// Homogeneous self-dual interior-point method for second-order cone programs
// (Mehrotra predictor-corrector with Nesterov-Todd scalings). The problems
// this project produces are small and dense, so the KKT system is reduced to
// the normal equations G' W^-2 G and refactorized with a dense Cholesky each
// iteration; per-cone Gram blocks are precomputed once per solve and the
// scaling enters through one rank-1 update per second-order cone.

#include "sgpcn/socp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sgpcn::socp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SocBlock {
  int start = 0;  // first row of the block
  int dim = 0;
  // Nesterov-Todd scaling state: W = eta * (2 wbar wbar' - J)^(1/2) form,
  // with wbar0^2 - ||wbar1||^2 = 1.
  double eta = 1.0;
  double eta2 = 1.0;
  Eigen::VectorXd wbar;
  // Per-solve precomputed data.
  Eigen::MatrixXd gram;  // G_blk' G_blk - 2 g0 g0'
  std::vector<std::vector<std::pair<int, double>>> row_support;
};

struct LpRow {
  int row = 0;
  double w2inv = 1.0;  // z_i / s_i
  std::vector<std::pair<int, double>> support;
};

// W u for one SOC block, where W = eta [ w0, w1'; w1, I + w1 w1'/(1+w0) ].
// With sign = -1 this applies the matrix built from (w0, -w1), which times
// eta = 1/eta_orig gives W^-1.
void apply_w_block(double eta, double w0, const Eigen::VectorXd& w1, double sign,
                   const Eigen::Ref<const Eigen::VectorXd>& u,
                   Eigen::Ref<Eigen::VectorXd> out) {
  const int d = static_cast<int>(u.size());
  const double dot = sign * w1.dot(u.tail(d - 1));
  out(0) = eta * (w0 * u(0) + dot);
  out.tail(d - 1) =
      eta * (u.tail(d - 1) + sign * (u(0) + dot / (1.0 + w0)) * w1);
}

// Largest alpha >= 0 keeping u + alpha d inside the second-order cone, for u
// strictly interior: the smallest positive root of
//   q(alpha) = (u0 + a d0)^2 - ||u1 + a d1||^2 = a alpha^2 + 2 b alpha + c.
double soc_max_step(const Eigen::Ref<const Eigen::VectorXd>& u,
                    const Eigen::Ref<const Eigen::VectorXd>& d) {
  const int n = static_cast<int>(u.size());
  const double a = d(0) * d(0) - d.tail(n - 1).squaredNorm();
  const double b = u(0) * d(0) - u.tail(n - 1).dot(d.tail(n - 1));
  const double c = u(0) * u(0) - u.tail(n - 1).squaredNorm();
  const double disc = b * b - a * c;
  if (disc < 0.0) return kInf;  // only possible with a > 0: no crossing
  const double sq = std::sqrt(disc);
  // Cancellation-free root pair: (-b -+ sq)/a and c/(-b +- sq).
  const double den = (b <= 0.0) ? (-b + sq) : (-b - sq);
  double best = kInf;
  if (a != 0.0) {
    const double r = den / a;
    if (r > 0.0) best = std::min(best, r);
  }
  if (den != 0.0) {
    const double r = c / den;
    if (r > 0.0) best = std::min(best, r);
  }
  return best;
}

struct Ipm {
  const Settings& st;
  int n = 0;
  int m = 0;

  // Equilibrated problem data.
  Eigen::MatrixXd G;
  Eigen::VectorXd c, h;
  Eigen::VectorXd row_scale, col_scale;

  std::vector<LpRow> lp;
  std::vector<SocBlock> socs;
  int cone_count = 0;  // barrier degree: nonneg rows + SOC blocks

  // Iterates.
  Eigen::VectorXd x, s, z, lambda;
  double tau = 1.0, kap = 1.0;

  // Normal-equations factor.
  Eigen::MatrixXd H, Hreg;
  Eigen::LLT<Eigen::MatrixXd> llt;

  // kkt_solve-internal buffers (never passed in as right-hand sides).
  Eigen::VectorXd kkt_w2bz, kkt_rhs, kkt_tmp, kkt_rx, kkt_rz;
  // Step computation buffers.
  Eigen::VectorXd rx, rz, bx_v, bz_v, x1, z1, x2, z2;
  Eigen::VectorXd dzw, dsw, ds_tilde, lam_sq, lam_div, ds_v, wtmp;

  double cx = 0, hz = 0, rt = 0, gap = 0, mu = 0;
  double pres = 0, dres = 0, relgap = kInf, pinfres = kInf, dinfres = kInf;
  double resx0 = 1, resz0 = 1;

  // Best iterate seen so far, restored when the iteration stalls.
  struct Snapshot {
    Eigen::VectorXd x, s, z;
    double tau = 1, kap = 1, cx = 0, hz = 0, gap = 0;
    double pres = kInf, dres = kInf, relgap = kInf, pinfres = kInf, dinfres = kInf;
    double merit = kInf;
  } best;

  Ipm(const Problem& p, const Settings& settings) : st(settings) {
    n = static_cast<int>(p.c.size());
    m = static_cast<int>(p.h.size());
    G = p.G;
    c = p.c;
    h = p.h;
    row_scale = Eigen::VectorXd::Ones(m);
    col_scale = Eigen::VectorXd::Ones(n);
    if (st.equilibrate) equilibrate(p.cones);

    lp.resize(p.cones.nonneg);
    for (int i = 0; i < p.cones.nonneg; ++i) lp[i].row = i;
    int at = p.cones.nonneg;
    socs.resize(p.cones.soc.size());
    for (std::size_t k = 0; k < p.cones.soc.size(); ++k) {
      socs[k].start = at;
      socs[k].dim = p.cones.soc[k];
      socs[k].wbar = Eigen::VectorXd::Unit(socs[k].dim, 0);
      at += socs[k].dim;
    }
    cone_count = p.cones.nonneg + static_cast<int>(socs.size());

    precompute();

    x.setZero(n);
    s.setZero(m);
    z.setZero(m);
    lambda.setZero(m);
    H.resize(n, n);
    Hreg.resize(n, n);
    for (Eigen::VectorXd* v : {&kkt_rhs, &x1, &x2, &rx, &bx_v}) v->resize(n);
    for (Eigen::VectorXd* v : {&kkt_w2bz, &kkt_tmp, &kkt_rz, &rz, &bz_v, &z1,
                               &z2, &dzw, &dsw, &ds_tilde, &lam_sq, &lam_div,
                               &ds_v, &wtmp})
      v->resize(m);
    kkt_rx.resize(n);

    resx0 = std::max(1.0, c.norm());
    resz0 = std::max(1.0, h.norm());
  }

  void equilibrate(const ConeSpec& cones) {
    for (int iter = 0; iter < 2; ++iter) {
      Eigen::VectorXd cs = G.cwiseAbs().colwise().maxCoeff();
      for (int j = 0; j < n; ++j) {
        const double f = cs(j) < 1e-12 ? 1.0 : std::sqrt(cs(j));
        G.col(j) /= f;
        col_scale(j) *= f;
      }
      Eigen::VectorXd rs = G.cwiseAbs().rowwise().maxCoeff();
      // Rows of one SOC block must share a scale to preserve the cone.
      int at = cones.nonneg;
      for (int d : cones.soc) {
        rs.segment(at, d).setConstant(rs.segment(at, d).maxCoeff());
        at += d;
      }
      for (int i = 0; i < m; ++i) {
        const double f = rs(i) < 1e-12 ? 1.0 : std::sqrt(rs(i));
        G.row(i) /= f;
        row_scale(i) /= f;
      }
    }
    h = h.cwiseProduct(row_scale);
    c = c.cwiseQuotient(col_scale);
  }

  void precompute() {
    auto support_of = [&](int row) {
      std::vector<std::pair<int, double>> sup;
      for (int j = 0; j < n; ++j)
        if (G(row, j) != 0.0) sup.emplace_back(j, G(row, j));
      return sup;
    };
    for (LpRow& r : lp) r.support = support_of(r.row);
    for (SocBlock& b : socs) {
      b.row_support.resize(b.dim);
      for (int r = 0; r < b.dim; ++r) b.row_support[r] = support_of(b.start + r);
      b.gram.setZero(n, n);
      for (int r = 0; r < b.dim; ++r) {
        const double sign = (r == 0) ? -1.0 : 1.0;
        for (const auto& [ja, va] : b.row_support[r])
          for (const auto& [jb, vb] : b.row_support[r])
            b.gram(ja, jb) += sign * va * vb;
      }
    }
  }

  // ----- scaled-cone algebra ------------------------------------------------

  bool update_scalings() {
    for (LpRow& r : lp) {
      const double si = s(r.row), zi = z(r.row);
      if (si <= 0.0 || zi <= 0.0) return false;
      r.w2inv = zi / si;
      lambda(r.row) = std::sqrt(si * zi);
    }
    for (SocBlock& b : socs) {
      const auto sb = s.segment(b.start, b.dim);
      const auto zb = z.segment(b.start, b.dim);
      const double sres = sb(0) * sb(0) - sb.tail(b.dim - 1).squaredNorm();
      const double zres = zb(0) * zb(0) - zb.tail(b.dim - 1).squaredNorm();
      if (sres <= 0.0 || zres <= 0.0) return false;
      const double snorm = std::sqrt(sres), znorm = std::sqrt(zres);
      const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb) / (snorm * znorm)));
      b.eta2 = snorm / znorm;
      b.eta = std::sqrt(b.eta2);
      // wbar = (sbar + J zbar) / (2 gamma)
      b.wbar(0) = (sb(0) / snorm + zb(0) / znorm) / (2.0 * gamma);
      b.wbar.tail(b.dim - 1) =
          (sb.tail(b.dim - 1) / snorm - zb.tail(b.dim - 1) / znorm) /
          (2.0 * gamma);
      apply_w_block(b.eta, b.wbar(0), b.wbar.tail(b.dim - 1), 1.0, zb,
                    lambda.segment(b.start, b.dim));
    }
    return true;
  }

  // out = W v (forward) or W^-1 v.
  void apply_w(const Eigen::VectorXd& v, Eigen::VectorXd& out, bool forward) const {
    for (const LpRow& r : lp) {
      const double w2 = 1.0 / r.w2inv;  // w_i^2 = s_i / z_i
      out(r.row) = forward ? std::sqrt(w2) * v(r.row) : v(r.row) / std::sqrt(w2);
    }
    for (const SocBlock& b : socs)
      apply_w_block(forward ? b.eta : 1.0 / b.eta, b.wbar(0),
                    b.wbar.tail(b.dim - 1), forward ? 1.0 : -1.0,
                    v.segment(b.start, b.dim), out.segment(b.start, b.dim));
  }

  // out = W^-2 v, using W^-2 = eta^-2 (2 q q' - J) with q = J wbar.
  void apply_w2inv(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    for (const LpRow& r : lp) out(r.row) = r.w2inv * v(r.row);
    for (const SocBlock& b : socs) {
      const auto vb = v.segment(b.start, b.dim);
      auto ob = out.segment(b.start, b.dim);
      const double qdot =
          b.wbar(0) * vb(0) - b.wbar.tail(b.dim - 1).dot(vb.tail(b.dim - 1));
      ob(0) = (2.0 * qdot * b.wbar(0) - vb(0)) / b.eta2;
      ob.tail(b.dim - 1) =
          (vb.tail(b.dim - 1) - 2.0 * qdot * b.wbar.tail(b.dim - 1)) / b.eta2;
    }
  }

  // out = W^2 v = eta^2 (2 wbar (wbar'v) - J v).
  void apply_w2(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    for (const LpRow& r : lp) out(r.row) = v(r.row) / r.w2inv;
    for (const SocBlock& b : socs) {
      const auto vb = v.segment(b.start, b.dim);
      auto ob = out.segment(b.start, b.dim);
      const double dot = b.wbar.dot(vb);
      ob(0) = b.eta2 * (2.0 * dot * b.wbar(0) - vb(0));
      ob.tail(b.dim - 1) =
          b.eta2 * (2.0 * dot * b.wbar.tail(b.dim - 1) + vb.tail(b.dim - 1));
    }
  }

  void conic_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                     Eigen::VectorXd& w) const {
    for (const LpRow& r : lp) w(r.row) = u(r.row) * v(r.row);
    for (const SocBlock& b : socs) {
      const auto ub = u.segment(b.start, b.dim);
      const auto vb = v.segment(b.start, b.dim);
      const double u0 = ub(0), v0 = vb(0);
      w(b.start) = ub.dot(vb);
      w.segment(b.start + 1, b.dim - 1) =
          u0 * vb.tail(b.dim - 1) + v0 * ub.tail(b.dim - 1);
    }
  }

  // v = u \ w: solves u o v = w.
  void conic_division(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                      Eigen::VectorXd& v) const {
    for (const LpRow& r : lp) v(r.row) = w(r.row) / u(r.row);
    for (const SocBlock& b : socs) {
      const auto ub = u.segment(b.start, b.dim);
      const auto wb = w.segment(b.start, b.dim);
      const double u0 = ub(0);
      const double rho = u0 * u0 - ub.tail(b.dim - 1).squaredNorm();
      const double zeta = ub.tail(b.dim - 1).dot(wb.tail(b.dim - 1));
      const double v0 = (u0 * wb(0) - zeta) / rho;
      v(b.start) = v0;
      v.segment(b.start + 1, b.dim - 1) =
          (wb.tail(b.dim - 1) - v0 * ub.tail(b.dim - 1)) / u0;
    }
  }

  void subtract_sigma_mu_e(Eigen::VectorXd& v, double sigma_mu) const {
    for (const LpRow& r : lp) v(r.row) -= sigma_mu;
    for (const SocBlock& b : socs) v(b.start) -= sigma_mu;
  }

  // v + (1 + worst residual) e, shifting v into the cone interior.
  void bring_to_cone(Eigen::VectorXd& v) const {
    double alpha = -0.99;
    for (const LpRow& r : lp) alpha = std::max(alpha, -v(r.row));
    for (const SocBlock& b : socs)
      alpha = std::max(alpha,
                       v.segment(b.start + 1, b.dim - 1).norm() - v(b.start));
    alpha += 1.0;
    for (const LpRow& r : lp) v(r.row) += alpha;
    for (const SocBlock& b : socs) v(b.start) += alpha;
  }

  // Max step keeping lambda + alpha d in the cone for d in {dsw, dzw}, and
  // tau, kappa positive.
  double max_step(double dtau, double dkap) const {
    double alpha = kInf;
    for (const LpRow& r : lp) {
      if (dsw(r.row) < 0.0) alpha = std::min(alpha, -lambda(r.row) / dsw(r.row));
      if (dzw(r.row) < 0.0) alpha = std::min(alpha, -lambda(r.row) / dzw(r.row));
    }
    for (const SocBlock& b : socs) {
      const auto lb = lambda.segment(b.start, b.dim);
      alpha = std::min(alpha, soc_max_step(lb, dsw.segment(b.start, b.dim)));
      alpha = std::min(alpha, soc_max_step(lb, dzw.segment(b.start, b.dim)));
    }
    if (dtau < 0.0) alpha = std::min(alpha, -tau / dtau);
    if (dkap < 0.0) alpha = std::min(alpha, -kap / dkap);
    return alpha;
  }

  // ----- KKT ------------------------------------------------------------

  bool factorize() {
    H.setZero();
    for (const LpRow& r : lp)
      for (const auto& [ja, va] : r.support)
        for (const auto& [jb, vb] : r.support) H(ja, jb) += r.w2inv * va * vb;
    for (const SocBlock& b : socs) {
      // G' W^-2 G = eta^-2 (gram + 2 u u'), u = G_blk' (J wbar)
      Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
      for (int r = 0; r < b.dim; ++r) {
        const double q = (r == 0) ? b.wbar(0) : -b.wbar(r);
        for (const auto& [j, v] : b.row_support[r]) u(j) += q * v;
      }
      const double inv = 1.0 / b.eta2;
      H.noalias() += inv * b.gram;
      H.selfadjointView<Eigen::Lower>().rankUpdate(u, 2.0 * inv);
    }

    double reg = st.static_reg * std::max(1.0, H.diagonal().maxCoeff());
    for (int attempt = 0; attempt < 4; ++attempt) {
      Hreg = H;
      Hreg.diagonal().array() += reg;
      llt.compute(Hreg);
      if (llt.info() == Eigen::Success) return true;
      reg *= 1000.0;
    }
    return false;
  }

  // Solves [0 G'; G -W^2] [dx; dz] = [bx; bz] via the normal equations, with
  // iterative refinement against the unregularized system. bx and bz must not
  // alias the kkt_* buffers.
  void kkt_solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& bz,
                 Eigen::VectorXd& dx, Eigen::VectorXd& dz) {
    apply_w2inv(bz, kkt_w2bz);
    kkt_rhs.noalias() = G.transpose() * kkt_w2bz;
    kkt_rhs += bx;
    dx = llt.solve(kkt_rhs);
    kkt_tmp.noalias() = G * dx;
    kkt_tmp -= bz;
    apply_w2inv(kkt_tmp, dz);
    for (int it = 0; it < st.refine_iters; ++it) {
      kkt_rx.noalias() = -(G.transpose() * dz);
      kkt_rx += bx;
      apply_w2(dz, kkt_tmp);
      kkt_rz.noalias() = -(G * dx);
      kkt_rz += bz;
      kkt_rz += kkt_tmp;
      const double err = std::max(kkt_rx.lpNorm<Eigen::Infinity>(),
                                  kkt_rz.lpNorm<Eigen::Infinity>());
      if (err < 1e-14 * (1.0 + bx.lpNorm<Eigen::Infinity>() +
                         bz.lpNorm<Eigen::Infinity>()))
        break;
      apply_w2inv(kkt_rz, kkt_w2bz);
      kkt_rhs.noalias() = G.transpose() * kkt_w2bz;
      kkt_rhs += kkt_rx;
      const Eigen::VectorXd ex = llt.solve(kkt_rhs);
      kkt_tmp.noalias() = G * ex;
      kkt_tmp -= kkt_rz;
      dx += ex;
      apply_w2inv(kkt_tmp, kkt_rz);
      dz += kkt_rz;
    }
  }

  // ----- main loop --------------------------------------------------------

  void compute_residuals() {
    rx.noalias() = -(G.transpose() * z);
    rx -= tau * c;
    rz.noalias() = G * x;
    rz += s;
    rz -= tau * h;
    cx = c.dot(x);
    hz = h.dot(z);
    rt = kap + cx + hz;
    gap = s.dot(z);
    mu = (gap + kap * tau) / (cone_count + 1);

    pres = rz.norm() / std::max(1.0, resz0 + x.norm() + s.norm()) / tau;
    dres = rx.norm() / std::max(1.0, resx0 + z.norm()) / tau;
    const double g = gap / (tau * tau);
    const double pcost = cx / tau;
    const double dcost = -hz / tau;
    if (pcost < 0.0)
      relgap = g / -pcost;
    else if (dcost > 0.0)
      relgap = g / dcost;
    else
      relgap = kInf;

    pinfres = dinfres = kInf;
    if (hz / std::max(1.0, z.norm()) < -st.reltol_inacc)
      pinfres = (G.transpose() * z).norm() / std::max(1.0, z.norm());
    if (cx / std::max(1.0, x.norm()) < -st.reltol_inacc)
      dinfres = (G * x + s).norm() / std::max(1.0, x.norm() + s.norm());

    const double merit =
        std::max({pres, dres, std::min(relgap, g / std::max(1.0, std::abs(pcost)))});
    if (merit < best.merit) {
      best.x = x;
      best.s = s;
      best.z = z;
      best.tau = tau;
      best.kap = kap;
      best.cx = cx;
      best.hz = hz;
      best.gap = gap;
      best.pres = pres;
      best.dres = dres;
      best.relgap = relgap;
      best.pinfres = pinfres;
      best.dinfres = dinfres;
      best.merit = merit;
    }
  }

  // Returns to the lowest-residual iterate; used on stalls and at the
  // iteration limit so the reported point is the best one reached.
  void restore_best() {
    if (!std::isfinite(best.merit) || best.x.size() == 0) return;
    x = best.x;
    s = best.s;
    z = best.z;
    tau = best.tau;
    kap = best.kap;
    cx = best.cx;
    hz = best.hz;
    gap = best.gap;
    pres = best.pres;
    dres = best.dres;
    relgap = best.relgap;
    pinfres = best.pinfres;
    dinfres = best.dinfres;
  }

  // Called when no further progress is possible: falls back to the best
  // iterate and classifies it against the relaxed tolerances.
  SolveStatus degrade() {
    restore_best();
    SolveStatus status = classify(st.feastol, st.abstol, st.reltol, false);
    if (status != SolveStatus::MaxIterations) return status;
    status = classify(st.feastol_inacc, st.abstol_inacc, st.reltol_inacc, true);
    return status == SolveStatus::MaxIterations ? SolveStatus::NumericalProblem
                                                : status;
  }

  SolveStatus classify(double feastol, double abstol, double reltol,
                       bool inaccurate) const {
    const double g = gap / (tau * tau);
    if (pres <= feastol && dres <= feastol && (g <= abstol || relgap <= reltol))
      return inaccurate ? SolveStatus::OptimalInaccurate : SolveStatus::Optimal;
    if (pinfres <= feastol && tau < kap)
      return inaccurate ? SolveStatus::PrimalInfeasibleInaccurate
                        : SolveStatus::PrimalInfeasible;
    if (dinfres <= feastol && tau < kap)
      return inaccurate ? SolveStatus::DualInfeasibleInaccurate
                        : SolveStatus::DualInfeasible;
    return SolveStatus::MaxIterations;
  }

  Solution run() {
    Solution sol;

    // Initial point: least-squares primal, least-norm dual, shifted into the
    // cone interior (unit scalings, so H = G'G).
    if (!factorize()) return finish(sol, SolveStatus::NumericalProblem);
    bx_v.setZero();
    kkt_solve(bx_v, h, x1, z1);
    x = x1;
    s = -z1;
    bring_to_cone(s);
    bx_v = -c;
    bz_v.setZero();
    kkt_solve(bx_v, bz_v, x2, z2);
    z = z2;
    bring_to_cone(z);
    tau = 1.0;
    kap = 1.0;

    for (int iter = 0; iter <= st.max_iters; ++iter) {
      sol.iterations = iter;
      compute_residuals();

      SolveStatus status = classify(st.feastol, st.abstol, st.reltol, false);
      if (status != SolveStatus::MaxIterations) return finish(sol, status);
      if (iter == st.max_iters) return finish(sol, degrade());

      if (!update_scalings() || !factorize()) return finish(sol, degrade());

      bx_v = -c;
      kkt_solve(bx_v, h, x1, z1);
      const double dtau_denom = kap / tau - c.dot(x1) - h.dot(z1);

      // Predictor: full Newton step on residuals and complementarity.
      conic_product(lambda, lambda, lam_sq);
      bz_v = s - rz;  // = -rz + W(lambda \ lambda o lambda)
      kkt_solve(rx, bz_v, x2, z2);
      const double dtau_aff = (rt - kap + c.dot(x2) + h.dot(z2)) / dtau_denom;
      z2 += dtau_aff * z1;
      apply_w(z2, dzw, true);
      dsw = -dzw - lambda;
      const double dkap_aff = -kap - kap / tau * dtau_aff;
      const double alpha_aff = std::min(1.0, max_step(dtau_aff, dkap_aff));

      const double sigma =
          std::clamp(std::pow(1.0 - alpha_aff, 3), 1e-4, 0.9999);
      const double sigma_mu = sigma * mu;

      // Corrector with Mehrotra second-order term.
      conic_product(dsw, dzw, ds_tilde);
      ds_tilde += lam_sq;
      subtract_sigma_mu_e(ds_tilde, sigma_mu);
      conic_division(lambda, ds_tilde, lam_div);
      apply_w(lam_div, wtmp, true);
      const double one_minus_sigma = 1.0 - sigma;
      bz_v = -one_minus_sigma * rz + wtmp;
      bx_v = one_minus_sigma * rx;
      kkt_solve(bx_v, bz_v, x2, z2);
      const double bkap = kap * tau + dkap_aff * dtau_aff - sigma_mu;
      const double dtau =
          (one_minus_sigma * rt - bkap / tau + c.dot(x2) + h.dot(z2)) /
          dtau_denom;
      x2 += dtau * x1;
      z2 += dtau * z1;
      apply_w(z2, dzw, true);
      dsw = -lam_div - dzw;
      const double dkap = -(bkap + kap * dtau) / tau;

      const double alpha =
          std::min(1.0, st.step_damping * max_step(dtau, dkap));

      apply_w(dsw, ds_v, true);  // ds = W dsw
      x += alpha * x2;
      z += alpha * z2;
      s += alpha * ds_v;
      tau += alpha * dtau;
      kap += alpha * dkap;
      if (!(tau > 0.0) || !std::isfinite(tau) || !std::isfinite(kap))
        return finish(sol, degrade());
    }
    return finish(sol, SolveStatus::MaxIterations);
  }

  Solution finish(Solution& sol, SolveStatus status) {
    sol.status = status;
    // Undo the homogenizing variable and the equilibration. Infeasibility
    // certificates are normalized so that h'z = -1 (primal) or c'x = -1
    // (dual).
    double scale = tau;
    if (is_primal_infeasible(status))
      scale = -hz > 0.0 ? -hz : 1.0;
    else if (status == SolveStatus::DualInfeasible ||
             status == SolveStatus::DualInfeasibleInaccurate)
      scale = -cx > 0.0 ? -cx : 1.0;
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

    sol.x = (x / scale).cwiseQuotient(col_scale);
    sol.s = (s / scale).cwiseQuotient(row_scale);
    sol.z = (z / scale).cwiseProduct(row_scale);
    sol.primal_objective = cx / tau;
    sol.dual_objective = -hz / tau;
    sol.duality_gap = gap / (tau * tau);
    return sol;
  }
};

}  // namespace

int ConeSpec::total_rows() const {
  int total = nonneg;
  for (int d : soc) total += d;
  return total;
}

bool is_optimal(SolveStatus s) {
  return s == SolveStatus::Optimal || s == SolveStatus::OptimalInaccurate;
}

bool is_primal_infeasible(SolveStatus s) {
  return s == SolveStatus::PrimalInfeasible ||
         s == SolveStatus::PrimalInfeasibleInaccurate;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::OptimalInaccurate: return "optimal (inaccurate)";
    case SolveStatus::PrimalInfeasible: return "primal infeasible";
    case SolveStatus::PrimalInfeasibleInaccurate:
      return "primal infeasible (inaccurate)";
    case SolveStatus::DualInfeasible: return "dual infeasible";
    case SolveStatus::DualInfeasibleInaccurate:
      return "dual infeasible (inaccurate)";
    case SolveStatus::MaxIterations: return "iteration limit";
    case SolveStatus::NumericalProblem: return "numerical problem";
  }
  return "unknown";
}

void Problem::validate() const {
  if (c.size() == 0) throw std::invalid_argument("socp: empty variable vector");
  if (G.rows() != h.size() || G.cols() != c.size())
    throw std::invalid_argument("socp: dimension mismatch between G, c, h");
  if (cones.nonneg < 0) throw std::invalid_argument("socp: negative cone size");
  for (int d : cones.soc)
    if (d < 2) throw std::invalid_argument("socp: SOC blocks need dimension >= 2");
  if (cones.total_rows() != G.rows())
    throw std::invalid_argument("socp: cone sizes do not cover all rows");
}

void Problem::dump(std::ostream& os) const {
  os << "socp 1\n";
  os << "vars " << c.size() << "\n";
  os << "rows " << h.size() << "\n";
  os << "nonneg " << cones.nonneg << "\n";
  os << "soc";
  for (int d : cones.soc) os << " " << d;
  os << "\n";
  os.precision(17);
  os << "c\n";
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != 0.0) os << i << " " << c(i) << "\n";
  os << "h\n";
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (h(i) != 0.0) os << i << " " << h(i) << "\n";
  os << "G\n";
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (G(i, j) != 0.0) os << i << " " << j << " " << G(i, j) << "\n";
  os << "end\n";
}

Solution solve(const Problem& problem, const Settings& settings) {
  problem.validate();
  Ipm ipm(problem, settings);
  return ipm.run();
}

}  // namespace sgpcn::socp
