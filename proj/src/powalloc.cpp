// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/powalloc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmrelay/frame.hpp"
#include "mmrelay/rates.hpp"

namespace mmrelay {

namespace {

void require_fd_overlay(const SystemConfig& cfg, const char* who) {
  if (cfg.duplex != Duplex::FD || cfg.scheme != Scheme::Overlay)
    throw std::logic_error(std::string(who) + ": FD overlay scheme required");
}

struct LiCoupling {
  double c = 0.0;   // rho_d * beta_LI entering sigma2_s(steady) and gamma_C
  double dc = 0.0;  // d c / d rho_d
};

LiCoupling li_coupling(const SystemConfig& cfg, const FadingProfile& fading,
                       double rho_d) {
  LiCoupling li;
  if (cfg.li_mode == LiMode::FixedRhoLi) {
    li.c = cfg.rho_LI;  // pinned; beta_LI is what adapts to rho_d
    li.dc = 0.0;
  } else {
    li.c = rho_d * fading.beta_LI;
    li.dc = fading.beta_LI;
  }
  return li;
}

// d log2(1+g) contribution: dg / ((1+g) ln 2)
double dlog2_1p(double g, double dg) { return dg / ((1.0 + g) * M_LN2); }

std::vector<LinkLinearization> linearize_kind(const SystemConfig& cfg,
                                              const FadingProfile& fading,
                                              const FrameAccounting& fa, double rho_s,
                                              double rho_d, bool steady) {
  const int K = cfg.K;
  const double M = cfg.M;
  const double P = cfg.K * cfg.rho_p;
  const double A_s = fading.beta_s.sum();
  const double B_d = fading.beta_d.sum();
  const LiCoupling li = li_coupling(cfg, fading, rho_d);
  const bool fd = cfg.duplex == Duplex::FD;

  // Source-side statistics and their rho_d sensitivity (steady kind only).
  Eigen::VectorXd sig_s(K), dsig_s_dd(K);
  for (int k = 0; k < K; ++k) {
    const double c = steady ? li.c : 0.0;
    const double den = c + 1.0 + P * fading.beta_s[k];
    sig_s[k] = P * fading.beta_s[k] * fading.beta_s[k] / den;
    dsig_s_dd[k] = steady ? -sig_s[k] * li.dc / den : 0.0;
  }
  const double E_s = fading.beta_s.sum() - sig_s.sum();  // sum of eps2_s
  const double dE_s_dd = -dsig_s_dd.sum();

  // Destination-side statistics.
  Eigen::VectorXd sig_d(K), dsig_d_ds(K), dsig_d_dd(K);
  for (int k = 0; k < K; ++k) {
    const double den = rho_s * E_s + 1.0 + P * fading.beta_d[k];
    sig_d[k] = P * fading.beta_d[k] * fading.beta_d[k] / den;
    dsig_d_ds[k] = -sig_d[k] * E_s / den;
    dsig_d_dd[k] = -sig_d[k] * rho_s * dE_s_dd / den;
  }
  const double S_d = sig_d.sum();
  const double dS_d_ds = dsig_d_ds.sum();
  const double dS_d_dd = dsig_d_dd.sum();

  const double qB = A_s + (cfg.rho_p * B_d + 1.0) / rho_s;
  const double dqB_ds = -(cfg.rho_p * B_d + 1.0) / (rho_s * rho_s);
  const double cC = fd ? li.c : 0.0;
  const double dcC = fd ? li.dc : 0.0;
  const double qC = A_s + (cC + 1.0) / rho_s;
  const double dqC_ds = -(cC + 1.0) / (rho_s * rho_s);
  const double dqC_dd = dcC / rho_s;

  const double w_inv_rho_d2 = 1.0 / (rho_d * rho_d);

  std::vector<LinkLinearization> out(K);
  for (int k = 0; k < K; ++k) {
    const double gB = M * sig_s[k] / qB;
    const double dgB_ds = gB * (-dqB_ds / qB);  // sigma2_s is rho_s-free
    const double dgB_dd = gB * (dsig_s_dd[k] / sig_s[k]);

    const double gC = M * sig_s[k] / qC;
    const double dgC_ds = gC * (-dqC_ds / qC);
    const double dgC_dd = gC * (dsig_s_dd[k] / sig_s[k] - dqC_dd / qC);

    const double w = fading.beta_d[k] + 1.0 / rho_d;
    const double gD = M * sig_d[k] * sig_d[k] / (w * S_d);
    const double dgD_ds = gD * (2.0 * dsig_d_ds[k] / sig_d[k] - dS_d_ds / S_d);
    const double dgD_dd =
        gD * (2.0 * dsig_d_dd[k] / sig_d[k] - dS_d_dd / S_d + w_inv_rho_d2 / w);

    LinkLinearization& l = out[k];
    l.R_UL = K * log2_1p(gB) + (fa.T_d - K) * log2_1p(gC);
    l.dUL_ds = K * dlog2_1p(gB, dgB_ds) + (fa.T_d - K) * dlog2_1p(gC, dgC_ds);
    l.dUL_dd = K * dlog2_1p(gB, dgB_dd) + (fa.T_d - K) * dlog2_1p(gC, dgC_dd);
    l.R_DL = fa.T_d * log2_1p(gD);
    l.dDL_ds = fa.T_d * dlog2_1p(gD, dgD_ds);
    l.dDL_dd = fa.T_d * dlog2_1p(gD, dgD_dd);
  }
  return out;
}

}  // namespace

RateGradient rate_gradient(double rho_s, double rho_d, const SystemConfig& cfg,
                           const FadingProfile& fading) {
  if (rho_s <= 0 || rho_d <= 0)
    throw std::invalid_argument("rate_gradient: rho_s, rho_d must be > 0");
  if (cfg.rho_p <= 0) throw std::invalid_argument("rate_gradient: rho_p must be > 0");
  if (cfg.scheme != Scheme::Overlay)
    throw std::logic_error("rate_gradient: overlay scheme only");
  const FrameAccounting fa = frame_accounting(cfg);

  RateGradient g;
  const bool fd = cfg.duplex == Duplex::FD;
  g.first = linearize_kind(cfg, fading, fa, rho_s, rho_d, false);
  if (fd && cfg.L > 1) {
    g.steady = linearize_kind(cfg, fading, fa, rho_s, rho_d, true);
    g.weight_first = 1.0;
    g.weight_steady = cfg.L - 1.0;
  } else {
    g.weight_first = cfg.L;
    g.weight_steady = 0.0;
  }
  return g;
}

double powalloc_objective(const SystemConfig& cfg, const FadingProfile& fading,
                          double rho_s, double rho_d) {
  require_fd_overlay(cfg, "powalloc_objective");
  SystemConfig c = cfg;
  FadingProfile f = fading;
  rebind_powers(c, f, rho_s, rho_d);
  const RateBreakdown rb = rate_e2e(c, f);
  return rb.R_pair.sum() * c.L;  // R_pair holds the interval average
}

std::array<double, 2> solve_lp_subproblem(const std::array<double, 2>& rho_i,
                                          const SystemConfig& cfg,
                                          const FadingProfile& fading) {
  require_fd_overlay(cfg, "solve_lp_subproblem");
  if (cfg.E_d <= 0) throw std::invalid_argument("solve_lp_subproblem: E_d must be > 0");
  const FrameAccounting fa = frame_accounting(cfg);
  const double R_tot = cfg.E_d / (cfg.L * fa.T_d);  // K rho_s + rho_d
  const double x_max = R_tot / cfg.K;
  if (std::abs(cfg.K * rho_i[0] + rho_i[1] - R_tot) > 1e-6 * R_tot)
    throw std::invalid_argument("solve_lp_subproblem: rho_i violates the energy budget");

  const RateGradient g = rate_gradient(rho_i[0], rho_i[1], cfg, fading);

  // Affine models along the budget line rho = (x, R_tot - K x).
  struct Affine {
    double u0, u1;  // uplink value/slope in x
    double d0, d1;  // downlink
    double w;
  };
  std::vector<Affine> terms;
  auto add_terms = [&](const std::vector<LinkLinearization>& v, double w) {
    if (w <= 0) return;
    for (const auto& l : v) {
      Affine a;
      const double dx_d = -static_cast<double>(cfg.K);  // d rho_d / d x
      a.u1 = l.dUL_ds + dx_d * l.dUL_dd;
      a.d1 = l.dDL_ds + dx_d * l.dDL_dd;
      // Value at x = rho_i[0] is the exact rate; shift to intercept form.
      a.u0 = l.R_UL - a.u1 * rho_i[0];
      a.d0 = l.R_DL - a.d1 * rho_i[0];
      a.w = w;
      terms.push_back(a);
    }
  };
  add_terms(g.first, g.weight_first);
  add_terms(g.steady, g.weight_steady);

  std::vector<double> candidates{0.0, x_max};
  for (const auto& a : terms) {
    if (a.u1 == a.d1) continue;
    const double x = (a.d0 - a.u0) / (a.u1 - a.d1);
    if (x > 0.0 && x < x_max) candidates.push_back(x);
  }
  auto lp_value = [&](double x) {
    double v = 0.0;
    for (const auto& a : terms)
      v += a.w * std::min(a.u0 + a.u1 * x, a.d0 + a.d1 * x);
    return v;
  };
  double best_x = candidates[0];
  double best_v = lp_value(best_x);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = lp_value(candidates[i]);
    if (v > best_v || (v == best_v && candidates[i] < best_x)) {
      best_v = v;
      best_x = candidates[i];
    }
  }
  return {best_x, R_tot - cfg.K * best_x};
}

namespace {

// Exact maximization of the true objective along the feasible segment
// rho(t) = rho_a + t (rho_b - rho_a), t in [0, 1] (the budget set is affine,
// so the whole segment is feasible). Coarse scan to bracket, then
// golden-section refinement.
std::array<double, 2> line_search(const SystemConfig& cfg, const FadingProfile& fading,
                                  const std::array<double, 2>& rho_a,
                                  const std::array<double, 2>& rho_b) {
  const auto at = [&](double t) -> std::array<double, 2> {
    return {rho_a[0] + t * (rho_b[0] - rho_a[0]), rho_a[1] + t * (rho_b[1] - rho_a[1])};
  };
  const auto value = [&](double t) {
    const auto r = at(t);
    return powalloc_objective(cfg, fading, r[0], r[1]);
  };
  constexpr int kScan = 64;
  double best_t = 1.0;
  double best_v = value(1.0);
  for (int i = 0; i <= kScan; ++i) {
    const double t = static_cast<double>(i) / kScan;
    const double v = value(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - 1.0 / kScan);
  double hi = std::min(1.0, best_t + 1.0 / kScan);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double t1 = hi - inv_phi * (hi - lo);
  double t2 = lo + inv_phi * (hi - lo);
  double v1 = value(t1), v2 = value(t2);
  for (int iter = 0; iter < 80 && hi - lo > 1e-13; ++iter) {
    if (v1 < v2) {
      lo = t1;
      t1 = t2;
      v1 = v2;
      t2 = lo + inv_phi * (hi - lo);
      v2 = value(t2);
    } else {
      hi = t2;
      t2 = t1;
      v2 = v1;
      t1 = hi - inv_phi * (hi - lo);
      v1 = value(t1);
    }
  }
  const double t_ref = 0.5 * (lo + hi);
  return value(t_ref) >= best_v ? at(t_ref) : at(best_t);
}

}  // namespace

PowerSolution sca_optimize(const SystemConfig& cfg, const FadingProfile& fading,
                           double E_d, double epsilon, double rho_s0) {
  require_fd_overlay(cfg, "sca_optimize");
  if (E_d <= 0) throw std::invalid_argument("sca_optimize: E_d must be > 0");
  if (epsilon <= 0) throw std::invalid_argument("sca_optimize: epsilon must be > 0");

  SystemConfig c = cfg;
  c.E_d = E_d;
  const FrameAccounting fa = frame_accounting(c);
  const double R_tot = E_d / (c.L * fa.T_d);
  const double x_max = R_tot / c.K;

  // Equal split rho_d = K rho_s unless the caller pins the start. Keep the
  // start strictly interior so the first linearization is defined.
  double x = rho_s0 >= 0 ? rho_s0 : R_tot / (2.0 * c.K);
  x = std::clamp(x, 1e-9 * x_max, (1.0 - 1e-9) * x_max);
  std::array<double, 2> rho{x, R_tot - c.K * x};
  double F = powalloc_objective(c, fading, rho[0], rho[1]);

  PowerSolution sol;
  sol.trajectory.push_back({rho[0], rho[1], F});

  constexpr int kMaxIter = 100;
  for (int it = 1; it <= kMaxIter; ++it) {
    const std::array<double, 2> rho_star = solve_lp_subproblem(rho, c, fading);
    sol.iterations = it;
    const double step = std::hypot(rho_star[0] - rho[0], rho_star[1] - rho[1]);
    if (step / std::hypot(rho[0], rho[1]) < epsilon) {
      sol.converged = true;
      break;
    }
    // Move to the best point of the true objective on the way to the
    // subproblem optimizer. A blind full step can overshoot into the dead
    // rho_d = 0 corner when the downlink linearization is nearly flat; the
    // segment search keeps ascent and reaches the kink in one move.
    const std::array<double, 2> cand = line_search(c, fading, rho, rho_star);
    const double Fc = powalloc_objective(c, fading, cand[0], cand[1]);
    if (Fc <= F + 1e-12 * (1.0 + std::abs(F))) {
      sol.converged = true;  // no ascent left along the subproblem direction
      break;
    }
    rho = cand;
    F = Fc;
    sol.trajectory.push_back({rho[0], rho[1], F});
  }
  sol.rho_s = rho[0];
  sol.rho_d = rho[1];
  sol.objective = F;
  return sol;
}

double equal_allocation_objective(const SystemConfig& cfg, const FadingProfile& fading,
                                  double E_d) {
  require_fd_overlay(cfg, "equal_allocation_objective");
  if (E_d <= 0) throw std::invalid_argument("equal_allocation_objective: E_d must be > 0");
  SystemConfig c = cfg;
  c.E_d = E_d;
  const FrameAccounting fa = frame_accounting(c);
  const double R_tot = E_d / (c.L * fa.T_d);
  return powalloc_objective(c, fading, R_tot / (2.0 * c.K), R_tot / 2.0);
}

}  // namespace mmrelay
