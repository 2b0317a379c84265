// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "mmrelay/frame.hpp"
#include "mmrelay/powalloc.hpp"
#include "mmrelay/rng.hpp"

using namespace mmrelay;

namespace {

SystemConfig powalloc_cfg() {
  // Section-VII power-allocation setup: pilots at 10 dB.
  return make_config({{"M", "128"}, {"K", "10"}, {"rho_p", "10"}});
}

// Central finite differences of the per-link rates, the oracle the analytic
// gradients must match before the optimizer is trusted.
struct FdGrad {
  double dUL_ds, dUL_dd, dDL_ds, dDL_dd;
};

FdGrad fd_gradient(const SystemConfig& cfg, const FadingProfile& fading, double rho_s,
                   double rho_d, int k, bool steady) {
  const auto link = [&](double s, double d, bool ul) {
    const RateGradient g = rate_gradient(s, d, cfg, fading);
    const LinkLinearization& l = steady ? g.steady[k] : g.first[k];
    return ul ? l.R_UL : l.R_DL;
  };
  const double hs = 1e-6 * rho_s;
  const double hd = 1e-6 * rho_d;
  FdGrad out;
  out.dUL_ds = (link(rho_s + hs, rho_d, true) - link(rho_s - hs, rho_d, true)) / (2 * hs);
  out.dUL_dd = (link(rho_s, rho_d + hd, true) - link(rho_s, rho_d - hd, true)) / (2 * hd);
  out.dDL_ds = (link(rho_s + hs, rho_d, false) - link(rho_s - hs, rho_d, false)) / (2 * hs);
  out.dDL_dd = (link(rho_s, rho_d + hd, false) - link(rho_s, rho_d - hd, false)) / (2 * hd);
  return out;
}

void require_close(double analytic, double fd, double tol) {
  const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-9});
  CHECK(std::abs(analytic - fd) / scale < tol);
}

}  // namespace

TEST_CASE("analytic gradients match central finite differences") {
  for (const LiMode mode : {LiMode::FixedRhoLi, LiMode::FixedBetaLi}) {
    SystemConfig cfg = powalloc_cfg();
    cfg.li_mode = mode;
    const FadingProfile fading = uniform_profile(cfg);
    Rng rng(314, 1, Draw::Generic);
    for (int pt = 0; pt < 10; ++pt) {
      const double rho_s = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
      const double rho_d = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
      const RateGradient g = rate_gradient(rho_s, rho_d, cfg, fading);
      for (const bool steady : {false, true}) {
        const int k = static_cast<int>(rng.uniform() * cfg.K);
        const FdGrad fd = fd_gradient(cfg, fading, rho_s, rho_d, k, steady);
        const LinkLinearization& l = steady ? g.steady[k] : g.first[k];
        require_close(l.dUL_ds, fd.dUL_ds, 1e-5);
        require_close(l.dUL_dd, fd.dUL_dd, 1e-5);
        require_close(l.dDL_ds, fd.dDL_ds, 1e-5);
        require_close(l.dDL_dd, fd.dDL_dd, 1e-5);
      }
    }
  }
}

TEST_CASE("more uplink power only degrades the downlink") {
  const SystemConfig cfg = powalloc_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const RateGradient g = rate_gradient(10.0, 100.0, cfg, fading);
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(g.first[k].dDL_ds <= 0.0);
    CHECK(g.steady[k].dDL_ds <= 0.0);
  }
}

TEST_CASE("HD decouples the uplink from the forward power") {
  SystemConfig cfg = powalloc_cfg();
  cfg.duplex = Duplex::HD;
  const FadingProfile fading = uniform_profile(cfg);
  const RateGradient g = rate_gradient(5.0, 50.0, cfg, fading);
  CHECK(g.steady.empty());
  for (int k = 0; k < cfg.K; ++k) CHECK(g.first[k].dUL_dd == 0.0);
}

TEST_CASE("the 1-D breakpoint solve matches a dense grid search") {
  for (const char* K_str : {"1", "10"}) {
    SystemConfig cfg = make_config({{"M", "128"}, {"K", K_str}, {"rho_p", "10"}});
    const FadingProfile fading = uniform_profile(cfg);
    const FrameAccounting fa = frame_accounting(cfg);
    cfg.E_d = cfg.L * fa.T_d * 100.0;  // 20 dB total data power
    const double R_tot = 100.0;
    const double x_max = R_tot / cfg.K;

    const std::array<double, 2> rho_i{x_max / 3.0, R_tot - cfg.K * x_max / 3.0};
    const std::array<double, 2> sol = solve_lp_subproblem(rho_i, cfg, fading);

    // Dense evaluation of the linearized objective.
    const RateGradient g = rate_gradient(rho_i[0], rho_i[1], cfg, fading);
    const auto lin_value = [&](double x) {
      const double dd = (R_tot - cfg.K * x) - rho_i[1];
      const double ds = x - rho_i[0];
      double v = 0.0;
      for (const auto& l : g.first)
        v += g.weight_first * std::min(l.R_UL + l.dUL_ds * ds + l.dUL_dd * dd,
                                       l.R_DL + l.dDL_ds * ds + l.dDL_dd * dd);
      for (const auto& l : g.steady)
        v += g.weight_steady * std::min(l.R_UL + l.dUL_ds * ds + l.dUL_dd * dd,
                                        l.R_DL + l.dDL_ds * ds + l.dDL_dd * dd);
      return v;
    };
    double best = -1e300;
    for (int i = 0; i <= 10000; ++i) best = std::max(best, lin_value(x_max * i / 10000.0));
    CHECK(lin_value(sol[0]) >= best - 1e-9 * std::abs(best));
    // Feasible for the subproblem, so the step never loses linearized value.
    CHECK(lin_value(sol[0]) >= lin_value(rho_i[0]) - 1e-12);
  }
}

TEST_CASE("SCA converges within a few iterations at the reference setup") {
  const SystemConfig cfg = powalloc_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const FrameAccounting fa = frame_accounting(cfg);
  const double E_d = cfg.L * fa.T_d * 100.0;  // 20 dB total data power
  const PowerSolution sol = sca_optimize(cfg, fading, E_d, 1e-5);
  CHECK(sol.converged);
  CHECK(sol.iterations <= 4);

  // Budget equality at every trajectory point.
  for (const auto& pt : sol.trajectory) {
    const double budget = cfg.L * fa.T_d * (cfg.K * pt[0] + pt[1]);
    CHECK(std::abs(budget - E_d) / E_d < 1e-9);
  }
  // Monotone ascent of the true objective.
  for (std::size_t i = 1; i < sol.trajectory.size(); ++i)
    CHECK(sol.trajectory[i][2] >= sol.trajectory[i - 1][2] - 1e-9);
  // Never worse than the equal split it starts from.
  CHECK(sol.objective >= equal_allocation_objective(cfg, fading, E_d) - 1e-9);
}

TEST_CASE("the optimum is insensitive to the starting point") {
  const SystemConfig cfg = powalloc_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const FrameAccounting fa = frame_accounting(cfg);
  const double E_d = cfg.L * fa.T_d * 100.0;
  const PowerSolution ref = sca_optimize(cfg, fading, E_d, 1e-5);

  Rng rng(55, 1, Draw::Generic);
  const double x_ref = E_d / (cfg.L * fa.T_d) / (2.0 * cfg.K);
  for (int s = 0; s < 20; ++s) {
    const double x0 = x_ref * (0.8 + 0.4 * rng.uniform());  // +-20 percent
    const PowerSolution sol = sca_optimize(cfg, fading, E_d, 1e-5, x0);
    CHECK(sol.objective == doctest::Approx(ref.objective).epsilon(1e-4));
    CHECK(sol.rho_s == doctest::Approx(ref.rho_s).epsilon(1e-2));
  }
}

TEST_CASE("optimized allocation plateaus while the equal split collapses") {
  const SystemConfig cfg = powalloc_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const FrameAccounting fa = frame_accounting(cfg);
  const auto budget = [&](double db) {
    return cfg.L * fa.T_d * std::pow(10.0, db / 10.0);
  };
  const double opt50 = sca_optimize(cfg, fading, budget(50), 1e-5).objective;
  const double opt60 = sca_optimize(cfg, fading, budget(60), 1e-5).objective;
  CHECK(opt60 >= opt50 - 1e-6);
  const double eq50 = equal_allocation_objective(cfg, fading, budget(50));
  const double eq60 = equal_allocation_objective(cfg, fading, budget(60));
  CHECK(eq60 < eq50);
  CHECK(opt60 > eq60);
}

TEST_CASE("infeasible budgets are rejected") {
  const SystemConfig cfg = powalloc_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  CHECK_THROWS_AS(sca_optimize(cfg, fading, 0.0, 1e-5), std::invalid_argument);
  SystemConfig bad = cfg;
  bad.E_d = 0.0;
  CHECK_THROWS_AS(solve_lp_subproblem({1.0, 1.0}, bad, fading), std::invalid_argument);
}
