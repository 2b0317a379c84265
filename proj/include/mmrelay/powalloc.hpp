// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_POWALLOC_HPP
#define MMRELAY_POWALLOC_HPP

#include <array>
#include <vector>

#include "mmrelay/config.hpp"

namespace mmrelay {

/// Rates and their partials at one (rho_s, rho_d) point, per pair and
/// interval kind. The FD overlay objective weighs the first interval once and
/// the steady intervals L - 1 times.
struct LinkLinearization {
  double R_UL = 0.0, R_DL = 0.0;  // bits/interval
  double dUL_ds = 0.0, dUL_dd = 0.0;
  double dDL_ds = 0.0, dDL_dd = 0.0;
};

struct RateGradient {
  std::vector<LinkLinearization> first;   // per pair, interval 1
  std::vector<LinkLinearization> steady;  // per pair, intervals 2..L (FD)
  double weight_first = 1.0;
  double weight_steady = 0.0;
};

/// Analytic partials of the per-link closed-form rates w.r.t. (rho_s, rho_d),
/// following the full coupling chain: rho_d enters the steady source
/// statistics through the loop term (a no-op under FixedRhoLi, where
/// rho_d beta_LI is pinned to rho_LI), the source errors feed sigma2_d, and
/// everything feeds the three SINRs. Requires rho_s, rho_d, rho_p > 0.
RateGradient rate_gradient(double rho_s, double rho_d, const SystemConfig& cfg,
                           const FadingProfile& fading);

/// True (nonlinear) objective of problem (sum over intervals and pairs of the
/// min-rate), in bits, at a feasible power split.
double powalloc_objective(const SystemConfig& cfg, const FadingProfile& fading,
                          double rho_s, double rho_d);

/// One SCA step: maximize the linearized min-rates subject to
/// L T_d (K rho_s + rho_d) = E_d and rho >= 0. After eliminating rho_d the
/// problem is a 1-D piecewise-linear concave maximization solved exactly by
/// breakpoint enumeration, equivalent to the LP.
std::array<double, 2> solve_lp_subproblem(const std::array<double, 2>& rho_i,
                                          const SystemConfig& cfg,
                                          const FadingProfile& fading);

struct PowerSolution {
  double rho_s = 0.0, rho_d = 0.0;
  double objective = 0.0;  // bits over the L intervals
  int iterations = 0;      // LP subproblem solves
  std::vector<std::array<double, 3>> trajectory;  // (rho_s, rho_d, objective)
  bool converged = false;
};

/// Successive convex approximation for the FD overlay power split. Starts
/// from the equal split rho_d = K rho_s unless rho_s0 >= 0 pins the start,
/// and stops when the subproblem optimizer moves by less than epsilon in
/// relative norm. A bisecting fallback keeps the true objective
/// non-decreasing if a full step ever overshoots.
PowerSolution sca_optimize(const SystemConfig& cfg, const FadingProfile& fading,
                           double E_d, double epsilon, double rho_s0 = -1.0);

/// Equal-power reference: rho_d = K rho_s on the same budget.
double equal_allocation_objective(const SystemConfig& cfg, const FadingProfile& fading,
                                  double E_d);

}  // namespace mmrelay

#endif  // MMRELAY_POWALLOC_HPP
