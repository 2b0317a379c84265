// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_ASYMPTOTICS_HPP
#define MMRELAY_ASYMPTOTICS_HPP

#include <Eigen/Dense>

#include "mmrelay/config.hpp"

namespace mmrelay {

enum class Regime { High, Low };

/// Equal-power (rho_s = rho_d = rho_p) limiting SINRs.
///
/// High SNR limits: gamma_B -> M beta_sk / (sum beta_s + sum beta_d),
/// gamma_C -> M beta_sk / sum beta_s, gamma_DL -> M beta_dk / sum beta_d; the
/// conventional uplink/downlink coincide with gamma_C / gamma_DL.
///
/// Low SNR: the limits themselves vanish, so the report carries the rho^2
/// coefficients instead: gamma_UL -> M K beta_sk^2 and
/// gamma_DL -> M K beta_dk^4 / sum beta_d^2, identical for both schemes.
struct AsymptoticReport {
  Regime regime = Regime::High;
  Scheme scheme = Scheme::Overlay;
  // Overlay fields (empty when scheme == Conventional).
  Eigen::VectorXd gamma_B, gamma_C, gamma_DL;
  // Conventional fields (empty when scheme == Overlay).
  Eigen::VectorXd gamma_UL_conv, gamma_DL_conv;
  // Corollary-1 outputs; filled by corollary_check.
  std::vector<bool> dominance;
  Eigen::VectorXd margin;
};

AsymptoticReport asymptotic_sinrs(const FadingProfile& fading, int M, int K,
                                  Regime regime, Scheme scheme);

/// Corollary-1 dominance test per pair k: the high-SNR uplink condition
/// (sum beta_s)^2 + M beta_sk sum beta_s >= (sum beta_d)^2 combined with the
/// overlay-vs-conventional duration comparison T_d > T~_d. The margin is the
/// inequality slack. The SINR part is independent of T_c and L.
AsymptoticReport corollary_check(const FadingProfile& fading, int M, int K, int T_c);

/// Numerical bridge between the finite-SNR closed forms and the limits.
/// SINRs are evaluated at rho = 1e4 against the high-SNR limits, and the
/// rho^2 coefficients are extracted around rho = 1e-3 (two-point Richardson
/// extrapolation in rho; raw single-point quotients are reported alongside).
struct LimitConsistency {
  double rho_high = 1e4;
  double rho_low = 1e-3;
  // Max relative deviation over pairs.
  double high_dev_B = 0.0, high_dev_C_hd = 0.0, high_dev_C_fd = 0.0, high_dev_DL = 0.0;
  double low_dev_UL = 0.0, low_dev_DL = 0.0;          // extrapolated coefficients
  double low_dev_UL_raw = 0.0, low_dev_DL_raw = 0.0;  // raw gamma / rho^2 at rho_low
};

LimitConsistency limit_consistency(const SystemConfig& cfg, const FadingProfile& fading);

}  // namespace mmrelay

#endif  // MMRELAY_ASYMPTOTICS_HPP
