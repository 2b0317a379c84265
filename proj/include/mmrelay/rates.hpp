// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_RATES_HPP
#define MMRELAY_RATES_HPP

#include <vector>

#include <Eigen/Dense>

#include "mmrelay/config.hpp"
#include "mmrelay/estimation.hpp"

namespace mmrelay {

/// Closed-form ergodic-rate lower bounds for one scenario.
/// Per-pair rates are in bits per interval; R_system is the per-slot
/// normalization sum_{iota,k} min(R_UL, R_DL) / (L T_c) in bits/s/Hz.
struct RateBreakdown {
  struct PerInterval {
    Eigen::VectorXd gamma_B, gamma_C, gamma_DL;
    Eigen::VectorXd R_UL, R_DL, R_pair;
  };
  std::vector<PerInterval> per_interval;  // iota = 1..L
  // Interval averages.
  Eigen::VectorXd gamma_B, gamma_C, gamma_DL;
  Eigen::VectorXd R_UL, R_DL, R_pair;
  double R_system = 0.0;
};

/// log2(1 + x) through log1p; exact for the tiny SINRs of deep low-SNR sweeps.
inline double log2_1p(double x) { return std::log1p(x) / M_LN2; }

/// Downlink effective SINR, gamma_DL = M sigma2_dk^2 / ((beta_dk + 1/rho_d)
/// sum_i sigma2_di). Returns 0 when rho_d = 0.
double sinr_downlink(const EstimatorStats& stats, const SystemConfig& cfg,
                     const FadingProfile& fading, int k);

/// Phase-B uplink SINR under the destination-pilot overlay,
/// gamma_B = M sigma2_sk / (sum beta_si + (rho_p sum beta_di + 1) / rho_s).
double sinr_uplink_B(const EstimatorStats& stats, const SystemConfig& cfg,
                     const FadingProfile& fading, int k);

/// Phase-C uplink SINR: gamma_C = M sigma2_sk / (sum beta_si + 1/rho_s) in HD
/// and M sigma2_sk / (sum beta_si + (rho_d beta_LI + 1) / rho_s) in FD.
double sinr_uplink_C(const EstimatorStats& stats, const SystemConfig& cfg,
                     const FadingProfile& fading, int k);

/// Overlay per-pair bits/interval for interval iota (>= 1):
/// R_UL = K log2(1+gamma_B) + (T_d - K) log2(1+gamma_C), R_DL = T_d
/// log2(1+gamma_DL). FD uses steady statistics from the second interval on.
Eigen::VectorXd rate_uplink(const SystemConfig& cfg, const FadingProfile& fading,
                            int interval);
Eigen::VectorXd rate_downlink(const SystemConfig& cfg, const FadingProfile& fading,
                              int interval);

/// Full overlay breakdown across L intervals.
RateBreakdown rate_e2e(const SystemConfig& cfg, const FadingProfile& fading);

/// Conventional separate-pilot scheme. Each user's pilot block is received
/// clean (time-division inside the 2K window keeps the per-user pilot energy
/// at K rho_p), the uplink uses the phase-C SINR form (with loop interference
/// in FD) and the downlink Theorem-1 form, both over T~_d slots. A frame that
/// does not fit yields zero rates.
RateBreakdown conventional_rates(const SystemConfig& cfg, const FadingProfile& fading);

/// Dispatch on cfg.scheme.
RateBreakdown closed_form_rates(const SystemConfig& cfg, const FadingProfile& fading);

}  // namespace mmrelay

#endif  // MMRELAY_RATES_HPP
