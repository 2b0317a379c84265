// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_ESTIMATION_HPP
#define MMRELAY_ESTIMATION_HPP

#include <Eigen/Dense>

#include "mmrelay/config.hpp"

namespace mmrelay {

/// First: uncontaminated phase A (interval 1, and every HD interval).
/// Steady: FD intervals > 1, where the pilot reception carries loop
/// interference from the previous interval's forwarding.
enum class IntervalKind { First, Steady };

/// Closed-form second-order statistics of the MMSE estimates.
///
///   first:  sigma2_sk = K rho_p beta_sk^2 / (1 + K rho_p beta_sk)
///   steady: sigma2_sk = K rho_p beta_sk^2 / (rho_d beta_LI + 1 + K rho_p beta_sk)
///   sigma2_dk = K rho_p beta_dk^2 / (rho_s sum_i eps2_si + 1 + K rho_p beta_dk)
///
/// eps2 = beta - sigma2 on both sides, and alpha = sqrt(1 / (M sum_i
/// sigma2_di)) normalizes the average MRT transmit power.
struct EstimatorStats {
  Eigen::VectorXd sigma2_s;
  Eigen::VectorXd eps2_s;
  Eigen::VectorXd sigma2_d;
  Eigen::VectorXd eps2_d;
  double alpha = 0.0;
  IntervalKind kind = IntervalKind::First;
};

enum class EstimateSide { Source, Destination };

struct ChannelEstimate {
  Eigen::MatrixXcd G_hat;
  EstimatorStats stats;
  EstimateSide side = EstimateSide::Source;
};

/// Steady kind is an FD-only concept; requesting it under HD throws.
EstimatorStats estimator_stats(const SystemConfig& cfg, const FadingProfile& fading,
                               IntervalKind kind);

/// Conventional-scheme statistics: both pilot blocks are received clean, so
/// both sides use the first-interval formula with no data contamination.
EstimatorStats conventional_stats(const SystemConfig& cfg, const FadingProfile& fading);

/// MMSE source estimate from the clean phase-A observation
/// R_A = sqrt(K rho_p) G_s Phi + N_A.
ChannelEstimate estimate_source_first(const Eigen::MatrixXcd& R_A,
                                      const Eigen::MatrixXcd& Phi, const SystemConfig& cfg,
                                      const FadingProfile& fading);

/// MMSE source estimate when phase A carries the loop-interference replay of
/// the previous interval's forwarding (FD only; rejects HD configs).
ChannelEstimate estimate_source_steady(const Eigen::MatrixXcd& R_A,
                                       const Eigen::MatrixXcd& Phi, const SystemConfig& cfg,
                                       const FadingProfile& fading);

struct DetectionResult {
  Eigen::MatrixXcd soft;  // MRC output divided by sqrt(rho_s) ||g_hat_sk||^2
  Eigen::MatrixXcd hard;  // QPSK decisions; empty in Gaussian mode
};

/// Phase-B source data detection from R_B = sqrt(rho_s) G_s S_B +
/// sqrt(K rho_p) G_d Psi + N_B. The normalization divides by the realized
/// ||g_hat_sk||^2, not its expectation.
DetectionResult detect_phaseB_data(const Eigen::MatrixXcd& R_B,
                                   const ChannelEstimate& source_estimate,
                                   const SystemConfig& cfg);

/// MMSE destination estimate after cancelling the phase-B source data.
/// S_B_cancel may be the true block (genie mode) or detector output.
ChannelEstimate estimate_destination(const Eigen::MatrixXcd& R_B,
                                     const ChannelEstimate& source_estimate,
                                     const Eigen::MatrixXcd& S_B_cancel,
                                     const Eigen::MatrixXcd& Psi, const SystemConfig& cfg,
                                     const FadingProfile& fading);

}  // namespace mmrelay

#endif  // MMRELAY_ESTIMATION_HPP
