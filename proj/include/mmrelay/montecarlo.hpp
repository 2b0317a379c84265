// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_MONTECARLO_HPP
#define MMRELAY_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mmrelay/config.hpp"

namespace mmrelay {

/// Worker threads used for trial partitioning (default: hardware concurrency).
/// Results are bit-identical for any setting: trials are keyed by index and
/// reduced with a fixed-order pairwise sum.
void set_max_threads(int n);
int max_threads();

struct MomentEstimate {
  double sample = 0.0;
  double target = 0.0;
  double stderr_ = 0.0;
};

/// Sampled expectations behind the closed-form SINRs, against their
/// closed-form targets (all aggregated as means over the K pairs):
///   E_g_ghat   Re E{g_dk^H ghat_dk}                      -> M sigma2_dk
///   Var_g_ghat Var{g_dk^H ghat_dk}                       -> M beta_dk sigma2_dk
///   MI_DL      rho_d a^2 sum_{i!=k} E|g_dk^H ghat_di|^2  -> M rho_d a^2 beta_dk sum_{i!=k} sigma2_di
///   MI_UL      rho_s sum_{i!=k} E|ghat_sk^H g_si|^2      -> M rho_s sigma2_sk sum_{i!=k} beta_si
///   PI_UL      rho_p E||ghat_sk^H G_d||^2                -> M rho_p sigma2_sk sum_i beta_di
///   LI_UL      rho_d a^2 E||ghat_sk^H G_LI ghat_d||^2    -> M rho_d beta_LI sigma2_sk
///   AN_UL      E||ghat_sk||^2                            -> M sigma2_sk
/// The LI target is the form implied by the phase-C SINR denominator (linear
/// in beta_LI); the sampled moment discriminates it from the beta_LI^2 variant.
struct MomentTable {
  MomentEstimate E_g_ghat, Var_g_ghat, MI_DL, MI_UL, PI_UL, LI_UL, AN_UL;
};

struct TrialResult {
  double empirical_R_system = 0.0;  // bits/s/Hz
  double stderr_R_system = 0.0;
  Eigen::VectorXd R_UL;  // per-pair bits/interval, trial- and interval-averaged
  Eigen::VectorXd R_DL;
  std::optional<MomentTable> moments;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Full transmission chain with instantaneous channels. Each trial replays L
/// coherence intervals: phase-A estimation (FD intervals > 1 add the
/// loop-interference replay of the previous interval's forwarding), phase-B
/// detection and destination estimation, then the per-phase effective SINRs
/// are formed from the realized signal decompositions, with the channel
/// estimate as combiner/precoder, and tau_d log2(1 + SINR) is averaged.
/// Conventional-scheme configs run the separate-pilot chain instead.
/// Infeasible frames yield zero rates (sweep semantics).
TrialResult simulate_chain(const SystemConfig& cfg, const FadingProfile& fading,
                           int trials, std::uint64_t seed);

/// Brute-force sampling of the seven moments above from realized chain
/// quantities in an FD steady-state interval (the chain runs interval 1 and
/// measures in interval 2, where the statistics have already reached their
/// fixed point). trials >= 1e3 recommended.
MomentTable moment_oracles(const SystemConfig& cfg, const FadingProfile& fading,
                           int trials, std::uint64_t seed);

struct DetectionPoint {
  int M = 0;
  double mean_rel_error = 0.0;  // mean_k ||s_hat_k - s_k|| / ||s_k||
};

/// Phase-B detection error versus antenna count (M_list ascending); the
/// relative error decays like 1/sqrt(M).
std::vector<DetectionPoint> detection_error_vs_M(const SystemConfig& cfg,
                                                 const FadingProfile& fading,
                                                 const std::vector<int>& M_list, int trials,
                                                 std::uint64_t seed);

}  // namespace mmrelay

#endif  // MMRELAY_MONTECARLO_HPP
