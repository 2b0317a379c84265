// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/rates.hpp"

#include <stdexcept>

#include "mmrelay/frame.hpp"

namespace mmrelay {

namespace {

IntervalKind kind_for_interval(const SystemConfig& cfg, int interval) {
  if (interval < 1) throw std::invalid_argument("interval index must be >= 1");
  return (cfg.duplex == Duplex::FD && interval > 1) ? IntervalKind::Steady
                                                    : IntervalKind::First;
}

RateBreakdown zero_breakdown(int K, int L) {
  RateBreakdown rb;
  rb.per_interval.resize(L);
  for (auto& pi : rb.per_interval) {
    pi.gamma_B = pi.gamma_C = pi.gamma_DL = Eigen::VectorXd::Zero(K);
    pi.R_UL = pi.R_DL = pi.R_pair = Eigen::VectorXd::Zero(K);
  }
  rb.gamma_B = rb.gamma_C = rb.gamma_DL = Eigen::VectorXd::Zero(K);
  rb.R_UL = rb.R_DL = rb.R_pair = Eigen::VectorXd::Zero(K);
  rb.R_system = 0.0;
  return rb;
}

void finalize_averages(RateBreakdown& rb, int K, int L, double T_c) {
  rb.gamma_B = rb.gamma_C = rb.gamma_DL = Eigen::VectorXd::Zero(K);
  rb.R_UL = rb.R_DL = rb.R_pair = Eigen::VectorXd::Zero(K);
  for (const auto& pi : rb.per_interval) {
    rb.gamma_B += pi.gamma_B;
    rb.gamma_C += pi.gamma_C;
    rb.gamma_DL += pi.gamma_DL;
    rb.R_UL += pi.R_UL;
    rb.R_DL += pi.R_DL;
    rb.R_pair += pi.R_pair;
  }
  const double inv_L = 1.0 / L;
  rb.gamma_B *= inv_L;
  rb.gamma_C *= inv_L;
  rb.gamma_DL *= inv_L;
  rb.R_UL *= inv_L;
  rb.R_DL *= inv_L;
  rb.R_pair *= inv_L;
  rb.R_system = rb.R_pair.sum() / T_c;
}

}  // namespace

double sinr_downlink(const EstimatorStats& stats, const SystemConfig& cfg,
                     const FadingProfile& fading, int k) {
  if (cfg.rho_d <= 0) return 0.0;
  const double sum_sigma2_d = stats.sigma2_d.sum();
  if (sum_sigma2_d <= 0) return 0.0;
  const double s2 = stats.sigma2_d[k];
  return cfg.M * s2 * s2 / ((fading.beta_d[k] + 1.0 / cfg.rho_d) * sum_sigma2_d);
}

double sinr_uplink_B(const EstimatorStats& stats, const SystemConfig& cfg,
                     const FadingProfile& fading, int k) {
  if (cfg.rho_s <= 0) return 0.0;
  const double den = fading.beta_s.sum() +
                     (cfg.rho_p * fading.beta_d.sum() + 1.0) / cfg.rho_s;
  return cfg.M * stats.sigma2_s[k] / den;
}

double sinr_uplink_C(const EstimatorStats& stats, const SystemConfig& cfg,
                     const FadingProfile& fading, int k) {
  if (cfg.rho_s <= 0) return 0.0;
  const double li = loop_power(cfg, fading);
  const double den = fading.beta_s.sum() + (li + 1.0) / cfg.rho_s;
  return cfg.M * stats.sigma2_s[k] / den;
}

Eigen::VectorXd rate_uplink(const SystemConfig& cfg, const FadingProfile& fading,
                            int interval) {
  if (cfg.scheme != Scheme::Overlay)
    throw std::logic_error("rate_uplink: overlay scheme only");
  const FrameAccounting fa = frame_accounting(cfg);
  const EstimatorStats st = estimator_stats(cfg, fading, kind_for_interval(cfg, interval));
  Eigen::VectorXd r(cfg.K);
  for (int k = 0; k < cfg.K; ++k)
    r[k] = cfg.K * log2_1p(sinr_uplink_B(st, cfg, fading, k)) +
           (fa.T_d - cfg.K) * log2_1p(sinr_uplink_C(st, cfg, fading, k));
  return r;
}

Eigen::VectorXd rate_downlink(const SystemConfig& cfg, const FadingProfile& fading,
                              int interval) {
  if (cfg.scheme != Scheme::Overlay)
    throw std::logic_error("rate_downlink: overlay scheme only");
  const FrameAccounting fa = frame_accounting(cfg);
  const EstimatorStats st = estimator_stats(cfg, fading, kind_for_interval(cfg, interval));
  Eigen::VectorXd r(cfg.K);
  for (int k = 0; k < cfg.K; ++k)
    r[k] = fa.T_d * log2_1p(sinr_downlink(st, cfg, fading, k));
  return r;
}

RateBreakdown rate_e2e(const SystemConfig& cfg, const FadingProfile& fading) {
  if (cfg.scheme != Scheme::Overlay)
    throw std::logic_error("rate_e2e: overlay scheme only");
  const auto fa = try_frame_accounting(cfg);
  if (!fa) return zero_breakdown(cfg.K, cfg.L);

  RateBreakdown rb;
  rb.per_interval.resize(cfg.L);
  // Statistics only distinguish the first interval from the steady state, so
  // each kind is evaluated once and replicated.
  for (int i = 0; i < cfg.L; ++i) {
    const int interval = i + 1;
    auto& pi = rb.per_interval[i];
    if (interval > 1 &&
        kind_for_interval(cfg, interval) == kind_for_interval(cfg, interval - 1)) {
      pi = rb.per_interval[i - 1];
      continue;
    }
    const EstimatorStats st = estimator_stats(cfg, fading, kind_for_interval(cfg, interval));
    pi.gamma_B.resize(cfg.K);
    pi.gamma_C.resize(cfg.K);
    pi.gamma_DL.resize(cfg.K);
    pi.R_UL.resize(cfg.K);
    pi.R_DL.resize(cfg.K);
    pi.R_pair.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
      pi.gamma_B[k] = sinr_uplink_B(st, cfg, fading, k);
      pi.gamma_C[k] = sinr_uplink_C(st, cfg, fading, k);
      pi.gamma_DL[k] = sinr_downlink(st, cfg, fading, k);
      pi.R_UL[k] = cfg.K * log2_1p(pi.gamma_B[k]) +
                   (fa->T_d - cfg.K) * log2_1p(pi.gamma_C[k]);
      pi.R_DL[k] = fa->T_d * log2_1p(pi.gamma_DL[k]);
      pi.R_pair[k] = std::min(pi.R_UL[k], pi.R_DL[k]);
    }
  }
  finalize_averages(rb, cfg.K, cfg.L, cfg.T_c);
  return rb;
}

RateBreakdown conventional_rates(const SystemConfig& cfg, const FadingProfile& fading) {
  if (cfg.scheme != Scheme::Conventional)
    throw std::logic_error("conventional_rates: conventional scheme only");
  const auto fa = try_frame_accounting(cfg);
  if (!fa) return zero_breakdown(cfg.K, cfg.L);

  const EstimatorStats st = conventional_stats(cfg, fading);
  RateBreakdown rb;
  rb.per_interval.resize(1);
  auto& pi = rb.per_interval[0];
  pi.gamma_B = Eigen::VectorXd::Zero(cfg.K);  // no overlaid phase B
  pi.gamma_C.resize(cfg.K);
  pi.gamma_DL.resize(cfg.K);
  pi.R_UL.resize(cfg.K);
  pi.R_DL.resize(cfg.K);
  pi.R_pair.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    pi.gamma_C[k] = sinr_uplink_C(st, cfg, fading, k);
    pi.gamma_DL[k] = sinr_downlink(st, cfg, fading, k);
    pi.R_UL[k] = fa->T_d * log2_1p(pi.gamma_C[k]);
    pi.R_DL[k] = fa->T_d * log2_1p(pi.gamma_DL[k]);
    pi.R_pair[k] = std::min(pi.R_UL[k], pi.R_DL[k]);
  }
  // Every interval looks the same; replicate for the per-interval view.
  rb.per_interval.resize(cfg.L, pi);
  finalize_averages(rb, cfg.K, cfg.L, cfg.T_c);
  return rb;
}

RateBreakdown closed_form_rates(const SystemConfig& cfg, const FadingProfile& fading) {
  return cfg.scheme == Scheme::Overlay ? rate_e2e(cfg, fading)
                                       : conventional_rates(cfg, fading);
}

}  // namespace mmrelay
