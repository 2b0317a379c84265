// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace mmrelay {

namespace {

// sigma2_k = K rho_p beta_k^2 / (contamination + 1 + K rho_p beta_k)
Eigen::VectorXd mmse_sigma2(double K_rho_p, const Eigen::VectorXd& beta,
                            double contamination) {
  return (K_rho_p * beta.array().square() /
          (contamination + 1.0 + K_rho_p * beta.array()))
      .matrix();
}

// Diagonal MMSE shrinkage, entry k = K rho_p beta_k / (K rho_p beta_k + c + 1).
// This is (I + ((c + 1) / (K rho_p)) D^-1)^-1 without forming any inverse.
Eigen::VectorXd shrinkage(double K_rho_p, const Eigen::VectorXd& beta, double c) {
  return (K_rho_p * beta.array() / (K_rho_p * beta.array() + c + 1.0)).matrix();
}

void check_dims(const Eigen::MatrixXcd& m, Eigen::Index rows, Eigen::Index cols,
                const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

EstimatorStats fill_stats(const SystemConfig& cfg, const FadingProfile& fading,
                          IntervalKind kind, double pilot_contamination_s,
                          double data_contamination_mult) {
  const double K_rho_p = cfg.K * cfg.rho_p;
  EstimatorStats st;
  st.kind = kind;
  st.sigma2_s = mmse_sigma2(K_rho_p, fading.beta_s, pilot_contamination_s);
  st.eps2_s = fading.beta_s - st.sigma2_s;
  const double data_cont = data_contamination_mult * st.eps2_s.sum();
  st.sigma2_d = mmse_sigma2(K_rho_p, fading.beta_d, data_cont);
  st.eps2_d = fading.beta_d - st.sigma2_d;
  const double sum_sigma2_d = st.sigma2_d.sum();
  st.alpha = sum_sigma2_d > 0 ? std::sqrt(1.0 / (cfg.M * sum_sigma2_d)) : 0.0;
  return st;
}

}  // namespace

EstimatorStats estimator_stats(const SystemConfig& cfg, const FadingProfile& fading,
                               IntervalKind kind) {
  if (kind == IntervalKind::Steady && cfg.duplex == Duplex::HD)
    throw std::logic_error("estimator_stats: HD has no steady interval kind");
  const double li = kind == IntervalKind::Steady ? loop_power(cfg, fading) : 0.0;
  return fill_stats(cfg, fading, kind, li, cfg.rho_s);
}

EstimatorStats conventional_stats(const SystemConfig& cfg, const FadingProfile& fading) {
  return fill_stats(cfg, fading, IntervalKind::First, 0.0, 0.0);
}

static ChannelEstimate estimate_source(const Eigen::MatrixXcd& R_A,
                                       const Eigen::MatrixXcd& Phi, const SystemConfig& cfg,
                                       const FadingProfile& fading, IntervalKind kind) {
  check_dims(R_A, cfg.M, cfg.K, "estimate_source: R_A");
  check_dims(Phi, cfg.K, cfg.K, "estimate_source: Phi");
  const double K_rho_p = cfg.K * cfg.rho_p;
  const double li = kind == IntervalKind::Steady ? loop_power(cfg, fading) : 0.0;
  const Eigen::VectorXd d = shrinkage(K_rho_p, fading.beta_s, li);

  ChannelEstimate est;
  est.side = EstimateSide::Source;
  est.stats = estimator_stats(cfg, fading, kind);
  if (K_rho_p > 0) {
    est.G_hat = (1.0 / std::sqrt(K_rho_p)) * (R_A * Phi.adjoint());
    est.G_hat = est.G_hat * d.asDiagonal();
  } else {
    est.G_hat = Eigen::MatrixXcd::Zero(cfg.M, cfg.K);  // no pilot energy
  }
  return est;
}

ChannelEstimate estimate_source_first(const Eigen::MatrixXcd& R_A,
                                      const Eigen::MatrixXcd& Phi, const SystemConfig& cfg,
                                      const FadingProfile& fading) {
  return estimate_source(R_A, Phi, cfg, fading, IntervalKind::First);
}

ChannelEstimate estimate_source_steady(const Eigen::MatrixXcd& R_A,
                                       const Eigen::MatrixXcd& Phi, const SystemConfig& cfg,
                                       const FadingProfile& fading) {
  if (cfg.duplex == Duplex::HD)
    throw std::logic_error("estimate_source_steady: HD phase A is never contaminated");
  return estimate_source(R_A, Phi, cfg, fading, IntervalKind::Steady);
}

DetectionResult detect_phaseB_data(const Eigen::MatrixXcd& R_B,
                                   const ChannelEstimate& source_estimate,
                                   const SystemConfig& cfg) {
  const Eigen::MatrixXcd& G_hat = source_estimate.G_hat;
  if (R_B.rows() != G_hat.rows())
    throw std::invalid_argument("detect_phaseB_data: R_B row count mismatch");
  if (cfg.rho_s <= 0)
    throw std::invalid_argument("detect_phaseB_data: rho_s must be > 0");

  DetectionResult res;
  res.soft = G_hat.adjoint() * R_B;
  const double inv_sqrt_rho_s = 1.0 / std::sqrt(cfg.rho_s);
  for (Eigen::Index k = 0; k < G_hat.cols(); ++k) {
    const double norm2 = G_hat.col(k).squaredNorm();
    if (norm2 <= 0.0)
      throw std::runtime_error("detect_phaseB_data: zero-norm estimate column");
    res.soft.row(k) *= inv_sqrt_rho_s / norm2;
  }
  if (cfg.constellation == Constellation::Qpsk) {
    res.hard = res.soft.unaryExpr([](std::complex<double> v) {
      return std::complex<double>(v.real() >= 0 ? M_SQRT1_2 : -M_SQRT1_2,
                                  v.imag() >= 0 ? M_SQRT1_2 : -M_SQRT1_2);
    });
  }
  return res;
}

ChannelEstimate estimate_destination(const Eigen::MatrixXcd& R_B,
                                     const ChannelEstimate& source_estimate,
                                     const Eigen::MatrixXcd& S_B_cancel,
                                     const Eigen::MatrixXcd& Psi, const SystemConfig& cfg,
                                     const FadingProfile& fading) {
  check_dims(R_B, cfg.M, cfg.K, "estimate_destination: R_B");
  check_dims(Psi, cfg.K, cfg.K, "estimate_destination: Psi");
  check_dims(S_B_cancel, cfg.K, cfg.K, "estimate_destination: S_B");
  check_dims(source_estimate.G_hat, cfg.M, cfg.K, "estimate_destination: G_hat_s");

  const double K_rho_p = cfg.K * cfg.rho_p;
  const double data_cont = cfg.rho_s * source_estimate.stats.eps2_s.sum();
  const Eigen::VectorXd d = shrinkage(K_rho_p, fading.beta_d, data_cont);

  Eigen::MatrixXcd residual = R_B;
  if (cfg.rho_s > 0)
    residual.noalias() -= std::sqrt(cfg.rho_s) * (source_estimate.G_hat * S_B_cancel);

  ChannelEstimate est;
  est.side = EstimateSide::Destination;
  est.stats = source_estimate.stats;
  if (K_rho_p > 0) {
    est.G_hat = (1.0 / std::sqrt(K_rho_p)) * (residual * Psi.adjoint());
    est.G_hat = est.G_hat * d.asDiagonal();
  } else {
    est.G_hat = Eigen::MatrixXcd::Zero(cfg.M, cfg.K);
  }
  return est;
}

}  // namespace mmrelay
