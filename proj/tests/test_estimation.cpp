// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>

#include "mmrelay/channel.hpp"
#include "mmrelay/estimation.hpp"
#include "mmrelay/rng.hpp"

using namespace mmrelay;

namespace {

SystemConfig small_cfg() {
  return make_config({{"M", "64"}, {"K", "4"}, {"T_c", "40"}});
}

// Phase-A observation per the chain model; prev_state drawn from the
// estimate distribution replays the previous interval's forwarding.
Eigen::MatrixXcd phase_A(const SystemConfig& cfg, const FadingProfile& fading,
                         const ChannelSet& ch, const PilotBook& pb, std::uint64_t seed,
                         int trial, bool with_li) {
  Eigen::MatrixXcd R_A(cfg.M, cfg.K);
  Rng(seed, 1, Draw::NoiseA, trial).fill_cgauss(R_A);
  R_A.noalias() += std::sqrt(cfg.K * cfg.rho_p) * (ch.G_s * pb.Phi);
  if (with_li) {
    const EstimatorStats st1 = estimator_stats(cfg, fading, IntervalKind::First);
    Eigen::MatrixXcd Ghat_prev(cfg.M, cfg.K);
    Rng rng(seed, 1, Draw::Generic, trial);
    for (int k = 0; k < cfg.K; ++k) {
      const double s = std::sqrt(st1.sigma2_d[k]);
      for (int m = 0; m < cfg.M; ++m) Ghat_prev(m, k) = s * rng.cgauss();
    }
    Eigen::MatrixXcd X_D(cfg.K, cfg.K);
    Rng(seed, 1, Draw::ForwardData, trial).fill_cgauss(X_D);
    const Eigen::MatrixXcd G_li = draw_loop_pilot_channel(cfg, fading, seed, 1, trial);
    R_A.noalias() +=
        (std::sqrt(cfg.rho_d) * st1.alpha) * (G_li * (Ghat_prev * X_D));
  }
  return R_A;
}

}  // namespace

TEST_CASE("closed-form statistics match hand-evaluated values") {
  SystemConfig cfg = make_config({{"M", "128"}, {"K", "10"}});
  const FadingProfile fading = uniform_profile(cfg);

  const EstimatorStats first = estimator_stats(cfg, fading, IntervalKind::First);
  CHECK(first.sigma2_s[0] == doctest::Approx(1000.0 / 1001.0).epsilon(1e-12));

  const EstimatorStats steady = estimator_stats(cfg, fading, IntervalKind::Steady);
  CHECK(steady.sigma2_s[0] == doctest::Approx(1000.0 / 1003.0).epsilon(1e-12));

  // alpha = sqrt(1 / (M sum sigma2_d))
  CHECK(first.alpha ==
        doctest::Approx(std::sqrt(1.0 / (cfg.M * first.sigma2_d.sum()))).epsilon(1e-12));
}

TEST_CASE("no pilot energy means the estimate is the prior") {
  SystemConfig cfg = small_cfg();
  cfg.rho_p = 0.0;
  const FadingProfile fading = uniform_profile(cfg);
  const EstimatorStats st = estimator_stats(cfg, fading, IntervalKind::First);
  CHECK(st.sigma2_s.maxCoeff() == 0.0);
  CHECK(st.eps2_s[0] == doctest::Approx(1.0));
}

TEST_CASE("variance bookkeeping: sigma2 + eps2 = beta exactly") {
  SystemConfig cfg = small_cfg();
  FadingProfile fading = uniform_profile(cfg);
  fading.beta_s << 0.3, 1.7, 0.9, 2.4;
  fading.beta_d << 1.1, 0.2, 0.8, 1.9;
  for (IntervalKind kind : {IntervalKind::First, IntervalKind::Steady}) {
    const EstimatorStats st = estimator_stats(cfg, fading, kind);
    for (int k = 0; k < cfg.K; ++k) {
      CHECK(std::abs(st.sigma2_s[k] + st.eps2_s[k] - fading.beta_s[k]) < 1e-12);
      CHECK(std::abs(st.sigma2_d[k] + st.eps2_d[k] - fading.beta_d[k]) < 1e-12);
      CHECK(st.sigma2_s[k] <= fading.beta_s[k]);
    }
  }
}

TEST_CASE("steady-state quality never exceeds the first interval") {
  SystemConfig cfg = small_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const EstimatorStats first = estimator_stats(cfg, fading, IntervalKind::First);
  const EstimatorStats steady = estimator_stats(cfg, fading, IntervalKind::Steady);
  for (int k = 0; k < cfg.K; ++k) CHECK(steady.sigma2_s[k] <= first.sigma2_s[k]);

  SystemConfig no_li = cfg;
  no_li.rho_LI = 0.0;
  const EstimatorStats same = estimator_stats(no_li, uniform_profile(no_li),
                                              IntervalKind::Steady);
  CHECK(same.sigma2_s[0] == first.sigma2_s[0]);  // equality iff rho_d beta_LI = 0
}

TEST_CASE("steady statistics are interval-invariant (no error propagation)") {
  SystemConfig cfg = small_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const EstimatorStats a = estimator_stats(cfg, fading, IntervalKind::Steady);
  const EstimatorStats b = estimator_stats(cfg, fading, IntervalKind::Steady);
  CHECK(a.sigma2_s == b.sigma2_s);  // bit-exact
  CHECK(a.sigma2_d == b.sigma2_d);
}

TEST_CASE("HD rejects steady-kind requests") {
  SystemConfig cfg = small_cfg();
  cfg.duplex = Duplex::HD;
  CHECK_THROWS_AS(estimator_stats(cfg, uniform_profile(cfg), IntervalKind::Steady),
                  std::logic_error);
  const PilotBook pb = make_pilots(cfg.K);
  Eigen::MatrixXcd R_A = Eigen::MatrixXcd::Zero(cfg.M, cfg.K);
  CHECK_THROWS_AS(estimate_source_steady(R_A, pb.Phi, cfg, uniform_profile(cfg)),
                  std::logic_error);
}

TEST_CASE("noiseless phase A yields the shrunk truth") {
  const SystemConfig cfg = small_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const ChannelSet ch = draw_channels(cfg, fading, 3, 1);
  const Eigen::MatrixXcd R_A = std::sqrt(cfg.K * cfg.rho_p) * (ch.G_s * pb.Phi);
  const ChannelEstimate est = estimate_source_first(R_A, pb.Phi, cfg, fading);
  const double shrink = cfg.K * cfg.rho_p / (cfg.K * cfg.rho_p + 1.0);  // beta = 1
  CHECK((est.G_hat - shrink * ch.G_s).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero loop power makes the steady estimator collapse to the first") {
  SystemConfig cfg = small_cfg();
  cfg.rho_LI = 0.0;
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const ChannelSet ch = draw_channels(cfg, fading, 3, 1);
  const Eigen::MatrixXcd R_A = phase_A(cfg, fading, ch, pb, 3, 0, false);
  const ChannelEstimate a = estimate_source_first(R_A, pb.Phi, cfg, fading);
  const ChannelEstimate b = estimate_source_steady(R_A, pb.Phi, cfg, fading);
  CHECK(a.G_hat == b.G_hat);
}

TEST_CASE("sampled estimate variance matches sigma2 (first and steady)") {
  const SystemConfig cfg = small_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const int trials = 10000;

  for (const bool steady : {false, true}) {
    double acc = 0.0;
    double cross_re = 0.0;
    for (int t = 0; t < trials; ++t) {
      const ChannelSet ch = draw_channels(cfg, fading, 17, 1, t);
      const Eigen::MatrixXcd R_A = phase_A(cfg, fading, ch, pb, 17, t, steady);
      const ChannelEstimate est = steady
                                      ? estimate_source_steady(R_A, pb.Phi, cfg, fading)
                                      : estimate_source_first(R_A, pb.Phi, cfg, fading);
      acc += est.G_hat.col(0).squaredNorm() / cfg.M;
      // MMSE orthogonality: estimate and error are uncorrelated.
      cross_re += (est.G_hat.col(0).adjoint() * (ch.G_s.col(0) - est.G_hat.col(0)))(0)
                      .real() / cfg.M;
    }
    const EstimatorStats st = estimator_stats(
        cfg, fading, steady ? IntervalKind::Steady : IntervalKind::First);
    CHECK(acc / trials == doctest::Approx(st.sigma2_s[0]).epsilon(0.02));
    // Cross moment -> 0 within 3 standard errors of roughly
    // sqrt(sigma2 eps2 / M) / sqrt(trials).
    const double se =
        std::sqrt(st.sigma2_s[0] * st.eps2_s[0] / cfg.M / trials);
    CHECK(std::abs(cross_re / trials) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("destination estimate variance matches sigma2_d via the chain") {
  const SystemConfig cfg = small_cfg();
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const int trials = 10000;
  const double sq_Krp = std::sqrt(cfg.K * cfg.rho_p);

  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ChannelSet ch = draw_channels(cfg, fading, 23, 1, t);
    const Eigen::MatrixXcd R_A = phase_A(cfg, fading, ch, pb, 23, t, false);
    const ChannelEstimate est_s = estimate_source_first(R_A, pb.Phi, cfg, fading);
    Eigen::MatrixXcd S_B(cfg.K, cfg.K);
    Rng(23, 1, Draw::SourceDataB, t).fill_cgauss(S_B);
    Eigen::MatrixXcd R_B(cfg.M, cfg.K);
    Rng(23, 1, Draw::NoiseB, t).fill_cgauss(R_B);
    R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
    R_B.noalias() += std::sqrt(cfg.rho_s) * (ch.G_s * S_B);
    const ChannelEstimate est_d = estimate_destination(R_B, est_s, S_B, pb.Psi, cfg, fading);
    acc += est_d.G_hat.col(1).squaredNorm() / cfg.M;
  }
  const EstimatorStats st = estimator_stats(cfg, fading, IntervalKind::First);
  CHECK(acc / trials == doctest::Approx(st.sigma2_d[1]).epsilon(0.02));
}

TEST_CASE("rho_s = 0 reduces destination estimation to the clean MMSE form") {
  SystemConfig cfg = small_cfg();
  cfg.rho_s = 0.0;
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const ChannelSet ch = draw_channels(cfg, fading, 29, 1);
  const Eigen::MatrixXcd R_A = phase_A(cfg, fading, ch, pb, 29, 0, false);
  const ChannelEstimate est_s = estimate_source_first(R_A, pb.Phi, cfg, fading);

  const Eigen::MatrixXcd R_B = std::sqrt(cfg.K * cfg.rho_p) * (ch.G_d * pb.Psi);
  const Eigen::MatrixXcd S_B = Eigen::MatrixXcd::Ones(cfg.K, cfg.K);  // ignored
  const ChannelEstimate est_d = estimate_destination(R_B, est_s, S_B, pb.Psi, cfg, fading);
  const double shrink = cfg.K * cfg.rho_p / (cfg.K * cfg.rho_p + 1.0);
  CHECK((est_d.G_hat - shrink * ch.G_d).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("single-user noiseless detection is exact") {
  SystemConfig cfg = make_config({{"M", "8"}, {"K", "1"}, {"T_c", "40"}});
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(1);
  const ChannelSet ch = draw_channels(cfg, fading, 31, 1);

  // Perfect CSI (noiseless pilots at infinite power modeled by direct truth).
  ChannelEstimate est;
  est.G_hat = ch.G_s;
  est.side = EstimateSide::Source;
  est.stats = estimator_stats(cfg, fading, IntervalKind::First);

  Eigen::MatrixXcd s(1, 1);
  s(0, 0) = std::complex<double>(0.6, -0.8);
  const Eigen::MatrixXcd R_B = std::sqrt(cfg.rho_s) * (ch.G_s * s);  // no pilots, no noise
  const DetectionResult det = detect_phaseB_data(R_B, est, cfg);
  CHECK(std::abs(det.soft(0, 0) - s(0, 0)) < 1e-12);
}

TEST_CASE("QPSK symbol errors at M = 512 are below 1e-3") {
  SystemConfig cfg = make_config({{"M", "512"}, {"K", "10"}, {"constellation", "qpsk"}});
  const FadingProfile fading = uniform_profile(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const double sq_Krp = std::sqrt(cfg.K * cfg.rho_p);
  const int trials = 150;  // 150 * K * K = 15000 symbols
  long errors = 0;
  long total = 0;
  for (int t = 0; t < trials; ++t) {
    const ChannelSet ch = draw_channels(cfg, fading, 37, 1, t);
    const Eigen::MatrixXcd R_A = phase_A(cfg, fading, ch, pb, 37, t, false);
    const ChannelEstimate est_s = estimate_source_first(R_A, pb.Phi, cfg, fading);
    Eigen::MatrixXcd S_B(cfg.K, cfg.K);
    Rng(37, 1, Draw::SourceDataB, t).fill_qpsk(S_B);
    Eigen::MatrixXcd R_B(cfg.M, cfg.K);
    Rng(37, 1, Draw::NoiseB, t).fill_cgauss(R_B);
    R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
    R_B.noalias() += std::sqrt(cfg.rho_s) * (ch.G_s * S_B);
    const DetectionResult det = detect_phaseB_data(R_B, est_s, cfg);
    for (int k = 0; k < cfg.K; ++k)
      for (int j = 0; j < cfg.K; ++j) {
        ++total;
        if (std::abs(det.hard(k, j) - S_B(k, j)) > 1e-9) ++errors;
      }
  }
  CHECK(static_cast<double>(errors) / total < 1e-3);
}

TEST_CASE("genie-aided and detected cancellation agree as M grows") {
  // The sampled destination-estimate variance under detected symbols
  // approaches the genie-aided value.
  const FadingProfile base_fading = uniform_profile(make_config({{"K", "4"}}));
  auto gap_at = [&](int M) {
    SystemConfig cfg = make_config({{"M", std::to_string(M)}, {"K", "4"}});
    const FadingProfile fading = base_fading;
    const PilotBook pb = make_pilots(cfg.K);
    const double sq_Krp = std::sqrt(cfg.K * cfg.rho_p);
    const int trials = 2000;
    double genie = 0.0, detected = 0.0;
    for (int t = 0; t < trials; ++t) {
      const ChannelSet ch = draw_channels(cfg, fading, 41, 1, t);
      const Eigen::MatrixXcd R_A = phase_A(cfg, fading, ch, pb, 41, t, false);
      const ChannelEstimate est_s = estimate_source_first(R_A, pb.Phi, cfg, fading);
      Eigen::MatrixXcd S_B(cfg.K, cfg.K);
      Rng(41, 1, Draw::SourceDataB, t).fill_cgauss(S_B);
      Eigen::MatrixXcd R_B(cfg.M, cfg.K);
      Rng(41, 1, Draw::NoiseB, t).fill_cgauss(R_B);
      R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
      R_B.noalias() += std::sqrt(cfg.rho_s) * (ch.G_s * S_B);
      const ChannelEstimate g = estimate_destination(R_B, est_s, S_B, pb.Psi, cfg, fading);
      const DetectionResult det = detect_phaseB_data(R_B, est_s, cfg);
      const ChannelEstimate d =
          estimate_destination(R_B, est_s, det.soft, pb.Psi, cfg, fading);
      genie += g.G_hat.col(0).squaredNorm() / cfg.M;
      detected += d.G_hat.col(0).squaredNorm() / cfg.M;
    }
    return std::abs(genie - detected) / trials;
  };
  const double gap_small = gap_at(32);
  const double gap_large = gap_at(128);
  CHECK(gap_large < gap_small);
}
