// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mmrelay/channel.hpp"
#include "mmrelay/estimation.hpp"
#include "mmrelay/frame.hpp"
#include "mmrelay/rates.hpp"
#include "mmrelay/rng.hpp"

namespace mmrelay {

namespace {

std::atomic<int> g_max_threads{0};

constexpr double kResourceBudget = 5e10;  // M * K * trials guard

void check_resources(const SystemConfig& cfg, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const double load = static_cast<double>(cfg.M) * cfg.K * trials;
  if (load > kResourceBudget)
    throw std::runtime_error("simulation budget exceeded: M*K*trials = " +
                             std::to_string(load));
}

/// Run fn(trial) for trial in [0, trials) across workers. Each trial writes
/// only its own output slots, so scheduling cannot change results.
template <typename Fn>
void parallel_trials(int trials, const Fn& fn) {
  int workers = max_threads();
  workers = std::min(workers, trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= trials) break;
        fn(t);
      }
    });
  for (auto& th : pool) th.join();
}

double mean_of(const std::vector<double>& v) { return pairwise_sum(v) / v.size(); }

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(sq) / (v.size() - 1);
  return std::sqrt(var / v.size());
}

// Diagonal MMSE shrinkage for the conventional clean pilot blocks.
Eigen::VectorXd clean_shrinkage(double K_rho_p, const Eigen::VectorXd& beta) {
  return (K_rho_p * beta.array() / (K_rho_p * beta.array() + 1.0)).matrix();
}

struct InstantSinrs {
  Eigen::VectorXd gamma_B, gamma_C, gamma_DL;
};

double ratio_or_zero(double num, double den) {
  return (num > 0.0 && den > 0.0) ? num / den : 0.0;
}

/// Effective SINRs conditional on the realized channels: the realized
/// combined gains are the desired signal, cross-gains the interference, and
/// symbol/noise averages supply the rest.
InstantSinrs instantaneous_sinrs(const SystemConfig& cfg, const ChannelSet& ch,
                                 const Eigen::MatrixXcd& Ghat_s,
                                 const Eigen::MatrixXcd& Ghat_d, double alpha,
                                 bool with_phase_B) {
  const int K = cfg.K;
  InstantSinrs out;
  out.gamma_B = Eigen::VectorXd::Zero(K);
  out.gamma_C = Eigen::VectorXd::Zero(K);
  out.gamma_DL = Eigen::VectorXd::Zero(K);

  const Eigen::MatrixXcd A_ss = Ghat_s.adjoint() * ch.G_s;
  Eigen::MatrixXcd A_sd;
  if (with_phase_B) A_sd = Ghat_s.adjoint() * ch.G_d;
  Eigen::MatrixXcd B_li;
  const bool fd = cfg.duplex == Duplex::FD;
  if (fd && cfg.rho_d > 0) {
    const Eigen::MatrixXcd W = ch.G_LI * Ghat_d;
    B_li = Ghat_s.adjoint() * W;
  }
  const Eigen::MatrixXcd D_dd = ch.G_d.adjoint() * Ghat_d;

  const double a2 = alpha * alpha;
  for (int k = 0; k < K; ++k) {
    const double an = Ghat_s.col(k).squaredNorm();
    const double sig = cfg.rho_s * std::norm(A_ss(k, k));
    const double mi = cfg.rho_s * (A_ss.row(k).squaredNorm() - std::norm(A_ss(k, k)));
    const double li =
        (fd && cfg.rho_d > 0) ? cfg.rho_d * a2 * B_li.row(k).squaredNorm() : 0.0;
    if (with_phase_B) {
      const double pi = cfg.rho_p * A_sd.row(k).squaredNorm();
      out.gamma_B[k] = ratio_or_zero(sig, mi + pi + an);
    }
    out.gamma_C[k] = ratio_or_zero(sig, mi + li + an);

    const double dsig = cfg.rho_d * a2 * std::norm(D_dd(k, k));
    const double dmi =
        cfg.rho_d * a2 * (D_dd.row(k).squaredNorm() - std::norm(D_dd(k, k)));
    out.gamma_DL[k] = ratio_or_zero(dsig, dmi + 1.0);
  }
  return out;
}

struct OverlayTrialOut {
  double rate = 0.0;                // bits/s/Hz over the L intervals
  Eigen::VectorXd R_UL, R_DL;       // per-pair bits/interval, interval-averaged
};

OverlayTrialOut run_overlay_trial(const SystemConfig& cfg, const FadingProfile& fading,
                                  const FrameAccounting& fa, const PilotBook& pb,
                                  const EstimatorStats& st_first,
                                  const EstimatorStats& st_steady, std::uint64_t seed,
                                  int trial) {
  const int K = cfg.K;
  const int M = cfg.M;
  const double sq_Krp = std::sqrt(cfg.K * cfg.rho_p);
  const bool fd = cfg.duplex == Duplex::FD;

  OverlayTrialOut out;
  out.R_UL = Eigen::VectorXd::Zero(K);
  out.R_DL = Eigen::VectorXd::Zero(K);

  // FD cross-interval state: previous interval's precoder and phase-D block.
  double alpha_prev = 0.0;
  Eigen::MatrixXcd Ghat_d_prev, X_D_prev;

  double pair_bits = 0.0;
  for (int interval = 1; interval <= cfg.L; ++interval) {
    const bool steady = fd && interval > 1;
    const EstimatorStats& st = steady ? st_steady : st_first;
    const ChannelSet ch = draw_channels(cfg, fading, seed, interval, trial);

    Eigen::MatrixXcd S_B(K, K);
    {
      Rng rng(seed, interval, Draw::SourceDataB, trial);
      if (cfg.constellation == Constellation::Qpsk)
        rng.fill_qpsk(S_B);
      else
        rng.fill_cgauss(S_B);
    }

    // Phase A.
    Eigen::MatrixXcd R_A(M, K);
    Rng(seed, interval, Draw::NoiseA, trial).fill_cgauss(R_A);
    R_A.noalias() += sq_Krp * (ch.G_s * pb.Phi);
    if (steady && cfg.rho_d > 0 && alpha_prev > 0) {
      const Eigen::MatrixXcd G_li_pilot =
          draw_loop_pilot_channel(cfg, fading, seed, interval, trial);
      const Eigen::MatrixXcd precoded = Ghat_d_prev * X_D_prev;
      R_A.noalias() +=
          (std::sqrt(cfg.rho_d) * alpha_prev) * (G_li_pilot * precoded);
    }
    const ChannelEstimate est_s = steady
                                      ? estimate_source_steady(R_A, pb.Phi, cfg, fading)
                                      : estimate_source_first(R_A, pb.Phi, cfg, fading);

    // Phase B.
    Eigen::MatrixXcd R_B(M, K);
    Rng(seed, interval, Draw::NoiseB, trial).fill_cgauss(R_B);
    R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
    if (cfg.rho_s > 0) R_B.noalias() += std::sqrt(cfg.rho_s) * (ch.G_s * S_B);

    Eigen::MatrixXcd S_cancel = S_B;
    if (cfg.cancellation == Cancellation::Detected && cfg.rho_s > 0) {
      const DetectionResult det = detect_phaseB_data(R_B, est_s, cfg);
      S_cancel = cfg.constellation == Constellation::Qpsk ? det.hard : det.soft;
    }
    const ChannelEstimate est_d =
        estimate_destination(R_B, est_s, S_cancel, pb.Psi, cfg, fading);

    const InstantSinrs gi =
        instantaneous_sinrs(cfg, ch, est_s.G_hat, est_d.G_hat, st.alpha, true);
    for (int k = 0; k < K; ++k) {
      const double r_ul = K * log2_1p(gi.gamma_B[k]) +
                          (fa.T_d - K) * log2_1p(gi.gamma_C[k]);
      const double r_dl = fa.T_d * log2_1p(gi.gamma_DL[k]);
      out.R_UL[k] += r_ul;
      out.R_DL[k] += r_dl;
      pair_bits += std::min(r_ul, r_dl);
    }

    if (fd) {
      alpha_prev = st.alpha;
      Ghat_d_prev = est_d.G_hat;
      const int T_d = static_cast<int>(fa.T_d);
      X_D_prev.resize(K, K);
      Rng rng(seed, interval, Draw::ForwardData, trial);
      Eigen::MatrixXcd X(K, T_d);
      if (cfg.constellation == Constellation::Qpsk)
        rng.fill_qpsk(X);
      else
        rng.fill_cgauss(X);
      X_D_prev = X.rightCols(K);  // phase D overlaps the next phase A
    }
  }
  out.rate = pair_bits / (static_cast<double>(cfg.L) * cfg.T_c);
  out.R_UL /= cfg.L;
  out.R_DL /= cfg.L;
  return out;
}

OverlayTrialOut run_conventional_trial(const SystemConfig& cfg,
                                       const FadingProfile& fading,
                                       const FrameAccounting& fa, const PilotBook& pb,
                                       const EstimatorStats& st, std::uint64_t seed,
                                       int trial) {
  const int K = cfg.K;
  const int M = cfg.M;
  const double sq_Krp = std::sqrt(cfg.K * cfg.rho_p);
  const double K_rho_p = cfg.K * cfg.rho_p;

  OverlayTrialOut out;
  out.R_UL = Eigen::VectorXd::Zero(K);
  out.R_DL = Eigen::VectorXd::Zero(K);

  const Eigen::VectorXd d_s = clean_shrinkage(K_rho_p, fading.beta_s);
  const Eigen::VectorXd d_d = clean_shrinkage(K_rho_p, fading.beta_d);

  double pair_bits = 0.0;
  for (int interval = 1; interval <= cfg.L; ++interval) {
    const ChannelSet ch = draw_channels(cfg, fading, seed, interval, trial);

    // Both pilot blocks are received clean (time-divided 2K window).
    Eigen::MatrixXcd R_ps(M, K), R_pd(M, K);
    Rng(seed, interval, Draw::NoiseA, trial).fill_cgauss(R_ps);
    Rng(seed, interval, Draw::NoiseB, trial).fill_cgauss(R_pd);
    R_ps.noalias() += sq_Krp * (ch.G_s * pb.Phi);
    R_pd.noalias() += sq_Krp * (ch.G_d * pb.Psi);

    Eigen::MatrixXcd Ghat_s, Ghat_d;
    if (K_rho_p > 0) {
      Ghat_s = (1.0 / sq_Krp) * (R_ps * pb.Phi.adjoint()) * d_s.asDiagonal();
      Ghat_d = (1.0 / sq_Krp) * (R_pd * pb.Psi.adjoint()) * d_d.asDiagonal();
    } else {
      Ghat_s = Eigen::MatrixXcd::Zero(M, K);
      Ghat_d = Eigen::MatrixXcd::Zero(M, K);
    }

    const InstantSinrs gi = instantaneous_sinrs(cfg, ch, Ghat_s, Ghat_d, st.alpha, false);
    for (int k = 0; k < K; ++k) {
      const double r_ul = fa.T_d * log2_1p(gi.gamma_C[k]);
      const double r_dl = fa.T_d * log2_1p(gi.gamma_DL[k]);
      out.R_UL[k] += r_ul;
      out.R_DL[k] += r_dl;
      pair_bits += std::min(r_ul, r_dl);
    }
  }
  out.rate = pair_bits / (static_cast<double>(cfg.L) * cfg.T_c);
  out.R_UL /= cfg.L;
  out.R_DL /= cfg.L;
  return out;
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() {
  const int n = g_max_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

TrialResult simulate_chain(const SystemConfig& cfg, const FadingProfile& fading,
                           int trials, std::uint64_t seed) {
  check_resources(cfg, trials);
  TrialResult res;
  res.trials = trials;
  res.seed = seed;
  res.R_UL = Eigen::VectorXd::Zero(cfg.K);
  res.R_DL = Eigen::VectorXd::Zero(cfg.K);

  const auto fa = try_frame_accounting(cfg);
  if (!fa) return res;  // infeasible frame: zero rate, sweep semantics

  const PilotBook pb = make_pilots(cfg.K);
  const EstimatorStats st_first =
      cfg.scheme == Scheme::Overlay ? estimator_stats(cfg, fading, IntervalKind::First)
                                    : conventional_stats(cfg, fading);
  const EstimatorStats st_steady =
      (cfg.scheme == Scheme::Overlay && cfg.duplex == Duplex::FD)
          ? estimator_stats(cfg, fading, IntervalKind::Steady)
          : st_first;

  std::vector<double> rates(trials);
  Eigen::MatrixXd ul(trials, cfg.K), dl(trials, cfg.K);
  parallel_trials(trials, [&](int t) {
    const OverlayTrialOut o =
        cfg.scheme == Scheme::Overlay
            ? run_overlay_trial(cfg, fading, *fa, pb, st_first, st_steady, seed, t)
            : run_conventional_trial(cfg, fading, *fa, pb, st_first, seed, t);
    rates[t] = o.rate;
    ul.row(t) = o.R_UL.transpose();
    dl.row(t) = o.R_DL.transpose();
  });

  res.empirical_R_system = mean_of(rates);
  res.stderr_R_system = stderr_of(rates, res.empirical_R_system);
  std::vector<double> col(trials);
  for (int k = 0; k < cfg.K; ++k) {
    for (int t = 0; t < trials; ++t) col[t] = ul(t, k);
    res.R_UL[k] = mean_of(col);
    for (int t = 0; t < trials; ++t) col[t] = dl(t, k);
    res.R_DL[k] = mean_of(col);
  }
  return res;
}

MomentTable moment_oracles(const SystemConfig& cfg, const FadingProfile& fading,
                           int trials, std::uint64_t seed) {
  if (cfg.duplex != Duplex::FD || cfg.scheme != Scheme::Overlay)
    throw std::logic_error("moment_oracles: FD overlay chain required");
  check_resources(cfg, trials);
  const FrameAccounting fa = frame_accounting(cfg);
  const PilotBook pb = make_pilots(cfg.K);
  const EstimatorStats st1 = estimator_stats(cfg, fading, IntervalKind::First);
  const EstimatorStats st = estimator_stats(cfg, fading, IntervalKind::Steady);
  const int K = cfg.K;
  const int M = cfg.M;
  const double sq_Krp = std::sqrt(cfg.K * cfg.rho_p);
  const double a2 = st.alpha * st.alpha;

  // Per-trial, k-averaged samples; x_{t,k} = g_dk^H ghat_dk kept per pair for
  // the variance moment.
  Eigen::MatrixXcd x(trials, K);
  std::vector<double> s_mi_dl(trials), s_mi_ul(trials), s_pi(trials), s_li(trials),
      s_an(trials);

  parallel_trials(trials, [&](int t) {
    // Interval 1 supplies the replayed forwarding state; statistics reach
    // their fixed point at interval 2 already.
    Eigen::MatrixXcd Ghat_d_prev, X_D_prev;
    double alpha_prev = 0.0;
    {
      const ChannelSet ch = draw_channels(cfg, fading, seed, 1, t);
      Eigen::MatrixXcd S_B(K, K);
      Rng(seed, 1, Draw::SourceDataB, t).fill_cgauss(S_B);
      Eigen::MatrixXcd R_A(M, K);
      Rng(seed, 1, Draw::NoiseA, t).fill_cgauss(R_A);
      R_A.noalias() += sq_Krp * (ch.G_s * pb.Phi);
      const ChannelEstimate est_s = estimate_source_first(R_A, pb.Phi, cfg, fading);
      Eigen::MatrixXcd R_B(M, K);
      Rng(seed, 1, Draw::NoiseB, t).fill_cgauss(R_B);
      R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
      if (cfg.rho_s > 0) R_B.noalias() += std::sqrt(cfg.rho_s) * (ch.G_s * S_B);
      const ChannelEstimate est_d =
          estimate_destination(R_B, est_s, S_B, pb.Psi, cfg, fading);
      Ghat_d_prev = est_d.G_hat;
      alpha_prev = st1.alpha;
      Eigen::MatrixXcd X(K, static_cast<int>(fa.T_d));
      Rng(seed, 1, Draw::ForwardData, t).fill_cgauss(X);
      X_D_prev = X.rightCols(K);
    }

    const ChannelSet ch = draw_channels(cfg, fading, seed, 2, t);
    Eigen::MatrixXcd S_B(K, K);
    Rng(seed, 2, Draw::SourceDataB, t).fill_cgauss(S_B);
    Eigen::MatrixXcd R_A(M, K);
    Rng(seed, 2, Draw::NoiseA, t).fill_cgauss(R_A);
    R_A.noalias() += sq_Krp * (ch.G_s * pb.Phi);
    if (cfg.rho_d > 0) {
      const Eigen::MatrixXcd G_li_pilot = draw_loop_pilot_channel(cfg, fading, seed, 2, t);
      R_A.noalias() += (std::sqrt(cfg.rho_d) * alpha_prev) *
                       (G_li_pilot * (Ghat_d_prev * X_D_prev));
    }
    const ChannelEstimate est_s = estimate_source_steady(R_A, pb.Phi, cfg, fading);
    Eigen::MatrixXcd R_B(M, K);
    Rng(seed, 2, Draw::NoiseB, t).fill_cgauss(R_B);
    R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
    if (cfg.rho_s > 0) R_B.noalias() += std::sqrt(cfg.rho_s) * (ch.G_s * S_B);
    const ChannelEstimate est_d = estimate_destination(R_B, est_s, S_B, pb.Psi, cfg, fading);

    const Eigen::MatrixXcd D_dd = ch.G_d.adjoint() * est_d.G_hat;  // row k: g_dk^H ghat_di
    const Eigen::MatrixXcd A_ss = est_s.G_hat.adjoint() * ch.G_s;
    const Eigen::MatrixXcd A_sd = est_s.G_hat.adjoint() * ch.G_d;
    const Eigen::MatrixXcd B_li = est_s.G_hat.adjoint() * (ch.G_LI * est_d.G_hat);

    double mi_dl = 0, mi_ul = 0, pi = 0, li = 0, an = 0;
    for (int k = 0; k < K; ++k) {
      x(t, k) = D_dd(k, k);
      mi_dl += cfg.rho_d * a2 * (D_dd.row(k).squaredNorm() - std::norm(D_dd(k, k)));
      mi_ul += cfg.rho_s * (A_ss.row(k).squaredNorm() - std::norm(A_ss(k, k)));
      pi += cfg.rho_p * A_sd.row(k).squaredNorm();
      li += cfg.rho_d * a2 * B_li.row(k).squaredNorm();
      an += est_s.G_hat.col(k).squaredNorm();
    }
    s_mi_dl[t] = mi_dl / K;
    s_mi_ul[t] = mi_ul / K;
    s_pi[t] = pi / K;
    s_li[t] = li / K;
    s_an[t] = an / K;
  });

  // Closed-form targets, k-averaged.
  const double li_pow = loop_power(cfg, fading);
  const double beta_LI_eff = cfg.rho_d > 0 ? li_pow / cfg.rho_d : 0.0;
  double t_E = 0, t_Var = 0, t_mi_dl = 0, t_mi_ul = 0, t_pi = 0, t_li = 0, t_an = 0;
  for (int k = 0; k < K; ++k) {
    t_E += M * st.sigma2_d[k];
    t_Var += M * fading.beta_d[k] * st.sigma2_d[k];
    t_mi_dl += M * cfg.rho_d * a2 * fading.beta_d[k] *
               (st.sigma2_d.sum() - st.sigma2_d[k]);
    t_mi_ul += M * cfg.rho_s * st.sigma2_s[k] * (fading.beta_s.sum() - fading.beta_s[k]);
    t_pi += M * cfg.rho_p * st.sigma2_s[k] * fading.beta_d.sum();
    t_li += M * cfg.rho_d * beta_LI_eff * st.sigma2_s[k];
    t_an += M * st.sigma2_s[k];
  }

  MomentTable tab;
  auto simple = [&](const std::vector<double>& s, double target) {
    MomentEstimate m;
    m.sample = mean_of(s);
    m.stderr_ = stderr_of(s, m.sample);
    m.target = target / K;
    return m;
  };
  tab.MI_DL = simple(s_mi_dl, t_mi_dl);
  tab.MI_UL = simple(s_mi_ul, t_mi_ul);
  tab.PI_UL = simple(s_pi, t_pi);
  tab.LI_UL = simple(s_li, t_li);
  tab.AN_UL = simple(s_an, t_an);

  // Mean moment: Re of the k-averaged bilinear form.
  std::vector<double> re_mean(trials);
  for (int t = 0; t < trials; ++t) re_mean[t] = x.row(t).real().sum() / K;
  tab.E_g_ghat.sample = mean_of(re_mean);
  tab.E_g_ghat.stderr_ = stderr_of(re_mean, tab.E_g_ghat.sample);
  tab.E_g_ghat.target = t_E / K;

  // Variance moment: per-pair sample variance, then k-average.
  std::vector<double> dev2(trials);
  double var_sum = 0.0;
  std::vector<double> dev2_mean(trials, 0.0);
  for (int k = 0; k < K; ++k) {
    std::complex<double> mean_k = 0.0;
    for (int t = 0; t < trials; ++t) mean_k += x(t, k);
    mean_k /= static_cast<double>(trials);
    for (int t = 0; t < trials; ++t) dev2[t] = std::norm(x(t, k) - mean_k);
    var_sum += pairwise_sum(dev2) / (trials - 1);
    for (int t = 0; t < trials; ++t) dev2_mean[t] += dev2[t] / K;
  }
  tab.Var_g_ghat.sample = var_sum / K;
  tab.Var_g_ghat.stderr_ = stderr_of(dev2_mean, mean_of(dev2_mean));
  tab.Var_g_ghat.target = t_Var / K;
  return tab;
}

std::vector<DetectionPoint> detection_error_vs_M(const SystemConfig& cfg,
                                                 const FadingProfile& fading,
                                                 const std::vector<int>& M_list, int trials,
                                                 std::uint64_t seed) {
  for (std::size_t i = 1; i < M_list.size(); ++i)
    if (M_list[i] <= M_list[i - 1])
      throw std::invalid_argument("detection_error_vs_M: M_list must be ascending");

  std::vector<DetectionPoint> out;
  out.reserve(M_list.size());
  const PilotBook pb = make_pilots(cfg.K);
  for (const int M : M_list) {
    SystemConfig c = cfg;
    c.M = M;
    // First-interval phases A/B are identical in both duplex modes; skip the
    // M x M loop-channel draw entirely.
    c.duplex = Duplex::HD;
    check_resources(c, trials);
    const int K = c.K;
    const double sq_Krp = std::sqrt(c.K * c.rho_p);
    std::vector<double> errs(trials);
    parallel_trials(trials, [&](int t) {
      const ChannelSet ch = draw_channels(c, fading, seed, 1, t);
      Eigen::MatrixXcd S_B(K, K);
      {
        Rng rng(seed, 1, Draw::SourceDataB, t);
        if (c.constellation == Constellation::Qpsk)
          rng.fill_qpsk(S_B);
        else
          rng.fill_cgauss(S_B);
      }
      Eigen::MatrixXcd R_A(M, K);
      Rng(seed, 1, Draw::NoiseA, t).fill_cgauss(R_A);
      R_A.noalias() += sq_Krp * (ch.G_s * pb.Phi);
      const ChannelEstimate est_s = estimate_source_first(R_A, pb.Phi, c, fading);
      Eigen::MatrixXcd R_B(M, K);
      Rng(seed, 1, Draw::NoiseB, t).fill_cgauss(R_B);
      R_B.noalias() += sq_Krp * (ch.G_d * pb.Psi);
      R_B.noalias() += std::sqrt(c.rho_s) * (ch.G_s * S_B);
      const DetectionResult det = detect_phaseB_data(R_B, est_s, c);
      double e = 0.0;
      for (int k = 0; k < K; ++k)
        e += (det.soft.row(k) - S_B.row(k)).norm() / S_B.row(k).norm();
      errs[t] = e / K;
    });
    out.push_back({M, mean_of(errs)});
  }
  return out;
}

}  // namespace mmrelay
