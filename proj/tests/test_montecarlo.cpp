// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "mmrelay/montecarlo.hpp"
#include "mmrelay/rates.hpp"
#include "mmrelay/rng.hpp"

using namespace mmrelay;

TEST_CASE("law of large numbers: independent vectors decorrelate") {
  const int M = 4096;
  Rng rng(99, 1, Draw::Generic);
  double acc = 0.0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    Eigen::VectorXcd p(M), q(M);
    for (int i = 0; i < M; ++i) p[i] = rng.cgauss();
    for (int i = 0; i < M; ++i) q[i] = rng.cgauss();
    acc += std::abs(p.dot(q)) / M;  // sigma_p = sigma_q = 1
  }
  CHECK(acc / reps < 0.05);
}

TEST_CASE("fourth moment: E ||x^H x||^2 = (M^2 + M) sigma^4") {
  const int M = 64;
  const int trials = 20000;
  Rng rng(7, 1, Draw::Generic);
  std::vector<double> samples(trials);
  for (int t = 0; t < trials; ++t) {
    double n2 = 0.0;
    for (int i = 0; i < M; ++i) n2 += std::norm(rng.cgauss());
    samples[t] = n2 * n2;
  }
  CHECK(pairwise_sum(samples) / trials == doctest::Approx(4160.0).epsilon(0.02));
}

TEST_CASE("simulate_chain is reproducible and thread-count invariant") {
  const SystemConfig cfg =
      make_config({{"M", "32"}, {"K", "4"}, {"T_c", "20"}, {"L", "3"}});
  const FadingProfile fading = uniform_profile(cfg);
  set_max_threads(1);
  const TrialResult a = simulate_chain(cfg, fading, 40, 123);
  const TrialResult b = simulate_chain(cfg, fading, 40, 123);
  set_max_threads(4);
  const TrialResult c = simulate_chain(cfg, fading, 40, 123);
  set_max_threads(0);
  CHECK(a.empirical_R_system == b.empirical_R_system);  // bit-exact
  CHECK(a.empirical_R_system == c.empirical_R_system);
  CHECK(a.R_UL == c.R_UL);
  const TrialResult d = simulate_chain(cfg, fading, 40, 124);
  CHECK(a.empirical_R_system != d.empirical_R_system);
}

TEST_CASE("no transmit power, no rate") {
  SystemConfig cfg = make_config({{"M", "32"}, {"K", "4"}, {"T_c", "20"}, {"L", "2"}});
  FadingProfile fading = uniform_profile(cfg);
  rebind_powers(cfg, fading, 0.0, 0.0);
  const TrialResult tr = simulate_chain(cfg, fading, 10, 5);
  CHECK(tr.empirical_R_system == 0.0);
}

TEST_CASE("the genie rate dominates the closed-form bound") {
  for (const char* duplex : {"HD", "FD"}) {
    for (double snr_db : {0.0, 20.0}) {
      SystemConfig cfg = make_config(
          {{"M", "64"}, {"K", "5"}, {"T_c", "30"}, {"L", "4"}, {"duplex", duplex}});
      FadingProfile fading = uniform_profile(cfg);
      rebind_snr(cfg, fading, std::pow(10.0, snr_db / 10.0));
      const double bound = rate_e2e(cfg, fading).R_system;
      const TrialResult tr = simulate_chain(cfg, fading, 300, 77);
      CHECK(tr.empirical_R_system + 3.0 * tr.stderr_R_system > bound);
    }
  }
}

TEST_CASE("conventional chain also dominates its bound") {
  SystemConfig cfg = make_config({{"M", "64"}, {"K", "5"}, {"T_c", "30"}, {"L", "2"},
                                  {"scheme", "conventional"}});
  const FadingProfile fading = uniform_profile(cfg);
  const double bound = conventional_rates(cfg, fading).R_system;
  const TrialResult tr = simulate_chain(cfg, fading, 300, 78);
  CHECK(tr.empirical_R_system + 3.0 * tr.stderr_R_system > bound);
}

TEST_CASE("per-link dominance survives the min-rate crossing") {
  // At the defaults the conventional uplink and downlink bounds nearly
  // coincide (37.86 vs 37.85 bits/interval). The empirical per-link rates
  // stay above their bounds, but the end-to-end min dips below min(bounds):
  // E[min] loses about E|UL - DL|/2 to the crossing, which outweighs the
  // small genie gain there. Dominance of the e2e bound is therefore only
  // guaranteed away from crossings.
  SystemConfig cfg = make_config({{"scheme", "conventional"}, {"L", "2"}});
  const FadingProfile fading = uniform_profile(cfg);
  const RateBreakdown rb = conventional_rates(cfg, fading);
  REQUIRE(std::abs(rb.R_UL[0] - rb.R_DL[0]) < 0.5);  // crossing region
  const TrialResult tr = simulate_chain(cfg, fading, 400, 515);
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(tr.R_UL[k] > rb.R_UL[k]);
    CHECK(tr.R_DL[k] > rb.R_DL[k]);
  }
  CHECK(tr.empirical_R_system < rb.R_system);  // the documented Jensen dip
}

TEST_CASE("moment oracles reproduce the closed-form expectations") {
  const SystemConfig cfg = make_config({{"M", "64"}, {"K", "4"}});
  const FadingProfile fading = uniform_profile(cfg);
  const MomentTable tab = moment_oracles(cfg, fading, 10000, 2025);
  const auto check = [](const MomentEstimate& m) {
    CHECK(m.sample == doctest::Approx(m.target).epsilon(0.02));
    CHECK(std::abs(m.sample - m.target) < 3.0 * m.stderr_ + 1e-12);
  };
  check(tab.E_g_ghat);
  check(tab.Var_g_ghat);
  check(tab.MI_DL);
  check(tab.MI_UL);
  check(tab.PI_UL);
  check(tab.LI_UL);
  check(tab.AN_UL);

  // The loop moment is linear in beta_LI; the quadratic variant would sit a
  // factor beta_LI = 0.02 below the sample.
  const double beta_LI = 0.02;
  const double quadratic_target = tab.LI_UL.target * beta_LI;
  CHECK(std::abs(tab.LI_UL.sample - quadratic_target) > 10.0 * tab.LI_UL.stderr_);
}

TEST_CASE("detection error decays like 1/sqrt(M)") {
  const SystemConfig cfg = make_config({{"K", "10"}});
  const FadingProfile fading = uniform_profile(cfg);
  const auto pts = detection_error_vs_M(cfg, fading, {64, 256, 1024}, 300, 4242);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].mean_rel_error > pts[1].mean_rel_error);
  CHECK(pts[1].mean_rel_error > pts[2].mean_rel_error);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double ratio = pts[i].mean_rel_error / pts[i - 1].mean_rel_error;
    CHECK(ratio > 0.5 / 1.5);
    CHECK(ratio < 0.5 * 1.5);
  }
}

TEST_CASE("resource guard trips on absurd loads") {
  const SystemConfig cfg = make_config({{"M", "4096"}, {"K", "10"}});
  CHECK_THROWS_AS(simulate_chain(cfg, uniform_profile(cfg), 2000000000, 1),
                  std::runtime_error);
}
