// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "mmrelay/frame.hpp"
#include "mmrelay/rng.hpp"

namespace mmrelay {

ChannelSet draw_channels(const SystemConfig& cfg, const FadingProfile& fading,
                         std::uint64_t seed, std::uint64_t interval_index,
                         std::uint64_t trial) {
  if (interval_index < 1)
    throw std::invalid_argument("draw_channels: interval_index must be >= 1");
  ChannelSet ch;
  ch.G_s.resize(cfg.M, cfg.K);
  ch.G_d.resize(cfg.M, cfg.K);
  {
    Rng rng(seed, interval_index, Draw::SourceChannel, trial);
    for (int k = 0; k < cfg.K; ++k) {
      const double s = std::sqrt(fading.beta_s[k]);
      for (int m = 0; m < cfg.M; ++m) ch.G_s(m, k) = s * rng.cgauss();
    }
  }
  {
    Rng rng(seed, interval_index, Draw::DestChannel, trial);
    for (int k = 0; k < cfg.K; ++k) {
      const double s = std::sqrt(fading.beta_d[k]);
      for (int m = 0; m < cfg.M; ++m) ch.G_d(m, k) = s * rng.cgauss();
    }
  }
  if (cfg.duplex == Duplex::FD) {
    Rng rng(seed, interval_index, Draw::LoopChannel, trial);
    ch.G_LI.resize(cfg.M, cfg.M);
    rng.fill_cgauss(ch.G_LI, std::sqrt(fading.beta_LI));
  }
  return ch;
}

Eigen::MatrixXcd draw_loop_pilot_channel(const SystemConfig& cfg, const FadingProfile& fading,
                                         std::uint64_t seed, std::uint64_t interval_index,
                                         std::uint64_t trial) {
  if (cfg.duplex != Duplex::FD)
    throw std::logic_error("draw_loop_pilot_channel: HD has no loop channel");
  Rng rng(seed, interval_index, Draw::LoopChannelPilot, trial);
  Eigen::MatrixXcd G(cfg.M, cfg.M);
  rng.fill_cgauss(G, std::sqrt(fading.beta_LI));
  return G;
}

PilotBook make_pilots(int K) {
  if (K < 1) throw std::invalid_argument("make_pilots: K must be >= 1");
  PilotBook pb;
  pb.Phi.resize(K, K);
  const double scale = 1.0 / std::sqrt(static_cast<double>(K));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < K; ++t) {
      const double a = -2.0 * M_PI * k * t / K;
      pb.Phi(k, t) = scale * std::complex<double>(std::cos(a), std::sin(a));
    }
  pb.Psi = pb.Phi;
  return pb;
}

SignalBlock draw_signals(const SystemConfig& cfg, std::uint64_t seed,
                         std::uint64_t interval_index, std::uint64_t trial) {
  if (interval_index < 1)
    throw std::invalid_argument("draw_signals: interval_index must be >= 1");
  const FrameAccounting fa = frame_accounting(cfg);
  const int K = cfg.K;
  const int T_d = static_cast<int>(fa.T_d);
  // Conventional frames have no B/C phase split; S_B shrinks with T_d there.
  const int head = std::min(K, T_d);
  const int tail = std::max(0, T_d - head);

  SignalBlock sb;
  sb.S_B.resize(K, head);
  sb.S_C.resize(K, tail);
  sb.X.resize(K, T_d);
  auto fill_data = [&](Eigen::MatrixXcd& m, Draw tag) {
    Rng rng(seed, interval_index, tag, trial);
    if (cfg.constellation == Constellation::Qpsk)
      rng.fill_qpsk(m);
    else
      rng.fill_cgauss(m);
  };
  fill_data(sb.S_B, Draw::SourceDataB);
  fill_data(sb.S_C, Draw::SourceDataC);
  fill_data(sb.X, Draw::ForwardData);

  sb.N_A.resize(cfg.M, K);
  sb.N_B.resize(cfg.M, K);
  sb.N_C.resize(cfg.M, tail);
  sb.Z.resize(K, T_d);
  Rng(seed, interval_index, Draw::NoiseA, trial).fill_cgauss(sb.N_A);
  Rng(seed, interval_index, Draw::NoiseB, trial).fill_cgauss(sb.N_B);
  Rng(seed, interval_index, Draw::NoiseC, trial).fill_cgauss(sb.N_C);
  Rng(seed, interval_index, Draw::DestNoise, trial).fill_cgauss(sb.Z);
  return sb;
}

}  // namespace mmrelay
