// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_CHANNEL_HPP
#define MMRELAY_CHANNEL_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "mmrelay/config.hpp"

namespace mmrelay {

/// One block-fading realization. Column k of G_s / G_d has per-entry variance
/// beta_sk / beta_dk. G_LI is the M x M loop channel (FD only; 0 x 0 in HD).
struct ChannelSet {
  Eigen::MatrixXcd G_s;
  Eigen::MatrixXcd G_d;
  Eigen::MatrixXcd G_LI;
};

/// Row-orthonormal pilot books: Phi * Phi^H = Psi * Psi^H = I_K.
/// Rows are scaled DFT sequences (unit-modulus chips).
struct PilotBook {
  Eigen::MatrixXcd Phi;
  Eigen::MatrixXcd Psi;
};

/// Data and noise blocks for one interval. S_B is the K x K source block sent
/// under the destination pilots, S_C the K x (T_d - K) remainder, X the
/// K x T_d relay forward block. Symbols have unit average power; noise entries
/// are CN(0, 1).
struct SignalBlock {
  Eigen::MatrixXcd S_B;
  Eigen::MatrixXcd S_C;
  Eigen::MatrixXcd X;
  Eigen::MatrixXcd N_A;  // M x K
  Eigen::MatrixXcd N_B;  // M x K
  Eigen::MatrixXcd N_C;  // M x (T_d - K)
  Eigen::MatrixXcd Z;    // K x T_d destination noise rows
};

/// Fresh i.i.d. realization, deterministic in (seed, interval_index, trial).
/// interval_index >= 1; independent across intervals (block fading).
ChannelSet draw_channels(const SystemConfig& cfg, const FadingProfile& fading,
                         std::uint64_t seed, std::uint64_t interval_index,
                         std::uint64_t trial = 0);

PilotBook make_pilots(int K);

SignalBlock draw_signals(const SystemConfig& cfg, std::uint64_t seed,
                         std::uint64_t interval_index, std::uint64_t trial = 0);

/// Independent loop-channel realization for the phase-A pilot replay. The
/// paper treats every use of G_LI as i.i.d., and the rate analysis requires
/// the phase-C loop draw to be independent of the source estimate, so the
/// pilot-contamination replay gets its own realization.
Eigen::MatrixXcd draw_loop_pilot_channel(const SystemConfig& cfg, const FadingProfile& fading,
                                         std::uint64_t seed, std::uint64_t interval_index,
                                         std::uint64_t trial = 0);

}  // namespace mmrelay

#endif  // MMRELAY_CHANNEL_HPP
