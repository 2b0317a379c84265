// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_FRAME_HPP
#define MMRELAY_FRAME_HPP

#include <optional>

#include "mmrelay/config.hpp"

namespace mmrelay {

/// Frame accounting for one coherence interval.
///
/// Overlay: T_p = K; HD splits the remaining slots between uplink and
/// downlink, T_d = (T_c - K) / 2, while FD runs both directions concurrently,
/// T_d = T_c - K, with phase D overlapping the next interval's phase A.
/// Conventional: T_p = 2K; HD T_d = (T_c - 2K) / 2, FD T_d = T_c - 2K -
/// fd_proc_delay. T_d is the per-direction data length.
struct FrameAccounting {
  double T_p = 0.0;
  double T_d = 0.0;
  double pilot_fraction = 0.0;  // T_p / T_c
  double data_fraction = 0.0;   // T_d / T_c, per direction
};

/// Throws std::domain_error when the scheme does not fit in T_c.
FrameAccounting frame_accounting(const SystemConfig& cfg);

/// Lenient variant for sweeps: nullopt when the frame is infeasible
/// (overlay T_d < K, conventional T_d <= 0), which callers map to zero rate.
std::optional<FrameAccounting> try_frame_accounting(const SystemConfig& cfg);

}  // namespace mmrelay

#endif  // MMRELAY_FRAME_HPP
