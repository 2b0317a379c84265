// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/frame.hpp"

#include <stdexcept>

namespace mmrelay {

std::optional<FrameAccounting> try_frame_accounting(const SystemConfig& cfg) {
  const double T_c = static_cast<double>(cfg.T_c);
  const double K = static_cast<double>(cfg.K);
  FrameAccounting fa;
  if (cfg.scheme == Scheme::Overlay) {
    fa.T_p = K;
    fa.T_d = cfg.duplex == Duplex::HD ? (T_c - K) / 2.0 : T_c - K;
    if (fa.T_d < K) return std::nullopt;  // phase B alone needs K data slots
  } else {
    fa.T_p = 2.0 * K;
    fa.T_d = cfg.duplex == Duplex::HD ? (T_c - 2.0 * K) / 2.0
                                      : T_c - 2.0 * K - cfg.fd_proc_delay;
    if (fa.T_d <= 0) return std::nullopt;
  }
  fa.pilot_fraction = fa.T_p / T_c;
  fa.data_fraction = fa.T_d / T_c;
  return fa;
}

FrameAccounting frame_accounting(const SystemConfig& cfg) {
  auto fa = try_frame_accounting(cfg);
  if (!fa)
    throw std::domain_error("frame_accounting: " + to_string(cfg.scheme) + " " +
                            to_string(cfg.duplex) + " does not fit in T_c=" +
                            std::to_string(cfg.T_c) + " with K=" + std::to_string(cfg.K));
  return *fa;
}

}  // namespace mmrelay
