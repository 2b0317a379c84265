// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_CONFIG_HPP
#define MMRELAY_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace mmrelay {

enum class Duplex { HD, FD };
enum class Scheme { Overlay, Conventional };
enum class Constellation { Gaussian, Qpsk };

/// How the loop-interference coupling behaves when rho_d changes.
/// FixedRhoLi keeps the received LI power rho_LI = rho_d * beta_LI constant
/// (beta_LI is recomputed); FixedBetaLi keeps the leakage gain constant so
/// rho_LI scales with rho_d.
enum class LiMode { FixedRhoLi, FixedBetaLi };

/// Which symbols cancel the phase-B data before destination estimation in the
/// simulated chain: the true transmitted block or the detector output.
enum class Cancellation { Genie, Detected };

/// Scenario scalars. Powers are linear and noise-normalized (noise power 1).
struct SystemConfig {
  int M = 128;            // relay antennas
  int K = 10;             // user pairs
  int T_c = 40;           // coherence interval, symbol slots
  int L = 10;             // consecutive coherence intervals
  double rho_p = 100.0;   // pilot power (20 dB)
  double rho_s = 100.0;   // source data power
  double rho_d = 100.0;   // relay forward power
  double rho_LI = 2.0;    // average loop-interference power (3 dB)
  Duplex duplex = Duplex::FD;
  Scheme scheme = Scheme::Overlay;
  double fd_proc_delay = 1.0;  // conventional-FD processing delay, slots
  double E_d = 0.0;            // total data energy budget (power allocation)
  double epsilon = 1e-5;       // SCA relative error tolerance
  Constellation constellation = Constellation::Gaussian;
  LiMode li_mode = LiMode::FixedRhoLi;
  Cancellation cancellation = Cancellation::Genie;
};

/// Large-scale fading gains. beta_LI is the loop gain after cancellation,
/// derived as rho_LI / rho_d when the relay transmits.
struct FadingProfile {
  Eigen::VectorXd beta_s;
  Eigen::VectorXd beta_d;
  double beta_LI = 0.0;
};

/// Build and validate a config from raw key=value pairs. All keys have the
/// defaults above; unknown keys and violated invariants throw
/// std::invalid_argument naming the offending field. Integers accept decimal
/// or 0x-hex.
SystemConfig make_config(const std::map<std::string, std::string>& kv);

/// Validate invariants of an already-populated config (throws like
/// make_config). Scheme feasibility: overlay needs a data block at least as
/// long as the K-slot phase B; conventional needs a positive data block after
/// the 2K pilot slots (plus processing delay in FD).
void validate_config(const SystemConfig& cfg);

/// Uniform beta_s = beta_d = 1 profile with beta_LI derived from cfg.
FadingProfile uniform_profile(const SystemConfig& cfg);

/// Profile with explicit gains; beta_LI derived from cfg.
FadingProfile make_profile(const SystemConfig& cfg, Eigen::VectorXd beta_s,
                           Eigen::VectorXd beta_d);

/// Re-seat data powers, applying the LiMode rule: under FixedRhoLi the profile
/// beta_LI is recomputed so rho_d * beta_LI stays at cfg.rho_LI; under
/// FixedBetaLi the gain is kept and rho_LI follows rho_d.
void rebind_powers(SystemConfig& cfg, FadingProfile& fading, double rho_s, double rho_d);

/// Joint pilot/data power rebind used by SNR sweeps (rho_p = rho_s = rho_d).
void rebind_snr(SystemConfig& cfg, FadingProfile& fading, double rho);

/// Effective rho_d * beta_LI product entering the steady-state source
/// statistics and the FD phase-C SINR. Zero for HD or a silent relay.
double loop_power(const SystemConfig& cfg, const FadingProfile& fading);

std::uint64_t parse_seed(const std::string& text);  // decimal or 0x-hex

std::string to_string(Duplex d);
std::string to_string(Scheme s);
std::string to_string(Constellation c);
std::string to_string(LiMode m);
std::string to_string(Cancellation c);

}  // namespace mmrelay

#endif  // MMRELAY_CONFIG_HPP
