// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mmrelay/frame.hpp"

namespace mmrelay {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& field, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    fail(field, "not a number: '" + text + "'");
  }
  if (pos != text.size()) fail(field, "trailing characters in '" + text + "'");
  if (!std::isfinite(v)) fail(field, "not finite");
  return v;
}

int parse_int(const std::string& field, const std::string& text) {
  const double v = parse_double(field, text);
  if (v != std::floor(v)) fail(field, "expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    if (text.size() > 2 && (text[0] == '0') && (text[1] == 'x' || text[1] == 'X'))
      v = std::stoull(text.substr(2), &pos, 16), pos += 2;
    else
      v = std::stoull(text, &pos, 10);
  } catch (const std::exception&) {
    throw std::invalid_argument("seed: not a decimal or 0x-hex integer: '" + text + "'");
  }
  if (pos != text.size())
    throw std::invalid_argument("seed: trailing characters in '" + text + "'");
  return v;
}

SystemConfig make_config(const std::map<std::string, std::string>& kv) {
  SystemConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "M")
      cfg.M = parse_int(key, value);
    else if (key == "K")
      cfg.K = parse_int(key, value);
    else if (key == "T_c")
      cfg.T_c = parse_int(key, value);
    else if (key == "L")
      cfg.L = parse_int(key, value);
    else if (key == "rho_p")
      cfg.rho_p = parse_double(key, value);
    else if (key == "rho_s")
      cfg.rho_s = parse_double(key, value);
    else if (key == "rho_d")
      cfg.rho_d = parse_double(key, value);
    else if (key == "rho_LI")
      cfg.rho_LI = parse_double(key, value);
    else if (key == "duplex") {
      const std::string v = lower(value);
      if (v == "hd")
        cfg.duplex = Duplex::HD;
      else if (v == "fd")
        cfg.duplex = Duplex::FD;
      else
        fail(key, "expected HD or FD, got '" + value + "'");
    } else if (key == "scheme") {
      const std::string v = lower(value);
      if (v == "overlay")
        cfg.scheme = Scheme::Overlay;
      else if (v == "conventional")
        cfg.scheme = Scheme::Conventional;
      else
        fail(key, "expected overlay or conventional, got '" + value + "'");
    } else if (key == "fd_proc_delay")
      cfg.fd_proc_delay = parse_double(key, value);
    else if (key == "E_d")
      cfg.E_d = parse_double(key, value);
    else if (key == "epsilon")
      cfg.epsilon = parse_double(key, value);
    else if (key == "constellation") {
      const std::string v = lower(value);
      if (v == "gaussian")
        cfg.constellation = Constellation::Gaussian;
      else if (v == "qpsk")
        cfg.constellation = Constellation::Qpsk;
      else
        fail(key, "expected gaussian or qpsk, got '" + value + "'");
    } else if (key == "li_mode") {
      const std::string v = lower(value);
      if (v == "fixed_rho_li")
        cfg.li_mode = LiMode::FixedRhoLi;
      else if (v == "fixed_beta_li")
        cfg.li_mode = LiMode::FixedBetaLi;
      else
        fail(key, "expected fixed_rho_li or fixed_beta_li, got '" + value + "'");
    } else if (key == "cancellation") {
      const std::string v = lower(value);
      if (v == "genie")
        cfg.cancellation = Cancellation::Genie;
      else if (v == "detected")
        cfg.cancellation = Cancellation::Detected;
      else
        fail(key, "expected genie or detected, got '" + value + "'");
    } else {
      fail(key, "unknown key");
    }
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const SystemConfig& cfg) {
  if (cfg.M < 1) fail("M", "must be >= 1");
  if (cfg.K < 1) fail("K", "must be >= 1");
  if (cfg.T_c < 1) fail("T_c", "must be >= 1");
  if (cfg.L < 1) fail("L", "must be >= 1");
  if (cfg.rho_p < 0) fail("rho_p", "negative power");
  if (cfg.rho_s < 0) fail("rho_s", "negative power");
  if (cfg.rho_d < 0) fail("rho_d", "negative power");
  if (cfg.rho_LI < 0) fail("rho_LI", "negative power");
  if (cfg.E_d < 0) fail("E_d", "negative energy budget");
  if (cfg.epsilon <= 0) fail("epsilon", "must be > 0");
  if (cfg.fd_proc_delay < 0) fail("fd_proc_delay", "must be >= 0");

  // Scheme feasibility; sweeps evaluate infeasible combinations leniently as
  // zero rate, but a directly constructed config must support its own scheme.
  const auto fa = try_frame_accounting(cfg);
  if (!fa) {
    std::ostringstream os;
    if (cfg.scheme == Scheme::Overlay)
      os << "overlay needs T_d >= K ("
         << (cfg.duplex == Duplex::HD ? "T_c >= 3K" : "T_c >= 2K") << "); T_c=" << cfg.T_c
         << ", K=" << cfg.K;
    else
      os << "conventional needs T_c > 2K"
         << (cfg.duplex == Duplex::FD ? " + fd_proc_delay" : "") << "; T_c=" << cfg.T_c
         << ", K=" << cfg.K;
    fail("T_c", os.str());
  }
}

FadingProfile uniform_profile(const SystemConfig& cfg) {
  return make_profile(cfg, Eigen::VectorXd::Ones(cfg.K), Eigen::VectorXd::Ones(cfg.K));
}

FadingProfile make_profile(const SystemConfig& cfg, Eigen::VectorXd beta_s,
                           Eigen::VectorXd beta_d) {
  if (beta_s.size() != cfg.K) fail("beta_s", "length must equal K");
  if (beta_d.size() != cfg.K) fail("beta_d", "length must equal K");
  if ((beta_s.array() <= 0).any()) fail("beta_s", "entries must be > 0");
  if ((beta_d.array() <= 0).any()) fail("beta_d", "entries must be > 0");
  FadingProfile p;
  p.beta_s = std::move(beta_s);
  p.beta_d = std::move(beta_d);
  p.beta_LI = cfg.rho_d > 0 ? cfg.rho_LI / cfg.rho_d : 0.0;
  return p;
}

void rebind_powers(SystemConfig& cfg, FadingProfile& fading, double rho_s, double rho_d) {
  if (rho_s < 0) fail("rho_s", "negative power");
  if (rho_d < 0) fail("rho_d", "negative power");
  cfg.rho_s = rho_s;
  cfg.rho_d = rho_d;
  if (cfg.li_mode == LiMode::FixedRhoLi) {
    fading.beta_LI = rho_d > 0 ? cfg.rho_LI / rho_d : 0.0;
  } else {
    cfg.rho_LI = rho_d * fading.beta_LI;
  }
}

void rebind_snr(SystemConfig& cfg, FadingProfile& fading, double rho) {
  cfg.rho_p = rho;
  rebind_powers(cfg, fading, rho, rho);
}

double loop_power(const SystemConfig& cfg, const FadingProfile& fading) {
  if (cfg.duplex != Duplex::FD || cfg.rho_d <= 0) return 0.0;
  return cfg.li_mode == LiMode::FixedRhoLi ? cfg.rho_LI : cfg.rho_d * fading.beta_LI;
}

std::string to_string(Duplex d) { return d == Duplex::HD ? "HD" : "FD"; }
std::string to_string(Scheme s) {
  return s == Scheme::Overlay ? "overlay" : "conventional";
}
std::string to_string(Constellation c) {
  return c == Constellation::Gaussian ? "gaussian" : "qpsk";
}
std::string to_string(LiMode m) {
  return m == LiMode::FixedRhoLi ? "fixed_rho_li" : "fixed_beta_li";
}
std::string to_string(Cancellation c) {
  return c == Cancellation::Genie ? "genie" : "detected";
}

}  // namespace mmrelay
