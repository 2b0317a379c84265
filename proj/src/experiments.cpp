// SPDX-License-Identifier: Apache-2.0

#include "mmrelay/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mmrelay/frame.hpp"
#include "mmrelay/montecarlo.hpp"
#include "mmrelay/powalloc.hpp"
#include "mmrelay/rates.hpp"

namespace mmrelay {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> parse_values(const std::string& field, const std::string& text) {
  std::vector<double> vals;
  if (text.find(':') != std::string::npos) {
    // start:step:stop, inclusive
    double a = 0, h = 0, b = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> a >> c1 >> h >> c2 >> b) || c1 != ':' || c2 != ':' || h <= 0)
      fail(field, "expected start:step:stop with step > 0, got '" + text + "'");
    for (double v = a; v <= b + 1e-9 * std::max(1.0, std::abs(h)); v += h)
      vals.push_back(v);
  } else {
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      std::size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::exception&) {
        fail(field, "not a number: '" + tok + "'");
      }
      if (pos != tok.size()) fail(field, "trailing characters in '" + tok + "'");
      vals.push_back(v);
    }
  }
  if (vals.empty()) fail(field, "empty value list");
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] <= vals[i - 1]) fail(field, "values must be strictly ascending");
  return vals;
}

Eigen::VectorXd parse_beta(const std::string& field, const std::string& text, int K) {
  std::vector<double> v = parse_values(field, text);
  if (v.size() == 1) return Eigen::VectorXd::Constant(K, v[0]);
  if (static_cast<int>(v.size()) != K)
    fail(field, "need 1 or K entries (K=" + std::to_string(K) + ")");
  return Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
}

ExperimentName parse_experiment(const std::string& v) {
  if (v == "rate-vs-snr") return ExperimentName::RateVsSnr;
  if (v == "rate-vs-antennas") return ExperimentName::RateVsAntennas;
  if (v == "rate-vs-coherence") return ExperimentName::RateVsCoherence;
  if (v == "rate-vs-pairs") return ExperimentName::RateVsPairs;
  if (v == "powalloc-vs-budget") return ExperimentName::PowallocVsBudget;
  if (v == "sca-convergence") return ExperimentName::ScaConvergence;
  fail("experiment", "unknown experiment '" + v + "'");
}

std::string default_axis(ExperimentName n) {
  switch (n) {
    case ExperimentName::RateVsSnr: return "snr_db";
    case ExperimentName::RateVsAntennas: return "M";
    case ExperimentName::RateVsCoherence: return "T_c";
    case ExperimentName::RateVsPairs: return "K";
    case ExperimentName::PowallocVsBudget:
    case ExperimentName::ScaConvergence: return "budget_db";
  }
  return "snr_db";
}

std::vector<double> default_values(ExperimentName n) {
  switch (n) {
    case ExperimentName::RateVsSnr: return parse_values("sweep", "-30:5:30");
    case ExperimentName::RateVsAntennas: return parse_values("sweep", "20:20:260");
    case ExperimentName::RateVsCoherence: return parse_values("sweep", "20:20:300");
    case ExperimentName::RateVsPairs: return parse_values("sweep", "1:1:20");
    case ExperimentName::PowallocVsBudget: return parse_values("sweep", "-10:5:60");
    case ExperimentName::ScaConvergence: return parse_values("sweep", "0:10:40");
  }
  return {};
}

void check_integral_axis(const ExperimentSpec& spec) {
  if (spec.axis == "M" || spec.axis == "K" || spec.axis == "T_c") {
    for (double v : spec.values)
      if (v != std::floor(v) || v < 1) fail("sweep", "axis " + spec.axis +
                                            " needs positive integers");
  }
}

struct Combo {
  Scheme scheme;
  Duplex duplex;
};
constexpr Combo kCombos[] = {{Scheme::Overlay, Duplex::HD},
                             {Scheme::Overlay, Duplex::FD},
                             {Scheme::Conventional, Duplex::HD},
                             {Scheme::Conventional, Duplex::FD}};

FadingProfile profile_for(const ExperimentSpec& spec, const SystemConfig& cfg) {
  if (spec.beta_s.size() == 0) return uniform_profile(cfg);
  if (spec.beta_s.size() != cfg.K || spec.beta_d.size() != cfg.K)
    fail("beta_s", "explicit profiles cannot be combined with a K sweep");
  return make_profile(cfg, spec.beta_s, spec.beta_d);
}

void rate_rows(const ExperimentSpec& spec, std::vector<CsvRow>& rows) {
  for (const double v : spec.values) {
    for (const Combo combo : kCombos) {
      SystemConfig cfg = spec.base;
      cfg.scheme = combo.scheme;
      cfg.duplex = combo.duplex;
      switch (spec.name) {
        case ExperimentName::RateVsAntennas: cfg.M = static_cast<int>(v); break;
        case ExperimentName::RateVsCoherence: cfg.T_c = static_cast<int>(v); break;
        case ExperimentName::RateVsPairs: cfg.K = static_cast<int>(v); break;
        default: break;
      }
      FadingProfile fading = profile_for(spec, cfg);
      if (spec.name == ExperimentName::RateVsSnr)
        rebind_snr(cfg, fading, std::pow(10.0, v / 10.0));

      CsvRow row;
      row.experiment = to_string(spec.name);
      row.sweep_value = v;
      row.scheme = to_string(combo.scheme);
      row.duplex = to_string(combo.duplex);
      row.closed_form_rate = closed_form_rates(cfg, fading).R_system;
      if (spec.montecarlo && spec.trials > 0) {
        const TrialResult tr = simulate_chain(cfg, fading, spec.trials, spec.seed);
        row.has_mc = true;
        row.montecarlo_rate = tr.empirical_R_system;
        row.montecarlo_stderr = tr.stderr_R_system;
      }
      rows.push_back(std::move(row));
    }
  }
}

void powalloc_rows(const ExperimentSpec& spec, std::vector<CsvRow>& rows) {
  for (const double v : spec.values) {
    SystemConfig cfg = spec.base;
    cfg.scheme = Scheme::Overlay;  // the optimizer targets the FD overlay
    cfg.duplex = Duplex::FD;
    FadingProfile fading = profile_for(spec, cfg);
    const FrameAccounting fa = frame_accounting(cfg);
    const double P_tot = std::pow(10.0, v / 10.0);  // K rho_s + rho_d per slot
    const double E_d = cfg.L * fa.T_d * P_tot;

    const PowerSolution sol = sca_optimize(cfg, fading, E_d, cfg.epsilon);
    const double norm = cfg.L * cfg.T_c;
    const double equal = equal_allocation_objective(cfg, fading, E_d) / norm;

    CsvRow row;
    row.experiment = to_string(spec.name);
    row.sweep_value = v;
    row.scheme = to_string(cfg.scheme);
    row.duplex = to_string(cfg.duplex);
    row.closed_form_rate = sol.objective / norm;
    std::ostringstream extra;
    extra << "equal_rate=" << fmt(equal) << ";iterations=" << sol.iterations
          << ";rho_s=" << fmt(sol.rho_s) << ";rho_d=" << fmt(sol.rho_d)
          << ";converged=" << (sol.converged ? 1 : 0);
    row.extra = extra.str();
    rows.push_back(std::move(row));
  }
}

void require_finite(const std::vector<CsvRow>& rows) {
  for (const auto& r : rows) {
    if (!std::isfinite(r.closed_form_rate) || !std::isfinite(r.sweep_value) ||
        (r.has_mc && (!std::isfinite(r.montecarlo_rate) ||
                      !std::isfinite(r.montecarlo_stderr))))
      throw std::runtime_error("non-finite value in experiment output");
  }
}

}  // namespace

std::string to_string(ExperimentName n) {
  switch (n) {
    case ExperimentName::RateVsSnr: return "rate-vs-snr";
    case ExperimentName::RateVsAntennas: return "rate-vs-antennas";
    case ExperimentName::RateVsCoherence: return "rate-vs-coherence";
    case ExperimentName::RateVsPairs: return "rate-vs-pairs";
    case ExperimentName::PowallocVsBudget: return "powalloc-vs-budget";
    case ExperimentName::ScaConvergence: return "sca-convergence";
  }
  return "?";
}

ParsedConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
  }

  static const char* kExperimentKeys[] = {"experiment", "sweep",  "sweep_axis",
                                          "trials",     "seed",   "output",
                                          "montecarlo", "beta_s", "beta_d"};
  std::map<std::string, std::string> cfg_kv = kv;
  std::map<std::string, std::string> exp_kv;
  for (const char* key : kExperimentKeys) {
    auto it = cfg_kv.find(key);
    if (it != cfg_kv.end()) {
      exp_kv[key] = it->second;
      cfg_kv.erase(it);
    }
  }

  ParsedConfig pc;
  pc.cfg = make_config(cfg_kv);  // rejects unknown keys
  pc.spec.base = pc.cfg;
  if (auto it = exp_kv.find("experiment"); it != exp_kv.end())
    pc.spec.name = parse_experiment(it->second);
  pc.spec.axis = default_axis(pc.spec.name);
  if (auto it = exp_kv.find("sweep_axis"); it != exp_kv.end()) {
    if (it->second != pc.spec.axis)
      fail("sweep_axis", "axis '" + it->second + "' does not match experiment " +
                             to_string(pc.spec.name) + " (expects " + pc.spec.axis + ")");
  }
  pc.spec.values = exp_kv.count("sweep") ? parse_values("sweep", exp_kv.at("sweep"))
                                         : default_values(pc.spec.name);
  check_integral_axis(pc.spec);
  if (auto it = exp_kv.find("trials"); it != exp_kv.end()) {
    const double v = std::stod(it->second);
    if (v < 0 || v != std::floor(v)) fail("trials", "must be a non-negative integer");
    pc.spec.trials = static_cast<int>(v);
  }
  if (auto it = exp_kv.find("seed"); it != exp_kv.end())
    pc.spec.seed = parse_seed(it->second);
  if (auto it = exp_kv.find("output"); it != exp_kv.end()) pc.spec.output = it->second;
  if (auto it = exp_kv.find("montecarlo"); it != exp_kv.end()) {
    const std::string v = it->second;
    if (v == "on" || v == "true" || v == "1")
      pc.spec.montecarlo = true;
    else if (v == "off" || v == "false" || v == "0")
      pc.spec.montecarlo = false;
    else
      fail("montecarlo", "expected on/off");
  }
  if (auto it = exp_kv.find("beta_s"); it != exp_kv.end())
    pc.spec.beta_s = parse_beta("beta_s", it->second, pc.cfg.K);
  if (auto it = exp_kv.find("beta_d"); it != exp_kv.end())
    pc.spec.beta_d = parse_beta("beta_d", it->second, pc.cfg.K);
  if ((pc.spec.beta_s.size() == 0) != (pc.spec.beta_d.size() == 0))
    fail("beta_s", "beta_s and beta_d must be given together");
  if (pc.spec.beta_s.size() != 0 && pc.spec.name == ExperimentName::RateVsPairs)
    fail("beta_s", "explicit profiles cannot be combined with a K sweep");
  return pc;
}

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::map<std::string, std::string> resolved_config(const ExperimentSpec& spec) {
  std::map<std::string, std::string> m;
  const SystemConfig& c = spec.base;
  m["M"] = std::to_string(c.M);
  m["K"] = std::to_string(c.K);
  m["T_c"] = std::to_string(c.T_c);
  m["L"] = std::to_string(c.L);
  m["rho_p"] = fmt(c.rho_p);
  m["rho_s"] = fmt(c.rho_s);
  m["rho_d"] = fmt(c.rho_d);
  m["rho_LI"] = fmt(c.rho_LI);
  m["duplex"] = to_string(c.duplex);
  m["scheme"] = to_string(c.scheme);
  m["fd_proc_delay"] = fmt(c.fd_proc_delay);
  m["E_d"] = fmt(c.E_d);
  m["epsilon"] = fmt(c.epsilon);
  m["constellation"] = to_string(c.constellation);
  m["li_mode"] = to_string(c.li_mode);
  m["cancellation"] = to_string(c.cancellation);
  m["experiment"] = to_string(spec.name);
  m["sweep_axis"] = spec.axis;
  std::string vals;
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    vals += (i ? "," : "") + fmt(spec.values[i]);
  m["sweep"] = vals;
  m["trials"] = std::to_string(spec.trials);
  m["seed"] = std::to_string(spec.seed);
  m["montecarlo"] = spec.montecarlo ? "on" : "off";
  // The output path stays out: the echo describes the run, not the file.
  auto beta_str = [](const Eigen::VectorXd& b) {
    std::string s;
    for (Eigen::Index i = 0; i < b.size(); ++i) s += (i ? "," : "") + fmt(b[i]);
    return s.empty() ? std::string("1") : s;
  };
  m["beta_s"] = beta_str(spec.beta_s);
  m["beta_d"] = beta_str(spec.beta_d);
  return m;
}

std::string csv_text(const ExperimentSpec& spec, const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "# mmrelay experiment\n";
  for (const auto& [k, v] : resolved_config(spec)) os << "# " << k << "=" << v << "\n";
  os << "experiment,sweep_value,scheme,duplex,closed_form_rate,montecarlo_rate,"
        "montecarlo_stderr,extra\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << fmt(r.sweep_value) << ',' << r.scheme << ','
       << r.duplex << ',' << fmt(r.closed_form_rate) << ',';
    if (r.has_mc)
      os << fmt(r.montecarlo_rate) << ',' << fmt(r.montecarlo_stderr);
    else
      os << ',';
    os << ',' << r.extra << "\n";
  }
  return os.str();
}

std::vector<CsvRow> run_experiment(const ExperimentSpec& spec, std::ostream& summary) {
  if (spec.values.empty()) fail("sweep", "empty value list");
  std::vector<CsvRow> rows;
  if (spec.name == ExperimentName::PowallocVsBudget ||
      spec.name == ExperimentName::ScaConvergence)
    powalloc_rows(spec, rows);
  else
    rate_rows(spec, rows);
  require_finite(rows);

  std::ofstream out(spec.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + spec.output);
  out << csv_text(spec, rows);
  out.close();
  if (!out) throw std::runtime_error("failed writing output file: " + spec.output);

  summary << to_string(spec.name) << ": " << spec.values.size() << " sweep points, "
          << rows.size() << " rows -> " << spec.output << "\n";
  return rows;
}

}  // namespace mmrelay
