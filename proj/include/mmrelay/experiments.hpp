// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_EXPERIMENTS_HPP
#define MMRELAY_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmrelay/config.hpp"

namespace mmrelay {

enum class ExperimentName {
  RateVsSnr,
  RateVsAntennas,
  RateVsCoherence,
  RateVsPairs,
  PowallocVsBudget,
  ScaConvergence,
};

/// A sweep definition. Axes: rate-vs-snr -> snr_db (rho_p = rho_s = rho_d
/// varied jointly), rate-vs-antennas -> M, rate-vs-coherence -> T_c,
/// rate-vs-pairs -> K, powalloc-vs-budget / sca-convergence -> budget_db
/// (total per-slot data power K rho_s + rho_d, so E_d = L T_d 10^(dB/10)).
struct ExperimentSpec {
  ExperimentName name = ExperimentName::RateVsSnr;
  std::string axis = "snr_db";
  std::vector<double> values;
  SystemConfig base;
  Eigen::VectorXd beta_s, beta_d;  // empty -> uniform profile
  int trials = 1000;
  std::uint64_t seed = 1;
  bool montecarlo = true;
  std::string output = "mmrelay_out.csv";
};

struct ParsedConfig {
  SystemConfig cfg;
  ExperimentSpec spec;
};

/// Plain-text key=value config ('#' comments). SystemConfig keys are named
/// exactly after the fields; experiment keys: experiment, sweep (comma list
/// or start:step:stop), sweep_axis, trials, seed, output, montecarlo,
/// beta_s, beta_d. Unknown keys fail closed.
ParsedConfig parse_config(const std::string& path);
ParsedConfig parse_config_text(const std::string& text);

/// One CSV row per (sweep value x scheme x duplex). Power-allocation
/// experiments emit one FD-overlay row per budget with the optimizer output
/// in 'extra'. Monte-Carlo columns are blank when disabled.
struct CsvRow {
  std::string experiment;
  double sweep_value = 0.0;
  std::string scheme;
  std::string duplex;
  double closed_form_rate = 0.0;
  bool has_mc = false;
  double montecarlo_rate = 0.0;
  double montecarlo_stderr = 0.0;
  std::string extra;
};

/// Runs the sweep, writes the CSV (UTF-8, '#' comment header echoing the
/// resolved configuration), prints a short summary, and returns the rows.
/// Throws on unwritable output or non-finite results.
std::vector<CsvRow> run_experiment(const ExperimentSpec& spec, std::ostream& summary);

/// The resolved key=value view echoed into the CSV header.
std::map<std::string, std::string> resolved_config(const ExperimentSpec& spec);

std::string csv_text(const ExperimentSpec& spec, const std::vector<CsvRow>& rows);

std::string to_string(ExperimentName n);

}  // namespace mmrelay

#endif  // MMRELAY_EXPERIMENTS_HPP
