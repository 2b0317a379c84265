// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mmrelay/experiments.hpp"
#include "mmrelay/montecarlo.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mmrelay - multipair massive MIMO relaying simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string seed_text;
  int trials = -1;
  std::string out_path;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run an experiment sweep from a config file");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--seed", seed_text, "override the seed (decimal or 0x-hex)");
  run->add_option("--trials", trials, "override the Monte-Carlo trial count");
  run->add_option("--out", out_path, "override the output CSV path");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI::App* validate =
      app.add_subcommand("validate", "parse a config file and print the resolved values");
  validate->add_option("config", config_path, "key=value config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    mmrelay::ParsedConfig pc = mmrelay::parse_config(config_path);
    if (app.got_subcommand(validate)) {
      for (const auto& [k, v] : mmrelay::resolved_config(pc.spec))
        std::cout << k << "=" << v << "\n";
      return 0;
    }
    if (!seed_text.empty()) pc.spec.seed = mmrelay::parse_seed(seed_text);
    if (trials >= 0) pc.spec.trials = trials;
    if (!out_path.empty()) pc.spec.output = out_path;
    if (threads > 0) mmrelay::set_max_threads(threads);
    mmrelay::run_experiment(pc.spec, std::cout);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
