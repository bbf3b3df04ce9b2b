/* Copyright 2026 The c7ga Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// c7ga <task> --config run.yaml --out dir [--seed N] [--threads N]
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure,
// 1 anything else (I/O).

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "c7ga/studies.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kNumerical = 3 };

struct Options {
  std::string config;
  std::string out;
  std::optional<long long> seed;
  std::optional<int> threads;
};

int run(const std::string &task, const Options &o) {
  try {
    c7ga::RunConfig c =
        o.config.empty() ? c7ga::parse_config("", "<defaults>") : c7ga::load_config(o.config);
    if (o.seed) {
      if (*o.seed < 0) throw c7ga::ConfigError("--seed", 0, "seed", "must be non-negative");
      c.optimize.ga.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.threads) {
      if (*o.threads < 1) throw c7ga::ConfigError("--threads", 0, "threads", "must be >= 1");
      c.sim.threads = *o.threads;
    }
    if (task != "run") c.tasks = {task};
    c7ga::run_study(c, o.out, std::cout);
    return kOk;
  } catch (const c7ga::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const c7ga::NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Double-quantum filtered C7 simulation and sequence optimization"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  auto add = [&](const std::string &name, const std::string &help) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "run configuration (YAML)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "artifact directory")->required();
    sub->add_option("--seed", o.seed, "base optimizer seed");
    sub->add_option("--threads", o.threads, "worker threads for crystallite evaluation");
    sub->callback([&chosen, name] { chosen = name; });
  };
  add("buildup", "DQF efficiency against excitation time");
  add("scan1d", "one-parameter efficiency scan");
  add("scan2d", "two-parameter efficiency landscape");
  add("optimize", "GA or baseline optimizer runs");
  add("offset", "transmitter-offset profile");
  add("speedstudy", "buildup maximum against spinning frequency");
  add("run", "every task listed in the configuration");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kConfig;
  }
  return run(chosen, o);
}
