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

// Study drivers and their artifacts. Every driver computes its results
// first; files are written afterwards by the caller's thread only.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "c7ga/config.hpp"
#include "c7ga/scan.hpp"

namespace c7ga {

struct BuildupTable {
  std::vector<int> n_blocks;
  std::vector<double> tau_exc_ms;
  /// empty when that mode was not run
  std::vector<double> no_csa;
  std::vector<double> with_csa;
};

/// Buildup of the configured sequence; both CSA modes or the configured one.
BuildupTable buildup_study(const RunConfig &c);

struct OffsetStudy {
  ScanGrid grid;
  ProfileShape shape;
  /// |upper + lower| / fwhm, 0 for a profile centred on zero offset
  double asymmetry = 0.0;
};

OffsetStudy offset_study(const RunConfig &c);

struct SpeedRow {
  double rotor_freq_hz = 0.0;
  bool include_csa = false;
  /// false when the grid maximum lacks the four-neighbour certificate
  bool clear_maximum = false;
  double tau_exc_ms = 0.0;
  /// tau1 / tau_c at the maximum
  double tau1_ratio = 0.0;
  double efficiency = 0.0;
  int n_blocks = 0;
};

struct SpeedStudy {
  std::vector<SpeedRow> rows;
  /// (tau1, n_blocks) grid behind each row
  std::vector<ScanGrid> grids;
};

/// For each speed and CSA mode, C7 defaults at that speed, tau1 = tau_c (1 +
/// dtau1) and n_blocks covering the excitation-time window. When the grid
/// starts inside the band at dtau1 = 0 (falling profile), the row reports the
/// maximum beyond the first minimum, i.e. the second band. A maximum is clear
/// when it is a strict grid maximum and its band falls below half height on
/// both sides along dtau1 (or, on the left, is cut off by that minimum).
SpeedStudy spinning_speed_study(const SpeedTask &task, const SpinSystem &sys, const SimConfig &cfg);

struct OptimizeStudy {
  std::vector<RunRecord> runs;
  /// simplex refinement of the best run, when requested
  std::optional<RunRecord> refined;
  double success_rate = 0.0;
  std::size_t best_run = 0;
};

/// `optimize.runs` independent runs, run r seeded with optimizer.seed + r.
OptimizeStudy optimize_study(const RunConfig &c);

nlohmann::json record_json(const RunRecord &r, const ParameterSpace &space);
/// generation, best_fitness, mean_fitness, evaluations, best_efficiency
std::string history_csv(const RunRecord &r);

/// Runs one named task and writes its artifacts under `out`.
void run_task(const RunConfig &c, const std::string &task, const std::filesystem::path &out,
              std::ostream &log);

/// Writes manifest.yaml (the resolved config) and then runs every task in c.tasks.
void run_study(const RunConfig &c, const std::filesystem::path &out, std::ostream &log);

}  // namespace c7ga
