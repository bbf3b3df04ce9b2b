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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "c7ga/studies.hpp"

using namespace c7ga;
namespace fs = std::filesystem;

namespace {

SimConfig tiny(bool csa = true) {
  SimConfig c;
  c.powder = {"zcw", 21, 1};
  c.max_step = 3.5e-6;
  c.include_csa = csa;
  return c;
}

int error_line(const std::string &text, std::string *field = nullptr) {
  try {
    parse_config(text, "t.yaml");
  } catch (const ConfigError &e) {
    if (field) *field = e.field();
    return e.line();
  }
  return -1;
}

fs::path scratch_dir(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("c7ga_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("an empty configuration resolves to the reference defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.sim.rotor_freq_hz == 10204.0);
  CHECK(c.spin == reference_spin_block());
  CHECK(c.params() == default_params(10204.0, 31));
  REQUIRE(c.genes.size() == 7u);
  CHECK(c.genes[0].lower == doctest::Approx(c7_defaults(10204.0).tau_c * 1e6 - 5.0));
  CHECK(c.genes[2].upper - c.genes[2].lower == doctest::Approx(2 * 7142.8).epsilon(1e-4));
  CHECK(c.genes[6].lower == 11);
  CHECK(c.genes[6].upper == 51);
  CHECK(c.tasks.empty());
}

TEST_CASE("emitted manifests parse back to the same configuration") {
  const std::string text = R"(
spin:
  iso_shift_hz: [0.1, -0.30000000000000004]
  dipolar_b_hz: -216.33333333333334
simulation:
  rotor_freq_hz: 9000
  powder: {scheme: zcw, orientations: 34, gamma_angles: 2}
  max_step_us: 1.7
  include_csa: false
  threads: 2
sequence:
  tau1_us: 16.3
  n_blocks: 27
  phi1_deg: -1.86
bounds:
  tie_kappa2: true
  genes: [tau1, {name: kappa1, lower: 60000, upper: 70000, bits: 12}, n_blocks]
optimizer:
  method: random
  runs: 3
  seed: 12345678901
  budget: 40
task:
  run: [buildup, offset]
  buildup: {n_first: 3, n_last: 9, both_csa_modes: false}
  scan2d: {x: {param: tau1, start: 15, stop: 17, points: 3}, y: {param: n_blocks, start: 10, stop: 20, points: 11}}
  speedstudy: {speeds_hz: [4000, 10204], dtau1_points: 5, texc_min_ms: 3, texc_max_ms: 8}
)";
  const RunConfig a = parse_config(text);
  CHECK(a.sim.rotor_freq_hz == 9000.0);
  CHECK(a.sequence.kappa1_hz == doctest::Approx(63000.0));
  CHECK(a.genes.size() == 3u);
  CHECK(a.genes[1].bit_depth == 12);
  CHECK(a.optimize.ga.seed == 12345678901ull);
  const std::string emitted = emit_config(a);
  const RunConfig b = parse_config(emitted);
  CHECK(b == a);
  CHECK(emit_config(b) == emitted);
  const RunConfig d = parse_config(emit_config(parse_config("")));
  CHECK(d == parse_config(""));
}

TEST_CASE("configuration errors name the line and field") {
  std::string field;
  CHECK(error_line("simulation:\n  rotor_freq_hz: 10204\n  rotr: 3\n", &field) == 3);
  CHECK(field == "simulation.rotr");
  CHECK(error_line("sequence:\n  tau1_us: fast\n", &field) == 2);
  CHECK(field == "sequence.tau1_us");
  CHECK(error_line("simulation:\n  rotor_freq_hz: -5\n", &field) == 2);
  CHECK(error_line("bounds:\n  genes: [tau1, tau9]\n", &field) == 2);
  CHECK(field == "bounds.genes[1]");
  CHECK(error_line("bounds:\n  genes: [tau1, tau1]\n") == 2);
  CHECK(error_line("task:\n  run: [buildup, dance]\n", &field) == 2);
  CHECK(error_line("spin:\n  csa:\n    - {eta: 2}\n    - {eta: 0}\n", &field) == 3);
  CHECK(field == "spin.csa[0].eta");
  CHECK(error_line("a: [1, 2\n") >= 1);
  CHECK(error_line("optimizer:\n  method: annealing\n") == 2);
  CHECK(error_line("task:\n  scan1d: {param: offset_hz, start: 0, stop: 1, points: 2}\n") == 2);
  CHECK(error_line("simulation:\n  powder: {scheme: zcw, orientations: 20}\n") == 2);
  CHECK_THROWS_AS(load_config("/nonexistent/run.yaml"), ConfigError);
}

TEST_CASE("a spin block can live in its own file") {
  const fs::path dir = scratch_dir("spinfile");
  SpinBlock s = reference_spin_block();
  s.dipolar_b_hz = -300.0;
  std::ofstream(dir / "spin.yaml") << emit_spin_block(s);
  std::ofstream(dir / "run.yaml") << "spin: {file: spin.yaml}\n";
  const RunConfig c = load_config((dir / "run.yaml").string());
  CHECK(c.spin == s);
  CHECK(load_spin_block((dir / "spin.yaml").string()) == s);
  std::ofstream(dir / "bad.yaml") << "spin: {file: missing.yaml}\n";
  CHECK_THROWS_AS(load_config((dir / "bad.yaml").string()), ConfigError);
}

TEST_CASE("axis values hit both end points exactly") {
  const AxisSpec a{"tau1", 0.1, 0.7, 7};
  const auto v = a.values();
  CHECK(v.front() == 0.1);
  CHECK(v.back() == 0.7);
  CHECK(AxisSpec{"tau1", 3.0, 9.0, 1}.values() == std::vector<double>{3.0});
}

TEST_CASE("scan CSV import reproduces the matrix bit-exactly") {
  ScanGrid g{{"tau1", 9.0, 19.0, 4}, AxisSpec{"n_blocks", 11, 13, 3}, {}};
  for (int i = 0; i < 12; ++i) g.values.push_back(std::sin(0.37 * i) / 3.0);
  const ScanGrid full = ScanGrid::from_csv(g.to_csv(17));
  CHECK(full == g);
  const std::string csv = g.to_csv();
  const ScanGrid rounded = ScanGrid::from_csv(csv);
  CHECK(rounded.to_csv() == csv);
  CHECK(ScanGrid::from_csv(rounded.to_csv()) == rounded);
  CHECK(rounded.x == g.x);
  CHECK(rounded.y == g.y);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", g.values[i]);
    CHECK(rounded.values[i] == std::strtod(buf, nullptr));
  }
  CHECK(csv.substr(0, csv.find(',')) == "n_blocks\\tau1");

  ScanGrid one{{"offset", -100.0, 100.0, 3}, std::nullopt, {0.25, 0.5, 0.125}};
  CHECK(ScanGrid::from_csv(one.to_csv()) == one);
  one.values[1] = std::nan("");
  CHECK_THROWS_AS(one.validate(), NumericalError);
}

TEST_CASE("every scan cell equals a direct efficiency evaluation") {
  const SpinSystem sys = reference_spin_block().to_system();
  const SimConfig cfg = tiny();
  const SequenceParams base = default_params(10204.0, 8);
  auto direct = [&](SequenceParams p, double offset = 0.0) {
    return dqf_efficiency(p, sys.with_offset(offset), cfg).efficiency;
  };

  const ScanGrid g = scan_2d({"tau1", 13.5, 14.5, 3}, {"n_blocks", 6, 10, 3}, base, sys, cfg);
  for (int iy = 0; iy < 3; ++iy)
    for (int ix = 0; ix < 3; ++ix) {
      SequenceParams p = base;
      set_param(p, "tau1", g.x.values()[ix]);
      p.n_blocks = 6 + 2 * iy;
      CHECK(std::abs(g.at(ix, iy) - direct(p)) < 1e-12);
    }

  const ScanGrid h = scan_2d({"phi1", -5, 5, 2}, {"kappa2", 70000, 72000, 2}, base, sys, cfg);
  for (int iy = 0; iy < 2; ++iy)
    for (int ix = 0; ix < 2; ++ix) {
      SequenceParams p = base;
      set_param(p, "phi1", h.x.values()[ix]);
      set_param(p, "kappa2", h.y->values()[iy]);
      CHECK(std::abs(h.at(ix, iy) - direct(p)) < 1e-12);
    }

  const ScanGrid o = scan_1d({"offset", -3000, 3000, 3}, base, sys, cfg);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(o.at(i) - direct(base, o.x.values()[i])) < 1e-12);

  const ScanGrid single = scan_1d({"tau2", 14.0, 14.0, 1}, base, sys, cfg);
  SequenceParams p = base;
  set_param(p, "tau2", 14.0);
  CHECK(single.values.size() == 1u);
  CHECK(std::abs(single.at(0) - direct(p)) < 1e-12);
}

TEST_CASE("scan arguments are validated") {
  const SpinSystem sys = reference_spin_block().to_system();
  const SequenceParams base = default_params(10204.0, 8);
  CHECK_THROWS_AS(scan_1d({"tau3", 1, 2, 2}, base, sys, tiny()), std::invalid_argument);
  CHECK_THROWS_AS(scan_2d({"tau1", 13, 14, 2}, {"tau1", 13, 14, 2}, base, sys, tiny()),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_1d({"n_blocks", 1.5, 3.5, 2}, base, sys, tiny()), std::invalid_argument);
}

TEST_CASE("grid maxima carry a four-neighbour certificate") {
  ScanGrid g{{"tau1", 0, 1, 3}, AxisSpec{"n_blocks", 1, 3, 3}, {0, 0, 0, 0, 1, 0, 0, 0, 0}};
  GridMaximum m = locate_maximum(g);
  CHECK(m.certified);
  CHECK(m.ix == 1);
  CHECK(m.iy == 1);
  g.values = {0, 0, 0, 0, 1, 1, 0, 0, 0};
  CHECK_FALSE(locate_maximum(g).certified);
  g.values = {0, 0, 0, 0, 0.5, 0, 0, 0, 2};
  m = locate_maximum(g);
  CHECK_FALSE(m.certified);
  CHECK(m.ix == 2);
  m = locate_maximum(g, 1);
  CHECK(m.ix == 2);
  CHECK(m.iy == 2);
  CHECK_THROWS_AS(locate_maximum(g, 3), std::invalid_argument);

  ScanGrid line{{"tau1", 0, 4, 5}, std::nullopt, {3, 1, 2, 1, 0}};
  m = locate_maximum(line);
  CHECK(m.ix == 0);
  CHECK_FALSE(m.certified);
  m = locate_maximum(line, 1);
  CHECK(m.ix == 2);
  CHECK(m.certified);
}

TEST_CASE("speed study rows point at certified grid maxima") {
  SpeedTask t;
  t.speeds_hz = {10204.0};
  t.dtau1_start = 0.0;
  t.dtau1_stop = 0.04;
  t.dtau1_points = 5;
  t.texc_min_ms = 4.0;
  t.texc_max_ms = 7.0;
  const SpeedStudy s = spinning_speed_study(t, reference_spin_block().to_system(), tiny());
  REQUIRE(s.rows.size() == 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const ScanGrid &g = s.grids[i];
    std::vector<double> top(g.x.points, -2.0);
    for (int iy = 0; iy < g.rows(); ++iy)
      for (int ix = 0; ix < g.x.points; ++ix) top[ix] = std::max(top[ix], g.at(ix, iy));
    int k = 0;
    while (k + 1 < g.x.points && top[k + 1] < top[k]) ++k;
    if (k + 1 == g.x.points) k = 0;
    const GridMaximum m = locate_maximum(g, k);
    bool left = k > 0, right = false;
    for (int ix = k; ix < m.ix; ++ix) left = left || top[ix] < 0.5 * m.value;
    for (int ix = m.ix + 1; ix < g.x.points; ++ix) right = right || top[ix] < 0.5 * m.value;
    CHECK(s.rows[i].clear_maximum == (m.certified && left && right));
    CHECK(s.rows[i].efficiency == m.value);
    CHECK(s.rows[i].tau1_ratio == doctest::Approx(1.0 + 0.01 * m.ix));
    for (int ix = k; ix < g.x.points; ++ix) CHECK(top[ix] <= s.rows[i].efficiency);
  }
  // without CSA the zero band is the global maximum; the row reports the second band
  CHECK(s.rows[0].tau1_ratio > 1.005);
  CHECK(s.rows[0].efficiency < locate_maximum(s.grids[0]).value);
  CHECK_FALSE(s.rows[0].include_csa);
  CHECK(s.rows[1].include_csa);
  t.speeds_hz = {-1.0};
  CHECK_THROWS_AS(spinning_speed_study(t, SpinSystem{}, tiny()), std::invalid_argument);
}

TEST_CASE("runner writes the manifest and the requested artifacts") {
  const fs::path dir = scratch_dir("runner");
  RunConfig c = parse_config(R"(
simulation: {powder: {scheme: zcw, orientations: 21, gamma_angles: 1}, max_step_us: 3.5}
bounds: {genes: [tau1]}
optimizer: {method: ga, runs: 2, population_size: 6, generations: 3, eval_budget: 18}
task:
  buildup: {n_first: 2, n_last: 5}
)");
  run_study(c, dir / "empty", std::cout);
  CHECK(fs::exists(dir / "empty" / "manifest.yaml"));
  CHECK(std::distance(fs::directory_iterator(dir / "empty"), fs::directory_iterator{}) == 1);

  c.tasks = {"buildup", "optimize"};
  std::ostringstream log;
  run_study(c, dir / "full", log);
  std::ifstream m(dir / "full" / "manifest.yaml");
  std::stringstream ms;
  ms << m.rdbuf();
  CHECK(parse_config(ms.str()) == c);
  CHECK(fs::exists(dir / "full" / "buildup.csv"));
  CHECK(fs::exists(dir / "full" / "optimize" / "run_001.json"));
  CHECK(fs::exists(dir / "full" / "optimize" / "run_000_history.csv"));
  std::ifstream summary(dir / "full" / "optimize" / "best_summary.csv");
  std::string header;
  std::getline(summary, header);
  CHECK(header ==
        "method,run,seed,tau1_us,tau2_us,kappa1_hz,kappa2_hz,phi1_deg,phi2_deg,n_blocks,dqf_efficiency");
  const auto j = nlohmann::json::parse(std::ifstream(dir / "full" / "optimize" / "run_000.json"));
  CHECK(j["method"] == "ga");
  CHECK(j["evaluations"].get<int>() <= 18);
  CHECK(j["best_bits"].get<std::string>().size() == 16u);
  CHECK_THROWS_AS(run_task(c, "dance", dir, log), std::invalid_argument);
}
