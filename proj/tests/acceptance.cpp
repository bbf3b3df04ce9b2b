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

// Reference-system acceptance run. Prints one PASS/FAIL line per criterion
// and exits non-zero if any criterion fails.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "c7ga/studies.hpp"

using namespace c7ga;

namespace {

constexpr double kRotor = 10204.0;

struct Settings {
  int orientations = 144;
  int gamma = 3;
  double step_us = 2.0;
  int ga_orientations = 55;
  int ga_gamma = 1;
  double ga_step_us = 3.5;
  int runs = 30;
  int refine_budget = 300;
  std::string only;
  std::string known_fail;
};

std::set<int> id_list(const std::string &s) {
  std::set<int> ids;
  for (char c : s)
    if (std::isdigit(static_cast<unsigned char>(c))) ids.insert(c - '0');
  return ids;
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

class Acceptance {
 public:
  explicit Acceptance(const Settings &s)
      : s_(s),
        sys_(reference_spin_block().to_system()),
        selected_(id_list(s.only)),
        known_(id_list(s.known_fail)) {}

  int run() {
    criterion(1, [&] { return c1(); });
    criterion(2, [&] { return c2(); });
    criterion(3, [&] { return c3(); });
    criterion(4, [&] { return c4(); });
    criterion(5, [&] { return c5(); });
    criterion(6, [&] { return c6(); });
    criterion(7, [&] { return c7(); });
    criterion(8, [&] { return c8(); });
    criterion(9, [&] { return c9(); });
    std::cout << (failures_ ? "FAILED " : "ALL PASSED ") << failures_ << " failing criteria";
    if (known_failures_) std::cout << ", " << known_failures_ << " of them known";
    std::cout << "\n";
    return failures_ > known_failures_ ? 1 : 0;
  }

 private:
  struct Outcome {
    bool pass;
    std::string text;
  };

  void criterion(int id, const std::function<Outcome()> &body) {
    if (!selected_.empty() && !selected_.count(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = body();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) {
      ++failures_;
      if (known_.count(id)) ++known_failures_;
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.text
              << fmt(" [%.1f s]", secs) << std::endl;
  }

  SimConfig physics(bool csa, double rotor = kRotor) const {
    SimConfig c;
    c.rotor_freq_hz = rotor;
    c.powder = {"zcw", s_.orientations, s_.gamma};
    c.max_step = s_.step_us * 1e-6;
    c.include_csa = csa;
    return c;
  }

  SimConfig search() const {
    SimConfig c;
    c.powder = {"zcw", s_.ga_orientations, s_.ga_gamma};
    c.max_step = s_.ga_step_us * 1e-6;
    return c;
  }

  static BuildupPoint peak(const std::vector<BuildupPoint> &b) {
    BuildupPoint best = b.front();
    for (const auto &p : b)
      if (p.efficiency > best.efficiency) best = p;
    return best;
  }

  Outcome c1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto b = buildup_curve(default_params(kRotor, 31), sys_, physics(false), 1, 45);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const BuildupPoint m = peak(b);
    const double ms = m.excitation_time * 1e3;
    return {within(m.efficiency, 0.73, 0.03) && within(ms, 5.7, 0.5) && secs < 120.0,
            fmt("no-CSA buildup maximum %.2f%% at %.3f ms (want 73 +- 3%% at 5.7 +- 0.5 ms, "
                "< 120 s)",
                100 * m.efficiency, ms)};
  }

  Outcome c2() {
    const auto b = buildup_curve(default_params(kRotor, 31), sys_, physics(true), 1, 45);
    const BuildupPoint m = peak(b);
    const double e31 = b[30].efficiency;
    const double ms = m.excitation_time * 1e3;
    return {within(e31, 0.087, 0.02) && within(m.efficiency, 0.16, 0.04) && within(ms, 7.1, 0.7),
            fmt("with-CSA n=31 %.2f%% (want 8.7 +- 2%%), maximum %.2f%% at %.3f ms "
                "(want 16 +- 4%% at 7.1 +- 0.7 ms)",
                100 * e31, 100 * m.efficiency, ms)};
  }

  const SpeedStudy &speeds() {
    if (!speed_) {
      SpeedTask t;
      t.speeds_hz = {4000.0, 9000.0, kRotor};
      t.dtau1_start = 0.0;
      t.dtau1_stop = 0.05;
      t.dtau1_points = 26;
      speed_ = spinning_speed_study(t, sys_, physics(true));
    }
    return *speed_;
  }

  static const SpeedRow &row(const SpeedStudy &s, double rotor, bool csa) {
    for (const auto &r : s.rows)
      if (r.rotor_freq_hz == rotor && r.include_csa == csa) return r;
    throw std::runtime_error("missing speed-study row");
  }

  Outcome c3() {
    const SpeedStudy &s = speeds();
    const double grid = 0.002;
    bool ok = true;
    std::ostringstream out;
    const SpeedRow &band0 = row(s, kRotor, false);
    const SpeedRow &band1 = row(s, kRotor, true);
    ok &= within(band0.tau1_ratio - 1, 0.022, 0.005);
    ok &= within(band1.tau1_ratio - 1, 0.026, 0.005);
    out << fmt("band dtau1/tau_c no CSA %.3f (0.022 +- 0.005), with CSA %.3f (0.026 +- 0.005)",
               band0.tau1_ratio - 1, band1.tau1_ratio - 1);
    struct Ref {
      double rotor;
      bool csa;
      double ms, dtau1;
    };
    for (const Ref &ref : {Ref{9000.0, false, 5.777, 0.022}, Ref{kRotor, true, 6.354, 0.026}}) {
      const SpeedRow &r = row(s, ref.rotor, ref.csa);
      const double block_ms = 2e3 / ref.rotor;
      const double tol_ms = block_ms + 0.05 * ref.ms;
      const double tol_d = grid + 0.05 * ref.dtau1;
      ok &= r.clear_maximum && within(r.tau_exc_ms, ref.ms, tol_ms) &&
            within(r.tau1_ratio - 1, ref.dtau1, tol_d);
      out << fmt("; %g Hz %s: %.3f ms / %.3f (want %.3f +- %.3f ms / %.3f +- %.4f)", ref.rotor,
                 ref.csa ? "CSA" : "no CSA", r.tau_exc_ms, r.tau1_ratio, ref.ms, tol_ms,
                 1 + ref.dtau1, tol_d);
    }
    for (const auto &r : s.rows)
      if (r.rotor_freq_hz == 4000.0)
        out << fmt("; 4000 Hz %s: %s", r.include_csa ? "CSA" : "no CSA",
                   r.clear_maximum ? fmt("%.3f ms / %.3f", r.tau_exc_ms, r.tau1_ratio).c_str()
                                   : "no clear maximum");
    return {ok, out.str()};
  }

  Outcome c4() {
    const double tc = c7_defaults(kRotor).tau_c * 1e6;
    const int n = 41;
    const AxisSpec x{"tau1", tc - 5, tc + 5, n}, y{"tau2", tc - 5, tc + 5, n};
    const ScanGrid g = scan_2d(x, y, default_params(kRotor, 31), sys_, search());
    const double dx = 10.0 / (n - 1);
    double valley = -1, off = -1;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const int k = ix + iy - (n - 1);
        const double d1 = (ix - (n - 1) / 2) * dx;
        if (k == 0 && std::abs(d1) > 1.0) valley = std::max(valley, g.at(ix, iy));
        if (std::abs(k) * dx >= 1.0) off = std::max(off, g.at(ix, iy));
      }
    return {valley < 0.25 * off,
            fmt("valley dtau1 + dtau2 = 0 (|dtau1| > 1 us) maximum %.2f%%, off-line maximum "
                "%.2f%% (want ratio < 0.25, got %.3f)",
                100 * valley, 100 * off, valley / off)};
  }

  RunConfig search_config(const std::string &method, const std::vector<std::string> &genes) const {
    RunConfig c;
    c.sim.powder = {"zcw", s_.ga_orientations, s_.ga_gamma};
    c.sim.max_step_us = s_.ga_step_us;
    c.optimize.method = method;
    c.optimize.runs = s_.runs;
    for (const auto &g : genes) c.genes.push_back(default_gene(g, kRotor));
    return c;
  }

  static double best_efficiency(const OptimizeStudy &s) {
    return 1.0 - s.runs[s.best_run].best_fitness;
  }

  const OptimizeStudy &ga_tau1() {
    if (!ga_tau1_) {
      const auto t0 = std::chrono::steady_clock::now();
      ga_tau1_ = optimize_study(search_config("ga", {"tau1"}));
      ga_tau1_secs_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *ga_tau1_;
  }

  const OptimizeStudy &ga_full() {
    if (!ga_full_) {
      RunConfig c = search_config("ga", sequence_param_names());
      c.optimize.refine_budget = s_.refine_budget;
      full_space_ = c.space();
      const auto t0 = std::chrono::steady_clock::now();
      ga_full_ = optimize_study(c);
      ga_full_secs_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *ga_full_;
  }

  Outcome c5() {
    const double a = best_efficiency(ga_tau1());
    const double b = best_efficiency(ga_full());
    const SequenceParams p = full_space_->apply(ga_full_->runs[ga_full_->best_run].best_x);
    const double fine = dqf_efficiency(p, sys_, physics(true)).efficiency;
    return {a >= 0.52 && b >= 0.60 && ga_tau1_secs_ <= 7200 && ga_full_secs_ <= 7200,
            fmt("GA best-of-%d tau1 only %.2f%% (want >= 52%%) in %.0f s, all seven %.2f%% "
                "(want >= 60%%) in %.0f s; best tau1 %.2f tau2 %.2f us kappa %.0f %.0f Hz "
                "phi %.2f %.2f deg n %d, %.2f%% on the physics powder",
                s_.runs, 100 * a, ga_tau1_secs_, 100 * b, ga_full_secs_, p.tau1 * 1e6,
                p.tau2 * 1e6, p.kappa1, p.kappa2, p.phi1 * 180 / kPi, p.phi2 * 180 / kPi,
                p.n_blocks, 100 * fine)};
  }

  Outcome c6() {
    const OptimizeStudy rnd = optimize_study(search_config("random", sequence_param_names()));
    const double ga = ga_full().success_rate;
    return {ga - rnd.success_rate >= 0.15,
            fmt("success rate (> 50%% DQF) GA %.3f, random %.3f, best random %.2f%% "
                "(want difference >= 0.15)",
                ga, rnd.success_rate, 100 * best_efficiency(rnd))};
  }

  Outcome c7() {
    const OptimizeStudy &s = ga_full();
    if (!s.refined) return {false, "no refinement record"};
    const double before = best_efficiency(s);
    const double after = 1.0 - s.refined->best_fitness;
    return {after - before <= 0.01,
            fmt("simplex refinement %.2f%% -> %.2f%% (want gain <= 1 pp)", 100 * before,
                100 * after)};
  }

  Outcome c8() {
    std::vector<double> offsets;
    for (int i = -60; i <= 60; ++i) offsets.push_back(250.0 * i);
    auto measure = [&](const SequenceParams &p, bool csa) {
      const ProfileShape sh = analyze_profile(offset_profile(p, sys_, physics(csa), offsets));
      return std::pair{sh, std::abs(sh.upper_hz + sh.lower_hz) / sh.fwhm_hz};
    };
    const auto [base, base_asym] = measure(default_params(kRotor, 31), false);
    const OptimizeStudy &s = ga_full();
    const auto [opt, opt_asym] = measure(full_space_->apply(s.runs[s.best_run].best_x), true);
    const bool ok = base.bracketed && opt.bracketed && within(base.fwhm_hz, 9500, 1000) &&
                    base_asym <= 0.05 && opt_asym <= 0.05 && opt.fwhm_hz < base.fwhm_hz;
    return {ok, fmt("no-CSA FWHM %.0f Hz (want 9500 +- 1000) asymmetry %.3f (want <= 0.05); "
                    "GA sequence with CSA FWHM %.0f Hz asymmetry %.3f (want narrower, <= 0.05)",
                    base.fwhm_hz, base_asym, opt.fwhm_hz, opt_asym)};
  }

  Outcome c9() {
    std::ostringstream sink;
    doctest::Context ctx;
    ctx.setOption("test-case",
                  "*unitary*,*idempotent*,*no double-quantum signal*,*relaxed family*,"
                  "*quantization*,*retraction*,*never worsens*,*bit-identical*,*OneMax:*");
    ctx.setOption("no-breaks", true);
    ctx.setCout(&sink);
    const int rc = ctx.run();
    const std::string out = sink.str();
    const auto pos = out.find("test cases:");
    std::string summary = pos == std::string::npos ? "" : out.substr(pos);
    summary = summary.substr(0, summary.find('\n'));
    return {rc == 0, "property suites: " + summary};
  }

  Settings s_;
  SpinSystem sys_;
  std::set<int> selected_;
  std::set<int> known_;
  int failures_ = 0;
  int known_failures_ = 0;
  std::optional<SpeedStudy> speed_;
  std::optional<OptimizeStudy> ga_tau1_, ga_full_;
  std::optional<ParameterSpace> full_space_;
  double ga_tau1_secs_ = 0, ga_full_secs_ = 0;
};

}  // namespace

int main(int argc, char **argv) {
  Settings s;
  CLI::App app{"c7ga acceptance run"};
  app.add_option("--orientations", s.orientations, "powder orientations for the physics checks");
  app.add_option("--gamma", s.gamma, "gamma angles for the physics checks");
  app.add_option("--step-us", s.step_us, "maximum sub-step for the physics checks");
  app.add_option("--ga-orientations", s.ga_orientations, "powder orientations for searches");
  app.add_option("--ga-gamma", s.ga_gamma, "gamma angles for searches");
  app.add_option("--ga-step-us", s.ga_step_us, "maximum sub-step for searches");
  app.add_option("--runs", s.runs, "optimizer runs per study");
  app.add_option("--refine-budget", s.refine_budget, "simplex refinement budget");
  app.add_option("--only", s.only, "criteria to run, e.g. 1,2,9");
  app.add_option("--known-fail", s.known_fail,
                 "criteria whose failure is still reported but does not fail the exit code");
  CLI11_PARSE(app, argc, argv);
  return Acceptance(s).run();
}
