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

#include "c7ga/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

namespace c7ga {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_file(const fs::path &path, const std::string &body) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void require_finite(double v, const char *what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what);
}

std::vector<double> buildup_mode(const RunConfig &c, bool csa) {
  SimConfig cfg = c.sim_config();
  cfg.include_csa = csa;
  const auto curve = buildup_curve(c.params(), c.system(), cfg, c.buildup.n_first, c.buildup.n_last);
  std::vector<double> out;
  for (const auto &b : curve) {
    require_finite(b.efficiency, "buildup efficiency");
    out.push_back(b.efficiency);
  }
  return out;
}

std::string bits_string(const BitString &b) {
  std::string s;
  for (auto v : b) s += v ? '1' : '0';
  return s;
}

nlohmann::json params_json(const SequenceParams &p) {
  nlohmann::json j;
  for (const auto &name : sequence_param_names()) j[name] = get_param(p, name);
  return j;
}

std::string csa_tag(bool csa) { return csa ? "csa" : "nocsa"; }

}  // namespace

BuildupTable buildup_study(const RunConfig &c) {
  BuildupTable t;
  SequenceParams p = c.params();
  for (int n = c.buildup.n_first; n <= c.buildup.n_last; ++n) {
    p.n_blocks = n;
    t.n_blocks.push_back(n);
    t.tau_exc_ms.push_back(excitation_time(p) * 1e3);
  }
  if (c.buildup.both_csa_modes || !c.sim.include_csa) t.no_csa = buildup_mode(c, false);
  if (c.buildup.both_csa_modes || c.sim.include_csa) t.with_csa = buildup_mode(c, true);
  return t;
}

OffsetStudy offset_study(const RunConfig &c) {
  OffsetStudy s;
  s.grid = scan_1d(c.offset.axis, c.params(), c.system(), c.sim_config());
  const auto xs = s.grid.x.values();
  std::vector<OffsetPoint> points;
  for (std::size_t i = 0; i < xs.size(); ++i) points.push_back({xs[i], s.grid.values[i]});
  std::sort(points.begin(), points.end(),
            [](const OffsetPoint &a, const OffsetPoint &b) { return a.offset_hz < b.offset_hz; });
  s.shape = analyze_profile(points);
  if (s.shape.bracketed && s.shape.fwhm_hz > 0.0)
    s.asymmetry = std::abs(s.shape.upper_hz + s.shape.lower_hz) / s.shape.fwhm_hz;
  return s;
}

namespace {

// Maximum over the y axis for each column.
std::vector<double> column_profile(const ScanGrid &g) {
  std::vector<double> top(g.x.points, -2.0);
  for (int iy = 0; iy < g.rows(); ++iy)
    for (int ix = 0; ix < g.x.points; ++ix) top[ix] = std::max(top[ix], g.at(ix, iy));
  return top;
}

// First local minimum of the column profile, which separates the band at
// dtau1 = 0 from the second band. 0 if the profile starts out rising.
int second_band_column(const std::vector<double> &top) {
  const int n = static_cast<int>(top.size());
  if (n < 2 || top[1] >= top[0]) return 0;
  int k = 1;
  while (k + 1 < n && top[k + 1] < top[k]) ++k;
  return k + 1 < n ? k : 0;
}

// The band around column ix drops below half its height on both sides; a
// separating minimum at `first` counts as the left edge.
bool band_resolved(const std::vector<double> &top, int first, int ix) {
  const double half = 0.5 * top[ix];
  const auto below = [&](int i) { return top[i] < half; };
  bool left = first > 0, right = false;
  for (int i = first; i < ix; ++i) left = left || below(i);
  for (int i = ix + 1; i < static_cast<int>(top.size()); ++i) right = right || below(i);
  return left && right;
}

}  // namespace

SpeedStudy spinning_speed_study(const SpeedTask &task, const SpinSystem &sys, const SimConfig &cfg) {
  if (task.speeds_hz.empty()) throw std::invalid_argument("speed study needs at least one speed");
  if (task.dtau1_points < 1) throw std::invalid_argument("speed study needs dtau1_points >= 1");
  SpeedStudy out;
  for (double speed : task.speeds_hz) {
    if (!(speed > 0.0)) throw std::invalid_argument("rotor speeds must be positive");
    const C7Defaults d = c7_defaults(speed);
    const SequenceParams base = default_params(speed, 1);
    const double t_block = block_duration(base);
    const int n_min = std::max(1, static_cast<int>(std::ceil(task.texc_min_ms * 1e-3 / t_block - 1e-9)));
    const int n_max = static_cast<int>(std::floor(task.texc_max_ms * 1e-3 / t_block + 1e-9));
    if (n_max < n_min + 2)
      throw std::invalid_argument("excitation-time window too narrow at " + fmt(speed) + " Hz");
    const AxisSpec x{"tau1", d.tau_c * (1.0 + task.dtau1_start) * 1e6,
                     d.tau_c * (1.0 + task.dtau1_stop) * 1e6, task.dtau1_points};
    const AxisSpec y{"n_blocks", static_cast<double>(n_min), static_cast<double>(n_max),
                     n_max - n_min + 1};
    for (bool csa : {false, true}) {
      SimConfig c = cfg;
      c.rotor_freq_hz = speed;
      c.include_csa = csa;
      ScanGrid g = scan_2d(x, y, base, sys, c);
      const std::vector<double> top = column_profile(g);
      const int band = second_band_column(top);
      const GridMaximum m = locate_maximum(g, band);
      SequenceParams p = base;
      set_param(p, "tau1", g.x.values()[m.ix]);
      p.n_blocks = n_min + m.iy;
      SpeedRow row;
      row.rotor_freq_hz = speed;
      row.include_csa = csa;
      row.clear_maximum = m.certified && band_resolved(top, band, m.ix);
      row.tau_exc_ms = excitation_time(p) * 1e3;
      row.tau1_ratio = p.tau1 / d.tau_c;
      row.efficiency = m.value;
      row.n_blocks = p.n_blocks;
      out.rows.push_back(row);
      out.grids.push_back(std::move(g));
    }
  }
  return out;
}

OptimizeStudy optimize_study(const RunConfig &c) {
  const OptimizeTask &o = c.optimize;
  const ParameterSpace space = c.space();
  const DqfExperiment exp(c.system(), c.sim_config());
  const Objective f = dqf_objective(exp, space);
  std::vector<double> widths;
  for (const auto &g : space.genes) widths.push_back(g.upper - g.lower);

  OptimizeStudy s;
  for (int r = 0; r < o.runs; ++r) {
    const std::uint64_t seed = o.ga.seed + static_cast<std::uint64_t>(r);
    if (o.method == "ga") {
      GAConfig g = o.ga;
      g.seed = seed;
      s.runs.push_back(ga_run(g, space.genes, f));
    } else if (o.method == "random") {
      s.runs.push_back(random_search(o.budget, space.genes, f, seed));
    } else {
      Rng rng(seed);
      std::vector<double> x0;
      for (const auto &g : space.genes) x0.push_back(g.lower + rng.uniform() * (g.upper - g.lower));
      if (o.method == "simplex") {
        s.runs.push_back(nelder_mead(f, x0, space.half_widths(), {o.budget}));
      } else if (o.method == "quasi_newton") {
        QuasiNewtonOptions q;
        q.budget = o.budget;
        for (double w : widths) q.fd_step.push_back(1e-4 * w);
        s.runs.push_back(quasi_newton_fd(f, x0, q).record);
      } else {
        throw std::invalid_argument("unknown optimizer method '" + o.method + "'");
      }
      s.runs.back().seed = seed;
    }
  }
  for (std::size_t r = 1; r < s.runs.size(); ++r)
    if (s.runs[r].best_fitness < s.runs[s.best_run].best_fitness) s.best_run = r;
  s.success_rate = success_rate(s.runs, 0.5);
  if (o.refine_budget > 0 && s.runs[s.best_run].error.empty()) {
    s.refined = nelder_mead(f, s.runs[s.best_run].best_x, space.half_widths(), {o.refine_budget});
  }
  return s;
}

nlohmann::json record_json(const RunRecord &r, const ParameterSpace &space) {
  nlohmann::json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  j["evaluations"] = r.evaluations;
  j["best_fitness"] = r.best_fitness;
  j["best_efficiency"] = 1.0 - r.best_fitness;
  j["best_x"] = r.best_x;
  nlohmann::json genes = nlohmann::json::array();
  for (const auto &g : space.genes) genes.push_back(g.name);
  j["genes"] = genes;
  if (r.best_x.size() == space.genes.size()) j["best_params"] = params_json(space.apply(r.best_x));
  if (!r.best_bits.empty()) j["best_bits"] = bits_string(r.best_bits);
  nlohmann::json h = nlohmann::json::array();
  for (const auto &g : r.history)
    h.push_back({{"generation", g.generation},
                 {"best_fitness", g.best_fitness},
                 {"mean_fitness", g.mean_fitness},
                 {"evaluations", g.evaluations}});
  j["history"] = h;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::string history_csv(const RunRecord &r) {
  std::string out = "generation,best_fitness,mean_fitness,evaluations,best_efficiency\n";
  for (const auto &g : r.history)
    out += std::to_string(g.generation) + "," + fmt(g.best_fitness, 17) + "," +
           fmt(g.mean_fitness, 17) + "," + std::to_string(g.evaluations) + "," +
           fmt(1.0 - g.best_fitness) + "\n";
  return out;
}

void run_task(const RunConfig &c, const std::string &task, const fs::path &out, std::ostream &log) {
  if (task == "buildup") {
    const BuildupTable t = buildup_study(c);
    std::string csv = "n_blocks,tau_exc_ms";
    if (!t.no_csa.empty()) csv += ",efficiency_no_csa";
    if (!t.with_csa.empty()) csv += ",efficiency_csa";
    csv += "\n";
    nlohmann::json summary;
    for (std::size_t i = 0; i < t.n_blocks.size(); ++i) {
      csv += std::to_string(t.n_blocks[i]) + "," + fmt(t.tau_exc_ms[i], 17);
      if (!t.no_csa.empty()) csv += "," + fmt(t.no_csa[i]);
      if (!t.with_csa.empty()) csv += "," + fmt(t.with_csa[i]);
      csv += "\n";
    }
    for (bool csa : {false, true}) {
      const auto &v = csa ? t.with_csa : t.no_csa;
      if (v.empty()) continue;
      const auto k = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
      summary[csa_tag(csa)] = {{"max_efficiency", v[k]},
                               {"n_blocks", t.n_blocks[k]},
                               {"tau_exc_ms", t.tau_exc_ms[k]}};
      log << "buildup " << csa_tag(csa) << ": max " << fmt(100 * v[k], 4) << "% at "
          << fmt(t.tau_exc_ms[k], 4) << " ms (n = " << t.n_blocks[k] << ")\n";
    }
    write_file(out / "buildup.csv", csv);
    write_file(out / "buildup_summary.json", summary.dump(2) + "\n");
  } else if (task == "scan1d" || task == "scan2d") {
    const ScanGrid g = task == "scan1d"
                           ? scan_1d(c.scan1d.axis, c.params(), c.system(), c.sim_config())
                           : scan_2d(c.scan2d.x, c.scan2d.y, c.params(), c.system(), c.sim_config());
    const GridMaximum m = locate_maximum(g);
    nlohmann::json summary{{"max_efficiency", m.value},
                           {g.x.param, g.x.values()[m.ix]},
                           {"local_max_certified", m.certified}};
    if (g.y) summary[g.y->param] = g.y->values()[m.iy];
    log << task << ": max " << fmt(100 * m.value, 4) << "% at " << g.x.param << " = "
        << fmt(g.x.values()[m.ix]) << "\n";
    write_file(out / (task + ".csv"), g.to_csv());
    write_file(out / (task + "_summary.json"), summary.dump(2) + "\n");
  } else if (task == "offset") {
    const OffsetStudy s = offset_study(c);
    nlohmann::json summary{{"peak_efficiency", s.shape.peak},
                           {"peak_offset_hz", s.shape.peak_offset_hz},
                           {"lower_hz", s.shape.lower_hz},
                           {"upper_hz", s.shape.upper_hz},
                           {"fwhm_hz", s.shape.fwhm_hz},
                           {"bracketed", s.shape.bracketed},
                           {"asymmetry", s.asymmetry}};
    log << "offset: fwhm " << fmt(s.shape.fwhm_hz) << " Hz"
        << (s.shape.bracketed ? "" : " (half maximum not bracketed)") << "\n";
    write_file(out / "offset.csv", s.grid.to_csv());
    write_file(out / "offset_summary.json", summary.dump(2) + "\n");
  } else if (task == "speedstudy") {
    const SpeedStudy s = spinning_speed_study(c.speedstudy, c.system(), c.sim_config());
    std::string csv =
        "rotor_freq_hz,csa,clear_maximum,tau_exc_ms,tau1_ratio,efficiency,n_blocks\n";
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      const SpeedRow &r = s.rows[i];
      csv += fmt(r.rotor_freq_hz, 17) + "," + (r.include_csa ? "1" : "0") + "," +
             (r.clear_maximum ? "1" : "0") + "," + fmt(r.tau_exc_ms) + "," + fmt(r.tau1_ratio) +
             "," + fmt(r.efficiency) + "," + std::to_string(r.n_blocks) + "\n";
      write_file(out / "speedstudy" /
                     ("grid_" + fmt(r.rotor_freq_hz, 17) + "_" + csa_tag(r.include_csa) + ".csv"),
                 s.grids[i].to_csv());
      log << "speed " << fmt(r.rotor_freq_hz) << " Hz " << csa_tag(r.include_csa) << ": ";
      if (r.clear_maximum)
        log << fmt(r.tau_exc_ms, 4) << " ms, tau1/tau_c " << fmt(r.tau1_ratio, 4) << "\n";
      else
        log << "no clear maximum\n";
    }
    write_file(out / "speedstudy.csv", csv);
  } else if (task == "optimize") {
    const ParameterSpace space = c.space();
    const OptimizeStudy s = optimize_study(c);
    std::string summary_csv = "method,run,seed";
    for (const auto &name : sequence_param_names()) {
      static const std::map<std::string, std::string> unit{
          {"tau1", "_us"}, {"tau2", "_us"}, {"kappa1", "_hz"}, {"kappa2", "_hz"},
          {"phi1", "_deg"}, {"phi2", "_deg"}, {"n_blocks", ""}};
      summary_csv += "," + name + unit.at(name);
    }
    summary_csv += ",dqf_efficiency\n";
    std::string first_error;
    for (std::size_t r = 0; r < s.runs.size(); ++r) {
      const RunRecord &rec = s.runs[r];
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", r);
      write_file(out / "optimize" / (std::string(name) + ".json"), record_json(rec, space).dump(2) + "\n");
      write_file(out / "optimize" / (std::string(name) + "_history.csv"), history_csv(rec));
      if (!rec.error.empty() && first_error.empty()) first_error = rec.error;
      if (rec.best_x.size() != space.genes.size()) continue;
      const SequenceParams p = space.apply(rec.best_x);
      summary_csv += rec.method + "," + std::to_string(r) + "," + std::to_string(rec.seed);
      for (const auto &pn : sequence_param_names()) summary_csv += "," + fmt(get_param(p, pn), 10);
      summary_csv += "," + fmt(1.0 - rec.best_fitness) + "\n";
    }
    write_file(out / "optimize" / "best_summary.csv", summary_csv);
    const RunRecord &best = s.runs[s.best_run];
    nlohmann::json summary{{"method", c.optimize.method},
                           {"runs", s.runs.size()},
                           {"success_rate", s.success_rate},
                           {"best_run", s.best_run},
                           {"best", record_json(best, space)}};
    if (s.refined) summary["refined"] = record_json(*s.refined, space);
    write_file(out / "optimize" / "summary.json", summary.dump(2) + "\n");
    log << "optimize " << c.optimize.method << ": best " << fmt(100 * (1.0 - best.best_fitness), 4)
        << "% (run " << s.best_run << "), success rate " << fmt(s.success_rate, 3) << "\n";
    if (s.refined)
      log << "simplex refinement: " << fmt(100 * (1.0 - s.refined->best_fitness), 4) << "%\n";
    if (!first_error.empty()) throw NumericalError("optimizer run failed: " + first_error);
  } else {
    throw std::invalid_argument("unknown task '" + task + "'");
  }
}

void run_study(const RunConfig &c, const fs::path &out, std::ostream &log) {
  fs::create_directories(out);
  write_file(out / "manifest.yaml", emit_config(c));
  for (const auto &t : c.tasks) run_task(c, t, out, log);
}

}  // namespace c7ga
