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

#include "c7ga/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace c7ga {

namespace {

constexpr double kDeg = kPi / 180.0;

std::string join(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node &n, const std::string &field,
                         const std::string &msg) const {
    const int line = n.IsDefined() ? n.Mark().line + 1 : 0;
    throw ConfigError(source_, line, field, msg);
  }

  void require_map(const YAML::Node &n, const std::string &path) const {
    if (!n.IsMap()) fail(n, path, "expected a mapping");
  }

  void allow_keys(const YAML::Node &n, const std::string &path,
                  std::initializer_list<const char *> keys) const {
    require_map(n, path);
    for (auto it = n.begin(); it != n.end(); ++it) {
      const std::string k = it->first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char *a) { return k == a; }))
        fail(it->first, join(path, k), "unknown key");
    }
  }

  template <class T>
  T scalar(const YAML::Node &n, const std::string &field, const char *what) const {
    if (!n.IsScalar()) fail(n, field, std::string("expected ") + what);
    try {
      return n.as<T>();
    } catch (const YAML::Exception &) {
      fail(n, field, std::string("expected ") + what);
    }
  }

  double number(const YAML::Node &n, const std::string &field) const {
    const double v = scalar<double>(n, field, "a number");
    if (!std::isfinite(v)) fail(n, field, "expected a finite number");
    return v;
  }

  int integer(const YAML::Node &n, const std::string &field) const {
    return scalar<int>(n, field, "an integer");
  }

  bool boolean(const YAML::Node &n, const std::string &field) const {
    return scalar<bool>(n, field, "true or false");
  }

  std::string text(const YAML::Node &n, const std::string &field) const {
    return scalar<std::string>(n, field, "a string");
  }

  // Optional members: leave `out` unchanged when the key is absent.
  void opt(const YAML::Node &m, const char *key, const std::string &path, double &out) const {
    if (const auto n = m[key]) out = number(n, join(path, key));
  }
  void opt(const YAML::Node &m, const char *key, const std::string &path, int &out) const {
    if (const auto n = m[key]) out = integer(n, join(path, key));
  }
  void opt(const YAML::Node &m, const char *key, const std::string &path, bool &out) const {
    if (const auto n = m[key]) out = boolean(n, join(path, key));
  }
  void opt(const YAML::Node &m, const char *key, const std::string &path,
           std::string &out) const {
    if (const auto n = m[key]) out = text(n, join(path, key));
  }
  template <std::size_t N>
  void opt(const YAML::Node &m, const char *key, const std::string &path,
           std::array<double, N> &out) const {
    const auto n = m[key];
    if (!n) return;
    const std::string f = join(path, key);
    if (!n.IsSequence() || n.size() != N)
      fail(n, f, "expected a list of " + std::to_string(N) + " numbers");
    for (std::size_t i = 0; i < N; ++i) out[i] = number(n[i], f);
  }

  void check(const YAML::Node &m, const char *key, const std::string &path, bool ok,
             const std::string &msg) const {
    if (!ok) fail(m[key] ? m[key] : m, join(path, key), msg);
  }

  const std::string &source() const { return source_; }

 private:
  std::string source_;
};

SpinBlock read_spin(const Reader &r, const YAML::Node &n, const std::string &path) {
  r.allow_keys(n, path,
               {"larmor_hz", "iso_shift_hz", "csa", "dipolar_b_hz", "dipolar_euler_deg"});
  SpinBlock s = reference_spin_block();
  r.opt(n, "larmor_hz", path, s.larmor_hz);
  r.opt(n, "iso_shift_hz", path, s.iso_shift_hz);
  r.opt(n, "dipolar_b_hz", path, s.dipolar_b_hz);
  r.opt(n, "dipolar_euler_deg", path, s.dipolar_euler_deg);
  if (const auto c = n["csa"]) {
    const std::string f = join(path, "csa");
    if (!c.IsSequence() || c.size() != 2) r.fail(c, f, "expected a list of two tensors");
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string fk = f + "[" + std::to_string(k) + "]";
      r.allow_keys(c[k], fk, {"aniso_hz", "eta", "euler_deg"});
      r.opt(c[k], "aniso_hz", fk, s.csa[k].aniso_hz);
      r.opt(c[k], "eta", fk, s.csa[k].eta);
      r.opt(c[k], "euler_deg", fk, s.csa[k].euler_deg);
      const double eta = s.csa[k].eta;
      r.check(c[k], "eta", fk, eta >= 0.0 && eta <= 1.0, "must lie in [0, 1]");
    }
  }
  return s;
}

AxisSpec read_axis(const Reader &r, const YAML::Node &n, const std::string &path, AxisSpec a,
                   bool offset_only) {
  r.allow_keys(n, path, {"param", "start", "stop", "points"});
  r.opt(n, "param", path, a.param);
  r.opt(n, "start", path, a.start);
  r.opt(n, "stop", path, a.stop);
  r.opt(n, "points", path, a.points);
  r.check(n, "points", path, a.points >= 1, "must be >= 1");
  if (offset_only)
    r.check(n, "param", path, a.param == "offset", "must be 'offset'");
  else
    r.check(n, "param", path, a.param == "offset" || is_sequence_param(a.param),
            "unknown parameter '" + a.param + "'");
  return a;
}

GeneSpec read_gene(const Reader &r, const YAML::Node &n, const std::string &path,
                   double rotor_freq) {
  if (n.IsScalar()) {
    const std::string name = r.text(n, path);
    if (!is_sequence_param(name)) r.fail(n, path, "unknown parameter '" + name + "'");
    return default_gene(name, rotor_freq);
  }
  r.allow_keys(n, path, {"name", "lower", "upper", "bits"});
  if (!n["name"]) r.fail(n, join(path, "name"), "missing");
  const std::string name = r.text(n["name"], join(path, "name"));
  if (!is_sequence_param(name)) r.fail(n["name"], join(path, "name"), "unknown parameter '" + name + "'");
  GeneSpec g = default_gene(name, rotor_freq);
  r.opt(n, "lower", path, g.lower);
  r.opt(n, "upper", path, g.upper);
  r.opt(n, "bits", path, g.bit_depth);
  if (g.integer) {
    r.check(n, "lower", path, g.lower == std::round(g.lower), "must be an integer");
    r.check(n, "upper", path, g.upper == std::round(g.upper), "must be an integer");
    if (!n["bits"] && g.upper > g.lower)
      g = integer_gene(name, static_cast<int>(g.lower), static_cast<int>(g.upper));
  }
  try {
    g.validate();
  } catch (const std::invalid_argument &e) {
    r.fail(n, path, e.what());
  }
  return g;
}

YAML::Node load_yaml(const std::string &text, const std::string &source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError(source, e.mark.line + 1, "<syntax>", e.msg);
  }
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "<file>", "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit_spin(YAML::Emitter &out, const SpinBlock &s) {
  out << YAML::BeginMap;
  out << YAML::Key << "larmor_hz" << YAML::Value << s.larmor_hz;
  out << YAML::Key << "iso_shift_hz" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << s.iso_shift_hz[0] << s.iso_shift_hz[1] << YAML::EndSeq;
  out << YAML::Key << "csa" << YAML::Value << YAML::BeginSeq;
  for (const auto &c : s.csa) {
    out << YAML::BeginMap;
    out << YAML::Key << "aniso_hz" << YAML::Value << c.aniso_hz;
    out << YAML::Key << "eta" << YAML::Value << c.eta;
    out << YAML::Key << "euler_deg" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << c.euler_deg[0] << c.euler_deg[1] << c.euler_deg[2] << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "dipolar_b_hz" << YAML::Value << s.dipolar_b_hz;
  out << YAML::Key << "dipolar_euler_deg" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << s.dipolar_euler_deg[0] << s.dipolar_euler_deg[1] << s.dipolar_euler_deg[2]
      << YAML::EndSeq;
  out << YAML::EndMap;
}

void emit_axis(YAML::Emitter &out, const AxisSpec &a) {
  out << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "param" << YAML::Value << a.param;
  out << YAML::Key << "start" << YAML::Value << a.start;
  out << YAML::Key << "stop" << YAML::Value << a.stop;
  out << YAML::Key << "points" << YAML::Value << a.points;
  out << YAML::EndMap;
}

}  // namespace

ConfigError::ConfigError(const std::string &source, int line, const std::string &field,
                         const std::string &message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + field + ": " + message),
      line_(line),
      field_(field) {}

std::vector<double> AxisSpec::values() const {
  if (points < 1) throw std::invalid_argument("axis needs at least one point");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i)
    v[i] = points == 1 ? start : start + (stop - start) * i / (points - 1);
  if (points > 1) v.back() = stop;
  return v;
}

SpinBlock reference_spin_block() {
  SpinBlock s;
  s.larmor_hz = -176.1e6;
  s.dipolar_b_hz = -216.0;
  s.csa[0] = {10307.0, 0.60, {8.0, 90.0, 180.0}};
  s.csa[1] = {10307.0, 0.60, {8.0, 90.0, 0.0}};
  return s;
}

SpinSystem SpinBlock::to_system() const {
  SpinSystem s;
  s.larmor_hz = larmor_hz;
  s.iso_shift_hz = iso_shift_hz;
  for (int k = 0; k < 2; ++k)
    s.csa[k] = {csa[k].aniso_hz, csa[k].eta,
                {csa[k].euler_deg[0] * kDeg, csa[k].euler_deg[1] * kDeg,
                 csa[k].euler_deg[2] * kDeg}};
  s.dipolar_b_hz = dipolar_b_hz;
  s.dipolar_euler = {dipolar_euler_deg[0] * kDeg, dipolar_euler_deg[1] * kDeg,
                     dipolar_euler_deg[2] * kDeg};
  return s;
}

SimConfig SimBlock::to_config() const {
  SimConfig c;
  c.rotor_freq_hz = rotor_freq_hz;
  c.transmitter_offset_hz = transmitter_offset_hz;
  c.powder = powder;
  c.max_step = max_step_us * 1e-6;
  c.include_csa = include_csa;
  c.threads = threads;
  return c;
}

SequenceParams SequenceBlock::to_params() const {
  SequenceParams p;
  p.tau1 = tau1_us * 1e-6;
  p.tau2 = tau2_us * 1e-6;
  p.kappa1 = kappa1_hz;
  p.kappa2 = kappa2_hz;
  p.phi1 = phi1_deg * kDeg;
  p.phi2 = phi2_deg * kDeg;
  p.n_blocks = n_blocks;
  return p;
}

SequenceBlock SequenceBlock::defaults(double rotor_freq_hz, int n_blocks) {
  const C7Defaults d = c7_defaults(rotor_freq_hz);
  SequenceBlock b;
  b.tau1_us = b.tau2_us = d.tau_c * 1e6;
  b.kappa1_hz = b.kappa2_hz = d.kappa_c;
  b.n_blocks = n_blocks;
  return b;
}

ParameterSpace RunConfig::space() const {
  ParameterSpace s;
  s.base = params();
  s.genes = genes;
  s.tie_kappa2 = tie_kappa2;
  s.validate();
  return s;
}

SpinBlock parse_spin_block(const std::string &text, const std::string &source) {
  const Reader r(source);
  return read_spin(r, load_yaml(text, source), "");
}

SpinBlock load_spin_block(const std::string &path) { return parse_spin_block(read_file(path), path); }

std::string emit_spin_block(const SpinBlock &s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  emit_spin(out, s);
  return std::string(out.c_str()) + "\n";
}

RunConfig parse_config(const std::string &text, const std::string &source,
                       const std::string &base_dir) {
  const Reader r(source);
  YAML::Node root = load_yaml(text, source);
  RunConfig c;
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  r.allow_keys(root, "", {"spin", "simulation", "sequence", "bounds", "optimizer", "task"});

  if (const auto n = root["spin"]) {
    r.require_map(n, "spin");
    if (n["file"]) {
      r.allow_keys(n, "spin", {"file"});
      std::filesystem::path p = r.text(n["file"], "spin.file");
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      std::string body;
      try {
        body = read_file(p.string());
      } catch (const ConfigError &) {
        r.fail(n["file"], "spin.file", "cannot open '" + p.string() + "'");
      }
      c.spin = parse_spin_block(body, p.string());
    } else {
      c.spin = read_spin(r, n, "spin");
    }
  }

  if (const auto n = root["simulation"]) {
    const std::string path = "simulation";
    r.allow_keys(n, path,
                 {"rotor_freq_hz", "transmitter_offset_hz", "powder", "max_step_us",
                  "include_csa", "threads"});
    SimBlock &s = c.sim;
    r.opt(n, "rotor_freq_hz", path, s.rotor_freq_hz);
    r.check(n, "rotor_freq_hz", path, s.rotor_freq_hz > 0.0, "must be positive");
    r.opt(n, "transmitter_offset_hz", path, s.transmitter_offset_hz);
    r.opt(n, "max_step_us", path, s.max_step_us);
    r.check(n, "max_step_us", path, s.max_step_us >= 0.0, "must be non-negative");
    r.opt(n, "include_csa", path, s.include_csa);
    r.opt(n, "threads", path, s.threads);
    r.check(n, "threads", path, s.threads >= 1, "must be >= 1");
    if (const auto pw = n["powder"]) {
      const std::string pp = "simulation.powder";
      r.allow_keys(pw, pp, {"scheme", "orientations", "gamma_angles"});
      r.opt(pw, "scheme", pp, s.powder.scheme);
      r.opt(pw, "orientations", pp, s.powder.orientations);
      r.opt(pw, "gamma_angles", pp, s.powder.gamma_angles);
      try {
        make_powder(s.powder);
      } catch (const std::invalid_argument &e) {
        r.fail(pw, pp, e.what());
      }
    }
  }

  c.sequence = SequenceBlock::defaults(c.sim.rotor_freq_hz, 31);
  if (const auto n = root["sequence"]) {
    const std::string path = "sequence";
    r.allow_keys(n, path,
                 {"tau1_us", "tau2_us", "kappa1_hz", "kappa2_hz", "phi1_deg", "phi2_deg",
                  "n_blocks"});
    SequenceBlock &q = c.sequence;
    r.opt(n, "tau1_us", path, q.tau1_us);
    r.opt(n, "tau2_us", path, q.tau2_us);
    r.opt(n, "kappa1_hz", path, q.kappa1_hz);
    r.opt(n, "kappa2_hz", path, q.kappa2_hz);
    r.opt(n, "phi1_deg", path, q.phi1_deg);
    r.opt(n, "phi2_deg", path, q.phi2_deg);
    r.opt(n, "n_blocks", path, q.n_blocks);
    try {
      q.to_params().validate();
    } catch (const std::invalid_argument &e) {
      r.fail(n, path, e.what());
    }
  }

  for (const auto &name : sequence_param_names())
    c.genes.push_back(default_gene(name, c.sim.rotor_freq_hz));
  if (const auto n = root["bounds"]) {
    const std::string path = "bounds";
    r.allow_keys(n, path, {"genes", "tie_kappa2"});
    r.opt(n, "tie_kappa2", path, c.tie_kappa2);
    if (const auto g = n["genes"]) {
      if (!g.IsSequence() || g.size() == 0) r.fail(g, "bounds.genes", "expected a non-empty list");
      c.genes.clear();
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string gp = "bounds.genes[" + std::to_string(i) + "]";
        c.genes.push_back(read_gene(r, g[i], gp, c.sim.rotor_freq_hz));
        for (std::size_t j = 0; j < i; ++j)
          if (c.genes[j].name == c.genes[i].name) r.fail(g[i], gp, "duplicate gene");
      }
    }
  }

  if (const auto n = root["optimizer"]) {
    const std::string path = "optimizer";
    r.allow_keys(n, path,
                 {"method", "runs", "seed", "population_size", "generations", "eval_budget",
                  "crossover_prob", "mutation_prob", "elitism", "budget", "refine_budget"});
    OptimizeTask &o = c.optimize;
    r.opt(n, "method", path, o.method);
    r.check(n, "method", path,
            o.method == "ga" || o.method == "random" || o.method == "simplex" ||
                o.method == "quasi_newton",
            "expected ga, random, simplex or quasi_newton");
    r.opt(n, "runs", path, o.runs);
    r.check(n, "runs", path, o.runs >= 1, "must be >= 1");
    if (const auto s = n["seed"]) {
      const long long v = r.scalar<long long>(s, "optimizer.seed", "a non-negative integer");
      if (v < 0) r.fail(s, "optimizer.seed", "must be non-negative");
      o.ga.seed = static_cast<std::uint64_t>(v);
    }
    r.opt(n, "population_size", path, o.ga.population_size);
    r.opt(n, "generations", path, o.ga.generations);
    r.opt(n, "eval_budget", path, o.ga.eval_budget);
    r.opt(n, "crossover_prob", path, o.ga.crossover_prob);
    r.opt(n, "mutation_prob", path, o.ga.mutation_prob);
    r.opt(n, "elitism", path, o.ga.elitism);
    r.opt(n, "budget", path, o.budget);
    r.check(n, "budget", path, o.budget >= 1, "must be >= 1");
    r.opt(n, "refine_budget", path, o.refine_budget);
    r.check(n, "refine_budget", path, o.refine_budget >= 0, "must be non-negative");
    try {
      o.ga.validate();
    } catch (const std::invalid_argument &e) {
      r.fail(n, path, e.what());
    }
  }

  if (const auto n = root["task"]) {
    const std::string path = "task";
    r.allow_keys(n, path, {"run", "buildup", "scan1d", "scan2d", "offset", "speedstudy"});
    if (const auto run = n["run"]) {
      if (!run.IsSequence()) r.fail(run, "task.run", "expected a list of task names");
      for (std::size_t i = 0; i < run.size(); ++i) {
        const std::string t = r.text(run[i], "task.run");
        const auto &names = task_names();
        if (std::find(names.begin(), names.end(), t) == names.end())
          r.fail(run[i], "task.run", "unknown task '" + t + "'");
        c.tasks.push_back(t);
      }
    }
    if (const auto b = n["buildup"]) {
      const std::string bp = "task.buildup";
      r.allow_keys(b, bp, {"n_first", "n_last", "both_csa_modes"});
      r.opt(b, "n_first", bp, c.buildup.n_first);
      r.opt(b, "n_last", bp, c.buildup.n_last);
      r.opt(b, "both_csa_modes", bp, c.buildup.both_csa_modes);
      r.check(b, "n_last", bp, c.buildup.n_first >= 1 && c.buildup.n_last >= c.buildup.n_first,
              "need 1 <= n_first <= n_last");
    }
    if (const auto s = n["scan1d"]) c.scan1d.axis = read_axis(r, s, "task.scan1d", c.scan1d.axis, false);
    if (const auto s = n["scan2d"]) {
      r.allow_keys(s, "task.scan2d", {"x", "y"});
      if (s["x"]) c.scan2d.x = read_axis(r, s["x"], "task.scan2d.x", c.scan2d.x, false);
      if (s["y"]) c.scan2d.y = read_axis(r, s["y"], "task.scan2d.y", c.scan2d.y, false);
    }
    if (const auto s = n["offset"]) c.offset.axis = read_axis(r, s, "task.offset", c.offset.axis, true);
    if (const auto s = n["speedstudy"]) {
      const std::string sp = "task.speedstudy";
      r.allow_keys(s, sp,
                   {"speeds_hz", "dtau1_start", "dtau1_stop", "dtau1_points", "texc_min_ms",
                    "texc_max_ms"});
      SpeedTask &t = c.speedstudy;
      if (const auto v = s["speeds_hz"]) {
        if (!v.IsSequence() || v.size() == 0)
          r.fail(v, sp + ".speeds_hz", "expected a non-empty list");
        t.speeds_hz.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
          t.speeds_hz.push_back(r.number(v[i], sp + ".speeds_hz"));
          if (!(t.speeds_hz.back() > 0.0)) r.fail(v[i], sp + ".speeds_hz", "must be positive");
        }
      }
      r.opt(s, "dtau1_start", sp, t.dtau1_start);
      r.opt(s, "dtau1_stop", sp, t.dtau1_stop);
      r.opt(s, "dtau1_points", sp, t.dtau1_points);
      r.check(s, "dtau1_points", sp, t.dtau1_points >= 1, "must be >= 1");
      r.opt(s, "texc_min_ms", sp, t.texc_min_ms);
      r.opt(s, "texc_max_ms", sp, t.texc_max_ms);
      r.check(s, "texc_max_ms", sp, t.texc_min_ms >= 0.0 && t.texc_max_ms > t.texc_min_ms,
              "need 0 <= texc_min_ms < texc_max_ms");
    }
  }
  return c;
}

RunConfig load_config(const std::string &path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(read_file(path), path, dir.empty() ? "." : dir);
}

std::string emit_config(const RunConfig &c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "spin" << YAML::Value;
  emit_spin(out, c.spin);

  out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rotor_freq_hz" << YAML::Value << c.sim.rotor_freq_hz;
  out << YAML::Key << "transmitter_offset_hz" << YAML::Value << c.sim.transmitter_offset_hz;
  out << YAML::Key << "powder" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "scheme" << YAML::Value << c.sim.powder.scheme;
  out << YAML::Key << "orientations" << YAML::Value << c.sim.powder.orientations;
  out << YAML::Key << "gamma_angles" << YAML::Value << c.sim.powder.gamma_angles;
  out << YAML::EndMap;
  out << YAML::Key << "max_step_us" << YAML::Value << c.sim.max_step_us;
  out << YAML::Key << "include_csa" << YAML::Value << c.sim.include_csa;
  out << YAML::Key << "threads" << YAML::Value << c.sim.threads;
  out << YAML::EndMap;

  const SequenceBlock &q = c.sequence;
  out << YAML::Key << "sequence" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tau1_us" << YAML::Value << q.tau1_us;
  out << YAML::Key << "tau2_us" << YAML::Value << q.tau2_us;
  out << YAML::Key << "kappa1_hz" << YAML::Value << q.kappa1_hz;
  out << YAML::Key << "kappa2_hz" << YAML::Value << q.kappa2_hz;
  out << YAML::Key << "phi1_deg" << YAML::Value << q.phi1_deg;
  out << YAML::Key << "phi2_deg" << YAML::Value << q.phi2_deg;
  out << YAML::Key << "n_blocks" << YAML::Value << q.n_blocks;
  out << YAML::EndMap;

  out << YAML::Key << "bounds" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tie_kappa2" << YAML::Value << c.tie_kappa2;
  out << YAML::Key << "genes" << YAML::Value << YAML::BeginSeq;
  for (const auto &g : c.genes) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << g.name;
    out << YAML::Key << "lower" << YAML::Value << g.lower;
    out << YAML::Key << "upper" << YAML::Value << g.upper;
    out << YAML::Key << "bits" << YAML::Value << g.bit_depth;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  const OptimizeTask &o = c.optimize;
  out << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value << o.method;
  out << YAML::Key << "runs" << YAML::Value << o.runs;
  out << YAML::Key << "seed" << YAML::Value << static_cast<unsigned long long>(o.ga.seed);
  out << YAML::Key << "population_size" << YAML::Value << o.ga.population_size;
  out << YAML::Key << "generations" << YAML::Value << o.ga.generations;
  out << YAML::Key << "eval_budget" << YAML::Value << o.ga.eval_budget;
  out << YAML::Key << "crossover_prob" << YAML::Value << o.ga.crossover_prob;
  out << YAML::Key << "mutation_prob" << YAML::Value << o.ga.mutation_prob;
  out << YAML::Key << "elitism" << YAML::Value << o.ga.elitism;
  out << YAML::Key << "budget" << YAML::Value << o.budget;
  out << YAML::Key << "refine_budget" << YAML::Value << o.refine_budget;
  out << YAML::EndMap;

  out << YAML::Key << "task" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "run" << YAML::Value << YAML::Flow << c.tasks;
  out << YAML::Key << "buildup" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "n_first" << YAML::Value << c.buildup.n_first;
  out << YAML::Key << "n_last" << YAML::Value << c.buildup.n_last;
  out << YAML::Key << "both_csa_modes" << YAML::Value << c.buildup.both_csa_modes;
  out << YAML::EndMap;
  out << YAML::Key << "scan1d" << YAML::Value;
  emit_axis(out, c.scan1d.axis);
  out << YAML::Key << "scan2d" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "x" << YAML::Value;
  emit_axis(out, c.scan2d.x);
  out << YAML::Key << "y" << YAML::Value;
  emit_axis(out, c.scan2d.y);
  out << YAML::EndMap;
  out << YAML::Key << "offset" << YAML::Value;
  emit_axis(out, c.offset.axis);
  const SpeedTask &t = c.speedstudy;
  out << YAML::Key << "speedstudy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "speeds_hz" << YAML::Value << YAML::Flow << t.speeds_hz;
  out << YAML::Key << "dtau1_start" << YAML::Value << t.dtau1_start;
  out << YAML::Key << "dtau1_stop" << YAML::Value << t.dtau1_stop;
  out << YAML::Key << "dtau1_points" << YAML::Value << t.dtau1_points;
  out << YAML::Key << "texc_min_ms" << YAML::Value << t.texc_min_ms;
  out << YAML::Key << "texc_max_ms" << YAML::Value << t.texc_max_ms;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace c7ga
