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

#include "c7ga/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c7ga {

namespace {

constexpr double kDeg = kPi / 180.0;
constexpr double kMicro = 1e-6;

bool physical(const SequenceParams &p) {
  return p.tau1 > 0.0 && p.tau2 > 0.0 && p.kappa1 > 0.0 && p.kappa2 > 0.0 && p.n_blocks >= 1 &&
         std::isfinite(p.phi1) && std::isfinite(p.phi2);
}

}  // namespace

const std::vector<std::string> &sequence_param_names() {
  static const std::vector<std::string> names{"tau1", "tau2", "kappa1", "kappa2",
                                              "phi1", "phi2", "n_blocks"};
  return names;
}

bool is_sequence_param(std::string_view name) {
  const auto &n = sequence_param_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

double get_param(const SequenceParams &p, std::string_view name) {
  if (name == "tau1") return p.tau1 / kMicro;
  if (name == "tau2") return p.tau2 / kMicro;
  if (name == "kappa1") return p.kappa1;
  if (name == "kappa2") return p.kappa2;
  if (name == "phi1") return p.phi1 / kDeg;
  if (name == "phi2") return p.phi2 / kDeg;
  if (name == "n_blocks") return p.n_blocks;
  throw std::invalid_argument("unknown sequence parameter '" + std::string(name) + "'");
}

void set_param(SequenceParams &p, std::string_view name, double value) {
  if (name == "tau1") p.tau1 = value * kMicro;
  else if (name == "tau2") p.tau2 = value * kMicro;
  else if (name == "kappa1") p.kappa1 = value;
  else if (name == "kappa2") p.kappa2 = value;
  else if (name == "phi1") p.phi1 = value * kDeg;
  else if (name == "phi2") p.phi2 = value * kDeg;
  else if (name == "n_blocks") p.n_blocks = static_cast<int>(std::lround(value));
  else throw std::invalid_argument("unknown sequence parameter '" + std::string(name) + "'");
}

GeneSpec default_gene(std::string_view name, double rotor_freq_hz) {
  const C7Defaults d = c7_defaults(rotor_freq_hz);
  const std::string n(name);
  if (name == "tau1" || name == "tau2") {
    const double c = d.tau_c / kMicro;
    return float_gene(n, c - 5.0, c + 5.0);
  }
  if (name == "kappa1" || name == "kappa2")
    return float_gene(n, 0.9 * d.kappa_c, 1.1 * d.kappa_c);
  if (name == "phi1" || name == "phi2") return float_gene(n, -10.0, 10.0);
  if (name == "n_blocks") return integer_gene(n, 11, 51);
  throw std::invalid_argument("unknown sequence parameter '" + n + "'");
}

void ParameterSpace::validate() const {
  base.validate();
  if (genes.empty()) throw std::invalid_argument("parameter space has no genes");
  for (std::size_t i = 0; i < genes.size(); ++i) {
    genes[i].validate();
    if (!is_sequence_param(genes[i].name))
      throw std::invalid_argument("unknown sequence parameter '" + genes[i].name + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (genes[j].name == genes[i].name)
        throw std::invalid_argument("duplicate gene '" + genes[i].name + "'");
  }
}

SequenceParams ParameterSpace::apply(std::span<const double> values) const {
  if (values.size() != genes.size()) throw std::invalid_argument("value/gene count mismatch");
  SequenceParams p = base;
  for (std::size_t i = 0; i < genes.size(); ++i) set_param(p, genes[i].name, values[i]);
  if (tie_kappa2) p.kappa2 = p.kappa1;
  return p;
}

std::vector<double> ParameterSpace::values_of(const SequenceParams &p) const {
  std::vector<double> out;
  for (const auto &g : genes) out.push_back(get_param(p, g.name));
  return out;
}

std::vector<double> ParameterSpace::half_widths() const {
  std::vector<double> out;
  for (const auto &g : genes) out.push_back(0.5 * (g.upper - g.lower));
  return out;
}

std::vector<double> ParameterSpace::to_unit(std::span<const double> values) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < genes.size(); ++i)
    out.push_back((values[i] - genes[i].lower) / (genes[i].upper - genes[i].lower));
  return out;
}

std::vector<double> ParameterSpace::from_unit(std::span<const double> unit) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < genes.size(); ++i)
    out.push_back(genes[i].lower + unit[i] * (genes[i].upper - genes[i].lower));
  return out;
}

ParameterSpace make_space(double rotor_freq_hz, int n_blocks, const std::vector<std::string> &names,
                          bool tie_kappa2) {
  ParameterSpace s;
  s.base = default_params(rotor_freq_hz, n_blocks);
  for (const auto &n : names) s.genes.push_back(default_gene(n, rotor_freq_hz));
  s.tie_kappa2 = tie_kappa2;
  s.validate();
  return s;
}

Objective dqf_objective(const DqfExperiment &exp, const ParameterSpace &space) {
  space.validate();
  return [&exp, space](const std::vector<double> &x) {
    const SequenceParams p = space.apply(x);
    if (!physical(p)) return 2.0;
    return exp.evaluate(p).fitness;
  };
}

Objective dqf_unit_objective(const DqfExperiment &exp, const ParameterSpace &space) {
  Objective inner = dqf_objective(exp, space);
  return [inner, space](const std::vector<double> &u) { return inner(space.from_unit(u)); };
}

}  // namespace c7ga
