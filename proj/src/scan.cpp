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

#include "c7ga/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace c7ga {

namespace {

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double parse_number(const std::string &s) {
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("bad CSV number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

AxisSpec axis_from(const std::string &param, const std::vector<double> &v) {
  if (v.empty()) throw std::invalid_argument("CSV axis '" + param + "' is empty");
  return {param, v.front(), v.back(), static_cast<int>(v.size())};
}

void check_axis(const AxisSpec &a) {
  if (a.param != "offset" && !is_sequence_param(a.param))
    throw std::invalid_argument("unknown scan parameter '" + a.param + "'");
  if (a.points < 1) throw std::invalid_argument("scan axis '" + a.param + "' needs points >= 1");
}

std::vector<int> block_counts(const std::vector<double> &v) {
  std::vector<int> n;
  for (double x : v) {
    const long r = std::lround(x);
    if (std::abs(x - r) > 1e-9 || r < 1)
      throw std::invalid_argument("n_blocks axis values must be integers >= 1");
    n.push_back(static_cast<int>(r));
  }
  return n;
}

void assign(const std::string &name, double v, SequenceParams &p, double &offset) {
  if (name == "offset")
    offset += v;
  else
    set_param(p, name, v);
}

ScanGrid run_scan(const AxisSpec &x, const std::optional<AxisSpec> &y, const SequenceParams &base,
                  const SpinSystem &sys, const SimConfig &cfg) {
  check_axis(x);
  if (y) {
    check_axis(*y);
    if (y->param == x.param) throw std::invalid_argument("both scan axes are '" + x.param + "'");
  }
  ScanGrid g{x, y, {}};
  const int nx = x.points;
  const int ny = g.rows();
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  const std::vector<double> xs = x.values();
  const std::vector<double> ys = y ? y->values() : std::vector<double>{0.0};
  auto cell = [&](int ix, int iy) -> double & { return g.values[static_cast<std::size_t>(iy) * nx + ix]; };

  const bool any_offset = x.param == "offset" || (y && y->param == "offset");
  std::optional<DqfExperiment> shared;
  if (!any_offset) shared.emplace(sys, cfg);
  std::optional<DqfExperiment> local;
  double local_offset = 0.0;
  auto experiment = [&](double offset) -> const DqfExperiment & {
    if (shared) return *shared;
    if (!local || local_offset != offset) {
      local.emplace(sys.with_offset(offset), cfg);
      local_offset = offset;
    }
    return *local;
  };

  const bool x_is_n = x.param == "n_blocks";
  const bool y_is_n = y && y->param == "n_blocks";
  if (x_is_n || y_is_n) {
    const std::vector<int> ns = block_counts(x_is_n ? xs : ys);
    const auto &other = x_is_n ? ys : xs;
    const std::string other_name = x_is_n ? (y ? y->param : "") : x.param;
    const auto [lo, hi] = std::minmax_element(ns.begin(), ns.end());
    const int n_min = *lo;
    const int n_max = *hi;
    for (std::size_t io = 0; io < other.size(); ++io) {
      SequenceParams p = base;
      double offset = 0.0;
      if (!other_name.empty()) assign(other_name, other[io], p, offset);
      const auto curve = experiment(offset).buildup(p, n_min, n_max);
      for (std::size_t in = 0; in < ns.size(); ++in) {
        const double e = curve[ns[in] - n_min].efficiency;
        if (x_is_n)
          cell(static_cast<int>(in), static_cast<int>(io)) = e;
        else
          cell(static_cast<int>(io), static_cast<int>(in)) = e;
      }
    }
  } else {
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        SequenceParams p = base;
        double offset = 0.0;
        assign(x.param, xs[ix], p, offset);
        if (y) assign(y->param, ys[iy], p, offset);
        cell(ix, iy) = experiment(offset).evaluate(p).efficiency;
      }
  }
  g.validate();
  return g;
}

}  // namespace

void ScanGrid::validate() const {
  if (x.points < 1 || (y && y->points < 1)) throw std::invalid_argument("scan axis without points");
  if (values.size() != static_cast<std::size_t>(x.points) * rows())
    throw std::invalid_argument("scan matrix does not match its axes");
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError("non-finite efficiency in scan grid");
}

std::string ScanGrid::to_csv(int digits) const {
  validate();
  std::string out;
  const std::vector<double> xs = x.values();
  if (!y) {
    out = x.param + ",efficiency\n";
    for (int i = 0; i < x.points; ++i) out += fmt(xs[i], 17) + "," + fmt(values[i], digits) + "\n";
    return out;
  }
  const std::vector<double> ys = y->values();
  out = y->param + "\\" + x.param;
  for (double v : xs) out += "," + fmt(v, 17);
  out += "\n";
  for (int j = 0; j < y->points; ++j) {
    out += fmt(ys[j], 17);
    for (int i = 0; i < x.points; ++i) out += "," + fmt(at(i, j), digits);
    out += "\n";
  }
  return out;
}

ScanGrid ScanGrid::from_csv(const std::string &text) {
  std::stringstream ss(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(split(line));
  }
  if (rows.size() < 2) throw std::invalid_argument("scan CSV needs a header and data rows");
  const auto &head = rows.front();
  ScanGrid g;
  if (head.size() == 2 && head[1] == "efficiency") {
    std::vector<double> xs;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != 2) throw std::invalid_argument("ragged scan CSV");
      xs.push_back(parse_number(rows[r][0]));
      g.values.push_back(parse_number(rows[r][1]));
    }
    g.x = axis_from(head[0], xs);
  } else {
    const auto slash = head[0].find('\\');
    if (slash == std::string::npos || head.size() < 2)
      throw std::invalid_argument("unrecognized scan CSV header");
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i < head.size(); ++i) xs.push_back(parse_number(head[i]));
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != head.size()) throw std::invalid_argument("ragged scan CSV");
      ys.push_back(parse_number(rows[r][0]));
      for (std::size_t i = 1; i < rows[r].size(); ++i) g.values.push_back(parse_number(rows[r][i]));
    }
    g.x = axis_from(head[0].substr(slash + 1), xs);
    g.y = axis_from(head[0].substr(0, slash), ys);
  }
  g.validate();
  return g;
}

ScanGrid scan_1d(const AxisSpec &axis, const SequenceParams &base, const SpinSystem &sys,
                 const SimConfig &cfg) {
  return run_scan(axis, std::nullopt, base, sys, cfg);
}

ScanGrid scan_2d(const AxisSpec &x, const AxisSpec &y, const SequenceParams &base,
                 const SpinSystem &sys, const SimConfig &cfg) {
  return run_scan(x, y, base, sys, cfg);
}

GridMaximum locate_maximum(const ScanGrid &g, int first_column) {
  g.validate();
  if (first_column < 0 || first_column >= g.x.points)
    throw std::invalid_argument("first_column outside the grid");
  GridMaximum m{first_column, 0, g.at(first_column, 0), false};
  for (int iy = 0; iy < g.rows(); ++iy)
    for (int ix = first_column; ix < g.x.points; ++ix)
      if (g.at(ix, iy) > m.value) m = {ix, iy, g.at(ix, iy), false};
  const int ix = m.ix, iy = m.iy;
  bool ok = ix > first_column && ix + 1 < g.x.points && g.at(ix - 1, iy) < m.value &&
            g.at(ix + 1, iy) < m.value;
  if (g.y) ok = ok && iy > 0 && iy + 1 < g.rows() && g.at(ix, iy - 1) < m.value &&
                g.at(ix, iy + 1) < m.value;
  m.certified = ok;
  return m;
}

}  // namespace c7ga
