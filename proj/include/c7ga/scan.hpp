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

// Efficiency landscapes over one or two parameter axes.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "c7ga/config.hpp"

namespace c7ga {

struct ScanGrid {
  AxisSpec x;
  /// absent for one-dimensional scans
  std::optional<AxisSpec> y;
  /// row-major, y outer: values[iy * x.points + ix]
  std::vector<double> values;

  int rows() const { return y ? y->points : 1; }
  double at(int ix, int iy = 0) const { return values[static_cast<std::size_t>(iy) * x.points + ix]; }
  /// throws std::invalid_argument on a size mismatch, NumericalError on a non-finite cell
  void validate() const;

  /// Axis coordinates at 17 significant digits, cells at `digits`.
  /// 1D: header "<param>,efficiency", one row per point.
  /// 2D: header "<y>\<x>,x0,x1,...", then "y_j,v_0j,v_1j,...".
  std::string to_csv(int digits = 6) const;
  static ScanGrid from_csv(const std::string &text);

  bool operator==(const ScanGrid &) const = default;
};

/// Each cell is a full evaluation with all other parameters at `base`.
/// Axis parameters are sequence parameters (external units) or "offset",
/// which displaces both isotropic shifts. An n_blocks axis is computed from
/// one buildup per column and must hold integers >= 1.
ScanGrid scan_1d(const AxisSpec &axis, const SequenceParams &base, const SpinSystem &sys,
                 const SimConfig &cfg);
ScanGrid scan_2d(const AxisSpec &x, const AxisSpec &y, const SequenceParams &base,
                 const SpinSystem &sys, const SimConfig &cfg);

/// Maximum over the columns ix >= first_column and whether every neighbour
/// (two in 1D, four in 2D) exists and lies strictly below it.
struct GridMaximum {
  int ix = 0;
  int iy = 0;
  double value = 0.0;
  bool certified = false;
};
GridMaximum locate_maximum(const ScanGrid &g, int first_column = 0);

}  // namespace c7ga
