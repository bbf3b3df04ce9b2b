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

#pragma once

#include <string>
#include <vector>

#include "c7ga/spin.hpp"

namespace c7ga {

struct Crystallite {
  Orientation angles;
  double weight = 0.0;
};

/// Powder averaging scheme: a named (alpha, beta) set crossed with a uniform
/// gamma grid.
///
///   "zcw"    Zaremba-Conroy-Wolfsberg full-sphere set; the (alpha, beta) count
///            must be a Fibonacci number >= 5 (21, 34, 55, 89, 144, 233, ...).
///   "single" one orientation (all angles zero); gamma grid still applied.
struct PowderSpec {
  std::string scheme = "zcw";
  int orientations = 144;
  int gamma_angles = 8;

  bool operator==(const PowderSpec &) const = default;
};

/// Throws std::invalid_argument for unknown schemes or counts.
std::vector<Crystallite> make_powder(const PowderSpec &spec);

bool is_fibonacci(int n);

}  // namespace c7ga
