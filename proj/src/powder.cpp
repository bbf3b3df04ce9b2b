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

#include "c7ga/powder.hpp"

#include <cmath>
#include <stdexcept>

namespace c7ga {

namespace {

// Returns F(m) such that F(m + 2) == n, or -1.
long fibonacci_generator(int n) {
  long a = 1, b = 1, c = 2;  // F(1), F(2), F(3)
  while (c < n) {
    a = b;
    b = c;
    c = a + b;
  }
  return c == n ? a : -1;
}

std::vector<Orientation> zcw_alpha_beta(int n) {
  const long g = fibonacci_generator(n);
  if (n < 5 || g < 0)
    throw std::invalid_argument("zcw orientation count must be a Fibonacci number >= 5");
  std::vector<Orientation> out;
  out.reserve(n);
  for (long j = 0; j < n; ++j) {
    const double fa = std::fmod(static_cast<double>(j * g) / n, 1.0);
    const double fb = static_cast<double>(j) / n;
    out.push_back({kTwoPi * fa, std::acos(2.0 * fb - 1.0), 0.0});
  }
  return out;
}

}  // namespace

bool is_fibonacci(int n) { return n >= 1 && (n == 1 || fibonacci_generator(n) >= 0); }

std::vector<Crystallite> make_powder(const PowderSpec &spec) {
  if (spec.gamma_angles < 1) throw std::invalid_argument("gamma_angles must be at least 1");
  std::vector<Orientation> ab;
  if (spec.scheme == "zcw") {
    ab = zcw_alpha_beta(spec.orientations);
  } else if (spec.scheme == "single") {
    ab.push_back({});
  } else {
    throw std::invalid_argument("unknown powder scheme '" + spec.scheme + "'");
  }
  std::vector<Crystallite> out;
  out.reserve(ab.size() * spec.gamma_angles);
  const double w = 1.0 / (static_cast<double>(ab.size()) * spec.gamma_angles);
  for (const auto &o : ab)
    for (int k = 0; k < spec.gamma_angles; ++k)
      out.push_back({{o.alpha, o.beta, kTwoPi * k / spec.gamma_angles}, w});
  return out;
}

}  // namespace c7ga
