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

#include <vector>

namespace c7ga {

/// Piecewise-constant r.f. event.
struct PulseEvent {
  double amplitude_hz = 0.0;
  /// radians
  double phase = 0.0;
  /// seconds
  double duration = 0.0;

  bool operator==(const PulseEvent &) const = default;
};

using PulseSequence = std::vector<PulseEvent>;

}  // namespace c7ga
