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

// Sequence parameters as optimizer variables.
//
// External units: tau in microseconds, kappa in Hz, phi in degrees (offset
// from the C-element baseline), n_blocks as a count.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "c7ga/experiment.hpp"
#include "c7ga/optim.hpp"
#include "c7ga/sequence.hpp"

namespace c7ga {

/// tau1, tau2, kappa1, kappa2, phi1, phi2, n_blocks
const std::vector<std::string> &sequence_param_names();
bool is_sequence_param(std::string_view name);

/// Value of a named parameter in external units.
double get_param(const SequenceParams &p, std::string_view name);
/// n_blocks is rounded to the nearest integer.
void set_param(SequenceParams &p, std::string_view name, double value);

/// Bounds centred on the C7 defaults: tau +-5 us, kappa +-kappa_c/10, phi
/// +-10 degrees, n_blocks 31 +-20. Floats get 16 bits.
GeneSpec default_gene(std::string_view name, double rotor_freq_hz);

struct ParameterSpace {
  SequenceParams base;
  std::vector<GeneSpec> genes;
  /// kappa2 follows kappa1 (only meaningful when kappa1 is a gene)
  bool tie_kappa2 = false;

  void validate() const;
  SequenceParams apply(std::span<const double> values) const;
  std::vector<double> values_of(const SequenceParams &p) const;
  std::vector<double> half_widths() const;
  /// (v - lower) / (upper - lower), per gene
  std::vector<double> to_unit(std::span<const double> values) const;
  std::vector<double> from_unit(std::span<const double> unit) const;
};

/// Space over the named genes at the default bounds, base = C7 defaults.
ParameterSpace make_space(double rotor_freq_hz, int n_blocks, const std::vector<std::string> &names,
                          bool tie_kappa2 = false);

/// Fitness 1 - efficiency of the decoded sequence. Parameter sets that are
/// not physical (non-positive tau or kappa, n_blocks < 1) score 2.
Objective dqf_objective(const DqfExperiment &exp, const ParameterSpace &space);
/// Same in unit coordinates, for the unconstrained optimizers.
Objective dqf_unit_objective(const DqfExperiment &exp, const ParameterSpace &space);

}  // namespace c7ga
