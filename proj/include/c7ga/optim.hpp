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

// Bit-string genetic algorithm and the baseline optimizers.
//
// Every optimizer minimizes an objective f(x) over real vectors. The GA and
// random search work inside gene bounds; the simplex and quasi-Newton
// methods are unconstrained.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace c7ga {

using BitString = std::vector<std::uint8_t>;
using Objective = std::function<double(const std::vector<double> &)>;

/// One decision variable, encoded as an unsigned binary integer k in
/// [0, 2^bits - 1] that maps linearly onto [lower, upper].
struct GeneSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  int bit_depth = 16;
  /// decoded values are rounded to integers
  bool integer = false;

  void validate() const;
  bool operator==(const GeneSpec &) const = default;
};

GeneSpec float_gene(std::string name, double lower, double upper, int bits = 16);
/// Integer range [lower, upper] with ceil(log2(upper - lower)) bits; every
/// integer in the range survives an encode/decode round trip.
GeneSpec integer_gene(std::string name, int lower, int upper);

/// Throws std::invalid_argument when value lies outside the bounds.
BitString encode(double value, const GeneSpec &spec);
double decode(std::span<const std::uint8_t> bits, const GeneSpec &spec);

std::size_t genome_length(std::span<const GeneSpec> specs);
BitString encode_all(std::span<const double> values, std::span<const GeneSpec> specs);
std::vector<double> decode_all(std::span<const std::uint8_t> bits, std::span<const GeneSpec> specs);

/// Seeded 64-bit Mersenne twister with portable derived draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// uniform on [0, 1)
  double uniform();
  /// uniform integer on [0, n)
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct GAConfig {
  int population_size = 50;
  int generations = 30;
  int eval_budget = 1500;
  double crossover_prob = 0.6;
  double mutation_prob = 0.01;
  int elitism = 1;
  std::uint64_t seed = 1;
  /// concurrent objective calls inside a generation
  int threads = 1;

  void validate() const;
  bool operator==(const GAConfig &) const = default;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  /// cumulative objective calls
  int evaluations = 0;

  bool operator==(const GenerationStats &) const = default;
};

struct RunRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::vector<GenerationStats> history;
  std::vector<double> best_x;
  /// empty for methods without an encoding
  BitString best_bits;
  double best_fitness = 0.0;
  int evaluations = 0;
  /// set when the objective threw; the record is partial
  std::string error;

  bool operator==(const RunRecord &) const = default;
};

/// Index drawn with probability (2 - f_i) / sum (2 - f_j); uniform when all
/// weights vanish. f values are clamped to [0, 2].
std::size_t roulette_select(std::span<const double> fitness, Rng &rng);

/// Children exchange the suffixes starting at cut, 1 <= cut <= L - 1.
std::pair<BitString, BitString> crossover_at(const BitString &a, const BitString &b,
                                             std::size_t cut);
/// Cut drawn uniformly from [1, L - 1].
std::pair<BitString, BitString> one_point_crossover(const BitString &a, const BitString &b,
                                                    Rng &rng);

/// Each bit toggled independently with probability p_m.
BitString flip_mutate(BitString bits, double p_m, Rng &rng);

/// Generational GA with roulette selection, one-point crossover, flip
/// mutation and elitism. Fitness is memoized by bit pattern, so repeated
/// genomes and carried elites cost no evaluations.
RunRecord ga_run(const GAConfig &cfg, std::span<const GeneSpec> specs, const Objective &f);

/// Uniform sampling inside the gene bounds (integers uniform over the
/// range). History entries cover `report_every` samples each.
RunRecord random_search(int budget, std::span<const GeneSpec> specs, const Objective &f,
                        std::uint64_t seed, int report_every = 50);

struct SimplexOptions {
  int budget = 1500;
  /// stop when the spread of simplex values and the simplex size both fall below
  double f_tol = 1e-12;
  double x_tol = 1e-10;
};

/// Nelder-Mead with reflection 1, expansion 2, contraction 1/2, shrink 1/2.
/// The initial simplex is x0 plus x0 + steps_i e_i.
RunRecord nelder_mead(const Objective &f, std::vector<double> x0, std::span<const double> steps,
                      const SimplexOptions &opt = {});

struct QuasiNewtonOptions {
  int budget = 1500;
  /// central-difference step per coordinate
  std::vector<double> fd_step;
  double g_tol = 1e-8;
};

struct QuasiNewtonResult {
  RunRecord record;
  /// final inverse-Hessian estimate, row-major n x n
  std::vector<double> inverse_hessian;
  /// times the metric was reset to identity
  int resets = 0;
};

/// BFGS on central-difference gradients with backtracking line search.
QuasiNewtonResult quasi_newton_fd(const Objective &f, std::vector<double> x0,
                                  const QuasiNewtonOptions &opt);

/// Central-difference gradient, 2 n evaluations.
std::vector<double> fd_gradient(const Objective &f, std::span<const double> x,
                                std::span<const double> h);

/// Fraction of records whose best efficiency (1 - best_fitness) exceeds threshold.
double success_rate(std::span<const RunRecord> records, double threshold = 0.5);

}  // namespace c7ga
