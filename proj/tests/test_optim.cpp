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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "c7ga/optim.hpp"

using namespace c7ga;

namespace {

std::vector<GeneSpec> bit_genes(int n) {
  std::vector<GeneSpec> g;
  for (int i = 0; i < n; ++i) g.push_back(integer_gene("b" + std::to_string(i), 0, 1));
  return g;
}

// Minimised OneMax scaled to [0, 2]: the roulette weight 2 - f is 2 weight / L.
double onemax(const std::vector<double> &x) {
  return 2.0 - 2.0 * std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double rosenbrock(const std::vector<double> &x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

}  // namespace

TEST_CASE("16-bit quantization of the tau bounds") {
  const GeneSpec g = float_gene("tau1", 9.0, 19.0);
  const BitString b = encode(14.0, g);
  REQUIRE(b.size() == 16u);
  std::uint32_t k = 0;
  for (auto bit : b) k = 2 * k + bit;
  CHECK((k == 32767u || k == 32768u));
  CHECK(std::abs(decode(b, g) - 14.0) < 0.16e-3);
  CHECK(encode(9.0, g) == BitString(16, 0));
  CHECK(encode(19.0, g) == BitString(16, 1));
  CHECK_THROWS_AS(encode(19.5, g), std::invalid_argument);
}

TEST_CASE("encode/decode error stays within one quantum and decode is a retraction") {
  const GeneSpec g = float_gene("kappa1", 64285.0, 78569.0);
  const double quantum = (g.upper - g.lower) / 65535.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = g.lower + (g.upper - g.lower) * i / 1000.0;
    CHECK(std::abs(decode(encode(v, g), g) - v) <= 0.5 * quantum * (1 + 1e-9));
  }
  const GeneSpec small = float_gene("phi", -10.0, 10.0, 6);
  for (std::uint32_t k = 0; k < 64; ++k) {
    BitString b(6);
    for (int j = 0; j < 6; ++j) b[j] = (k >> (5 - j)) & 1;
    const double d = decode(b, small);
    CHECK(decode(encode(d, small), small) == d);
  }
}

TEST_CASE("integer genes cover their range exactly") {
  const GeneSpec g = integer_gene("n_blocks", 11, 51);
  CHECK(g.bit_depth == 6);
  for (int n = 11; n <= 51; ++n) CHECK(decode(encode(n, g), g) == n);
  for (std::uint32_t k = 0; k < 64; ++k) {
    BitString b(6);
    for (int j = 0; j < 6; ++j) b[j] = (k >> (5 - j)) & 1;
    const double d = decode(b, g);
    CHECK(d == std::round(d));
    CHECK(d >= 11);
    CHECK(d <= 51);
  }
}

TEST_CASE("roulette frequencies follow the 2 - f weights") {
  const std::vector<double> f{0.5, 1.0, 1.5};
  Rng rng(99);
  const int draws = 1000000;
  std::vector<int> count(3, 0);
  for (int i = 0; i < draws; ++i) ++count[roulette_select(f, rng)];
  const double p[3] = {1.5 / 3, 1.0 / 3, 0.5 / 3};
  for (int k = 0; k < 3; ++k) {
    const double sigma = std::sqrt(draws * p[k] * (1 - p[k]));
    CHECK(std::abs(count[k] - draws * p[k]) < 3 * sigma);
  }
  const std::vector<double> dead{2.0, 2.0};
  int zero = 0;
  for (int i = 0; i < 1000; ++i) zero += roulette_select(dead, rng) == 0;
  CHECK(zero > 400);
  CHECK(zero < 600);
}

TEST_CASE("mutation flips follow the binomial law") {
  Rng rng(5);
  const BitString zeros(112, 0);
  CHECK(flip_mutate(zeros, 0.0, rng) == zeros);
  CHECK(flip_mutate(zeros, 1.0, rng) == BitString(112, 1));
  const int trials = 100000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const BitString m = flip_mutate(zeros, 0.01, rng);
    REQUIRE(m.size() == 112u);
    sum += std::accumulate(m.begin(), m.end(), 0);
  }
  const double mean = 1.12, sigma = std::sqrt(112 * 0.01 * 0.99 / trials);
  CHECK(std::abs(sum / trials - mean) < 3 * sigma);
}

TEST_CASE("one-point crossover exchanges suffixes at an interior cut") {
  const BitString a(10, 0), b(10, 1);
  const auto [c, d] = crossover_at(a, b, 4);
  CHECK(c == BitString{0, 0, 0, 0, 1, 1, 1, 1, 1, 1});
  CHECK(d == BitString{1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
  Rng rng(1);
  std::vector<int> seen(10, 0);
  for (int i = 0; i < 9000; ++i) {
    const auto [x, y] = one_point_crossover(a, b, rng);
    REQUIRE(x.size() == 10u);
    REQUIRE(y.size() == 10u);
    const int cut = static_cast<int>(std::find(x.begin(), x.end(), 1) - x.begin());
    REQUIRE(cut >= 1);
    REQUIRE(cut <= 9);
    ++seen[cut];
  }
  for (int cut = 1; cut <= 9; ++cut) CHECK(seen[cut] > 800);
}

TEST_CASE("GA best fitness never worsens and the budget is respected") {
  GAConfig cfg;
  cfg.seed = 17;
  const auto genes = bit_genes(40);
  const RunRecord r = ga_run(cfg, genes, onemax);
  REQUIRE(r.history.size() >= 2u);
  double best = 2.0;
  for (const auto &h : r.history) {
    CHECK(h.evaluations <= cfg.eval_budget);
    best = std::min(best, h.best_fitness);
  }
  for (std::size_t g = 1; g < r.history.size(); ++g)
    CHECK(r.history[g].best_fitness <= r.history[g - 1].best_fitness);
  CHECK(r.best_fitness == best);
  CHECK(r.evaluations <= cfg.eval_budget);
  CHECK(onemax(r.best_x) == r.best_fitness);
}

TEST_CASE("seeded GA runs are bit-identical, with and without worker threads") {
  GAConfig cfg;
  cfg.seed = 2024;
  const auto genes = std::vector<GeneSpec>{float_gene("x", -2, 2), float_gene("y", -1, 3)};
  const RunRecord a = ga_run(cfg, genes, rosenbrock);
  const RunRecord b = ga_run(cfg, genes, rosenbrock);
  CHECK(a == b);
  cfg.threads = 3;
  CHECK(ga_run(cfg, genes, rosenbrock) == a);
  cfg.seed = 2025;
  CHECK_FALSE(ga_run(cfg, genes, rosenbrock) == a);
}

TEST_CASE("OneMax: the GA reaches the all-ones genome in at least 95 of 100 runs") {
  const auto genes = bit_genes(12);
  int found = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GAConfig cfg;
    cfg.seed = seed;
    found += ga_run(cfg, genes, onemax).best_fitness == 0.0;
  }
  MESSAGE("OneMax L=12 successes: " << found);
  CHECK(found >= 95);
}

TEST_CASE("OneMax L=64: GA best-of-10 beats random best-of-10 in 9 of 10 meta-trials") {
  const auto genes = bit_genes(64);
  int wins = 0;
  for (int meta = 0; meta < 10; ++meta) {
    double ga = 2.0, rnd = 2.0;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t seed = 1000 * meta + r;
      GAConfig cfg;
      cfg.seed = seed;
      ga = std::min(ga, ga_run(cfg, genes, onemax).best_fitness);
      rnd = std::min(rnd, random_search(cfg.eval_budget, genes, onemax, seed).best_fitness);
    }
    wins += ga < rnd;
  }
  CHECK(wins >= 9);
}

TEST_CASE("objective failure aborts with a partial record") {
  GAConfig cfg;
  int calls = 0;
  const auto r = ga_run(cfg, bit_genes(8), [&](const std::vector<double> &x) {
    if (++calls > 60) throw std::runtime_error("boom");
    return onemax(x);
  });
  CHECK(r.error == "boom");
  CHECK(r.history.size() >= 1u);
}

TEST_CASE("random search samples inside the bounds and honours the budget") {
  const std::vector<GeneSpec> genes{float_gene("x", -1, 1), integer_gene("n", 11, 51)};
  int calls = 0;
  const auto r = random_search(300, genes, [&](const std::vector<double> &x) {
    ++calls;
    CHECK(x[0] >= -1);
    CHECK(x[0] <= 1);
    CHECK(x[1] == std::round(x[1]));
    return x[0] * x[0];
  }, 4);
  CHECK(calls == 300);
  CHECK(r.evaluations == 300);
  const auto one = random_search(1, genes, [](const std::vector<double> &x) { return x[0]; }, 4);
  CHECK(one.evaluations == 1);
  CHECK(one.best_fitness == one.best_x[0]);
}

TEST_CASE("Nelder-Mead") {
  const std::vector<double> c{1.5, -0.5, 2.0};
  const auto bowl = [&](const std::vector<double> &x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
    return s;
  };
  const std::vector<double> steps{1.0, 1.0, 1.0};
  const auto r = nelder_mead(bowl, {0, 0, 0}, steps, {200});
  CHECK(r.evaluations <= 200);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r.best_x[i] - c[i]) < 1e-6);

  const std::vector<double> s2{0.5, 0.5};
  const auto ros = nelder_mead(rosenbrock, {-1.2, 1.0}, s2, {1500});
  CHECK(ros.best_fitness < 1e-4);
  CHECK(ros.evaluations <= 1500);
}

TEST_CASE("quasi-Newton recovers the centre and curvature of a quadratic bowl") {
  // f = (x - 1)^2 + 3 (y + 2)^2 + x y, Hessian [[2, 1], [1, 6]]
  const auto f = [](const std::vector<double> &x) {
    return std::pow(x[0] - 1, 2) + 3 * std::pow(x[1] + 2, 2) + x[0] * x[1];
  };
  QuasiNewtonOptions opt;
  opt.budget = 500;
  opt.fd_step = {1e-4, 1e-4};
  const auto q = quasi_newton_fd(f, {4.0, 4.0}, opt);
  // stationary point: 2 (x - 1) + y = 0, 6 (y + 2) + x = 0
  CHECK(std::abs(q.record.best_x[0] - 24.0 / 11) < 1e-5);
  CHECK(std::abs(q.record.best_x[1] + 26.0 / 11) < 1e-5);
  // inverse Hessian of [[2,1],[1,6]] is [[6,-1],[-1,2]] / 11
  CHECK(q.inverse_hessian[0] == doctest::Approx(6.0 / 11).epsilon(0.05));
  CHECK(q.inverse_hessian[3] == doctest::Approx(2.0 / 11).epsilon(0.05));
  CHECK(q.record.evaluations <= 500);
}

TEST_CASE("central differences match the analytic gradient") {
  const auto f = [](const std::vector<double> &x) { return 3.0 * x[0] * x[0] - 2.0 * x[0] + 0.5 * x[1] * x[1] * x[1]; };
  const std::vector<double> x{0.7, -1.3}, h{1e-4, 1e-4};
  const auto g = fd_gradient(f, x, h);
  CHECK(std::abs(g[0] - (6 * 0.7 - 2)) < 1e-6);
  CHECK(std::abs(g[1] - 1.5 * 1.69) < 1e-6);
}

TEST_CASE("success rate") {
  std::vector<RunRecord> rs(4);
  rs[0].best_fitness = 0.3;
  rs[1].best_fitness = 0.6;
  rs[2].best_fitness = 0.45;
  rs[3].best_fitness = 0.5;
  CHECK(success_rate(rs) == 0.5);
  CHECK_THROWS_AS(success_rate(std::vector<RunRecord>{}), std::invalid_argument);
}
