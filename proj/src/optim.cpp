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

#include "c7ga/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "c7ga/parallel.hpp"

namespace c7ga {

namespace {

std::uint64_t max_code(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

// Signals an exhausted evaluation budget inside the continuous optimizers.
struct BudgetExhausted {};

class CountedObjective {
 public:
  CountedObjective(const Objective &f, int budget) : f_(f), budget_(budget) {}

  double operator()(const std::vector<double> &x) {
    if (count_ >= budget_) throw BudgetExhausted{};
    ++count_;
    const double v = f_(x);
    if (v < best_) {
      best_ = v;
      best_x_ = x;
    }
    return v;
  }

  int count() const { return count_; }
  double best() const { return best_; }
  const std::vector<double> &best_x() const { return best_x_; }

 private:
  const Objective &f_;
  int budget_;
  int count_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
};

void finish(RunRecord &rec, const CountedObjective &f) {
  rec.evaluations = f.count();
  rec.best_fitness = f.best();
  rec.best_x = f.best_x();
}

}  // namespace

void GeneSpec::validate() const {
  if (!(lower < upper)) throw std::invalid_argument("gene " + name + ": lower must be < upper");
  if (bit_depth < 1 || bit_depth > 52)
    throw std::invalid_argument("gene " + name + ": bit_depth must lie in [1, 52]");
  if (integer && static_cast<double>(max_code(bit_depth)) < upper - lower)
    throw std::invalid_argument("gene " + name + ": too few bits for the integer range");
}

GeneSpec float_gene(std::string name, double lower, double upper, int bits) {
  GeneSpec g{std::move(name), lower, upper, bits, false};
  g.validate();
  return g;
}

GeneSpec integer_gene(std::string name, int lower, int upper) {
  if (upper <= lower) throw std::invalid_argument("gene " + name + ": lower must be < upper");
  const int bits = static_cast<int>(std::ceil(std::log2(static_cast<double>(upper - lower) + 1.0)));
  GeneSpec g{std::move(name), static_cast<double>(lower), static_cast<double>(upper), bits, true};
  g.validate();
  return g;
}

BitString encode(double value, const GeneSpec &spec) {
  spec.validate();
  if (!(value >= spec.lower && value <= spec.upper))
    throw std::invalid_argument("gene " + spec.name + ": value outside bounds");
  const double m = static_cast<double>(max_code(spec.bit_depth));
  const auto k =
      static_cast<std::uint64_t>(std::llround((value - spec.lower) / (spec.upper - spec.lower) * m));
  BitString bits(spec.bit_depth);
  for (int i = 0; i < spec.bit_depth; ++i) bits[i] = (k >> (spec.bit_depth - 1 - i)) & 1u;
  return bits;
}

double decode(std::span<const std::uint8_t> bits, const GeneSpec &spec) {
  if (static_cast<int>(bits.size()) != spec.bit_depth)
    throw std::invalid_argument("gene " + spec.name + ": wrong bit count");
  std::uint64_t k = 0;
  for (auto b : bits) k = (k << 1) | (b & 1u);
  const double m = static_cast<double>(max_code(spec.bit_depth));
  const double v = spec.lower + static_cast<double>(k) * (spec.upper - spec.lower) / m;
  return spec.integer ? std::round(v) : v;
}

std::size_t genome_length(std::span<const GeneSpec> specs) {
  std::size_t n = 0;
  for (const auto &s : specs) n += s.bit_depth;
  return n;
}

BitString encode_all(std::span<const double> values, std::span<const GeneSpec> specs) {
  if (values.size() != specs.size()) throw std::invalid_argument("value/gene count mismatch");
  BitString out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const BitString b = encode(values[i], specs[i]);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

std::vector<double> decode_all(std::span<const std::uint8_t> bits, std::span<const GeneSpec> specs) {
  if (bits.size() != genome_length(specs)) throw std::invalid_argument("genome length mismatch");
  std::vector<double> out;
  std::size_t pos = 0;
  for (const auto &s : specs) {
    out.push_back(decode(bits.subspan(pos, s.bit_depth), s));
    pos += s.bit_depth;
  }
  return out;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do r = engine_();
  while (r >= limit);
  return r % n;
}

void GAConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (eval_budget < population_size)
    throw std::invalid_argument("eval_budget must be >= population_size");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
    throw std::invalid_argument("crossover_prob must lie in [0, 1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
    throw std::invalid_argument("mutation_prob must lie in [0, 1]");
  if (elitism < 0 || elitism >= population_size)
    throw std::invalid_argument("elitism must lie in [0, population_size)");
}

std::size_t roulette_select(std::span<const double> fitness, Rng &rng) {
  if (fitness.empty()) throw std::invalid_argument("roulette_select: empty population");
  std::vector<double> w(fitness.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 - std::clamp(fitness[i], 0.0, 2.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) return rng.below(w.size());
  const double r = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (r < acc) return i;
  }
  // round-off at the top end: last individual with positive weight
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i] > 0.0) return i;
  return w.size() - 1;
}

std::pair<BitString, BitString> crossover_at(const BitString &a, const BitString &b,
                                             std::size_t cut) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: genome lengths differ");
  if (cut < 1 || cut >= a.size()) throw std::invalid_argument("crossover: cut outside [1, L-1]");
  BitString ca = a, cb = b;
  std::swap_ranges(ca.begin() + cut, ca.end(), cb.begin() + cut);
  return {ca, cb};
}

std::pair<BitString, BitString> one_point_crossover(const BitString &a, const BitString &b,
                                                    Rng &rng) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: genome lengths differ");
  if (a.size() < 2) return {a, b};
  return crossover_at(a, b, 1 + rng.below(a.size() - 1));
}

BitString flip_mutate(BitString bits, double p_m, Rng &rng) {
  if (!(p_m >= 0.0 && p_m <= 1.0)) throw std::invalid_argument("mutation_prob must lie in [0, 1]");
  for (auto &b : bits)
    if (rng.bernoulli(p_m)) b ^= 1u;
  return bits;
}

RunRecord ga_run(const GAConfig &cfg, std::span<const GeneSpec> specs, const Objective &f) {
  cfg.validate();
  if (specs.empty()) throw std::invalid_argument("ga_run: no genes");
  for (const auto &s : specs) s.validate();
  const std::size_t len = genome_length(specs);
  const int np = cfg.population_size;

  Rng rng(cfg.seed);
  RunRecord rec;
  rec.method = "ga";
  rec.seed = cfg.seed;
  rec.best_fitness = std::numeric_limits<double>::infinity();

  std::vector<BitString> pop(np, BitString(len));
  for (auto &g : pop)
    for (auto &b : g) b = static_cast<std::uint8_t>(rng.bits() >> 63);

  std::map<BitString, double> memo;
  for (int gen = 0;; ++gen) {
    // fresh genomes in order of first appearance
    std::vector<const BitString *> fresh;
    for (const auto &g : pop)
      if (!memo.count(g) &&
          std::none_of(fresh.begin(), fresh.end(), [&](const BitString *p) { return *p == g; }))
        fresh.push_back(&g);
    bool out_of_budget = false;
    const std::size_t room = static_cast<std::size_t>(cfg.eval_budget - rec.evaluations);
    if (fresh.size() > room) {
      fresh.resize(room);
      out_of_budget = true;
    }
    std::vector<double> vals(fresh.size());
    try {
      parallel_for(fresh.size(), cfg.threads,
                   [&](std::size_t i) { vals[i] = f(decode_all(*fresh[i], specs)); });
    } catch (const std::exception &e) {
      rec.error = e.what();
      return rec;
    }
    for (std::size_t i = 0; i < fresh.size(); ++i) memo.emplace(*fresh[i], vals[i]);
    rec.evaluations += static_cast<int>(fresh.size());

    std::vector<std::size_t> scored;
    std::vector<double> fit(np, std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < np; ++i) {
      const auto it = memo.find(pop[i]);
      if (it == memo.end()) continue;
      fit[i] = it->second;
      scored.push_back(i);
    }
    GenerationStats st{gen, std::numeric_limits<double>::infinity(), 0.0, rec.evaluations};
    for (auto i : scored) {
      st.mean_fitness += fit[i];
      if (fit[i] < st.best_fitness) st.best_fitness = fit[i];
      if (fit[i] < rec.best_fitness) {
        rec.best_fitness = fit[i];
        rec.best_bits = pop[i];
      }
    }
    if (!scored.empty()) st.mean_fitness /= static_cast<double>(scored.size());
    rec.history.push_back(st);

    if (out_of_budget || gen + 1 >= cfg.generations || rec.evaluations >= cfg.eval_budget) break;

    // Selection sees only scored individuals; with a full budget that is all of them.
    std::vector<double> sel_fit;
    std::vector<std::size_t> sel_idx;
    for (auto i : scored) {
      sel_fit.push_back(fit[i]);
      sel_idx.push_back(i);
    }
    std::vector<std::size_t> order = sel_idx;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

    std::vector<BitString> next;
    next.reserve(np);
    for (int e = 0; e < cfg.elitism && e < static_cast<int>(order.size()); ++e)
      next.push_back(pop[order[e]]);
    while (static_cast<int>(next.size()) < np) {
      const BitString &a = pop[sel_idx[roulette_select(sel_fit, rng)]];
      if (static_cast<int>(next.size()) + 1 == np) {
        // odd leftover: no mate, copied unchanged
        next.push_back(a);
        break;
      }
      const BitString &b = pop[sel_idx[roulette_select(sel_fit, rng)]];
      std::pair<BitString, BitString> kids{a, b};
      if (rng.bernoulli(cfg.crossover_prob)) kids = one_point_crossover(a, b, rng);
      next.push_back(flip_mutate(std::move(kids.first), cfg.mutation_prob, rng));
      next.push_back(flip_mutate(std::move(kids.second), cfg.mutation_prob, rng));
    }
    pop = std::move(next);
  }
  if (!rec.best_bits.empty()) rec.best_x = decode_all(rec.best_bits, specs);
  return rec;
}

RunRecord random_search(int budget, std::span<const GeneSpec> specs, const Objective &f,
                        std::uint64_t seed, int report_every) {
  if (budget < 1) throw std::invalid_argument("random_search: budget must be >= 1");
  if (report_every < 1) throw std::invalid_argument("random_search: report_every must be >= 1");
  if (specs.empty()) throw std::invalid_argument("random_search: no genes");
  for (const auto &s : specs) s.validate();
  Rng rng(seed);
  RunRecord rec;
  rec.method = "random";
  rec.seed = seed;
  rec.best_fitness = std::numeric_limits<double>::infinity();
  double chunk_sum = 0.0;
  int chunk_n = 0;
  std::vector<double> x(specs.size());
  for (int i = 0; i < budget; ++i) {
    for (std::size_t j = 0; j < specs.size(); ++j) {
      const auto &s = specs[j];
      x[j] = s.integer ? s.lower + static_cast<double>(rng.below(
                                       static_cast<std::uint64_t>(s.upper - s.lower) + 1))
                       : s.lower + rng.uniform() * (s.upper - s.lower);
    }
    double v;
    try {
      v = f(x);
    } catch (const std::exception &e) {
      rec.error = e.what();
      return rec;
    }
    ++rec.evaluations;
    if (v < rec.best_fitness) {
      rec.best_fitness = v;
      rec.best_x = x;
    }
    chunk_sum += v;
    ++chunk_n;
    if (chunk_n == report_every || i + 1 == budget) {
      rec.history.push_back({static_cast<int>(rec.history.size()), rec.best_fitness,
                             chunk_sum / chunk_n, rec.evaluations});
      chunk_sum = 0.0;
      chunk_n = 0;
    }
  }
  return rec;
}

RunRecord nelder_mead(const Objective &f, std::vector<double> x0, std::span<const double> steps,
                      const SimplexOptions &opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
  if (steps.size() != n) throw std::invalid_argument("nelder_mead: step count mismatch");
  RunRecord rec;
  rec.method = "simplex";
  CountedObjective obj(f, opt.budget);
  using Vec = std::vector<double>;
  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  auto lerp = [](const Vec &a, const Vec &b, double t) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };
  try {
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += steps[i];
    for (std::size_t i = 0; i <= n; ++i) val[i] = obj(pts[i]);
    for (int iter = 0;; ++iter) {
      std::vector<std::size_t> idx(n + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return val[a] < val[b]; });
      std::vector<Vec> p2;
      std::vector<double> v2;
      for (auto i : idx) {
        p2.push_back(pts[i]);
        v2.push_back(val[i]);
      }
      pts.swap(p2);
      val.swap(v2);
      rec.history.push_back({iter, val[0],
                             std::accumulate(val.begin(), val.end(), 0.0) / (n + 1), obj.count()});

      double size = 0.0;
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(pts[i][k] - pts[0][k]));
      if (val[n] - val[0] <= opt.f_tol && size <= opt.x_tol) break;

      Vec c(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) c[k] += pts[i][k] / n;
      const Vec xr = lerp(c, pts[n], -1.0);
      const double fr = obj(xr);
      if (fr < val[0]) {
        const Vec xe = lerp(c, pts[n], -2.0);
        const double fe = obj(xe);
        if (fe < fr) {
          pts[n] = xe;
          val[n] = fe;
        } else {
          pts[n] = xr;
          val[n] = fr;
        }
        continue;
      }
      if (fr < val[n - 1]) {
        pts[n] = xr;
        val[n] = fr;
        continue;
      }
      const bool outside = fr < val[n];
      const Vec xc = outside ? lerp(c, xr, 0.5) : lerp(c, pts[n], 0.5);
      const double fc = obj(xc);
      if (outside ? fc <= fr : fc < val[n]) {
        pts[n] = xc;
        val[n] = fc;
        continue;
      }
      for (std::size_t i = 1; i <= n; ++i) {
        pts[i] = lerp(pts[0], pts[i], 0.5);
        val[i] = obj(pts[i]);
      }
    }
  } catch (const BudgetExhausted &) {
  } catch (const std::exception &e) {
    rec.error = e.what();
  }
  finish(rec, obj);
  return rec;
}

std::vector<double> fd_gradient(const Objective &f, std::span<const double> x,
                                std::span<const double> h) {
  if (h.size() != x.size()) throw std::invalid_argument("fd_gradient: step count mismatch");
  std::vector<double> g(x.size());
  std::vector<double> xp(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h[i];
    const double fp = f(xp);
    xp[i] = x[i] - h[i];
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h[i]);
  }
  return g;
}

QuasiNewtonResult quasi_newton_fd(const Objective &f, std::vector<double> x0,
                                  const QuasiNewtonOptions &opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("quasi_newton_fd: empty start point");
  if (opt.fd_step.size() != n) throw std::invalid_argument("quasi_newton_fd: step count mismatch");
  QuasiNewtonResult out;
  out.record.method = "quasi_newton";
  CountedObjective obj(f, opt.budget);
  const Objective counted = [&](const std::vector<double> &x) { return obj(x); };
  using V = Eigen::VectorXd;
  auto to_std = [](const V &v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  auto grad = [&](const V &x) {
    const auto g = fd_gradient(counted, to_std(x), opt.fd_step);
    return V(Eigen::Map<const V>(g.data(), static_cast<Eigen::Index>(n)));
  };
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  try {
    V x = Eigen::Map<const V>(x0.data(), static_cast<Eigen::Index>(n));
    double fx = obj(to_std(x));
    V g = grad(x);
    for (int iter = 0;; ++iter) {
      out.record.history.push_back({iter, obj.best(), fx, obj.count()});
      if (g.lpNorm<Eigen::Infinity>() < opt.g_tol) break;
      V p = -hinv * g;
      if (!(g.dot(p) < 0.0)) {
        hinv.setIdentity();
        scaled = false;
        ++out.resets;
        p = -g;
      }
      // backtracking (Armijo) line search
      double t = 1.0, fn = fx;
      V xn = x;
      bool accepted = false;
      while (t > 1e-12) {
        xn = x + t * p;
        fn = obj(to_std(xn));
        if (fn <= fx + 1e-4 * t * g.dot(p)) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        if (hinv.isIdentity()) break;
        hinv.setIdentity();
        scaled = false;
        ++out.resets;
        continue;
      }
      const V gn = grad(xn);
      const V s = xn - x, y = gn - g;
      const double sy = s.dot(y);
      if (!(sy > 1e-12 * s.norm() * y.norm())) {
        // no positive curvature along s
        hinv.setIdentity();
        scaled = false;
        ++out.resets;
      } else {
        if (!scaled) {
          hinv *= sy / y.dot(y);
          scaled = true;
        }
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) +
               rho * s * s.transpose();
      }
      x = xn;
      fx = fn;
      g = gn;
    }
  } catch (const BudgetExhausted &) {
  } catch (const std::exception &e) {
    out.record.error = e.what();
  }
  finish(out.record, obj);
  out.inverse_hessian.resize(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.inverse_hessian[r * n + c] = hinv(r, c);
  return out;
}

double success_rate(std::span<const RunRecord> records, double threshold) {
  if (records.empty()) throw std::invalid_argument("success_rate: no records");
  std::size_t hits = 0;
  for (const auto &r : records)
    if (1.0 - r.best_fitness > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

}  // namespace c7ga
