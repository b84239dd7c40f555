// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/fkmc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace pam {

namespace {

// Log-domain moments of one chunk: weights exp(l_i) = exp(top) * exp(l_i - top).
struct ChunkMoments {
  double top = -INFINITY;
  double s1 = 0.0;
  double s2 = 0.0;
  std::int64_t censored = 0;
};

struct Sample {
  double log_weight;  // -inf for a zero weight
  bool censored = false;
};

using SampleFn = std::function<Sample(RngStream&)>;

ChunkMoments run_chunk(const SampleFn& sample, std::uint64_t seed, std::int64_t chunk,
                       std::int64_t count) {
  RngStream rng(seed, static_cast<std::uint64_t>(chunk));
  std::vector<double> logs(static_cast<std::size_t>(count));
  ChunkMoments m;
  for (auto& l : logs) {
    const Sample s = sample(rng);
    l = s.log_weight;
    if (s.censored) ++m.censored;
    m.top = std::max(m.top, l);
  }
  if (m.top == -INFINITY) return m;
  for (double l : logs) {
    if (l == -INFINITY) continue;
    const double e = std::exp(l - m.top);
    m.s1 += e;
    m.s2 += e * e;
  }
  return m;
}

MCEstimate run_estimator(const SampleFn& sample, std::int64_t n_samples, std::uint64_t seed,
                         const MCOptions& options, std::string target) {
  const std::int64_t chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkMoments> moments(static_cast<std::size_t>(chunks));
  auto work = [&](std::int64_t c) {
    const std::int64_t count = std::min(kChunkSize, n_samples - c * kChunkSize);
    moments[static_cast<std::size_t>(c)] = run_chunk(sample, seed, c, count);
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(chunks)));
  if (threads == 1) {
    for (std::int64_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (int tid = 0; tid < threads; ++tid)
      pool.emplace_back([&, tid] {
        for (std::int64_t c = tid; c < chunks; c += threads) work(c);
      });
    for (auto& th : pool) th.join();
  }

  double top = -INFINITY;
  std::int64_t censored = 0;
  for (const auto& m : moments) {
    top = std::max(top, m.top);
    censored += m.censored;
  }
  MCEstimate est;
  est.target = std::move(target);
  est.n_samples = n_samples;
  est.censored_fraction = static_cast<double>(censored) / static_cast<double>(n_samples);
  if (top == -INFINITY) {
    est.log_mean = -INFINITY;
    est.no_hits = true;
    return est;
  }
  double s1 = 0.0, s2 = 0.0;
  for (const auto& m : moments) {
    if (m.top == -INFINITY) continue;
    const double f = std::exp(m.top - top);
    s1 += m.s1 * f;
    s2 += m.s2 * f * f;
  }
  const double count = static_cast<double>(n_samples);
  const double mean_scaled = s1 / count;
  const double var_scaled =
      std::max(0.0, (s2 / count - mean_scaled * mean_scaled) * count / (count - 1.0));
  est.log_mean = top + std::log(mean_scaled);
  est.mean = std::exp(est.log_mean);
  est.std_error = std::exp(top) * std::sqrt(var_scaled / count);
  return est;
}

void require_samples(std::int64_t n_samples, std::int64_t minimum) {
  if (n_samples < minimum)
    throw InvalidArgument("at least " + std::to_string(minimum) + " samples are required");
}

// Integral of xi over [0, t] by summation by parts; exact for constant xi.
struct Walker {
  int n;
  double kappa;
  std::span<const double> xi;

  Index flip(Index x, RngStream& rng) const {
    return x ^ (Index{1} << rng.below(static_cast<std::uint64_t>(n)));
  }

  // Returns (integral, endpoint).
  std::pair<double, Index> run(Index x, double t, RngStream& rng) const {
    double s = rng.exponential(kappa);
    double acc = 0.0;
    while (s <= t) {
      const Index next = flip(x, rng);
      acc += (xi[x] - xi[next]) * s;
      x = next;
      s += rng.exponential(kappa);
    }
    return {acc + xi[x] * t, x};
  }
};

}  // namespace

WalkPath simulate_walk(Index y, int n, double t, double kappa, RngStream& rng,
                       std::span<const double> potential) {
  require_dimension(n);
  if (y >= state_size(n)) throw InvalidArgument("start vertex out of range");
  if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!potential.empty() && potential.size() != state_size(n))
    throw InvalidArgument("potential must have 2^n values");
  WalkPath path;
  path.start = y;
  path.visited.push_back(y);
  double s = rng.exponential(kappa);
  double acc = 0.0;
  Index x = y;
  while (s <= t) {
    const Index next = x ^ (Index{1} << rng.below(static_cast<std::uint64_t>(n)));
    if (!potential.empty()) acc += (potential[x] - potential[next]) * s;
    path.jump_times.push_back(s);
    path.visited.push_back(next);
    x = next;
    s += rng.exponential(kappa);
  }
  path.integral_xi = potential.empty() ? 0.0 : acc + potential[x] * t;
  return path;
}

double path_integral(const WalkPath& path, double t, std::span<const double> potential) {
  double total = 0.0, last = 0.0;
  for (std::size_t j = 0; j < path.jump_times.size(); ++j) {
    total += (path.jump_times[j] - last) * potential[path.visited[j]];
    last = path.jump_times[j];
  }
  return total + (t - last) * potential[path.visited.back()];
}

MCEstimate estimate_total_mass(Index y, double t, double kappa, const PotentialField& field,
                               std::int64_t n_samples, std::uint64_t seed,
                               const MCOptions& options) {
  require_samples(n_samples, 100);
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (y >= field.size()) throw InvalidArgument("start vertex out of range");
  const Walker walker{field.n(), kappa, field.values()};
  auto est = run_estimator(
      [&](RngStream& rng) { return Sample{walker.run(y, t, rng).first}; }, n_samples, seed,
      options, "total_mass y=" + std::to_string(y) + " t=" + std::to_string(t));
  est.censored_fraction.reset();
  return est;
}

MCEstimate estimate_endpoint(Index x, Index y, double t, double kappa, const PotentialField& field,
                             std::int64_t n_samples, std::uint64_t seed,
                             const MCOptions& options) {
  require_samples(n_samples, 10000);
  if (field.n() > 10 && x != y)
    throw InvalidArgument("endpoint estimates are limited to n <= 10 unless x = y");
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (x >= field.size() || y >= field.size()) throw InvalidArgument("vertex out of range");
  const Walker walker{field.n(), kappa, field.values()};
  auto est = run_estimator(
      [&](RngStream& rng) {
        const auto [integral, end] = walker.run(x, t, rng);
        return Sample{end == y ? integral : -INFINITY};
      },
      n_samples, seed, options,
      "endpoint x=" + std::to_string(x) + " y=" + std::to_string(y) + " t=" + std::to_string(t));
  est.censored_fraction.reset();
  return est;
}

MCEstimate estimate_eigenfunction(Index x, Index peak, double lambda,
                                  const std::vector<Index>& boundary, double kappa,
                                  const PotentialField& field, std::int64_t n_samples,
                                  double horizon, std::uint64_t seed, const MCOptions& options) {
  require_samples(n_samples, 2);
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (x >= field.size() || peak >= field.size()) throw InvalidArgument("vertex out of range");
  std::vector<char> mask(field.size(), 0);
  for (Index b : boundary) {
    if (b >= field.size()) throw InvalidArgument("boundary vertex out of range");
    if (b != peak) mask[b] = 1;
  }
  const std::string target = "eigenfunction x=" + std::to_string(x) + " peak=" + std::to_string(peak);
  if (x == peak || mask[x]) {
    MCEstimate est;
    est.target = target;
    est.mean = x == peak ? 1.0 : 0.0;
    est.log_mean = x == peak ? 0.0 : -INFINITY;
    est.n_samples = n_samples;
    est.censored_fraction = 0.0;
    return est;
  }
  const int n = field.n();
  const auto xi = field.values();
  auto est = run_estimator(
      [&](RngStream& rng) {
        Index at = x;
        double s = 0.0, acc = 0.0;
        for (;;) {
          const double hold = rng.exponential(kappa);
          if (s + hold > horizon) return Sample{-INFINITY, true};
          acc += (xi[at] - lambda) * hold;
          s += hold;
          at ^= Index{1} << rng.below(static_cast<std::uint64_t>(n));
          if (at == peak) return Sample{acc};
          if (mask[at]) return Sample{-INFINITY};
        }
      },
      n_samples, seed, options, target);
  est.unreliable = est.censored_fraction.value_or(0.0) > 0.5;
  return est;
}

}  // namespace pam
