// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "pam/rng.hpp"

namespace pam {

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// -log P(Z >= z) and its derivative (the hazard rate of the standard normal).
double neg_log_tail(double z) { return -log_normal_upper_tail(z); }
double normal_hazard(double z) {
  return std::exp(-0.5 * z * z - kLogSqrt2Pi - log_normal_upper_tail(z));
}

}  // namespace

double log_normal_upper_tail(double z) {
  if (z < -1.0) return std::log1p(-0.5 * std::erfc(-z / std::numbers::sqrt2));
  if (z < 37.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  // Asymptotic Mills-ratio series; the first omitted term is below 1e-13 here.
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
  return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log(series);
}

double phi_rem(double r, int n) {
  if (n < 1) throw InvalidArgument("phi_rem: n must be positive");
  return -log_normal_upper_tail(r / std::sqrt(static_cast<double>(n)));
}

double psi_rem(double s, int n) {
  if (n < 1) throw InvalidArgument("psi_rem: n must be positive");
  if (!(s > 0.0)) throw InvalidArgument("psi_rem: s must be positive");
  // Solve -log P(Z >= z) = s for z; the left side is convex and increasing.
  double lo = -40.0;
  double hi = std::max(40.0, 2.0 * std::sqrt(s) + 10.0);
  double z = std::sqrt(2.0 * s) - 1.0;
  if (s < kLog2) z = 0.0;
  z = std::clamp(z, lo, hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double value = neg_log_tail(z) - s;
    if (value == 0.0) break;
    if (value > 0.0) hi = z; else lo = z;
    const double slope = normal_hazard(z);
    double next = z - value / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - z);
    z = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z))) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z))) break;
  }
  return std::sqrt(static_cast<double>(n)) * z;
}

TailModel rem_tail() {
  TailModel t;
  t.name = "rem";
  t.phi = [](double r, int n) { return phi_rem(r, n); };
  t.psi = [](double s, int n) { return psi_rem(s, n); };
  t.cdf = [](double r, int n) {
    return 0.5 * std::erfc(-r / std::sqrt(2.0 * static_cast<double>(n)));
  };
  t.f = [](double a) { return std::sqrt(2.0 * a); };
  t.theta = std::sqrt(2.0 * kLog2);
  // Gaps of psi_n at the extremes, where s_n ~ n log 2: the slope is f'(log 2) = 1/theta.
  t.g = [theta = t.theta](double c) { return c / theta; };
  t.left_tail = [](int n) { return std::pow(static_cast<double>(n), 0.75); };
  return t;
}

TailModel exponential_tail() {
  TailModel t;
  t.name = "exponential";
  t.phi = [](double r, int) { return r > 0.0 ? r : 0.0; };
  t.psi = [](double s, int) {
    if (!(s > 0.0)) throw InvalidArgument("psi: s must be positive");
    return s;
  };
  t.cdf = [](double r, int) { return r > 0.0 ? -std::expm1(-r) : 0.0; };
  t.f = [](double a) { return a; };
  t.theta = kLog2;
  t.g = [](double c) { return c; };
  t.left_tail = [](int n) { return std::pow(static_cast<double>(n), 0.75); };
  return t;
}

TailModel stretched_tail(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("stretched_tail: beta must be positive");
  TailModel t;
  t.name = "stretched";
  t.phi = [beta](double r, int n) {
    return r > 0.0 ? n * std::pow(r / n, beta) : 0.0;
  };
  t.psi = [beta](double s, int n) {
    if (!(s > 0.0)) throw InvalidArgument("psi: s must be positive");
    return n * std::pow(s / n, 1.0 / beta);
  };
  t.cdf = [beta](double r, int n) {
    return r > 0.0 ? -std::expm1(-n * std::pow(r / n, beta)) : 0.0;
  };
  t.f = [beta](double a) { return std::pow(a, 1.0 / beta); };
  t.theta = std::pow(kLog2, 1.0 / beta);
  t.g = [beta](double c) { return c * std::pow(kLog2, 1.0 / beta - 1.0) / beta; };
  t.left_tail = [](int n) { return std::pow(static_cast<double>(n), 0.75); };
  return t;
}

TailModel tail_by_name(const std::string& name, double beta) {
  if (name == "rem") return rem_tail();
  if (name == "exponential") return exponential_tail();
  if (name == "stretched") return stretched_tail(beta);
  throw InvalidArgument("unknown tail model '" + name + "'");
}

// ---------------------------------------------------------------------------
// PotentialField

PotentialField PotentialField::from_values(int n, std::vector<double> values, std::string kind,
                                           std::uint64_t seed, bool allow_ties,
                                           std::optional<std::vector<double>> sigma) {
  require_dimension(n);
  if (values.size() != state_size(n))
    throw InvalidArgument("potential field must have 2^n values");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("potential values must be finite");

  PotentialField field;
  field.n_ = n;
  field.seed_ = seed;
  field.kind_ = std::move(kind);
  field.values_ = std::move(values);
  field.order_.resize(field.values_.size());
  std::iota(field.order_.begin(), field.order_.end(), Index{0});
  const auto& vals = field.values_;
  std::stable_sort(field.order_.begin(), field.order_.end(),
                   [&vals](Index a, Index b) { return vals[a] > vals[b]; });
  for (std::size_t k = 1; k < field.order_.size(); ++k) {
    if (vals[field.order_[k - 1]] == vals[field.order_[k]]) {
      if (!allow_ties)
        throw TieError("potential has tied values at ranks " + std::to_string(k) + " and " +
                       std::to_string(k + 1));
      field.has_ties_ = true;
    }
  }
  field.rank_.resize(field.order_.size());
  for (std::size_t k = 0; k < field.order_.size(); ++k)
    field.rank_[field.order_[k]] = static_cast<int>(k + 1);

  if (sigma) {
    if (sigma->size() != field.values_.size())
      throw InvalidArgument("sigma must have 2^n entries");
    field.eta_suffix_.resize(sigma->size());
    double acc = 0.0;
    for (std::size_t i = sigma->size(); i-- > 0;) {
      acc += (*sigma)[i];
      field.eta_suffix_[i] = acc;
    }
    field.sigma_ = std::move(sigma);
  }
  return field;
}

PotentialField PotentialField::constant(int n, double c) {
  require_dimension(n);
  return from_values(n, std::vector<double>(state_size(n), c), "constant", 0, true);
}

Index PotentialField::vertex_at_rank(int k) const {
  if (k < 1 || static_cast<std::size_t>(k) > order_.size())
    throw InvalidArgument("rank out of range: " + std::to_string(k));
  return order_[static_cast<std::size_t>(k - 1)];
}

double PotentialField::value_at_rank(int k) const { return values_[vertex_at_rank(k)]; }

int PotentialField::rank_of(Index x) const {
  if (x >= rank_.size()) throw InvalidArgument("vertex out of range");
  return rank_[x];
}

std::vector<Index> PotentialField::top(int l) const {
  if (l < 0 || static_cast<std::size_t>(l) > order_.size())
    throw InvalidArgument("top: count out of range");
  return {order_.begin(), order_.begin() + l};
}

double PotentialField::eta_at_rank(int k) const {
  if (!sigma_) throw InvalidArgument("field carries no sigma sequence");
  (void)vertex_at_rank(k);
  return eta_suffix_[static_cast<std::size_t>(k - 1)];
}

// ---------------------------------------------------------------------------
// Samplers

PotentialField sample_rem(int n, std::uint64_t seed) {
  require_dimension(n);
  RngStream rng(seed, 0);
  const double scale = std::sqrt(static_cast<double>(n));
  std::vector<double> values(state_size(n));
  for (double& v : values) v = scale * rng.normal();
  return PotentialField::from_values(n, std::move(values), "rem", seed);
}

PotentialField sample_coupled(int n, std::uint64_t seed, const TailModel& tail) {
  require_dimension(n);
  const std::size_t size = state_size(n);
  RngStream rng(seed, 1);
  std::vector<double> sigma(size);
  for (std::size_t i = 0; i < size; ++i) sigma[i] = rng.exponential(static_cast<double>(i + 1));

  std::vector<Index> perm(size);
  std::iota(perm.begin(), perm.end(), Index{0});
  for (std::size_t i = size - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  // eta_{i} = sigma_i + ... + sigma_{2^n}, accumulated from the smallest end.
  std::vector<double> values(size);
  double eta = 0.0;
  double previous = -INFINITY;
  for (std::size_t i = size; i-- > 0;) {
    eta += sigma[i];
    const double v = tail.psi(eta, n);
    if (!(v > previous))
      throw TieError("coupled construction produced tied values at rank " + std::to_string(i + 1));
    previous = v;
    values[perm[i]] = v;
  }
  auto field = PotentialField::from_values(n, std::move(values), "coupled-" + tail.name, seed,
                                           false, std::move(sigma));
  return field;
}

double gap_limit(int k, int l, const PotentialField& field, const TailModel& tail) {
  if (!field.sigma()) throw InvalidArgument("gap_limit requires a coupled field (sigma absent)");
  if (k < 1) throw InvalidArgument("gap_limit: ranks start at 1");
  if (k >= l) return 0.0;
  const auto& sigma = *field.sigma();
  if (static_cast<std::size_t>(l - 1) > sigma.size())
    throw InvalidArgument("gap_limit: rank beyond 2^n");
  double sum = 0.0;
  for (int i = k; i < l; ++i) sum += sigma[static_cast<std::size_t>(i - 1)];
  return tail.g(sum);
}

AssumptionLReport check_assumption_L(const TailModel& tail, int n_max,
                                     std::function<double(int)> left_tail) {
  if (n_max < 2) throw InvalidArgument("check_assumption_L: n_max must be >= 2");
  if (!left_tail) left_tail = tail.left_tail;
  AssumptionLReport report;
  double sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double term = n * tail.cdf(-left_tail(n), n);
    sum += term;
    report.n.push_back(n);
    report.terms.push_back(term);
    report.partial_sums.push_back(sum);
  }
  const double last = report.terms.back();
  const double before = report.terms[report.terms.size() - 2];
  report.final_ratio = before > 0.0 ? last / before : (last > 0.0 ? INFINITY : 0.0);
  report.divergent = report.final_ratio >= 1.0;
  return report;
}

int min_pairwise_distance(std::span<const Index> set, int n) {
  int best = n + 1;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      best = std::min(best, hamming(set[a], set[b]));
  return best;
}

LevelSetGeometry level_set_geometry(const PotentialField& field, double delta,
                                    const TailModel& tail) {
  if (!(delta > 0.5 && delta < 1.0))
    throw InvalidArgument("level_set_geometry: delta must lie in (1/2, 1)");
  if (field.has_ties()) throw InvalidArgument("level_set_geometry: field has ties");
  const int n = field.n();
  const double threshold = n * delta * kLog2;
  std::vector<Index> level_set;
  for (int k = 1; static_cast<std::size_t>(k) <= field.size(); ++k) {
    const double eta = field.sigma() ? field.eta_at_rank(k) : tail.phi(field.value_at_rank(k), n);
    if (eta < threshold) break;
    level_set.push_back(field.vertex_at_rank(k));
  }
  LevelSetGeometry geo;
  geo.level_set_size = level_set.size();
  geo.d_min = min_pairwise_distance(level_set, n);
  if (field.size() >= 2)
    geo.top_pair_ratio =
        static_cast<double>(hamming(field.vertex_at_rank(1), field.vertex_at_rank(2))) / n;
  return geo;
}

double cramer_rate(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("cramer_rate: x must lie in [0, 1]");
  return xlogx(x) + xlogx(1.0 - x) + kLog2;
}

double omega_delta(double delta) {
  if (!(delta > 0.5 && delta < 1.0))
    throw InvalidArgument("omega_delta: delta must lie in (1/2, 1)");
  const double target = 2.0 * (1.0 - delta) * kLog2;
  double lo = 0.5, hi = 1.0;  // I is increasing on [1/2, 1] from 0 to log 2
  while (hi - lo > 1e-16) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cramer_rate(mid) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pam
