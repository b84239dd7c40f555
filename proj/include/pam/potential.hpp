// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file potential.hpp
 * @brief Random potentials on the hypercube: the Random Energy Model, the
 * order-statistics coupling through exponential spacings, tail models and
 * the geometric quantities of extremal level sets.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pam/hypercube.hpp"

namespace pam {

/// Upper tail of a family of potential laws G_n, described through
/// phi_n(r) = log(1 / (1 - G_n(r))) and its left-continuous inverse psi_n.
struct TailModel {
  std::string name;
  std::function<double(double r, int n)> phi;
  std::function<double(double s, int n)> psi;
  /// The distribution function G_n itself (needed for left-tail checks).
  std::function<double(double r, int n)> cdf;
  /// Growth function: psi_n(a n) ~ f(a) n.
  std::function<double(double a)> f;
  /// Limiting gap function: psi(s_n + c) - psi(s_n) -> g(c) along s_n ~ n log 2.
  std::function<double(double c)> g;
  /// f(log 2), the growth rate of the extremes per site.
  double theta = 0.0;
  /// Left-tail sequence l_n used by the summability check.
  std::function<double(int n)> left_tail;
};

/// Gaussian with variance n: the Random Energy Model. Default l_n = n^0.75.
[[nodiscard]] TailModel rem_tail();
/// Mean-one exponential for every n (psi is the identity).
[[nodiscard]] TailModel exponential_tail();
/// Stretched exponential 1 - G_n(r) = exp(-n (r/n)^beta) on r >= 0; beta = 1 is exponential_tail.
[[nodiscard]] TailModel stretched_tail(double beta);
/// Look up a tail by name: "rem", "exponential", "stretched" (beta taken from the argument).
[[nodiscard]] TailModel tail_by_name(const std::string& name, double beta = 2.0);

/// phi_n for the N(0, n) law, accurate far into both tails.
[[nodiscard]] double phi_rem(double r, int n);
/// Exact inverse of phi_rem by safeguarded Newton iteration. Rejects s <= 0.
[[nodiscard]] double psi_rem(double s, int n);
/// log P(Z >= z) for a standard normal Z without underflow.
[[nodiscard]] double log_normal_upper_tail(double z);

/// Potential values over all vertices together with their order statistics.
///
/// order()[k-1] is the vertex carrying the k-th largest value. When the field
/// comes from the exponential coupling, sigma()[i-1] holds sigma_i and
/// values[order[i-1]] = psi_n(sigma_i + ... + sigma_{2^n}).
class PotentialField {
 public:
  /// Builds a field from explicit values. Exact ties throw TieError unless allowed,
  /// in which case tied vertices are ordered by index and has_ties() is set.
  static PotentialField from_values(int n, std::vector<double> values, std::string kind = "custom",
                                    std::uint64_t seed = 0, bool allow_ties = false,
                                    std::optional<std::vector<double>> sigma = std::nullopt);
  /// The constant field; it has ties whenever n >= 1.
  static PotentialField constant(int n, double c);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const std::string& kind() const noexcept { return kind_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const Index> order() const noexcept { return order_; }
  [[nodiscard]] const std::optional<std::vector<double>>& sigma() const noexcept { return sigma_; }
  [[nodiscard]] bool has_ties() const noexcept { return has_ties_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  /// Vertex x_{k,2^n}, 1-based rank.
  [[nodiscard]] Index vertex_at_rank(int k) const;
  /// xi_{k,2^n}, 1-based rank.
  [[nodiscard]] double value_at_rank(int k) const;
  /// Rank (1-based) of vertex x.
  [[nodiscard]] int rank_of(Index x) const;
  /// Top-l vertices, the set Gamma_l.
  [[nodiscard]] std::vector<Index> top(int l) const;
  /// eta_{k,2^n} = sigma_k + ... + sigma_{2^n}; requires sigma.
  [[nodiscard]] double eta_at_rank(int k) const;

 private:
  PotentialField() = default;

  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::string kind_;
  std::vector<double> values_;
  std::vector<Index> order_;
  std::vector<int> rank_;
  std::optional<std::vector<double>> sigma_;
  std::vector<double> eta_suffix_;
  bool has_ties_ = false;
};

/// 2^n independent N(0, n) values.
[[nodiscard]] PotentialField sample_rem(int n, std::uint64_t seed);

/// Order statistics through exponential spacings: sigma_i ~ Exp(rate i),
/// eta_{i,2^n} the suffix sums, values psi_n(eta) placed on a uniformly random
/// permutation of the vertices (Fisher-Yates on the same stream).
[[nodiscard]] PotentialField sample_coupled(int n, std::uint64_t seed, const TailModel& tail);

/// g(sigma_k + ... + sigma_{l-1}) for k < l, and 0 for k >= l. Requires sigma.
[[nodiscard]] double gap_limit(int k, int l, const PotentialField& field, const TailModel& tail);

struct AssumptionLReport {
  std::vector<int> n;
  std::vector<double> terms;         ///< n * G_n(-l_n)
  std::vector<double> partial_sums;
  double final_ratio = 0.0;          ///< terms[last] / terms[last - 1]
  bool divergent = false;
};

/// Partial sums of n G_n(-l_n) for n = 1..n_max with a ratio test on the last terms.
/// l_n defaults to tail.left_tail.
[[nodiscard]] AssumptionLReport check_assumption_L(
    const TailModel& tail, int n_max, std::function<double(int)> left_tail = nullptr);

struct LevelSetGeometry {
  int d_min = 0;                 ///< min pairwise Hamming distance in the level set, n+1 if < 2 points
  double top_pair_ratio = 0.0;   ///< d(x_1, x_2) / n
  std::size_t level_set_size = 0;
};

/// Geometry of A = {x : eta(x) >= n delta log 2}. eta comes from sigma when the
/// field is coupled, otherwise it is recovered as phi_n(xi) through the tail.
[[nodiscard]] LevelSetGeometry level_set_geometry(const PotentialField& field, double delta,
                                                  const TailModel& tail);

/// Cramer rate function of a fair coin, I(x) = x log x + (1-x) log(1-x) + log 2.
[[nodiscard]] double cramer_rate(double x);
/// Unique omega in (1/2, 1] with I(omega) = 2 (1 - delta) log 2, for delta in (1/2, 1).
[[nodiscard]] double omega_delta(double delta);

/// Minimum pairwise Hamming distance of a vertex set; n+1 when it has fewer than 2 points.
[[nodiscard]] int min_pairwise_distance(std::span<const Index> set, int n);

}  // namespace pam
