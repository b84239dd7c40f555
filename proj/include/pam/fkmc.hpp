// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fkmc.hpp
 * @brief Feynman-Kac Monte Carlo for the solution and the principal eigenfunction.
 *
 * Walks jump at total rate kappa and flip a uniformly chosen coordinate.
 * Samples are processed in chunks of kChunkSize; chunk c draws from the
 * stream (seed, c) and is reduced in log space, and chunks are combined in
 * index order, so estimates are bit-identical for any thread count.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pam/hypercube.hpp"
#include "pam/potential.hpp"
#include "pam/rng.hpp"

namespace pam {

inline constexpr std::int64_t kChunkSize = 4096;

struct WalkPath {
  Index start = 0;
  std::vector<double> jump_times;
  std::vector<Index> visited;   ///< visited[0] = start, one more entry per jump
  double integral_xi = 0.0;     ///< integral of xi(X_s) over [0, t]
};

/// One walk on [0, t]. With an empty potential the integral is 0.
[[nodiscard]] WalkPath simulate_walk(Index y, int n, double t, double kappa, RngStream& rng,
                                     std::span<const double> potential = {});

/// Recomputes sum of holding time * xi over the path.
[[nodiscard]] double path_integral(const WalkPath& path, double t, std::span<const double> potential);

struct MCEstimate {
  std::string target;
  double mean = 0.0;
  double log_mean = 0.0;       ///< log of mean (finite even when mean overflows)
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::optional<double> censored_fraction;
  bool no_hits = false;        ///< endpoint estimator saw no walk ending at the target
  bool unreliable = false;     ///< more than half the walks were censored
};

struct MCOptions {
  int threads = 1;
};

/// v(t, y) = E_y[exp(int_0^t xi(X_s) ds)].
[[nodiscard]] MCEstimate estimate_total_mass(Index y, double t, double kappa,
                                             const PotentialField& field, std::int64_t n_samples,
                                             std::uint64_t seed, const MCOptions& options = {});

/// v(t, x, y) = E_x[exp(int_0^t xi(X_s) ds) 1{X_t = y}]. Variance grows like 2^n: small n only.
[[nodiscard]] MCEstimate estimate_endpoint(Index x, Index y, double t, double kappa,
                                           const PotentialField& field, std::int64_t n_samples,
                                           std::uint64_t seed, const MCOptions& options = {});

/// nu(x) = E_x[exp(int_0^tau (xi - lambda) ds) 1{tau_peak <= tau_boundary}], walks
/// longer than `horizon` are censored and contribute 0.
[[nodiscard]] MCEstimate estimate_eigenfunction(Index x, Index peak, double lambda,
                                                const std::vector<Index>& boundary, double kappa,
                                                const PotentialField& field, std::int64_t n_samples,
                                                double horizon, std::uint64_t seed,
                                                const MCOptions& options = {});

}  // namespace pam
