// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file harness.hpp
 * @brief Declarative experiments: growth and localization sweeps over
 * t = alpha * c_n, and the batch of spectral and geometric lemma checks.
 *
 * Every sweep cell (seed, k, alpha) is evolved from t = 0 on its own, so a row
 * can be recomputed from those values alone. Cells of one seed share the
 * sampled field. Rows are written in config order whatever the thread count.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pam/io.hpp"
#include "pam/potential.hpp"

namespace pam {

inline constexpr int kSchemaVersion = 1;

struct PotentialSpec {
  /// rem | coupled-rem | coupled-exponential | custom-tail | constant
  std::string kind = "rem";
  std::string tail = "stretched";  ///< tail name for custom-tail
  double beta = 2.0;               ///< stretched-tail exponent
  double value = 0.0;              ///< level of the constant potential
};

struct ExperimentConfig {
  int n = 14;
  double kappa = 1.0;
  PotentialSpec potential;
  std::vector<std::uint64_t> seeds;   ///< defaults to 1..20
  std::vector<int> ranks{2};
  std::vector<double> alpha_grid;     ///< defaults to 15 geometric points in [0.1, 10]
  std::string alpha_mode = "relative";  ///< relative: grid entries multiply alpha*
  double tol = 1e-12;                 ///< eigensolver tolerance
  double evolve_tol = 1e-10;          ///< propagation tolerance per unit time
  int krylov_dim = 30;
  int threads = 1;
  std::string output;                 ///< CSV or JSON destination, empty for stdout
  bool timestamp = true;
  // Lemma checks.
  std::vector<int> lemma_n{12, 14, 16};
  int small_n = 8;
  std::vector<double> lemma_times{1.0, 5.0};
  int geometry_n = 18;
  int geometry_seeds = 50;

  [[nodiscard]] double cn() const;
};

[[nodiscard]] std::vector<double> default_alpha_grid();
[[nodiscard]] ExperimentConfig config_from_json(const Json& j);
[[nodiscard]] Json config_to_json(const ExperimentConfig& config);
/// Throws InvalidArgument on an inconsistent config.
void validate(const ExperimentConfig& config);

/// The field of one seed at dimension n.
[[nodiscard]] PotentialField make_field(const ExperimentConfig& config, std::uint64_t seed, int n);
[[nodiscard]] TailModel config_tail(const ExperimentConfig& config);

struct AlphaStar {
  double limit = NAN;    ///< 1 / g(sigma_1 + ... + sigma_{k-1}); NaN without sigma
  double finite = NAN;   ///< 1 / (xi_1 - xi_k)
  /// The value sweeps use: the limit when available, else the finite-n gap.
  [[nodiscard]] double value() const { return std::isnan(limit) ? finite : limit; }
};
[[nodiscard]] AlphaStar alpha_star(const PotentialField& field, const TailModel& tail, int k);

struct SweepRow {
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  double alpha = NAN;
  double t = NAN;
  double log_v_flat_at_xk = NAN;
  double growth_exponent = NAN;
  double predicted_short = NAN;
  double predicted_long = NAN;
  double alpha_star = NAN;
  double alpha_star_finite = NAN;
  double u_at_x1 = NAN;
  double u_at_xk = NAN;
  double mean_fitness = NAN;
  bool near_critical = false;
  std::string status = "ok";
};

struct LocalizationRow {
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  double alpha = NAN;
  double t = NAN;
  double alpha_star = NAN;
  double alpha_star_finite = NAN;
  double u_at_x1 = NAN;
  double u_at_xk = NAN;
  double mean_fitness = NAN;
  double alpha_hat = NAN;   ///< first grid alpha with u_at_x1 > u_at_xk for this (seed, k)
  bool near_critical = false;
  std::string status = "ok";
};

/// The absolute alpha values of the grid for one (field, k).
[[nodiscard]] std::vector<double> absolute_alphas(const ExperimentConfig& config,
                                                  const AlphaStar& star);

/// One growth cell, computed from (seed, k, alpha) alone.
[[nodiscard]] SweepRow phase_cell(const ExperimentConfig& config, std::uint64_t seed, int k,
                                  double alpha);
[[nodiscard]] std::vector<SweepRow> run_phase_sweep(const ExperimentConfig& config);
[[nodiscard]] std::vector<LocalizationRow> run_localization_sweep(const ExperimentConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const ExperimentConfig& config);
void write_localization_csv(std::ostream& out, const std::vector<LocalizationRow>& rows,
                            const ExperimentConfig& config);

struct SpectralBoundCheck {
  double max_excess = -INFINITY;  ///< max over (x, y) of lhs - rhs, in units of max v
  bool holds = false;
  double norm2_sq = 0.0;          ///< ||nu_z||^2 for the (single or first) z
};

/// omega(t, x, y) <= sum_{z in Upsilon} omega(t, z, y) nu_z(x) ||nu_z||^2 pointwise, by dense
/// evolution: omega = v with boundary Lambda minus v with boundary Upsilon u Lambda. n <= 10.
[[nodiscard]] SpectralBoundCheck check_spectral_bound(double kappa, const PotentialField& field,
                                                      const std::vector<Index>& upsilon,
                                                      const std::vector<Index>& lambda_set,
                                                      double t, double slack = 1e-9);

/// JSON report with one entry per check and a list of failed check names.
[[nodiscard]] Json run_lemma_checks(const ExperimentConfig& config);

/// Median of a nonempty sample (mean of the middle pair for even sizes).
[[nodiscard]] double median(std::vector<double> values);

/// Entry point of the command line tool. Exit codes: 0 ok, 1 check failure or
/// runtime error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pam
