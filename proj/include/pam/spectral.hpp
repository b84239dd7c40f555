// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Principal eigenpairs, spectral gaps and eigenvalue bounds of
 * kappa*Laplacian + xi with zero boundary conditions on extremal sets.
 *
 * For ranks i <= l the boundary is Gamma_l minus x_i, where Gamma_l holds the
 * l highest-potential vertices, and the eigenfunction is normalized to 1 at
 * the peak x_i.
 */

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "pam/hypercube.hpp"
#include "pam/potential.hpp"

namespace pam {

struct SpectralOptions {
  double tol = 1e-12;      ///< residual tolerance relative to the operator norm bound
  int max_matvecs = 0;     ///< 0 selects 50 n
  bool polish = true;      ///< refine small entries by the nonnegative fixed-point iteration
  bool compute_gap = false;
};

struct SpectralResult {
  int n = 0;
  double kappa = 0.0;
  int i = 0;
  int l = 0;
  double lambda = 0.0;
  StateVector nu;                 ///< nu(peak) = 1, zero on the boundary
  double residual = 0.0;          ///< ||H nu - lambda nu||_2 / ||nu||_2
  std::optional<double> gap;
  std::vector<Index> boundary;
  Index peak = 0;
  int matvecs = 0;
  bool polished = false;
};

/// Boundary Gamma_l \ {x_i} for 1 <= i <= l.
[[nodiscard]] std::vector<Index> extremal_boundary(const PotentialField& field, int i, int l);

/// Principal eigenpair for ranks (i, l). Throws ConvergenceError or PerronViolation.
[[nodiscard]] SpectralResult principal_eig(double kappa, const PotentialField& field, int i, int l,
                                           const SpectralOptions& options = {});

/// Principal eigenpair of an arbitrary restricted operator, normalized at `peak`.
[[nodiscard]] SpectralResult principal_eig(const Hamiltonian& h, Index peak,
                                           const SpectralOptions& options = {});

/// Second eigenvalue of the restricted operator by deflating the principal vector.
[[nodiscard]] double second_eigenvalue(const Hamiltonian& h, const SpectralResult& principal,
                                       const SpectralOptions& options = {});

/// lambda_{i,l} minus the second eigenvalue of the same operator.
[[nodiscard]] double spectral_gap(double kappa, const PotentialField& field, int i, int l,
                                  const SpectralOptions& options = {});

struct BoundCheck {
  bool hypotheses_met = false;
  std::string reason;           ///< why the hypotheses fail, empty otherwise
  int d_min = 0;
  double N = 0.0;               ///< max of the potential on A
  double M = 0.0;               ///< max of the potential off A
  double gamma = 0.0;
  double lhs = 0.0;             ///< kappa / (gamma - (N - kappa))
  double rhs = 0.0;             ///< n (gamma - M) / kappa
  bool admissible = false;      ///< gamma > N - kappa and lhs < rhs
  double gamma_min = 0.0;       ///< infimum of admissible gamma
  double lambda1 = 0.0;
  bool lower_holds = false;     ///< N - kappa <= lambda1
  bool upper_holds = false;     ///< lambda1 < gamma
  /// Lemma verdict: false only for admissible gamma with a violated bound.
  [[nodiscard]] bool passed() const {
    return !hypotheses_met || !admissible || (lower_holds && upper_holds);
  }
};

/// Checks N - kappa <= lambda_1 < gamma for a set A with d_min(A) > 2 and
/// max off A <= N - kappa. Broken hypotheses are reported, not thrown.
[[nodiscard]] BoundCheck eigen_bound_check(double kappa, const PotentialField& field,
                                           const std::vector<Index>& A, double gamma,
                                           const SpectralOptions& options = {});

struct EigenProfile {
  double mass_off_peak = 0.0;   ///< sum of nu off the peak
  double nu_at_xk = 0.0;
  double log_nu_at_xk = 0.0;
  double norm2_sq = 0.0;        ///< ||nu||_2^2, in [1, 1 + mass_off_peak * max nu]
  double resolution_floor = 0.0;
  bool resolved = false;        ///< nu(x_k) >= 100 * residual
};

/// Mass off the peak and the decay at x_{k,2^n}; requires k > l.
[[nodiscard]] EigenProfile eigenfunction_profile(const SpectralResult& result,
                                                 const PotentialField& field, int k);

struct DenseSpectrum {
  std::vector<double> eigenvalues;   ///< descending, restricted to the interior
  Eigen::MatrixXd vectors;           ///< 2^n x interior, zero rows on the boundary
  std::vector<Index> interior;
  double matrix_norm = 0.0;          ///< Frobenius norm of the restricted matrix
  double reconstruction_error = 0.0; ///< ||H - V diag V^T||_F
};

/// The explicit 2^n x 2^n matrix of the restricted operator (rows and columns on the boundary are zero).
[[nodiscard]] Eigen::MatrixXd dense_hamiltonian(double kappa, std::span<const double> potential,
                                                int n, std::span<const Index> boundary = {});

/// Full symmetric eigendecomposition of the restricted operator; n <= 10.
[[nodiscard]] DenseSpectrum dense_oracle(double kappa, std::span<const double> potential, int n,
                                         std::span<const Index> boundary = {});

}  // namespace pam
