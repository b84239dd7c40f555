// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lanczos.hpp
 * @brief Thick-restart Lanczos for the largest eigenpair of a symmetric operator.
 */

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pam/hypercube.hpp"

namespace pam {

/// y = A x for a symmetric A. Both spans have the problem dimension.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosOptions {
  int basis_size = 40;       ///< Krylov basis kept between restarts
  int max_matvecs = 1000;
  double tol = 1e-12;        ///< absolute residual ||A x - theta x|| for unit x
  double scale = 1.0;        ///< operator norm estimate, used to detect breakdown
  std::size_t space_dim = 0; ///< dimension of the invariant subspace the iteration lives in (0: vector length)
};

struct LanczosResult {
  double value = 0.0;
  StateVector vector;        ///< unit 2-norm
  double residual = 0.0;     ///< explicit ||A x - theta x||
  int matvecs = 0;
  bool converged = false;
};

/// Largest eigenpair of op within the orthogonal complement of `locked`
/// (unit vectors). Full reorthogonalization; the restart keeps half the Ritz
/// vectors. Never throws on non-convergence: check `converged`.
LanczosResult lanczos_largest(const LinearOperator& op, StateVector start,
                              const std::vector<StateVector>& locked,
                              const LanczosOptions& options);

}  // namespace pam
