// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/lanczos.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace pam {

namespace {

using EIndex = Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void project_out(const std::vector<StateVector>& locked, Eigen::Ref<VectorXd> w) {
  for (const auto& u : locked) {
    const Eigen::Map<const VectorXd> um(u.data(), static_cast<EIndex>(u.size()));
    w -= um.dot(w) * um;
  }
}

}  // namespace

LanczosResult lanczos_largest(const LinearOperator& op, StateVector start,
                              const std::vector<StateVector>& locked,
                              const LanczosOptions& options) {
  const EIndex size = static_cast<EIndex>(start.size());
  if (size == 0) throw InvalidArgument("lanczos: empty start vector");
  const std::size_t space = options.space_dim ? options.space_dim : start.size();
  const int m = static_cast<int>(std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(options.basis_size, 2)), 1, std::max<std::size_t>(space, 1)));
  const double breakdown = 1e-14 * std::max(options.scale, 1e-300);

  MatrixXd basis(size, m + 1);
  MatrixXd tri = MatrixXd::Zero(m + 1, m + 1);
  VectorXd w(size);

  auto apply = [&](const double* in, double* out) {
    op(std::span<const double>(in, static_cast<std::size_t>(size)),
       std::span<double>(out, static_cast<std::size_t>(size)));
  };

  {
    Eigen::Map<VectorXd> v0(start.data(), size);
    for (int pass = 0; pass < 2; ++pass) project_out(locked, v0);
    const double norm = v0.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw InvalidArgument("lanczos: start vector vanishes after deflation");
    basis.col(0) = v0 / norm;
  }

  LanczosResult best;
  best.residual = INFINITY;
  int ncols = 1;
  int matvecs = 0;
  VectorXd ritz(size);
  VectorXd check(size);

  for (;;) {
    int filled = ncols;  // columns 0..filled-1 hold the basis
    double beta = 0.0;
    bool exhausted = false;
    for (int c = ncols - 1; c < m; ++c) {
      apply(basis.col(c).data(), w.data());
      ++matvecs;
      VectorXd h = basis.leftCols(c + 1).transpose() * w;
      w.noalias() -= basis.leftCols(c + 1) * h;
      const VectorXd h2 = basis.leftCols(c + 1).transpose() * w;
      w.noalias() -= basis.leftCols(c + 1) * h2;
      h += h2;
      for (int pass = 0; pass < 2; ++pass) project_out(locked, w);
      for (int i = 0; i <= c; ++i) tri(i, c) = tri(c, i) = h(i);
      beta = w.norm();
      filled = c + 1;
      if (beta <= breakdown || filled >= static_cast<int>(space)) {
        exhausted = true;
        beta = 0.0;
        break;
      }
      basis.col(c + 1) = w / beta;
      tri(c + 1, c) = tri(c, c + 1) = beta;
      if (matvecs >= options.max_matvecs) break;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(tri.topLeftCorner(filled, filled));
    const VectorXd& theta = eig.eigenvalues();
    const MatrixXd& y = eig.eigenvectors();
    const double estimate = std::abs(beta * y(filled - 1, filled - 1));

    const bool out_of_budget = matvecs >= options.max_matvecs;
    if (estimate <= options.tol || exhausted || out_of_budget) {
      ritz.noalias() = basis.leftCols(filled) * y.col(filled - 1);
      ritz /= ritz.norm();
      apply(ritz.data(), check.data());
      ++matvecs;
      const double value = ritz.dot(check);
      const double residual = (check - value * ritz).norm();
      if (residual < best.residual) {
        best.value = value;
        best.vector.assign(ritz.data(), ritz.data() + size);
        best.residual = residual;
      }
      if (residual <= options.tol || matvecs >= options.max_matvecs) break;
      if (exhausted) {
        // Lost orthogonality against the true invariant subspace: restart from the Ritz vector.
        basis.col(0) = ritz;
        tri.setZero();
        ncols = 1;
        continue;
      }
    }

    // Thick restart: keep the upper half of the Ritz vectors plus the residual direction.
    const int keep = std::max(1, std::min(filled - 1, filled / 2));
    const MatrixXd kept = basis.leftCols(filled) * y.rightCols(keep);
    basis.leftCols(keep) = kept;
    basis.col(keep) = basis.col(filled);
    tri.setZero();
    for (int i = 0; i < keep; ++i) {
      const int src = filled - keep + i;
      tri(i, i) = theta(src);
      tri(keep, i) = tri(i, keep) = beta * y(filled - 1, src);
    }
    ncols = keep + 1;
  }

  best.matvecs = matvecs;
  best.converged = best.residual <= options.tol;
  return best;
}

}  // namespace pam
