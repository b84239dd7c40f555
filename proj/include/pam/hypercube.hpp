// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hypercube.hpp
 * @brief Vertex arithmetic on {-1,+1}^n and the matrix-free operators kappa*Laplacian + potential.
 *
 * A vertex is a bitmask: bit i set means spin +1 at site i. Neighbours are
 * single-bit flips, so no adjacency is ever stored.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "pam/errors.hpp"

namespace pam {

using Index = std::uint32_t;
using StateVector = std::vector<double>;

inline constexpr int kMaxDimension = 24;

inline void require_dimension(int n) {
  if (n < 1 || n > kMaxDimension)
    throw InvalidArgument("dimension must lie in [1, 24], got " + std::to_string(n));
}

[[nodiscard]] constexpr std::size_t state_size(int n) noexcept {
  return std::size_t{1} << n;
}

/// A point of the hypercube of dimension n.
class Vertex {
 public:
  Vertex(Index index, int n) : index_(index), n_(n) {
    require_dimension(n);
    if (index >= state_size(n))
      throw InvalidArgument("vertex index out of range for dimension " + std::to_string(n));
  }

  [[nodiscard]] Index index() const noexcept { return index_; }
  [[nodiscard]] int dim() const noexcept { return n_; }
  /// Spin at site i, as -1 or +1.
  [[nodiscard]] int spin(int i) const noexcept { return (index_ >> i) & 1U ? 1 : -1; }
  [[nodiscard]] Vertex flip(int i) const { return Vertex(index_ ^ (Index{1} << i), n_); }

  friend bool operator==(const Vertex&, const Vertex&) = default;

 private:
  Index index_;
  int n_;
};

/// The n vertices at Hamming distance 1, ordered by flipped site.
[[nodiscard]] std::vector<Vertex> neighbors(const Vertex& x);

[[nodiscard]] inline int hamming(Index x, Index y) noexcept { return std::popcount(x ^ y); }
[[nodiscard]] int hamming(const Vertex& x, const Vertex& y);

/// out = Laplacian f, (1/n) * sum over neighbours of (f(z) - f(x)).
void laplacian_apply(std::span<const double> f, int n, std::span<double> out);
[[nodiscard]] StateVector laplacian_apply(std::span<const double> f, int n);

/// kappa * Laplacian + diag(potential), restricted to the complement of a boundary set.
///
/// Zero boundary conditions are applied as "mask in, apply, mask out": values
/// of f on the boundary are never read and the result vanishes there. The
/// object is immutable after construction and safe to share between threads.
class Hamiltonian {
 public:
  Hamiltonian(double kappa, std::span<const double> potential, int n,
              std::span<const Index> boundary = {});

  void apply(std::span<const double> f, std::span<double> out) const;
  [[nodiscard]] StateVector apply(std::span<const double> f) const;

  [[nodiscard]] int dim() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return potential_.size(); }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] std::span<const double> potential() const noexcept { return potential_; }
  [[nodiscard]] const std::vector<Index>& boundary() const noexcept { return boundary_; }
  [[nodiscard]] bool on_boundary(Index x) const noexcept { return !mask_.empty() && mask_[x]; }
  /// Upper bound on the largest potential off the boundary; every eigenvalue is <= this.
  [[nodiscard]] double max_potential() const noexcept { return max_potential_; }
  /// Gershgorin bound on the operator norm.
  [[nodiscard]] double norm_bound() const noexcept { return norm_bound_; }

 private:
  double kappa_;
  int n_;
  std::vector<double> potential_;
  std::vector<Index> boundary_;
  std::vector<char> mask_;
  double max_potential_;
  double norm_bound_;
};

/// Free-function form of Hamiltonian::apply. Rejects kappa <= 0.
[[nodiscard]] StateVector hamiltonian_apply(std::span<const double> f, double kappa,
                                            std::span<const double> potential,
                                            std::span<const Index> boundary);

/// Throws unless f has length 2^n with finite entries.
void check_state(std::span<const double> f, int n);

}  // namespace pam
