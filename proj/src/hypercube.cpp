// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pam {

namespace {

// acc[x] = sum_i (f[x ^ 2^i] - f[x]), accumulated bit by bit in increasing order.
// The pairwise sweep keeps inner loops contiguous for every bit.
void accumulate_differences(std::span<const double> f, int n, std::span<double> acc) {
  const std::size_t size = f.size();
  std::fill(acc.begin(), acc.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::size_t stride = std::size_t{1} << i;
    for (std::size_t base = 0; base < size; base += 2 * stride) {
      double* lo = acc.data() + base;
      double* hi = lo + stride;
      const double* flo = f.data() + base;
      const double* fhi = flo + stride;
      for (std::size_t j = 0; j < stride; ++j) {
        const double d = fhi[j] - flo[j];
        lo[j] += d;
        hi[j] -= d;
      }
    }
  }
}

void require_size(std::span<const double> f, int n, const char* what) {
  if (f.size() != state_size(n))
    throw InvalidArgument(std::string(what) + ": vector length must be 2^n");
}

}  // namespace

std::vector<Vertex> neighbors(const Vertex& x) {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) out.push_back(x.flip(i));
  return out;
}

int hamming(const Vertex& x, const Vertex& y) {
  if (x.dim() != y.dim()) throw InvalidArgument("hamming: vertices of different dimension");
  return hamming(x.index(), y.index());
}

void laplacian_apply(std::span<const double> f, int n, std::span<double> out) {
  require_dimension(n);
  require_size(f, n, "laplacian_apply");
  if (out.size() != f.size()) throw InvalidArgument("laplacian_apply: output size mismatch");
  accumulate_differences(f, n, out);
  const double scale = 1.0 / n;
  for (double& v : out) v *= scale;
}

StateVector laplacian_apply(std::span<const double> f, int n) {
  StateVector out(f.size());
  laplacian_apply(f, n, out);
  return out;
}

Hamiltonian::Hamiltonian(double kappa, std::span<const double> potential, int n,
                         std::span<const Index> boundary)
    : kappa_(kappa), n_(n), potential_(potential.begin(), potential.end()) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  require_dimension(n);
  require_size(potential, n, "Hamiltonian");
  for (double v : potential_)
    if (!std::isfinite(v)) throw InvalidArgument("Hamiltonian: potential must be finite");
  if (!boundary.empty()) {
    mask_.assign(potential_.size(), 0);
    for (Index b : boundary) {
      if (b >= potential_.size()) throw InvalidArgument("Hamiltonian: boundary vertex out of range");
      if (!mask_[b]) boundary_.push_back(b);
      mask_[b] = 1;
    }
    std::sort(boundary_.begin(), boundary_.end());
  }
  max_potential_ = -INFINITY;
  double max_abs = 0.0;
  for (std::size_t x = 0; x < potential_.size(); ++x) {
    if (on_boundary(static_cast<Index>(x))) continue;
    max_potential_ = std::max(max_potential_, potential_[x]);
    max_abs = std::max(max_abs, std::abs(potential_[x] - kappa_));
  }
  if (boundary_.size() == potential_.size()) max_potential_ = 0.0;
  norm_bound_ = max_abs + kappa_;
}

void Hamiltonian::apply(std::span<const double> f, std::span<double> out) const {
  if (f.size() != potential_.size() || out.size() != potential_.size())
    throw InvalidArgument("Hamiltonian::apply: vector length must be 2^n");
  accumulate_differences(f, n_, out);
  const double c = kappa_ / n_;

  if (!boundary_.empty()) {
    // Recompute every neighbour of the boundary with masked values, in the
    // same summation order as the sweep so results match an explicit restriction.
    for (Index b : boundary_) {
      for (int i = 0; i < n_; ++i) {
        const Index z = b ^ (Index{1} << i);
        if (mask_[z]) continue;
        double acc = 0.0;
        for (int k = 0; k < n_; ++k) {
          const Index w = z ^ (Index{1} << k);
          acc += (mask_[w] ? 0.0 : f[w]) - f[z];
        }
        out[z] = acc;
      }
    }
  }

  for (std::size_t x = 0; x < out.size(); ++x) out[x] = c * out[x] + potential_[x] * f[x];
  for (Index b : boundary_) out[b] = 0.0;
}

StateVector Hamiltonian::apply(std::span<const double> f) const {
  StateVector out(f.size());
  apply(f, out);
  return out;
}

StateVector hamiltonian_apply(std::span<const double> f, double kappa,
                              std::span<const double> potential,
                              std::span<const Index> boundary) {
  int n = std::countr_zero(potential.size());
  Hamiltonian h(kappa, potential, n, boundary);
  return h.apply(f);
}

void check_state(std::span<const double> f, int n) {
  require_dimension(n);
  require_size(f, n, "check_state");
  for (double v : f)
    if (!std::isfinite(v)) throw InvalidArgument("state vector has a non-finite entry");
}

}  // namespace pam
