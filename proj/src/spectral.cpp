// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pam/lanczos.hpp"

namespace pam {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// out[x] = sum of f over the neighbours of x.
void neighbor_sum(std::span<const double> f, int n, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t size = f.size();
  for (int i = 0; i < n; ++i) {
    const std::size_t stride = std::size_t{1} << i;
    for (std::size_t base = 0; base < size; base += 2 * stride) {
      for (std::size_t j = base; j < base + stride; ++j) {
        out[j] += f[j + stride];
        out[j + stride] += f[j];
      }
    }
  }
}

// Start vector concentrated at `center`, decaying like n^-d. The decay mimics
// the eigenfunction, so components along competing eigenvectors start tiny.
StateVector localized_start(const Hamiltonian& h, Index center) {
  const double base = std::max(h.dim(), 2);
  StateVector v(h.size(), 0.0);
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (h.on_boundary(static_cast<Index>(x))) continue;
    v[x] = std::pow(base, -hamming(static_cast<Index>(x), center));
  }
  return v;
}

int default_basis(std::size_t size) {
  if (size <= (std::size_t{1} << 18)) return 40;
  if (size <= (std::size_t{1} << 20)) return 24;
  return 12;
}

LanczosOptions lanczos_options(const Hamiltonian& h, const SpectralOptions& options,
                               std::size_t space_dim) {
  LanczosOptions lo;
  lo.basis_size = default_basis(h.size());
  lo.max_matvecs = options.max_matvecs > 0 ? options.max_matvecs : 50 * h.dim();
  lo.scale = h.norm_bound();
  lo.tol = options.tol * h.norm_bound();
  lo.space_dim = space_dim;
  return lo;
}

LinearOperator as_operator(const Hamiltonian& h) {
  return [&h](std::span<const double> in, std::span<double> out) { h.apply(in, out); };
}

double residual_norm(const Hamiltonian& h, std::span<const double> v, double lambda) {
  const StateVector hv = h.apply(v);
  double r2 = 0.0, v2 = 0.0;
  for (std::size_t x = 0; x < v.size(); ++x) {
    const double d = hv[x] - lambda * v[x];
    r2 += d * d;
    v2 += v[x] * v[x];
  }
  return std::sqrt(r2 / v2);
}

// Refines (lambda, nu) with nu(peak) = 1 by Newton's method on the scalar
// equation lambda = xi(peak) - kappa + (kappa/n) sum_{z~peak} nu_lambda(z), where
// nu_lambda solves the off-peak equations by the Jacobi fixed point
// nu = (kappa/n) A nu / (lambda - xi + kappa). Every term is nonnegative, so
// tiny entries come out with small relative error. Returns false when the
// fixed point stalls or diverges; the inputs are then left untouched.
bool polish(const Hamiltonian& h, Index peak, double& lambda_io, StateVector& nu_io) {
  const int n = h.dim();
  const std::size_t size = h.size();
  const double kappa = h.kappa();
  const double c = kappa / n;
  const auto xi = h.potential();

  double lambda = lambda_io;
  StateVector nu = nu_io;
  for (std::size_t x = 0; x < size; ++x)
    if (h.on_boundary(static_cast<Index>(x)) || !(nu[x] > 0.0)) nu[x] = 0.0;
  nu[peak] = 1.0;

  StateVector scale(size, 0.0), sums(size);
  for (int newton = 0; newton < 60; ++newton) {
    for (std::size_t x = 0; x < size; ++x) {
      if (x == peak || h.on_boundary(static_cast<Index>(x))) continue;
      const double d = lambda - xi[x] + kappa;
      if (!(d > 0.0)) return false;
      scale[x] = c / d;
    }

    // The iteration matrix is nonnegative with spectral radius below 1 exactly
    // when lambda exceeds the top eigenvalue off the peak; the observed
    // contraction rate is monitored instead of a row-sum bound.
    const int cap = 20000;
    double previous = INFINITY;
    int it = 0;
    for (; it < cap; ++it) {
      neighbor_sum(nu, n, sums);
      double change = 0.0;
      for (std::size_t x = 0; x < size; ++x) {
        if (x == peak || scale[x] == 0.0) continue;
        const double v = scale[x] * sums[x];
        if (v > 0.0) change = std::max(change, std::abs(v - nu[x]) / v);
        nu[x] = v;
      }
      if (change <= 64.0 * kEps) break;
      if (it >= 50 && change > 1e-8 && change > 0.999 * previous) return false;
      previous = change;
    }
    if (it == cap) return false;

    double around = 0.0, off2 = 0.0;
    for (int b = 0; b < n; ++b) around += nu[peak ^ (Index{1} << b)];
    for (std::size_t x = 0; x < size; ++x)
      if (x != peak) off2 += nu[x] * nu[x];
    const double target = xi[peak] - kappa + c * around;
    const double step = (lambda - target) / (1.0 + off2);
    lambda -= step;
    if (std::abs(step) <= 2.0 * kEps * std::max(1.0, std::abs(lambda))) break;
  }
  lambda_io = lambda;
  nu_io = std::move(nu);
  return true;
}

}  // namespace

std::vector<Index> extremal_boundary(const PotentialField& field, int i, int l) {
  if (i < 1 || i > l || static_cast<std::size_t>(l) > field.size())
    throw InvalidArgument("ranks must satisfy 1 <= i <= l <= 2^n");
  std::vector<Index> boundary;
  for (int r = 1; r <= l; ++r)
    if (r != i) boundary.push_back(field.vertex_at_rank(r));
  return boundary;
}

SpectralResult principal_eig(const Hamiltonian& h, Index peak, const SpectralOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (peak >= h.size() || h.on_boundary(peak))
    throw InvalidArgument("peak must be an interior vertex");
  const std::size_t interior = h.size() - h.boundary().size();
  const auto lo = lanczos_options(h, options, interior);
  const auto lz = lanczos_largest(as_operator(h), localized_start(h, peak), {}, lo);

  SpectralResult result;
  result.n = h.dim();
  result.kappa = h.kappa();
  result.peak = peak;
  result.boundary = h.boundary();
  result.matvecs = lz.matvecs;
  result.lambda = lz.value;
  result.nu = lz.vector;
  const double at_peak = result.nu[peak];
  if (at_peak == 0.0 || !std::isfinite(at_peak))
    throw PerronViolation("principal eigenfunction vanishes at the peak");
  for (double& v : result.nu) v /= at_peak;
  result.residual = lz.residual;

  if (options.polish) {
    double lambda = result.lambda;
    StateVector nu = result.nu;
    if (polish(h, peak, lambda, nu)) {
      const double r = residual_norm(h, nu, lambda);
      if (r <= std::max(result.residual, lo.tol)) {
        result.lambda = lambda;
        result.nu = std::move(nu);
        result.residual = r;
        result.polished = true;
      }
    }
  }

  if (!(result.residual <= lo.tol))
    throw ConvergenceError("principal eigenpair did not converge within " +
                               std::to_string(lo.max_matvecs) + " operator applications",
                           result.residual);

  const double floor = -std::max(10.0 * result.residual, lo.tol);
  for (double& v : result.nu) {
    if (v < floor) throw PerronViolation("principal eigenfunction has a negative entry " +
                                         std::to_string(v));
    if (v < 0.0) v = 0.0;
  }
  for (Index b : result.boundary) result.nu[b] = 0.0;
  result.nu[peak] = 1.0;

  if (options.compute_gap) result.gap = result.lambda - second_eigenvalue(h, result, options);
  return result;
}

SpectralResult principal_eig(double kappa, const PotentialField& field, int i, int l,
                             const SpectralOptions& options) {
  const auto boundary = extremal_boundary(field, i, l);
  const Hamiltonian h(kappa, field.values(), field.n(), boundary);
  auto result = principal_eig(h, field.vertex_at_rank(i), options);
  result.i = i;
  result.l = l;
  return result;
}

double second_eigenvalue(const Hamiltonian& h, const SpectralResult& principal,
                         const SpectralOptions& options) {
  const std::size_t interior = h.size() - h.boundary().size();
  if (interior < 2) throw InvalidArgument("restricted operator has no second eigenvalue");
  StateVector u = principal.nu;
  double norm = 0.0;
  for (double v : u) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : u) v /= norm;

  Index rival = principal.peak;
  double best = -INFINITY;
  const auto xi = h.potential();
  for (std::size_t x = 0; x < h.size(); ++x) {
    if (x == principal.peak || h.on_boundary(static_cast<Index>(x))) continue;
    if (xi[x] > best) {
      best = xi[x];
      rival = static_cast<Index>(x);
    }
  }
  const auto lo = lanczos_options(h, options, interior - 1);
  const auto lz = lanczos_largest(as_operator(h), localized_start(h, rival), {u}, lo);
  if (!lz.converged)
    throw ConvergenceError("second eigenvalue did not converge", lz.residual);
  return lz.value;
}

double spectral_gap(double kappa, const PotentialField& field, int i, int l,
                    const SpectralOptions& options) {
  const auto boundary = extremal_boundary(field, i, l);
  const Hamiltonian h(kappa, field.values(), field.n(), boundary);
  const auto result = principal_eig(h, field.vertex_at_rank(i), options);
  return result.lambda - second_eigenvalue(h, result, options);
}

BoundCheck eigen_bound_check(double kappa, const PotentialField& field, const std::vector<Index>& A,
                             double gamma, const SpectralOptions& options) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const int n = field.n();
  BoundCheck report;
  report.gamma = gamma;
  if (A.empty()) {
    report.reason = "A is empty";
    return report;
  }
  std::vector<char> in_a(field.size(), 0);
  for (Index x : A) {
    if (x >= field.size()) throw InvalidArgument("vertex of A out of range");
    in_a[x] = 1;
  }
  report.d_min = min_pairwise_distance(A, n);
  const auto xi = field.values();
  double N = -INFINITY, M = -INFINITY;
  Index top = A.front();
  for (std::size_t x = 0; x < field.size(); ++x) {
    if (in_a[x]) {
      if (xi[x] > N) {
        N = xi[x];
        top = static_cast<Index>(x);
      }
    } else {
      M = std::max(M, xi[x]);
    }
  }
  report.N = N;
  report.M = M;
  if (report.d_min <= 2) {
    report.reason = "d_min(A) <= 2";
    return report;
  }
  if (M > N - kappa) {
    report.reason = "max off A exceeds N - kappa";
    return report;
  }
  report.hypotheses_met = true;

  const double excess = gamma - (N - kappa);
  report.lhs = excess > 0.0 ? kappa / excess : INFINITY;
  report.rhs = n * (gamma - M) / kappa;
  report.admissible = excess > 0.0 && report.lhs < report.rhs;
  const double b = N - kappa - M;
  report.gamma_min = N - kappa + 0.5 * (std::sqrt(b * b + 4.0 * kappa * kappa / n) - b);

  const Hamiltonian h(kappa, xi, n);
  const auto eig = principal_eig(h, top, options);
  report.lambda1 = eig.lambda;
  const double slack = 10.0 * options.tol * h.norm_bound();
  report.lower_holds = eig.lambda >= N - kappa - slack;
  report.upper_holds = eig.lambda < gamma + slack;
  return report;
}

EigenProfile eigenfunction_profile(const SpectralResult& result, const PotentialField& field,
                                   int k) {
  if (k <= result.l || static_cast<std::size_t>(k) > field.size())
    throw InvalidArgument("profile rank k must satisfy l < k <= 2^n");
  if (result.nu.size() != field.size()) throw InvalidArgument("result and field sizes differ");
  EigenProfile p;
  double total = 0.0;
  for (double v : result.nu) {
    total += v;
    p.norm2_sq += v * v;
  }
  p.mass_off_peak = total - result.nu[result.peak];
  p.nu_at_xk = result.nu[field.vertex_at_rank(k)];
  p.log_nu_at_xk = p.nu_at_xk > 0.0 ? std::log(p.nu_at_xk) : -INFINITY;
  p.resolution_floor = 100.0 * result.residual;
  p.resolved = p.nu_at_xk > 0.0 && p.nu_at_xk >= p.resolution_floor;
  return p;
}

Eigen::MatrixXd dense_hamiltonian(double kappa, std::span<const double> potential, int n,
                                  std::span<const Index> boundary) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  require_dimension(n);
  if (potential.size() != state_size(n)) throw InvalidArgument("potential must have 2^n values");
  const auto size = static_cast<Eigen::Index>(potential.size());
  std::vector<char> mask(potential.size(), 0);
  for (Index b : boundary) {
    if (b >= potential.size()) throw InvalidArgument("boundary vertex out of range");
    mask[b] = 1;
  }
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(size, size);
  const double c = kappa / n;
  for (Eigen::Index x = 0; x < size; ++x) {
    if (mask[x]) continue;
    H(x, x) = potential[x] - kappa;
    for (int i = 0; i < n; ++i) {
      const auto z = x ^ (Eigen::Index{1} << i);
      if (!mask[z]) H(x, z) = c;
    }
  }
  return H;
}

DenseSpectrum dense_oracle(double kappa, std::span<const double> potential, int n,
                           std::span<const Index> boundary) {
  require_dimension(n);
  if (n > 10) throw InvalidArgument("dense_oracle supports n <= 10");
  const Eigen::MatrixXd full = dense_hamiltonian(kappa, potential, n, boundary);
  std::vector<char> mask(potential.size(), 0);
  for (Index b : boundary) mask[b] = 1;

  DenseSpectrum out;
  for (std::size_t x = 0; x < potential.size(); ++x)
    if (!mask[x]) out.interior.push_back(static_cast<Index>(x));
  const auto d = static_cast<Eigen::Index>(out.interior.size());
  if (d == 0) throw InvalidArgument("dense_oracle: the boundary covers every vertex");
  Eigen::MatrixXd sub(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) sub(a, b) = full(out.interior[a], out.interior[b]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
  if (eig.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  const Eigen::VectorXd values = eig.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();
  out.eigenvalues.assign(values.data(), values.data() + d);
  out.vectors = Eigen::MatrixXd::Zero(full.rows(), d);
  for (Eigen::Index a = 0; a < d; ++a) out.vectors.row(out.interior[a]) = vecs.row(a);
  out.matrix_norm = sub.norm();
  out.reconstruction_error = (sub - vecs * values.asDiagonal() * vecs.transpose()).norm();
  return out;
}

}  // namespace pam
