// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "pam/spectral.hpp"

namespace pam {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
      throw InvalidArgument("times must be finite and nonnegative");
    if (i > 0 && !(times[i] > times[i - 1])) throw InvalidArgument("times must be increasing");
  }
}

}  // namespace

double EvolutionState::log_v(Index x) const {
  if (x >= w.size()) throw InvalidArgument("vertex out of range");
  return w[x] > 0.0 ? logfac + std::log(w[x]) : -INFINITY;
}

double EvolutionState::log_total_mass() const {
  double total = 0.0;
  for (double v : w) total += v;
  return total > 0.0 ? logfac + std::log(total) : -INFINITY;
}

EvolutionState delta_state(int n, Index y) {
  require_dimension(n);
  if (y >= state_size(n)) throw InvalidArgument("vertex out of range");
  EvolutionState s;
  s.w.assign(state_size(n), 0.0);
  s.w[y] = 1.0;
  return s;
}

EvolutionState flat_state(int n) {
  require_dimension(n);
  EvolutionState s;
  s.w.assign(state_size(n), 1.0);
  return s;
}

Propagator::Propagator(double kappa, std::span<const double> potential, int n,
                       std::span<const Index> boundary, PropagateOptions options)
    : h_(kappa, potential, n, boundary), options_(options) {
  if (!(options_.tol > 0.0)) throw InvalidArgument("propagation tolerance must be positive");
  if (options_.krylov_dim < 2) throw InvalidArgument("krylov_dim must be at least 2");
  rho_ = h_.max_potential();
  dense_ = options_.method == PropagatorMethod::dense ||
           (options_.method == PropagatorMethod::automatic && n <= 10);
  if (dense_) {
    if (n > 10) throw InvalidArgument("dense propagation supports n <= 10");
    const auto spectrum = dense_oracle(kappa, potential, n, boundary);
    interior_ = spectrum.interior;
    const auto d = static_cast<Eigen::Index>(interior_.size());
    eigenvalues_.resize(d);
    eigenvectors_.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      eigenvalues_(j) = spectrum.eigenvalues[static_cast<std::size_t>(j)] - rho_;
      for (Eigen::Index a = 0; a < d; ++a)
        eigenvectors_(a, j) = spectrum.vectors(interior_[static_cast<std::size_t>(a)], j);
    }
  }
}

Propagator::Propagator(double kappa, const PotentialField& field, PropagateOptions options)
    : Propagator(kappa, field.values(), field.n(), {}, options) {}

void Propagator::renormalize(EvolutionState& s) const {
  double top = 0.0, low = 0.0;
  for (double v : s.w) {
    top = std::max(top, v);
    low = std::min(low, v);
  }
  if (!(top > 0.0) || !std::isfinite(top))
    throw Error("propagation lost the solution (zero or non-finite mass)");
  if (low < -1e-8 * top)
    throw Error("propagation produced a negative entry " + format_double(low / top) +
                " relative to the maximum");
  const double inv = 1.0 / top;
  for (double& v : s.w) v = v > 0.0 ? v * inv : 0.0;
  for (Index b : h_.boundary()) s.w[b] = 0.0;
  s.logfac += std::log(top);
}

void Propagator::step_dense(EvolutionState& s, double dt) const {
  const auto d = static_cast<Eigen::Index>(interior_.size());
  VectorXd local(d);
  for (Eigen::Index a = 0; a < d; ++a) local(a) = s.w[interior_[static_cast<std::size_t>(a)]];
  const VectorXd coef = eigenvectors_.transpose() * local;
  // Shift exponents by their maximum so nothing underflows when dt is large.
  double top = -INFINITY;
  for (Eigen::Index j = 0; j < d; ++j)
    if (coef(j) != 0.0) top = std::max(top, dt * eigenvalues_(j) + std::log(std::abs(coef(j))));
  if (!std::isfinite(top)) throw Error("dense propagation of a zero state");
  VectorXd scaled(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    scaled(j) = coef(j) == 0.0 ? 0.0
                               : std::copysign(std::exp(dt * eigenvalues_(j) +
                                                        std::log(std::abs(coef(j))) - top),
                                               coef(j));
  }
  local.noalias() = eigenvectors_ * scaled;
  std::fill(s.w.begin(), s.w.end(), 0.0);
  for (Eigen::Index a = 0; a < d; ++a) s.w[interior_[static_cast<std::size_t>(a)]] = local(a);
  s.logfac += top + dt * rho_;
  s.t += dt;
  renormalize(s);
}

void Propagator::step_krylov(EvolutionState& s, double t_end) const {
  const auto size = static_cast<Eigen::Index>(s.w.size());
  const std::size_t interior = h_.size() - h_.boundary().size();
  const int m = static_cast<int>(std::min<std::size_t>(options_.krylov_dim, interior));
  const double scale = h_.norm_bound();

  MatrixXd basis(size, m + 1);
  MatrixXd tri = MatrixXd::Zero(m + 1, m + 1);
  VectorXd u(size);

  double h = std::min({t_end - s.t, options_.max_step, 10.0 / scale});
  while (s.t < t_end) {
    // Absorb a trailing sliver into this step rather than leaving it for the next.
    if (t_end - s.t <= h * (1.0 + 1e-9)) h = t_end - s.t;
    const Eigen::Map<const VectorXd> w(s.w.data(), size);
    const double beta0 = w.norm();
    basis.col(0) = w / beta0;
    int k = m;
    double beta_m = 0.0;
    for (int j = 0; j < m; ++j) {
      h_.apply(std::span<const double>(basis.col(j).data(), s.w.size()),
               std::span<double>(u.data(), s.w.size()));
      u -= rho_ * basis.col(j);
      VectorXd c = basis.leftCols(j + 1).transpose() * u;
      u.noalias() -= basis.leftCols(j + 1) * c;
      const VectorXd c2 = basis.leftCols(j + 1).transpose() * u;
      u.noalias() -= basis.leftCols(j + 1) * c2;
      c += c2;
      for (int i = 0; i <= j; ++i) tri(i, j) = tri(j, i) = c(i);
      const double beta = u.norm();
      if (beta <= 1e-14 * scale) {
        k = j + 1;
        beta_m = 0.0;
        break;
      }
      basis.col(j + 1) = u / beta;
      tri(j + 1, j) = tri(j, j + 1) = beta;
      beta_m = beta;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(tri.topLeftCorner(k, k));
    const double top = eig.eigenvalues()(k - 1);
    // The approximation from one basis vector fewer gives a second, more
    // conservative error estimate.
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig_prev;
    if (k >= 2) eig_prev.compute(tri.topLeftCorner(k - 1, k - 1));
    auto krylov_exp = [&](const Eigen::SelfAdjointEigenSolver<MatrixXd>& es) {
      const VectorXd e =
          ((h * (es.eigenvalues().array() - top)).exp() * es.eigenvectors().row(0).transpose().array())
              .matrix();
      return VectorXd(es.eigenvectors() * e);
    };

    bool first_try = true;
    for (;;) {
      const VectorXd f = krylov_exp(eig);
      double err = beta0 * beta_m * std::abs(f(k - 1));
      if (k >= 2 && beta_m > 0.0) {
        const VectorXd g = krylov_exp(eig_prev);
        const double diff = std::hypot((f.head(k - 1) - g).norm(), f(k - 1));
        err = std::max(err, beta0 * diff);
      }
      const double ynorm = beta0 * f.norm();
      // Below 16 eps the estimates measure rounding, not truncation.
      if (err <= std::max(options_.tol * h, 16.0 * kEps) * ynorm) {
        const VectorXd next = basis.leftCols(k) * (beta0 * f);
        std::copy(next.data(), next.data() + size, s.w.begin());
        s.logfac += h * (rho_ + top);
        s.t = (t_end - s.t <= h) ? t_end : s.t + h;
        renormalize(s);
        ++substeps_;
        break;
      }
      h *= 0.5;
      first_try = false;
      if (h < options_.min_step)
        throw StiffnessError("Krylov substep fell below " + format_double(options_.min_step));
    }
    if (first_try) h = std::min(2.0 * h, options_.max_step);
  }
}

EvolutionState Propagator::propagate(EvolutionState state, double t_end) const {
  if (state.w.size() != h_.size()) throw InvalidArgument("state has the wrong length");
  if (!(t_end >= state.t) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be >= t");
  check_state(state.w, h_.dim());
  for (Index b : h_.boundary()) state.w[b] = 0.0;
  if (t_end == state.t) return state;
  renormalize(state);
  if (dense_) {
    step_dense(state, t_end - state.t);
    state.t = t_end;
  } else {
    step_krylov(state, t_end);
  }
  return state;
}

EvolutionState propagate(EvolutionState state, double kappa, const PotentialField& field,
                         double t_end, const PropagateOptions& options) {
  return Propagator(kappa, field, options).propagate(std::move(state), t_end);
}

std::vector<Index> default_tracked(const PotentialField& field, std::optional<Index> y) {
  std::vector<Index> tracked;
  const int top = static_cast<int>(std::min<std::size_t>(5, field.size()));
  for (int k = 1; k <= top; ++k) tracked.push_back(field.vertex_at_rank(k));
  if (y && std::find(tracked.begin(), tracked.end(), *y) == tracked.end()) tracked.push_back(*y);
  return tracked;
}

MutationSelection mutation_selection(const EvolutionState& state,
                                     std::span<const double> potential) {
  if (potential.size() != state.w.size()) throw InvalidArgument("potential and state differ in length");
  double total = 0.0;
  for (double v : state.w) total += v;
  if (!(total > 0.0) || !std::isfinite(total))
    throw InvalidArgument("mutation_selection: total mass must be positive and finite");
  MutationSelection out;
  out.u.resize(state.w.size());
  out.mean_fitness = 0.0;
  for (std::size_t x = 0; x < state.w.size(); ++x) {
    out.u[x] = state.w[x] / total;
    out.mean_fitness += out.u[x] * potential[x];
  }
  return out;
}

GrowthRecord make_record(const EvolutionState& state, const PotentialField& field,
                         std::span<const Index> tracked) {
  const auto ms = mutation_selection(state, field.values());
  GrowthRecord r;
  r.t = state.t;
  r.log_total_mass = state.log_total_mass();
  r.mean_fitness = ms.mean_fitness;
  for (Index x : tracked) {
    r.log_v_at[x] = state.log_v(x);
    r.u_at[x] = ms.u[x];
  }
  return r;
}

namespace {

std::vector<GrowthRecord> solve(EvolutionState state, double kappa, const PotentialField& field,
                                const std::vector<double>& times, const std::vector<Index>& tracked,
                                const PropagateOptions& options) {
  check_times(times);
  const Propagator prop(kappa, field, options);
  std::vector<GrowthRecord> records;
  records.reserve(times.size());
  for (double t : times) {
    state = prop.propagate(std::move(state), t);
    records.push_back(make_record(state, field, tracked));
  }
  return records;
}

}  // namespace

std::vector<GrowthRecord> solve_from_delta(Index y, double kappa, const PotentialField& field,
                                           const std::vector<double>& times,
                                           std::vector<Index> tracked,
                                           const PropagateOptions& options) {
  if (tracked.empty()) tracked = default_tracked(field, y);
  return solve(delta_state(field.n(), y), kappa, field, times, tracked, options);
}

std::vector<GrowthRecord> solve_flat(double kappa, const PotentialField& field,
                                     const std::vector<double>& times, std::vector<Index> tracked,
                                     const PropagateOptions& options) {
  if (tracked.empty()) tracked = default_tracked(field);
  return solve(flat_state(field.n()), kappa, field, times, tracked, options);
}

double growth_exponent(const std::vector<GrowthRecord>& records, Index vertex) {
  if (records.empty() || !(records.back().t > 0.0))
    throw InvalidArgument("growth_exponent needs a record with t > 0");
  const auto it = records.back().log_v_at.find(vertex);
  if (it == records.back().log_v_at.end()) throw InvalidArgument("vertex was not tracked");
  return it->second / records.back().t;
}

double transition_scale(int n) {
  require_dimension(n);
  return 0.5 * n * std::log(static_cast<double>(n));
}

void write_growth_csv(std::ostream& out, const std::vector<GrowthRecord>& records,
                      const PotentialField& field) {
  const double cn = transition_scale(field.n());
  out << "t,alpha,rank,log_v,log_total_mass,u,mean_fitness\n";
  for (const auto& r : records) {
    for (const auto& [x, log_v] : r.log_v_at) {
      out << format_double(r.t) << ',' << format_double(cn > 0.0 ? r.t / cn : NAN) << ','
          << field.rank_of(x) << ',' << format_double(log_v) << ','
          << format_double(r.log_total_mass) << ',' << format_double(r.u_at.at(x)) << ','
          << format_double(r.mean_fitness) << '\n';
    }
  }
}

}  // namespace pam
