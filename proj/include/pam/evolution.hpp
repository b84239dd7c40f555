// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file evolution.hpp
 * @brief Overflow-safe time evolution of dv/dt = kappa*Laplacian v + xi v.
 *
 * A state stores w and a scalar log factor L with v = w * exp(L). After every
 * substep w is rescaled to max-norm 1 and the factor folded into L, so only
 * logarithms of v are ever reported.
 */

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pam/hypercube.hpp"
#include "pam/potential.hpp"

namespace pam {

struct EvolutionState {
  StateVector w;
  double logfac = 0.0;
  double t = 0.0;

  /// log v(t, x); -inf where w vanishes.
  [[nodiscard]] double log_v(Index x) const;
  /// log of the total mass sum_x v(t, x).
  [[nodiscard]] double log_total_mass() const;
};

[[nodiscard]] EvolutionState delta_state(int n, Index y);
[[nodiscard]] EvolutionState flat_state(int n);

enum class PropagatorMethod { automatic, dense, krylov };

struct PropagateOptions {
  /// Local error per unit time, relative to the 2-norm of the propagated vector.
  double tol = 1e-12;
  PropagatorMethod method = PropagatorMethod::automatic;  ///< automatic: dense for n <= 10
  int krylov_dim = 30;
  double max_step = INFINITY;     ///< cap on a single Krylov substep
  double min_step = 1e-12;        ///< substeps below this raise StiffnessError
};

/// Advances states of one restricted operator H - rho I, rho = max xi off the boundary.
class Propagator {
 public:
  Propagator(double kappa, std::span<const double> potential, int n,
             std::span<const Index> boundary = {}, PropagateOptions options = {});
  Propagator(double kappa, const PotentialField& field, PropagateOptions options = {});

  /// Evolves state to time t_end >= state.t.
  [[nodiscard]] EvolutionState propagate(EvolutionState state, double t_end) const;

  [[nodiscard]] const Hamiltonian& hamiltonian() const noexcept { return h_; }
  [[nodiscard]] double shift() const noexcept { return rho_; }
  [[nodiscard]] bool uses_dense() const noexcept { return dense_; }
  /// Krylov substeps taken over the lifetime of this object (not thread-safe to read while running).
  [[nodiscard]] long substeps() const noexcept { return substeps_; }

 private:
  void step_dense(EvolutionState& s, double dt) const;
  void step_krylov(EvolutionState& s, double t_end) const;
  void renormalize(EvolutionState& s) const;

  Hamiltonian h_;
  PropagateOptions options_;
  double rho_ = 0.0;
  bool dense_ = false;
  Eigen::VectorXd eigenvalues_;   // of H - rho I on the interior
  Eigen::MatrixXd eigenvectors_;  // interior x interior
  std::vector<Index> interior_;
  mutable long substeps_ = 0;
};

/// Free-function form: one Propagator, one call.
[[nodiscard]] EvolutionState propagate(EvolutionState state, double kappa,
                                       const PotentialField& field, double t_end,
                                       const PropagateOptions& options = {});

struct GrowthRecord {
  double t = 0.0;
  std::map<Index, double> log_v_at;
  double log_total_mass = 0.0;
  std::map<Index, double> u_at;
  double mean_fitness = 0.0;
};

/// Tracked vertices default to x_1 ... x_5 (and y for the localized start).
[[nodiscard]] std::vector<Index> default_tracked(const PotentialField& field,
                                                 std::optional<Index> y = std::nullopt);

[[nodiscard]] GrowthRecord make_record(const EvolutionState& state, const PotentialField& field,
                                       std::span<const Index> tracked);

/// Evolves delta_y and records at each (increasing) time.
[[nodiscard]] std::vector<GrowthRecord> solve_from_delta(
    Index y, double kappa, const PotentialField& field, const std::vector<double>& times,
    std::vector<Index> tracked = {}, const PropagateOptions& options = {});

/// Evolves the flat initial condition v = 1 and records at each time.
[[nodiscard]] std::vector<GrowthRecord> solve_flat(double kappa, const PotentialField& field,
                                                   const std::vector<double>& times,
                                                   std::vector<Index> tracked = {},
                                                   const PropagateOptions& options = {});

struct MutationSelection {
  StateVector u;        ///< v normalized by its total mass
  double mean_fitness;  ///< sum_x u(x) xi(x)
};

[[nodiscard]] MutationSelection mutation_selection(const EvolutionState& state,
                                                   std::span<const double> potential);

/// log v(t, vertex) / t at the last record.
[[nodiscard]] double growth_exponent(const std::vector<GrowthRecord>& records, Index vertex);

/// c_n = n log(n) / 2.
[[nodiscard]] double transition_scale(int n);

/// CSV with columns t,alpha,rank,log_v,log_total_mass,u,mean_fitness; one line per tracked vertex.
void write_growth_csv(std::ostream& out, const std::vector<GrowthRecord>& records,
                      const PotentialField& field);

}  // namespace pam
