// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and seed
// counts are fixed here and must not be loosened.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pam/evolution.hpp"
#include "pam/fkmc.hpp"
#include "pam/harness.hpp"
#include "pam/spectral.hpp"

using namespace pam;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const double kTheta = std::sqrt(2.0 * std::numbers::ln2);

std::vector<std::uint64_t> seed_range(std::uint64_t count, std::uint64_t first = 1) {
  std::vector<std::uint64_t> s(count);
  for (std::uint64_t i = 0; i < count; ++i) s[i] = first + i;
  return s;
}

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

PropagateOptions method(PropagatorMethod m) {
  PropagateOptions o;
  o.method = m;
  return o;
}

// 1. Krylov vs dense propagation and Lanczos vs dense spectrum.
Outcome oracle_equivalence() {
  double worst_log = 0.0, worst_lambda = 0.0;
  for (int n : {4, 6, 8}) {
    for (auto seed : seed_range(20)) {
      const auto f = sample_rem(n, seed);
      const Propagator dense(1.0, f, method(PropagatorMethod::dense));
      const Propagator kry(1.0, f, method(PropagatorMethod::krylov));
      for (Index y : {f.vertex_at_rank(1), f.vertex_at_rank(static_cast<int>(f.size() / 2))}) {
        for (double t : {0.5, 2.0, 10.0}) {
          const auto a = dense.propagate(delta_state(n, y), t);
          const auto b = kry.propagate(delta_state(n, y), t);
          for (Index x = 0; x < f.size(); ++x) {
            const double la = a.log_v(x);
            // Entries below 1e-6 of the maximum are not compared.
            if (la < a.logfac + std::log(1e-6)) continue;
            worst_log = std::max(worst_log, std::abs(b.log_v(x) - la) / std::max(1.0, std::abs(la)));
          }
        }
      }
      for (auto [i, l] : {std::pair{1, 1}, {2, 2}}) {
        const auto r = principal_eig(1.0, f, i, l);
        const auto d = dense_oracle(1.0, f.values(), n, extremal_boundary(f, i, l));
        worst_lambda = std::max(worst_lambda, std::abs(r.lambda - d.eigenvalues[0]));
      }
    }
  }
  return {worst_log <= 1e-8 && worst_lambda <= 1e-10,
          "max rel log err " + fixed(worst_log) + " (<= 1e-8), max |dlambda| " +
              fixed(worst_lambda) + " (<= 1e-10)"};
}

// 2. Monte Carlo total mass within 3 standard errors of the PDE value.
Outcome feynman_kac() {
  const int n = 8;
  const double t = 1.0;
  int within = 0;
  const auto seeds = seed_range(40);
  for (auto seed : seeds) {
    const auto f = sample_rem(n, seed);
    const Index y = f.vertex_at_rank(1);
    const double exact = propagate(delta_state(n, y), 1.0, f, t).log_total_mass();
    const auto e = estimate_total_mass(y, t, 1.0, f, 100000, 1000 + seed);
    if (std::abs(e.mean - std::exp(exact)) <= 3.0 * e.std_error) ++within;
  }
  const double frac = static_cast<double>(within) / seeds.size();
  return {frac >= 0.95, std::to_string(within) + "/40 seeds within 3 SE (>= 95%)"};
}

// 3. n^2 (lambda_1 - xi_1 + kappa) in [kappa^2 / (5 theta), 5 kappa^2 / theta].
Outcome eigenvalue_asymptotics() {
  const double lo = 1.0 / (5.0 * kTheta), hi = 5.0 / kTheta;
  bool ok = true;
  std::string detail;
  for (int n : {12, 14, 16}) {
    std::vector<double> scaled;
    for (auto seed : seed_range(20)) {
      const auto f = sample_rem(n, seed);
      const auto r = principal_eig(1.0, f, 1, 1);
      scaled.push_back(n * n * (r.lambda - f.value_at_rank(1) + 1.0));
    }
    const double med = median(scaled);
    ok = ok && med >= lo && med <= hi;
    detail += "n=" + std::to_string(n) + " median " + fixed(med) + "; ";
  }
  return {ok, detail + "band [" + fixed(lo) + ", " + fixed(hi) + "]"};
}

// 4. g_{i,l} >= xi_i - xi_{l+1} - (kappa / n + 10 tol).
Outcome gap_bound() {
  const int n = 14;
  const double slack = 1.0 / n + 10.0 * 1e-12;
  int cells = 0, held = 0;
  for (auto seed : seed_range(20)) {
    const auto f = sample_rem(n, seed);
    for (int l = 1; l <= 3; ++l)
      for (int i = 1; i <= l; ++i) {
        ++cells;
        if (spectral_gap(1.0, f, i, l) >= f.value_at_rank(i) - f.value_at_rank(l + 1) - slack) ++held;
      }
  }
  return {held >= 0.95 * cells, std::to_string(held) + "/" + std::to_string(cells) + " cells (>= 95%)"};
}

// 5. median log nu_1(x_2) / (-c_n) in [0.5, 1.6] over resolved values.
Outcome eigenfunction_decay() {
  bool ok = true;
  std::string detail;
  for (int n : {12, 14, 16}) {
    std::vector<double> ratios;
    for (auto seed : seed_range(20)) {
      const auto f = sample_rem(n, seed);
      const auto r = principal_eig(1.0, f, 1, 1);
      const auto p = eigenfunction_profile(r, f, 2);
      if (p.resolved) ratios.push_back(p.log_nu_at_xk / -transition_scale(n));
    }
    if (ratios.size() < 5) {
      ok = false;
      detail += "n=" + std::to_string(n) + " only " + std::to_string(ratios.size()) + " resolved; ";
      continue;
    }
    const double med = median(ratios);
    ok = ok && med >= 0.5 && med <= 1.6;
    detail += "n=" + std::to_string(n) + " median " + fixed(med) + " (" +
              std::to_string(ratios.size()) + " resolved); ";
  }
  return {ok, detail + "band [0.5, 1.6]"};
}

ExperimentConfig sweep_config(std::vector<double> grid) {
  return config_from_json(Json{{"n", 14},
                               {"kappa", 1.0},
                               {"potential", "coupled-rem"},
                               {"seeds", seed_range(20)},
                               {"ranks", {2}},
                               {"alpha_grid", grid},
                               {"alpha_mode", "relative"},
                               {"timestamp", false}});
}

// 6. The branch prediction of the correct regime is the closer one.
Outcome growth_transition() {
  const std::vector<double> grid{0.2, 0.5, 2.0, 5.0};
  const auto config = sweep_config(grid);
  const auto rows = run_phase_sweep(config);
  bool ok = true;
  std::string detail;
  // Effective cost of reaching x_k from the top, in units of c_n; the long branch assumes 1.
  std::vector<double> cost;
  for (const auto& row : rows)
    if (row.status == "ok" && row.alpha > row.alpha_star)
      cost.push_back((row.predicted_long + config.cn() / row.t - row.growth_exponent) * row.t / config.cn());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    int good = 0, total = 0;
    for (std::size_t r = g; r < rows.size(); r += grid.size()) {
      const auto& row = rows[r];
      ++total;
      if (row.status != "ok") continue;
      const double ds = std::abs(row.growth_exponent - row.predicted_short);
      const double dl = std::abs(row.growth_exponent - row.predicted_long);
      if (grid[g] < 1.0 ? ds < dl : dl < ds) ++good;
    }
    ok = ok && good >= 0.8 * total;
    detail += fixed(grid[g]) + "a*: " + std::to_string(good) + "/" + std::to_string(total) + "; ";
  }
  return {ok, detail + "need >= 80% each; median effective cost / c_n above a* " +
                  (cost.empty() ? std::string("n/a") : fixed(median(cost)))};
}

// 7. Mass > 0.8 on the designated vertex and the crossover within a factor 3.
Outcome localization_crossover() {
  const std::vector<double> grid{0.1, 0.15, 0.2, 0.3, 0.45, 0.67, 1.0, 1.5, 2.2, 3.3, 5.0, 7.5, 10.0};
  const auto rows = run_localization_sweep(sweep_config(grid));
  const std::size_t low = 2, high = 10;  // 0.2 a* and 5 a*
  int low_ok = 0, high_ok = 0, seeds = 0;
  std::vector<double> ratio;
  for (std::size_t s = 0; s < rows.size(); s += grid.size()) {
    ++seeds;
    const auto& a = rows[s + low];
    const auto& b = rows[s + high];
    if (a.status == "ok" && a.u_at_xk > 0.8) ++low_ok;
    if (b.status == "ok" && b.u_at_x1 > 0.8) ++high_ok;
    ratio.push_back(std::isnan(rows[s].alpha_hat) ? INFINITY : rows[s].alpha_hat / rows[s].alpha_star);
  }
  const double med = median(ratio);
  const bool ok = low_ok >= 0.8 * seeds && high_ok >= 0.8 * seeds && med >= 1.0 / 3.0 && med <= 3.0;
  return {ok, "0.2a*: " + std::to_string(low_ok) + "/" + std::to_string(seeds) + ", 5a*: " +
                  std::to_string(high_ok) + "/" + std::to_string(seeds) + ", median a_hat/a* " +
                  fixed(med) + " (band [1/3, 3])"};
}

// 8. Pointwise spectral-bound inequality with 1e-9 slack.
Outcome spectral_bound() {
  int held = 0, total = 0;
  double worst = -INFINITY;
  for (auto seed : seed_range(10)) {
    const auto f = sample_rem(8, seed);
    for (double t : {1.0, 5.0}) {
      const auto r = check_spectral_bound(1.0, f, {f.vertex_at_rank(1)}, {}, t, 1e-9);
      ++total;
      held += r.holds;
      worst = std::max(worst, r.max_excess);
    }
  }
  return {held == total, std::to_string(held) + "/" + std::to_string(total) +
                             " (seed, t) pairs, max excess " + fixed(worst)};
}

// 9. median d(x_1, x_2) / n in [0.3, 0.7].
Outcome geometry() {
  const int n = 18;
  std::vector<double> ratio;
  for (auto seed : seed_range(50)) {
    const auto f = sample_rem(n, seed);
    ratio.push_back(static_cast<double>(hamming(f.vertex_at_rank(1), f.vertex_at_rank(2))) / n);
  }
  const double med = median(ratio);
  return {med >= 0.3 && med <= 0.7, "median " + fixed(med) + " over 50 seeds (band [0.3, 0.7])"};
}

// 10. Structural invariants of the solution operator.
Outcome invariants() {
  std::vector<std::string> broken;
  auto require = [&](bool cond, const std::string& what) {
    if (!cond && std::find(broken.begin(), broken.end(), what) == broken.end()) broken.push_back(what);
  };
  for (int n : {4, 6, 8}) {
    for (auto seed : seed_range(5)) {
      const auto f = sample_rem(n, seed);
      for (auto m : {PropagatorMethod::dense, PropagatorMethod::krylov}) {
        const Propagator p(1.0, f, method(m));
        const Index a = f.vertex_at_rank(1), b = f.vertex_at_rank(static_cast<int>(f.size()));
        const double t = 3.0;
        const auto va = p.propagate(delta_state(n, a), t);
        const auto vb = p.propagate(delta_state(n, b), t);
        require(std::abs(va.log_v(b) - vb.log_v(a)) <= 1e-9 * std::max(1.0, std::abs(va.log_v(b))),
                "symmetry");
        double sum = 0.0;
        for (double u : mutation_selection(va, f.values()).u) sum += u;
        require(std::abs(sum - 1.0) <= 1e-12, "sum u = 1");
        require(std::all_of(va.w.begin(), va.w.end(), [](double w) { return w >= 0.0; }), "positivity");
        auto half = p.propagate(delta_state(n, a), 1.2);
        half = p.propagate(half, t);
        for (Index x = 0; x < f.size(); ++x)
          if (va.w[x] > 1e-6)
            require(std::abs(half.log_v(x) - va.log_v(x)) <= 1e-9 * std::max(1.0, std::abs(va.log_v(x))),
                    "semigroup");
        // Flat data is the sum of all delta data.
        const auto flat = p.propagate(flat_state(n), t);
        std::vector<double> summed(f.size(), 0.0);
        for (Index y = 0; y < f.size(); ++y) {
          const auto vy = p.propagate(delta_state(n, y), t);
          for (Index x = 0; x < f.size(); ++x) summed[x] += std::exp(vy.log_v(x) - flat.logfac);
        }
        for (Index x = 0; x < f.size(); ++x)
          require(std::abs(std::log(summed[x]) + flat.logfac - flat.log_v(x)) <= 1e-9 * std::max(1.0, std::abs(flat.log_v(x))),
                  "flat-vs-delta additivity");
      }
      // Shift equivariance of lambda and nu.
      std::vector<double> shifted(f.values().begin(), f.values().end());
      for (double& v : shifted) v -= 2.75;
      const auto g = PotentialField::from_values(n, shifted);
      const auto r = principal_eig(1.0, f, 1, 2), s = principal_eig(1.0, g, 1, 2);
      require(std::abs(s.lambda - (r.lambda - 2.75)) <= 1e-10, "shift equivariance");
      for (Index x = 0; x < f.size(); ++x)
        require(std::abs(s.nu[x] - r.nu[x]) <= 1e-9, "shift equivariance");
    }
  }
  std::string detail = "symmetry, sum u = 1, shift equivariance, positivity, semigroup, additivity";
  if (!broken.empty()) {
    detail = "broken:";
    for (const auto& b : broken) detail += " " + b + ";";
  }
  return {broken.empty(), detail};
}

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds, infinite when the criterion states none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 60.0, oracle_equivalence},
      {2, "Feynman-Kac consistency", 120.0, feynman_kac},
      {3, "eigenvalue asymptotics", 300.0, eigenvalue_asymptotics},
      {4, "spectral gap bound", INFINITY, gap_bound},
      {5, "eigenfunction decay", INFINITY, eigenfunction_decay},
      {6, "growth phase transition", 600.0, growth_transition},
      {7, "localization crossover", INFINITY, localization_crossover},
      {8, "spectral-bound inequality", INFINITY, spectral_bound},
      {9, "geometry of the top two vertices", INFINITY, geometry},
      {10, "invariant suite", INFINITY, invariants},
  };
  std::vector<int> only;
  for (int a = 1; a < argc; ++a) only.push_back(std::atoi(argv[a]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.time_limit) {
      o.pass = false;
      o.detail += "; exceeded " + fixed(c.time_limit) + " s";
    }
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
