// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "pam/hypercube.hpp"

using namespace pam;

namespace {

// Explicit dense restricted operator built straight from the definition.
Eigen::MatrixXd explicit_matrix(double kappa, const std::vector<double>& xi, int n,
                                const std::vector<Index>& boundary) {
  const int size = 1 << n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  auto inside = [&](int x) {
    return std::find(boundary.begin(), boundary.end(), static_cast<Index>(x)) == boundary.end();
  };
  for (int x = 0; x < size; ++x) {
    if (!inside(x)) continue;
    m(x, x) = xi[x] - kappa;
    for (int y = 0; y < size; ++y)
      if (y != x && std::popcount(static_cast<unsigned>(x ^ y)) == 1 && inside(y)) m(x, y) = kappa / n;
  }
  return m;
}

std::vector<double> random_vector(std::size_t size, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(size);
  for (double& x : v) x = dist(gen);
  return v;
}

}  // namespace

TEST_CASE("neighbors are single-bit flips") {
  auto idx = [](const std::vector<Vertex>& vs) {
    std::vector<Index> out;
    for (const auto& v : vs) out.push_back(v.index());
    return out;
  };
  CHECK(idx(neighbors(Vertex(0b000, 3))) == std::vector<Index>{0b001, 0b010, 0b100});
  CHECK(idx(neighbors(Vertex(0b1, 1))) == std::vector<Index>{0b0});
  CHECK(idx(neighbors(Vertex(0b1010, 4))) == std::vector<Index>{0b1011, 0b1000, 0b1110, 0b0010});
  for (const auto& z : neighbors(Vertex(0b10110, 5))) CHECK(hamming(z.index(), 0b10110U) == 1);
}

TEST_CASE("vertex validation") {
  CHECK_THROWS_AS(Vertex(8, 3), InvalidArgument);
  CHECK_THROWS_AS(Vertex(0, 0), InvalidArgument);
  CHECK_THROWS_AS(Vertex(0, 25), InvalidArgument);
  CHECK(Vertex(0b101, 3).spin(0) == 1);
  CHECK(Vertex(0b101, 3).spin(1) == -1);
}

TEST_CASE("hamming distance") {
  CHECK(hamming(0b101U, 0b011U) == 2);
  CHECK(hamming(0b1101U, 0b1101U) == 0);
  CHECK(hamming(Vertex(0b0000, 4), Vertex(0b1111, 4)) == 4);
  for (Index x = 0; x < 16; ++x)
    for (Index y = 0; y < 16; ++y) {
      CHECK(hamming(x, y) == hamming(y, x));
      for (Index z = 0; z < 16; ++z) CHECK(hamming(x, z) <= hamming(x, y) + hamming(y, z));
    }
}

TEST_CASE("laplacian of constants and the two-point space") {
  const auto zero = laplacian_apply(std::vector<double>(64, 3.25), 6);
  for (double v : zero) CHECK(v == 0.0);
  const auto two = laplacian_apply(std::vector<double>{1.5, -0.25}, 1);
  CHECK(two[0] == doctest::Approx(-1.75));
  CHECK(two[1] == doctest::Approx(1.75));
}

TEST_CASE("parity is an eigenvector with eigenvalue -2") {
  const int n = 7;
  std::vector<double> f(1 << n);
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = std::popcount(x) % 2 ? -1.0 : 1.0;
  const auto g = laplacian_apply(f, n);
  for (std::size_t x = 0; x < f.size(); ++x) CHECK(g[x] == doctest::Approx(-2.0 * f[x]));
}

TEST_CASE("laplacian symmetry and zero column sums") {
  const int n = 6;
  const auto f = random_vector(64, 1), g = random_vector(64, 2);
  const auto lf = laplacian_apply(f, n), lg = laplacian_apply(g, n);
  double a = 0, b = 0, sum = 0;
  for (int x = 0; x < 64; ++x) {
    a += g[x] * lf[x];
    b += lg[x] * f[x];
    sum += lf[x];
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
  CHECK(std::abs(sum) < 1e-12);
}

TEST_CASE("laplacian spectrum against dense diagonalization") {
  for (int n = 1; n <= 8; ++n) {
    const double kappa = 0.8;
    const auto m = explicit_matrix(kappa, std::vector<double>(1 << n, 0.0), n, {});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    std::vector<double> expect;
    for (int k = 0; k <= n; ++k) {
      double binom = 1;
      for (int j = 1; j <= k; ++j) binom = binom * (n - k + j) / j;
      for (int r = 0; r < static_cast<int>(binom); ++r) expect.push_back(-2.0 * kappa * k / n);
    }
    std::sort(expect.begin(), expect.end());
    REQUIRE(expect.size() == static_cast<std::size_t>(1 << n));
    for (int i = 0; i < (1 << n); ++i) CHECK(eig.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("hamiltonian matches the explicit matrix with and without boundary") {
  for (int n = 1; n <= 6; ++n) {
    const auto xi = random_vector(1 << n, 10 + n);
    const auto f = random_vector(1 << n, 20 + n);
    std::vector<Index> boundary;
    if (n >= 2) boundary = {0, static_cast<Index>((1 << n) - 1), 3};
    if (n == 2) boundary = {1};
    for (const auto& b : {std::vector<Index>{}, boundary}) {
      const double kappa = 1.3;
      const auto got = hamiltonian_apply(f, kappa, xi, b);
      const Eigen::VectorXd want =
          explicit_matrix(kappa, xi, n, b) * Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
      for (int x = 0; x < (1 << n); ++x) CHECK(got[x] == doctest::Approx(want(x)).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("hamiltonian trivial cases") {
  const int n = 5;
  const auto ones = std::vector<double>(32, 1.0);
  for (double v : hamiltonian_apply(ones, 2.0, std::vector<double>(32, 0.0), {})) CHECK(v == 0.0);
  const auto f = random_vector(32, 3);
  const auto shifted = hamiltonian_apply(f, 0.5, std::vector<double>(32, 1.75), {});
  const auto lap = laplacian_apply(f, n);
  for (int x = 0; x < 32; ++x) CHECK(shifted[x] == doctest::Approx(0.5 * lap[x] + 1.75 * f[x]));
  CHECK_THROWS_AS((void)hamiltonian_apply(f, 0.0, std::vector<double>(32, 0.0), {}), InvalidArgument);
  CHECK_THROWS_AS((void)hamiltonian_apply(f, -1.0, std::vector<double>(32, 0.0), {}), InvalidArgument);
}

TEST_CASE("boundary values are never read and results vanish there") {
  const int n = 6;
  const auto xi = random_vector(64, 7);
  auto f = random_vector(64, 8);
  const std::vector<Index> boundary{5, 17, 40};
  const Hamiltonian h(1.0, xi, n, boundary);
  const auto base = h.apply(f);
  for (Index b : boundary) f[b] = 1e300;
  const auto poisoned = h.apply(f);
  for (int x = 0; x < 64; ++x) CHECK(poisoned[x] == base[x]);
  for (Index b : boundary) CHECK(base[b] == 0.0);
}

TEST_CASE("hamiltonian is self-adjoint") {
  const int n = 7;
  const auto xi = random_vector(128, 9);
  const Hamiltonian h(0.9, xi, n, std::vector<Index>{1, 2, 100});
  const auto f = random_vector(128, 11), g = random_vector(128, 12);
  const auto hf = h.apply(f), hg = h.apply(g);
  double a = 0, b = 0;
  for (int x = 0; x < 128; ++x) {
    a += g[x] * hf[x];
    b += hg[x] * f[x];
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("state checks") {
  CHECK_THROWS_AS(check_state(std::vector<double>(7, 0.0), 3), InvalidArgument);
  CHECK_THROWS_AS(check_state(std::vector<double>{0, NAN}, 1), InvalidArgument);
  CHECK_NOTHROW(check_state(std::vector<double>(8, 0.0), 3));
  CHECK_THROWS_AS(Hamiltonian(1.0, std::vector<double>{0.0, INFINITY}, 1), InvalidArgument);
}
