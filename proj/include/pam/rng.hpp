// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pam {

/// Deterministic random stream keyed by (seed, stream id).
///
/// Distinct stream ids give independent engines, so a worker that owns a
/// stream produces the same draws whatever the thread count. The variate
/// transforms are written out here rather than taken from <random> so the
/// sequence does not depend on the standard library implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x70616dU};
    engine_.seed(seq);
  }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal by the Box-Muller transform; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  /// Uniform integer in [0, bound), rejection sampled so it is unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= limit) return r % bound;
    }
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pam
