// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition on an argument violated (bad dimension, non-positive kappa, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two potential values compare equal after rounding; order statistics are undefined.
class TieError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Principal eigenvector has negative entries beyond the solver residual.
class PerronViolation : public Error {
 public:
  using Error::Error;
};

/// Adaptive time stepping shrank the substep below its floor.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace pam
