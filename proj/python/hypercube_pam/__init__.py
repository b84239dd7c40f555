# Copyright 2026 The hypercube-pam Authors
# SPDX-License-Identifier: Apache-2.0
"""Parabolic Anderson model on the hypercube."""

from ._core import (
    ConvergenceError,
    Error,
    InvalidArgument,
    MCEstimate,
    PotentialField,
    SpectralResult,
    TieError,
    dense_eigenvalues,
    estimate_endpoint,
    estimate_total_mass,
    hamming,
    laplacian_apply,
    lemma_report,
    localization_sweep_csv,
    log_solution,
    phase_sweep_csv,
    phi_rem,
    principal_eig,
    psi_rem,
    sample_coupled,
    sample_rem,
    spectral_gap,
    transition_scale,
)

__all__ = [
    "ConvergenceError",
    "Error",
    "InvalidArgument",
    "MCEstimate",
    "PotentialField",
    "SpectralResult",
    "TieError",
    "dense_eigenvalues",
    "estimate_endpoint",
    "estimate_total_mass",
    "hamming",
    "laplacian_apply",
    "lemma_report",
    "localization_sweep_csv",
    "log_solution",
    "phase_sweep_csv",
    "phi_rem",
    "principal_eig",
    "psi_rem",
    "sample_coupled",
    "sample_rem",
    "spectral_gap",
    "transition_scale",
]
