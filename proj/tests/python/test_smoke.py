# Copyright 2026 The hypercube-pam Authors
# SPDX-License-Identifier: Apache-2.0

import csv
import io
import math

import numpy as np
import pytest

import hypercube_pam as pam


def test_tail_functions():
    assert pam.psi_rem(1.0, 4) == pytest.approx(0.67494992752840491055, rel=1e-12)
    assert pam.phi_rem(0.0, 4) == pytest.approx(math.log(2.0), rel=1e-14)
    with pytest.raises(ValueError):
        pam.psi_rem(0.0, 4)


def test_field_sampling_and_round_trip():
    field = pam.sample_rem(8, 3)
    assert len(field) == 256
    assert field.values[field.vertex_at_rank(1)] == field.values.max()
    again = pam.PotentialField.from_json(field.to_json())
    assert np.array_equal(again.values, field.values)
    coupled = pam.sample_coupled(6, 2, tail="exponential")
    assert coupled.sigma is not None and coupled.sigma.shape == (64,)
    with pytest.raises(ValueError):
        pam.PotentialField.from_values(1, np.array([1.0, 1.0]))


def test_laplacian_parity():
    n = 5
    parity = np.array([(-1.0) ** bin(x).count("1") for x in range(2**n)])
    assert np.allclose(pam.laplacian_apply(parity, n), -2.0 * parity)


def test_principal_eigenpair_matches_dense():
    field = pam.sample_rem(7, 5)
    res = pam.principal_eig(1.0, field, 1, 2, gap=True)
    boundary = [field.vertex_at_rank(2)]
    dense = pam.dense_eigenvalues(1.0, field, boundary)
    assert res.eigenvalue == pytest.approx(dense[0], abs=1e-10)
    assert res.gap == pytest.approx(dense[0] - dense[1], abs=1e-8)
    assert res.vector[res.peak] == 1.0
    assert (res.vector >= 0).all()
    assert res.boundary == boundary


def test_evolution_dense_and_krylov_agree():
    field = pam.sample_rem(6, 1)
    y = field.vertex_at_rank(1)
    a = pam.log_solution(1.0, field, 2.0, y=y, method="dense")
    b = pam.log_solution(1.0, field, 2.0, y=y, method="krylov")
    keep = a > a.max() + math.log(1e-6)
    assert np.allclose(a[keep], b[keep], rtol=1e-8, atol=1e-8)
    flat = pam.log_solution(1.0, field, 1.0)
    assert np.isfinite(flat).all()


def test_monte_carlo_total_mass():
    field = pam.sample_rem(6, 4)
    y = field.vertex_at_rank(1)
    est = pam.estimate_total_mass(y, 0.5, 1.0, field, 20000, 7)
    log_v = pam.log_solution(1.0, field, 0.5, y=y, method="dense")
    exact = np.exp(log_v).sum()
    assert abs(est.mean - exact) < 5 * est.std_error
    assert est.n_samples == 20000


def test_sweep_csv_and_lemma_report():
    config = {
        "n": 6,
        "potential": "coupled-rem",
        "seeds": [1, 2],
        "ranks": [2],
        "alpha_grid": [0.5, 2.0],
        "timestamp": False,
    }
    text = pam.phase_sweep_csv(config)
    rows = list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))
    assert len(rows) == 4
    assert all(r["status"] == "ok" for r in rows)
    loc = pam.localization_sweep_csv(config)
    assert "alpha_hat" in loc
    report = pam.lemma_report({"n": 6, "potential": "constant", "seeds": [1],
                               "lemma_n": [6], "small_n": 5, "lemma_times": [1.0],
                               "geometry_n": 6, "geometry_seeds": 2})
    assert report["passed"]
    with pytest.raises(ValueError):
        pam.phase_sweep_csv({"bogus": 1})
