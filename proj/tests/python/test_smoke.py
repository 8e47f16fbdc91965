"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

try:
    import qcasim as m
except ImportError:  # standalone extension built by CMake, not pip-installed
    import _core as m


def test_gate_unitary_and_absorbing_state():
    gate = m.build_gate(0.997, 1.0)
    u = gate["unitary"]
    assert u.shape == (8, 8)
    assert np.max(np.abs(u @ u.conj().T - np.eye(8))) < 1e-12
    vacuum = np.zeros(8)
    vacuum[0] = 1.0
    assert np.max(np.abs(u @ vacuum - vacuum)) < 1e-12
    assert all(b <= 4 for b in gate["mpo_bonds"])


def test_one_step_closed_form():
    gamma = 0.9
    out = m.run_trajectory(gamma=gamma, omega=0.0, chi=16, t_max=1)
    assert out["N"][0] == pytest.approx(2 * math.sin(gamma) ** 2, abs=1e-10)
    assert out["L"][0] == 2


def test_trajectory_matches_dense_reference():
    out = m.run_trajectory(gamma=1.034, omega=1.0, chi=256, t_max=4, svd_cutoff=0.0)
    dense = m.dense_occupation_series(1.034, omega=1.0, t_max=4)
    assert np.max(np.abs(out["N"] - dense)) < 1e-8


def test_vacuum_is_absorbing():
    out = m.run_trajectory(gamma=1.2, omega=1.0, chi=8, t_max=10, vacuum_initial=True)
    assert np.max(out["N"]) < 1e-14


def test_dkca_deterministic_and_pyramidal():
    a = m.dk_run(p1=1.0, p2=1.0, t_max=10, runs=1, rng_seed=5)
    assert np.array_equal(a["N"], np.arange(2, 12))
    b = m.dk_run(p1=0.6, p2=0.6, t_max=30, runs=500, rng_seed=7, workers=2)
    c = m.dk_run(p1=0.6, p2=0.6, t_max=30, runs=500, rng_seed=7, workers=1)
    assert np.array_equal(b["N"], c["N"])


def test_effective_exponent_power_law():
    t = np.arange(1, 65, dtype=np.int32)
    n = t.astype(float) ** 0.314
    te, theta = m.effective_exponent(t, n)
    assert np.all(te % 2 == 0)
    assert np.max(np.abs(theta - 0.314)) < 1e-12


def test_estimate_critical_synthetic():
    t = np.arange(1, 101, dtype=np.int32)
    data = {}
    for gamma in (0.98, 1.0, 1.02):
        curvature = 2e-4 * (gamma - 1.0)
        n = t.astype(float) ** 0.31 * np.exp(curvature * t.astype(float) ** 2)
        data[gamma] = (t, n)
    est = m.estimate_critical(data, (50, 100))
    assert est["gamma_c"] == pytest.approx(1.0)
    assert est["theta"] == pytest.approx(0.31, abs=1e-6)
