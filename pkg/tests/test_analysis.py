import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bracedmzi.analysis import (
    DEFAULT_SCAN_POINTS,
    SweepGrid,
    VisibilityError,
    duality,
    duality_audit,
    measured_visibility,
    phase_scan,
    sweep_p46,
)
from bracedmzi.experiments import coincidence_curve

S2 = math.sqrt(2)
unit = st.floats(0, 1)


@pytest.mark.parametrize(
    "eps,alpha,K,V,tol",
    [
        (1 / S2, 1.0, 0.0, 1.0, 1e-12),
        (0.6, 1.0, 0.28, 0.96, 1e-12),
        (1.0, 1.0, 1.0, 0.0, 1e-12),
        (0.3, 1 / S2, 0.0, 1.0, 1e-12),
        # quoted to two decimals
        (0.0, 0.9, 0.62, 0.78, 0.005),
    ],
)
def test_duality_values(eps, alpha, K, V, tol):
    m = duality(eps, alpha)
    assert m.K == pytest.approx(K, abs=tol)
    assert m.V == pytest.approx(V, abs=tol)


def test_duality_range_errors():
    with pytest.raises(ValueError):
        duality(1.1)
    with pytest.raises(ValueError):
        duality(0.5, -0.2)


@given(unit, unit)
def test_duality_saturates_bound(eps, alpha):
    assert abs(duality(eps, alpha).residual) < 1e-10


@given(unit, unit)
def test_which_path_symmetric_under_swapping_ports(eps, alpha):
    mirrored = math.sqrt(1 - eps * eps)
    assert duality(eps, alpha).K == pytest.approx(duality(mirrored, alpha).K, abs=1e-10)


def samples(fn, n=DEFAULT_SCAN_POINTS):
    phis = phase_scan(n)
    return list(zip(phis, fn(phis)))


def test_measured_visibility_full_fringe():
    assert measured_visibility(samples(lambda p: (1 - np.cos(p)) / 8)) == pytest.approx(1.0, abs=1e-12)


def test_measured_visibility_flat():
    assert measured_visibility(samples(lambda p: np.full_like(p, 0.125))) == 0.0


def test_measured_visibility_partial():
    eps = 0.5
    v = 2 * eps * math.sqrt(1 - eps * eps)
    got = measured_visibility(samples(lambda p: (1 - v * np.cos(p)) / 8))
    assert got == pytest.approx(0.8660254037844386, abs=1e-12)


def test_measured_visibility_errors():
    with pytest.raises(VisibilityError):
        measured_visibility([(0.0, 0.1)] * 4)
    with pytest.raises(VisibilityError):
        measured_visibility(list(zip(np.linspace(0, 1, 16), np.ones(16))))
    with pytest.raises(VisibilityError):
        measured_visibility(samples(np.zeros_like, 16))


@pytest.mark.parametrize("n", [8, 256])
def test_measured_visibility_accepts_minimal_scans(n):
    assert measured_visibility(samples(lambda p: (1 + np.cos(p)) / 2, n)) == pytest.approx(1.0)


def test_sweep_particle_like_column():
    phis = np.linspace(0, 2 * np.pi, 64)
    eps = np.linspace(0, 1, 21)
    grid = sweep_p46(phis, eps, alpha=1.0)
    assert grid.probabilities.shape == (64, 21)
    np.testing.assert_allclose(grid.probabilities[:, 0], 0.125, atol=1e-12)


def test_sweep_maximum():
    phis = np.linspace(0, 2 * np.pi, 65)
    eps = np.array([0.0, 0.5, 1 / S2, 0.9, 1.0])
    grid = sweep_p46(phis, eps)
    i, j = np.unravel_index(grid.probabilities.argmax(), grid.probabilities.shape)
    assert grid.probabilities.max() == pytest.approx(0.25, abs=1e-12)
    assert phis[i] == pytest.approx(np.pi) and eps[j] == pytest.approx(1 / S2)


def test_sweep_balanced_superposition_columns_identical():
    phis = np.linspace(0, 2 * np.pi, 32)
    grid = sweep_p46(phis, np.linspace(0, 1, 11), alpha=1 / S2)
    for col in grid.probabilities.T:
        np.testing.assert_allclose(col, (1 - np.sin(phis)) / 8, atol=1e-12)


def test_sweep_parallel_matches_serial():
    phis, eps = np.linspace(0, 6, 9), np.linspace(0, 1, 4)
    a = sweep_p46(phis, eps, 0.9, workers=2)
    b = sweep_p46(phis, eps, 0.9)
    np.testing.assert_array_equal(a.probabilities, b.probabilities)


def test_sweep_rows_and_validation():
    grid = sweep_p46([0.0, 1.0], [0.0, 0.5], 0.9)
    rows = list(grid.rows())
    assert [r[:2] for r in rows] == [(0.0, 0.0), (0.0, 0.5), (1.0, 0.0), (1.0, 0.5)]
    assert rows[1][2] == 0.25 and rows[1][3] == 0.9
    with pytest.raises(ValueError):
        sweep_p46([], [0.5])
    with pytest.raises(ValueError):
        sweep_p46([0.0], [1.5])
    with pytest.raises(ValueError):
        SweepGrid(np.zeros(2), np.zeros(3), 1.0, "pair", np.zeros((3, 2)))
    assert ((grid.probabilities >= 0) & (grid.probabilities <= 1)).all()


def test_audit_small_grid():
    report = duality_audit([0.0, 0.6, 1 / S2, 1.0], [1.0, 0.9])
    assert report.passed()
    assert report.max_identity_deviation < 1e-10
    assert report.max_visibility_deviation < 1e-6
    assert len(report.points) == 8
    p = next(p for p in report.points if p["epsilon"] == 0.6 and p["alpha"] == 1.0)
    assert p["K"] == pytest.approx(0.28) and p["V"] == pytest.approx(0.96)


def test_audit_boundary():
    report = duality_audit([1.0], [1.0])
    assert report.points[0]["K"] == 1 and report.points[0]["V"] == 0
    assert report.passed()


@given(unit, unit)
def test_period_mean_is_one_eighth(eps, alpha):
    curve = coincidence_curve(phase_scan(64), eps, alpha, "superposed")
    assert curve.mean() == pytest.approx(0.125, abs=1e-10)
