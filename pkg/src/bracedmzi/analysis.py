"""Which-path information, fringe visibility and (phi, epsilon) sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .experiments import ExperimentParams, InputKind, coincidence_curve

DEFAULT_SCAN_POINTS = 4096


class VisibilityError(ValueError):
    """The samples cannot define a fringe contrast."""


@dataclass(frozen=True)
class DualityMetrics:
    K: float
    V: float

    @property
    def residual(self) -> float:
        """``K^2 + V^2 - 1``; zero for the pure states handled here."""
        return self.K**2 + self.V**2 - 1


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def duality(epsilon: float, alpha: float = 1.0) -> DualityMetrics:
    """Which-path information and visibility of the D4/D6 coincidence fringe.

    Call with ``alpha=1`` for the plain photon-pair input.
    """
    eps = _check_unit("epsilon", epsilon)
    a = _check_unit("alpha", alpha)
    a2, e2 = a * a, eps * eps
    K = abs(2 * a2 - 1) * abs(2 * e2 - 1)
    V = 2 * math.sqrt(a2 * (1 - a2) + (2 * a2 - 1) ** 2 * e2 * (1 - e2))
    return DualityMetrics(K, V)


def phase_scan(points: int = DEFAULT_SCAN_POINTS) -> np.ndarray:
    """Uniform phases over one period, ``2*pi`` excluded."""
    return np.linspace(0.0, 2 * np.pi, points, endpoint=False)


def measured_visibility(samples: Iterable[tuple[float, float]]) -> float:
    """Fringe contrast ``(Pmax - Pmin) / (Pmax + Pmin)`` of a sampled curve.

    The samples must cover one full period of the phase with at least 8
    points. Extrema are taken directly from the samples, so the scan density
    sets the accuracy.
    """
    pts = sorted((float(phi), float(p)) for phi, p in samples)
    if len(pts) < 8:
        raise VisibilityError(f"need at least 8 samples, got {len(pts)}")
    span = pts[-1][0] - pts[0][0]
    if span < 2 * math.pi * (1 - 1 / len(pts)) - 1e-9:
        raise VisibilityError(f"samples span {span:.4g} rad, less than one period")
    probs = np.array([p for _, p in pts])
    hi, lo = probs.max(), probs.min()
    if hi + lo <= 0:
        raise VisibilityError("contrast undefined for an identically zero curve")
    return float((hi - lo) / (hi + lo))


@dataclass(frozen=True)
class SweepGrid:
    """Coincidence probability ``probabilities[i, j]`` at ``(phi_values[i], epsilon_values[j])``."""

    phi_values: np.ndarray
    epsilon_values: np.ndarray
    alpha: float
    kind: str
    probabilities: np.ndarray
    detectors: tuple[int, int] = (4, 6)

    def __post_init__(self):
        shape = (len(self.phi_values), len(self.epsilon_values))
        if self.probabilities.shape != shape:
            raise ValueError(f"probability matrix {self.probabilities.shape} does not match axes {shape}")
        for arr in (self.phi_values, self.epsilon_values, self.probabilities):
            arr.setflags(write=False)

    def rows(self):
        """``(phi, epsilon, epsilon^2, alpha, probability)`` in phi-major order."""
        for i, phi in enumerate(self.phi_values):
            for j, eps in enumerate(self.epsilon_values):
                yield float(phi), float(eps), float(eps * eps), self.alpha, float(self.probabilities[i, j])


def _column(args):
    phis, eps, alpha, kind, detectors = args
    return coincidence_curve(phis, eps, alpha, kind, detectors)


def _run(tasks: list, workers: int | None) -> list:
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_column, tasks))
    return [_column(t) for t in tasks]


def sweep_p46(
    phi_grid: Sequence[float],
    epsilon_grid: Sequence[float],
    alpha: float = 1.0,
    kind: InputKind | str = InputKind.SUPERPOSED,
    detectors: tuple[int, int] = (4, 6),
    workers: int | None = None,
) -> SweepGrid:
    """Simulated coincidence probability over a (phi, epsilon) grid.

    ``kind`` defaults to the alpha-superposed input, which is the photon pair
    at ``alpha=1``.
    """
    phis = np.asarray(phi_grid, dtype=float)
    eps = np.asarray(epsilon_grid, dtype=float)
    if phis.size == 0 or eps.size == 0:
        raise ValueError("sweep grids must be nonempty")
    for e in eps:
        ExperimentParams(0.0, e, alpha)
    kind = InputKind(kind).value
    columns = _run([(phis, e, alpha, kind, tuple(detectors)) for e in eps], workers)
    return SweepGrid(phis, eps, float(alpha), kind, np.column_stack(columns), tuple(detectors))


@dataclass
class AuditReport:
    """Outcome of :func:`duality_audit` over an (epsilon, alpha) grid."""

    max_identity_deviation: float = 0.0
    max_visibility_deviation: float = 0.0
    max_mean_deviation: float = 0.0
    worst_visibility_point: tuple[float, float] | None = None
    points: list[dict] = field(default_factory=list)

    def passed(self, identity_tol: float = 1e-10, visibility_tol: float = 1e-6, mean_tol: float = 1e-10) -> bool:
        return (
            self.max_identity_deviation < identity_tol
            and self.max_visibility_deviation < visibility_tol
            and self.max_mean_deviation < mean_tol
        )


def duality_audit(
    epsilon_grid: Sequence[float],
    alpha_grid: Sequence[float],
    scan_points: int = DEFAULT_SCAN_POINTS,
    workers: int | None = None,
) -> AuditReport:
    """Check ``K^2 + V^2 = 1`` and compare analytic V with simulated fringes.

    For each grid point the D4/D6 coincidence curve is simulated over a dense
    phase scan. Its measured contrast is compared to the analytic V, and its
    period average to the constant term 1/8.
    """
    phis = phase_scan(scan_points)
    pairs = [(float(e), float(a)) for a in alpha_grid for e in epsilon_grid]
    curves = _run([(phis, e, a, InputKind.SUPERPOSED.value, (4, 6)) for e, a in pairs], workers)
    report = AuditReport()
    for (eps, a), curve in zip(pairs, curves):
        metrics = duality(eps, a)
        measured = measured_visibility(zip(phis, curve))
        vis_dev = abs(measured - metrics.V)
        mean_dev = abs(float(curve.mean()) - 0.125)
        report.points.append(
            dict(epsilon=eps, alpha=a, K=metrics.K, V=metrics.V, measured_V=measured, residual=metrics.residual)
        )
        report.max_identity_deviation = max(report.max_identity_deviation, abs(metrics.residual))
        report.max_mean_deviation = max(report.max_mean_deviation, mean_dev)
        if vis_dev >= report.max_visibility_deviation:
            report.max_visibility_deviation = vis_dev
            report.worst_visibility_point = (eps, a)
    return report
