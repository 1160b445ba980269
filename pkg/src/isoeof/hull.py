"""Convex hull of R_{1,d-1} on [1/d, 1] and the tangent-line knee.

For d >= 3 the curve bends concave near F = 1, so its hull follows the curve
up to a knee F* and then runs straight to (1, log2 d). The knee is where the
line through (1, log2 d) touches the curve:

    R'(F*) * (1 - F*) = log2 d - R(F*).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .rcurve import r1, r1_derivative

DEFAULT_GRID = 10_000
# Distance kept from the ends of [1/d, 1] when scanning for the knee.
SCAN_MARGIN = 1e-6
SCAN_POINTS = 10_000
BISECT_WIDTH = 1e-12
DEFAULT_ENVELOPE_TOL = 1e-5


def conjectured_knee(d: int) -> float:
    return 4.0 * (d - 1) / d**2


def conjectured_slope(d: int) -> float:
    return d * np.log2(d - 1) / (d - 2)


def piecewise_eof(d: int, F, knee=None, slope=None):
    """Closed-form hull for d >= 3: 0, then R_{1,d-1}, then the tangent line.

    The line owns the knee itself. ``knee`` and ``slope`` default to the
    conjectured closed forms.
    """
    if d < 3:
        raise ValueError(f"piecewise formula needs d >= 3, got {d}")
    knee = conjectured_knee(d) if knee is None else knee
    slope = conjectured_slope(d) if slope is None else slope
    F = np.asarray(F, dtype=float)
    Fc = np.clip(F, 1.0 / d, 1.0)
    out = np.where(
        F <= 1.0 / d,
        0.0,
        np.where(F < knee, r1(d, Fc), slope * (F - 1.0) + np.log2(d)),
    )
    return float(out) if out.ndim == 0 else out


def tangency_residual(d: int, F):
    """R'(F)(1 - F) - (log2 d - R(F)); zero at the knee."""
    F = np.asarray(F, dtype=float)
    return r1_derivative(d, F) * (1.0 - F) - (np.log2(d) - r1(d, F))


def knee_scan(d: int, points: int = SCAN_POINTS, margin: float = SCAN_MARGIN):
    """Grid and residual signs used to bracket the knee."""
    grid = np.linspace(1.0 / d + margin, 1.0 - margin, points)
    return grid, np.sign(tangency_residual(d, grid))


def tangent_knee(d: int, tol: float = 1e-8) -> tuple[float, float]:
    """Knee F* and line slope (bits per unit F) of the hull of R_{1,d-1}.

    Brackets the first sign change of the tangency residual on a grid, then
    bisects to width ``BISECT_WIDTH``.
    """
    if d < 3:
        raise ValueError(f"no knee for d={d}: the curve is convex for d < 3")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    grid, signs = knee_scan(d)
    change = np.flatnonzero((signs[:-1] < 0) & (signs[1:] > 0))
    if change.size == 0:
        raise ValueError(f"tangency residual has no sign change for d={d}")
    lo, hi = grid[change[0]], grid[change[0] + 1]
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if tangency_residual(d, mid) < 0:
            lo = mid
        else:
            hi = mid
    knee = 0.5 * (lo + hi)
    slope = r1_derivative(d, knee)
    line_gap = abs(r1(d, knee) - (slope * knee + np.log2(d) - slope))
    if line_gap >= tol:
        raise ArithmeticError(f"tangency residual {line_gap:.3e} exceeds tol={tol} for d={d}")
    return float(knee), float(slope)


def lower_hull(x, y) -> np.ndarray:
    """Indices of the lower convex hull of points sorted by x (monotone chain)."""
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.asarray(hull)


@dataclass(frozen=True, eq=False)
class ConvexEnvelope:
    d: int
    knee_F: float
    slope_bits: float
    hull_F: np.ndarray
    hull_E: np.ndarray
    grid_F: np.ndarray
    grid_R: np.ndarray

    @property
    def analytic_interval(self) -> tuple[float, float]:
        return 1.0 / self.d, self.knee_F

    @property
    def line_interval(self) -> tuple[float, float]:
        return self.knee_F, 1.0

    @property
    def grid_step(self) -> float:
        return float(self.grid_F[1] - self.grid_F[0])

    def __call__(self, F):
        """Envelope value at F (0 below 1/d), by linear interpolation between hull vertices."""
        F = np.asarray(F, dtype=float)
        out = np.where(F <= 1.0 / self.d, 0.0, np.interp(F, self.hull_F, self.hull_E))
        return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=32)
def numeric_envelope(d: int, grid_points: int = DEFAULT_GRID) -> ConvexEnvelope:
    """Lower convex envelope of R_{1,d-1} sampled on a uniform grid over [1/d, 1].

    The knee is the start of the last hull edge; its slope is that edge's slope.
    """
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    if grid_points < 100:
        raise ValueError(f"grid_points must be >= 100, got {grid_points}")
    F = np.linspace(1.0 / d, 1.0, grid_points)
    R = r1(d, F)
    idx = lower_hull(F, R)
    hF, hE = F[idx], R[idx]
    slope = (hE[-1] - hE[-2]) / (hF[-1] - hF[-2])
    for arr in (F, R, hF, hE):
        arr.setflags(write=False)
    return ConvexEnvelope(d, float(hF[-2]), float(slope), hF, hE, F, R)


def second_derivative_probe(d: int, F: float, h: float = 1e-4) -> float:
    """Central-difference second derivative of R_{1,d-1} at F."""
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    if not 1.0 / d + h < F < 1.0 - h:
        raise ValueError(f"F={F!r} too close to [1/d, 1] ends for step h={h}")
    return float((r1(d, F - h) - 2.0 * r1(d, F) + r1(d, F + h)) / (h * h))


@dataclass(frozen=True)
class ConjectureReport:
    d: int
    knee_numeric: float
    knee_conjectured: float
    slope_numeric_bits: float
    slope_conjectured_bits: float
    max_envelope_deviation_bits: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "knee_numeric": self.knee_numeric,
            "knee_conjectured": self.knee_conjectured,
            "slope_numeric_bits": self.slope_numeric_bits,
            "slope_conjectured_bits": self.slope_conjectured_bits,
            "max_envelope_deviation_bits": self.max_envelope_deviation_bits,
            "pass": self.passed,
        }


def verify_conjecture(
    d: int,
    tol: float = 1e-7,
    *,
    grid_points: int = 100_000,
    envelope_tol: float = DEFAULT_ENVELOPE_TOL,
    knee=None,
    slope=None,
) -> ConjectureReport:
    """Check the closed-form knee 4(d-1)/d^2 and slope d log2(d-1)/(d-2) for one d.

    The knee and slope must match ``tangent_knee`` within ``tol``; the
    piecewise formula must match the sampled hull within ``envelope_tol`` at
    the grid points and midpoints between them. ``knee`` and ``slope``
    override the closed forms (for negative controls). Failures are
    reported in the result, never raised.
    """
    if d < 3:
        raise ValueError(f"the conjecture concerns d >= 3, got {d}")
    knee_c = conjectured_knee(d) if knee is None else float(knee)
    slope_c = conjectured_slope(d) if slope is None else float(slope)
    knee_n, slope_n = tangent_knee(d, tol)
    env = numeric_envelope(d, grid_points)
    check = np.linspace(1.0 / d, 1.0, 2 * grid_points - 1)
    deviation = float(np.max(np.abs(piecewise_eof(d, check, knee_c, slope_c) - env(check))))
    passed = (
        abs(knee_n - knee_c) < tol
        and abs(slope_n - slope_c) < tol
        and deviation < envelope_tol
    )
    return ConjectureReport(d, knee_n, knee_c, slope_n, slope_c, deviation, bool(passed))
