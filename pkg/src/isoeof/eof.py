"""Entanglement of formation of isotropic states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import binary_entropy
from .hull import DEFAULT_GRID, conjectured_knee, numeric_envelope, piecewise_eof
from .rcurve import r1

SEPARABLE = "separable"
ANALYTIC = "analytic"
LINEAR = "linear"


@dataclass(frozen=True)
class EofResult:
    d: int
    F: float
    value_bits: float
    regime: str
    source: str

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "F": self.F,
            "E_bits": self.value_bits,
            "regime": self.regime,
            "source": self.source,
        }


def _validate(d, F):
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d!r}")
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"F must lie in [0, 1], got {F!r}")


def two_qubit_eof(F):
    """H2(1/2 + sqrt(F(1-F))) for F > 1/2, else 0."""
    F = np.asarray(F, dtype=float)
    Fc = np.clip(F, 0.5, 1.0)
    out = np.where(F > 0.5, binary_entropy(0.5 + np.sqrt(Fc * (1.0 - Fc))), 0.0)
    return float(out) if out.ndim == 0 else out


def eof_values(d: int, F):
    """Vectorized closed-form E(F) in bits."""
    if d == 2:
        return two_qubit_eof(F)
    return piecewise_eof(d, F)


def regime_of(d: int, F: float, knee: float | None = None) -> str:
    if F <= 1.0 / d:
        return SEPARABLE
    if d == 2:
        return ANALYTIC
    knee = conjectured_knee(d) if knee is None else knee
    return LINEAR if F >= knee else ANALYTIC


def eof_isotropic(d: int, F: float) -> EofResult:
    """Entanglement of formation of the isotropic state with fraction F.

    d = 2 uses the two-qubit binary-entropy formula. For d >= 3 the value is
    R_{1,d-1}(F) below the knee 4(d-1)/d^2 and the tangent line from the knee
    to (1, log2 d) above it. Use ``hull.verify_conjecture`` to confirm the
    knee for a given d before relying on the linear part.
    """
    _validate(d, F)
    return EofResult(d, float(F), float(eof_values(d, F)), regime_of(d, F), "closed_form")


def eof_isotropic_numeric(d: int, F: float, grid_points: int = DEFAULT_GRID) -> EofResult:
    """Same quantity read off the sampled convex hull, with no closed-form knee."""
    _validate(d, F)
    env = numeric_envelope(d, grid_points)
    knee = env.knee_F if d >= 3 else None
    return EofResult(d, float(F), env(F), regime_of(d, F, knee), "numeric_envelope")


def eof_curve(d: int, points: int, grid_points: int = DEFAULT_GRID):
    """Rows (F, R or None, E_analytic, E_numeric) on a uniform grid over [0, 1]."""
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    _validate(d, 0.0)
    F = np.linspace(0.0, 1.0, points)
    E_an = eof_values(d, F)
    E_num = numeric_envelope(d, grid_points)(F)
    defined = F >= 1.0 / d
    R = np.where(defined, r1(d, np.clip(F, 1.0 / d, 1.0)), np.nan)
    return [
        (float(f), float(r) if ok else None, float(a), float(n))
        for f, r, ok, a, n in zip(F, R, defined, E_an, E_num)
    ]
