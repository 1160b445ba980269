"""Scalar entropy helpers and Schmidt vectors.

Every entropy in this package is measured in bits (log base 2), so one
EPR pair carries exactly one unit of entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import entr

# Slack allowed on probability-vector invariants.
INVARIANT_TOL = 1e-12
# Inputs whose sum is off by more than this are rejected rather than renormalized.
NORMALIZATION_TOL = 1e-9

_LN2 = np.log(2.0)


def bits_to_nats(bits):
    """Convert an entropy in bits to natural units (for display only)."""
    return bits * _LN2


@dataclass(frozen=True, eq=False)
class SchmidtVector:
    """Squared Schmidt coefficients of a bipartite pure state.

    Entries are stored sorted in non-increasing order. Input that sums to 1
    up to ``NORMALIZATION_TOL`` is renormalized; anything else raises.
    """

    entries: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.entries, dtype=float).ravel()
        if mu.size == 0:
            raise ValueError("Schmidt vector must have at least one entry")
        if np.any(~np.isfinite(mu)):
            raise ValueError("Schmidt vector entries must be finite")
        if mu.min() < -INVARIANT_TOL:
            raise ValueError(f"negative Schmidt coefficient {mu.min():.3e}")
        total = mu.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"Schmidt vector sums to {total!r}, expected 1")
        mu = np.clip(mu, 0.0, None)
        mu = np.sort(mu / mu.sum())[::-1].copy()
        mu.setflags(write=False)
        object.__setattr__(self, "entries", mu)

    @property
    def dim(self) -> int:
        return self.entries.size

    @classmethod
    def uniform(cls, d: int) -> "SchmidtVector":
        return cls(np.full(d, 1.0 / d))

    @classmethod
    def product(cls, d: int) -> "SchmidtVector":
        mu = np.zeros(d)
        mu[0] = 1.0
        return cls(mu)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"SchmidtVector({np.array2string(self.entries, precision=6)})"


def shannon_entropy(mu: SchmidtVector) -> float:
    """Shannon entropy of a Schmidt vector in bits, with h(0) = 0."""
    return float(entr(mu.entries).sum() / _LN2)


def binary_entropy(x):
    """Binary entropy H2(x) in bits; accepts scalars or arrays.

    Values within ``INVARIANT_TOL`` outside [0, 1] are clipped, anything
    further out raises ``ValueError``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any((arr < -INVARIANT_TOL) | (arr > 1 + INVARIANT_TOL)) or np.any(np.isnan(arr)):
        raise ValueError(f"binary entropy argument outside [0, 1]: {x!r}")
    arr = np.clip(arr, 0.0, 1.0)
    out = (entr(arr) + entr(1.0 - arr)) / _LN2
    return float(out) if out.ndim == 0 else out


def fraction_of_schmidt(mu: SchmidtVector) -> float:
    """Largest isotropic fraction reachable by twirling: (sum sqrt(mu_i))^2 / d."""
    return float(np.sqrt(mu.entries).sum() ** 2 / mu.dim)


def pure_state_entanglement(mu: SchmidtVector) -> float:
    # Reduced state of sum_i sqrt(mu_i)|ii> is diag(mu).
    return shannon_entropy(mu)
