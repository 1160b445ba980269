"""Isotropic density matrices on C^d (x) C^d.

Basis ordering is row-major: |i>|j> has index i*d + j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SchmidtVector

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
# Eigenvalue floor; loose enough for Monte Carlo averages.
PSD_FLOOR = -1e-9


@dataclass(frozen=True)
class IsotropicState:
    """Mixture of |Psi+><Psi+| (weight F) and the rest of the identity."""

    d: int
    F: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"local dimension must be an integer >= 2, got {self.d!r}")
        if not 0.0 <= self.F <= 1.0:
            raise ValueError(f"F must lie in [0, 1], got {self.F!r}")

    @property
    def separable(self) -> bool:
        return self.F <= 1.0 / self.d

    def density(self) -> np.ndarray:
        return isotropic_density(self)


def check_density_matrix(rho, psd_floor: float = PSD_FLOOR) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit trace and PSD."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"trace is {tr!r}, expected 1")
    lmin = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
    if lmin < psd_floor:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {lmin:.3e})")


def max_entangled_vector(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return psi


def max_entangled_projector(d: int) -> np.ndarray:
    """P+ = |Psi+><Psi+| with |Psi+> = sum_i |ii> / sqrt(d)."""
    psi = max_entangled_vector(d)
    return np.outer(psi, psi.conj())


def isotropic_density(state: IsotropicState) -> np.ndarray:
    d, F = state.d, state.F
    p_plus = max_entangled_projector(d)
    rest = np.eye(d * d, dtype=complex) - p_plus
    return (1.0 - F) / (d * d - 1) * rest + F * p_plus


def fidelity(rho, d: int) -> float:
    """Overlap <Psi+|rho|Psi+> (real part)."""
    rho = np.asarray(rho)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} matrix for d={d}, got shape {rho.shape}")
    psi = max_entangled_vector(d)
    return float(np.real(psi.conj() @ rho @ psi))


def schmidt_state_vector(mu: SchmidtVector) -> np.ndarray:
    d = mu.dim
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = np.sqrt(mu.entries)
    return psi


def pure_state_from_schmidt(mu: SchmidtVector) -> np.ndarray:
    """Projector onto sum_i sqrt(mu_i) |ii>."""
    psi = schmidt_state_vector(mu)
    return np.outer(psi, psi.conj())


def partial_trace(rho, d: int, keep: int = 0) -> np.ndarray:
    """Reduced state of a d x d bipartite matrix; ``keep`` selects the factor (0 = A)."""
    r = np.asarray(rho).reshape(d, d, d, d)
    if keep == 0:
        return np.trace(r, axis1=1, axis2=3)
    if keep == 1:
        return np.trace(r, axis1=0, axis2=2)
    raise ValueError(f"keep must be 0 or 1, got {keep}")
