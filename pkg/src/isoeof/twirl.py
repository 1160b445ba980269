"""U (x) U* twirling: exact image for pure states and a Monte Carlo Haar average."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SchmidtVector
from .states import IsotropicState, fidelity, isotropic_density


@dataclass(frozen=True, eq=False)
class TwirlReport:
    samples: int
    seed: int
    mc_average: np.ndarray
    closed_form: np.ndarray
    frobenius_distance: float
    # Root-mean-square distance expected from sampling noise alone.
    standard_error: float
    estimated_F: float
    exact_F: float


def haar_random_unitary(d: int, seed) -> np.ndarray:
    """Draw a Haar-distributed d x d unitary.

    QR of a complex Ginibre matrix, with the phases of R's diagonal moved
    into Q. Without that correction the result is not Haar distributed.
    ``seed`` is anything ``numpy.random.default_rng`` accepts.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = diag / np.abs(diag)
    return q * phases


def twirl_once(rho, U) -> np.ndarray:
    """Conjugate ``rho`` by U (x) U*."""
    rho = np.asarray(rho)
    U = np.asarray(U)
    d = U.shape[0]
    if rho.shape != (d * d, d * d):
        raise ValueError(f"state of shape {rho.shape} does not match unitary of dimension {d}")
    W = np.kron(U, U.conj())
    return W @ rho @ W.conj().T


def twirl_closed_form(mu: SchmidtVector, V) -> IsotropicState:
    """Isotropic image of (1 (x) V) sum_i sqrt(mu_i)|ii> under twirling.

    The fraction is |sum_i sqrt(mu_i) V_ii|^2 / d.
    """
    V = np.asarray(V)
    if V.shape != (mu.dim, mu.dim):
        raise ValueError(f"V has shape {V.shape}, expected {(mu.dim, mu.dim)}")
    nu = np.sqrt(mu.entries) * np.diag(V)
    F = abs(nu.sum()) ** 2 / mu.dim
    return IsotropicState(mu.dim, min(F, 1.0))


def sample_seeds(seed: int, samples: int):
    # Child seed for sample k depends only on (seed, k).
    return [(seed, k) for k in range(samples)]


def twirl_average(rho, unitaries) -> tuple[np.ndarray, float]:
    """Average of twirl_once over ``unitaries`` and the sampling standard error.

    Accumulates in the order given, so a fixed list gives bit-identical output.
    """
    rho = np.asarray(rho, dtype=complex)
    total = np.zeros_like(rho)
    total_sq = 0.0
    n = 0
    for U in unitaries:
        X = twirl_once(rho, U)
        total += X
        total_sq += float(np.vdot(X, X).real)
        n += 1
    if n == 0:
        raise ValueError("need at least one sample")
    mean = total / n
    if n > 1:
        # sum ||X_k - mean||^2 = sum ||X_k||^2 - n ||mean||^2
        spread = max(total_sq - n * float(np.vdot(mean, mean).real), 0.0) / (n - 1)
        se = np.sqrt(spread / n)
    else:
        se = float("inf")
    return mean, float(se)


def twirl_monte_carlo(rho, d: int, samples: int, seed: int = 0) -> TwirlReport:
    """Estimate the twirl of ``rho`` by averaging over Haar samples.

    The exact twirl keeps the overlap with |Psi+> and maps everything else to
    the isotropic family, so ``closed_form`` is the isotropic state with the
    same fidelity as ``rho``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} state for d={d}, got shape {rho.shape}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    unitaries = (haar_random_unitary(d, s) for s in sample_seeds(seed, samples))
    mean, se = twirl_average(rho, unitaries)
    exact_F = fidelity(rho, d)
    target = isotropic_density(IsotropicState(d, min(max(exact_F, 0.0), 1.0)))
    return TwirlReport(
        samples=samples,
        seed=seed,
        mc_average=mean,
        closed_form=target,
        frobenius_distance=float(np.linalg.norm(mean - target)),
        standard_error=se,
        estimated_F=fidelity(mean, d),
        exact_F=exact_F,
    )
