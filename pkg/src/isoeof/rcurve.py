"""Minimum-entropy curve R(F) over Schmidt vectors with a fixed isotropic fraction.

Candidate minimizers have n entries equal to gamma and m entries equal to
delta. For fixed (n, m) the two constraints

    n*gamma + m*delta = 1,    n*sqrt(gamma) + m*sqrt(delta) = sqrt(d*F)

pin gamma down to a root of a quadratic, giving the branch value R_nm(F) on
n/d <= F <= (n+m)/d. ``oracle_min_entropy`` solves the same problem by direct
numerical search and shares no code with the branch formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .core import binary_entropy

# Radicands this close to zero are treated as zero at the domain ends.
RADICAND_CLAMP = 1e-12
# Tolerance when deciding whether F lies in a branch domain.
DOMAIN_SLACK = 1e-12
# Branches closer than this are a tie; smaller (n, m) wins.
TIE_TOL = 1e-12
# The two algebraic forms of a branch value must agree to this.
CROSS_CHECK_TOL = 1e-10

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class Branch:
    n: int
    m: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.n + self.m > self.d:
            raise ValueError(f"invalid branch (n={self.n}, m={self.m}) for d={self.d}")

    @property
    def domain(self) -> tuple[float, float]:
        return self.n / self.d, (self.n + self.m) / self.d

    def contains(self, F: float) -> bool:
        lo, hi = self.domain
        return lo - DOMAIN_SLACK <= F <= hi + DOMAIN_SLACK

    @property
    def label(self) -> str:
        return f"{self.n},{self.m}"


@dataclass(frozen=True)
class BranchEval:
    n: int
    m: int
    d: int
    F: float
    gamma: float
    delta: float
    value_bits: float

    def residuals(self) -> tuple[float, float]:
        """Violation of the normalization and fraction constraints."""
        norm = self.n * self.gamma + self.m * self.delta - 1.0
        frac = self.n * np.sqrt(self.gamma) + self.m * np.sqrt(self.delta) - np.sqrt(self.d * self.F)
        return abs(norm), abs(frac)


def branches(d: int) -> list[Branch]:
    """All (n, m) with n, m >= 1 and n + m <= d, ordered by n then m."""
    return [Branch(n, m, d) for n in range(1, d) for m in range(1, d - n + 1)]


def _check_domain(n, m, d, F, lo):
    if n < 1 or m < 1 or n + m > d:
        raise ValueError(f"invalid branch (n={n}, m={m}) for d={d}")
    hi = (n + m) / d
    if not lo - DOMAIN_SLACK <= F <= hi + DOMAIN_SLACK:
        raise ValueError(f"F={F!r} outside branch ({n},{m}) domain [{lo}, {hi}] for d={d}")
    return min(max(F, lo), hi)


def _sqrt_roots(n, m, d, F):
    """(sqrt(gamma), sqrt(delta)) for branch (n, m); delta taken from the
    companion root, which avoids cancellation in (1 - n*gamma)/m."""
    radicand = m * n * (m + n - d * F)
    if radicand < 0:
        if radicand < -RADICAND_CLAMP:
            raise ValueError(f"negative radicand {radicand!r} for branch ({n},{m}) at F={F!r}")
        radicand = 0.0
    a, b = np.sqrt(d * F), np.sqrt(radicand)
    sq_gamma = (a * n + b) / (n * (n + m))
    sq_delta = max((a * m - b) / (m * (n + m)), 0.0)
    return sq_gamma, sq_delta


def gamma_plus(n: int, m: int, d: int, F: float) -> float:
    """Larger root of the two-level constraint system for branch (n, m).

    Valid on n/d <= F <= (n+m)/d: above it the radicand is negative, below
    it the remaining m entries would have to be negative.
    """
    F = _check_domain(n, m, d, F, n / d)
    return float(_sqrt_roots(n, m, d, F)[0] ** 2)


def gamma_minus(n: int, m: int, d: int, F: float) -> float:
    """Smaller root; equals the delta of branch (m, n), valid on m/d <= F <= (n+m)/d."""
    F = _check_domain(n, m, d, F, m / d)
    radicand = max(m * n * (m + n - d * F), 0.0)
    root = (np.sqrt(d * F) * n - np.sqrt(radicand)) / (n * (n + m))
    return float(root * root)


def _h(x):
    return entr(x) / _LN2


def branch_value(n: int, m: int, d: int, F: float) -> BranchEval:
    """Evaluate R_nm(F) = H2(n*gamma) + n*gamma*log2(n/m) + log2(m).

    The direct sum n*h(gamma) + m*h(delta) is computed as well and must agree
    to ``CROSS_CHECK_TOL``.
    """
    Fc = _check_domain(n, m, d, F, n / d)
    sg, sd = _sqrt_roots(n, m, d, Fc)
    g, delta = sg * sg, sd * sd
    ng = min(n * g, 1.0)
    closed = binary_entropy(ng) + ng * np.log2(n / m) + np.log2(m)
    direct = n * _h(g) + m * _h(delta)
    if abs(closed - direct) > CROSS_CHECK_TOL:
        raise ArithmeticError(
            f"branch ({n},{m}) forms disagree at F={F!r}: {closed!r} vs {direct!r}"
        )
    return BranchEval(n, m, d, float(F), float(g), float(delta), float(closed))


def r_pointwise_min(d: int, F: float) -> BranchEval:
    """Pointwise minimum of all branch values containing F (m = 0 skipped)."""
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    if not 1.0 / d - DOMAIN_SLACK <= F <= 1.0 + DOMAIN_SLACK:
        raise ValueError(f"F={F!r} outside [1/d, 1] for d={d}")
    best = None
    for br in branches(d):
        if not br.contains(F):
            continue
        ev = branch_value(br.n, br.m, d, F)
        # Branches are visited in (n, m) order, so a tie keeps the earlier one.
        if best is None or ev.value_bits < best.value_bits - TIE_TOL:
            best = ev
    return best


def r_curve_csv_rows(d: int, points: int) -> list[tuple[float, int, int, float]]:
    """Rows (F, n, m, R_nm) for every branch on a shared uniform grid over [1/d, 1].

    Each branch contributes only the grid points inside its own domain.
    """
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    grid = np.linspace(1.0 / d, 1.0, points)
    rows = []
    for br in branches(d):
        for F in grid:
            if br.contains(F):
                rows.append((float(F), br.n, br.m, branch_value(br.n, br.m, d, F).value_bits))
    return rows


# Closed form of the winning branch (1, d-1), vectorized.


def r1_gamma(d: int, F):
    """Largest Schmidt coefficient of the optimal vector: (sqrt(F) + sqrt((d-1)(1-F)))^2 / d."""
    F = np.asarray(F, dtype=float)
    s = np.sqrt(F) + np.sqrt((d - 1) * np.clip(1.0 - F, 0.0, None))
    out = np.minimum(s * s / d, 1.0)
    return float(out) if out.ndim == 0 else out


def r1(d: int, F):
    """R_{1,d-1}(F) = H2(gamma) + (1 - gamma) log2(d - 1) on [1/d, 1]."""
    g = np.asarray(r1_gamma(d, F))
    out = np.asarray(binary_entropy(g)) + (1.0 - g) * np.log2(d - 1)
    return float(out) if out.ndim == 0 else out


def r1_derivative(d: int, F):
    """dR_{1,d-1}/dF by the chain rule through gamma(F); open interval (1/d, 1)."""
    F = np.asarray(F, dtype=float)
    sqF = np.sqrt(F)
    sq1 = np.sqrt(1.0 - F)
    s = sqF + np.sqrt(d - 1) * sq1
    g = np.minimum(s * s / d, 1.0)
    dR_dg = np.log2((1.0 - g) / g) - np.log2(d - 1)
    dg_dF = (s / d) * (1.0 / sqF - np.sqrt(d - 1) / sq1)
    out = dR_dg * dg_dF
    return float(out) if out.ndim == 0 else out


# Independent oracle: projected gradient descent on x = sqrt(mu).


def project_sphere_slice(y, c):
    """Map each row of ``y`` onto {x >= 0, sum x = c, sum x^2 = 1}.

    Returns rows of the form s * max(y - theta, 0) with s > 0; theta is fixed
    by the ratio (sum x)^2 / sum x^2 = c^2, which is monotone in theta.
    """
    y = np.atleast_2d(np.asarray(y, dtype=float))
    rows, d = y.shape
    c2 = c * c
    ys = -np.sort(-y, axis=1)
    k = np.arange(1, d + 1)
    P = np.cumsum(ys, axis=1)
    Q = np.cumsum(ys * ys, axis=1)
    S1 = P - k * ys
    S2 = Q - 2.0 * ys * P + k * ys * ys
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(S2 > 0, S1 * S1 / S2, 1.0)
    # Largest breakpoint whose ratio does not exceed c^2 fixes the active set.
    active = np.clip((ratio <= c2 * (1 + 1e-15)).sum(axis=1), 1, d)
    idx = active - 1
    Pk = P[np.arange(rows), idx]
    Qk = Q[np.arange(rows), idx]
    kk = active.astype(float)
    spread = np.maximum(kk * Qk - Pk * Pk, 0.0)
    gap = np.maximum(kk - c2, 1e-300)
    theta = (Pk - c * np.sqrt(spread / gap)) / kk
    x = np.maximum(y - theta[:, None], 0.0)
    norm = np.linalg.norm(x, axis=1)
    # c^2 = 1: a single active entry, the slice is the set of basis vectors.
    single = norm <= 0
    if single.any():
        x[single] = np.eye(d)[np.argmax(y[single], axis=1)]
        norm[single] = 1.0
    return x / norm[:, None]


def _entropy_sq(x):
    return entr(x * x).sum(axis=1) / _LN2


def _entropy_sq_grad(x):
    with np.errstate(divide="ignore", invalid="ignore"):
        g = -2.0 * x * (np.log2(x * x) + 1.0 / _LN2)
    return np.where(x > 0, g, 0.0)


def oracle_min_entropy(
    d: int,
    F: float,
    restarts: int = 200,
    seed: int = 0,
    iterations: int = 200,
    return_vector: bool = False,
):
    """Minimize Shannon entropy over Schmidt vectors with fraction F by brute force.

    Works in x = sqrt(mu), where the constraints are a sphere slice. Each
    restart starts from a random point drawn with child seed (seed, k) and
    runs projected gradient descent with backtracking. Restarts are advanced
    together as one batch. Returns the best entropy found (bits) and, if
    asked, the corresponding sorted Schmidt vector.
    """
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    if not 1.0 / d - DOMAIN_SLACK <= F <= 1.0 + DOMAIN_SLACK:
        raise ValueError(f"F={F!r} outside [1/d, 1] for d={d}")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    F = min(max(F, 1.0 / d), 1.0)
    c = np.sqrt(d * F)
    if F >= 1.0 - 1e-15:
        x = np.full((1, d), 1.0 / np.sqrt(d))
        best = x[0]
        val = float(_entropy_sq(x)[0])
        return (val, np.sort(best * best)[::-1]) if return_vector else val

    starts = np.array([np.random.default_rng((seed, k)).random(d) for k in range(restarts)])
    x = project_sphere_slice(starts, c)
    f = _entropy_sq(x)
    step = np.full(restarts, 0.1)
    live = np.ones(restarts, dtype=bool)

    for _ in range(iterations):
        if not live.any():
            break
        xl, fl, tl = x[live], f[live], step[live]
        grad = _entropy_sq_grad(xl)
        accepted = np.zeros(len(xl), dtype=bool)
        x_new, f_new = xl.copy(), fl.copy()
        t = tl.copy()
        for _bt in range(40):
            todo = ~accepted
            if not todo.any():
                break
            trial = project_sphere_slice(xl[todo] - t[todo, None] * grad[todo], c)
            ok_rows = np.all(np.isfinite(trial), axis=1)
            trial = np.where(ok_rows[:, None], trial, xl[todo])
            ft = _entropy_sq(trial)
            descent = np.einsum("ij,ij->i", grad[todo], trial - xl[todo])
            good = ok_rows & (ft <= fl[todo] + 1e-4 * descent)
            sub = np.flatnonzero(todo)
            x_new[sub[good]] = trial[good]
            f_new[sub[good]] = ft[good]
            accepted[sub[good]] = True
            t[sub[~good]] *= 0.5
        improvement = fl - f_new
        idx = np.flatnonzero(live)
        x[idx] = x_new
        f[idx] = f_new
        step[idx] = np.where(accepted, np.minimum(2.0 * t, 10.0), t)
        live[idx] = accepted & (improvement > 1e-12)

    k = int(np.argmin(f))
    val = float(f[k])
    if return_vector:
        return val, np.sort(x[k] ** 2)[::-1]
    return val
