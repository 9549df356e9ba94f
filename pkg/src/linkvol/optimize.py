"""Numerical maximization of ideal n-bipyramid volume.

A bipyramid is split along its central edge into ``n`` ideal tetrahedra with
angles (alpha_i, beta_i, gamma_i).  The search runs over the free variables
(alpha, beta); gamma_i = pi - alpha_i - beta_i, and steps are confined to the
hyperplane sum(alpha) = 2 pi, so every iterate is a feasible shape.

Directions come from a constrained Newton step when the reduced Hessian is
negative definite and from the projected gradient otherwise, with an Armijo
backtracking line search that keeps every angle inside (eps, pi - eps).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import null_space

from .geometry import DihedralTriple, lobachevsky

__all__ = [
    "BipyramidShape",
    "ConvergenceError",
    "EPS",
    "maximize_volume",
    "random_feasible_shape",
    "sample_feasible_angles",
    "sampled_volumes",
    "shape_gradient",
    "shape_volume",
    "stationarity_residual",
]

log = logging.getLogger(__name__)

EPS = 1e-6
ALPHA_SUM_TOL = 1e-10
MAX_RESTARTS = 10


class ConvergenceError(RuntimeError):
    """The optimizer did not reach its stopping criterion."""


@dataclass(frozen=True)
class BipyramidShape:
    n: int
    triples: tuple[DihedralTriple, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"bipyramids need n >= 2, got {self.n}")
        if len(self.triples) != self.n:
            raise ValueError(f"expected {self.n} triples, got {len(self.triples)}")
        total = math.fsum(t.alpha for t in self.triples)
        if abs(total - 2 * math.pi) > ALPHA_SUM_TOL:
            raise ValueError(f"central angles must sum to 2*pi, got {total!r}")

    @classmethod
    def from_angles(cls, alpha, beta, gamma=None) -> "BipyramidShape":
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        gamma = math.pi - alpha - beta if gamma is None else np.asarray(gamma, dtype=float)
        triples = tuple(
            DihedralTriple(float(a), float(b), float(c)) for a, b, c in zip(alpha, beta, gamma)
        )
        return cls(len(triples), triples)

    @classmethod
    def regular(cls, n: int) -> "BipyramidShape":
        alpha = np.full(n, 2 * math.pi / n)
        return cls.from_angles(alpha, (math.pi - alpha) / 2)

    def angles(self) -> np.ndarray:
        """(n, 3) array of (alpha, beta, gamma) rows."""
        return np.array([t.as_tuple() for t in self.triples])


def shape_volume(s: BipyramidShape) -> float:
    return float(lobachevsky(s.angles()).sum())


def shape_gradient(s: BipyramidShape) -> np.ndarray:
    """Partial derivatives -log(2 sin theta) of the volume in each angle, shape (n, 3)."""
    a = s.angles()
    if np.any(np.sin(a) <= 0):
        raise ValueError("gradient is unbounded at angles 0 or pi")
    return -np.log(2 * np.sin(a))


def stationarity_residual(s: BipyramidShape) -> float:
    """Deviation from the Lagrange conditions of the maximization.

    Zero exactly when beta_i = gamma_i for every i and all ratios
    sin(beta_i) / sin(alpha_i) agree; returns the larger of the two defects.
    """
    a = s.angles()
    sines = np.sin(a)
    if np.any(sines[:, 0] <= 0) or np.any(a <= 0) or np.any(a >= math.pi):
        raise ValueError("stationarity residual needs every angle strictly inside (0, pi)")
    ratios = sines[:, 1] / sines[:, 0]
    return float(max(np.max(np.abs(a[:, 1] - a[:, 2])), np.ptp(ratios)))


# -- sampling ---------------------------------------------------------------

def sample_feasible_angles(n: int, size: int, rng: np.random.Generator, eps: float = EPS):
    """Draw ``size`` feasible shapes as arrays (alpha, beta, gamma), each (size, n).

    alpha is a uniform point of the simplex scaled to 2 pi (rejecting rows with
    an alpha too large to leave room for beta, gamma > eps); beta is uniform in
    (eps, pi - alpha - eps).
    """
    if n < 3:
        raise ValueError(f"random shapes need n >= 3, got {n}")
    rows = []
    have = 0
    while have < size:
        batch = max(2 * (size - have), 16)
        alpha = 2 * math.pi * rng.dirichlet(np.ones(n), size=batch)
        ok = np.all((alpha > eps) & (alpha < math.pi - 3 * eps), axis=1)
        alpha = alpha[ok]
        rows.append(alpha)
        have += len(alpha)
    alpha = np.concatenate(rows)[:size]
    # re-impose the 2 pi sum exactly after the float scaling
    alpha[:, -1] = 2 * math.pi - alpha[:, :-1].sum(axis=1)
    room = math.pi - alpha - 2 * eps
    beta = eps + rng.random(alpha.shape) * room
    gamma = math.pi - alpha - beta
    return alpha, beta, gamma


def sampled_volumes(alpha, beta, gamma) -> np.ndarray:
    """Volumes of many shapes at once (rows of the sample arrays)."""
    return lobachevsky(alpha).sum(axis=1) + lobachevsky(beta).sum(axis=1) + lobachevsky(gamma).sum(axis=1)


def random_feasible_shape(n: int, rng: np.random.Generator) -> BipyramidShape:
    alpha, beta, gamma = sample_feasible_angles(n, 1, rng)
    return BipyramidShape.from_angles(alpha[0], beta[0])


# -- optimizer ---------------------------------------------------------------

def _objective(x: np.ndarray, n: int) -> float:
    alpha, beta = x[:n], x[n:]
    return float(lobachevsky(np.concatenate([alpha, beta, math.pi - alpha - beta])).sum())


def _grad_hess(x: np.ndarray, n: int):
    alpha, beta = x[:n], x[n:]
    gamma = math.pi - alpha - beta
    h = lambda t: -np.log(2 * np.sin(t))  # noqa: E731
    q = lambda t: -1.0 / np.tan(t)  # noqa: E731
    g = np.concatenate([h(alpha) - h(gamma), h(beta) - h(gamma)])
    qa, qb, qg = q(alpha), q(beta), q(gamma)
    H = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    H[idx, idx] = qa + qg
    H[n + idx, n + idx] = qb + qg
    H[idx, n + idx] = qg
    H[n + idx, idx] = qg
    return g, H


def _max_step(x: np.ndarray, d: np.ndarray, n: int, eps: float) -> float:
    """Largest t with every angle of x + t d inside [eps, pi - eps]."""
    alpha, beta = x[:n], x[n:]
    gamma = math.pi - alpha - beta
    da, db = d[:n], d[n:]
    dg = -da - db
    t = math.inf
    for v, dv in ((alpha, da), (beta, db), (gamma, dg)):
        neg = dv < 0
        if np.any(neg):
            t = min(t, float(np.min((v[neg] - eps) / -dv[neg])))
        pos = dv > 0
        if np.any(pos):
            t = min(t, float(np.min((math.pi - eps - v[pos]) / dv[pos])))
    return max(t, 0.0)


def _to_shape(x: np.ndarray, n: int) -> BipyramidShape:
    alpha = x[:n].copy()
    alpha[-1] = 2 * math.pi - alpha[:-1].sum()
    return BipyramidShape.from_angles(alpha, x[n:])


def _line_search(x, f, d, slope, n, eps):
    """Armijo backtracking inside the box; returns (x_new, f_new) or None."""
    if slope <= 0:
        return None
    t = min(1.0, 0.9 * _max_step(x, d, n, eps))
    while t > 1e-16:
        x_new = x + t * d
        f_new = _objective(x_new, n)
        # slack for rounding in f once the increase is below machine precision
        if f_new >= f + 1e-4 * t * slope - 4 * np.finfo(float).eps * abs(f):
            return x_new, f_new
        t *= 0.5
    return None


def _ascend(
    x: np.ndarray,
    n: int,
    tolerance: float,
    max_iterations: int,
    eps: float,
    callback: Optional[Callable[[BipyramidShape], None]],
):
    """Run one ascent from x; returns (x, converged, hit_boundary)."""
    a = np.concatenate([np.ones(n), np.zeros(n)])
    Z = null_space(a[None, :])
    P = Z @ Z.T
    f = _objective(x, n)
    for _ in range(max_iterations):
        g, H = _grad_hess(x, n)
        candidates = []
        Hr = Z.T @ H @ Z
        if np.max(np.linalg.eigvalsh(Hr)) < 0:
            d = -Z @ np.linalg.solve(Hr, Z.T @ g)
            if d @ g > 0:
                candidates.append(d)
        # the Newton step can aim at the boundary far from the optimum, so
        # the projected gradient step is always tried as well
        candidates.append(P @ g)
        best = None
        # for fixed alphas the volume peaks at beta = gamma; this exact block
        # move pulls flattened tetrahedra off the boundary in one step
        balanced = np.concatenate([x[:n], (math.pi - x[:n]) / 2])
        if np.all(balanced[n:] >= eps):
            f_bal = _objective(balanced, n)
            if f_bal > f + 1e-13 * abs(f):
                best = balanced, f_bal
        for d in candidates:
            step = _line_search(x, f, d, float(d @ g), n, eps)
            # prefer the earlier (Newton) step unless the other is clearly better
            if step is not None and (best is None or step[1] > best[1] + 1e-13 * abs(f)):
                best = step
        if best is None:
            return x, False, True
        x_new, f_new = best
        x_new[n - 1] = 2 * math.pi - x_new[: n - 1].sum()
        df = f_new - f
        x, f = x_new, f_new
        shape = _to_shape(x, n)
        if callback is not None:
            callback(shape)
        if abs(df) < tolerance:
            if stationarity_residual(shape) < tolerance:
                return x, True, False
            a = shape.angles()
            if a.min() < 1e3 * eps or a.max() > math.pi - 1e3 * eps:
                return x, False, True  # creeping along the boundary
    return x, False, False


def maximize_volume(
    n: int,
    tolerance: float = 1e-10,
    max_iterations: int = 200,
    *,
    start: Optional[BipyramidShape] = None,
    rng: Optional[np.random.Generator] = None,
    callback: Optional[Callable[[BipyramidShape], None]] = None,
) -> tuple[BipyramidShape, float]:
    """Maximize bipyramid volume over all feasible angle assignments.

    Starts from ``start`` (or a random feasible shape) and restarts from a fresh
    random shape, up to 10 times, when the search stalls against the angle
    boundary.  Raises ConvergenceError when no run meets the stopping rule
    within ``max_iterations`` steps.
    """
    if n < 3:
        raise ValueError(f"maximize_volume needs n >= 3, got {n}")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    rng = np.random.default_rng() if rng is None else rng
    shape = start if start is not None else random_feasible_shape(n, rng)
    if shape.n != n:
        raise ValueError(f"start shape has n={shape.n}, expected {n}")
    for attempt in range(MAX_RESTARTS + 1):
        a = shape.angles()
        x = np.concatenate([a[:, 0], a[:, 1]])
        x, converged, stalled = _ascend(x, n, tolerance, max_iterations, EPS, callback)
        if converged:
            best = _to_shape(x, n)
            return best, shape_volume(best)
        if not stalled:
            raise ConvergenceError(
                f"n={n}: no convergence within {max_iterations} iterations "
                f"(residual {stationarity_residual(_to_shape(x, n)):.3g})"
            )
        log.info("n=%d: ascent stalled at the angle boundary, restart %d", n, attempt + 1)
        shape = random_feasible_shape(n, rng)
    raise ConvergenceError(f"n={n}: stalled at the angle boundary after {MAX_RESTARTS} restarts")
