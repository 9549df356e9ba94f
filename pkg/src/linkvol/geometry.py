"""Lobachevsky function, ideal tetrahedra and regular ideal bipyramids.

The Lobachevsky function is evaluated from its power series about zero,

    L(x) = x - x*log(2x) + sum_k zeta(2k) x**(2k+1) / (k (2k+1) pi**(2k)),

after reducing the argument to [0, pi/4] with oddness, pi-periodicity and
the duplication formula L(2x) = 2 L(x) + 2 L(x + pi/2).  Near pi/2 the
duplication step gives L(pi/2 - d) = L(d) - L(2d)/2, which keeps full
relative accuracy for the tiny d that appear in very large bipyramids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "ANGLE_TOL",
    "DihedralTriple",
    "LOG_DIVISORS",
    "PUBLISHED_BIPYRAMID_VOLUMES",
    "V_OCT",
    "V_TET",
    "VolumeConstants",
    "ideal_tetrahedron_volume",
    "lobachevsky",
    "lobachevsky_quadrature",
    "log_volume_bound",
    "regular_apex_volume",
    "regular_bipyramid_volume",
    "volume_constants",
]

ANGLE_TOL = 1e-12

_N_TERMS = 40
_K = np.arange(1, _N_TERMS + 1, dtype=float)
_COEFFS = special.zeta(2 * _K, 1) / (_K * (2 * _K + 1) * np.pi ** (2 * _K))


def _series(x):
    """Series for L on 0 <= x <= pi/2 (array input)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    nz = x > 0
    xs = x[nz]
    u = xs * xs
    acc = np.zeros_like(xs)
    for c in _COEFFS[::-1]:
        acc = acc * u + c
    out[nz] = xs - xs * np.log(2 * xs) + xs * u * acc
    return out


def _lobachevsky_array(theta: np.ndarray) -> np.ndarray:
    r = theta - np.pi * np.round(theta / np.pi)  # r in [-pi/2, pi/2]
    sign = np.sign(r)
    a = np.abs(r)
    out = np.empty_like(a)
    low = a <= np.pi / 4
    out[low] = _series(a[low])
    d = np.pi / 2 - a[~low]
    out[~low] = _series(d) - 0.5 * _series(2 * d)
    return sign * out


def lobachevsky(theta):
    """Lobachevsky function ``-int_0^theta log|2 sin t| dt``.

    Accepts a float or an array of floats; non-finite input raises ValueError.
    """
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"lobachevsky needs a finite angle, got {theta!r}")
    out = _lobachevsky_array(np.atleast_1d(arr)).reshape(arr.shape)
    if arr.ndim == 0:
        return float(out)
    return out


def _lobachevsky_cofunction(delta: float) -> float:
    """L(pi/2 - delta) for 0 <= delta <= pi/2, without forming pi/2 - delta."""
    if delta <= np.pi / 4:
        return float(_series(delta) - 0.5 * _series(2 * delta))
    return lobachevsky(np.pi / 2 - delta)


def lobachevsky_quadrature(theta: float) -> float:
    """Lobachevsky function by adaptive quadrature of its defining integral.

    Slow; kept as an independent cross-check of :func:`lobachevsky`.
    """
    if not math.isfinite(theta):
        raise ValueError(f"lobachevsky needs a finite angle, got {theta!r}")
    r = theta - math.pi * math.floor(theta / math.pi)  # [0, pi)
    sign = 1.0
    if r > math.pi / 2:  # keep the log singularity at the left end only
        r, sign = math.pi - r, -1.0
    val, _ = integrate.quad(
        lambda t: -math.log(abs(2.0 * math.sin(t))),
        0.0,
        r,
        limit=400,
        epsabs=1e-14,
        epsrel=1e-13,
    )
    return sign * val


@dataclass(frozen=True)
class DihedralTriple:
    """Dihedral angles (radians) at the three edges meeting an ideal vertex."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        angles = (self.alpha, self.beta, self.gamma)
        if not all(math.isfinite(a) for a in angles):
            raise ValueError(f"non-finite dihedral angle in {angles}")
        if any(a < -ANGLE_TOL or a > math.pi + ANGLE_TOL for a in angles):
            raise ValueError(f"dihedral angles must lie in [0, pi], got {angles}")
        if abs(sum(angles) - math.pi) > ANGLE_TOL:
            raise ValueError(
                f"dihedral angles must sum to pi, got sum {sum(angles)!r}"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


def ideal_tetrahedron_volume(t: DihedralTriple) -> float:
    """Volume of the ideal tetrahedron with dihedral angles ``t``."""
    vol = lobachevsky(np.array(t.as_tuple())).sum()
    # degenerate tetrahedra come out as tiny negatives from rounding
    return max(float(vol), 0.0)


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise ValueError(f"bipyramids need n >= 2, got {n}")
    return n


def regular_apex_volume(n: int) -> float:
    """Volume of one of the ``n`` congruent tetrahedra of the regular n-bipyramid.

    The tetrahedron has angles 2pi/n at the central edge and (n-2)pi/(2n)
    at the other two edges through the apex.
    """
    n = _check_n(n)
    if n == 2:
        return 0.0
    vol = lobachevsky(2 * math.pi / n) + 2 * _lobachevsky_cofunction(math.pi / n)
    return max(vol, 0.0)


def regular_bipyramid_volume(n: int) -> float:
    """Volume of the regular ideal n-bipyramid (the maximal one, n >= 2)."""
    n = _check_n(n)
    return n * regular_apex_volume(n)


LOG_DIVISORS = (2.0, 2.1818)


def log_volume_bound(n: int, divisor: float = 2.0) -> float:
    """Logarithmic upper bound ``2 pi log(n / divisor)`` on vol(B_n).

    ``divisor`` is 2 for the basic bound and 2.1818 for the sharpened one.
    """
    if divisor not in LOG_DIVISORS:
        raise ValueError(f"divisor must be one of {LOG_DIVISORS}, got {divisor!r}")
    if n < 3:
        raise ValueError(f"log bound is stated for n >= 3, got {n}")
    if n / divisor <= 1:
        raise ValueError(f"n/divisor = {n / divisor} <= 1 gives no bound")
    return 2 * math.pi * math.log(n / divisor)


@dataclass(frozen=True)
class VolumeConstants:
    v_tet: float
    v_oct: float


def volume_constants() -> VolumeConstants:
    return VolumeConstants(
        v_tet=ideal_tetrahedron_volume(DihedralTriple(math.pi / 3, math.pi / 3, math.pi / 3)),
        v_oct=regular_bipyramid_volume(4),
    )


_CONSTANTS = volume_constants()
V_TET = _CONSTANTS.v_tet
V_OCT = _CONSTANTS.v_oct

# Four-decimal values of vol(B_n) as published alongside the maximality result.
PUBLISHED_BIPYRAMID_VOLUMES: dict[int, float] = {
    2: 0.0,
    3: 2.0298,
    4: 3.6638,
    5: 4.9867,
    6: 6.0896,
    7: 7.0325,
    8: 7.8549,
    9: 8.5836,
    10: 9.2375,
    11: 9.8304,
    12: 10.3725,
    13: 10.8719,
    14: 11.3347,
    20: 13.5668,
    100: 23.6709,
    1_000: 38.1382,
    1_000_000: 81.5409,
    1_000_000_000: 124.944,
}
