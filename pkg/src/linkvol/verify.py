"""Numerical self-checks of the bipyramid geometry, run by ``linkvol --verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BCB_A_LENGTH3, BCB_A_LENGTH4, BCB_A_LONG, BCB_A_NO_BIGONS
from .geometry import (
    PUBLISHED_BIPYRAMID_VOLUMES,
    V_OCT,
    V_TET,
    lobachevsky,
    lobachevsky_quadrature,
    log_volume_bound,
    regular_bipyramid_volume,
)
from .optimize import BipyramidShape, maximize_volume, shape_volume

__all__ = ["Check", "constant_checks", "verify_geometry"]

B = regular_bipyramid_volume


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float
    tolerance: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name:<46} residual={self.residual:.3e}  tol={self.tolerance:.1e}"


def _close(name: str, got: float, want: float, tol: float) -> Check:
    res = abs(got - want)
    return Check(name, res <= tol, res, tol)


def constant_checks() -> list[Check]:
    """Derivations of the constants subtracted in the bigon-chain bound."""
    return [
        _close("a(t_3): 2B8+B6-v_tet-B4-B7 = 10.088",
               2 * B(8) + B(6) - V_TET - B(4) - B(7), BCB_A_LENGTH3, 1e-3),
        _close("a(t_4): 2B10+B6-2v_tet-B4-B9 = 10.2873",
               2 * B(10) + B(6) - 2 * V_TET - B(4) - B(9), BCB_A_LENGTH4, 1e-3),
        _close("a(t_2): 2B6-v_tet = 11 v_tet", 2 * B(6) - V_TET, 11 * V_TET, 1e-3),
        _close("a(g_5): 10v_tet+3(B10-B9) = 12.111",
               10 * V_TET + 3 * (B(10) - B(9)), BCB_A_LONG, 1e-3),
        _close("a(g_2=0): 7v_oct-10v_tet = 15.4972",
               7 * V_OCT - 10 * V_TET, BCB_A_NO_BIGONS, 5e-3),
    ]


def log_grid(lo: float = 3, hi: float = 1e6, points: int = 200) -> list[int]:
    return sorted({int(round(v)) for v in np.geomspace(lo, hi, points)})


def verify_geometry(optimizer_seed: int = 0) -> list[Check]:
    checks: list[Check] = []
    for n, want in PUBLISHED_BIPYRAMID_VOLUMES.items():
        checks.append(_close(f"table vol(B_{n})", B(n), want, 1e-3))
    checks.append(_close("vol(B_6) = 6 v_tet", B(6), 6 * V_TET, 1e-9))
    checks.append(_close("vol(B_4) = v_oct", B(4), V_OCT, 1e-9))
    for theta in (math.pi / 6, 0.3, 1.2, 2.5):
        checks.append(
            _close(f"series vs quadrature at {theta:.4f}", lobachevsky(theta),
                   lobachevsky_quadrature(theta), 1e-9)
        )
    checks.extend(constant_checks())

    grid = log_grid()
    gap = min(log_volume_bound(n, 2.0) - B(n) for n in grid)
    checks.append(Check("vol(B_n) < 2pi ln(n/2) on log grid", gap > 0, gap, 0.0))
    gap = min(log_volume_bound(n, 2.1818) - B(n) for n in grid if n >= 4)
    checks.append(Check("vol(B_n) < 2pi ln(n/2.1818), n >= 4", gap > 0, gap, 0.0))
    ratio = B(10**9) / log_volume_bound(10**9, 2.0)
    checks.append(Check("vol(B_1e9) / 2pi ln(5e8) in (0.99, 1)", 0.99 < ratio < 1, 1 - ratio, 0.01))

    worst = min(B(a) + B(b) - B(a + b - 2) for a in range(3, 51) for b in range(a, 51))
    checks.append(Check("vol(B_a)+vol(B_b) > vol(B_a+b-2), 3<=a<=b<=50", worst > 0, worst, 0.0))

    rng = np.random.default_rng(optimizer_seed)
    for n in (3, 4, 5, 8, 13):
        shape, vol = maximize_volume(n, 1e-10, 200, rng=rng)
        err = float(np.max(np.abs(shape.angles() - BipyramidShape.regular(n).angles())))
        checks.append(Check(f"optimizer n={n}: angle error", err < 1e-6, err, 1e-6))
        checks.append(_close(f"optimizer n={n}: volume", vol, shape_volume(BipyramidShape.regular(n)), 1e-6))
    return checks
