import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linkvol.geometry import PUBLISHED_BIPYRAMID_VOLUMES, V_OCT, lobachevsky
from linkvol.optimize import (
    EPS,
    BipyramidShape,
    ConvergenceError,
    maximize_volume,
    random_feasible_shape,
    sample_feasible_angles,
    sampled_volumes,
    shape_gradient,
    shape_volume,
    stationarity_residual,
)


def regular_volume(n):
    return shape_volume(BipyramidShape.regular(n))


class TestShapeVolume:
    def test_regular_five(self):
        assert shape_volume(BipyramidShape.regular(5)) == pytest.approx(4.9867, abs=1e-4)

    def test_flat_two(self):
        s = BipyramidShape.from_angles([math.pi, math.pi], [0, 0], [0, 0])
        assert shape_volume(s) == pytest.approx(0, abs=1e-14)

    def test_perturbed_square_is_smaller(self):
        alpha = np.array([math.pi / 2 + 0.1, math.pi / 2 - 0.1, math.pi / 2, math.pi / 2])
        s = BipyramidShape.from_angles(alpha, (math.pi - alpha) / 2)
        want = sum(lobachevsky(a) + 2 * lobachevsky((math.pi - a) / 2) for a in alpha)
        assert shape_volume(s) == pytest.approx(want, abs=1e-13)
        assert shape_volume(s) < 3.6638

    def test_alpha_sum_enforced(self):
        with pytest.raises(ValueError):
            BipyramidShape.from_angles([2.0, 2.0, 2.0], [0.5, 0.5, 0.5])


class TestStationarity:
    @pytest.mark.parametrize("n", [3, 4, 7, 20])
    def test_regular_is_stationary(self, n):
        assert stationarity_residual(BipyramidShape.regular(n)) == pytest.approx(0, abs=1e-14)

    def test_unequal_ratios(self):
        alpha = np.array([2 * math.pi / 3 + 0.2, 2 * math.pi / 3 - 0.2, 2 * math.pi / 3])
        s = BipyramidShape.from_angles(alpha, (math.pi - alpha) / 2)
        r = np.sin(s.angles()[:, 1]) / np.sin(alpha)
        assert stationarity_residual(s) == pytest.approx(np.ptp(r), rel=1e-12)
        assert stationarity_residual(s) > 0

    def test_beta_gamma_mismatch(self):
        alpha = np.full(3, 2 * math.pi / 3)
        beta = np.array([math.pi / 6 + 0.05, math.pi / 6, math.pi / 6])
        assert stationarity_residual(BipyramidShape.from_angles(alpha, beta)) >= 0.1 - 1e-12

    def test_boundary_rejected(self):
        s = BipyramidShape.from_angles([math.pi, math.pi], [0, 0], [0, 0])
        with pytest.raises(ValueError):
            stationarity_residual(s)


class TestGradient:
    @given(st.floats(0.01, math.pi - 0.01))
    def test_lobachevsky_derivative(self, x):
        h = 1e-6
        fd = (lobachevsky(x + h) - lobachevsky(x - h)) / (2 * h)
        assert fd == pytest.approx(-math.log(2 * math.sin(x)), abs=1e-6)

    @pytest.mark.parametrize("seed", range(5))
    def test_directional_derivative_on_feasible_set(self, seed):
        rng = np.random.default_rng(seed)
        n = 6
        s = random_feasible_shape(n, rng)
        a = s.angles()
        g = shape_gradient(s)
        # tangent direction: alphas sum to zero, each row sums to zero
        da = rng.normal(size=n)
        da -= da.mean()
        db = rng.normal(size=n)
        d = np.stack([da, db, -da - db], axis=1)
        h = 1e-7 / np.abs(d).max()
        vol = lambda angs: float(lobachevsky(angs).sum())
        fd = (vol(a + h * d) - vol(a - h * d)) / (2 * h)
        assert fd == pytest.approx(float((g * d).sum()), abs=1e-6)


class TestSampling:
    @pytest.mark.parametrize("n", [3, 5, 13])
    def test_samples_feasible(self, n):
        al, be, ga = sample_feasible_angles(n, 2000, np.random.default_rng(1))
        assert al.shape == (2000, n)
        np.testing.assert_allclose(al.sum(axis=1), 2 * math.pi, atol=1e-12)
        np.testing.assert_allclose(al + be + ga, math.pi, atol=1e-12)
        for arr in (al, be, ga):
            assert np.all(arr > EPS / 2) and np.all(arr < math.pi)

    @pytest.mark.parametrize("n", [3, 5, 8, 13])
    def test_random_oracle_never_beats_regular(self, n):
        rng = np.random.default_rng(100 + n)
        vols = sampled_volumes(*sample_feasible_angles(n, 100_000, rng))
        assert vols.max() <= regular_volume(n) + 1e-9


class TestMaximize:
    def test_square(self):
        shape, vol = maximize_volume(4, rng=np.random.default_rng(0))
        np.testing.assert_allclose(shape.angles(), [[math.pi / 2, math.pi / 4, math.pi / 4]] * 4, atol=1e-6)
        assert vol == pytest.approx(V_OCT, abs=1e-6)
        assert vol == pytest.approx(3.6638, abs=1e-4)

    def test_triangle(self):
        _, vol = maximize_volume(3, rng=np.random.default_rng(0))
        assert vol == pytest.approx(2.0298, abs=1e-4)

    @pytest.mark.parametrize("n", [3, 5, 8, 13])
    def test_twenty_random_starts(self, n):
        rng = np.random.default_rng(n)
        reg = BipyramidShape.regular(n).angles()
        for _ in range(20):
            start = random_feasible_shape(n, rng)
            shape, vol = maximize_volume(n, start=start, rng=rng)
            assert np.max(np.abs(shape.angles() - reg)) < 1e-6
            assert vol == pytest.approx(regular_volume(n), abs=1e-6)
            if n in PUBLISHED_BIPYRAMID_VOLUMES:
                assert vol == pytest.approx(PUBLISHED_BIPYRAMID_VOLUMES[n], abs=1e-3)

    def test_iterates_stay_feasible_and_increase(self):
        seen = []
        maximize_volume(8, start=random_feasible_shape(8, np.random.default_rng(3)), callback=seen.append)
        assert seen
        vols = [shape_volume(s) for s in seen]
        assert all(b >= a - 1e-12 for a, b in zip(vols, vols[1:]))
        for s in seen:
            a = s.angles()
            assert np.all(a >= EPS * 0.99) and np.all(a <= math.pi - EPS * 0.99)
            assert abs(a[:, 0].sum() - 2 * math.pi) <= 1e-10

    def test_maximizer_has_beta_equal_gamma(self):
        shape, _ = maximize_volume(7, rng=np.random.default_rng(5))
        a = shape.angles()
        np.testing.assert_allclose(a[:, 1], a[:, 2], atol=1e-7)
        assert stationarity_residual(shape) < 1e-8

    def test_iteration_budget(self):
        start = random_feasible_shape(13, np.random.default_rng(0))
        with pytest.raises(ConvergenceError):
            maximize_volume(13, 1e-15, 1, start=start)

    @pytest.mark.parametrize("kwargs", [dict(n=2), dict(n=5, tolerance=0)])
    def test_bad_arguments(self, kwargs):
        with pytest.raises(ValueError):
            maximize_volume(**kwargs)

    def test_start_size_mismatch(self):
        with pytest.raises(ValueError):
            maximize_volume(5, start=BipyramidShape.regular(4))
