import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from multistable.asymptote import (
    TailAsymptote,
    ratio,
    scaling_bounds_check,
    tail_asymptote,
    tail_constant,
)
from multistable.fixtures import fixture, random_spec
from multistable.function_space import ExponentFunction, StepFunction, refine
from multistable.quadrature import QuadratureConfig

CAUCHY = fixture("cauchy")


class TestTailConstant:
    def test_at_one(self):
        assert tail_constant(1.0) == 2.0 / math.pi

    def test_half(self):
        expected = 0.5 / (gamma_fn(1.5) * math.cos(math.pi / 4.0))
        assert tail_constant(0.5) == pytest.approx(expected, rel=1e-14)
        assert tail_constant(0.5) == pytest.approx(0.7978846, abs=1e-7)

    def test_three_halves(self):
        expected = -0.5 / (gamma_fn(0.5) * math.cos(0.75 * math.pi))
        assert tail_constant(1.5) == pytest.approx(expected, rel=1e-14)
        assert tail_constant(1.5) == pytest.approx(0.3989423, abs=1e-7)

    def test_domain(self):
        for bad in (0.0, 2.0, -1.0, 2.3):
            with pytest.raises(ValueError):
                tail_constant(bad)

    def test_positive_on_grid(self):
        for g in np.linspace(0.01, 1.99, 199):
            assert tail_constant(float(g)) > 0.0

    @pytest.mark.parametrize("h", [1e-2, 1e-4, 1e-6])
    def test_removable_singularity_continuity(self, h):
        lim = 2.0 / math.pi
        assert abs(tail_constant(1.0 + h) - lim) < 2.0 * h
        assert abs(tail_constant(1.0 - h) - lim) < 2.0 * h
        # agreement at the switch: 1e-7 demanded just outside the window
        assert abs(tail_constant(1.0 + 2e-8) - lim) < 1e-7


class TestTailAsymptote:
    def test_cauchy_at_100(self):
        assert tail_asymptote(CAUCHY, 100.0) == pytest.approx(
            2.0 / math.pi / 100.0, rel=1e-14)

    def test_lambda_one_weight_sum(self):
        spec = fixture("two_exp")
        asym = TailAsymptote.from_spec(spec)
        assert tail_asymptote(spec, 1.0) == pytest.approx(float(np.sum(asym.weights)))

    def test_dominant_exponent_slope(self):
        spec = fixture("two_exp")
        slope = (math.log(tail_asymptote(spec, 1e6)) - math.log(tail_asymptote(spec, 1e5)))
        slope /= math.log(10.0)
        assert slope == pytest.approx(-0.8, abs=1e-3)

    def test_invalid_lambda(self):
        with pytest.raises(ValueError):
            tail_asymptote(CAUCHY, 0.0)

    def test_zero_function_rejected(self):
        zero = refine(StepFunction((0.0, 1.0), (0.0,)), ExponentFunction.constant(1.0))
        with pytest.raises(ValueError):
            tail_asymptote(zero, 1.0)

    def test_strictly_decreasing(self, rng):
        for _ in range(10):
            spec = random_spec(rng)
            lams = np.geomspace(0.5, 1e4, 30)
            vals = TailAsymptote.from_spec(spec)(lams)
            assert np.all(np.diff(vals) < 0.0)


class TestRatio:
    def test_cauchy_100(self):
        got = ratio(CAUCHY, 100.0, QuadratureConfig(abs_tol=1e-12))
        assert got == pytest.approx(0.99997, abs=1e-5)

    def test_cauchy_1(self):
        got = ratio(CAUCHY, 1.0, QuadratureConfig(abs_tol=1e-12))
        assert got == pytest.approx(0.5 / (2.0 / math.pi), rel=1e-10)

    def test_tends_to_one(self):
        cfg = QuadratureConfig(abs_tol=1e-13)
        for name in ("cauchy", "two_exp", "three_cell", "wide_narrow"):
            spec = fixture(name)
            devs = [abs(ratio(spec, lam, cfg) - 1.0) for lam in (1e2, 1e3, 1e4)]
            assert devs[-1] < devs[0]
            assert devs[-1] < 0.05

    def test_lambda_below_one_rejected(self):
        with pytest.raises(ValueError):
            ratio(CAUCHY, 0.5)

    def test_unnormalized_rejected(self):
        spec = refine(StepFunction((0.0, 2.0), (1.0,)), ExponentFunction.constant(0.5))
        with pytest.raises(ValueError):
            ratio(spec, 10.0)


class TestScalingBounds:
    def test_xi_one_trivial(self):
        assert scaling_bounds_check(CAUCHY, 1.0, 1.0) == (True, True, True)

    def test_validation(self):
        with pytest.raises(ValueError):
            scaling_bounds_check(CAUCHY, 0.5, 1.0)
        with pytest.raises(ValueError):
            scaling_bounds_check(CAUCHY, 1.0, 0.0)

    def test_constant_alpha_always_inside(self, rng):
        spec = fixture("alpha14")
        for _ in range(50):
            xi = float(rng.uniform(1.0, 100.0))
            delta = float(rng.uniform(0.01, 50.0))
            assert all(scaling_bounds_check(spec, xi, delta))

    def test_random_sweep(self, rng):
        for _ in range(200):
            spec = random_spec(rng)
            xi = float(rng.uniform(1.0, 50.0))
            delta = float(rng.uniform(0.05, 20.0))
            assert all(scaling_bounds_check(spec, xi, delta))
