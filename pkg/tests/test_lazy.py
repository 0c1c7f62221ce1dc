"""
Unit tests for the horizon-bounded lazy tier
"""

import os
import random
import sys
from fractions import Fraction

import mpmath
import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import DomainViolation, EvaluationError
from src.core.poly import Poly, RatFunc, ratfunc_from_coeffs
from src.core.vreal import EPS, INF, ONE, as_vreal, vr_const, vr_cyc
from src.lazy.lazy_seq import (
    LazySeq,
    Truth3Kind,
    as_lazy,
    check_identity,
    check_relation,
    derivative,
    format_tol,
    lift_value_fn,
    sample_grid,
    st_numeric,
)

N = RatFunc.index()


def sin(x):
    return lift_value_fn("sin", x)


def cos(x):
    return lift_value_fn("cos", x)


def horner(coeffs, x):
    acc = vr_const(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class TestSampling:
    """Test the sampling grid and lazy values"""

    def test_grid_covers_every_residue(self):
        """Test indices period*t + r stay within the horizon"""
        grid = sample_grid(2, 100)
        assert grid.tolist() == [32, 33, 64, 65]
        assert sample_grid(1).max() <= 10000

    def test_exp_of_eps(self):
        """Test exp(eps) at index 10^6 is 1 + 1e-6 up to second order"""
        value = lift_value_fn("exp", EPS).at(10 ** 6)
        assert abs(value - (1 + mpmath.mpf("1e-6"))) < mpmath.mpf("1e-11")

    def test_describe(self):
        """Test the provenance text"""
        assert str(sin(INF)) == "lazy sin(n/1)"
        assert str(sin(INF) * 2) == "lazy (sin(n/1) * 2)"

    def test_rebuild_from_provenance(self):
        """Test a provenance tree rebuilds the same rule"""
        value = sin(vr_cyc(1, 2)) + cos(INF)
        rebuilt = LazySeq.from_provenance(value.provenance)
        assert rebuilt.period == 2
        assert all(rebuilt.at(i) == value.at(i) for i in (16, 17, 1000))

    def test_ln_domain(self):
        """Test ln needs an eventually positive argument"""
        with pytest.raises(DomainViolation):
            lift_value_fn("ln", -EPS)
        with pytest.raises(ValueError):
            lift_value_fn("tan", INF)

    def test_evaluation_error(self):
        """Test ln of a lazy negative value fails at sampling time"""
        with pytest.raises(EvaluationError):
            lift_value_fn("ln", as_lazy(-INF)).at(16)

    def test_format_tol(self):
        """Test tolerances print compactly"""
        assert format_tol(1e-9) == "1e-9"
        assert format_tol(0.001) == "0.001"


class TestVerdicts:
    """Test three-valued verdicts"""

    @pytest.mark.parametrize(
        "alpha",
        [INF, vr_cyc(1, 2), as_vreal((N + RatFunc.constant(1)) / N)],
        ids=["inf", "cyc", "ratio"],
    )
    def test_pythagorean_identity(self, alpha):
        """Test sin^2 + cos^2 = 1 up to the horizon"""
        verdict = check_identity(sin(alpha) ** 2 + cos(alpha) ** 2, ONE)
        assert verdict.kind is Truth3Kind.TRUE_UP_TO
        assert str(verdict) == "true (checked to H=10000, tol=1e-9)"

    def test_log_law(self):
        """Test ln(inf*inf) = 2 ln(inf) up to the horizon"""
        verdict = check_identity(lift_value_fn("ln", INF * INF), 2 * lift_value_fn("ln", INF), 1e-9, 10 ** 4)
        assert verdict.kind is Truth3Kind.TRUE_UP_TO

    def test_false_with_witness(self):
        """Test a failing identity reports the first failing index"""
        verdict = check_identity(sin(INF), 0)
        assert verdict.kind is Truth3Kind.FALSE_WITH_WITNESS
        assert verdict.witness == 16
        assert str(verdict) == "false (fails at index 16, tol=1e-9)"

    def test_strict_comparison_inconclusive(self):
        """Test a strict comparison between values within tolerance"""
        verdict = check_relation(sin(INF) ** 2 + cos(INF) ** 2, "<", ONE)
        assert verdict.kind is Truth3Kind.INCONCLUSIVE

    def test_order_true(self):
        """Test exp(n) > n up to the horizon"""
        assert check_relation(lift_value_fn("exp", INF), ">", INF).kind is Truth3Kind.TRUE_UP_TO


class TestNumericStandardPart:
    """Test Richardson standard parts and derivatives"""

    def test_n_sin_inverse_n(self):
        """Test st(n*sin(1/n)) = 1"""
        estimate = st_numeric(sin(EPS) * INF)
        assert estimate.converged
        assert abs(estimate.value - 1) < 1e-8

    def test_diverging(self):
        """Test an infinite value has no numeric standard part"""
        assert st_numeric(as_lazy(INF)).status == "diverging"

    def test_oscillating(self):
        """Test residue classes with different limits"""
        assert st_numeric(as_lazy(vr_cyc(-1, 1))).status == "oscillating"

    def test_derivative_of_sin(self):
        """Test d/dx sin at 0 is 1"""
        estimate = derivative(sin, 0)
        assert estimate.converged and not estimate.exact
        assert abs(estimate.value - 1) < 1e-6

    def test_derivative_of_ln(self):
        """Test d/dx ln at 2 is 1/2"""
        estimate = derivative(lambda x: lift_value_fn("ln", x), 2)
        assert abs(estimate.value - mpmath.mpf("0.5")) < 1e-6

    def test_exact_derivatives(self):
        """Test polynomial derivatives take the exact route"""
        assert str(derivative(lambda x: x ** 2, 3)) == "6 (exact)"
        estimate = derivative(lambda x: x ** 3 - x, 2)
        assert estimate.exact and estimate.value == 11

    def test_exact_route_matches_symbolic_derivative(self):
        """Test seeded rational functions against the quotient rule"""
        rng = random.Random(0)
        checked = 0
        while checked < 40:
            num = [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))]
            den = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]
            x0 = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
            if Poly(tuple(Fraction(c) for c in den))(x0) == 0:
                continue
            rf = ratfunc_from_coeffs(num, den)
            estimate = derivative(lambda x: horner(num, x) / horner(den, x), x0)
            assert estimate.exact
            assert estimate.value == rf.derivative().evaluate(x0)
            checked += 1

    def test_grid_is_deterministic(self):
        """Test repeated sampling gives identical grids"""
        assert np.array_equal(sample_grid(3), sample_grid(3))
