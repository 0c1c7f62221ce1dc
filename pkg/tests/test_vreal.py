"""
Unit tests for exact virtual reals
"""

import os
import random
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import configure
from src.core.errors import DegreeLimitExceeded, UndecidableMembership, ZeroBranchDivisor
from src.core.poly import RatFunc, ratfunc_from_coeffs
from src.core.vreal import (
    EPS,
    INF,
    ONE,
    ZERO,
    Magnitude,
    Sign,
    Undefined,
    Verdict,
    VirtualReal,
    as_vreal,
    classify,
    exact_derivative,
    is_virtual_integer,
    sign,
    standard_part,
    vr_compare,
    vr_const,
    vr_cyc,
)

N = RatFunc.index()


def random_vreal(rng: random.Random, rational: bool = True) -> VirtualReal:
    """A random value of period 1 or 2; polynomial branches unless rational"""

    def branch():
        num = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]
        den = [rng.randint(1, 3)]
        if rational:
            den += [rng.randint(0, 2)]
        return ratfunc_from_coeffs(num, den)

    return VirtualReal.from_branches([branch() for _ in range(rng.choice((1, 2)))])


class TestArithmetic:
    """Test exact arithmetic"""

    def test_infinite_times_infinite_plus_one(self):
        """Test inf * (inf + 1) = n^2 + n"""
        assert str(INF * (INF + 1)) == "(n^2+n)/1"

    def test_eps_times_inf(self):
        """Test eps * inf = 1"""
        assert EPS * INF == ONE

    def test_division_by_inf(self):
        """Test (n^2+n)/inf = n+1"""
        assert (INF * (INF + 1)) / INF == INF + 1

    def test_zero_divisors(self):
        """Test cyc[0,1] * cyc[1,0] = 0 with both factors nonzero"""
        a, b = vr_cyc(0, 1), vr_cyc(1, 0)
        assert a * b == ZERO
        assert a != ZERO and b != ZERO

    def test_zero_branch_divisor(self):
        """Test division by a value with a zero branch"""
        with pytest.raises(ZeroBranchDivisor):
            ONE / vr_cyc(0, 1)
        with pytest.raises(ZeroBranchDivisor):
            ONE / ZERO

    def test_alternating_square(self):
        """Test cyc[-1,1]^2 = 1"""
        assert vr_cyc(-1, 1) ** 2 == ONE

    def test_degree_cap(self):
        """Test powers past the degree cap are refused before expansion"""
        configure(max_degree=4)
        assert (INF ** 4).branches()[0].degree == 4
        with pytest.raises(DegreeLimitExceeded):
            INF ** 5

    def test_exponent_cap_on_constants(self):
        """Test a constant base still has its exponent capped"""
        assert vr_const(2) ** 32 == vr_const(2 ** 32)
        with pytest.raises(DegreeLimitExceeded) as exc:
            vr_const(2) ** 33
        assert str(exc.value) == "exponent 33 exceeds the configured degree cap 32"

    def test_mixed_operands(self):
        """Test ints and fractions are coerced"""
        assert 1 + EPS == as_vreal(RatFunc.constant(1) + RatFunc.constant(1) / N)
        assert Fraction(1, 2) * vr_const(2) == ONE
        assert -vr_cyc(1, -1) == vr_cyc(-1, 1)
        assert abs(vr_cyc(-1, 1)) == ONE

    def test_ring_laws_fuzzed(self):
        """Test ring laws on 10^4 seeded polynomial triples"""
        rng = random.Random(0)
        for _ in range(10_000):
            a, b, c = (random_vreal(rng, rational=False) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c

    def test_ring_laws_rational_branches(self):
        """Test ring laws on seeded triples with rational-function branches"""
        rng = random.Random(1)
        for _ in range(300):
            a, b, c = (random_vreal(rng) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c


class TestComparison:
    """Test eventual comparison"""

    def test_mixed_alternating(self):
        """Test neither 0 <= alt nor alt <= 0 holds for alt = cyc[-1,1]"""
        alt = vr_cyc(-1, 1)
        assert vr_compare(ZERO, "<=", alt).kind is Verdict.MIXED
        assert vr_compare(alt, "<=", ZERO).kind is Verdict.MIXED
        assert str(vr_compare(ZERO, "<=", alt)) == "mixed (not comparable)"

    def test_infinitesimal_order(self):
        """Test 0 < eps < every positive standard value"""
        assert vr_compare(ZERO, "<", EPS).holds
        assert vr_compare(EPS, "<", vr_const(Fraction(1, 1000))).holds
        assert vr_compare(INF, ">", vr_const(10 ** 9)).holds

    def test_equality_verdicts(self):
        """Test == and != on per-branch grounds"""
        assert str(vr_compare(vr_cyc(0, 1), "==", vr_cyc(0, 1))) == "true"
        assert str(vr_compare(vr_cyc(0, 1), "==", vr_cyc(1, 0))) == "false"
        assert vr_compare(vr_cyc(0, 1), "==", ZERO).per_branch == (True, False)

    def test_eventual_sign(self):
        """Test the sign of (-2n^3+999n^2)/(n+5) is negative"""
        x = as_vreal(ratfunc_from_coeffs([0, 0, 999, -2], [5, 1]))
        assert sign(x) is Sign.NEGATIVE
        assert sign(vr_cyc(-1, 1)) is Sign.MIXED
        assert sign(ZERO) is Sign.ZERO

    def test_unknown_relation(self):
        """Test unknown comparison names are rejected"""
        with pytest.raises(ValueError):
            vr_compare(ONE, "<>", ZERO)

    @given(st.integers(-5, 5), st.integers(-5, 5))
    @settings(max_examples=50, deadline=None)
    def test_standard_values_are_totally_ordered(self, a, b):
        """Test trichotomy on period-1 standard values"""
        x, y = vr_const(a), vr_const(b)
        holds = [vr_compare(x, "<", y).holds, x == y, vr_compare(y, "<", x).holds]
        assert holds.count(True) == 1


    def test_eps_below_positive_rationals(self):
        """Test eps < x for 100 sampled positive rationals"""
        rng = random.Random(2)
        for _ in range(100):
            x = Fraction(rng.randint(1, 10 ** 6), rng.randint(1, 10 ** 6))
            assert vr_compare(EPS, "<", vr_const(x)).holds

    def test_standard_values_below_inf(self):
        """Test x < inf for 100 sampled rationals up to 10^12"""
        rng = random.Random(3)
        for _ in range(100):
            x = Fraction(rng.randint(-10 ** 12, 10 ** 12), rng.randint(1, 1000))
            assert vr_compare(vr_const(x), "<", INF).holds

    def test_order_laws_fuzzed(self):
        """Test <= is reflexive, transitive and antisymmetric on 10^4 seeded triples"""
        rng = random.Random(4)

        def le(x, y):
            return vr_compare(x, "<=", y).holds

        for _ in range(10_000):
            a, b, c = (random_vreal(rng, rational=False) for _ in range(3))
            assert le(a, a)
            if le(a, b) and le(b, c):
                assert le(a, c)
            if le(a, b) and le(b, a):
                assert a == b
        alt = vr_cyc(-1, 1)
        assert not le(alt, ZERO) and not le(ZERO, alt)

    def test_order_compatibility(self):
        """Test a < b gives a + c < b + c, and a*c < b*c for c > 0"""
        rng = random.Random(5)
        for _ in range(2_000):
            a, b, c = (random_vreal(rng, rational=False) for _ in range(3))
            if not vr_compare(a, "<", b).holds:
                continue
            assert vr_compare(a + c, "<", b + c).holds
            if vr_compare(c, ">", ZERO).holds:
                assert vr_compare(a * c, "<", b * c).holds

    def test_period_one_values_form_an_ordered_field(self):
        """Test inverses and trichotomy for seeded period-1 rational functions"""
        rng = random.Random(6)

        def value():
            num = [rng.randint(-3, 3) for _ in range(3)]
            return as_vreal(ratfunc_from_coeffs(num, [rng.randint(1, 3), rng.randint(0, 2)]))

        for _ in range(300):
            a, b = value(), value()
            holds = [vr_compare(a, "<", b).holds, a == b, vr_compare(b, "<", a).holds]
            assert holds.count(True) == 1
            if a != ZERO:
                assert a * (ONE / a) == ONE


class TestStandardPart:
    """Test classification and standard parts"""

    def test_classify(self):
        """Test the magnitude classes"""
        assert classify(EPS) is Magnitude.INFINITESIMAL
        assert classify(ZERO) is Magnitude.ZERO
        assert classify(ONE + EPS) is Magnitude.APPRECIABLE
        assert classify(INF) is Magnitude.INFINITE
        assert classify(vr_cyc(0, 1) * EPS) is Magnitude.INFINITESIMAL
        assert classify(vr_cyc(1, 0) * INF) is Magnitude.MIXED

    def test_standard_part_of_near_one(self):
        """Test st(1 + eps + eps^2) = 1 and the remainder is infinitesimal"""
        x = ONE + EPS + EPS ** 2
        assert standard_part(x) == 1
        assert classify(x - ONE) is Magnitude.INFINITESIMAL

    def test_standard_part_undefined(self):
        """Test infinite and divergent values have no standard part"""
        assert standard_part(INF) == Undefined("infinite-branch")
        assert standard_part(vr_cyc(-1, 1)) == Undefined("divergent-branches")
        assert str(standard_part(vr_cyc(-1, 1))) == "undefined (divergent-branches)"

    def test_standard_part_of_rational_function(self):
        """Test st((n^2+1)/(2n^2)) = 1/2"""
        x = as_vreal((N * N + RatFunc.constant(1)) / (RatFunc.constant(2) * N * N))
        assert standard_part(x) == Fraction(1, 2)

    def test_standard_part_is_a_partial_homomorphism(self):
        """Test st(a + b) and st(a * b) where st(a) and st(b) exist"""
        rng = random.Random(7)
        checked = 0
        for _ in range(300):
            a, b = random_vreal(rng), random_vreal(rng)
            sa, sb = standard_part(a), standard_part(b)
            if isinstance(sa, Undefined) or isinstance(sb, Undefined):
                continue
            assert standard_part(a + b) == sa + sb
            assert standard_part(a * b) == sa * sb
            checked += 1
        assert checked > 0

    def test_virtual_integers(self):
        """Test membership in the extended integers"""
        assert is_virtual_integer(INF * INF + 1)
        assert is_virtual_integer(vr_cyc(2, -1))
        assert not is_virtual_integer(vr_const(Fraction(1, 2)))
        with pytest.raises(UndecidableMembership):
            is_virtual_integer(INF / 2)

    def test_exact_derivative(self):
        """Test the symbolic derivative of n^3 - n"""
        rf = N ** 3 - N
        assert exact_derivative(rf) == RatFunc.constant(3) * N * N - RatFunc.constant(1)
