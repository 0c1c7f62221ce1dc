"""
Unit tests for canonical virtual values and subset specs
"""

import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import NonEnumerableDomain, PeriodLimitExceeded, UndecidableBranch, UndecidableMembership
from src.core.poly import RatFunc, ratfunc_from_coeffs
from src.core.seqcore import (
    POSITIVE_REALS,
    REALS,
    ConstTerm,
    FiniteSet,
    IntegerLattice,
    IntervalUnion,
    ProductSpec,
    RatTerm,
    VirtualValue,
    aligned_period,
    atom,
    canonicalize,
    cyc,
    element,
    embed_const,
    end_equal,
    ends_in,
    enumerate_cyclic,
    enumerate_spec,
    interval,
    k_embedding,
    pack_tuple,
    rational,
    spec_contains,
    spec_subset,
    subset_extension,
    unpack_tuple,
)

N = RatFunc.index()
SMALL = st.tuples(st.lists(st.integers(0, 1), max_size=2), st.lists(st.integers(0, 1), min_size=1, max_size=2))


def expand(prefix, tail, length):
    """The raw sequence prefix + tail + tail + ... at indices 1..length"""
    seq = list(prefix)
    while len(seq) < length:
        seq.extend(tail)
    return seq[:length]


class TestCanonicalForm:
    """Test canonicalization of prefix + cyclic tail"""

    def test_prefix_reanchors_branches(self):
        """Test a prefix of length 1 swaps the branches of cyc[-1, 1]"""
        value = canonicalize((0,), (-1, 1))
        assert value.period == 2
        assert value.branches == (ConstTerm(rational(1)), ConstTerm(rational(-1)))
        raw = expand((0,), (-1, 1), 12)
        assert all(value.term_at(i) == rational(raw[i - 1]) for i in range(2, 13))

    def test_minimal_period(self):
        """Test repeated blocks collapse to the minimal period"""
        assert cyc(1, 2, 1, 2).period == 2
        assert cyc(3, 3, 3) == embed_const(3)

    def test_constant_rational_branch_becomes_constant(self):
        """Test n/n is stored as the constant 1"""
        value = VirtualValue((N / N,))
        assert value == embed_const(1)
        assert value.is_standard

    def test_rational_branch_render(self):
        """Test rendering of cyclic and rational values"""
        assert str(cyc(-1, 1)) == "cyc{-1; 1}"
        assert str(VirtualValue((N * (N + RatFunc.constant(1)),))) == "(n^2+n)/1"

    def test_period_cap(self):
        """Test the period cap on the minimized period"""
        with pytest.raises(PeriodLimitExceeded):
            canonicalize((), (1, 2, 3), max_period=2)
        assert canonicalize((), (1, 1, 1), max_period=1) == embed_const(1)

    def test_aligned_period(self):
        """Test alignment to the lcm of periods"""
        assert aligned_period([cyc(0, 1), cyc(0, 1, 2)]) == 6
        with pytest.raises(PeriodLimitExceeded):
            aligned_period([cyc(0, 1), cyc(0, 1, 2)], max_period=4)

    def test_json_round_trip(self):
        """Test JSON rendering of constant and rational branches"""
        value = VirtualValue((RatFunc.constant(1) / N, ConstTerm(rational(Fraction(1, 2)))))
        assert VirtualValue.from_json(value.to_json()) == value
        assert value.to_json()["period"] == 2

    @given(
        st.lists(st.integers(-2, 2), max_size=3),
        st.lists(st.integers(-2, 2), min_size=1, max_size=4),
    )
    @settings(max_examples=100, deadline=None)
    def test_canonical_form_is_end_equal_to_raw(self, prefix, tail):
        """Test the canonical value agrees with the raw sequence past the prefix"""
        value = canonicalize(prefix, tail)
        length = len(prefix) + 4 * len(tail)
        raw = expand(prefix, tail, length)
        for i in range(len(prefix) + 1, length + 1):
            assert value.term_at(i) == rational(raw[i - 1])


class TestEndEqual:
    """Test the end-equality decision"""

    def test_rational_branches_cross_multiplied(self):
        """Test (n^2-1)/(n-1) is end-equal to n+1"""
        a = VirtualValue((ratfunc_from_coeffs([-1, 0, 1], [-1, 1]),))
        b = VirtualValue((N + RatFunc.constant(1),))
        assert end_equal(a, b)

    def test_alignment(self):
        """Test values of different periods are compared on the lcm"""
        assert end_equal(cyc(0, 1), cyc(0, 1, 0, 1))
        assert not end_equal(cyc(0, 1), cyc(1, 0))
        assert not end_equal(cyc(0, 1), embed_const(0))

    @given(SMALL, SMALL, SMALL)
    @settings(max_examples=200, deadline=None)
    def test_end_equal_is_an_equivalence(self, x, y, z):
        """Test reflexivity, symmetry and transitivity, and agreement with the raw sequences"""
        a, b, c = (canonicalize(prefix, tail) for prefix, tail in (x, y, z))
        assert end_equal(a, a)
        assert end_equal(a, b) == end_equal(b, a)
        if end_equal(a, b) and end_equal(b, c):
            assert end_equal(a, c)
        raw_a, raw_b = expand(*x, 14), expand(*y, 14)
        assert end_equal(a, b) == (raw_a[2:] == raw_b[2:])


class TestSubsets:
    """Test subset specs and eventual membership"""

    def test_finite_membership(self):
        """Test non-constant branches leave every finite set"""
        B = FiniteSet.of(0, 1)
        assert ends_in(cyc(0, 1), B)
        assert not ends_in(cyc(0, 2), B)
        assert not ends_in(VirtualValue((N,)), B)

    def test_interval_membership(self):
        """Test eventual membership in intervals by eventual sign"""
        x = VirtualValue((ratfunc_from_coeffs([-1000, 1], [1]),))
        assert ends_in(x, IntervalUnion.of(interval(0, None)))
        assert not ends_in(VirtualValue((RatFunc.constant(1) / N,)), IntervalUnion.of(interval(1, 2, "[]")))
        assert ends_in(VirtualValue((RatFunc.constant(1) / N,)), POSITIVE_REALS)
        assert not ends_in(VirtualValue((RatFunc.constant(-1) / N,)), POSITIVE_REALS)

    def test_interval_endpoint(self):
        """Test 1 - 1/n ends in [0, 1) but 1 + 1/n does not"""
        below = VirtualValue((RatFunc.constant(1) - RatFunc.constant(1) / N,))
        above = VirtualValue((RatFunc.constant(1) + RatFunc.constant(1) / N,))
        unit = IntervalUnion.of(interval(0, 1, "[)"))
        assert ends_in(below, unit)
        assert not ends_in(above, unit)

    def test_integer_lattice(self):
        """Test integer-coefficient polynomials are virtual integers"""
        Z = IntegerLattice()
        assert ends_in(VirtualValue((N * N,)), Z)
        assert ends_in(cyc(1, -3), Z)
        assert not ends_in(embed_const(Fraction(1, 2)), Z)
        with pytest.raises(UndecidableMembership):
            ends_in(VirtualValue((N / RatFunc.constant(2),)), Z)

    def test_product_membership(self):
        """Test a sequence of values against a product"""
        D = ProductSpec((FiniteSet.of(0, 1), REALS))
        assert ends_in([cyc(0, 1), VirtualValue((N,))], D)
        assert not ends_in([VirtualValue((N,)), cyc(0, 1)], D)

    def test_spec_subset(self):
        """Test decidable inclusions"""
        assert spec_subset(FiniteSet.of(0, 1), REALS)
        assert spec_subset(FiniteSet.of(1), POSITIVE_REALS)
        assert not spec_subset(FiniteSet.of(0), POSITIVE_REALS)
        assert spec_subset(POSITIVE_REALS, REALS)
        assert not spec_subset(REALS, POSITIVE_REALS)
        assert spec_subset(IntegerLattice(), REALS)

    def test_spec_contains(self):
        """Test standard membership"""
        assert spec_contains(FiniteSet.of(0, 1), 1)
        assert not spec_contains(POSITIVE_REALS, 0)
        assert spec_contains(IntervalUnion.of(interval(0, 1, "[)")), Fraction(1, 2))

    def test_invalid_union(self):
        """Test overlapping intervals are rejected"""
        with pytest.raises(ValueError):
            IntervalUnion.of(interval(0, 2), interval(1, 3))

    def test_enumerate_spec(self):
        """Test enumeration of finite products and rejection of intervals"""
        D = ProductSpec((FiniteSet.of(0, 1), FiniteSet.of(2)))
        assert enumerate_spec(D) == [(rational(0), rational(2)), (rational(1), rational(2))]
        with pytest.raises(NonEnumerableDomain):
            enumerate_spec(REALS)


class TestFragment:
    """Test embeddings and fragment enumeration"""

    def test_enumerate_cyclic_counts(self):
        """Test |U|=2, m=2 gives 4 elements and |U|=3, m=2 gives 9"""
        two = [atom(0), atom(1)]
        assert len(enumerate_cyclic(two, 1)) == 2
        assert len(enumerate_cyclic(two, 2)) == 4
        assert len(enumerate_cyclic([atom(0), atom(1), atom(2)], 2)) == 9

    def test_k_embedding(self):
        """Test K(B) = K(A) restricted to the extension of B"""
        A = FiniteSet.of(0, 1, 2)
        B = FiniteSet.of(0, 1)
        fragment = enumerate_cyclic(A.sorted(), 2)
        constants_in_b = {x for x in subset_extension(B, fragment) if x.is_standard}
        assert k_embedding(B) == frozenset(constants_in_b)
        assert k_embedding(B) == frozenset({embed_const(0), embed_const(1)})

    def test_pack_unpack(self):
        """Test the product identification both ways"""
        x, y = cyc(0, 1), embed_const(2)
        packed = pack_tuple([x, y])
        assert packed.period == 2
        assert unpack_tuple(packed, 2) == (x, y)
        with pytest.raises(UndecidableBranch):
            pack_tuple([VirtualValue((N,)), y])

    def test_element_coercion(self):
        """Test ints, strings and tuples become universe elements"""
        assert element(1) == rational(1)
        assert element("a") == atom("a")
        assert element((1, "a")).payload == (rational(1), atom("a"))
        assert isinstance(VirtualValue((N,)).branches[0], RatTerm)
