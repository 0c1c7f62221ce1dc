"""
Unit tests for relations, connectives, quantifiers and their extensions
"""

import os
import sys
from itertools import product

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import ArityMismatch, NonEnumerableDomain, UndecidableBranch
from src.core.poly import RatFunc
from src.core.seqcore import REALS, FiniteSet, ProductSpec, VirtualValue, cyc, embed_const, rational
from src.core.vreal import EPS, INF, vr_cyc
from src.logic.relations import (
    ExtendedRelation,
    RelationModel,
    equality,
    extensional,
    fix_prefix_args,
    positive,
    predicate,
    quantify,
    rational_order,
    rel_combine,
    relation_from_model,
    transfer_quantifier_check,
)

N = RatFunc.index()
U = FiniteSet.of(0, 1)


def unary(*points):
    return extensional(U, 1, [(p,) for p in points])


def both_points():
    return frozenset({(rational(0),), (rational(1),)})


class TestRelation:
    """Test base relations"""

    def test_extensional_holds(self):
        """Test membership of tuples"""
        P = extensional(U, 2, [(0, 1), (1, 0)])
        assert P.holds((0, 1))
        assert not P.holds((0, 0))

    def test_arity_checked(self):
        """Test tuples of the wrong arity are rejected"""
        with pytest.raises(ArityMismatch):
            extensional(U, 2, [(0,)])
        with pytest.raises(ArityMismatch):
            unary(0).holds((0, 1))

    def test_predicate_must_be_decidable(self):
        """Test predicates over a finite universe must return booleans"""
        with pytest.raises(ValueError):
            predicate(U, 1, "broken", lambda args: None)

    def test_predicate_tuples(self):
        """Test a predicate is materialized over a finite universe"""
        P = predicate(U, 2, "eq", lambda args: args[0] == args[1])
        assert P.tuples() == frozenset({(rational(0), rational(0)), (rational(1), rational(1))})

    def test_model_round_trip(self):
        """Test the serialized form rebuilds the same relation"""
        P = extensional(U, 2, [(0, 1)])
        model = RelationModel.model_validate(P.to_model().model_dump())
        assert relation_from_model(model, U).same_extension(P)
        assert relation_from_model(rational_order("<").to_model(), REALS).name == "<"


class TestExtendedRelation:
    """Test relations extended to virtual values"""

    def test_holds_branchwise(self):
        """Test (cyc[0,1], cyc[1,0]) lies in the extension of {(0,1),(1,0)}"""
        ext = ExtendedRelation(extensional(U, 2, [(0, 1), (1, 0)]))
        assert ext(cyc(0, 1), cyc(1, 0))
        assert not ext(cyc(0, 1), cyc(0, 1))

    def test_faithful_on_constants(self):
        """Test P(a) iff the extension holds at the embedding of a"""
        P = extensional(U, 2, [(0, 1)])
        ext = ExtendedRelation(P)
        for a, b in product((0, 1), repeat=2):
            assert P.holds((a, b)) == ext(embed_const(a), embed_const(b))

    def test_non_constant_branch_leaves_extensional(self):
        """Test a rational branch never satisfies a tuple-set relation"""
        assert not ExtendedRelation(unary(0, 1))(VirtualValue((N,)))

    def test_positive_on_eps(self):
        """Test 0 < x holds on eps and fails on -eps"""
        ext = ExtendedRelation(positive())
        assert ext(EPS)
        assert not ext(-EPS)
        assert not ext(vr_cyc(-1, 1))

    def test_order_on_infinite_values(self):
        """Test eventual order on rational branches"""
        less = ExtendedRelation(rational_order("<"))
        assert less(INF, INF * INF)
        assert not less(INF, INF)

    def test_undecidable_branch(self):
        """Test predicates without an eventual rule refuse rational branches"""
        P = predicate(REALS, 1, "opaque", lambda args: True)
        with pytest.raises(UndecidableBranch):
            ExtendedRelation(P)(VirtualValue((N,)))

    def test_bind(self):
        """Test partial application on the extended side"""
        P = extensional(U, 2, [(0, 1), (1, 0)])
        bound = ExtendedRelation(P).bind(cyc(0, 1))
        assert bound.arity == 1
        assert bound(cyc(1, 0))
        assert not bound(embed_const(1))
        with pytest.raises(ArityMismatch):
            bound.bind(embed_const(0))


class TestConnectives:
    """Test connectives on relations and their extensions"""

    def test_extensional_connectives(self):
        """Test set operations on tuple sets"""
        P, Q = unary(0), unary(1)
        assert rel_combine("or", P, Q).tuples() == both_points()
        assert rel_combine("and", P, Q).tuples() == frozenset()
        assert rel_combine("not", P).same_extension(Q)
        assert rel_combine("iff", P, Q).tuples() == frozenset()
        assert rel_combine("implies", P, Q).same_extension(Q)

    def test_disjunction_strictly_larger(self):
        """Test ext(P or Q) holds on cyc[0,1] while neither ext P nor ext Q does"""
        P, Q = unary(0), unary(1)
        x = cyc(0, 1)
        assert ExtendedRelation(rel_combine("or", P, Q))(x)
        assert not ExtendedRelation(P)(x)
        assert not ExtendedRelation(Q)(x)

    def test_negation_strictly_smaller(self):
        """Test not ext P holds on cyc[0,1] while ext(not P) fails"""
        P = unary(0)
        x = cyc(0, 1)
        assert not ExtendedRelation(P)(x)
        assert not ExtendedRelation(rel_combine("not", P))(x)

    def test_predicate_connectives(self):
        """Test connectives of predicates keep an eventual rule"""
        le = rel_combine("or", rational_order("<"), equality())
        ext = ExtendedRelation(le)
        assert ext(EPS, INF)
        assert ext(INF, INF)
        assert not ext(INF, EPS)

    def test_arity_mismatch(self):
        """Test connectives need equal arities"""
        with pytest.raises(ArityMismatch):
            rel_combine("and", unary(0), extensional(U, 2, []))


class TestQuantifiers:
    """Test partial application and quantification"""

    def test_fix_prefix_args(self):
        """Test Pa = { x | P(a, x) }"""
        P = extensional(U, 2, [(0, 1), (1, 1)])
        assert fix_prefix_args(P, (0,)).tuples() == frozenset({(rational(1),)})
        with pytest.raises(ArityMismatch):
            fix_prefix_args(P, (0, 1))

    def test_quantify_exists(self):
        """Test (exists D, P) with witnesses chosen per branch"""
        eq = quantify("exists", U, equality(U))
        assert eq.tuples() == both_points()
        ext = ExtendedRelation(equality(U)).quantified("exists", U)
        assert ext(cyc(0, 1))
        assert ExtendedRelation(eq)(cyc(0, 1))

    def test_quantify_unique_and_forall(self):
        """Test unique and universal quantifiers"""
        P = extensional(U, 2, [(0, 0), (1, 0), (0, 1)])
        assert quantify("forall", U, P).tuples() == frozenset({(rational(0),)})
        assert quantify("unique", U, P).tuples() == frozenset({(rational(1),)})
        ext_unique = ExtendedRelation(P).quantified("unique", U)
        assert ext_unique(embed_const(1))
        assert not ext_unique(cyc(0, 1))

    def test_quantify_interval_refused(self):
        """Test quantification over an interval union"""
        with pytest.raises(NonEnumerableDomain):
            quantify("forall", REALS, rational_order("<"))

    def test_quantify_product_domain(self):
        """Test quantifying two entries at once"""
        P = extensional(U, 3, [(0, 0, 1), (1, 1, 1)])
        D = ProductSpec((U, U))
        assert quantify("exists", D, P).tuples() == frozenset({(rational(1),)})


class TestTransferClauses:
    """Test the quantifier transfer clauses (a), (b), (c)"""

    @pytest.mark.parametrize("q", ["forall", "exists", "unique"])
    def test_all_unary_relations(self, q):
        """Test every unary relation on {0,1} transfers"""
        for points in [(), (0,), (1,), (0, 1)]:
            report = transfer_quantifier_check(q, U, unary(*points))
            assert report.verdict == "Equal", report.note

    def test_binary_relations(self):
        """Test a binary relation over the square of {0,1}"""
        P = extensional(U, 2, [(0, 1)])
        D = ProductSpec((U, U))
        for q in ("forall", "exists", "unique"):
            assert transfer_quantifier_check(q, D, P).verdict == "Equal"

    def test_arity_must_match_domain(self):
        """Test a relation of the wrong arity is rejected"""
        with pytest.raises(ArityMismatch):
            transfer_quantifier_check("forall", U, extensional(U, 2, []))
