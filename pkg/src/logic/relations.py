"""
Relations as tuple sets, their connectives and quantifiers, and the
extension of a relation to virtual values.

A relation is either extensional (an explicit tuple set over a finite
universe) or a decidable predicate. Predicates that must be evaluated on
non-constant branches carry an `eventual` rule: given one branch term per
argument, it returns the truth value the predicate takes for all large
indices along that branch. Every connective and quantifier combines these
rules pointwise, so extension commutes with them on the decidable fragment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple, Union

from loguru import logger
from pydantic import BaseModel

from src.config import get_settings
from src.core.errors import ArityMismatch, NonEnumerableDomain, SizeLimit, UndecidableBranch
from src.core.seqcore import (
    REALS,
    BranchTerm,
    ConstTerm,
    FiniteSet,
    IntervalUnion,
    ProductSpec,
    SubsetSpec,
    UniverseElement,
    VirtualValue,
    aligned_period,
    as_value,
    decode_element,
    element,
    encode_element,
    enumerate_cyclic,
    enumerate_spec,
    rational,
    spec_arity,
    term_rational,
    terms_equal,
    tuple_element,
    unpack_tuple,
)

Args = Tuple[UniverseElement, ...]
Terms = Tuple[BranchTerm, ...]

CONNECTIVES = ("not", "and", "or", "implies", "iff")
QUANTIFIERS = ("forall", "exists", "unique")


@dataclass(frozen=True)
class Extensional:
    tuples: FrozenSet[Args]


@dataclass(frozen=True)
class Predicate:
    test: Callable[[Args], bool]
    name: str
    eventual: Optional[Callable[[Terms], bool]] = None


@dataclass(frozen=True)
class Relation:
    """An arity-n relation whose entries all range over `universe`"""

    arity: int
    universe: SubsetSpec
    body: Union[Extensional, Predicate]
    label: str = ""

    def __post_init__(self):
        if self.arity < 1:
            raise ArityMismatch("relations have arity >= 1")
        if isinstance(self.body, Extensional):
            for t in self.body.tuples:
                if len(t) != self.arity:
                    raise ArityMismatch(f"tuple {t} does not have arity {self.arity}")
        elif isinstance(self.universe, FiniteSet):
            # predicates must be total and two-valued on a finite universe
            for args in self._all_args():
                if not isinstance(self.body.test(args), bool):
                    raise ValueError(f"predicate {self.body.name} is not decidable at {args}")

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return self.body.name if isinstance(self.body, Predicate) else "{" + ", ".join(
            "(" + ", ".join(str(a) for a in t) + ")" for t in sorted(self.body.tuples, key=str)
        ) + "}"

    def __str__(self) -> str:
        return self.name

    def holds(self, args: Sequence[Any]) -> bool:
        args = tuple(element(a) for a in args)
        if len(args) != self.arity:
            raise ArityMismatch(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        if isinstance(self.body, Extensional):
            return args in self.body.tuples
        return bool(self.body.test(args))

    def _all_args(self) -> List[Args]:
        if not isinstance(self.universe, FiniteSet):
            raise NonEnumerableDomain(f"cannot enumerate the universe of {self.name}")
        size = len(self.universe.elements) ** self.arity
        limit = get_settings().size_limit
        if size > limit:
            raise SizeLimit(f"{size} tuples exceed the size limit {limit}")
        return list(product(self.universe.sorted(), repeat=self.arity))

    def tuples(self) -> FrozenSet[Args]:
        """The relation as an explicit tuple set"""
        if isinstance(self.body, Extensional):
            return self.body.tuples
        return frozenset(t for t in self._all_args() if self.body.test(t))

    def same_extension(self, other: Relation) -> bool:
        return self.arity == other.arity and self.tuples() == other.tuples()

    def to_model(self) -> RelationModel:
        if isinstance(self.body, Extensional):
            return RelationModel(
                arity=self.arity,
                kind="extensional",
                tuples=[[encode_element(a) for a in t] for t in sorted(self.body.tuples, key=str)],
            )
        return RelationModel(arity=self.arity, kind="predicate", predicate=self.name)


def branch_truth(P: Relation, terms: Terms) -> bool:
    """Truth value of P along one aligned branch, for all large indices"""
    if all(isinstance(t, ConstTerm) for t in terms):
        return P.holds(tuple(t.value for t in terms))
    if isinstance(P.body, Extensional):
        # a non-constant rational branch eventually avoids every constant
        return False
    if P.body.eventual is None:
        raise UndecidableBranch(f"{P.name} cannot decide non-constant branches; use the lazy tier")
    return bool(P.body.eventual(terms))


@dataclass(frozen=True)
class ExtendedRelation:
    """
    The extension of a relation: holds on (x1..xn) iff the base relation
    holds on the index-i representatives for all large i. Bound prefix
    arguments (from bind) are prepended on every call.
    """

    base: Relation
    prefix: Tuple[VirtualValue, ...] = field(default=())

    @property
    def arity(self) -> int:
        return self.base.arity - len(self.prefix)

    def __call__(self, *args) -> bool:
        values = self.prefix + tuple(as_value(a) for a in args)
        if len(values) != self.base.arity:
            raise ArityMismatch(f"extended {self.base.name} takes {self.arity} arguments, got {len(args)}")
        m = aligned_period(values)
        return all(branch_truth(self.base, tuple(v.branch(j) for v in values)) for j in range(m))

    def bind(self, *prefix) -> ExtendedRelation:
        if len(self.prefix) + len(prefix) >= self.base.arity:
            raise ArityMismatch("partial application must leave at least one argument free")
        return ExtendedRelation(self.base, self.prefix + tuple(as_value(p) for p in prefix))

    def quantified(self, q: str, D: SubsetSpec) -> Callable[..., bool]:
        """(q D̄, P̄) evaluated exactly; witnesses are chosen branch by branch"""
        if q not in QUANTIFIERS:
            raise ValueError(f"unknown quantifier {q!r}")
        domain = enumerate_spec(D)
        k = spec_arity(D)
        if self.arity <= k:
            raise ArityMismatch(f"cannot quantify {k} entries of an arity-{self.arity} relation")

        def evaluate(*args) -> bool:
            values = self.prefix + tuple(as_value(a) for a in args)
            m = aligned_period(values) if values else 1
            for j in range(m):
                rest = tuple(v.branch(j) for v in values)
                lead, tail = rest[: len(self.prefix)], rest[len(self.prefix):]
                hits = sum(
                    branch_truth(self.base, lead + tuple(ConstTerm(d) for d in ds) + tail) for ds in domain
                )
                if not _quantifier_ok(q, hits, len(domain)):
                    return False
            return True

        return evaluate


def extend_relation(P: Relation) -> ExtendedRelation:
    return ExtendedRelation(P)


def _quantifier_ok(q: str, hits: int, total: int) -> bool:
    if q == "forall":
        return hits == total
    if q == "exists":
        return hits > 0
    return hits == 1


# -- constructors ------------------------------------------------------------


def extensional(universe: SubsetSpec, arity: int, tuples, label: str = "") -> Relation:
    body = Extensional(frozenset(tuple(element(a) for a in t) for t in tuples))
    return Relation(arity, universe, body, label)


def predicate(
    universe: SubsetSpec,
    arity: int,
    name: str,
    test: Callable[[Args], bool],
    eventual: Optional[Callable[[Terms], bool]] = None,
) -> Relation:
    return Relation(arity, universe, Predicate(test, name, eventual))


def equality(universe: SubsetSpec = REALS) -> Relation:
    return predicate(universe, 2, "eq", lambda args: args[0] == args[1], lambda ts: terms_equal(ts[0], ts[1]))


_ORDER_TESTS = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
    "!=": lambda s: s != 0,
}


def rational_order(rel: str = "<") -> Relation:
    """x rel y on the rationals, decided on rational branches by eventual sign"""
    check = _ORDER_TESTS[rel]

    def test(args: Args) -> bool:
        x, y = args
        if not (x.is_numeric and y.is_numeric):
            return False
        diff = x.numeric() - y.numeric()
        return check((diff > 0) - (diff < 0))

    def eventual(terms: Terms) -> bool:
        x, y = (term_rational(t) for t in terms)
        if x is None or y is None:
            return False
        return check((x - y).eventual_sign())

    return predicate(REALS, 2, rel, test, eventual)


def positive() -> Relation:
    return fix_prefix_args(rational_order("<"), (rational(0),))


# -- connectives, partial application, quantifiers ---------------------------


def _combine_bool(op: str, p: bool, q: Optional[bool]) -> bool:
    if op == "not":
        return not p
    if op == "and":
        return p and q
    if op == "or":
        return p or q
    if op == "implies":
        return (not p) or q
    return p == q


def rel_combine(op: str, P: Relation, Q: Optional[Relation] = None) -> Relation:
    if op not in CONNECTIVES:
        raise ValueError(f"unknown connective {op!r}")
    if (op == "not") != (Q is None):
        raise ValueError(f"connective {op!r} takes {'one' if op == 'not' else 'two'} relations")
    if Q is not None and P.arity != Q.arity:
        raise ArityMismatch(f"cannot combine arity {P.arity} with arity {Q.arity}")
    label = f"not {P.name}" if Q is None else f"({P.name} {op} {Q.name})"
    same_universe = Q is None or Q.universe == P.universe
    extensional_pair = isinstance(P.body, Extensional) and (Q is None or isinstance(Q.body, Extensional))
    if extensional_pair and same_universe and isinstance(P.universe, FiniteSet):
        full = frozenset(P._all_args())
        p, q = P.body.tuples, Q.body.tuples if Q is not None else frozenset()
        tuples = {
            "not": full - p,
            "and": p & q,
            "or": p | q,
            "implies": (full - p) | q,
            "iff": (p & q) | (full - (p | q)),
        }[op]
        return Relation(P.arity, P.universe, Extensional(tuples), label)

    def test(args: Args) -> bool:
        return _combine_bool(op, P.holds(args), Q.holds(args) if Q is not None else None)

    def eventual(terms: Terms) -> bool:
        return _combine_bool(op, branch_truth(P, terms), branch_truth(Q, terms) if Q is not None else None)

    return Relation(P.arity, P.universe, Predicate(test, label, eventual))


def fix_prefix_args(P: Relation, a: Sequence[Any]) -> Relation:
    """Pa = { x | P(a, x) } for a fixed k-tuple a, k < arity"""
    a = tuple(element(x) for x in a)
    k = len(a)
    if not 0 < k < P.arity:
        raise ArityMismatch(f"can fix 1..{P.arity - 1} entries of {P.name}, got {k}")
    label = f"{P.name}[{', '.join(str(x) for x in a)}]"
    if isinstance(P.body, Extensional):
        return Relation(P.arity - k, P.universe, Extensional(frozenset(t[k:] for t in P.body.tuples if t[:k] == a)), label)
    fixed = tuple(ConstTerm(x) for x in a)
    return Relation(
        P.arity - k,
        P.universe,
        Predicate(lambda args: P.holds(a + tuple(args)), label, lambda terms: branch_truth(P, fixed + tuple(terms))),
    )


def quantify(q: str, D: SubsetSpec, P: Relation) -> Relation:
    """(q D, P) = { x | q y in D: P(y, x) }"""
    if q not in QUANTIFIERS:
        raise ValueError(f"unknown quantifier {q!r}")
    if isinstance(D, IntervalUnion):
        raise NonEnumerableDomain("quantification over an interval union is not enumerable")
    domain = enumerate_spec(D)
    k = spec_arity(D)
    if P.arity <= k:
        raise ArityMismatch(f"cannot quantify {k} entries of arity-{P.arity} {P.name}")
    label = f"({q} {_spec_label(D)}, {P.name})"

    def test(args: Args) -> bool:
        hits = sum(P.holds(ds + tuple(args)) for ds in domain)
        return _quantifier_ok(q, hits, len(domain))

    def eventual(terms: Terms) -> bool:
        hits = sum(branch_truth(P, tuple(ConstTerm(d) for d in ds) + tuple(terms)) for ds in domain)
        return _quantifier_ok(q, hits, len(domain))

    body = Predicate(test, label, eventual)
    if isinstance(P.universe, FiniteSet):
        rel = Relation(P.arity - k, P.universe, body)
        return Relation(rel.arity, rel.universe, Extensional(rel.tuples()), label)
    return Relation(P.arity - k, P.universe, body)


def _spec_label(D: SubsetSpec) -> str:
    if isinstance(D, FiniteSet):
        return "{" + ", ".join(str(e) for e in D.sorted()) + "}"
    if isinstance(D, ProductSpec):
        return " x ".join(_spec_label(f) for f in D.factors)
    return type(D).__name__


# -- reports -----------------------------------------------------------------


class VetReport(BaseModel):
    item: str
    verdict: Literal["Equal", "StrictSubset", "Fails"]
    direction: Optional[str] = None
    witness: List[str] = []
    witness_json: List[Dict[str, Any]] = []
    relations: List[str] = []
    relation_models: List[Dict[str, Any]] = []
    universe: List[Dict[str, Any]] = []
    model: str = ""
    instances: int = 0
    violations: int = 0
    seed: Optional[int] = None
    note: str = ""


class RelationModel(BaseModel):
    arity: int
    kind: Literal["extensional", "predicate"]
    tuples: Optional[List[List[Dict[str, Any]]]] = None
    predicate: Optional[str] = None


BUILTIN_PREDICATES: Dict[str, Callable[[], Relation]] = {
    "eq": equality,
    "<": lambda: rational_order("<"),
    "<=": lambda: rational_order("<="),
    ">": lambda: rational_order(">"),
    ">=": lambda: rational_order(">="),
    "!=": lambda: rational_order("!="),
}


def relation_from_model(model: RelationModel, universe: SubsetSpec) -> Relation:
    if model.kind == "extensional":
        return extensional(universe, model.arity, [tuple(decode_element(a) for a in t) for t in model.tuples or []])
    if model.predicate not in BUILTIN_PREDICATES:
        raise ValueError(f"unknown predicate {model.predicate!r}")
    rel = BUILTIN_PREDICATES[model.predicate]()
    if rel.arity != model.arity:
        raise ArityMismatch(f"{model.predicate} has arity {rel.arity}, not {model.arity}")
    return rel


def domain_values(D: SubsetSpec, max_period: int) -> List[Tuple[VirtualValue, ...]]:
    """Fragment of D̄: cyclic tuples with branches in D and period <= max_period"""
    k = spec_arity(D)
    points = [tuple_element(*ds) if k > 1 else ds[0] for ds in enumerate_spec(D)]
    values = enumerate_cyclic(points, max_period)
    return [unpack_tuple(v, k) if k > 1 else (v,) for v in values]


def transfer_quantifier_check(q: str, D: SubsetSpec, P: Relation, max_period: Optional[int] = None) -> VetReport:
    """
    Compare "q x in D: P(x)" with "q ξ in D̄: P̄(ξ)". For finite D the
    cyclic fragment is exhaustive: witnesses only need to vary by branch.
    """
    item = {"forall": "a", "exists": "b", "unique": "c"}[q]
    k = spec_arity(D)
    if P.arity != k:
        raise ArityMismatch(f"{P.name} must have the arity of the domain ({k})")
    m = max_period or get_settings().fragment_period
    domain = enumerate_spec(D)
    base_hits = [ds for ds in domain if P.holds(ds)]
    base = _quantifier_ok(q, len(base_hits), len(domain))

    ext = ExtendedRelation(P)
    candidates = domain_values(D, m)
    ext_hits = [xs for xs in candidates if ext(*xs)]
    extended = _quantifier_ok(q, len(ext_hits), len(candidates))

    report = VetReport(
        item=item,
        verdict="Equal" if base == extended else "Fails",
        relations=[P.name],
        model=f"{_spec_label(D)}, period <= {m}",
        instances=1,
        violations=0 if base == extended else 1,
        note=f"base={base}, extended={extended}",
    )
    if base != extended:
        if q == "forall":
            witness = next((xs for xs in candidates if not ext(*xs)), None)
        elif len(ext_hits) > 1:
            witness = ext_hits[1]
        else:
            witness = ext_hits[0] if ext_hits else None
        if witness:
            report.witness = [str(v) for v in witness]
            report.witness_json = [v.to_json() for v in witness]
        logger.error(f"quantifier clause ({item}) failed for {P.name} over {_spec_label(D)}")
    return report
