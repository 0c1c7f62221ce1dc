"""
Lifting functions to virtual values, the composition laws, and transfer of
structural attributes between a base structure and its extension.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel

from src.config import get_settings
from src.core.errors import (
    ArityMismatch,
    DomainMismatch,
    DomainViolation,
    NonEnumerableCarrier,
    NotAChain,
    UndecidableBranch,
)
from src.core.poly import RatFunc
from src.core.seqcore import (
    POSITIVE_REALS,
    REALS,
    ConstTerm,
    FiniteSet,
    ProductSpec,
    SubsetSpec,
    UniverseElement,
    VirtualValue,
    aligned_period,
    as_value,
    atom,
    element,
    embed_const,
    encode_element,
    enumerate_cyclic,
    make_term,
    rational,
    spec_arity,
    spec_subset,
    term_in,
    term_rational,
)
from src.core.vreal import VirtualReal
from src.lazy.lazy_seq import lift_value_fn
from src.logic.relations import ExtendedRelation, Predicate, Relation, Terms, branch_truth, extensional, rational_order

Args = Tuple[UniverseElement, ...]


@dataclass(frozen=True)
class LiftableFunction:
    """
    f: D -> C with D inside U^arity and C inside U^out_arity.

    `rule` maps constant argument tuples; `branch_rule` maps rational
    branches (arithmetic stays exact); `term_rule` maps raw branch terms
    and overrides both. Functions with `lazy_name` extend into the lazy tier.
    """

    name: str
    arity: int
    domain: SubsetSpec
    codomain: SubsetSpec
    rule: Optional[Callable[[Args], Any]] = None
    out_arity: int = 1
    branch_rule: Optional[Callable[[Tuple[RatFunc, ...]], Any]] = None
    term_rule: Optional[Callable[[Terms], Terms]] = None
    lazy_name: Optional[str] = None

    def __post_init__(self):
        if self.arity > 1 and not (isinstance(self.domain, ProductSpec) and len(self.domain.factors) == self.arity):
            raise ValueError(f"{self.name}: an arity-{self.arity} domain must be a product of {self.arity} factors")

    def __str__(self) -> str:
        return self.name

    def domain_factors(self) -> Tuple[SubsetSpec, ...]:
        return self.domain.factors if self.arity > 1 else (self.domain,)

    def __call__(self, *args) -> Any:
        """Base-level application on universe elements"""
        outs = apply_branch(self, tuple(ConstTerm(element(a)) for a in args))
        values = tuple(t.value if isinstance(t, ConstTerm) else t for t in outs)
        return values[0] if self.out_arity == 1 else values


def _outputs(F: LiftableFunction, out) -> Tuple[Any, ...]:
    return tuple(out) if F.out_arity > 1 else (out,)


def apply_branch(F: LiftableFunction, terms: Terms) -> Terms:
    """Apply F along one aligned branch; the result has out_arity terms"""
    if len(terms) != F.arity:
        raise ArityMismatch(f"{F.name} takes {F.arity} arguments, got {len(terms)}")
    for t, spec in zip(terms, F.domain_factors()):
        if not term_in(t, spec):
            raise DomainViolation(f"argument branch {t} of {F.name} eventually leaves its domain")
    if F.term_rule is not None:
        return tuple(F.term_rule(terms))
    if all(isinstance(t, ConstTerm) for t in terms) and F.rule is not None:
        out = F.rule(tuple(t.value for t in terms))
        return tuple(ConstTerm(element(o)) for o in _outputs(F, out))
    if F.branch_rule is not None:
        rfs = tuple(term_rational(t) for t in terms)
        if any(rf is None for rf in rfs):
            raise UndecidableBranch(f"{F.name} has no rule for non-numeric branches {terms}")
        return tuple(make_term(o) for o in _outputs(F, F.branch_rule(rfs)))
    raise UndecidableBranch(f"{F.name} cannot be applied branchwise to {terms}; use the lazy tier")


@dataclass(frozen=True)
class ExtendedFunction:
    base: LiftableFunction

    @property
    def name(self) -> str:
        return self.base.name

    def __call__(self, *args):
        F = self.base
        values = tuple(as_value(a) for a in args)
        if len(values) != F.arity:
            raise ArityMismatch(f"extended {F.name} takes {F.arity} arguments, got {len(values)}")
        if F.lazy_name is not None:
            for t in values[0].branches:
                if not term_in(t, F.domain):
                    raise DomainViolation(f"{values[0]} eventually leaves the domain of {F.name}")
            return lift_value_fn(F.lazy_name, VirtualReal(values[0]))
        m = aligned_period(values)
        outs = [apply_branch(F, tuple(v.branch(j) for v in values)) for j in range(m)]
        comps = tuple(VirtualValue(tuple(o[c] for o in outs)) for c in range(F.out_arity))
        return comps[0] if F.out_arity == 1 else comps


def extend_function(f: LiftableFunction) -> ExtendedFunction:
    return ExtendedFunction(f)


# -- composition, identity, aggregation, projection --------------------------


def compose(g: LiftableFunction, f: LiftableFunction) -> LiftableFunction:
    if f.out_arity != g.arity or not spec_subset(f.codomain, g.domain):
        raise NotAChain(f"{f.name} and {g.name} do not form a chain")
    return LiftableFunction(
        name=f"{g.name}∘{f.name}",
        arity=f.arity,
        domain=f.domain,
        codomain=g.codomain,
        out_arity=g.out_arity,
        term_rule=lambda terms: apply_branch(g, apply_branch(f, terms)),
    )


def compose_ext(g: ExtendedFunction, f: ExtendedFunction) -> ExtendedFunction:
    """The extension of g∘f"""
    return ExtendedFunction(compose(g.base, f.base))


def identity(D: SubsetSpec) -> LiftableFunction:
    n = spec_arity(D)
    return LiftableFunction("id", n, D, D, out_arity=n, term_rule=lambda terms: tuple(terms))


def projection(i: int, D: ProductSpec) -> LiftableFunction:
    n = len(D.factors)
    if not 1 <= i <= n:
        raise ArityMismatch(f"projection index {i} outside 1..{n}")
    return LiftableFunction(f"pi{i}", n, D, D.factors[i - 1], term_rule=lambda terms: (terms[i - 1],))


def project_ext(i: int, D: ProductSpec) -> ExtendedFunction:
    return ExtendedFunction(projection(i, D))


def aggregate(fs: Sequence[LiftableFunction]) -> LiftableFunction:
    """(f1, ..., fk): x -> (f1(x), ..., fk(x)) over a shared domain"""
    if not fs:
        raise ValueError("aggregate needs at least one function")
    first = fs[0]
    for f in fs[1:]:
        if f.domain != first.domain or f.arity != first.arity:
            raise DomainMismatch(f"{f.name} and {first.name} have different domains")
    codomain = ProductSpec(tuple(f.codomain for f in fs)) if len(fs) > 1 else first.codomain
    return LiftableFunction(
        name="(" + ", ".join(f.name for f in fs) + ")",
        arity=first.arity,
        domain=first.domain,
        codomain=codomain,
        out_arity=sum(f.out_arity for f in fs),
        term_rule=lambda terms: sum((apply_branch(f, terms) for f in fs), ()),
    )


def aggregate_ext(fs: Sequence[ExtendedFunction]) -> ExtendedFunction:
    return ExtendedFunction(aggregate([f.base for f in fs]))


def inverse(f: LiftableFunction) -> LiftableFunction:
    """Inverse of a bijection between finite sets"""
    if f.arity != 1 or f.out_arity != 1 or not isinstance(f.domain, FiniteSet):
        raise ValueError(f"{f.name} is not a unary function on a finite set")
    table = {a: f(a) for a in f.domain.sorted()}
    image = set(table.values())
    onto = not isinstance(f.codomain, FiniteSet) or image == set(f.codomain.elements)
    if len(image) != len(table) or not onto:
        raise ValueError(f"{f.name} is not inversible")
    back = {b: a for a, b in table.items()}
    return LiftableFunction(f"{f.name}^-1", 1, FiniteSet(frozenset(image)), f.domain, rule=lambda args: back[args[0]])


def relation_after(P: Relation, f: LiftableFunction) -> Relation:
    """P∘f = { x | P(f(x)) }; false outside the domain of f"""
    if f.out_arity != P.arity:
        raise ArityMismatch(f"{P.name} has arity {P.arity}, {f.name} returns {f.out_arity} values")

    def eventual(terms: Terms) -> bool:
        try:
            outs = apply_branch(f, tuple(terms))
        except DomainViolation:
            return False
        return branch_truth(P, outs)

    universe = f.domain_factors()[0]
    label = f"{P.name}∘{f.name}"
    return Relation(f.arity, universe, Predicate(lambda args: eventual(tuple(ConstTerm(a) for a in args)), label, eventual))


# -- built-in functions ------------------------------------------------------


_ARITH = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}


def arithmetic(op: str) -> LiftableFunction:
    fn = _ARITH[op]
    return LiftableFunction(
        name=op,
        arity=2,
        domain=ProductSpec((REALS, REALS)),
        codomain=REALS,
        rule=lambda args: rational(fn(args[0].numeric(), args[1].numeric())),
        branch_rule=lambda rfs: fn(rfs[0], rfs[1]),
    )


def transcendental(name: str) -> LiftableFunction:
    """ln, exp, sin, cos: extensions land in the lazy tier"""
    domain = POSITIVE_REALS if name == "ln" else REALS
    return LiftableFunction(name, 1, domain, REALS, lazy_name=name)


# -- structures and attributes -----------------------------------------------


@dataclass(frozen=True, eq=False)
class StructureSpec:
    name: str
    carrier: SubsetSpec
    operations: Dict[str, LiftableFunction] = field(default_factory=dict)
    relations: Dict[str, Relation] = field(default_factory=dict)
    maps: Dict[str, LiftableFunction] = field(default_factory=dict)
    elements: Dict[str, UniverseElement] = field(default_factory=dict)
    sample: Tuple[UniverseElement, ...] = ()
    # solvers[op](a, c) returns some b with op(a, b) == c, or None
    solvers: Dict[str, Callable[[UniverseElement, UniverseElement], Optional[UniverseElement]]] = field(
        default_factory=dict
    )

    def to_model(self) -> StructureModel:
        return StructureModel(
            name=self.name,
            carrier=_describe(self.carrier),
            operations=sorted(self.operations),
            relations=sorted(self.relations),
            maps=sorted(self.maps),
            elements={k: encode_element(v) for k, v in self.elements.items()},
        )


class StructureModel(BaseModel):
    name: str
    carrier: str
    operations: List[str] = []
    relations: List[str] = []
    maps: List[str] = []
    elements: Dict[str, Any] = {}


class AttributeVerdict(BaseModel):
    attr: str
    structure: str
    base: bool
    extended: bool
    transfers: bool
    expected_transfer: bool
    witness: List[str] = []
    note: str = ""


def _describe(spec: SubsetSpec) -> str:
    if isinstance(spec, FiniteSet):
        return "{" + ", ".join(str(e) for e in spec.sorted()) + "}"
    return type(spec).__name__


class _View:
    """One side of an attribute check: the base structure or its extension"""

    def __init__(self, S: StructureSpec, extended: bool, max_period: int):
        self.S = S
        self.extended = extended
        self.max_period = max_period
        self._cache: Dict[Tuple, Any] = {}
        self.points = self.points_of(S.carrier, S.sample)

    def points_of(self, spec: SubsetSpec, sample: Sequence[UniverseElement] = ()) -> List[Any]:
        if isinstance(spec, FiniteSet):
            base = spec.sorted()
        elif sample:
            base = list(sample)
        else:
            raise NonEnumerableCarrier(f"carrier of {self.S.name} is neither finite nor sampled")
        return enumerate_cyclic(base, self.max_period) if self.extended else base

    def const(self, e: UniverseElement):
        return embed_const(e) if self.extended else e

    def apply(self, F: LiftableFunction, *args):
        key = (F.name, args)
        if key not in self._cache:
            self._cache[key] = ExtendedFunction(F)(*args) if self.extended else F(*args)
        return self._cache[key]

    def op(self, name: str) -> Callable:
        F = self.S.operations[name]
        return lambda a, b: self.apply(F, a, b)

    def fn(self, name: str) -> Callable:
        F = self.S.maps[name]
        return lambda a: self.apply(F, a)

    def rel(self, name: str) -> Callable:
        R = self.S.relations[name]
        if self.extended:
            ext = ExtendedRelation(R)
            return lambda a, b: ext(a, b)
        return lambda a, b: R.holds((a, b))

    def branchwise(self, find: Callable[..., Optional[UniverseElement]], *args):
        """Solve a base equation branch by branch, gluing the branch witnesses"""
        if not self.extended:
            return find(*args)
        m = aligned_period(args)
        found = []
        for j in range(m):
            terms = [a.branch(j) for a in args]
            if not all(isinstance(t, ConstTerm) for t in terms):
                raise UndecidableBranch("branchwise solving needs constant branches")
            b = find(*(t.value for t in terms))
            if b is None:
                return None
            found.append(ConstTerm(b))
        return VirtualValue(tuple(found))

    def solve(self, name: str, a, c, two_sided: bool = False):
        """Some b with a ⊙ b = c (and b ⊙ a = c when two_sided), or None"""
        F = self.S.operations[name]
        solver = self.S.solvers.get(name)
        if solver is None and not isinstance(self.S.carrier, FiniteSet):
            raise NonEnumerableCarrier(f"{name} on {self.S.name} has no exact solver")

        def find(x, z):
            candidates = [solver(x, z)] if solver else self.S.carrier.sorted()
            for b in candidates:
                if b is not None and F(x, b) == z and (not two_sided or F(b, x) == z):
                    return b
            return None

        return self.branchwise(find, a, c)

    def preimage(self, F: LiftableFunction, c):
        def find(z):
            return next((a for a in F.domain.sorted() if F(a) == z), None)

        return self.branchwise(find, c)


def _first(candidates, failing: Callable[..., bool]):
    for args in candidates:
        if failing(*args):
            return args
    return None


def _pairs(points):
    return ((a, b) for a in points for b in points)


def _triples(points):
    return ((a, b, c) for a in points for b in points for c in points)


def _check(attr: str, v: _View, opts: Dict[str, Any]) -> Optional[tuple]:
    """Return a witness tuple where the attribute fails, or None when it holds"""
    P = v.points
    if attr in ("reflexive", "symmetric", "transitive", "antisymmetric", "trichotomy", "functional"):
        R = v.rel(opts["rel"])
        if attr == "reflexive":
            return _first(((a,) for a in P), lambda a: not R(a, a))
        if attr == "symmetric":
            return _first(_pairs(P), lambda a, b: R(a, b) and not R(b, a))
        if attr == "transitive":
            return _first(_triples(P), lambda a, b, c: R(a, b) and R(b, c) and not R(a, c))
        if attr == "antisymmetric":
            return _first(_pairs(P), lambda a, b: R(a, b) and R(b, a) and a != b)
        if attr == "trichotomy":
            return _first(_pairs(P), lambda a, b: not (R(a, b) or a == b or R(b, a)))
        for a in P:
            images = [b for b in P if R(a, b)]
            if len(images) > 1:
                return (a, images[0], images[1])
        return None
    if attr in ("one_to_one", "onto", "inversible"):
        F = v.S.maps[opts["map"]]
        f = v.fn(opts["map"])
        if attr in ("one_to_one", "inversible"):
            dom = v.points_of(F.domain)
            witness = _first(_pairs(dom), lambda a, b: a != b and f(a) == f(b))
            if witness or attr == "one_to_one":
                return witness
        cod = v.points_of(F.codomain)
        return _first(((c,) for c in cod), lambda c: v.preimage(F, c) is None)
    op = v.op(opts["op"])
    if attr == "associative":
        return _first(_triples(P), lambda a, b, c: op(a, op(b, c)) != op(op(a, b), c))
    if attr == "commutative":
        return _first(_pairs(P), lambda a, b: op(a, b) != op(b, a))
    if attr == "distributive":
        add = v.op(opts["op2"])
        return _first(
            _triples(P),
            lambda a, b, c: op(a, add(b, c)) != add(op(a, b), op(a, c))
            or op(add(b, c), a) != add(op(b, a), op(c, a)),
        )
    if attr == "right_neutral":
        e = v.const(opts["neutral"])
        return _first(((a,) for a in P), lambda a: op(e, a) != a)
    if attr == "left_neutral":
        e = v.const(opts["neutral"])
        return _first(((a,) for a in P), lambda a: op(a, e) != a)
    if attr == "opposites":
        e = v.const(opts["neutral"])
        return _first(((a,) for a in P), lambda a: v.solve(opts["op"], a, e, two_sided=True) is None)
    if attr == "restricted_opposites":
        c, d = v.const(opts["unit"]), v.const(opts["excluded"])
        # on the extended side a != d is the negation of extended equality
        return _first(((a,) for a in P), lambda a: a != d and v.solve(opts["op"], a, c) is None)
    raise ValueError(f"unknown attribute {attr!r}")


COMPOSITES: Dict[str, List[Tuple[str, Dict[str, str]]]] = {
    "equivalence": [("reflexive", {}), ("symmetric", {}), ("transitive", {})],
    "partial_order": [("reflexive", {}), ("antisymmetric", {}), ("transitive", {})],
    "total_order": [("reflexive", {}), ("antisymmetric", {}), ("transitive", {}), ("trichotomy", {})],
    "group": [("associative", {}), ("right_neutral", {}), ("left_neutral", {}), ("opposites", {})],
    "abelian_group": [
        ("associative", {}),
        ("commutative", {}),
        ("right_neutral", {}),
        ("left_neutral", {}),
        ("opposites", {}),
    ],
    "ring": [
        ("associative", {}),
        ("commutative", {}),
        ("right_neutral", {}),
        ("left_neutral", {}),
        ("opposites", {}),
        ("associative", {"op": "op2"}),
        ("distributive", {"op": "op2", "op2": "op"}),
    ],
}
COMPOSITES["ring_with_unity"] = COMPOSITES["ring"] + [
    ("right_neutral", {"op": "op2", "neutral": "unit"}),
    ("left_neutral", {"op": "op2", "neutral": "unit"}),
]
COMPOSITES["field"] = COMPOSITES["ring_with_unity"] + [
    ("commutative", {"op": "op2"}),
    ("restricted_opposites", {"op": "op2"}),
]

ATTRIBUTES = (
    "reflexive",
    "symmetric",
    "transitive",
    "antisymmetric",
    "trichotomy",
    "functional",
    "one_to_one",
    "onto",
    "inversible",
    "associative",
    "commutative",
    "distributive",
    "right_neutral",
    "left_neutral",
    "opposites",
    "restricted_opposites",
)

NON_TRANSFERRING = {"trichotomy", "restricted_opposites", "total_order", "field"}


def _defaults(S: StructureSpec, opts: Dict[str, Any]) -> Dict[str, Any]:
    ops = list(S.operations)
    resolved = {
        "op": ops[0] if ops else None,
        "op2": ops[1] if len(ops) > 1 else None,
        "rel": next(iter(S.relations), None),
        "map": next(iter(S.maps), None),
        "neutral": S.elements.get("zero"),
        "unit": S.elements.get("one"),
        "excluded": None,
    }
    resolved.update({k: v for k, v in opts.items() if v is not None})
    for key in ("neutral", "unit", "excluded"):
        if isinstance(resolved[key], str) and resolved[key] in S.elements:
            resolved[key] = S.elements[resolved[key]]
        elif resolved[key] is not None:
            resolved[key] = element(resolved[key])
    if resolved["excluded"] is None:
        resolved["excluded"] = resolved["neutral"]
    return resolved


def attribute_check(
    attr: str,
    S: StructureSpec,
    op: Optional[str] = None,
    op2: Optional[str] = None,
    rel: Optional[str] = None,
    map: Optional[str] = None,
    neutral=None,
    unit=None,
    excluded=None,
    max_period: Optional[int] = None,
) -> AttributeVerdict:
    """Evaluate attr on S by enumeration and on its extension over the cyclic fragment"""
    opts = _defaults(S, dict(op=op, op2=op2, rel=rel, map=map, neutral=neutral, unit=unit, excluded=excluded))
    m = max_period or get_settings().fragment_period
    views = (_View(S, False, m), _View(S, True, m))
    steps = COMPOSITES.get(attr, [(attr, {})])
    if attr not in COMPOSITES and attr not in ATTRIBUTES:
        raise ValueError(f"unknown attribute {attr!r}")

    verdicts = [True, True]
    witness: List[str] = []
    failed: List[str] = []
    for step, remap in steps:
        step_opts = dict(opts)
        step_opts.update({k: opts[v] for k, v in remap.items()})
        for side, view in enumerate(views):
            found = _check(step, view, step_opts)
            if found is not None:
                verdicts[side] = False
                failed.append(f"{'extended' if side else 'base'} {step}")
                if side and not witness:
                    witness = [str(x) for x in found]
    base, extended = verdicts
    verdict = AttributeVerdict(
        attr=attr,
        structure=S.name,
        base=base,
        extended=extended,
        transfers=base == extended,
        expected_transfer=attr not in NON_TRANSFERRING,
        witness=witness,
        note="; ".join(failed),
    )
    if verdict.expected_transfer and not verdict.transfers:
        logger.error(f"{attr} did not transfer on {S.name}: {verdict.note}")
    else:
        logger.debug(f"{attr} on {S.name}: base={base}, extended={extended}")
    return verdict


# -- built-in structures -----------------------------------------------------


def _zmod_op(k: int, tag: str, fn) -> LiftableFunction:
    carrier = FiniteSet(frozenset(atom(i, tag) for i in range(k)))
    return LiftableFunction(
        name=fn.__name__,
        arity=2,
        domain=ProductSpec((carrier, carrier)),
        codomain=carrier,
        rule=lambda args: atom(fn(args[0].payload, args[1].payload) % k, tag),
    )


def zmod(k: int) -> StructureSpec:
    """(Z/k, +)"""
    tag = f"Z/{k}"
    carrier = FiniteSet(frozenset(atom(i, tag) for i in range(k)))
    return StructureSpec(
        name=f"Z/{k}",
        carrier=carrier,
        operations={"add": _zmod_op(k, tag, operator.add)},
        elements={"zero": atom(0, tag)},
    )


def zmod_ring(k: int) -> StructureSpec:
    """(Z/k, +, x)"""
    tag = f"Z/{k}"
    base = zmod(k)
    return StructureSpec(
        name=f"Z/{k} ring",
        carrier=base.carrier,
        operations={"add": base.operations["add"], "mul": _zmod_op(k, tag, operator.mul)},
        elements={"zero": atom(0, tag), "one": atom(1, tag)},
    )


def _solve_add(a: UniverseElement, c: UniverseElement) -> UniverseElement:
    return rational(c.numeric() - a.numeric())


def _solve_mul(a: UniverseElement, c: UniverseElement) -> Optional[UniverseElement]:
    if a.numeric() == 0:
        return rational(0) if c.numeric() == 0 else None
    return rational(c.numeric() / a.numeric())


def rational_field(sample: Sequence = (-1, 0, "1/2", 1, 2)) -> StructureSpec:
    """The rationals with + and x, checked on a sample with exact solvers"""
    return StructureSpec(
        name="Q",
        carrier=REALS,
        operations={"add": arithmetic("add"), "mul": arithmetic("mul")},
        relations={"<=": rational_order("<=")},
        elements={"zero": rational(0), "one": rational(1)},
        sample=tuple(rational(x) for x in sample),
        solvers={"add": _solve_add, "mul": _solve_mul},
    )


def finite_order(points: Sequence = (0, 1, 2)) -> StructureSpec:
    """A finite chain of rationals ordered by <="""
    elems = [rational(p) for p in points]
    carrier = FiniteSet(frozenset(elems))
    order = extensional(carrier, 2, [(a, b) for a in elems for b in elems if a.numeric() <= b.numeric()], "<=")
    return StructureSpec(name=f"order on {_describe(carrier)}", carrier=carrier, relations={"<=": order})


VECTOR = "V"


def toy_vector_space() -> StructureSpec:
    """
    Disjoint union of the rationals and a two-vector sort {0_v, v}: vectors
    add like Z/2, and s·x is x for s != 0 and 0_v for s = 0.
    """
    zero_v, v = atom("0", VECTOR), atom("v", VECTOR)
    vectors = FiniteSet(frozenset({zero_v, v}))

    def vadd(args):
        return v if (args[0] == v) != (args[1] == v) else zero_v

    def smul_terms(terms: Terms) -> Terms:
        s, x = terms
        if isinstance(s, ConstTerm) and s.value.numeric() == 0:
            return (ConstTerm(zero_v),)
        # a non-constant rational branch is eventually nonzero
        return (x,)

    return StructureSpec(
        name="toy vector space",
        carrier=vectors,
        operations={
            "vadd": LiftableFunction("vadd", 2, ProductSpec((vectors, vectors)), vectors, rule=vadd),
            "smul": LiftableFunction("smul", 2, ProductSpec((REALS, vectors)), vectors, term_rule=smul_terms),
        },
        elements={"zero": zero_v, "v": v},
    )
