"""
Canonical elements of a virtual extension: sequences modulo eventual
agreement.

A sequence in the decidable fragment is a finite prefix followed by a
cyclic tail of branch terms. The prefix is irrelevant to the class, so a
canonical VirtualValue keeps only the tail, anchored so that branch j
governs every index i >= 1 with (i - 1) mod period == j, with the period
made minimal. Two canonical values are end-equal iff they are equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from src.config import get_settings
from src.core.errors import NonEnumerableDomain, PeriodLimitExceeded, UndecidableBranch, UndecidableMembership
from src.core.poly import Poly, RatFunc, as_fraction

RATIONAL = "Q"
INTEGER = "Z"
ATOM = "U"
TUPLE = "tuple"


@dataclass(frozen=True)
class UniverseElement:
    """A member of the universe: a sort tag plus a payload"""

    tag: str
    payload: Union[Fraction, int, str, Tuple["UniverseElement", ...]]

    def __post_init__(self):
        payload = self.payload
        if self.tag == RATIONAL:
            object.__setattr__(self, "payload", as_fraction(payload))
        elif self.tag == TUPLE:
            object.__setattr__(self, "payload", tuple(element(p) for p in payload))
        elif isinstance(payload, bool) or not isinstance(payload, (int, str)):
            raise TypeError(f"unsupported payload {payload!r} for sort {self.tag}")

    @property
    def is_numeric(self) -> bool:
        return self.tag in (RATIONAL, INTEGER)

    def numeric(self) -> Fraction:
        if not self.is_numeric:
            raise TypeError(f"{self} is not a number")
        return Fraction(self.payload)

    def __str__(self) -> str:
        if self.tag == TUPLE:
            return "(" + ", ".join(str(p) for p in self.payload) + ")"
        if self.tag in (RATIONAL, INTEGER, ATOM):
            return str(self.payload)
        return f"{self.tag}:{self.payload}"


def rational(x) -> UniverseElement:
    return UniverseElement(RATIONAL, as_fraction(x))


def atom(x, tag: str = ATOM) -> UniverseElement:
    return UniverseElement(tag, x)


def tuple_element(*items) -> UniverseElement:
    return UniverseElement(TUPLE, tuple(items))


def element(x) -> UniverseElement:
    """Coerce: ints and Fractions become rationals, strings atoms, tuples tuple elements"""
    if isinstance(x, UniverseElement):
        return x
    if isinstance(x, tuple):
        return tuple_element(*x)
    if isinstance(x, str):
        return atom(x)
    return rational(x)


def element_key(e: UniverseElement):
    """Total sort key used for deterministic enumeration"""
    if e.tag == TUPLE:
        return (e.tag, "tuple", tuple(element_key(p) for p in e.payload))
    return (e.tag, type(e.payload).__name__, e.payload)


# -- branch terms ------------------------------------------------------------


@dataclass(frozen=True)
class ConstTerm:
    value: UniverseElement

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class RatTerm:
    """Index map i -> rf(i); rf is never constant (constants are ConstTerms)"""

    rf: RatFunc

    def __str__(self) -> str:
        return str(self.rf)


BranchTerm = Union[ConstTerm, RatTerm]


def make_term(x) -> BranchTerm:
    if isinstance(x, ConstTerm):
        return x
    if isinstance(x, RatTerm):
        x = x.rf
    if isinstance(x, RatFunc):
        if x.is_constant:
            return ConstTerm(rational(x.constant_value()))
        return RatTerm(x)
    return ConstTerm(element(x))


def term_rational(t: BranchTerm) -> Optional[RatFunc]:
    """The branch as a rational function of n, or None for non-numeric constants"""
    if isinstance(t, RatTerm):
        return t.rf
    if t.value.is_numeric:
        return RatFunc.constant(t.value.numeric())
    return None


def terms_equal(a: BranchTerm, b: BranchTerm) -> bool:
    if isinstance(a, ConstTerm) and isinstance(b, ConstTerm):
        return a.value == b.value
    ra, rb = term_rational(a), term_rational(b)
    if ra is None or rb is None:
        return False
    return ra.identical(rb)


def term_at(t: BranchTerm, i: int) -> UniverseElement:
    if isinstance(t, ConstTerm):
        return t.value
    return rational(t.rf.evaluate(i))


# -- virtual values ----------------------------------------------------------


def _divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@dataclass(frozen=True)
class VirtualValue:
    """
    Canonical representative of an end-equal class.

    Branches are normalised and the period reduced to its minimum on
    construction. Rotating the branches gives a different class.
    """

    branches: Tuple[BranchTerm, ...]

    def __post_init__(self):
        branches = tuple(make_term(b) for b in self.branches)
        if not branches:
            raise ValueError("a virtual value needs at least one branch")
        m = len(branches)
        for d in _divisors(m):
            if all(branches[j] == branches[j % d] for j in range(m)):
                branches = branches[:d]
                break
        object.__setattr__(self, "branches", branches)

    @property
    def period(self) -> int:
        return len(self.branches)

    def branch(self, j: int) -> BranchTerm:
        """Branch for residue j of any multiple of the period"""
        return self.branches[j % self.period]

    def branch_for_index(self, i: int) -> BranchTerm:
        return self.branches[(i - 1) % self.period]

    def term_at(self, i: int) -> UniverseElement:
        return term_at(self.branch_for_index(i), i)

    def aligned(self, m: int) -> Tuple[BranchTerm, ...]:
        if m % self.period:
            raise ValueError(f"cannot align period {self.period} to {m}")
        return tuple(self.branch(j) for j in range(m))

    @property
    def is_standard(self) -> bool:
        """True for the embedding of a single universe element"""
        return self.period == 1 and isinstance(self.branches[0], ConstTerm)

    def render(self) -> str:
        if self.period == 1:
            return str(self.branches[0])
        return "cyc{" + "; ".join(str(b) for b in self.branches) + "}"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> Dict[str, Any]:
        return VirtualValueModel(
            period=self.period, branches=[_branch_model(b) for b in self.branches]
        ).model_dump(exclude_none=True)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> VirtualValue:
        model = VirtualValueModel.model_validate(data)
        return cls(tuple(_branch_from_model(b) for b in model.branches))


def aligned_period(values: Iterable[VirtualValue], max_period: Optional[int] = None) -> int:
    cap = max_period or get_settings().max_period
    m = reduce(math.lcm, (v.period for v in values), 1)
    if m > cap:
        raise PeriodLimitExceeded(m, cap)
    return m


def canonicalize(
    prefix: Sequence[Any], tail: Sequence[Any], max_period: Optional[int] = None
) -> VirtualValue:
    """
    Canonical value end-equal to prefix + tail + tail + ...

    A prefix of length L shifts the residue of every tail position by L,
    so canonical branch j is tail[(j - L) mod m].
    """
    terms = tuple(make_term(t) for t in tail)
    if not terms:
        raise ValueError("the cyclic tail must have period >= 1")
    m, shift = len(terms), len(prefix)
    value = VirtualValue(tuple(terms[(j - shift) % m] for j in range(m)))
    cap = max_period or get_settings().max_period
    if value.period > cap:
        raise PeriodLimitExceeded(value.period, cap)
    return value


def cyc(*tail) -> VirtualValue:
    return canonicalize((), tail)


def end_equal(a: VirtualValue, b: VirtualValue) -> bool:
    m = math.lcm(a.period, b.period)
    return all(terms_equal(a.branch(j), b.branch(j)) for j in range(m))


def embed_const(a) -> VirtualValue:
    """The class of the constant sequence (a, a, a, ...)"""
    return VirtualValue((ConstTerm(element(a)),))


def pack_tuple(values: Sequence[VirtualValue]) -> VirtualValue:
    """An n-tuple of virtual values as one virtual value of n-tuples"""
    m = aligned_period(values)
    branches = []
    for j in range(m):
        terms = [v.branch(j) for v in values]
        if not all(isinstance(t, ConstTerm) for t in terms):
            raise UndecidableBranch("only constant branches pack into tuple payloads")
        branches.append(ConstTerm(tuple_element(*(t.value for t in terms))))
    return VirtualValue(tuple(branches))


def unpack_tuple(value: VirtualValue, arity: int) -> Tuple[VirtualValue, ...]:
    for b in value.branches:
        if not (isinstance(b, ConstTerm) and b.value.tag == TUPLE and len(b.value.payload) == arity):
            raise TypeError(f"{value} is not a virtual {arity}-tuple")
    return tuple(
        VirtualValue(tuple(ConstTerm(b.value.payload[c]) for b in value.branches)) for c in range(arity)
    )


# -- subsets -----------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSet:
    elements: FrozenSet[UniverseElement]

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(element(e) for e in self.elements))

    @classmethod
    def of(cls, *items) -> FiniteSet:
        return cls(frozenset(items))

    def sorted(self) -> List[UniverseElement]:
        return sorted(self.elements, key=element_key)


@dataclass(frozen=True)
class Interval:
    """Interval with rational endpoints; None marks an unbounded side"""

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is not None:
            object.__setattr__(self, "lo", as_fraction(self.lo))
        elif self.lo_closed:
            raise ValueError("an unbounded side cannot be closed")
        if self.hi is not None:
            object.__setattr__(self, "hi", as_fraction(self.hi))
        elif self.hi_closed:
            raise ValueError("an unbounded side cannot be closed")
        if self.lo is not None and self.hi is not None:
            if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
                raise ValueError(f"empty interval {self}")

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def eventually_contains(self, rf: RatFunc) -> bool:
        """Rational functions are eventually monotone, so two eventual signs decide this"""
        if self.lo is not None:
            s = (rf - RatFunc.constant(self.lo)).eventual_sign()
            if s < 0 or (s == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            s = (rf - RatFunc.constant(self.hi)).eventual_sign()
            if s > 0 or (s == 0 and not self.hi_closed):
                return False
        return True

    def __str__(self) -> str:
        left = f"[{self.lo}" if self.lo_closed else f"({'-inf' if self.lo is None else self.lo}"
        right = f"{self.hi}]" if self.hi_closed else f"{'+inf' if self.hi is None else self.hi})"
        return f"{left}, {right}"


def interval(lo=None, hi=None, bounds: str = "()") -> Interval:
    return Interval(lo, hi, bounds[0] == "[", bounds[1] == "]")


@dataclass(frozen=True)
class IntervalUnion:
    intervals: Tuple[Interval, ...]

    def __post_init__(self):
        ivs = tuple(self.intervals)
        for a, b in zip(ivs, ivs[1:]):
            if a.hi is None or b.lo is None or a.hi > b.lo or (a.hi == b.lo and a.hi_closed and b.lo_closed):
                raise ValueError("interval union must be sorted and pairwise disjoint")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def of(cls, *intervals: Interval) -> IntervalUnion:
        return cls(tuple(intervals))


@dataclass(frozen=True)
class IntegerLattice:
    """The integers inside the rationals"""


@dataclass(frozen=True)
class ProductSpec:
    factors: Tuple["SubsetSpec", ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


SubsetSpec = Union[FiniteSet, IntervalUnion, IntegerLattice, ProductSpec]

REALS = IntervalUnion.of(Interval())
POSITIVE_REALS = IntervalUnion.of(interval(0, None, "()"))


def term_in(t: BranchTerm, spec: SubsetSpec) -> bool:
    """Does the branch lie in spec for all sufficiently large indices"""
    if isinstance(spec, FiniteSet):
        # a non-constant rational function hits any given value finitely often
        return isinstance(t, ConstTerm) and t.value in spec.elements
    if isinstance(spec, IntervalUnion):
        if isinstance(t, ConstTerm):
            return t.value.is_numeric and any(iv.contains(t.value.numeric()) for iv in spec.intervals)
        return any(iv.eventually_contains(t.rf) for iv in spec.intervals)
    if isinstance(spec, IntegerLattice):
        if isinstance(t, ConstTerm):
            return t.value.is_numeric and t.value.numeric().denominator == 1
        if t.rf.is_polynomial and t.rf.polynomial().has_integer_coefficients():
            return True
        raise UndecidableMembership(f"integrality of {t.rf} is outside the decidable fragment")
    if isinstance(spec, ProductSpec):
        if not (isinstance(t, ConstTerm) and t.value.tag == TUPLE and len(t.value.payload) == len(spec.factors)):
            return False
        return all(term_in(ConstTerm(p), f) for p, f in zip(t.value.payload, spec.factors))
    raise TypeError(f"unknown subset spec {spec!r}")


def spec_contains(spec: SubsetSpec, e) -> bool:
    return term_in(ConstTerm(element(e)), spec)


def ends_in(x: Union[VirtualValue, Sequence[VirtualValue]], spec: SubsetSpec) -> bool:
    """Membership of x in the extension of spec"""
    if not isinstance(x, VirtualValue):
        if not isinstance(spec, ProductSpec) or len(spec.factors) != len(x):
            return False
        return all(ends_in(xi, f) for xi, f in zip(x, spec.factors))
    return all(term_in(b, spec) for b in x.branches)


def _merged(intervals: Sequence[Interval]) -> List[Interval]:
    out: List[Interval] = []
    for iv in intervals:
        if out and out[-1].hi is not None and iv.lo is not None and out[-1].hi == iv.lo and (
            out[-1].hi_closed or iv.lo_closed
        ):
            last = out.pop()
            iv = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed)
        out.append(iv)
    return out


def _interval_within(a: Interval, b: Interval) -> bool:
    if b.lo is not None:
        if a.lo is None or a.lo < b.lo or (a.lo == b.lo and a.lo_closed and not b.lo_closed):
            return False
    if b.hi is not None:
        if a.hi is None or a.hi > b.hi or (a.hi == b.hi and a.hi_closed and not b.hi_closed):
            return False
    return True


def _is_point(iv: Interval) -> bool:
    return iv.lo is not None and iv.lo == iv.hi


def spec_subset(b: SubsetSpec, c: SubsetSpec) -> bool:
    """Decidable inclusion b ⊆ c; False when the pair is not comparable"""
    if isinstance(b, FiniteSet):
        return all(spec_contains(c, e) for e in b.elements)
    if isinstance(b, IntervalUnion):
        if all(_is_point(iv) for iv in b.intervals):
            return all(spec_contains(c, iv.lo) for iv in b.intervals)
        if isinstance(c, IntervalUnion):
            merged = _merged(c.intervals)
            return all(any(_interval_within(iv, cv) for cv in merged) for iv in b.intervals)
        return False
    if isinstance(b, IntegerLattice):
        if isinstance(c, IntegerLattice):
            return True
        return isinstance(c, IntervalUnion) and any(iv.lo is None and iv.hi is None for iv in _merged(c.intervals))
    if isinstance(b, ProductSpec):
        return (
            isinstance(c, ProductSpec)
            and len(b.factors) == len(c.factors)
            and all(spec_subset(x, y) for x, y in zip(b.factors, c.factors))
        )
    return False


def enumerate_spec(spec: SubsetSpec) -> List[Tuple[UniverseElement, ...]]:
    """The tuples of a finite domain, in a fixed order"""
    if isinstance(spec, FiniteSet):
        return [(e,) for e in spec.sorted()]
    if isinstance(spec, ProductSpec):
        parts = [enumerate_spec(f) for f in spec.factors]
        return [sum(combo, ()) for combo in product(*parts)]
    raise NonEnumerableDomain(f"cannot enumerate {type(spec).__name__}")


def spec_arity(spec: SubsetSpec) -> int:
    if isinstance(spec, ProductSpec):
        return sum(spec_arity(f) for f in spec.factors)
    return 1


def enumerate_cyclic(elements: Sequence[UniverseElement], max_period: int) -> List[VirtualValue]:
    """Every canonical value with constant branches from elements and period <= max_period"""
    out = []
    for m in range(1, max_period + 1):
        for combo in product(elements, repeat=m):
            value = VirtualValue(tuple(ConstTerm(e) for e in combo))
            if value.period == m:
                out.append(value)
    return out


def as_value(x) -> VirtualValue:
    """Accept VirtualValues, objects wrapping one (virtual reals), or plain elements"""
    if isinstance(x, VirtualValue):
        return x
    inner = getattr(x, "value", None)
    if isinstance(inner, VirtualValue):
        return inner
    return embed_const(x)


def k_embedding(spec: FiniteSet) -> FrozenSet[VirtualValue]:
    """K(B): the constant classes with values in B"""
    return frozenset(embed_const(e) for e in spec.elements)


def subset_extension(spec: SubsetSpec, elements: Iterable[VirtualValue]) -> FrozenSet[VirtualValue]:
    """The extension of spec restricted to the given elements"""
    return frozenset(x for x in elements if ends_in(x, spec))


# -- JSON rendering ----------------------------------------------------------


class BranchModel(BaseModel):
    kind: Literal["const", "rat"]
    value: Optional[Any] = None
    num_coeffs: Optional[List[str]] = None
    den_coeffs: Optional[List[str]] = None


class VirtualValueModel(BaseModel):
    period: int
    branches: List[BranchModel]


def encode_element(e: UniverseElement) -> Dict[str, Any]:
    if e.tag == TUPLE:
        payload: Any = [encode_element(p) for p in e.payload]
    elif isinstance(e.payload, Fraction):
        payload = str(e.payload)
    else:
        payload = e.payload
    return {"tag": e.tag, "payload": payload}


def decode_element(data: Dict[str, Any]) -> UniverseElement:
    tag, payload = data["tag"], data["payload"]
    if tag == TUPLE:
        return tuple_element(*(decode_element(p) for p in payload))
    if tag == RATIONAL:
        return rational(Fraction(payload))
    return UniverseElement(tag, payload)


def _branch_model(t: BranchTerm) -> BranchModel:
    if isinstance(t, ConstTerm):
        return BranchModel(kind="const", value=encode_element(t.value))
    return BranchModel(
        kind="rat",
        num_coeffs=[str(c) for c in t.rf.num.coeffs],
        den_coeffs=[str(c) for c in t.rf.den.coeffs],
    )


def _branch_from_model(b: BranchModel) -> BranchTerm:
    if b.kind == "const":
        return ConstTerm(decode_element(b.value))
    num = Poly(tuple(Fraction(c) for c in b.num_coeffs or ()))
    den = Poly(tuple(Fraction(c) for c in b.den_coeffs or ()))
    return make_term(RatFunc.make(num, den))


