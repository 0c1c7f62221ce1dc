"""
Exact virtual reals: cyclic rational-function branches of the index n.

Arithmetic aligns periods to their lcm and works branch by branch, so the
collection is a commutative ring with unity and zero divisors; only the
period-1 values form an ordered field. Comparison is decided by eventual
signs, which is why trichotomy fails (see EventualTruth.MIXED).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from loguru import logger

from src.config import get_settings
from src.core.errors import DegreeLimitExceeded, UndecidableMembership, ZeroBranchDivisor
from src.core.poly import RatFunc, as_fraction
from src.core.seqcore import IntegerLattice, VirtualValue, aligned_period, canonicalize, ends_in, term_rational


class Sign(str, Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"
    MIXED = "mixed"


class Verdict(str, Enum):
    EVENTUALLY_TRUE = "EventuallyTrue"
    EVENTUALLY_FALSE = "EventuallyFalse"
    MIXED = "Mixed"


class Magnitude(str, Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    APPRECIABLE = "appreciable-finite"
    INFINITE = "infinite"
    MIXED = "mixed"


@dataclass(frozen=True)
class EventualTruth:
    kind: Verdict
    per_branch: Tuple[bool, ...]

    @property
    def holds(self) -> bool:
        """The extended relation holds iff it holds on every branch"""
        return self.kind is Verdict.EVENTUALLY_TRUE

    def __str__(self) -> str:
        if self.kind is Verdict.MIXED:
            return "mixed (not comparable)"
        return "true" if self.holds else "false"


@dataclass(frozen=True)
class Undefined:
    reason: str  # "infinite-branch" or "divergent-branches"

    def __str__(self) -> str:
        return f"undefined ({self.reason})"


@dataclass(frozen=True)
class VirtualReal:
    value: VirtualValue

    def __post_init__(self):
        for b in self.value.branches:
            if term_rational(b) is None:
                raise TypeError(f"branch {b} of {self.value} is not a real number")

    @classmethod
    def from_branches(cls, rfs: Sequence[RatFunc], max_degree: Optional[int] = None) -> VirtualReal:
        cap = max_degree if max_degree is not None else get_settings().max_degree
        for rf in rfs:
            if rf.degree > cap:
                raise DegreeLimitExceeded(rf.degree, cap)
        return cls(VirtualValue(tuple(rfs)))

    @property
    def period(self) -> int:
        return self.value.period

    def branches(self, m: Optional[int] = None) -> Tuple[RatFunc, ...]:
        terms = self.value.aligned(m or self.period)
        return tuple(term_rational(t) for t in terms)

    def at(self, i: int) -> Fraction:
        """The representative's value at index i (i past the branch poles)"""
        return self.value.term_at(i).numeric()

    def __str__(self) -> str:
        return self.value.render()

    def __add__(self, other):
        return vr_arith("add", self, as_vreal(other))

    def __radd__(self, other):
        return vr_arith("add", as_vreal(other), self)

    def __sub__(self, other):
        return vr_arith("sub", self, as_vreal(other))

    def __rsub__(self, other):
        return vr_arith("sub", as_vreal(other), self)

    def __mul__(self, other):
        return vr_arith("mul", self, as_vreal(other))

    def __rmul__(self, other):
        return vr_arith("mul", as_vreal(other), self)

    def __truediv__(self, other):
        return vr_div(self, as_vreal(other))

    def __rtruediv__(self, other):
        return vr_div(as_vreal(other), self)

    def __neg__(self):
        return vr_arith("neg", self)

    def __abs__(self):
        return vr_arith("abs", self)

    def __pow__(self, k: int):
        return vr_arith("pow", self, k)


def vr_const(x) -> VirtualReal:
    return VirtualReal(VirtualValue((RatFunc.constant(as_fraction(x)),)))


def vr_index() -> VirtualReal:
    """The class of (1, 2, 3, ...)"""
    return VirtualReal(VirtualValue((RatFunc.index(),)))


def vr_cyc(*items) -> VirtualReal:
    """Period-len(items) value whose branch j is items[j]"""
    terms = []
    for item in items:
        if isinstance(item, VirtualReal):
            if item.period != 1:
                raise ValueError(f"cyc entries must be single branches, got {item}")
            item = item.branches()[0]
        terms.append(item if isinstance(item, RatFunc) else RatFunc.constant(as_fraction(item)))
    value = canonicalize((), terms)
    return VirtualReal.from_branches([term_rational(t) for t in value.branches])


def as_vreal(x: Union[VirtualReal, VirtualValue, RatFunc, int, Fraction]) -> VirtualReal:
    if isinstance(x, VirtualReal):
        return x
    if isinstance(x, VirtualValue):
        return VirtualReal(x)
    if isinstance(x, RatFunc):
        return VirtualReal.from_branches([x])
    return vr_const(x)


ZERO = vr_const(0)
ONE = vr_const(1)
INF = vr_index()
EPS = VirtualReal(VirtualValue((RatFunc.constant(1) / RatFunc.index(),)))


_BINARY = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
}


def vr_arith(op: str, a: VirtualReal, b=None) -> VirtualReal:
    """add, sub, mul (binary); neg, abs (unary); pow with b a nonnegative int"""
    if op in _BINARY:
        m = aligned_period([a.value, b.value])
        fn = _BINARY[op]
        return VirtualReal.from_branches([fn(x, y) for x, y in zip(a.branches(m), b.branches(m))])
    if op == "neg":
        return VirtualReal.from_branches([-x for x in a.branches()])
    if op == "abs":
        return VirtualReal.from_branches([-x if x.eventual_sign() < 0 else x for x in a.branches()])
    if op == "pow":
        if isinstance(b, bool) or not isinstance(b, int) or b < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {b!r}")
        cap = get_settings().max_degree
        # degree-0 bases still count the exponent against the cap
        if b > cap:
            raise DegreeLimitExceeded(b, cap, "exponent")
        for x in a.branches():
            if x.degree * b > cap:
                raise DegreeLimitExceeded(x.degree * b, cap)
        return VirtualReal.from_branches([x ** b for x in a.branches()])
    raise ValueError(f"unknown arithmetic operation {op!r}")


def vr_div(a: VirtualReal, b: VirtualReal) -> VirtualReal:
    m = aligned_period([a.value, b.value])
    divisors = b.branches(m)
    for j, d in enumerate(divisors):
        if d.is_zero:
            logger.debug(f"branch {j} of divisor {b} is identically zero")
            raise ZeroBranchDivisor(f"{b} has an identically zero branch; it is zero or a zero divisor")
    return VirtualReal.from_branches([x / y for x, y in zip(a.branches(m), divisors)])


def eventual_sign(rf: RatFunc) -> Sign:
    s = rf.eventual_sign()
    return Sign.ZERO if s == 0 else (Sign.POSITIVE if s > 0 else Sign.NEGATIVE)


def sign(a: VirtualReal) -> Sign:
    signs = {eventual_sign(x) for x in a.branches()}
    return signs.pop() if len(signs) == 1 else Sign.MIXED


_RELATIONS = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    "==": lambda s: s == 0,
    "=": lambda s: s == 0,
    "!=": lambda s: s != 0,
    ">=": lambda s: s >= 0,
    ">": lambda s: s > 0,
}


def vr_compare(a: VirtualReal, rel: str, b: VirtualReal) -> EventualTruth:
    if rel not in _RELATIONS:
        raise ValueError(f"unknown comparison {rel!r}")
    test = _RELATIONS[rel]
    m = aligned_period([a.value, b.value])
    per_branch = tuple(test((x - y).eventual_sign()) for x, y in zip(a.branches(m), b.branches(m)))
    if all(per_branch):
        kind = Verdict.EVENTUALLY_TRUE
    elif not any(per_branch):
        kind = Verdict.EVENTUALLY_FALSE
    else:
        kind = Verdict.MIXED
    return EventualTruth(kind, per_branch)


def _branch_magnitude(rf: RatFunc) -> Magnitude:
    if rf.is_zero:
        return Magnitude.ZERO
    if rf.num.degree < rf.den.degree:
        return Magnitude.INFINITESIMAL
    if rf.num.degree == rf.den.degree:
        return Magnitude.APPRECIABLE
    return Magnitude.INFINITE


def classify(a: VirtualReal) -> Magnitude:
    """Zero branches count as infinitesimal when mixed with infinitesimal ones"""
    kinds = {_branch_magnitude(x) for x in a.branches()}
    if len(kinds) == 1:
        return kinds.pop()
    if kinds == {Magnitude.ZERO, Magnitude.INFINITESIMAL}:
        return Magnitude.INFINITESIMAL
    return Magnitude.MIXED


def standard_part(a: VirtualReal) -> Union[Fraction, Undefined]:
    limits = [x.limit() for x in a.branches()]
    if any(isinstance(lim, tuple) for lim in limits):
        return Undefined("infinite-branch")
    if len(set(limits)) > 1:
        return Undefined("divergent-branches")
    return limits[0]


def is_virtual_integer(a: VirtualReal) -> bool:
    """Membership in the extended integers; raises UndecidableMembership off polynomial branches"""
    try:
        return ends_in(a.value, IntegerLattice())
    except UndecidableMembership:
        logger.debug(f"integrality of {a} is undecidable")
        raise


def exact_derivative(rf: RatFunc) -> RatFunc:
    return rf.derivative()
