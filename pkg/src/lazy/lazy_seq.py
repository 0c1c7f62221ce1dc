"""
Horizon-bounded tier for sequences outside the exact fragment (ln, exp,
sin, cos of virtual reals).

Values are sampled with mpmath on a geometric index grid. Every verdict
is a Truth3 tagged with the horizon and tolerance it was checked at; an
approximate answer is never reported as a plain boolean.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Union

import mpmath
import numpy as np
from loguru import logger

from src.config import get_settings
from src.core.errors import DomainViolation, EvaluationError
from src.core.poly import RatFunc
from src.core.seqcore import POSITIVE_REALS, ends_in, term_rational
from src.core.vreal import EPS, Undefined, VirtualReal, as_vreal, standard_part, vr_const

# -- provenance ----------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    value: VirtualReal


@dataclass(frozen=True)
class Apply:
    name: str
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Power:
    base: "Node"
    k: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"


Node = Union[Leaf, Apply, BinOp, Power, Neg]

FUNCTIONS = {
    "ln": mpmath.log,
    "exp": mpmath.exp,
    "sin": mpmath.sin,
    "cos": mpmath.cos,
}

_BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
}


def _evaluate(node: Node, i: int):
    if isinstance(node, Leaf):
        rf: RatFunc = term_rational(node.value.value.branch_for_index(i))
        x = mpmath.mpf(i)
        den = rf.den(x)
        if den == 0:
            raise EvaluationError(f"{rf} has a pole at index {i}")
        return rf.num(x) / den
    if isinstance(node, Apply):
        x = _evaluate(node.arg, i)
        if node.name == "ln" and x <= 0:
            raise EvaluationError(f"ln of non-positive value at index {i}")
        return FUNCTIONS[node.name](x)
    if isinstance(node, BinOp):
        a, b = _evaluate(node.left, i), _evaluate(node.right, i)
        if node.op == "/" and b == 0:
            raise EvaluationError(f"division by zero at index {i}")
        return _BINOPS[node.op](a, b)
    if isinstance(node, Power):
        return _evaluate(node.base, i) ** node.k
    return -_evaluate(node.arg, i)


def _period(node: Node) -> int:
    if isinstance(node, Leaf):
        return node.value.period
    if isinstance(node, BinOp):
        return math.lcm(_period(node.left), _period(node.right))
    return _period(node.base if isinstance(node, Power) else node.arg)


def describe(node: Node) -> str:
    if isinstance(node, Leaf):
        text = str(node.value)
        return text if node.value.period == 1 and "/" not in text else f"({text})"
    if isinstance(node, Apply):
        inner = str(node.arg.value) if isinstance(node.arg, Leaf) else describe(node.arg)
        return f"{node.name}({inner})"
    if isinstance(node, BinOp):
        return f"({describe(node.left)} {node.op} {describe(node.right)})"
    if isinstance(node, Power):
        return f"{describe(node.base)}^{node.k}"
    return f"-{describe(node.arg)}"


@dataclass(frozen=True)
class LazySeq:
    """A sequence known only through its index rule, with the tree that built it"""

    provenance: Node

    @classmethod
    def from_provenance(cls, node: Node) -> LazySeq:
        return cls(node)

    @property
    def period(self) -> int:
        return _period(self.provenance)

    def at(self, i: int):
        with mpmath.workdps(get_settings().precision):
            return _evaluate(self.provenance, int(i))

    def describe(self) -> str:
        return describe(self.provenance)

    def __str__(self) -> str:
        return f"lazy {self.describe()}"

    def _bin(self, op: str, other, swap: bool = False) -> LazySeq:
        left, right = self.provenance, as_lazy(other).provenance
        return LazySeq(BinOp(op, right, left) if swap else BinOp(op, left, right))

    def __add__(self, other):
        return self._bin("+", other)

    def __radd__(self, other):
        return self._bin("+", other, swap=True)

    def __sub__(self, other):
        return self._bin("-", other)

    def __rsub__(self, other):
        return self._bin("-", other, swap=True)

    def __mul__(self, other):
        return self._bin("*", other)

    def __rmul__(self, other):
        return self._bin("*", other, swap=True)

    def __truediv__(self, other):
        return self._bin("/", other)

    def __rtruediv__(self, other):
        return self._bin("/", other, swap=True)

    def __neg__(self):
        return LazySeq(Neg(self.provenance))

    def __pow__(self, k: int):
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
        return LazySeq(Power(self.provenance, k))


def as_lazy(x) -> LazySeq:
    if isinstance(x, LazySeq):
        return x
    return LazySeq(Leaf(as_vreal(x)))


def lift_value_fn(name: str, a: Union[VirtualReal, LazySeq]) -> LazySeq:
    """Pointwise extension of ln, exp, sin or cos"""
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if name == "ln" and isinstance(a, VirtualReal) and not ends_in(a.value, POSITIVE_REALS):
        raise DomainViolation(f"ln needs an eventually positive argument, got {a}")
    return LazySeq(Apply(name, as_lazy(a).provenance))


# -- sampling and verdicts -----------------------------------------------------


def format_tol(tol: float) -> str:
    return re.sub(r"e([+-])0*(\d)", lambda m: "e" + ("-" if m.group(1) == "-" else "") + m.group(2), f"{tol:g}")


def sample_grid(period: int = 1, horizon: Optional[int] = None) -> np.ndarray:
    """
    Indices period*t + r for t = start, start*ratio, ... and every residue r,
    kept while the whole block stays within the horizon.
    """
    settings = get_settings()
    H = horizon or settings.horizon
    t = settings.grid_start
    steps = []
    while period * t + period - 1 <= H:
        steps.append(t)
        t *= settings.grid_ratio
    if not steps:
        steps = [settings.grid_start]
    base = np.array(steps, dtype=np.int64) * period
    return (base[:, None] + np.arange(period, dtype=np.int64)[None, :]).ravel()


class Truth3Kind(str, Enum):
    TRUE_UP_TO = "TrueUpTo"
    FALSE_WITH_WITNESS = "FalseWithWitness"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Truth3:
    kind: Truth3Kind
    horizon: int
    tol: float
    witness: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is Truth3Kind.TRUE_UP_TO:
            return f"true (checked to H={self.horizon}, tol={format_tol(self.tol)})"
        if self.kind is Truth3Kind.FALSE_WITH_WITNESS:
            return f"false (fails at index {self.witness}, tol={format_tol(self.tol)})"
        return f"inconclusive (checked to H={self.horizon}, tol={format_tol(self.tol)})"


def check_relation(lhs, rel: str, rhs, tol: Optional[float] = None, horizon: Optional[int] = None) -> Truth3:
    """Compare two sequences on the sampling grid, up to tolerance"""
    settings = get_settings()
    tol = tol or settings.tol
    H = horizon or settings.horizon
    left, right = as_lazy(lhs), as_lazy(rhs)
    period = math.lcm(left.period, right.period)
    undecided = False
    for i in sample_grid(period, H):
        try:
            diff = left.at(i) - right.at(i)
        except (EvaluationError, ValueError, ZeroDivisionError) as e:
            logger.debug(f"sample at index {i} failed: {e}")
            undecided = True
            continue
        clearly_neg, clearly_pos = diff < -tol, diff > tol
        close = not (clearly_neg or clearly_pos)
        if rel in ("==", "="):
            failed, unsure = not close, False
        elif rel == "!=":
            failed, unsure = False, close
        elif rel == "<":
            failed, unsure = clearly_pos, close
        elif rel == "<=":
            failed, unsure = clearly_pos, False
        elif rel == ">":
            failed, unsure = clearly_neg, close
        elif rel == ">=":
            failed, unsure = clearly_neg, False
        else:
            raise ValueError(f"unknown comparison {rel!r}")
        if failed:
            return Truth3(Truth3Kind.FALSE_WITH_WITNESS, H, tol, int(i))
        undecided = undecided or unsure
    return Truth3(Truth3Kind.INCONCLUSIVE if undecided else Truth3Kind.TRUE_UP_TO, H, tol)


def check_identity(lhs, rhs, tol: Optional[float] = None, horizon: Optional[int] = None) -> Truth3:
    return check_relation(lhs, "==", rhs, tol, horizon)


# -- numeric standard part -----------------------------------------------------


@dataclass(frozen=True)
class Estimate:
    value: Optional[object]  # mpf for numeric estimates, Fraction when exact
    status: str  # converged, diverging or oscillating
    exact: bool = False
    error: Optional[float] = None
    horizon: Optional[int] = None
    tol: Optional[float] = None

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def __str__(self) -> str:
        if self.exact:
            return f"{self.value} (exact)" if self.converged else f"undefined ({self.status})"
        bound = f"H={self.horizon}, tol={format_tol(self.tol)}"
        if self.converged:
            return f"{mpmath.nstr(self.value, 15)} ({self.status}, {bound})"
        return f"{self.status} ({bound})"


def richardson(values: List, ratio: int):
    """Diagonal of the Richardson table for errors in powers of 1/t"""
    table = [list(values)]
    for m in range(1, len(values)):
        mult = mpmath.mpf(ratio) ** m
        prev = table[-1]
        table.append([(mult * prev[k + 1] - prev[k]) / (mult - 1) for k in range(len(prev) - 1)])
    return [row[-1] for row in table]


def st_numeric(a, tol: Optional[float] = None, horizon: Optional[int] = None) -> Estimate:
    """Richardson extrapolation per residue class over the geometric grid"""
    settings = get_settings()
    tol = tol or settings.tol
    H = horizon or settings.horizon
    seq = as_lazy(a)
    p = seq.period
    grid = sample_grid(p, H).reshape(-1, p)
    limits, growing = [], []
    with mpmath.workdps(settings.precision):
        for r in range(p):
            try:
                samples = [seq.at(i) for i in grid[:, r]]
            except (EvaluationError, ValueError, ZeroDivisionError) as e:
                logger.debug(f"numeric standard part sampling failed: {e}")
                return Estimate(None, "oscillating", horizon=H, tol=tol)
            mags = [abs(s) for s in samples]
            growing.append(len(mags) > 2 and all(y > x for x, y in zip(mags, mags[1:])))
            diag = richardson(samples, settings.grid_ratio)
            if len(diag) < 2 or abs(diag[-1] - diag[-2]) > tol:
                limits.append(None)
            else:
                limits.append(diag[-1])
        if all(lim is not None for lim in limits):
            spread = max(limits) - min(limits)
            if spread <= tol:
                value = mpmath.fsum(limits) / len(limits)
                return Estimate(value, "converged", error=float(spread), horizon=H, tol=tol)
            return Estimate(None, "oscillating", horizon=H, tol=tol)
    status = "diverging" if all(growing) else "oscillating"
    return Estimate(None, status, horizon=H, tol=tol)


def derivative(f: Callable, x0, tol: Optional[float] = None, horizon: Optional[int] = None) -> Estimate:
    """
    st((f(x0 + eps) - f(x0)) / eps). Rational f stays exact and uses the
    exact standard part; anything reaching the lazy tier is estimated.
    """
    x = vr_const(Fraction(x0) if not isinstance(x0, Fraction) else x0)
    shifted, base = f(x + EPS), f(x)
    if isinstance(shifted, VirtualReal) and isinstance(base, VirtualReal):
        st = standard_part((shifted - base) / EPS)
        if isinstance(st, Undefined):
            status = "diverging" if st.reason == "infinite-branch" else "oscillating"
            return Estimate(None, status, exact=True)
        return Estimate(st, "converged", exact=True)
    quotient = (as_lazy(shifted) - as_lazy(base)) / as_lazy(EPS)
    estimate = st_numeric(quotient, tol, horizon)
    logger.debug(f"numeric derivative at {x0}: {estimate}")
    return estimate
