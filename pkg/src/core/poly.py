"""
Exact polynomials and rational functions of the sequence index n.

Coefficients are fractions.Fraction, stored low-to-high. Greatest common
divisors and exact quotients are delegated to sympy over QQ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Tuple

from sympy import QQ, Rational, Symbol
from sympy import Poly as SymPoly

INDEX = "n"
_N = Symbol(INDEX)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coefficients")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact rational")


@dataclass(frozen=True)
class Poly:
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    @classmethod
    def of(cls, *coeffs) -> Poly:
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls) -> Poly:
        return cls(())

    @classmethod
    def one(cls) -> Poly:
        return cls((Fraction(1),))

    @classmethod
    def constant(cls, c) -> Poly:
        return cls((as_fraction(c),))

    @classmethod
    def index(cls) -> Poly:
        """The identity polynomial n"""
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: Poly) -> Poly:
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self[k] + other[k] for k in range(size)))

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero or other.is_zero:
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    def scale(self, factor) -> Poly:
        factor = as_fraction(factor)
        return Poly(tuple(c * factor for c in self.coeffs))

    def __pow__(self, k: int) -> Poly:
        result, base = Poly.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, x):
        """Horner evaluation; works for Fraction, int, float or mpmath inputs"""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else _to_numeric(c, x))
        return acc

    def derivative(self) -> Poly:
        return Poly(tuple(c * k for k, c in enumerate(self.coeffs) if k > 0))

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def render(self, var: str = INDEX) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            body = _monomial(abs(c), k, var)
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"-{body}" if c < 0 else f"+{body}")
        return "".join(parts)

    def monomial_count(self) -> int:
        return sum(1 for c in self.coeffs if c != 0)

    def __str__(self) -> str:
        return self.render()


def _monomial(magnitude: Fraction, k: int, var: str) -> str:
    if k == 0:
        return str(magnitude)
    power = var if k == 1 else f"{var}^{k}"
    return power if magnitude == 1 else f"{magnitude}*{power}"


def _to_numeric(c: Fraction, like):
    # keep the caller's numeric type (float or mpf) by dividing in it
    return (like * 0 + c.numerator) / c.denominator


def _to_sympy(p: Poly) -> SymPoly:
    coeffs = [Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0]
    return SymPoly(coeffs, _N, domain=QQ)


def _from_sympy(sp: SymPoly) -> Poly:
    return Poly(tuple(Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs())))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over QQ"""
    return _from_sympy(_to_sympy(a).gcd(_to_sympy(b)))


def poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    q, r = _to_sympy(a).div(_to_sympy(b))
    return _from_sympy(q), _from_sympy(r)


@dataclass(frozen=True)
class RatFunc:
    """
    Reduced quotient num/den of polynomials in n.

    Canonical form: gcd(num, den) is constant, all coefficients are
    integers with no common factor, and den has a positive leading
    coefficient. Two RatFuncs denote the same index map iff they are equal.
    Build instances with RatFunc.make (or the helpers), never directly.
    """

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly = None) -> RatFunc:
        den = Poly.one() if den is None else den
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            return cls(Poly.zero(), Poly.one())
        if num.degree > 0 and den.degree > 0:
            p, q = _to_sympy(num), _to_sympy(den)
            g = p.gcd(q)
            if g.degree() > 0:
                num, den = _from_sympy(p.exquo(g)), _from_sympy(q.exquo(g))
        coeffs = num.coeffs + den.coeffs
        common_den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
        content = reduce(math.gcd, (abs(c.numerator * (common_den // c.denominator)) for c in coeffs if c), 0)
        factor = Fraction(common_den, content)
        if den.lead < 0:
            factor = -factor
        return cls(num.scale(factor), den.scale(factor))

    @classmethod
    def constant(cls, c) -> RatFunc:
        c = as_fraction(c)
        return cls.make(Poly.constant(c))

    @classmethod
    def index(cls) -> RatFunc:
        return cls.make(Poly.index())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @property
    def degree(self) -> int:
        """Size measure checked against the degree cap"""
        return max(self.num.degree, self.den.degree)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.num[0] / self.den[0]

    def polynomial(self) -> Poly:
        """The branch as a polynomial (only when den is constant)"""
        if not self.is_polynomial:
            raise ValueError(f"{self} is not a polynomial")
        return self.num.scale(1 / self.den[0])

    def __add__(self, other: RatFunc) -> RatFunc:
        if self.den == other.den:
            return RatFunc.make(self.num + other.num, self.den)
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: RatFunc) -> RatFunc:
        return self + (-other)

    def __mul__(self, other: RatFunc) -> RatFunc:
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RatFunc) -> RatFunc:
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int) -> RatFunc:
        if k < 0:
            raise ValueError("negative exponents are not supported")
        return RatFunc.make(self.num ** k, self.den ** k)

    def scale(self, factor) -> RatFunc:
        return RatFunc.make(self.num.scale(factor), self.den)

    def eventual_sign(self) -> int:
        """-1, 0 or 1: the sign the map takes for all large n"""
        if self.num.is_zero:
            return 0
        return 1 if self.num.lead > 0 else -1

    def identical(self, other: RatFunc) -> bool:
        """Cross-multiplied identity p1*q2 - p2*q1 == 0"""
        return (self.num * other.den - other.num * self.den).is_zero

    def limit(self):
        """
        Limit as n grows: a Fraction, or +1/-1 wrapped in a tuple
        ("inf", sign) for an infinite branch.
        """
        if self.num.degree < self.den.degree:
            return Fraction(0)
        if self.num.degree == self.den.degree:
            return self.num.lead / self.den.lead
        return ("inf", self.eventual_sign())

    def evaluate(self, i):
        return self.num(i) / self.den(i)

    def derivative(self) -> RatFunc:
        p, q = self.num, self.den
        return RatFunc.make(p.derivative() * q - p * q.derivative(), q * q)

    def __str__(self) -> str:
        if self.is_constant:
            return str(self.constant_value())
        num = self.num.render()
        den = self.den.render()
        if self.num.monomial_count() > 1:
            num = f"({num})"
        if not _atomic_denominator(self.den):
            den = f"({den})"
        return f"{num}/{den}"


def _atomic_denominator(den: Poly) -> bool:
    if den.monomial_count() != 1:
        return False
    k = den.degree
    c = den.coeffs[k]
    return k == 0 or c == 1


def ratfunc_from_coeffs(num: Iterable, den: Iterable) -> RatFunc:
    return RatFunc.make(Poly(tuple(as_fraction(c) for c in num)), Poly(tuple(as_fraction(c) for c in den)))
