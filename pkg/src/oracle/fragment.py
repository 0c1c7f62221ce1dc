"""
Finite stages for the oracle: every canonical cyclic value over a small
universe, and a brute-force extension of relations that reads the
definition directly (index by index over one full cycle).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from src.config import get_settings
from src.core.errors import SizeLimit
from src.core.seqcore import FiniteSet, UniverseElement, VirtualValue, atom, enumerate_cyclic
from src.logic.relations import Relation, extensional


def universe_of(n: int) -> FiniteSet:
    """The atoms 0..n-1"""
    if n < 1:
        raise ValueError("a universe needs at least one element")
    return FiniteSet(frozenset(atom(i) for i in range(n)))


def _mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def primitive_count(u: int, p: int) -> int:
    """Words of length p over u letters whose minimal period is exactly p"""
    return sum(_mobius(p // d) * u ** d for d in range(1, p + 1) if p % d == 0)


def expected_size(u: int, max_period: int) -> int:
    return sum(primitive_count(u, p) for p in range(1, max_period + 1))


@dataclass(frozen=True)
class FragmentModel:
    universe: FiniteSet
    max_period: int
    elements: Tuple[VirtualValue, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def describe(self) -> str:
        return f"|U|={len(self.universe.elements)}, m={self.max_period}, {len(self.elements)} elements"

    def tuples(self, arity: int) -> Iterator[Tuple[VirtualValue, ...]]:
        size = len(self.elements) ** arity
        limit = get_settings().size_limit
        if size > limit:
            raise SizeLimit(f"{size} fragment tuples exceed the size limit {limit}")
        return product(self.elements, repeat=arity)


def enumerate_fragment(
    universe: Union[int, FiniteSet, Sequence[UniverseElement]], max_period: int, size_limit: Optional[int] = None
) -> FragmentModel:
    if isinstance(universe, int):
        universe = universe_of(universe)
    elif not isinstance(universe, FiniteSet):
        universe = FiniteSet(frozenset(universe))
    if not universe.elements or max_period < 1:
        raise ValueError("need a nonempty universe and max_period >= 1")
    limit = size_limit or get_settings().size_limit
    size = expected_size(len(universe.elements), max_period)
    if size > limit:
        raise SizeLimit(f"fragment of {size} elements exceeds the size limit {limit}")
    elements = tuple(enumerate_cyclic(universe.sorted(), max_period))
    logger.info(f"Enumerated fragment: |U|={len(universe.elements)}, m={max_period}, {len(elements)} elements")
    return FragmentModel(universe, max_period, elements)


def brute_force_extend(P: Relation, model: FragmentModel) -> FrozenSet[Tuple[VirtualValue, ...]]:
    """
    Model tuples on which P holds eventually. Canonical values carry no
    prefix, so "for all large i" is "for every i in one full common cycle".
    """
    out = set()
    for args in model.tuples(P.arity):
        cycle = reduce(math.lcm, (v.period for v in args), 1)
        if all(P.holds(tuple(v.term_at(i) for v in args)) for i in range(1, cycle + 1)):
            out.add(args)
    return frozenset(out)


def all_relations(universe: FiniteSet, arity: int) -> List[Relation]:
    """Every relation of the given arity, as tuple sets"""
    cells = list(product(universe.sorted(), repeat=arity))
    limit = get_settings().size_limit
    if 2 ** len(cells) > limit:
        raise SizeLimit(f"{2 ** len(cells)} relations exceed the size limit {limit}")
    return [
        extensional(universe, arity, [c for bit, c in enumerate(cells) if mask >> bit & 1])
        for mask in range(2 ** len(cells))
    ]


def random_relations(universe: FiniteSet, arity: int, count: int, seed: int) -> List[Relation]:
    rng = random.Random(seed)
    cells = list(product(universe.sorted(), repeat=arity))
    return [extensional(universe, arity, [c for c in cells if rng.random() < 0.5]) for _ in range(count)]


def all_subsets(universe: FiniteSet) -> List[FiniteSet]:
    points = universe.sorted()
    return [
        FiniteSet(frozenset(p for bit, p in enumerate(points) if mask >> bit & 1)) for mask in range(2 ** len(points))
    ]
