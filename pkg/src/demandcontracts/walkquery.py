"""Demand query for succinct demand covers, using only value queries.

The query walks a price path: start at a uniform price high enough that the
empty bundle is demanded, then lower one coordinate at a time to its target
value.  After each coordinate move the new demanded bundle is adjacent (in
the cover sense) to the previous one, so each step is an argmax over the
small adjacency neighborhood instead of all 2**n bundles.  The function is
touched exclusively through the value oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Bundle, PriceVector, SetFunction, value_query
from .covers import DemandCover, adjacent_bundles
from .demand import demand_set


class CoverViolation(RuntimeError):
    """The walk lost the brute-force optimum: f is not covered by this cover.

    Only raised in validation mode; the production path never consults the
    brute-force oracle.
    """

    def __init__(self, step: int, prices: PriceVector, achieved: Fraction, optimum: Fraction):
        self.step = step
        self.prices = prices
        self.achieved = achieved
        self.optimum = optimum
        super().__init__(
            f"walk step {step}: best adjacent utility {achieved} is below the "
            f"true optimum {optimum}; the function is outside this cover's demand type"
        )


@dataclass(frozen=True)
class WalkTrace:
    """Price waypoints and chosen bundles of one walk, plus the query bill."""

    start_price: Fraction  # the uniform coordinate of the opening price vector
    waypoints: tuple[tuple[PriceVector, Bundle], ...]  # (p^i, S_i) for i = 0..n
    value_query_count: int


class ValueOracle:
    """Counting wrapper so tests can audit the number of value queries."""

    def __init__(self, f: SetFunction):
        self._f = f
        self.count = 0

    @property
    def n(self) -> int:
        return self._f.n

    def query(self, word: Bundle) -> Fraction:
        self.count += 1
        return value_query(self._f, word)


def demand_query_walk(
    cover: DemandCover,
    f: SetFunction | ValueOracle,
    p: Sequence[Fraction],
    validate: bool = False,
) -> tuple[Bundle, WalkTrace]:
    """One demanded bundle at prices p, for f demand-covered by ``cover``.

    The bundle is exact whenever the cover really does cover f; the caller
    asserts that.  With ``validate`` set, every step is compared against the
    brute-force oracle and a CoverViolation pinpoints the first step at
    which the premise fails (test-only; it defeats the value-oracle model).
    """
    oracle = f if isinstance(f, ValueOracle) else ValueOracle(f)
    n = oracle.n
    if len(p) != n:
        raise ValueError(f"expected {n} prices, got {len(p)}")
    if not cover.has_all_units():
        raise ValueError("cover must contain every unit vector to cover anything")
    if oracle.query(0) != 0:
        raise ValueError("walk queries assume f(empty) = 0; normalize first")
    p = tuple(Fraction(x) for x in p)

    start_neighbors = adjacent_bundles(cover, 0)
    nonempty = [t for t in start_neighbors if t != 0]
    m = max((oracle.query(t) for t in nonempty), default=Fraction(0))

    current = 0
    prices = tuple([m] * n)
    waypoints = [(prices, current)]
    if validate:
        _check_step(oracle, prices, Fraction(0), 0)
    for i in range(1, n + 1):
        prices = tuple(p[j] if j < i else m for j in range(n))
        best = None
        best_utility = None
        for t in adjacent_bundles(cover, current):  # ascending word: ties keep lowest
            u = oracle.query(t) - sum(prices[j] for j in range(n) if t >> j & 1)
            if best_utility is None or u > best_utility:
                best_utility = u
                best = t
        current = best
        waypoints.append((prices, current))
        if validate:
            _check_step(oracle, prices, best_utility, i)
    return current, WalkTrace(m, tuple(waypoints), oracle.count)


def _check_step(oracle: ValueOracle, prices: PriceVector, achieved: Fraction, step: int):
    optimum = demand_set(oracle._f, prices).max_utility
    if achieved < optimum:
        raise CoverViolation(step, prices, achieved, optimum)
