"""Buyer utility and the exhaustive ground-truth demand oracle.

demand_set enumerates every bundle, so it is slow and always right; all the
clever machinery elsewhere is validated against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Bundle,
    PriceVector,
    SetFunction,
    cost_of,
    linear_table,
)

TIE_LOWEST_WORD = "lowest-word"
TIE_MAX_VALUE = "max-value-then-lowest-word"


@dataclass(frozen=True)
class DemandResult:
    """The full demand set D_f(p): every utility-maximizing bundle at p."""

    prices: PriceVector
    maximizers: tuple[Bundle, ...]  # ascending bundle-word order
    max_utility: Fraction


def buyer_utility(f: SetFunction, p: Sequence[Fraction], word: Bundle) -> Fraction:
    """u_B(p, S) = f(S) - sum of p_i over i in S."""
    return f.value(word) - cost_of(p, word)


def demand_set(f: SetFunction, p: Sequence[Fraction]) -> DemandResult:
    """Exact demand set by enumeration over all 2**n bundles."""
    prices = linear_table(p, f.n)
    best = f.values[0]  # empty bundle, price 0
    winners = [0]
    for word in range(1, 1 << f.n):
        u = f.values[word] - prices[word]
        if u > best:
            best = u
            winners = [word]
        elif u == best:
            winners.append(word)
    return DemandResult(tuple(Fraction(x) for x in p), tuple(winners), best)


def demand_query_brute(f: SetFunction, p: Sequence[Fraction], tie_rule: str = TIE_LOWEST_WORD) -> Bundle:
    """One demanded bundle, selected deterministically among the maximizers."""
    result = demand_set(f, p)
    if tie_rule == TIE_LOWEST_WORD:
        return result.maximizers[0]
    if tie_rule == TIE_MAX_VALUE:
        return max(result.maximizers, key=lambda w: (f.values[w], -w))
    raise ValueError(f"unknown tie rule {tie_rule!r}")
