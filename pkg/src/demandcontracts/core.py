"""Exact scalars, bundles, set functions, and price/cost vectors.

Everything downstream manipulates these types.  All numeric quantities are
``fractions.Fraction``; floats never enter a comparison, because demand sets,
facet membership and critical values are exact equality conditions that a
tolerance would corrupt.

Bundles are plain ints: the subset S of the ground set [n] = {1, ..., n} is
encoded as an n-bit word with item i occupying bit i-1, so the empty set is 0
and the full set is 2**n - 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

MAX_ITEMS = 20  # 2**n value table; brute-force oracles stop being desk-scale above this

Bundle = int
PriceVector = tuple[Fraction, ...]
CostVector = tuple[Fraction, ...]


class InstanceError(ValueError):
    """Raised when an instance document or constructor argument is invalid."""


# ---------------------------------------------------------------------------
# rationals

def parse_rational(text) -> Fraction:
    """Parse "p/q", integer, or decimal strings ("0.7" -> 7/10) exactly.

    Ints and Fractions pass through.  Binary floats are rejected: they are
    almost never the number the author meant, and exactness is the point.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise InstanceError(
            f"refusing float literal {text!r}; write it as a string ('0.7' or '7/10')"
        )
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"not a rational literal: {text!r}") from exc


def render_rational(q: Fraction) -> str:
    """Inverse of parse_rational: "7/10" or "5"."""
    return str(Fraction(q))


# ---------------------------------------------------------------------------
# bundles

def from_items(items: Iterable[int]) -> Bundle:
    word = 0
    for i in items:
        if i < 1:
            raise InstanceError(f"items are 1-based, got {i}")
        word |= 1 << (i - 1)
    return word


def items_of(word: Bundle) -> tuple[int, ...]:
    out = []
    i = 1
    while word:
        if word & 1:
            out.append(i)
        word >>= 1
        i += 1
    return tuple(out)


def chi(word: Bundle, n: int) -> tuple[int, ...]:
    """Characteristic 0/1 vector of the bundle."""
    return tuple((word >> i) & 1 for i in range(n))


def bundle_size(word: Bundle) -> int:
    return bin(word).count("1")


def check_bundle(word: Bundle, n: int) -> Bundle:
    if word < 0 or word >> n:
        raise InstanceError(f"bundle word {word} has bits outside [{n}]")
    return word


def format_bundle(word: Bundle) -> str:
    return "{" + ",".join(map(str, items_of(word))) + "}"


# ---------------------------------------------------------------------------
# set functions

@dataclass(frozen=True)
class SetFunction:
    """Explicit table of exact values over all 2**n bundles of n items.

    ``values[word]`` is f(S) for the bundle with that word; index 0 is the
    empty set.  ``original_empty`` records f(empty) before normalization when
    the function was ingested from a file (demand sets are invariant under
    the additive shift that moves f(empty) to 0).
    """

    n: int
    values: tuple[Fraction, ...]
    original_empty: Fraction = field(default=Fraction(0), compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ITEMS:
            raise InstanceError(f"n must be in 1..{MAX_ITEMS}, got {self.n}")
        if len(self.values) != 1 << self.n:
            raise InstanceError(
                f"need exactly {1 << self.n} values for n={self.n}, got {len(self.values)}"
            )
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def value(self, word: Bundle) -> Fraction:
        return self.values[check_bundle(word, self.n)]

    def bundles(self) -> range:
        return range(1 << self.n)

    def normalized(self) -> "SetFunction":
        """Shift all values by -f(empty) so that f(empty) = 0."""
        base = self.values[0]
        if base == 0:
            return self
        return SetFunction(self.n, tuple(v - base for v in self.values), base)

    def shifted(self, k) -> "SetFunction":
        k = Fraction(k)
        return SetFunction(self.n, tuple(v + k for v in self.values))

    def scaled(self, k) -> "SetFunction":
        k = Fraction(k)
        return SetFunction(self.n, tuple(v * k for v in self.values))


def value_query(f: SetFunction, word: Bundle) -> Fraction:
    """The value oracle: report f(S) for one bundle.

    This is the only access path the walk-based demand query is allowed to
    use; keeping it a free function makes the restriction auditable.
    """
    return f.value(word)


def is_monotone(f: SetFunction) -> bool:
    """True iff f(S) <= f(T) whenever S is a subset of T.

    Checked over single-item extensions, which is equivalent to the full
    pairwise condition and exponentially cheaper.
    """
    for word in f.bundles():
        v = f.values[word]
        for i in range(f.n):
            bit = 1 << i
            if not word & bit and f.values[word | bit] < v:
                return False
    return True


def is_monotone_pairwise(f: SetFunction) -> bool:
    """Literal all-pairs subset check; the independent oracle for is_monotone."""
    words = list(f.bundles())
    for s, t in combinations(words, 2):
        lo, hi = (s, t) if bundle_size(s) <= bundle_size(t) else (t, s)
        if lo & hi == lo and f.values[lo] > f.values[hi]:
            return False
    return True


# ---------------------------------------------------------------------------
# prices and costs

def as_prices(entries: Sequence, n: int | None = None) -> PriceVector:
    p = tuple(parse_rational(e) for e in entries)
    if n is not None and len(p) != n:
        raise InstanceError(f"expected {n} prices, got {len(p)}")
    return p


def as_costs(entries: Sequence, n: int | None = None) -> CostVector:
    c = as_prices(entries, n)
    for i, ci in enumerate(c):
        if ci < 0:
            raise InstanceError(f"cost c_{i + 1} = {ci} is negative")
    return c


def cost_of(c: Sequence[Fraction], word: Bundle) -> Fraction:
    """Sum of c_i over the items of the bundle."""
    total = Fraction(0)
    i = 0
    while word:
        if word & 1:
            total += c[i]
        word >>= 1
        i += 1
    return total


def linear_table(vec: Sequence[Fraction], n: int) -> list[Fraction]:
    """Table of cost_of(vec, S) over all 2**n bundles, built incrementally."""
    table = [Fraction(0)] * (1 << n)
    for word in range(1, 1 << n):
        low = word & -word
        table[word] = table[word ^ low] + vec[low.bit_length() - 1]
    return table


# ---------------------------------------------------------------------------
# instance files

def load_instance(document) -> tuple[SetFunction, CostVector | None]:
    """Parse an instance document (JSON text or dict) into (f, costs).

    Schema: {"n": int, "values": [str, ... 2**n], "costs": [str, ... n]?}
    with values ordered by bundle word ascending and rationals written as
    "p/q", integer, or decimal strings.  f(empty) is normalized to 0; the
    original value is kept as metadata on the returned function.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise InstanceError("instance document must be a JSON object")
    try:
        n = document["n"]
        raw_values = document["values"]
    except KeyError as exc:
        raise InstanceError(f"instance document missing key {exc}") from exc
    if not isinstance(n, int):
        raise InstanceError(f"n must be an integer, got {n!r}")
    f = SetFunction(n, tuple(parse_rational(v) for v in raw_values)).normalized()
    if document.get("monotone"):
        if any(v < 0 for v in f.values):
            raise InstanceError("monotone flag set but a normalized value is negative")
        if not is_monotone(f):
            raise InstanceError("monotone flag set but the function is not monotone")
    costs = None
    if document.get("costs") is not None:
        costs = as_costs(document["costs"], n)
    return f, costs


def load_set_function(document) -> SetFunction:
    """Parse an instance document, ignoring any cost vector it carries."""
    return load_instance(document)[0]


def dump_instance(f: SetFunction, costs: CostVector | None = None, name: str | None = None) -> str:
    """Serialize to the instance-file schema (byte-stable for fixed input)."""
    doc: dict = {"n": f.n, "values": [render_rational(v) for v in f.values]}
    if costs is not None:
        doc["costs"] = [render_rational(ci) for ci in costs]
    if name is not None:
        doc["name"] = name
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
