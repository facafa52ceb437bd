"""Demand-cover vectors, the named cover families, and bundle adjacency.

A demand cover is a sign-closed set of vectors in {-1,0,1}^n; each vector is
a possible facet normal, i.e. a possible one-step change of demand.  The
named families below pin down the valuation classes used throughout:

  GS         at most one positive and at most one negative entry
  GC         all non-zero entries share one sign (gross complements)
  GSC        partition cover: unit vectors, same-part differences,
             cross-part sums, for a fixed bipartition of the items
  GSC_PLUS   at most two non-zero entries
  DELTA_SUB  at most delta positive and at most delta negative entries
  ASC        all one sign, or exactly one positive and one negative entry
  FULL       every non-zero sign vector
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .core import Bundle, InstanceError

CoverVector = tuple[int, ...]

GS = "GS"
GC = "GC"
GSC = "GSC"
GSC_PLUS = "GSC_PLUS"
DELTA_SUB = "DELTA_SUB"
ASC = "ASC"
FULL = "FULL"

_KINDS = (GS, GC, GSC, GSC_PLUS, DELTA_SUB, ASC, FULL)
_FULL_LIMIT = 12  # 3**n explicit vectors; beyond this the table is not desk-scale


@dataclass(frozen=True)
class CoverFamily:
    kind: str
    delta: int | None = None
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InstanceError(f"unknown cover family {self.kind!r}")
        if self.kind == DELTA_SUB:
            if not isinstance(self.delta, int) or self.delta < 1:
                raise InstanceError("DELTA_SUB needs an integer delta >= 1")
        elif self.kind == GSC:
            if self.partition is None:
                raise InstanceError("GSC needs a bipartition of the items")
        elif self.delta is not None or self.partition is not None:
            raise InstanceError(f"{self.kind} takes no parameters")

    @classmethod
    def gs(cls):
        return cls(GS)

    @classmethod
    def gc(cls):
        return cls(GC)

    @classmethod
    def gsc(cls, part1: Iterable[int], part2: Iterable[int]):
        return cls(GSC, partition=(tuple(sorted(part1)), tuple(sorted(part2))))

    @classmethod
    def gsc_plus(cls):
        return cls(GSC_PLUS)

    @classmethod
    def delta_sub(cls, delta: int):
        return cls(DELTA_SUB, delta=delta)

    @classmethod
    def asc(cls):
        return cls(ASC)

    @classmethod
    def full(cls):
        return cls(FULL)

    @classmethod
    def parse(cls, text: str) -> "CoverFamily":
        """Parse CLI spellings: "GS", "DELTA_SUB:2", "GSC:1,2|3,4"."""
        head, _, arg = text.partition(":")
        head = head.upper()
        if head == DELTA_SUB:
            try:
                return cls.delta_sub(int(arg))
            except ValueError as exc:
                raise InstanceError(f"bad delta in {text!r}") from exc
        if head == GSC:
            left, bar, right = arg.partition("|")
            if not bar:
                raise InstanceError(f"GSC wants 'GSC:i,j|k,...', got {text!r}")
            parse_side = lambda s: tuple(int(x) for x in s.split(",") if x)
            return cls.gsc(parse_side(left), parse_side(right))
        return cls(head)

    def label(self) -> str:
        if self.kind == DELTA_SUB:
            return f"DELTA_SUB:{self.delta}"
        if self.kind == GSC:
            a, b = self.partition
            return "GSC:%s|%s" % (",".join(map(str, a)), ",".join(map(str, b)))
        return self.kind


@dataclass(frozen=True)
class DemandCover:
    """Deduplicated, sign-closed vector set in canonical (lexicographic) order."""

    n: int
    vectors: tuple[CoverVector, ...]

    def __post_init__(self):
        vecs = sorted(set(tuple(int(x) for x in v) for v in self.vectors))
        for v in vecs:
            if len(v) != self.n or any(x not in (-1, 0, 1) for x in v):
                raise InstanceError(f"bad cover vector {v} for n={self.n}")
            if all(x == 0 for x in v):
                raise InstanceError("the zero vector cannot be a facet normal")
        present = set(vecs)
        for v in vecs:
            if tuple(-x for x in v) not in present:
                raise InstanceError(f"cover is not sign-closed: missing -{v}")
        object.__setattr__(self, "vectors", tuple(vecs))

    def __contains__(self, v: CoverVector) -> bool:
        return tuple(v) in self._vector_set()

    def __len__(self) -> int:
        return len(self.vectors)

    def _vector_set(self) -> frozenset:
        cached = self.__dict__.get("_cache_set")
        if cached is None:
            cached = frozenset(self.vectors)
            self.__dict__["_cache_set"] = cached
        return cached

    def has_all_units(self) -> bool:
        units = {tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)}
        return units <= self._vector_set()

    def masks(self) -> tuple[tuple[int, int], ...]:
        """(positive-bit mask, negative-bit mask) per vector, for fast stepping."""
        cached = self.__dict__.get("_cache_masks")
        if cached is None:
            cached = tuple(
                (
                    sum(1 << i for i, x in enumerate(v) if x == 1),
                    sum(1 << i for i, x in enumerate(v) if x == -1),
                )
                for v in self.vectors
            )
            self.__dict__["_cache_masks"] = cached
        return cached

    def to_json(self) -> str:
        return json.dumps([list(v) for v in self.vectors])


def load_cover(document) -> DemandCover:
    """Parse the JSON serialization (a list of n-entry integer arrays)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, list) or not document:
        raise InstanceError("cover document must be a non-empty JSON list of vectors")
    n = len(document[0])
    return DemandCover(n, tuple(tuple(v) for v in document))


# ---------------------------------------------------------------------------
# family generators

def _unit_vectors(n: int) -> list[CoverVector]:
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(tuple(e))
        e[i] = -1
        out.append(tuple(e))
    return out


def _pair_vector(n: int, i: int, si: int, j: int, sj: int) -> CoverVector:
    v = [0] * n
    v[i] = si
    v[j] = sj
    return tuple(v)


def _same_sign_vectors(n: int) -> list[CoverVector]:
    out = []
    for word in range(1, 1 << n):
        v = tuple(1 if word >> i & 1 else 0 for i in range(n))
        out.append(v)
        out.append(tuple(-x for x in v))
    return out


def gen_cover(family: CoverFamily, n: int) -> DemandCover:
    """The exact vector set of a named family at dimension n."""
    if n < 1:
        raise InstanceError("n must be positive")
    kind = family.kind
    if kind == GS:
        vecs = _unit_vectors(n)
        for i in range(n):
            for j in range(n):
                if i != j:
                    vecs.append(_pair_vector(n, i, 1, j, -1))
        return DemandCover(n, vecs)
    if kind == GC:
        return DemandCover(n, _same_sign_vectors(n))
    if kind == ASC:
        vecs = _same_sign_vectors(n)
        for i in range(n):
            for j in range(n):
                if i != j:
                    vecs.append(_pair_vector(n, i, 1, j, -1))
        return DemandCover(n, vecs)
    if kind == GSC_PLUS:
        vecs = _unit_vectors(n)
        for i, j in combinations(range(n), 2):
            for si in (1, -1):
                for sj in (1, -1):
                    vecs.append(_pair_vector(n, i, si, j, sj))
        return DemandCover(n, vecs)
    if kind == DELTA_SUB:
        delta = family.delta
        if delta >= n:
            return gen_cover(CoverFamily.full(), n)
        vecs = []
        indices = range(n)
        for p_size in range(delta + 1):
            for pos in combinations(indices, p_size):
                rest = [i for i in indices if i not in pos]
                for n_size in range(min(delta, len(rest)) + 1):
                    if p_size == 0 and n_size == 0:
                        continue
                    for neg in combinations(rest, n_size):
                        v = [0] * n
                        for i in pos:
                            v[i] = 1
                        for i in neg:
                            v[i] = -1
                        vecs.append(tuple(v))
        return DemandCover(n, vecs)
    if kind == GSC:
        part1, part2 = family.partition
        claimed = sorted(part1 + part2)
        if claimed != list(range(1, n + 1)) or set(part1) & set(part2):
            raise InstanceError(
                f"partition {family.partition} is not a bipartition of 1..{n}"
            )
        vecs = _unit_vectors(n)
        for part in (part1, part2):
            for a, b in combinations(part, 2):
                vecs.append(_pair_vector(n, a - 1, 1, b - 1, -1))
                vecs.append(_pair_vector(n, a - 1, -1, b - 1, 1))
        for a in part1:
            for b in part2:
                vecs.append(_pair_vector(n, a - 1, 1, b - 1, 1))
                vecs.append(_pair_vector(n, a - 1, -1, b - 1, -1))
        return DemandCover(n, vecs)
    if kind == FULL:
        if n > _FULL_LIMIT:
            raise InstanceError(f"FULL cover is only generated up to n={_FULL_LIMIT}")
        vecs = [v for v in product((-1, 0, 1), repeat=n) if any(v)]
        return DemandCover(n, vecs)
    raise InstanceError(f"unknown cover family {kind!r}")


# ---------------------------------------------------------------------------
# adjacency and containment

def adjacent_bundles(cover: DemandCover, word: Bundle) -> list[Bundle]:
    """Bundles one cover-vector away from S, plus S itself, ascending order.

    T is adjacent when chi_T - chi_S is a cover vector, i.e. the vector's
    positive entries avoid S and its negative entries lie inside S.
    """
    out = {word}
    for pos, neg in cover.masks():
        if word & pos == 0 and word & neg == neg:
            out.add((word | pos) & ~neg)
    return sorted(out)


def cover_contains(outer: DemandCover, inner: DemandCover) -> bool:
    """True iff every vector of ``inner`` lies in ``outer``."""
    if outer.n != inner.n:
        raise InstanceError(f"dimension mismatch: {outer.n} vs {inner.n}")
    return inner._vector_set() <= outer._vector_set()
