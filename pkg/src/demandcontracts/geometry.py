"""Price-space geometry of demand: facets, minimal covers, and class flags.

The workhorse is strict_two_set_feasible: an exact LP that decides whether
some price vector makes the demand set exactly {S, T}.  Every facet normal of
the indifference locus arises this way, so enumerating pairs yields the
minimal demand cover of a single function, and cover containment against the
named families yields class membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import simplex
from .core import (
    Bundle,
    InstanceError,
    PriceVector,
    SetFunction,
    bundle_size,
    chi,
    check_bundle,
    linear_table,
)
from .covers import (
    CoverFamily,
    CoverVector,
    DemandCover,
    cover_contains,
    gen_cover,
)
from .demand import demand_set

MAX_COVER_ITEMS = 12  # pair enumeration is ~4**n; past this it is not desk-scale


class InconsistencyError(RuntimeError):
    """A definitional check disagreed with its cover-containment counterpart."""


@dataclass(frozen=True)
class StrictFeasibilityWitness:
    """Exact prices at which the demand set is exactly the recorded pair.

    ``margin`` is the slack by which every other bundle loses at these
    prices; it is strictly positive by construction.
    """

    prices: PriceVector
    margin: Fraction
    bundles: tuple[Bundle, Bundle]


@dataclass(frozen=True)
class MinimalCover:
    """V(f): all facet normals of f, with a feasibility witness per vector."""

    cover: DemandCover
    witnesses: dict[CoverVector, StrictFeasibilityWitness]


def _diamond_reject(f: SetFunction, s: Bundle, t: Bundle) -> bool:
    """Cheap certified infeasibility test for a two-element demand set.

    Any pair (U, W) with chi_U + chi_W = chi_S + chi_T sees the same total
    price as (S, T) at every price vector, so if f(U) + f(W) >= f(S) + f(T)
    then whenever S and T tie, U or W matches or beats them and the demand
    set cannot be exactly {S, T}.
    """
    inter = s & t
    diff = (s | t) & ~inter
    target = f.values[s] + f.values[t]
    sub = (diff - 1) & diff
    x = diff
    while True:  # enumerate subsets of the symmetric difference
        u = inter | x
        w = inter | (diff & ~x)
        if {u, w} != {s, t} and f.values[u] + f.values[w] >= target:
            return True
        if x == 0:
            break
        x = (x - 1) & diff
    return False


def strict_two_set_feasible(f: SetFunction, s: Bundle, t: Bundle):
    """Witness prices with demand set exactly {S, T}, or None.

    Decided by an exact LP over prices p and a slack variable: maximize the
    slack subject to S and T tying while every other bundle trails by at
    least the slack (capped at 1 to keep the program bounded).  A strictly
    positive optimum is equivalent to the existence of such prices.  The
    returned prices are re-verified against the brute-force demand oracle.
    """
    n = f.n
    check_bundle(s, n)
    check_bundle(t, n)
    if s == t:
        raise InstanceError("need two distinct bundles")
    if _diamond_reject(f, s, t):
        return None

    chi_s = chi(s, n)
    chi_t = chi(t, n)
    # variables: p_1..p_n, eps; maximize eps
    objective = [Fraction(0)] * n + [Fraction(1)]
    eq = [(
        [Fraction(ct - cs) for cs, ct in zip(chi_s, chi_t)] + [Fraction(0)],
        f.values[t] - f.values[s],
    )]
    ub = []
    for u in f.bundles():
        if u in (s, t):
            continue
        chi_u = chi(u, n)
        coeffs = [Fraction(cs - cu) for cs, cu in zip(chi_s, chi_u)] + [Fraction(1)]
        ub.append((coeffs, f.values[s] - f.values[u]))
    ub.append(([Fraction(0)] * n + [Fraction(1)], Fraction(1)))

    result = simplex.maximize(objective, eq=eq, ub=ub, early_stop_above=0)
    if result.status not in (simplex.OPTIMAL, simplex.FEASIBLE):
        raise RuntimeError(f"unexpected LP status {result.status}")
    if result.objective <= 0:
        return None
    prices = tuple(result.solution[:n])
    verified = demand_set(f, prices)
    expected = tuple(sorted((s, t)))
    if verified.maximizers != expected:
        raise RuntimeError(
            f"LP witness failed re-verification for pair {expected}: got {verified.maximizers}"
        )
    margin = min(
        (
            verified.max_utility
            - (f.values[u] - sum(p for p, b in zip(prices, chi(u, n)) if b))
            for u in f.bundles()
            if u not in (s, t)
        ),
        default=result.objective,
    )
    return StrictFeasibilityWitness(prices, margin, (s, t))


def minimal_cover(f: SetFunction) -> MinimalCover:
    """V(f) by enumerating bundle pairs, one LP per still-undecided normal.

    Pairs are grouped by the sign vector chi_S - chi_T; the first feasible
    pair certifies both the vector and its negation, so later pairs in the
    group are skipped.
    """
    n = f.n
    if n > MAX_COVER_ITEMS:
        raise InstanceError(f"minimal_cover is limited to n <= {MAX_COVER_ITEMS}")
    full = (1 << n) - 1
    vectors: list[CoverVector] = []
    witnesses: dict[CoverVector, StrictFeasibilityWitness] = {}
    for pos in range(1, full + 1):
        rest = full & ~pos
        neg = rest
        while True:  # subsets of the complement of pos, including 0
            if pos > neg:  # keep one canonical orientation per +- class
                v = tuple(
                    1 if pos >> i & 1 else (-1 if neg >> i & 1 else 0) for i in range(n)
                )
                free = full & ~(pos | neg)
                x = 0
                witness = None
                while True:  # subsets of the free items
                    s_bundle = pos | x
                    t_bundle = neg | x
                    witness = strict_two_set_feasible(f, s_bundle, t_bundle)
                    if witness is not None:
                        break
                    if x == free:
                        break
                    x = (x - free) & free  # next subset of free
                if witness is not None:
                    minus_v = tuple(-c for c in v)
                    vectors.extend((v, minus_v))
                    witnesses[v] = witness
                    witnesses[minus_v] = StrictFeasibilityWitness(
                        witness.prices, witness.margin, witness.bundles[::-1]
                    )
            if neg == 0:
                break
            neg = (neg - 1) & rest
    return MinimalCover(DemandCover(n, vectors), witnesses)


# ---------------------------------------------------------------------------
# definitional class checks

def is_supermodular_def(f: SetFunction) -> bool:
    """Marginals f(i | .) are nondecreasing along single-item extensions.

    Equivalent to the full subset-pair condition by induction on |T - S|.
    """
    for word in f.bundles():
        for i in range(f.n):
            bi = 1 << i
            if word & bi:
                continue
            base = f.values[word | bi] - f.values[word]
            for j in range(f.n):
                bj = 1 << j
                if j == i or word & bj:
                    continue
                if f.values[word | bi | bj] - f.values[word | bj] < base:
                    return False
    return True


def is_ultra_def(f: SetFunction) -> bool:
    """Exhaustive exchange check over all bundle pairs.

    For every S, T with |S| <= |T| and every x in S - T there must be some
    y in T - S whose swap does not decrease f(S) + f(T).
    """
    words = list(f.bundles())
    sizes = [bundle_size(w) for w in words]
    for s in words:
        for t in words:
            if sizes[s] > sizes[t]:
                continue
            s_only = s & ~t
            if not s_only:
                continue
            t_only = t & ~s
            total = f.values[s] + f.values[t]
            x_bits = s_only
            while x_bits:
                x = x_bits & -x_bits
                x_bits ^= x
                ok = False
                y_bits = t_only
                while y_bits:
                    y = y_bits & -y_bits
                    y_bits ^= y
                    if f.values[(s ^ x) | y] + f.values[(t ^ y) | x] >= total:
                        ok = True
                        break
                if not ok:
                    return False
    return True


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class ClassFlags:
    gs: bool
    gc: bool
    gsc: bool
    gsc_partition: tuple[tuple[int, ...], tuple[int, ...]] | None
    gsc_plus: bool
    min_delta: int
    asc: bool
    supermodular: bool
    ultra: bool

    def as_dict(self) -> dict:
        return {
            "GS": self.gs,
            "GC": self.gc,
            "GSC": self.gsc,
            "GSC_partition": [list(p) for p in self.gsc_partition] if self.gsc_partition else None,
            "GSC_PLUS": self.gsc_plus,
            "min_delta": self.min_delta,
            "ASC": self.asc,
            "supermodular": self.supermodular,
            "ultra": self.ultra,
        }


def bipartitions(n: int):
    """All unordered bipartitions of 1..n, smallest second part first."""
    items = list(range(2, n + 1))
    parts = []
    for size in range(0, n):
        for group in combinations(items, size):
            part2 = tuple(group)
            part1 = tuple(i for i in range(1, n + 1) if i not in group)
            parts.append((part1, part2))
    return parts


def find_gsc_partition(cover: DemandCover):
    """First bipartition whose partition cover contains the given vectors."""
    for part1, part2 in bipartitions(cover.n):
        candidate = gen_cover(CoverFamily.gsc(part1, part2), cover.n)
        if cover_contains(candidate, cover):
            return part1, part2
    return None


def classify(f: SetFunction, minimal: MinimalCover | None = None) -> ClassFlags:
    """Class flags for f via cover containment plus definitional cross-checks.

    GS, GC, GSC+, delta-substitutes, and ASC memberships are exactly cover
    containments.  The GSC flag searches bipartitions and uses the partition
    cover as a sufficient certificate.  Supermodularity is additionally
    checked definitionally and must agree with the GC containment.
    """
    if minimal is None:
        minimal = minimal_cover(f)
    v = minimal.cover
    n = f.n
    gs = cover_contains(gen_cover(CoverFamily.gs(), n), v)
    gc = cover_contains(gen_cover(CoverFamily.gc(), n), v)
    gsc_plus = cover_contains(gen_cover(CoverFamily.gsc_plus(), n), v)
    asc = cover_contains(gen_cover(CoverFamily.asc(), n), v)
    min_delta = next(
        d for d in range(1, n + 1)
        if cover_contains(gen_cover(CoverFamily.delta_sub(d), n), v)
    )
    partition = find_gsc_partition(v)
    supermod = is_supermodular_def(f)
    if supermod != gc:
        raise InconsistencyError(
            f"definitional supermodularity ({supermod}) disagrees with the "
            f"same-sign cover containment ({gc}) for {f!r}"
        )
    return ClassFlags(
        gs=gs,
        gc=gc,
        gsc=partition is not None,
        gsc_partition=partition,
        gsc_plus=gsc_plus,
        min_delta=min_delta,
        asc=asc,
        supermodular=supermod,
        ultra=is_ultra_def(f),
    )


# ---------------------------------------------------------------------------
# facet piercing

MULTI_FACET = "multi_facet"
PERSISTENT_TIE = "persistent_tie"


@dataclass(frozen=True)
class PiercingViolation:
    kind: str
    bundles: tuple[Bundle, ...]
    alpha: Fraction | None = None                  # multi-facet point
    alpha_interval: tuple[Fraction, Fraction] | None = None  # persistent tie


@dataclass(frozen=True)
class PiercingReport:
    holds: bool
    violations: tuple[PiercingViolation, ...]
    # the closed endpoint alpha = 1 (prices exactly at cost) is part of the
    # scanned ray
    includes_alpha_one: bool = True


def facet_piercing(f: SetFunction, c) -> PiercingReport:
    """Does the scaled-cost ray meet the indifference locus one facet at a time?

    Two failure modes are scanned exactly.  A multi-facet point is a scaling
    where three or more bundles tie for the maximum; candidates are the
    pairwise tie points alpha = (c(S)-c(T)) / (f(S)-f(T)) in (0, 1].  A
    persistent tie is a pair of bundles with identical utility lines (equal
    value and equal cost) that are jointly maximal over a whole interval of
    scalings, i.e. the ray runs inside a facet.
    """
    n = f.n
    costs = linear_table(c, n)
    if all(x == 0 for x in c):
        raise InstanceError("facet piercing needs a nonzero cost vector")

    alphas = set()
    same_line: dict[tuple[Fraction, Fraction], list[Bundle]] = {}
    words = list(f.bundles())
    for s, t in combinations(words, 2):
        df = f.values[t] - f.values[s]
        dc = costs[t] - costs[s]
        if df != 0:
            alpha = dc / df
            if 0 < alpha <= 1:
                alphas.add(alpha)
        elif dc == 0:
            same_line.setdefault((f.values[s], costs[s]), [s]).append(t)

    violations = []
    for alpha in sorted(alphas):
        prices = tuple(ci / alpha for ci in c)
        result = demand_set(f, prices)
        if len(result.maximizers) >= 3:
            violations.append(
                PiercingViolation(MULTI_FACET, result.maximizers, alpha=alpha)
            )

    for (value, cost), group in same_line.items():
        group = sorted(set(group))
        if len(group) < 2:
            continue
        lo = Fraction(0)
        hi = Fraction(1)
        dominated = False
        for u in words:
            if u in group:
                continue
            df = f.values[u] - value
            dc = costs[u] - cost
            if df > 0:
                hi = min(hi, dc / df)
            elif df < 0:
                lo = max(lo, dc / df)
            elif dc < 0:
                dominated = True
                break
        if not dominated and lo < hi:
            violations.append(
                PiercingViolation(
                    PERSISTENT_TIE, tuple(group), alpha_interval=(max(lo, Fraction(0)), hi)
                )
            )

    return PiercingReport(holds=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# two-item indifference locus

@dataclass(frozen=True)
class FacetSegment2D:
    """One facet of a two-item indifference locus, clipped to a box.

    Demand is ``bundles[0]`` on the side the normal points away from and
    ``bundles[1]`` on the side it points into.
    """

    endpoints: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    normal: CoverVector
    bundles: tuple[Bundle, Bundle]


def lip2d(f: SetFunction, box) -> list[FacetSegment2D]:
    """All positive-length facet segments of a two-item function inside box.

    box is ((x0, y0), (x1, y1)).  For each bundle pair the tie line is
    parameterized and intersected with the half-planes where the pair is
    maximal, plus the clip box; surviving positive-length intervals are the
    facets.
    """
    if f.n != 2:
        raise InstanceError("lip2d needs exactly two items")
    (x0, y0), (x1, y1) = box
    x0, y0, x1, y1 = Fraction(x0), Fraction(y0), Fraction(x1), Fraction(y1)
    if x0 >= x1 or y0 >= y1:
        raise InstanceError("clip box is empty")
    segments = []
    words = [0, 1, 2, 3]
    for s, t in combinations(words, 2):
        a = tuple(ct - cs for cs, ct in zip(chi(s, 2), chi(t, 2)))  # line: a . p = f(T)-f(S)
        rhs = f.values[t] - f.values[s]
        if a == (0, 0):
            continue
        if a[0]:
            p0 = (rhs / a[0], Fraction(0))
        else:
            p0 = (Fraction(0), rhs / a[1])
        d = (Fraction(-a[1]), Fraction(a[0]))
        lo, hi = None, None  # parameter interval, open bounds None = unbounded

        def tighten(coeff, bound, lo, hi):
            # constraint: coeff * t <= bound
            if coeff == 0:
                return (lo, hi) if bound >= 0 else (Fraction(1), Fraction(0))
            edge = bound / coeff
            if coeff > 0:
                hi = edge if hi is None else min(hi, edge)
            else:
                lo = edge if lo is None else max(lo, edge)
            return lo, hi

        feasible = True
        for u in words:
            if u in (s, t):
                continue
            # u_S(p(t)) - u_U(p(t)) >= 0 along p(t) = p0 + t * d
            g = tuple(cs - cu for cs, cu in zip(chi(s, 2), chi(u, 2)))
            beta = (f.values[s] - f.values[u]) - (g[0] * p0[0] + g[1] * p0[1])
            coeff = g[0] * d[0] + g[1] * d[1]  # constraint: coeff * t <= beta
            lo, hi = tighten(coeff, beta, lo, hi)
            if lo is not None and hi is not None and lo > hi:
                feasible = False
                break
        if not feasible:
            continue
        for coeff_x, bound in ((d[0], x1 - p0[0]), (-d[0], p0[0] - x0),
                               (d[1], y1 - p0[1]), (-d[1], p0[1] - y0)):
            lo, hi = tighten(coeff_x, bound, lo, hi)
        if lo is None or hi is None or lo >= hi:
            continue
        p_lo = (p0[0] + lo * d[0], p0[1] + lo * d[1])
        p_hi = (p0[0] + hi * d[0], p0[1] + hi * d[1])
        normal = tuple(cs - ct for cs, ct in zip(chi(s, 2), chi(t, 2)))
        segments.append(FacetSegment2D((p_lo, p_hi), normal, (s, t)))
    return segments
