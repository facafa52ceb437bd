"""Agent best response, critical values, and the optimal linear contract.

The agent paid fraction alpha of the reward picks the bundle maximizing
alpha * f(S) - c(S), breaking ties in the principal's favor (larger f(S),
then lowest bundle word).  Critical values are the alphas where that best
response changes; any optimal contract sits at one of them (or at the alpha
= 0 boundary), so the optimum is found by enumerating breakpoints of the
upper envelope with the classical bisection recursion and scoring each.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Bundle, CostVector, SetFunction, cost_of, linear_table


@dataclass(frozen=True)
class CriticalPoint:
    """A contract level where the best response jumps.

    Below alpha the agent plays set_before, from alpha on set_after; both
    earn the agent exactly agent_utility_at there.
    """

    alpha: Fraction
    set_before: Bundle
    set_after: Bundle
    agent_utility_at: Fraction


@dataclass(frozen=True)
class ContractSolution:
    alpha_star: Fraction
    bundle: Bundle
    principal_utility: Fraction
    agent_utility: Fraction
    criticals: tuple[CriticalPoint, ...]
    best_response_queries: int


def agent_utility(f: SetFunction, c: CostVector, alpha, word: Bundle) -> Fraction:
    return Fraction(alpha) * f.value(word) - cost_of(c, word)


class _Env:
    """Shared tables plus the best-response query meter for one (f, c)."""

    def __init__(self, f: SetFunction, c: CostVector):
        if len(c) != f.n:
            raise ValueError(f"cost vector has {len(c)} entries for n={f.n}")
        self.values = f.values
        self.costs = linear_table(c, f.n)
        self.size = 1 << f.n
        self.queries = 0

    def best_response(self, alpha: Fraction) -> Bundle:
        self.queries += 1
        values, costs = self.values, self.costs
        best_w = 0
        best_u = alpha * values[0] - costs[0]
        best_v = values[0]
        for word in range(1, self.size):
            u = alpha * values[word] - costs[word]
            if u > best_u or (u == best_u and values[word] > best_v):
                best_u, best_v, best_w = u, values[word], word
        return best_w

    def utility(self, alpha: Fraction, word: Bundle) -> Fraction:
        return alpha * self.values[word] - self.costs[word]


def best_response(f: SetFunction, c: CostVector, alpha) -> Bundle:
    """argmax of the agent's utility at contract alpha, ties favoring the
    principal (max f) and then the lowest bundle word.

    At alpha = 0 this is the cheapest bundle with the same principal-favoring
    tie rule; at alpha = 1 the rule reduces to the largest f among ties.
    """
    return _Env(f, c).best_response(Fraction(alpha))


def _enumerate_criticals(env: _Env) -> tuple[list[CriticalPoint], Bundle]:
    """Breakpoints of the upper envelope by interval bisection.

    Between endpoints whose best responses differ, the two lines cross at a
    unique alpha; if no bundle beats the crossing value there, the crossing
    is a breakpoint, otherwise the interval splits around the better
    response.  Each call costs one best-response query.
    """
    zero = Fraction(0)
    lo_set = env.best_response(zero)
    hi_set = env.best_response(Fraction(1))
    out: list[CriticalPoint] = []

    def solve(s_lo: Bundle, s_hi: Bundle) -> None:
        if s_lo == s_hi:
            return
        df = env.values[s_hi] - env.values[s_lo]
        if df == 0:  # identical utility lines collapse under the tie rule
            return
        alpha = (env.costs[s_hi] - env.costs[s_lo]) / df
        tie_utility = env.utility(alpha, s_lo)
        s_mid = env.best_response(alpha)
        if env.utility(alpha, s_mid) == tie_utility:
            out.append(CriticalPoint(alpha, s_lo, s_hi, tie_utility))
        else:
            solve(s_lo, s_mid)
            solve(s_mid, s_hi)

    solve(lo_set, hi_set)
    return out, lo_set


def critical_values(f: SetFunction, c: CostVector) -> list[CriticalPoint]:
    """All alphas in (0, 1] where the best response changes, ascending."""
    return _enumerate_criticals(_Env(f, c))[0]


def optimal_contract(f: SetFunction, c: CostVector) -> ContractSolution:
    """Best (alpha, bundle) for the principal.

    The principal's utility (1 - alpha) * f(S_alpha) is decreasing between
    breakpoints, so only the breakpoints themselves plus the alpha = 0
    boundary can be optimal.  At a breakpoint the agent's tie rule hands the
    principal the incoming bundle.  Exact ties across alphas resolve to the
    lowest alpha.
    """
    env = _Env(f, c)
    criticals, br_zero = _enumerate_criticals(env)
    candidates: list[tuple[Fraction, Bundle]] = [(Fraction(0), br_zero)]
    candidates += [(cp.alpha, cp.set_after) for cp in criticals]
    best_alpha, best_bundle = candidates[0]
    best_up = (1 - best_alpha) * env.values[best_bundle]
    for alpha, bundle in candidates[1:]:
        up = (1 - alpha) * env.values[bundle]
        if up > best_up:
            best_alpha, best_bundle, best_up = alpha, bundle, up
    return ContractSolution(
        alpha_star=best_alpha,
        bundle=best_bundle,
        principal_utility=best_up,
        agent_utility=env.utility(best_alpha, best_bundle),
        criticals=tuple(criticals),
        best_response_queries=env.queries,
    )


# ---------------------------------------------------------------------------
# potential audit

@dataclass(frozen=True)
class AuditReport:
    """Structural checks along the critical sequence.

    Violations are findings, not failures: each one falsifies a premise
    (all-substitutes-and-complements structure or a facet-piercing cost
    vector) rather than the enumeration itself.
    """

    ok: bool
    violations: tuple[str, ...]
    criticals: tuple[CriticalPoint, ...]
    relabeling: tuple[int, ...]        # relabeling[i] = cost rank of item i+1
    phi_sequence: tuple[int, ...]
    cost_sequence: tuple[Fraction, ...]
    value_sequence: tuple[Fraction, ...]
    bound: int
    duplicate_costs: bool


def _phi(word: Bundle, rank: list[int]) -> int:
    total = 0
    i = 0
    while word:
        if word & 1:
            total += rank[i]
        word >>= 1
        i += 1
    return total


def audit_potential(f: SetFunction, c: CostVector) -> AuditReport:
    """Walk the criticals and check the monotonicity package.

    (a) best-response cost never decreases, (b) best-response value never
    decreases, (c) the rank potential (sum of cost-sorted item ranks) rises
    strictly across every critical, (d) the critical count stays within
    n(n+1)/2.  The first offending critical per check is reported with its
    alpha and both bundles.
    """
    n = f.n
    order = sorted(range(n), key=lambda i: (c[i], i))
    rank = [0] * n
    for position, item in enumerate(order):
        rank[item] = position + 1
    duplicate_costs = any(
        c[order[k]] == c[order[k + 1]] for k in range(n - 1)
    )

    env = _Env(f, c)
    criticals, _ = _enumerate_criticals(env)
    if criticals:
        chain = [criticals[0].set_before] + [cp.set_after for cp in criticals]
    else:
        chain = [env.best_response(Fraction(1))]

    costs = tuple(env.costs[w] for w in chain)
    values = tuple(env.values[w] for w in chain)
    phis = tuple(_phi(w, rank) for w in chain)
    bound = n * (n + 1) // 2

    violations = []

    def describe(k: int) -> str:
        cp = criticals[k]
        return f"critical #{k} at alpha={cp.alpha} ({cp.set_before} -> {cp.set_after})"

    for k in range(len(chain) - 1):
        if costs[k + 1] < costs[k]:
            violations.append(
                f"cost decreased across {describe(k)}: {costs[k]} -> {costs[k + 1]}"
            )
            break
    for k in range(len(chain) - 1):
        if values[k + 1] < values[k]:
            violations.append(
                f"value decreased across {describe(k)}: {values[k]} -> {values[k + 1]}"
            )
            break
    for k in range(len(chain) - 1):
        if phis[k + 1] <= phis[k]:
            violations.append(
                f"potential did not rise across {describe(k)}: {phis[k]} -> {phis[k + 1]}"
            )
            break
    if len(criticals) > bound:
        violations.append(
            f"critical count {len(criticals)} exceeds the bound {bound} = n(n+1)/2"
        )

    return AuditReport(
        ok=not violations,
        violations=tuple(violations),
        criticals=tuple(criticals),
        relabeling=tuple(rank),
        phi_sequence=phis,
        cost_sequence=costs,
        value_sequence=values,
        bound=bound,
        duplicate_costs=duplicate_costs,
    )


# ---------------------------------------------------------------------------
# envelope extraction (for reporting and figures)

@dataclass(frozen=True)
class EnvelopePiece:
    alpha_lo: Fraction
    alpha_hi: Fraction
    bundle: Bundle
    slope: Fraction       # f(S)
    intercept: Fraction   # -c(S)


def upper_envelope(f: SetFunction, c: CostVector) -> list[EnvelopePiece]:
    """The agent's utility envelope over [0, 1] as maximal linear pieces."""
    env = _Env(f, c)
    criticals, _ = _enumerate_criticals(env)
    if criticals:
        chain = [criticals[0].set_before] + [cp.set_after for cp in criticals]
    else:
        chain = [env.best_response(Fraction(1))]
    breaks = [Fraction(0)] + [cp.alpha for cp in criticals] + [Fraction(1)]
    pieces = []
    for k, bundle in enumerate(chain):
        lo, hi = breaks[k], breaks[k + 1]
        if lo == hi:  # a critical exactly at alpha = 1 leaves a zero-width tail
            continue
        pieces.append(EnvelopePiece(lo, hi, bundle, env.values[bundle], -env.costs[bundle]))
    return pieces
