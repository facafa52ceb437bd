"""Exact-rational linear programming by two-phase simplex with Bland's rule.

Small and self-contained on purpose: the geometry layer needs certified
strict-feasibility answers, so every pivot is carried out in exact rational
arithmetic and Bland's anti-cycling rule guarantees termination.  Variables
are free (split internally into positive and negative parts).

gmpy2's mpq is used for tableau entries when available; it is exact rational
arithmetic either way, only faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

OPTIMAL = "optimal"
FEASIBLE = "feasible"  # early-stopped at a feasible point above the target
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    objective: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None


def _to_q(x):
    f = Fraction(x)
    return _Q(f.numerator, f.denominator)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class _Simplex:
    def __init__(self, rows, basis, ncols):
        self.rows = rows    # each row: ncols coefficients then the rhs
        self.basis = basis  # basic column per row
        self.ncols = ncols

    def pivot(self, r, c, cost):
        row = self.rows[r]
        inv = 1 / row[c]
        if inv != 1:
            row = [x * inv for x in row]
            self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                factor = other[c]
                self.rows[i] = [a - factor * b for a, b in zip(other, row)]
        if cost[c]:
            factor = cost[c]
            for j in range(self.ncols + 1):
                cost[j] -= factor * row[j]
        self.basis[r] = c

    def reduce_cost(self, cost):
        for i, b in enumerate(self.basis):
            if cost[b]:
                factor = cost[b]
                row = self.rows[i]
                for j in range(self.ncols + 1):
                    cost[j] -= factor * row[j]

    def step(self, cost, allowed):
        """One Bland step; returns "go", OPTIMAL, or UNBOUNDED."""
        enter = -1
        for j in range(self.ncols):
            if allowed[j] and cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best = None
        for i, row in enumerate(self.rows):
            a = row[enter]
            if a > 0:
                ratio = row[self.ncols] / a
                if best is None or ratio < best or (
                    ratio == best and self.basis[i] < self.basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        self.pivot(leave, enter, cost)
        return "go"

    def run(self, cost, allowed):
        self.reduce_cost(cost)
        while True:
            outcome = self.step(cost, allowed)
            if outcome != "go":
                return outcome


def maximize(
    objective: Sequence,
    eq: Sequence[tuple[Sequence, object]] = (),
    ub: Sequence[tuple[Sequence, object]] = (),
    early_stop_above=None,
) -> LPResult:
    """Maximize objective . x over free x subject to eq and ub constraints.

    eq rows are (coeffs, rhs) with coeffs . x == rhs; ub rows bound
    coeffs . x <= rhs.  With ``early_stop_above`` set, iteration stops at the
    first feasible basic solution whose objective exceeds it (status
    "feasible"), which is all a strict-feasibility caller needs.
    """
    nv = len(objective)
    obj = [_to_q(x) for x in objective]
    zero = _to_q(0)
    one = _to_q(1)

    nslack = len(ub)
    ncols = 2 * nv + nslack

    rows = []
    basis = []
    specs = [(coeffs, rhs, None) for coeffs, rhs in eq]
    specs += [(coeffs, rhs, k) for k, (coeffs, rhs) in enumerate(ub)]
    for coeffs, rhs, slack_idx in specs:
        if len(coeffs) != nv:
            raise ValueError("constraint arity mismatch")
        row = [zero] * (ncols + 1)
        for j, a in enumerate(coeffs):
            q = _to_q(a)
            row[j] = q
            row[nv + j] = -q
        if slack_idx is not None:
            row[2 * nv + slack_idx] = one
        row[ncols] = _to_q(rhs)
        if row[ncols] < 0:
            row = [-x for x in row]
            slack_idx = None  # flipped slack is -1, unusable as a starting basis
        basis.append(2 * nv + slack_idx if slack_idx is not None else -1)
        rows.append(row)

    art_rows = [i for i, b in enumerate(basis) if b == -1]
    nart = len(art_rows)
    total = ncols + nart
    for i in range(len(rows)):
        rhs = rows[i][ncols]
        rows[i] = rows[i][:ncols] + [zero] * nart + [rhs]
    for k, i in enumerate(art_rows):
        rows[i][ncols + k] = one
        basis[i] = ncols + k

    tab = _Simplex(rows, basis, total)
    allowed = [True] * ncols + [False] * nart  # artificials never re-enter

    if nart:
        phase1 = [zero] * (total + 1)
        for c in range(ncols, total):
            phase1[c] = one
        outcome = tab.run(phase1, allowed)
        # phase-1 objective value is -rhs of the reduced cost row
        if outcome == UNBOUNDED or -phase1[total] > 0:
            return LPResult(INFEASIBLE)
        drop = []
        for i in range(len(tab.rows)):
            if tab.basis[i] >= ncols:
                row = tab.rows[i]
                enter = next((j for j in range(ncols) if row[j] != 0), None)
                if enter is None:
                    drop.append(i)  # redundant row
                else:
                    tab.pivot(i, enter, phase1)
        for i in reversed(drop):
            del tab.rows[i]
            del tab.basis[i]

    def current():
        values = {b: tab.rows[i][tab.ncols] for i, b in enumerate(tab.basis)}
        x = [values.get(j, zero) - values.get(nv + j, zero) for j in range(nv)]
        val = zero
        for cj, xj in zip(obj, x):
            val += cj * xj
        return val, tuple(_to_fraction(v) for v in x)

    cost = [zero] * (total + 1)
    for j in range(nv):
        cost[j] = -obj[j]
        cost[nv + j] = obj[j]
    tab.reduce_cost(cost)

    target = None if early_stop_above is None else _to_q(early_stop_above)
    while True:
        if target is not None:
            val, x = current()
            if val > target:
                return LPResult(FEASIBLE, _to_fraction(val), x)
        outcome = tab.step(cost, allowed)
        if outcome == OPTIMAL:
            val, x = current()
            return LPResult(OPTIMAL, _to_fraction(val), x)
        if outcome == UNBOUNDED:
            return LPResult(UNBOUNDED)
