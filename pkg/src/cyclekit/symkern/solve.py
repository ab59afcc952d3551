"""Exact linear systems and quadratics over Expr scalars.

Pivot selection is driven by the three-valued zero test: certainly nonzero
entries are preferred, entries of unknown status are only used when nothing
better exists in their column (each such use is reported as a case split,
since it silently assumes the generic nonzero case).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import Degenerate, DivisionByZero, DivisionUnknown, Inconsistent, PivotUnknown
from .expr import Expr, Tower, Trit, div_assume_nonzero


@dataclass
class LinearSolution:
    particular: list[Expr]
    nullspace: list[list[Expr]]
    case_splits: list[Expr] = field(default_factory=list)
    residual_unknowns: list[Expr] = field(default_factory=list)


def solve_linear(rows: list[list[Expr]], rhs: list[Expr], *,
                 strict: bool = False) -> LinearSolution:
    """Gaussian elimination; returns a particular solution and a nullspace
    basis such that every solution is particular + span(nullspace).

    Raises Inconsistent on a certified contradiction.  A row reducing to
    0 = (unknown-status expr) is kept in residual_unknowns for the caller.
    With strict=True an unavoidable unknown pivot raises PivotUnknown
    instead of being recorded as a case split.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    for row in aug:
        if len(row) != n + 1:
            raise ValueError("ragged matrix")

    case_splits: list[Expr] = []
    pivot_cols: list[int] = []
    state = {"r": 0}

    def eliminate_with(col: int, i: int, normalized: list[Expr]) -> None:
        r = state["r"]
        aug[r], aug[i] = aug[i], aug[r]
        aug[r] = normalized
        for j in range(m):
            if j == r:
                continue
            factor = aug[j][col]
            if factor.is_zero():
                continue
            aug[j] = [a - factor * b for a, b in zip(aug[j], aug[r])]
        pivot_cols.append(col)
        state["r"] = r + 1

    def try_column(col: int, allow_unknown: bool) -> bool:
        r = state["r"]
        unknown_rows = []
        for i in range(r, m):
            zt = aug[i][col].zero_test()
            if zt is Trit.NONZERO:
                eliminate_with(col, i, [e / aug[i][col] for e in aug[i]])
                return True
            if zt is Trit.UNKNOWN:
                unknown_rows.append(i)
        if not allow_unknown:
            return False
        for i in unknown_rows:
            pivot = aug[i][col]
            try:
                # may expose the pivot as a disguised zero while
                # rationalizing, in which case the row is unusable
                normalized = [div_assume_nonzero(e, pivot) for e in aug[i]]
            except (DivisionByZero, DivisionUnknown):
                continue
            case_splits.append(pivot)
            eliminate_with(col, i, normalized)
            return True
        return False

    # certified pivots first, wherever they sit; unknown-status pivots are
    # a last resort and carry an explicit nonzero assumption
    for col in range(n):
        if state["r"] >= m:
            break
        try_column(col, allow_unknown=False)
    for col in range(n):
        if state["r"] >= m:
            break
        if col in pivot_cols:
            continue
        if try_column(col, allow_unknown=False):
            continue  # earlier eliminations can settle a status
        if any(aug[i][col].zero_test() is Trit.UNKNOWN
               for i in range(state["r"], m)):
            if strict:
                raise PivotUnknown(f"column {col} offers only unknown-status pivots")
            try_column(col, allow_unknown=True)
    r = state["r"]

    particular = [Expr.zero()] * n
    for row_idx, col in enumerate(pivot_cols):
        particular[col] = aug[row_idx][n]

    free_cols = [c for c in range(n) if c not in pivot_cols]
    nullspace: list[list[Expr]] = []
    for fc in free_cols:
        vec = [Expr.zero()] * n
        vec[fc] = Expr.from_fraction(1)
        for row_idx, col in enumerate(pivot_cols):
            vec[col] = -aug[row_idx][fc]
        nullspace.append(vec)

    residual_unknowns: list[Expr] = []
    for i in range(r, m):
        if all(aug[i][c].is_zero() for c in range(n)):
            tail = aug[i][n]
            zt = tail.zero_test()
            if zt is Trit.NONZERO:
                raise Inconsistent("0 = nonzero row after elimination")
            if zt is Trit.UNKNOWN:
                residual_unknowns.append(tail)
            continue
        # the row kept unknown-status coefficients no pivot could use;
        # report the residual at the particular solution for re-checking
        plugged = aug[i][n]
        for c in range(n):
            plugged = plugged - aug[i][c] * particular[c]
        if not plugged.is_zero():
            residual_unknowns.append(plugged)

    return LinearSolution(particular, nullspace, case_splits, residual_unknowns)


def solve_quadratic(a: Expr, b: Expr, c: Expr, tower: Tower) -> list[Expr]:
    """Roots of a*x^2 + b*x + c = 0, exact, adjoining the discriminant root.

    Returns roots in deterministic order (the +sqrt branch first).  A zero
    discriminant yields a single repeated root; a = 0 degrades to the linear
    case; a = b = 0 with c nonzero raises Degenerate.
    """
    za = a.zero_test()
    if za is Trit.ZERO:
        zb = b.zero_test()
        if zb is Trit.ZERO:
            if c.zero_test() is Trit.ZERO:
                raise ValueError("0 = 0 is not an equation in one unknown")
            raise Degenerate("no unknown left but a nonzero constant")
        return [-c / b]
    disc = b * b - 4 * a * c
    if disc.zero_test() is Trit.ZERO:
        return [-b / (2 * a)]
    root = tower.adjoin_sqrt(disc)
    twice_a = 2 * a
    return [(-b + root) / twice_a, (-b - root) / twice_a]
