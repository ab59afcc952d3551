"""Reduction of a node's defining relations to exact solves.

The unknown cycle X = (k, lx, ly, m) enters every supported relation
linearly once tangency-like conditions borrow an auxiliary unknown t
tied by the single quadratic t^2 = <X,X>.  Each tangency-like relation
carries a sign slot; enumerating sign vectors and quadratic roots yields
the branch instances, which are then re-verified, filtered for reality
if requested, and deduplicated projectively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..cycle import Cycle, Metric, inner, same_locus, tangency_defect
from ..errors import (
    Degenerate,
    DivisionByZero,
    DivisionUnknown,
    Inconsistent,
    SolverInternalError,
    UnsatisfiableRelations,
    UnsupportedKind,
    ZeroCycle,
)
from ..symkern import Expr, Tower, Trit, as_expr, solve_linear, solve_quadratic

SELF = "SELF"

ORTHOGONAL = "orthogonal"
TANGENT = "tangent"
SELF_ORTHOGONAL = "self_orthogonal"
PASSES_INFINITY = "passes_infinity"
STEINER_POWER = "steiner_power"
ANGLE_COS_SQ = "angle_cos_sq"
ONLY_REALS = "only_reals"

RELATION_KINDS = (
    ORTHOGONAL,
    TANGENT,
    SELF_ORTHOGONAL,
    PASSES_INFINITY,
    STEINER_POWER,
    ANGLE_COS_SQ,
    ONLY_REALS,
)

_VALUED = (STEINER_POWER, ANGLE_COS_SQ)
_TARGETED = (ORTHOGONAL, TANGENT, STEINER_POWER, ANGLE_COS_SQ)


@dataclass(frozen=True)
class Relation:
    kind: str
    target: str = SELF
    value: Expr | None = None

    def __post_init__(self):
        if self.kind not in RELATION_KINDS:
            raise UnsupportedKind(f"relation kind {self.kind!r}")
        if self.kind in (SELF_ORTHOGONAL, ONLY_REALS) and self.target != SELF:
            raise ValueError(f"{self.kind} always applies to the node itself")
        if self.kind in _VALUED and self.value is None:
            raise ValueError(f"{self.kind} needs a value")
        if self.kind in _TARGETED and self.target == SELF:
            raise ValueError(f"{self.kind} needs a target node")

    def dedupe_key(self):
        return (self.kind, self.target, self.value.key() if self.value else None)


@dataclass
class SolveOutcome:
    instances: list[Cycle] = field(default_factory=list)
    free_params: list[str] = field(default_factory=list)
    reality_conditions: list[Expr] = field(default_factory=list)
    pending: bool = False


def _pairing_row(c: Cycle, sigma_cycle: int) -> list[Expr]:
    """Coefficients of <X, c> as a linear form in (k, lx, ly, m)."""
    return [-c.m, 2 * c.l[0], -2 * sigma_cycle * c.l[1], -c.k]


def _self_pairing(x: list[Expr], sigma_cycle: int) -> Expr:
    k, lx, ly, m = x
    return 2 * (lx * lx - sigma_cycle * ly * ly) - 2 * k * m


def dedupe_relations(relations) -> list[Relation]:
    seen = set()
    rels: list[Relation] = []
    for r in relations:
        dk = r.dedupe_key()
        if dk not in seen:
            seen.add(dk)
            rels.append(r)
    return rels


def solve_relations(relations: list[Relation], label: str, metric: Metric,
                    tower: Tower, instances_of, infty: Cycle) -> SolveOutcome:
    """Solve for all branches of a relation-defined node.

    ``instances_of`` maps a target key to its current instance list.
    Raises UnsatisfiableRelations when no branch survives.
    """
    rels = dedupe_relations(relations)

    only_reals = any(r.kind == ONLY_REALS for r in rels)
    self_orth = any(r.kind == SELF_ORTHOGONAL for r in rels)
    sign_rels = [r for r in rels if r.kind in (TANGENT, ANGLE_COS_SQ)]
    needs_gauge_k = any(r.kind in _VALUED for r in rels)
    use_t = bool(sign_rels)

    combo_keys: list[str] = []
    for r in rels:
        if r.kind in _TARGETED and r.target not in combo_keys:
            combo_keys.append(r.target)

    outcome = SolveOutcome()
    introduced: set[str] = set()

    combo_lists = [instances_of(k) for k in combo_keys]
    for combo in product(*combo_lists) if combo_lists else [()]:
        chosen = dict(zip(combo_keys, combo))
        for signs in product((1, -1), repeat=len(sign_rels)):
            try:
                branch = _solve_branch(rels, chosen, signs, label, metric,
                                       tower, infty, self_orth, use_t,
                                       needs_gauge_k)
            except (Inconsistent, Degenerate):
                continue
            if branch is None:
                continue
            xs, params, pending = branch
            outcome.pending = outcome.pending or pending
            introduced.update(params)
            for x in xs:
                _admit_instance(outcome, x, rels, chosen, infty, metric,
                                only_reals)

    if not outcome.instances:
        raise UnsatisfiableRelations(
            f"no instance satisfies the relations of {label!r}")

    used: set[str] = set()
    for c in outcome.instances:
        used |= c.param_names()
    for e in outcome.reality_conditions:
        used |= e.param_names()
    outcome.free_params = sorted(introduced & used)

    _rename_single_param(outcome, label)
    return outcome


def _solve_branch(rels, chosen, signs, label, metric, tower, infty,
                  self_orth, use_t, needs_gauge_k):
    """One sign-vector branch: linear solve, gauge, quadratic, instances."""
    sc = metric.sigma_cycle
    width = 5 if use_t else 4
    rows: list[list[Expr]] = []
    rhs: list[Expr] = []
    sign_iter = iter(signs)

    def add_row(coeffs4, t_coeff=None):
        row = [as_expr(v) for v in coeffs4]
        if use_t:
            row.append(as_expr(t_coeff) if t_coeff is not None else Expr.zero())
        rows.append(row)
        rhs.append(Expr.zero())

    for r in rels:
        if r.kind == ORTHOGONAL:
            add_row(_pairing_row(chosen[r.target], sc))
        elif r.kind == PASSES_INFINITY:
            add_row(_pairing_row(infty, sc))
        elif r.kind == STEINER_POWER:
            c = chosen[r.target]
            row = _pairing_row(c, sc)
            row[0] = row[0] + r.value * c.k
            add_row(row)
        elif r.kind in (TANGENT, ANGLE_COS_SQ):
            c = chosen[r.target]
            eps = next(sign_iter)
            norm = inner(c, c)
            if r.kind == ANGLE_COS_SQ:
                norm = norm * r.value
            root = tower.adjoin_sqrt(norm)
            add_row(_pairing_row(c, sc), t_coeff=(-eps) * root)
        elif r.kind == SELF_ORTHOGONAL and use_t:
            add_row([Expr.zero()] * 4, t_coeff=Expr.from_fraction(1))

    sol = _solve_with_gauge(rows, rhs, width, needs_gauge_k)
    if sol is None:
        return None
    pending = bool(sol.case_splits) or bool(sol.residual_unknowns)

    # general solution as expressions in fresh branch parameters
    params = [f"u_{label}_{i + 1}" for i in range(len(sol.nullspace))]
    coords = list(sol.particular)
    for name, direction in zip(params, sol.nullspace):
        p = Expr.parameter(name)
        coords = [c + p * d for c, d in zip(coords, direction)]

    quad = None
    if use_t:
        quad = coords[4] * coords[4] - _self_pairing(coords[:4], sc)
    elif self_orth:
        quad = _self_pairing(coords[:4], sc)

    if quad is None or quad.is_zero():
        return [coords[:4]], params, pending

    present = [p for p in params if p in quad.param_names()]
    if not present:
        zt = quad.zero_test()
        if zt is Trit.NONZERO:
            return None  # this branch contradicts the quadratic
        return [coords[:4]], params, pending or zt is Trit.UNKNOWN

    pick, powers = _pick_quadratic_param(quad, present)
    if pick is None:
        # no parameter admits an exact solve; drop the branch but flag it
        return [], [], True
    try:
        roots = solve_quadratic(powers[2], powers[1], powers[0], tower)
    except (DivisionByZero, DivisionUnknown):
        return [], [], True
    leftover = [p for p in params if p != pick]
    xs = [[c.substitute(pick, root) for c in coords[:4]] for root in roots]
    return xs, leftover, pending


def _solve_with_gauge(rows, rhs, width, needs_gauge_k):
    """Fix the projective scale: valued relations pin k = 1, otherwise the
    first coordinate free to move along the homogeneous solution space is
    pinned to 1."""
    def with_gauge(col):
        gauge = [Expr.zero()] * width
        gauge[col] = Expr.from_fraction(1)
        return solve_linear(rows + [gauge], rhs + [Expr.from_fraction(1)])

    if needs_gauge_k:
        return with_gauge(0)  # Inconsistent propagates: k forced to 0

    if rows:
        hom = solve_linear(rows, rhs)
        nullspace = hom.nullspace
    else:
        nullspace = [[Expr.zero()] * width for _ in range(width)]
        for i in range(width):
            nullspace[i][i] = Expr.from_fraction(1)
    if not nullspace:
        return None  # homogeneous system admits only the zero cycle

    certified: list[int] = []
    unknown: list[int] = []
    for col in range(4):
        statuses = [vec[col].zero_test() for vec in nullspace]
        if any(s is Trit.NONZERO for s in statuses):
            certified.append(col)
        elif any(s is Trit.UNKNOWN for s in statuses):
            unknown.append(col)
    if certified:
        return with_gauge(certified[0])
    for col in unknown:
        try:
            return with_gauge(col)
        except Inconsistent:
            continue
    return None  # only the t direction is free: no visible cycle


def _pick_quadratic_param(quad: Expr, present: list[str]):
    """Choose the parameter the quadratic is solved for: prefer the last
    one with a certified quadratic term, then the last with a certified
    linear term, then anything not syntactically degenerate."""
    collected = {}
    for p in reversed(present):
        try:
            powers = quad.collect_powers(p, 2)
        except ValueError:
            continue
        collected[p] = powers
        if powers[2].zero_test() is Trit.NONZERO:
            return p, powers
    for p in reversed(present):
        if p in collected:
            powers = collected[p]
            if powers[2].is_zero() and powers[1].zero_test() is Trit.NONZERO:
                return p, powers
    for p in reversed(present):
        if p in collected:
            powers = collected[p]
            if not (powers[2].is_zero() and powers[1].is_zero()):
                return p, powers
    return None, None


def _admit_instance(outcome: SolveOutcome, coords, rels, chosen, infty,
                    metric, only_reals) -> None:
    try:
        cand = Cycle(coords[0], (coords[1], coords[2]), coords[3], metric)
    except ZeroCycle:
        return

    if only_reals and not _is_real(cand, outcome):
        return

    status = _verify_instance(cand, rels, chosen, infty)
    if status is Trit.NONZERO:
        raise SolverInternalError("solved instance fails its own relation")
    if status is Trit.UNKNOWN:
        outcome.pending = True

    for kept in outcome.instances:
        if same_locus(kept, cand) is Trit.ZERO:
            return
    outcome.instances.append(cand)


def _is_real(cand: Cycle, outcome: SolveOutcome) -> bool:
    """Certified-negative constant radicands kill the instance; radicands
    still containing parameters survive as recorded reality conditions."""
    parametric = []
    for coeff in cand.coefficients():
        for atom in coeff.atoms(recursive=True):
            rad = atom.radicand
            if rad.param_names():
                parametric.append(rad)
            elif rad.certified_sign() == -1:
                return False
    for rad in parametric:
        if not any(rad.key() == kept.key()
                   for kept in outcome.reality_conditions):
            outcome.reality_conditions.append(rad)
    return True


def _verify_instance(cand: Cycle, rels, chosen, infty) -> Trit:
    worst = Trit.ZERO
    for r in rels:
        if r.kind == ONLY_REALS:
            continue
        if r.kind == ORTHOGONAL:
            residual = inner(cand, chosen[r.target])
        elif r.kind == PASSES_INFINITY:
            residual = inner(cand, infty)
        elif r.kind == SELF_ORTHOGONAL:
            residual = inner(cand, cand)
        elif r.kind == TANGENT:
            residual = tangency_defect(cand, chosen[r.target])
        elif r.kind == STEINER_POWER:
            c = chosen[r.target]
            residual = inner(cand, c) + r.value * c.k * cand.k
        elif r.kind == ANGLE_COS_SQ:
            c = chosen[r.target]
            ab = inner(cand, c)
            residual = ab * ab - r.value * inner(c, c) * inner(cand, cand)
        else:
            continue
        zt = residual.zero_test()
        if zt is Trit.NONZERO:
            return Trit.NONZERO
        if zt is Trit.UNKNOWN:
            worst = Trit.UNKNOWN
    return worst


def _rename_single_param(outcome: SolveOutcome, label: str) -> None:
    """A lone leftover parameter gets the friendlier unindexed name."""
    if len(outcome.free_params) != 1:
        return
    old = outcome.free_params[0]
    new = f"u_{label}"
    if old == new:
        return
    fresh = Expr.parameter(new)
    outcome.free_params = [new]
    outcome.instances = [c.substitute(old, fresh) for c in outcome.instances]
    outcome.reality_conditions = [
        e.substitute(old, fresh) for e in outcome.reality_conditions
    ]
