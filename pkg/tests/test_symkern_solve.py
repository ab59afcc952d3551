"""Exact linear and quadratic solving over the expression field."""

import random
from fractions import Fraction

import pytest

from cyclekit.symkern import Expr, Tower, Trit, solve_linear, solve_quadratic
from cyclekit.errors import Degenerate, Inconsistent, PivotUnknown


def F(n, d=1):
    return Fraction(n, d)


def as_exprs(rows):
    return [[Expr.from_fraction(F(x)) for x in row] for row in rows]


def vec(xs):
    return [Expr.from_fraction(F(x)) for x in xs]


def check_solves(rows, rhs, sol):
    """Particular solution and every nullspace vector satisfy the system."""
    for row, b in zip(rows, rhs):
        acc = Expr.zero()
        for a, x in zip(row, sol.particular):
            acc = acc + a * x
        assert (acc - b).is_zero()
        for null in sol.nullspace:
            acc = Expr.zero()
            for a, x in zip(row, null):
                acc = acc + a * x
            assert acc.is_zero()


# ------------------------------------------------------------- linear


def test_diagonal_system():
    rows = as_exprs([[2, 0], [0, 3]])
    rhs = vec([4, 9])
    sol = solve_linear(rows, rhs)
    assert (sol.particular[0] - 2).is_zero()
    assert (sol.particular[1] - 3).is_zero()
    assert sol.nullspace == []
    assert sol.case_splits == []


def test_underdetermined_has_nullspace():
    rows = as_exprs([[1, 1]])
    rhs = vec([2])
    sol = solve_linear(rows, rhs)
    assert len(sol.nullspace) == 1
    check_solves(rows, rhs, sol)


def test_inconsistent_system():
    rows = as_exprs([[1], [1]])
    rhs = vec([1, 2])
    with pytest.raises(Inconsistent):
        solve_linear(rows, rhs)


def test_zero_rows_are_dropped():
    rows = as_exprs([[0, 0], [1, 2]])
    rhs = vec([0, 3])
    sol = solve_linear(rows, rhs)
    check_solves(rows, rhs, sol)


def test_random_square_systems():
    rng = random.Random(314)
    tower = Tower()
    s2 = tower.adjoin_sqrt(2)
    for _ in range(40):
        n = rng.randint(1, 4)
        rows = [[Expr.from_fraction(F(rng.randint(-5, 5)))
                 + (s2 if rng.random() < 0.3 else Expr.zero())
                 for _ in range(n)] for _ in range(n)]
        rhs = [Expr.from_fraction(F(rng.randint(-5, 5))) for _ in range(n)]
        try:
            sol = solve_linear(rows, rhs)
        except Inconsistent:
            continue
        check_solves(rows, rhs, sol)


def test_random_rectangular_systems():
    rng = random.Random(271)
    for _ in range(40):
        n_eq, n_var = rng.randint(1, 3), rng.randint(1, 4)
        rows = as_exprs([[rng.randint(-4, 4) for _ in range(n_var)]
                         for _ in range(n_eq)])
        rhs = vec([rng.randint(-4, 4) for _ in range(n_eq)])
        try:
            sol = solve_linear(rows, rhs)
        except Inconsistent:
            continue
        check_solves(rows, rhs, sol)
        # nullspace dimension matches rank defect for rational input
        assert len(sol.nullspace) >= n_var - n_eq


def unknown_nonzero(tower):
    # radicand negative at every probe point, so the test cannot certify;
    # still a perfectly good nonzero element
    u = Expr.parameter("u")
    return tower.adjoin_sqrt(u - 2_000_000)


def disguised_zero(tower):
    u = Expr.parameter("u")
    return tower.adjoin_sqrt(u) * tower.adjoin_sqrt(u + 2) - tower.adjoin_sqrt(u * u + 2 * u)


def test_unknown_pivot_is_recorded():
    tower = Tower()
    d = unknown_nonzero(tower)
    assert d.zero_test() is Trit.UNKNOWN
    rows = [[d]]
    rhs = [Expr.from_fraction(F(1))]
    sol = solve_linear(rows, rhs)
    assert len(sol.case_splits) == 1
    assert sol.case_splits[0].key() == d.key()
    check_solves(rows, rhs, sol)


def test_unknown_pivot_strict_mode():
    tower = Tower()
    rows = [[unknown_nonzero(tower)]]
    with pytest.raises(PivotUnknown):
        solve_linear(rows, [Expr.from_fraction(F(1))], strict=True)


def test_nonzero_pivot_preferred_over_unknown():
    tower = Tower()
    d = unknown_nonzero(tower)
    # second column is certainly invertible; the solver must not split
    rows = [[d, Expr.from_fraction(F(2))]]
    rhs = [Expr.from_fraction(F(4))]
    sol = solve_linear(rows, rhs)
    assert sol.case_splits == []
    check_solves(rows, rhs, sol)


def test_disguised_zero_pivot_is_never_divided():
    # rationalizing 1/d collapses the denominator, exposing d as a zero
    # divisor; the solver must leave the row unsolved instead of assuming
    tower = Tower()
    d = disguised_zero(tower)
    assert d.zero_test() is Trit.UNKNOWN
    sol = solve_linear([[d]], [Expr.from_fraction(F(1))])
    assert sol.case_splits == []
    assert len(sol.residual_unknowns) == 1


# ----------------------------------------------------------- quadratic


def test_quadratic_two_roots():
    tower = Tower()
    one = Expr.from_fraction(F(1))
    roots = solve_quadratic(one, Expr.zero(), Expr.from_fraction(F(-2)), tower)
    assert len(roots) == 2
    s2 = tower.adjoin_sqrt(2)
    assert (roots[0] - s2).is_zero()  # + branch first
    assert (roots[1] + s2).is_zero()


def test_quadratic_double_root():
    tower = Tower()
    one = Expr.from_fraction(F(1))
    roots = solve_quadratic(one, Expr.from_fraction(F(-2)), one, tower)
    assert len(roots) == 1
    assert (roots[0] - 1).is_zero()


def test_quadratic_linear_fallback():
    tower = Tower()
    roots = solve_quadratic(Expr.zero(), Expr.from_fraction(F(2)),
                            Expr.from_fraction(F(-6)), tower)
    assert len(roots) == 1
    assert (roots[0] - 3).is_zero()


def test_quadratic_degenerate():
    tower = Tower()
    with pytest.raises(Degenerate):
        solve_quadratic(Expr.zero(), Expr.zero(), Expr.from_fraction(F(1)), tower)


def test_quadratic_all_zero_is_rejected():
    # a vacuous 0 = 0 carries no information; callers must catch it earlier
    tower = Tower()
    with pytest.raises(ValueError):
        solve_quadratic(Expr.zero(), Expr.zero(), Expr.zero(), tower)


def test_quadratic_parametric():
    tower = Tower()
    u = Expr.parameter("u")
    roots = solve_quadratic(Expr.from_fraction(F(1)), Expr.zero(), -u, tower)
    su = tower.adjoin_sqrt(u)
    assert len(roots) == 2
    assert (roots[0] - su).is_zero()


def test_quadratic_vieta_random():
    rng = random.Random(999)
    tower = Tower()
    for _ in range(50):
        a = F(rng.randint(1, 9))
        b = F(rng.randint(-9, 9))
        c = F(rng.randint(-9, 9))
        ea, eb, ec = map(Expr.from_fraction, (a, b, c))
        roots = solve_quadratic(ea, eb, ec, tower)
        if len(roots) == 1:
            roots = [roots[0], roots[0]]
        r1, r2 = roots
        assert (r1 + r2 + eb / ea).is_zero()
        assert (r1 * r2 - ec / ea).is_zero()
        for r in (r1, r2):
            assert (ea * r * r + eb * r + ec).is_zero()
