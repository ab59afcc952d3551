"""Normal-form expressions over nested square-root extensions."""

import random
from fractions import Fraction

import pytest

from cyclekit.symkern import Expr, Tower, Trit, render_expr
from cyclekit.errors import (
    CyclicSubstitution,
    DivisionByZero,
    DivisionUnknown,
    IndeterminateSign,
    MissingAssignment,
    NegativeRadicand,
)


@pytest.fixture
def tower():
    return Tower()


def F(n, d=1):
    return Fraction(n, d)


# ------------------------------------------------------- square roots


def test_sqrt_extracts_square_part(tower):
    assert render_expr(tower.adjoin_sqrt(8)) == "2*sqrt(2)"


def test_sqrt_of_perfect_square_is_rational(tower):
    e = tower.adjoin_sqrt(9)
    assert e.is_rational() and e.rational_value() == 3


def test_sqrt_of_rational(tower):
    e = tower.adjoin_sqrt(F(9, 4))
    assert e.rational_value() == F(3, 2)
    # sqrt(1/2) = sqrt(2)/2
    assert render_expr(tower.adjoin_sqrt(F(1, 2))) == "1/2*sqrt(2)"


def test_sqrt_of_negative_keeps_sign_inside(tower):
    assert render_expr(tower.adjoin_sqrt(-4)) == "2*sqrt(-1)"


def test_sqrt_of_zero(tower):
    assert tower.adjoin_sqrt(0).is_zero()


def test_sqrt_of_polynomial_square_collapses(tower):
    u = Expr.parameter("u")
    e = tower.adjoin_sqrt(u * u + 2 * u + 1)
    assert (e - (u + 1)).is_zero()


def test_sqrt_pulls_polynomial_square_content(tower):
    u = Expr.parameter("u")
    e = tower.adjoin_sqrt(8 * u * u)
    assert (e - 2 * u * tower.adjoin_sqrt(2)).is_zero()


def test_sqrt_interning_is_stable(tower):
    a = tower.adjoin_sqrt(2)
    b = tower.adjoin_sqrt(2)
    assert a.key() == b.key()
    assert len(tower.atoms) == 1


def test_nested_radicals(tower):
    s2 = tower.adjoin_sqrt(2)
    inner = tower.adjoin_sqrt(1 + s2)
    sq = inner * inner
    assert (sq - (1 + s2)).is_zero()


# ----------------------------------------------------------- arithmetic


def test_conjugate_product_collapses(tower):
    s = tower.adjoin_sqrt(2)
    prod = (1 + s) * (1 - s)
    assert prod.is_rational() and prod.rational_value() == -1
    assert prod.zero_test() is Trit.NONZERO


def test_square_rewrites_to_radicand(tower):
    s = tower.adjoin_sqrt(3)
    assert (s * s).rational_value() == 3
    assert (s ** 4).rational_value() == 9


def test_division_rationalizes(tower):
    s = tower.adjoin_sqrt(2)
    q = (s + 1) / (s - 1)
    assert (q - (3 + 2 * s)).is_zero()


def test_division_by_syntactic_zero(tower):
    s = tower.adjoin_sqrt(2)
    with pytest.raises(DivisionByZero):
        s / Expr.zero()


def test_division_by_unknown_quantity(tower):
    u = Expr.parameter("u")
    a = tower.adjoin_sqrt(u) * tower.adjoin_sqrt(u + 2)
    b = tower.adjoin_sqrt(u * u + 2 * u)
    d = a - b  # zero in truth, but not syntactically
    assert d.zero_test() is Trit.UNKNOWN
    with pytest.raises(DivisionUnknown):
        (u + 1) / d


def test_field_axioms_at_random(tower):
    rng = random.Random(2024)
    s2 = tower.adjoin_sqrt(2)
    s3 = tower.adjoin_sqrt(3)
    u = Expr.parameter("u")
    su = tower.adjoin_sqrt(u)

    def rand_expr(depth=2):
        pick = rng.randint(0, 5)
        if depth == 0 or pick == 0:
            return Expr.from_fraction(F(rng.randint(-9, 9), rng.randint(1, 5)))
        if pick == 1:
            return rng.choice([s2, s3, su, u])
        a, b = rand_expr(depth - 1), rand_expr(depth - 1)
        return a + b if pick in (2, 3) else a * b

    for _ in range(120):
        a, b, c = rand_expr(), rand_expr(), rand_expr()
        assert ((a + b) + c - (a + (b + c))).is_zero()
        assert ((a + b) - (b + a)).is_zero()
        assert (a * (b + c) - (a * b + a * c)).is_zero()
        assert ((a * b) * c - (a * (b * c))).is_zero()
        assert (a - a).is_zero()
        if b.zero_test() is Trit.NONZERO:
            assert ((a / b) * b - a).is_zero()


def test_conjugate_identity_random(tower):
    rng = random.Random(77)
    r = tower.adjoin_sqrt(5)
    for _ in range(50):
        a = F(rng.randint(-20, 20), rng.randint(1, 9))
        b = F(rng.randint(-20, 20), rng.randint(1, 9))
        lhs = (a + b * r) * (a - b * r)
        assert (lhs - (a * a - b * b * 5)).is_zero()


# ------------------------------------------------------------ zero test


def test_zero_test_three_values(tower):
    s = tower.adjoin_sqrt(2)
    assert Expr.zero().zero_test() is Trit.ZERO
    assert ((1 + s) * (1 - s) + 1).zero_test() is Trit.ZERO
    assert (s - 1).zero_test() is Trit.NONZERO
    u = Expr.parameter("u")
    gap = tower.adjoin_sqrt(u) * tower.adjoin_sqrt(u + 2) - tower.adjoin_sqrt(u * u + 2 * u)
    assert gap.zero_test() is Trit.UNKNOWN


def test_zero_test_parametric_nonzero(tower):
    u = Expr.parameter("u")
    assert (u * u + 1).zero_test() is Trit.NONZERO
    assert u.zero_test() is Trit.NONZERO  # probes are strictly positive
    # distinct parameters get distinct probe values, certifying u - v
    # as a nonzero element of the coefficient field
    assert (u - Expr.parameter("v")).zero_test() is Trit.NONZERO


def test_certified_sign(tower):
    s = tower.adjoin_sqrt(2)
    assert (s - 1).certified_sign() == 1
    assert (s - 2).certified_sign() == -1
    assert (s * s - 2).certified_sign() == 0
    assert Expr.parameter("u").certified_sign() is None


# ----------------------------------------------------------- evaluation


def test_eval_contains_true_value(tower):
    s = tower.adjoin_sqrt(2)
    box = (1 + s).eval_interval({}, 64)
    # 1 + sqrt(2) = 2.41421356237...
    assert box.lo_fraction() < F(241421356238, 10**11)
    assert box.hi_fraction() > F(241421356237, 10**11)
    assert box.width() <= F(1, 2**62) * 3


def test_eval_requires_all_parameters(tower):
    u = Expr.parameter("u")
    v = Expr.parameter("v")
    with pytest.raises(MissingAssignment) as info:
        (u + v).eval_interval({"u": F(1)}, 64)
    assert "v" in str(info.value)


def test_eval_negative_radicand(tower):
    su = tower.adjoin_sqrt(Expr.parameter("u"))
    with pytest.raises(NegativeRadicand):
        su.eval_interval({"u": F(-1)}, 64)


def test_eval_radicand_straddling_zero(tower):
    su = tower.adjoin_sqrt(Expr.parameter("u") - F(1, 3))
    with pytest.raises(IndeterminateSign):
        su.eval_interval({"u": F(1, 3)}, 64)


def test_eval_matches_fraction_oracle(tower):
    rng = random.Random(5)
    u = Expr.parameter("u")
    v = Expr.parameter("v")
    for _ in range(60):
        cs = [F(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(5)]
        e = cs[0] + cs[1] * u + cs[2] * v + cs[3] * u * v + cs[4] * u * u
        a = {"u": F(rng.randint(-99, 99), rng.randint(1, 9)),
             "v": F(rng.randint(-99, 99), rng.randint(1, 9))}
        want = cs[0] + cs[1] * a["u"] + cs[2] * a["v"] + cs[3] * a["u"] * a["v"] + cs[4] * a["u"] ** 2
        box = e.eval_interval(a, 64)
        assert box.lo_fraction() <= want <= box.hi_fraction()


def test_higher_precision_narrows(tower):
    s = tower.adjoin_sqrt(7)
    w64 = s.eval_interval({}, 64).width()
    w256 = s.eval_interval({}, 256).width()
    assert w256 < w64


# --------------------------------------------------------- substitution


def test_substitute_into_radicand(tower):
    su = tower.adjoin_sqrt(Expr.parameter("u"))
    assert su.substitute("u", F(4)).rational_value() == 2
    got = su.substitute("u", F(2))
    assert (got - tower.adjoin_sqrt(2)).is_zero()


def test_substitute_polynomial_value(tower):
    u = Expr.parameter("u")
    e = u * u + 1
    got = e.substitute("u", u + 1)  # one-pass, self-reference allowed
    assert (got - (u * u + 2 * u + 2)).is_zero()


def test_substitute_cyclic_radicand_rejected(tower):
    u = Expr.parameter("u")
    su = tower.adjoin_sqrt(u)
    with pytest.raises(CyclicSubstitution):
        u.substitute("u", 1 + su)


def test_substitute_absent_name_is_identity(tower):
    s = tower.adjoin_sqrt(2)
    e = 1 + s
    assert e.substitute("w", F(5)).key() == e.key()


def test_substitution_commutes_with_arithmetic(tower):
    rng = random.Random(11)
    u = Expr.parameter("u")
    su = tower.adjoin_sqrt(u + 3)
    for _ in range(40):
        q = F(rng.randint(0, 50), rng.randint(1, 9))
        a = u * 2 + su
        b = su * su - u
        subbed = (a * b).substitute("u", q)
        direct = a.substitute("u", q) * b.substitute("u", q)
        assert (subbed - direct).is_zero()


# ------------------------------------------------------ power collection


def test_collect_powers(tower):
    x = Expr.parameter("x")
    u = Expr.parameter("u")
    s = tower.adjoin_sqrt(2)
    e = u * x * x + 3 * x - s
    c0, c1, c2 = e.collect_powers("x", 2)
    assert (c0 + s).is_zero()
    assert (c1 - 3).is_zero()
    assert (c2 - u).is_zero()


def test_collect_powers_rejects_radicand_occurrence(tower):
    x = Expr.parameter("x")
    sx = tower.adjoin_sqrt(x)
    with pytest.raises(ValueError):
        (sx + x).collect_powers("x", 2)


def test_collect_powers_rejects_degree_overflow(tower):
    x = Expr.parameter("x")
    with pytest.raises(ValueError):
        (x * x * x).collect_powers("x", 2)
