"""Circles, lines and points on one projective footing.

A cycle is the coefficient vector (k, l, n, m) of

    k*(x^2 - sigma*y^2) - 2*l*x - 2*n*y + m = 0

up to a common nonzero factor: k = 0 gives a line, vanishing squared
radius a point. Every metric notion here is driven by two independent
signature choices: ``sigma`` for the plane the locus lives in and
``sigma_cycle`` for the algebra the cycle product lives in.  Keeping the
two apart is what lets one engine serve the elliptic, parabolic and
hyperbolic worlds at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DegenerateImage,
    DegenerateMirror,
    DimensionMismatch,
    InfinityPoint,
    LineHasNoCenter,
    LineOperand,
    SingularMatrix,
    SolverInternalError,
    UnsupportedDimension,
    ZeroCycle,
)
from .symkern import Expr, Trit, as_expr

_SIGNATURES = (-1, 0, 1)


@dataclass(frozen=True)
class Metric:
    """Plane signature, cycle-space signature, and the dimension (two)."""

    dim: int = 2
    sigma: int = -1
    sigma_cycle: int = -1

    def __post_init__(self):
        if self.dim != 2:
            raise UnsupportedDimension(f"dimension {self.dim} is not supported")
        if self.sigma not in _SIGNATURES or self.sigma_cycle not in _SIGNATURES:
            raise ValueError("signatures must be -1, 0 or 1")

    def eta(self) -> tuple[int, int]:
        """Per-axis weights of the cycle product."""
        return (1, -self.sigma_cycle)


def _require_same_metric(a: "Cycle", b: "Cycle") -> None:
    if a.metric != b.metric:
        raise DimensionMismatch(f"mixed metrics {a.metric} and {b.metric}")


class Cycle:
    """Projective coefficient vector, normalized when provably possible.

    The first coefficient whose nonzero status is certified gets scaled
    to 1.  When an earlier coefficient has unknown status the vector is
    kept as given and ``normalized`` stays False.
    """

    __slots__ = ("k", "l", "m", "metric", "normalized")

    def __init__(self, k, l: Sequence, m, metric: Metric):
        if len(l) != metric.dim:
            raise DimensionMismatch(f"axis vector has {len(l)} components")
        coeffs = [as_expr(k), as_expr(l[0]), as_expr(l[1]), as_expr(m)]
        scale = None
        normalized = False
        for c in coeffs:
            zt = c.zero_test()
            if zt is Trit.NONZERO:
                scale = c
                break
            if zt is Trit.UNKNOWN:
                break
        else:
            raise ZeroCycle("all coefficients are zero")
        if scale is not None:
            coeffs = [c / scale for c in coeffs]
            normalized = True
        self.k = coeffs[0]
        self.l = (coeffs[1], coeffs[2])
        self.m = coeffs[3]
        self.metric = metric
        self.normalized = normalized

    # -------------------------------------------------------------- basics

    def coefficients(self) -> tuple[Expr, Expr, Expr, Expr]:
        return (self.k, self.l[0], self.l[1], self.m)

    def key(self):
        return tuple(c.key() for c in self.coefficients())

    def __repr__(self):
        from .symkern import render_expr
        k, lx, ly, m = (render_expr(c) for c in self.coefficients())
        return f"Cycle({k}, [{lx}, {ly}], {m})"

    def is_line(self) -> Trit:
        return self.k.zero_test()

    def param_names(self) -> set[str]:
        out: set[str] = set()
        for c in self.coefficients():
            out |= c.param_names()
        return out

    def substitute(self, name: str, value) -> "Cycle":
        k, lx, ly, m = (c.substitute(name, value) for c in self.coefficients())
        return Cycle(k, (lx, ly), m, self.metric)


def point_cycle(p: Sequence, metric: Metric) -> Cycle:
    """Zero-radius cycle through a finite point."""
    px, py = as_expr(p[0]), as_expr(p[1])
    ex, ey = metric.eta()
    m = px * px * ex + py * py * ey
    return Cycle(1, (px, py), m, metric)


def inner(a: Cycle, b: Cycle) -> Expr:
    """Symmetric bilinear pairing; the workhorse of every predicate."""
    _require_same_metric(a, b)
    sc = a.metric.sigma_cycle
    cross = a.l[0] * b.l[0] - a.l[1] * b.l[1] * sc
    return 2 * cross - a.k * b.m - b.k * a.m


def is_orthogonal(a: Cycle, b: Cycle) -> Trit:
    return inner(a, b).zero_test()


def tangency_defect(a: Cycle, b: Cycle) -> Expr:
    """Vanishes exactly at tangency; the discriminant of the pencil."""
    ab = inner(a, b)
    return ab * ab - inner(a, a) * inner(b, b)


def is_tangent(a: Cycle, b: Cycle) -> Trit:
    return tangency_defect(a, b).zero_test()


def steiner_power(a: Cycle, b: Cycle) -> Expr:
    """Joint power of two cycles; for circles the power of the radical point."""
    _require_same_metric(a, b)
    for c in (a, b):
        if c.k.zero_test() is Trit.ZERO:
            raise LineOperand("a line has no Steiner power")
    return -inner(a, b) / (a.k * b.k)


def angle_cos_sq(a: Cycle, b: Cycle) -> Expr:
    """Squared cosine of the intersection angle."""
    num = inner(a, b)
    return num * num / (inner(a, a) * inner(b, b))


def radius_sq(a: Cycle) -> Expr:
    if a.k.zero_test() is Trit.ZERO:
        raise LineOperand("a line has no radius")
    return inner(a, a) / (2 * a.k * a.k)


def center(a: Cycle) -> tuple[Expr, Expr]:
    if a.k.zero_test() is Trit.ZERO:
        raise LineHasNoCenter("a line has no center")
    ex, ey = a.metric.eta()
    return (a.l[0] * ex / a.k, a.l[1] * ey / a.k)


def passes_through(a: Cycle, p: Sequence) -> Trit:
    return inner(a, point_cycle(p, a.metric)).zero_test()


def evaluate_at(a: Cycle, x, y) -> Expr:
    """Raw defining-equation value at a plane point (plane signature)."""
    x, y = as_expr(x), as_expr(y)
    quad = x * x - y * y * a.metric.sigma
    return a.k * quad - 2 * a.l[0] * x - 2 * a.l[1] * y + a.m


def same_locus(a: Cycle, b: Cycle) -> Trit:
    """Status of projective separation: ZERO means provably one locus."""
    _require_same_metric(a, b)
    ca, cb = a.coefficients(), b.coefficients()
    seen_unknown = False
    for i in range(4):
        for j in range(i + 1, 4):
            minor = ca[i] * cb[j] - ca[j] * cb[i]
            zt = minor.zero_test()
            if zt is Trit.NONZERO:
                return Trit.NONZERO
            if zt is Trit.UNKNOWN:
                seen_unknown = True
    return Trit.UNKNOWN if seen_unknown else Trit.ZERO


# ------------------------------------------------- two-component algebra


class _Duplex:
    """Number a + i*b with i^2 = sigma; sigma picks the flavor."""

    __slots__ = ("re", "im", "sigma")

    def __init__(self, re, im, sigma: int):
        self.re = as_expr(re)
        self.im = as_expr(im)
        self.sigma = sigma

    def __add__(self, other):
        return _Duplex(self.re + other.re, self.im + other.im, self.sigma)

    def __sub__(self, other):
        return _Duplex(self.re - other.re, self.im - other.im, self.sigma)

    def __neg__(self):
        return _Duplex(-self.re, -self.im, self.sigma)

    def __mul__(self, other):
        re = self.re * other.re + self.im * other.im * self.sigma
        im = self.re * other.im + self.im * other.re
        return _Duplex(re, im, self.sigma)

    def conj(self):
        return _Duplex(self.re, -self.im, self.sigma)

    def norm(self) -> Expr:
        return self.re * self.re - self.im * self.im * self.sigma


class _Mat2:
    """2x2 matrix over a duplex algebra."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: _Duplex, b: _Duplex, c: _Duplex, d: _Duplex):
        self.a, self.b, self.c, self.d = a, b, c, d

    def __mul__(self, other):
        return _Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def adjugate(self):
        return _Mat2(self.d, -self.b, -self.c, self.a)

    def conj_entries(self):
        return _Mat2(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())


class MoebiusMatrix:
    """Coefficients of a linear-fractional map, entries as (re, im) pairs."""

    __slots__ = ("entries",)

    def __init__(self, a, b, c, d):
        # invertibility depends on the algebra the map acts in, so the
        # determinant test waits until application time
        self.entries = tuple(self._pair(x) for x in (a, b, c, d))

    @staticmethod
    def _pair(x) -> tuple[Expr, Expr]:
        if isinstance(x, (tuple, list)):
            if len(x) != 2:
                raise ValueError("matrix entry must be scalar or a pair")
            return (as_expr(x[0]), as_expr(x[1]))
        return (as_expr(x), Expr.zero())

    def _embed(self, sigma: int) -> _Mat2:
        (a, b, c, d) = self.entries
        return _Mat2(
            _Duplex(a[0], a[1], sigma),
            _Duplex(b[0], b[1], sigma),
            _Duplex(c[0], c[1], sigma),
            _Duplex(d[0], d[1], sigma),
        )

    def check_invertible(self, sigma: int) -> None:
        m = self._embed(sigma)
        det = m.a * m.d - m.b * m.c
        if det.norm().zero_test() is Trit.ZERO:
            raise SingularMatrix("determinant has zero norm in this algebra")


def _cycle_to_mat(c: Cycle, sigma: int) -> _Mat2:
    return _Mat2(
        _Duplex(c.l[0], c.l[1], sigma),
        _Duplex(-c.m, 0, sigma),
        _Duplex(c.k, 0, sigma),
        _Duplex(-c.l[0], c.l[1], sigma),
    )


def _mat_to_cycle(m: _Mat2, metric: Metric) -> Cycle:
    for stray in (m.c.im, m.b.im):
        if not stray.is_zero():
            raise SolverInternalError("transform broke the cycle matrix shape")
    k = m.c.re
    lx = (m.a.re - m.d.re) / 2
    ly = (m.a.im + m.d.im) / 2
    mm = -m.b.re
    return Cycle(k, (lx, ly), mm, metric)


def flt_apply(mat: MoebiusMatrix, c: Cycle) -> Cycle:
    """Image of a cycle under the linear-fractional map of ``mat``."""
    sigma = c.metric.sigma_cycle
    mat.check_invertible(sigma)
    m = mat._embed(sigma)
    x = _cycle_to_mat(c, sigma)
    out = m * x * m.conj_entries().adjugate()
    return _mat_to_cycle(out, c.metric)


def flt_apply_point(mat: MoebiusMatrix, p: Sequence, metric: Metric) -> tuple[Expr, Expr]:
    """Image of a plane point; the plane algebra does the division."""
    sigma = metric.sigma
    mat.check_invertible(sigma)
    m = mat._embed(sigma)
    z = _Duplex(as_expr(p[0]), as_expr(p[1]), sigma)
    num = m.a * z + m.b
    den = m.c * z + m.d
    if den.re.is_zero() and den.im.is_zero():
        raise InfinityPoint("the image is the point at infinity")
    dn = den.norm()
    if dn.zero_test() is Trit.ZERO:
        raise DegenerateImage("denominator is a zero divisor")
    quot = num * den.conj()
    return (quot.re / dn, quot.im / dn)


def reflect(mirror: Cycle, c: Cycle) -> Cycle:
    """Image of ``c`` in the mirror cycle; an involution on cycles."""
    _require_same_metric(mirror, c)
    if inner(mirror, mirror).zero_test() is Trit.ZERO:
        raise DegenerateMirror("mirror has zero self-pairing")
    sigma = c.metric.sigma_cycle
    mm = _cycle_to_mat(mirror, sigma)
    xx = _cycle_to_mat(c, sigma).conj_entries()
    return _mat_to_cycle(mm * xx * mm, c.metric)
