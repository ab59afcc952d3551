"""Multivariate polynomials over exact rationals.

Polynomials are dictionaries mapping monomials to nonzero Fraction
coefficients.  A monomial is a sorted tuple of (name, exponent) pairs with
positive exponents; the empty tuple is the constant monomial.  Ordering is
graded lexicographic over lexically sorted names, which fixes leading terms
and therefore every canonical form downstream.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from random import Random
from typing import Iterable, Iterator

Monomial = tuple[tuple[str, int], ...]

_TRIAL_BOUND = 100_000


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[str, int] = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b component-wise."""
    have = dict(b)
    return all(have.get(name, 0) >= e for name, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    exps = dict(b)
    for name, e in a:
        rest = exps[name] - e
        if rest:
            exps[name] = rest
        else:
            del exps[name]
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_cmp(a: Monomial, b: Monomial) -> int:
    """Graded lex: total degree first, then exponents along sorted names."""
    da, db = mono_degree(a), mono_degree(b)
    if da != db:
        return -1 if da < db else 1
    ea, eb = dict(a), dict(b)
    for name in sorted(set(ea) | set(eb)):
        xa, xb = ea.get(name, 0), eb.get(name, 0)
        if xa != xb:
            return 1 if xa > xb else -1
    return 0


def _mono_sort_key(m: Monomial):
    # descending graded-lex when used with sorted(..., reverse=True)
    return (mono_degree(m), tuple((name, dict(m).get(name, 0)) for name in sorted(dict(m))))


class Poly:
    """Immutable-by-convention polynomial; never holds zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {
            m: c for m, c in (terms or {}).items() if c
        }

    # construction ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def one(cls) -> "Poly":
        return cls({(): Fraction(1)})

    @classmethod
    def const(cls, value) -> "Poly":
        value = Fraction(value)
        return cls({(): value} if value else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Poly":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return cls.one()
        return cls({((name, exp),): Fraction(1)})

    # predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        out: set[str] = set()
        for m in self.terms:
            for name, _ in m:
                out.add(name)
        return out

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        best = 0
        for m in self.terms:
            for n, e in m:
                if n == name and e > best:
                    best = e
        return best

    # arithmetic --------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly.zero()
        # constant fast paths keep rational-only workloads cheap
        if self.is_const():
            c = self.const_value()
            return Poly({m: c * v for m, v in other.terms.items()})
        if other.is_const():
            c = other.const_value()
            return Poly({m: c * v for m, v in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(out)

    def scale(self, c: Fraction) -> "Poly":
        if not c:
            return Poly.zero()
        return Poly({m: c * v for m, v in self.terms.items()})

    def pow(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # structure ---------------------------------------------------------

    def leading(self) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("leading term of zero")
        best: Monomial | None = None
        for m in self.terms:
            if best is None or mono_cmp(m, best) > 0:
                best = m
        assert best is not None
        return best, self.terms[best]

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_sort_key(kv[0]), reverse=True)

    def content(self) -> Fraction:
        """Positive rational c with self/c having integer, coprime coefficients."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def key(self):
        return tuple(sorted((m, c) for m, c in self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        bits = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in m)
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return "Poly(" + " + ".join(bits) + ")"


# ------------------------------------------------------------- division

def exact_div(a: Poly, b: Poly) -> Poly:
    """Exact multivariate division; raises ValueError when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if b.is_const():
        inv = 1 / b.const_value()
        return a.scale(inv)
    quot: dict[Monomial, Fraction] = {}
    rem = a
    lm_b, lc_b = b.leading()
    while not rem.is_zero():
        lm_r, lc_r = rem.leading()
        if not mono_divides(lm_b, lm_r):
            raise ValueError("not exactly divisible")
        m = mono_div(lm_r, lm_b)
        c = lc_r / lc_b
        quot[m] = quot.get(m, Fraction(0)) + c
        rem = rem - Poly({m: c}) * b
    return Poly(quot)


# ------------------------------------------------------------------ gcd

def _monic(p: Poly) -> Poly:
    if p.is_zero():
        return p
    _, lc = p.leading()
    return p.scale(1 / lc)


def _gcd_univar_q(a: Poly, b: Poly, x: str) -> Poly:
    """Euclid over Q[x]; returns the monic gcd."""

    def to_map(p: Poly) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for m, c in p.terms.items():
            e = dict(m).get(x, 0)
            out[e] = out.get(e, Fraction(0)) + c
        return {e: c for e, c in out.items() if c}

    def rem(f: dict[int, Fraction], g: dict[int, Fraction]) -> dict[int, Fraction]:
        dg = max(g)
        lg = g[dg]
        r = dict(f)
        while r and max(r) >= dg:
            dr = max(r)
            q = r[dr] / lg
            for e, c in g.items():
                ee = e + dr - dg
                s = r.get(ee, Fraction(0)) - q * c
                if s:
                    r[ee] = s
                else:
                    r.pop(ee, None)
        return r

    f, g = to_map(a), to_map(b)
    while g:
        f, g = g, rem(f, g)
    df = max(f)
    lead = f[df]
    return Poly({(((x, e),) if e else ()): c / lead for e, c in f.items()})


def _to_univar(p: Poly, x: str) -> dict[int, Poly]:
    out: dict[int, dict[Monomial, Fraction]] = {}
    for m, c in p.terms.items():
        exps = dict(m)
        e = exps.pop(x, 0)
        rest = tuple(sorted(exps.items()))
        out.setdefault(e, {})[rest] = c
    return {e: Poly(t) for e, t in out.items()}


def _from_univar(coeffs: dict[int, Poly], x: str) -> Poly:
    out: dict[Monomial, Fraction] = {}
    for e, p in coeffs.items():
        for m, c in p.terms.items():
            key = mono_mul(m, ((x, e),) if e else ())
            out[key] = out.get(key, Fraction(0)) + c
    return Poly(out)


def _coeff_gcd(polys: Iterable[Poly]) -> Poly:
    acc = Poly.zero()
    for p in polys:
        acc = poly_gcd(acc, p)
        if acc.is_const() and not acc.is_zero():
            return Poly.one()
    return acc


_HEU_TRIES = 6


class _HeuristicFailed(Exception):
    pass


def _smod(c: int, xi: int) -> int:
    """Symmetric remainder in (-xi/2, xi/2]."""
    r = c % xi
    return r - xi if 2 * r > xi else r


def _int_terms(p: Poly) -> dict[Monomial, int]:
    cont = p.content()
    return {m: int(c / cont) for m, c in p.terms.items()}


def _max_norm(t: dict[Monomial, int]) -> int:
    return max(abs(c) for c in t.values())


def _deg_in(t: dict[Monomial, int], x: str) -> int:
    best = 0
    for m in t:
        for n, e in m:
            if n == x and e > best:
                best = e
    return best


def _eval_at(t: dict[Monomial, int], x: str, xi: int) -> dict[Monomial, int]:
    powers: dict[int, int] = {}
    out: dict[Monomial, int] = {}
    for m, c in t.items():
        exps = dict(m)
        e = exps.pop(x, 0)
        rest = tuple(sorted(exps.items()))
        if e:
            p = powers.get(e)
            if p is None:
                p = powers[e] = xi ** e
            c = c * p
        out[rest] = out.get(rest, 0) + c
    return {m: c for m, c in out.items() if c}


def _int_leading(t: dict[Monomial, int]) -> Monomial:
    best: Monomial | None = None
    for m in t:
        if best is None or mono_cmp(m, best) > 0:
            best = m
    assert best is not None
    return best


def _int_div(f: dict[Monomial, int], h: dict[Monomial, int]):
    """Exact division of integer term maps; None when h does not divide f."""
    lm_h = _int_leading(h)
    lc_h = h[lm_h]
    rem = dict(f)
    quot: dict[Monomial, int] = {}
    while rem:
        lm_r = _int_leading(rem)
        lc_r = rem[lm_r]
        if lc_r % lc_h or not mono_divides(lm_h, lm_r):
            return None
        m = mono_div(lm_r, lm_h)
        c = lc_r // lc_h
        quot[m] = c
        for mh, ch in h.items():
            mm = mono_mul(m, mh)
            s = rem.get(mm, 0) - c * ch
            if s:
                rem[mm] = s
            else:
                rem.pop(mm, None)
    return quot


def _strip_int_content(t: dict[Monomial, int]) -> dict[Monomial, int]:
    g = 0
    for c in t.values():
        g = gcd(g, c)
        if g == 1:
            return t
    return {m: c // g for m, c in t.items()}


def _lift_digits(gamma: dict[Monomial, int], x: str, xi: int, bound: int):
    """Read gamma as digits of a polynomial in x, balanced base xi."""
    digits: dict[Monomial, int] = {}
    i = 0
    while gamma:
        if i > bound:
            return None
        layer = {m: _smod(c, xi) for m, c in gamma.items()}
        for m, c in layer.items():
            if c:
                digits[mono_mul(m, ((x, i),)) if i else m] = c
        nxt: dict[Monomial, int] = {}
        for m, c in gamma.items():
            v = (c - layer[m]) // xi
            if v:
                nxt[m] = v
        gamma = nxt
        i += 1
    return digits


def _heu_level(f: dict[Monomial, int], g: dict[Monomial, int]):
    """Evaluation-based gcd of nonzero integer term maps.

    One variable is collapsed by evaluating both sides at a large integer,
    the gcd of the images is computed recursively, and the result is lifted
    back through its balanced digit expansion.  Every candidate is verified
    by exact division, so a returned value is always a true common divisor;
    when no evaluation point works the caller falls back to remainder
    sequences.
    """
    names = {n for m in f for n, _ in m} | {n for m in g for n, _ in m}
    if not names:
        return {(): gcd(f[()], g[()])}
    x = min(names, key=lambda n: (max(_deg_in(f, n), _deg_in(g, n)), n))
    bound = min(_deg_in(f, x), _deg_in(g, x))
    xi = 2 * min(_max_norm(f), _max_norm(g)) + 29
    for _ in range(_HEU_TRIES):
        ef, eg = _eval_at(f, x, xi), _eval_at(g, x, xi)
        if ef and eg:
            try:
                gamma = _heu_level(ef, eg)
            except _HeuristicFailed:
                gamma = None
            if gamma:
                cand = _lift_digits(gamma, x, xi, bound)
                if cand:
                    cand = _strip_int_content(cand)
                    if (_int_div(f, cand) is not None
                            and _int_div(g, cand) is not None):
                        return cand
        xi = 73794 * xi * isqrt(isqrt(xi)) // 27011
    raise _HeuristicFailed


def _heu_gcd(a: Poly, b: Poly) -> Poly | None:
    """A verified nonconstant common divisor found by evaluation, or None.

    The result is guaranteed to divide both inputs but is not guaranteed
    maximal; the caller recurses on the cofactors, so extraction only has
    to make progress, not finish the job.
    """
    try:
        cand = _heu_level(_int_terms(a), _int_terms(b))
    except _HeuristicFailed:
        return None
    if len(cand) == 1 and () in cand:
        return None
    return Poly({m: Fraction(c) for m, c in cand.items()})


_COPRIME_PRIME = (1 << 61) - 1


def _mod_univar(terms: dict[Monomial, Fraction], x: str,
                alpha: dict[str, int], p: int):
    """Specialize every variable except x at alpha, modulo p.

    Returns a degree -> residue map, or None when a coefficient denominator
    is divisible by p and the reduction is meaningless.
    """
    out: dict[int, int] = {}
    for m, c in terms.items():
        den = c.denominator % p
        if den == 0:
            return None
        val = c.numerator % p * pow(den, -1, p) % p
        e_x = 0
        for n, e in m:
            if n == x:
                e_x = e
            else:
                val = val * pow(alpha[n], e, p) % p
        out[e_x] = (out.get(e_x, 0) + val) % p
    return {e: v for e, v in out.items() if v}


def _gfp_gcd_degree(f: dict[int, int], g: dict[int, int], p: int) -> int:
    while g:
        dg = max(g)
        inv = pow(g[dg], -1, p)
        g = {e: c * inv % p for e, c in g.items()}
        r = dict(f)
        while r and max(r) >= dg:
            dr = max(r)
            lc = r.pop(dr)
            for e, c in g.items():
                if e == dg:
                    continue
                ee = e + dr - dg
                v = (r.get(ee, 0) - lc * c) % p
                if v:
                    r[ee] = v
                else:
                    r.pop(ee, None)
        f, g = g, r
    return max(f) if f else -1


def _modular_coprime(a: Poly, b: Poly) -> bool:
    """Prove gcd(a, b) == 1, or return False when no proof was found.

    Specializing all but one variable modulo a prime can only enlarge the
    gcd as long as the leading coefficients survive, so a constant image
    gcd certifies that the variable is absent from the true gcd.  A gcd
    free of every shared variable is a unit.
    """
    rng = Random(0x5EED)
    p = _COPRIME_PRIME
    shared = sorted(a.variables() & b.variables())
    every = a.variables() | b.variables()
    for x in shared:
        da, db = a.degree_in(x), b.degree_in(x)
        if da == 0 or db == 0:
            continue
        for _ in range(4):
            alpha = {n: rng.randrange(1, 1 << 30) for n in every if n != x}
            fa = _mod_univar(a.terms, x, alpha, p)
            fb = _mod_univar(b.terms, x, alpha, p)
            if not fa or not fb or max(fa) != da or max(fb) != db:
                continue
            # one clean specialization settles the variable either way
            if _gfp_gcd_degree(fa, fb, p) == 0:
                break
            return False
        else:
            return False
    return True


def _prem(f: dict[int, Poly], g: dict[int, Poly]) -> dict[int, Poly]:
    """Pseudo remainder of f by g, both univariate with Poly coefficients."""
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        nxt: dict[int, Poly] = {e: c * lg for e, c in r.items()}
        for e, c in g.items():
            ee = e + dr - dg
            s = nxt.get(ee, Poly.zero()) - lr * c
            nxt[ee] = s
        r = {e: c for e, c in nxt.items() if not c.is_zero()}
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Canonical gcd over Q: monic w.r.t. graded lex, 1 for coprime inputs."""
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    if a.is_const() or b.is_const():
        return Poly.one()
    if _modular_coprime(a, b):
        return Poly.one()
    part = _heu_gcd(a, b)
    if part is not None:
        return _monic(part * poly_gcd(exact_div(a, part),
                                      exact_div(b, part)))
    names = sorted(a.variables() | b.variables())
    x = names[0]
    if len(names) == 1:
        return _gcd_univar_q(a, b, x)

    fa, fb = _to_univar(a, x), _to_univar(b, x)
    ca = _coeff_gcd(fa.values())
    cb = _coeff_gcd(fb.values())
    pa = {e: exact_div(c, ca) for e, c in fa.items()}
    pb = {e: exact_div(c, cb) for e, c in fb.items()}
    cont = poly_gcd(ca, cb)

    f, g = (pa, pb) if max(pa) >= max(pb) else (pb, pa)
    while True:
        if not g:
            tail = f
            break
        if max(g) == 0:
            # degree 0 in x against a primitive poly: nothing in x to share
            tail = None
            break
        r = _prem(f, g)
        if not r:
            tail = g
            break
        cr = _coeff_gcd(r.values())
        r = {e: exact_div(c, cr) for e, c in r.items()}
        f, g = g, r

    if tail is None:
        prim = Poly.one()
    else:
        ct = _coeff_gcd(tail.values())
        prim = _from_univar({e: exact_div(c, ct) for e, c in tail.items()}, x)
    return _monic(cont * prim)


# ----------------------------------------------------------- square roots

def frac_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def poly_sqrt(p: Poly) -> Poly | None:
    """Exact polynomial square root, or None when p is not a perfect square."""
    if p.is_zero():
        return Poly.zero()
    if p.is_const():
        r = frac_sqrt(p.const_value())
        return None if r is None else Poly.const(r)
    lm, lc = p.leading()
    if any(e % 2 for _, e in lm):
        return None
    r = frac_sqrt(lc)
    if r is None:
        return None
    half: Monomial = tuple((n, e // 2) for n, e in lm)
    q = Poly({half: r})
    guard = 4 * len(p.terms) + 8
    while guard:
        guard -= 1
        rem = p - q * q
        if rem.is_zero():
            return q
        lm_r, lc_r = rem.leading()
        if not mono_divides(half, lm_r):
            return None
        q = q + Poly({mono_div(lm_r, half): lc_r / (2 * r)})
    return None


def squarefree_split(n: int) -> tuple[int, int]:
    """n = a*a*b with b squarefree (up to a trial-division bound); n > 0.

    Square factors whose primes all exceed the bound stay inside b; that only
    costs normalization quality, never soundness.
    """
    if n <= 0:
        raise ValueError("positive integers only")
    r = isqrt(n)
    if r * r == n:
        return r, 1
    a, b = 1, 1
    m = n
    d = 2
    while d <= _TRIAL_BOUND and d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            a *= d ** (e // 2)
            if e % 2:
                b *= d
        d += 1 if d == 2 else 2
    r = isqrt(m)
    if r * r == m:
        a *= r
    else:
        b *= m
    return a, b
