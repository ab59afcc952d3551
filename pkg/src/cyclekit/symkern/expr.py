"""Exact scalars: rational functions extended by nested square roots.

An Expr is kept in multilinear normal form: a finite sum of terms, each a
RatFunc coefficient times a product of distinct square-root atoms, with the
rewrite s*s -> radicand applied eagerly.  Atoms live in a Tower; a new atom's
radicand may only mention strictly earlier atoms, so rewriting terminates.

The normal form is canonical for the rational-function field and multilinear
in the atoms.  Structural emptiness is therefore a sound and complete test
for syntactic zero; algebraic identities that relate *different* atoms (for
example sqrt(u)*sqrt(u+2) versus sqrt(u*u+2*u)) are not recognized and
surface as Unknown from zero_test, never as a wrong verdict.
"""

from __future__ import annotations

import enum
import hashlib
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import (CyclicSubstitution, DivisionByZero, DivisionUnknown,
                      IndeterminateSign, MissingAssignment, NegativeRadicand)
from . import config
from .interval import Interval
from .poly import Poly, poly_sqrt, squarefree_split
from .ratfunc import RatFunc

_GUARD_BITS = 32


class Trit(enum.Enum):
    """Three-valued verdict of a zero test."""

    ZERO = "Zero"
    NONZERO = "NonZero"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class SqrtAtom:
    """One square root in a tower; identified by creation order."""

    __slots__ = ("id", "radicand", "tower")

    def __init__(self, atom_id: int, radicand: "Expr", tower: "Tower"):
        self.id = atom_id
        self.radicand = radicand
        self.tower = tower

    def __repr__(self) -> str:
        return f"SqrtAtom#{self.id}"


class Tower:
    """Append-only registry of square-root atoms.

    Identical radicands are interned to the same atom, which is what makes
    the multilinear normal form canonical within one tower.
    """

    def __init__(self) -> None:
        self.atoms: list[SqrtAtom] = []
        self._intern: dict[object, SqrtAtom] = {}

    def _atom_for(self, radicand: "Expr") -> SqrtAtom:
        key = radicand.key()
        atom = self._intern.get(key)
        if atom is None:
            atom = SqrtAtom(len(self.atoms) + 1, radicand, self)
            self.atoms.append(atom)
            self._intern[key] = atom
        return atom

    def adjoin_sqrt(self, radicand) -> "Expr":
        """Square root of radicand as an Expr.

        Rational radicands get their square factors extracted (sqrt(8)
        becomes 2*sqrt(2), sqrt(9) becomes 3); perfect-square rational
        functions collapse without creating an atom.
        """
        rad = as_expr(radicand)
        if rad.is_zero():
            return Expr.zero()
        if rad.is_rational():
            q = rad.rational_value()
            num, den = q.numerator, q.denominator
            a, b = squarefree_split(abs(num) * den)
            coeff = Fraction(a, den)
            if q < 0:
                b = -b
            if b == 1:
                return Expr.from_fraction(coeff)
            atom = self._atom_for(Expr.from_fraction(b))
            return Expr({(atom,): RatFunc.const(coeff)})
        rf = rad.sole_ratfunc()
        if rf is not None:
            root = _ratfunc_sqrt(rf)
            if root is not None:
                return Expr.from_ratfunc(root)
            coeff_rf, reduced = _extract_square_content(rf)
            atom = self._atom_for(Expr.from_ratfunc(reduced))
            return Expr({(atom,): coeff_rf})
        atom = self._atom_for(rad)
        return Expr({(atom,): RatFunc.one()})


def _ratfunc_sqrt(rf: RatFunc) -> RatFunc | None:
    ns = poly_sqrt(rf.num)
    if ns is None:
        return None
    ds = poly_sqrt(rf.den)
    if ds is None:
        return None
    return RatFunc(ns, ds, reduced=True)


def _extract_square_content(rf: RatFunc) -> tuple[RatFunc, RatFunc]:
    """rf = coeff^2 * reduced with reduced a primitive integer polynomial
    times a squarefree integer; returns (coeff, reduced)."""
    q = rf.num * rf.den  # sqrt(n/d) = sqrt(n*d)/d
    c = q.content()
    prim = q.scale(1 / c)
    a, b = squarefree_split(c.numerator * c.denominator)
    coeff = RatFunc(Poly.const(Fraction(a, c.denominator)), rf.den, reduced=False)
    prim_root = poly_sqrt(prim)
    if prim_root is not None:
        coeff = coeff * RatFunc(prim_root, Poly.one(), reduced=True)
        prim = Poly.one()
    return coeff, RatFunc(prim.scale(Fraction(b)), Poly.one(), reduced=True)


class Expr:
    """Normal-form scalar; immutable by convention."""

    __slots__ = ("terms", "_zero_cache")

    def __init__(self, terms: dict[tuple[SqrtAtom, ...], RatFunc] | None = None):
        self.terms: dict[tuple[SqrtAtom, ...], RatFunc] = {
            k: v for k, v in (terms or {}).items() if not v.is_zero()
        }
        self._zero_cache: Trit | None = None

    # ------------------------------------------------------- construction

    @classmethod
    def zero(cls) -> "Expr":
        return cls()

    @classmethod
    def from_fraction(cls, q) -> "Expr":
        q = Fraction(q)
        if not q:
            return cls()
        return cls({(): RatFunc.const(q)})

    @classmethod
    def from_ratfunc(cls, rf: RatFunc) -> "Expr":
        if rf.is_zero():
            return cls()
        return cls({(): rf})

    @classmethod
    def parameter(cls, name: str) -> "Expr":
        if not name or not (name[0].isalpha() or name[0] == "_") \
                or not all(ch.isalnum() or ch == "_" for ch in name):
            raise ValueError(f"bad parameter name: {name!r}")
        return cls({(): RatFunc.var(name)})

    # --------------------------------------------------------- predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) != 1 or () not in self.terms:
            return False
        return self.terms[()].is_const()

    def rational_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[()].const_value()

    def sole_ratfunc(self) -> RatFunc | None:
        """The coefficient when the expression is atom-free, else None."""
        if not self.terms:
            return RatFunc.zero()
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def has_atoms(self) -> bool:
        return any(k for k in self.terms)

    def atoms(self, recursive: bool = False) -> list[SqrtAtom]:
        seen: dict[int, SqrtAtom] = {}

        def walk(e: "Expr") -> None:
            for key in e.terms:
                for atom in key:
                    if atom.id not in seen:
                        seen[atom.id] = atom
                        if recursive:
                            walk(atom.radicand)

        walk(self)
        return [seen[i] for i in sorted(seen)]

    def param_names(self) -> set[str]:
        names: set[str] = set()
        for key, rf in self.terms.items():
            names |= rf.variables()
        for atom in self.atoms(recursive=True):
            for rf in atom.radicand.terms.values():
                names |= rf.variables()
        return names

    def key(self):
        return tuple(sorted(
            (tuple(a.id for a in k), v.key()) for k, v in self.terms.items()
        ))

    def __eq__(self, other) -> bool:
        return isinstance(other, Expr) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        from .textio import render_expr
        return f"Expr({render_expr(self)})"

    # --------------------------------------------------------- arithmetic

    def _coerce(self, other) -> "Expr | None":
        if isinstance(other, Expr):
            return other
        if isinstance(other, (int, Fraction)):
            return Expr.from_fraction(other)
        return None

    def __add__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in rhs.terms.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return Expr(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Expr":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __neg__(self) -> "Expr":
        return Expr({k: -v for k, v in self.terms.items()})

    def __mul__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        acc: dict[tuple[SqrtAtom, ...], RatFunc] = {}
        for ka, va in self.terms.items():
            for kb, vb in rhs.terms.items():
                _accumulate_product(acc, ka, va, kb, vb)
        return Expr(acc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return _divide(self, rhs)

    def __rtruediv__(self, other) -> "Expr":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return _divide(lhs, self)

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Expr.from_fraction(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -------------------------------------------------------- zero testing

    def zero_test(self) -> Trit:
        """Sound three-valued zero test.

        Zero reflects syntactic emptiness of the normal form; NonZero is
        certified either structurally (nonzero rational constant) or by
        interval evaluation at deterministic pseudo-random assignments;
        everything else is Unknown.
        """
        if self._zero_cache is None:
            self._zero_cache = self._zero_test_uncached()
        return self._zero_cache

    def _zero_test_uncached(self) -> Trit:
        if not self.terms:
            return Trit.ZERO
        if self.is_rational():
            return Trit.NONZERO  # normal form never stores a zero coefficient
        names = sorted(self.param_names())
        for attempt in range(3):
            assignment = _probe_assignment(names, attempt)
            for bits in config.precision_ladder():
                try:
                    box = self.eval_interval(assignment, bits)
                except NegativeRadicand:
                    break  # this sample leaves the real domain; try another
                except IndeterminateSign:
                    continue  # sharpen and retry
                if box.excludes_zero():
                    return Trit.NONZERO
                if bits == config.precision_ladder()[-1]:
                    break
        return Trit.UNKNOWN

    def certified_sign(self) -> int | None:
        """-1, 0 or +1 when provable for a parameter-free expression."""
        if self.zero_test() is Trit.ZERO:
            return 0
        if self.param_names():
            return None
        for bits in config.precision_ladder():
            try:
                box = self.eval_interval({}, bits)
            except NegativeRadicand:
                return None
            except IndeterminateSign:
                continue
            s = box.sign()
            if s is not None:
                return s
        return None

    # ---------------------------------------------------------- evaluation

    def eval_interval(self, assignment: Mapping[str, Fraction], bits: int | None = None) -> Interval:
        """Enclosing interval of the value at a rational assignment.

        Raises MissingAssignment for unassigned parameters, NegativeRadicand
        when some square root certainly leaves the reals, IndeterminateSign
        when a radicand straddles zero at this precision.
        """
        if bits is None:
            bits = config.precision_bits()
        missing = self.param_names() - set(assignment)
        if missing:
            raise MissingAssignment(missing)
        target_width = Fraction(1, 1 << max(bits - 1, 1))
        for guard in (_GUARD_BITS, _GUARD_BITS + 64):
            prec = bits + guard
            box = self._eval_at(assignment, prec, {})
            mid = abs(box.midpoint())
            if box.width() <= target_width * (mid if mid > 1 else 1):
                return box
        return box

    def _eval_at(self, assignment: Mapping[str, Fraction], prec: int,
                 atom_cache: dict[int, Interval]) -> Interval:
        total = Interval.exact_int(0, prec)
        for key, rf in self.terms.items():
            val = _eval_ratfunc(rf, assignment, prec)
            for atom in key:
                val = val * _eval_atom(atom, assignment, prec, atom_cache)
            total = total + val
        return total

    # -------------------------------------------------------- substitution

    def substitute(self, name: str, value) -> "Expr":
        """Replace a parameter everywhere, radicands included."""
        repl = as_expr(value)
        for atom in repl.atoms(recursive=True):
            if name in atom.radicand.param_names():
                raise CyclicSubstitution(
                    f"value for {name!r} keeps {name!r} under a square root")
        if name not in self.param_names():
            return self
        out = Expr.zero()
        for key, rf in self.terms.items():
            piece = _subst_ratfunc(rf, name, repl)
            for atom in key:
                piece = piece * _subst_atom(atom, name, repl)
            out = out + piece
        return out

    def collect_powers(self, name: str, max_degree: int = 2) -> list["Expr"]:
        """Coefficients [c0 .. c_max] of powers of a parameter.

        Requires the parameter to stay out of denominators and radicands;
        the figure solver guarantees that for its fresh unknowns.
        """
        out = [Expr.zero() for _ in range(max_degree + 1)]
        for key, rf in self.terms.items():
            for atom in key:
                if name in atom.radicand.param_names():
                    raise ValueError(f"{name} occurs inside a radicand")
            if name in rf.den.variables():
                raise ValueError(f"{name} occurs in a denominator")
            buckets: dict[int, dict] = {}
            for mono, coeff in rf.num.terms.items():
                exps = dict(mono)
                e = exps.pop(name, 0)
                if e > max_degree:
                    raise ValueError(f"degree of {name} exceeds {max_degree}")
                rest = tuple(sorted(exps.items()))
                bucket = buckets.setdefault(e, {})
                bucket[rest] = bucket.get(rest, Fraction(0)) + coeff
            for e, bucket in buckets.items():
                piece = Expr({key: RatFunc(Poly(bucket), rf.den)})
                out[e] = out[e] + piece
        return out


# ----------------------------------------------------------- term algebra

def _accumulate_product(acc: dict, ka: tuple[SqrtAtom, ...], va: RatFunc,
                        kb: tuple[SqrtAtom, ...], vb: RatFunc) -> None:
    ids_b = {a.id for a in kb}
    ids_a = {a.id for a in ka}
    common = [a for a in ka if a.id in ids_b]
    merged = tuple(sorted(
        [a for a in ka if a.id not in ids_b] + [a for a in kb if a.id not in ids_a],
        key=lambda a: a.id))
    coeff = va * vb
    if not common:
        prev = acc.get(merged)
        s = coeff if prev is None else prev + coeff
        if s.is_zero():
            acc.pop(merged, None)
        else:
            acc[merged] = s
        return
    # squared atoms fold into their radicands (atoms of strictly lower id)
    piece = Expr({merged: coeff})
    for atom in common:
        piece = piece * atom.radicand
    for k, v in piece.terms.items():
        prev = acc.get(k)
        s = v if prev is None else prev + v
        if s.is_zero():
            acc.pop(k, None)
        else:
            acc[k] = s


def div_assume_nonzero(num: Expr, den: Expr) -> Expr:
    """Division that trusts the caller's nonzero assumption.

    Used by the linear solver after it records an unknown-status pivot as
    an explicit case split; the quotient is only meaningful under that
    assumption, which the caller reports alongside the solution.
    """
    if den.zero_test() is Trit.ZERO:
        raise DivisionByZero("division by syntactic zero")
    return _divide(num, den, checked=False)


def _divide(num: Expr, den: Expr, checked: bool = True) -> Expr:
    if checked:
        zt = den.zero_test()
        if zt is Trit.ZERO:
            raise DivisionByZero("division by syntactic zero")
        if zt is Trit.UNKNOWN:
            raise DivisionUnknown("division by expression of unknown zero status")
    # rationalize: strip the highest atom with its conjugate, repeat
    while den.has_atoms():
        top = max((a for k in den.terms for a in k), key=lambda a: a.id)
        plain: dict[tuple[SqrtAtom, ...], RatFunc] = {}
        carries: dict[tuple[SqrtAtom, ...], RatFunc] = {}
        for key, rf in den.terms.items():
            if top in key:
                carries[tuple(a for a in key if a is not top)] = rf
            else:
                plain[key] = rf
        conj = Expr(plain) - Expr(carries) * Expr({(top,): RatFunc.one()})
        num = num * conj
        den = den * conj
        if den.is_zero():
            # only possible when the tower holds a hidden perfect square
            raise DivisionUnknown("denominator is a zero divisor in its tower")
    rf = den.sole_ratfunc()
    assert rf is not None
    inv = RatFunc.one() / rf
    return Expr({k: v * inv for k, v in num.terms.items()})


# ------------------------------------------------------------- evaluation

def _eval_poly(p: Poly, assignment: Mapping[str, Fraction], prec: int) -> Interval:
    total = Interval.exact_int(0, prec)
    for mono, coeff in p.terms.items():
        v = Interval.from_fraction(coeff, prec)
        for name, e in mono:
            v = v * Interval.from_fraction(assignment[name], prec).pow(e)
        total = total + v
    return total


def _eval_ratfunc(rf: RatFunc, assignment: Mapping[str, Fraction], prec: int) -> Interval:
    num = _eval_poly(rf.num, assignment, prec)
    if rf.den.is_const() and rf.den.const_value() == 1:
        return num
    return num / _eval_poly(rf.den, assignment, prec)


def _eval_atom(atom: SqrtAtom, assignment: Mapping[str, Fraction], prec: int,
               cache: dict[int, Interval]) -> Interval:
    got = cache.get(atom.id)
    if got is None:
        got = atom.radicand._eval_at(assignment, prec, cache).sqrt()
        cache[atom.id] = got
    return got


# ----------------------------------------------------------- substitution

def _subst_poly(p: Poly, name: str, repl: Expr) -> Expr:
    out = Expr.zero()
    for mono, coeff in p.terms.items():
        exps = dict(mono)
        e = exps.pop(name, 0)
        rest = tuple(sorted(exps.items()))
        piece = Expr({(): RatFunc(Poly({rest: coeff}))})
        if e:
            piece = piece * repl ** e
        out = out + piece
    return out


def _subst_ratfunc(rf: RatFunc, name: str, repl: Expr) -> Expr:
    if name not in rf.variables():
        return Expr.from_ratfunc(rf)
    num = _subst_poly(rf.num, name, repl)
    if name not in rf.den.variables():
        return num * Expr.from_ratfunc(RatFunc(Poly.one(), rf.den))
    return num / _subst_poly(rf.den, name, repl)


def _subst_atom(atom: SqrtAtom, name: str, repl: Expr) -> Expr:
    if name not in atom.radicand.param_names():
        return Expr({(atom,): RatFunc.one()})
    new_rad = atom.radicand.substitute(name, repl)
    return atom.tower.adjoin_sqrt(new_rad)


# ------------------------------------------------------------ probe points

def _probe_assignment(names: Iterable[str], attempt: int) -> dict[str, Fraction]:
    seed = config.probe_seed()
    out: dict[str, Fraction] = {}
    for name in names:
        digest = hashlib.sha256(f"{seed}|{attempt}|{name}".encode()).digest()
        num = 1 + int.from_bytes(digest[:8], "big") % 999_983
        den = 1 + int.from_bytes(digest[8:16], "big") % 997
        out[name] = Fraction(num, den)
    return out


# -------------------------------------------------------------- coercions

def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Expr.from_fraction(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as Expr")


def eval_numeric(expr: Expr, assignment: Mapping[str, Fraction] | None = None,
                 bits: int | None = None) -> Interval:
    return expr.eval_interval(assignment or {}, bits)
