"""Rational functions with a unique canonical representative.

Invariant: gcd(num, den) = 1 and the denominator is monic under graded lex,
so structural equality coincides with equality in the fraction field.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DivisionByZero
from .poly import Poly, exact_div, poly_gcd


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if den is None:
            den = Poly.one()
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            self.num = Poly.zero()
            self.den = Poly.one()
            return
        if not reduced:
            if den.is_const():
                num = num.scale(1 / den.const_value())
                den = Poly.one()
            else:
                g = poly_gcd(num, den)
                if not (g.is_const() and g.const_value() == 1):
                    num = exact_div(num, g)
                    den = exact_div(den, g)
                _, lc = den.leading()
                if lc != 1:
                    num = num.scale(1 / lc)
                    den = den.scale(1 / lc)
        self.num = num
        self.den = den

    # construction ------------------------------------------------------

    @classmethod
    def const(cls, value) -> "RatFunc":
        return cls(Poly.const(Fraction(value)))

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        return cls(Poly.var(name))

    zero = classmethod(lambda cls: cls(Poly.zero()))
    one = classmethod(lambda cls: cls(Poly.one()))

    # predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not constant")
        if self.num.is_zero():
            return Fraction(0)
        return self.num.const_value() / self.den.const_value()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    # arithmetic --------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduced=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def scale(self, c: Fraction) -> "RatFunc":
        if not c:
            return RatFunc.zero()
        return RatFunc(self.num.scale(c), self.den, reduced=True)

    # identity ----------------------------------------------------------

    def key(self):
        return (self.num.key(), self.den.key())

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatFunc)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        if self.den.is_const() and self.den.const_value() == 1:
            return f"RatFunc({self.num!r})"
        return f"RatFunc({self.num!r} / {self.den!r})"
