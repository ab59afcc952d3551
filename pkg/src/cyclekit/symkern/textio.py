"""Canonical text form of expressions, and its parser.

The renderer is deterministic (terms ordered by atom ids, monomials by
graded lex descending), and everything it emits parses back: integers,
fractions via '/', parameter names, sqrt(...), infix + - * / ^ and parens.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ParseError
from .expr import Expr, Tower
from .poly import Poly
from .ratfunc import RatFunc

# ------------------------------------------------------------- rendering


def _mono_str(mono, coeff: Fraction) -> str:
    vars_part = "*".join(f"{n}^{e}" if e > 1 else n for n, e in mono)
    if not vars_part:
        return str(coeff)
    if coeff == 1:
        return vars_part
    if coeff == -1:
        return "-" + vars_part
    return f"{coeff}*{vars_part}"


def _poly_str(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = [_mono_str(m, c) for m, c in p.sorted_terms()]
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _wrap(s: str) -> str:
    # a/b*c and a/b/c parse left to right exactly as intended, so a plain
    # fraction needs no parens; sums and interior signs do
    bare = s.lstrip("-")
    if any(ch in bare for ch in " +-"):
        return "(" + s + ")"
    return s


def _wrap_den(s: str) -> str:
    # right of '/', anything but a lone name, power or integer needs parens
    if any(ch in s for ch in " +-*/"):
        return "(" + s + ")"
    return s


def _ratfunc_str(rf: RatFunc) -> str:
    num = _poly_str(rf.num)
    if rf.den.is_const() and rf.den.const_value() == 1:
        return num
    return f"{_wrap(num)}/{_wrap_den(_poly_str(rf.den))}"


def render_expr(e: Expr) -> str:
    if e.is_zero():
        return "0"
    parts = []
    for key in sorted(e.terms, key=lambda k: tuple(a.id for a in k)):
        rf = e.terms[key]
        roots = "*".join(f"sqrt({render_expr(a.radicand)})" for a in key)
        if not roots:
            parts.append(_ratfunc_str(rf))
        elif rf.is_const() and rf.const_value() == 1:
            parts.append(roots)
        elif rf.is_const() and rf.const_value() == -1:
            parts.append("-" + roots)
        else:
            parts.append(f"{_wrap(_ratfunc_str(rf))}*{roots}")
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


# --------------------------------------------------------------- parsing


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []  # (kind, value, column)
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.items.append(("int", text[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("name", text[i:j], i))
                i = j
                continue
            if ch in "+-*/^(),[]=":
                self.items.append((ch, ch, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", line=1, column=i + 1)
        self.items.append(("end", "", n))
        self.pos = 0

    def peek(self):
        return self.items[self.pos]

    def next(self):
        tok = self.items[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}",
                             line=1, column=tok[2] + 1)
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, line=1, column=tok[2] + 1)


class _ExprParser:
    def __init__(self, tokens: _Tokens, tower: Tower):
        self.toks = tokens
        self.tower = tower

    def parse_expr(self) -> Expr:
        value = self.parse_term()
        while self.toks.peek()[0] in "+-":
            op = self.toks.next()[0]
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self) -> Expr:
        value = self.parse_unary()
        while self.toks.peek()[0] in "*/":
            op = self.toks.next()[0]
            rhs = self.parse_unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def parse_unary(self) -> Expr:
        sign = 1
        while self.toks.peek()[0] in "+-":
            if self.toks.next()[0] == "-":
                sign = -sign
        value = self.parse_power()
        return value if sign > 0 else -value

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.toks.peek()[0] == "^":
            self.toks.next()
            neg = False
            if self.toks.peek()[0] == "-":
                self.toks.next()
                neg = True
            exp = int(self.toks.expect("int")[1])
            if neg:
                return Expr.from_fraction(1) / base ** exp
            return base ** exp
        return base

    def parse_atom(self) -> Expr:
        kind, value, col = self.toks.next()
        if kind == "int":
            return Expr.from_fraction(int(value))
        if kind == "name":
            if value == "sqrt" and self.toks.peek()[0] == "(":
                self.toks.next()
                inner = self.parse_expr()
                self.toks.expect(")")
                return self.tower.adjoin_sqrt(inner)
            return Expr.parameter(value)
        if kind == "(":
            inner = self.parse_expr()
            self.toks.expect(")")
            return inner
        raise ParseError(f"unexpected token {value!r}", line=1, column=col + 1)


def parse_expr(text: str, tower: Tower) -> Expr:
    toks = _Tokens(text)
    parser = _ExprParser(toks, tower)
    value = parser.parse_expr()
    if toks.peek()[0] != "end":
        toks.fail(f"trailing input {toks.peek()[1]!r}")
    return value


def parse_cycle_triple(text: str, tower: Tower) -> tuple[Expr, list[Expr], Expr]:
    """Parse the tuple form '(k, [l1, l2], m)' used by scripts."""
    toks = _Tokens(text)
    parser = _ExprParser(toks, tower)
    toks.expect("(")
    k = parser.parse_expr()
    toks.expect(",")
    toks.expect("[")
    l: list[Expr] = [parser.parse_expr()]
    while toks.peek()[0] == ",":
        toks.next()
        l.append(parser.parse_expr())
    toks.expect("]")
    toks.expect(",")
    m = parser.parse_expr()
    toks.expect(")")
    if toks.peek()[0] != "end":
        toks.fail("trailing input after cycle tuple")
    return k, l, m
