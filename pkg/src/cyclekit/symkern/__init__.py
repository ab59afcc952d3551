"""Exact scalar kernel: rationals, rational functions, square-root towers."""

from .config import precision_bits, precision_ladder, probe_seed, set_probe_seed
from .expr import Expr, SqrtAtom, Tower, Trit, as_expr, eval_numeric
from .interval import Interval
from .poly import Poly, poly_gcd, poly_sqrt, squarefree_split
from .ratfunc import RatFunc
from .solve import LinearSolution, solve_linear, solve_quadratic
from .textio import parse_cycle_triple, parse_expr, render_expr

__all__ = [
    "Expr", "SqrtAtom", "Tower", "Trit", "as_expr", "eval_numeric",
    "Interval", "Poly", "poly_gcd", "poly_sqrt", "squarefree_split",
    "RatFunc", "LinearSolution", "solve_linear", "solve_quadratic",
    "parse_cycle_triple", "parse_expr", "render_expr",
    "precision_bits", "precision_ladder", "probe_seed", "set_probe_seed",
]
