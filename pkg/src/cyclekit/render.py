"""Deterministic SVG rendering of cycles and figures.

The drawing plane carries its own quadratic form x^2 - sigma*y^2, chosen
independently of the algebraic signatures, so one figure can be drawn in
the elliptic (sigma=-1), parabolic (sigma=0) or hyperbolic (sigma=+1)
plane. All coordinates are emitted with six fractional digits and
round-half-even ties, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cycle import Cycle, inner, reflect
from .errors import (
    DegenerateMirror,
    MissingAssignment,
    NonNumeric,
    UnboundedDegenerate,
)
from .symkern import Trit, eval_numeric, precision_bits, render_expr

__all__ = [
    "Style",
    "StyleMap",
    "Viewport",
    "orbit_closure",
    "render_cycle",
    "render_figure",
    "render_orbit",
]


@dataclass(frozen=True)
class Viewport:
    """Visible window in plane coordinates plus raster hints."""

    xmin: Fraction = Fraction(-4)
    xmax: Fraction = Fraction(4)
    ymin: Fraction = Fraction(-3)
    ymax: Fraction = Fraction(3)
    width_px: int = 800
    height_px: int = 600
    samples: int = 512

    def __post_init__(self):
        if not self.xmin < self.xmax:
            raise ValueError("xmin must be below xmax")
        if not self.ymin < self.ymax:
            raise ValueError("ymin must be below ymax")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("pixel dimensions must be positive")
        if self.samples < 2:
            raise ValueError("need at least 2 samples")


@dataclass(frozen=True)
class Style:
    stroke: str = "#333333"
    width: float = 1.5
    dash: str = ""
    show_label: bool = False


@dataclass(frozen=True)
class StyleMap:
    default: Style = Style()
    per_node: Mapping[str, Style] = field(default_factory=dict)

    def for_node(self, key: str, label: str) -> Style:
        if label in self.per_node:
            return self.per_node[label]
        return self.per_node.get(key, self.default)


def _fmt(v: float) -> str:
    if v == 0.0:  # merge -0.0 with +0.0
        v = 0.0
    return f"{v:.6f}"


def _num(v) -> str:
    return f"{float(v):g}"


def _numeric_coefficients(c: Cycle):
    try:
        vals = [eval_numeric(x, {}, precision_bits()).midpoint()
                for x in c.coefficients()]
    except MissingAssignment as exc:
        names = ", ".join(sorted(exc.names))
        raise NonNumeric(f"free parameters left in cycle: {names}") from exc
    return [float(v) for v in vals]


def _is_zero(expr, fval: float) -> bool:
    zt = expr.zero_test()
    if zt is Trit.ZERO:
        return True
    if zt is Trit.NONZERO:
        return False
    return fval == 0.0


def _style_attrs(style: Style | None) -> str:
    if style is None:
        return ""
    parts = [f' stroke="{style.stroke}" stroke-width="{_num(style.width)}"']
    if style.dash:
        parts.append(f' stroke-dasharray="{style.dash}"')
    return "".join(parts)


def _marker_radius(vp: Viewport) -> float:
    return 3.0 * float(vp.xmax - vp.xmin) / vp.width_px


def _marker(x: float, y: float, vp: Viewport, attrs: str) -> str:
    return (f'<circle class="point" cx="{_fmt(x)}" cy="{_fmt(y)}" '
            f'r="{_fmt(_marker_radius(vp))}"{attrs}/>')


def _clip_line(l: float, n: float, m: float, vp: Viewport):
    """Segment of the line 2*l*x + 2*n*y = m inside the viewport, or None."""
    nn = l * l + n * n
    if nn == 0.0:
        return None
    px, py = l * m / (2 * nn), n * m / (2 * nn)
    dx, dy = -n, l
    t0, t1 = -math.inf, math.inf
    for p, d, lo, hi in ((px, dx, float(vp.xmin), float(vp.xmax)),
                         (py, dy, float(vp.ymin), float(vp.ymax))):
        if d == 0.0:
            if p < lo or p > hi:
                return None
            continue
        ta, tb = (lo - p) / d, (hi - p) / d
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
    if not t0 < t1 or math.isinf(t0) or math.isinf(t1):
        return None
    return ((px + t0 * dx, py + t0 * dy), (px + t1 * dx, py + t1 * dy))


def _line_fragment(l, n, m, vp, attrs) -> str:
    seg = _clip_line(l, n, m, vp)
    if seg is None:
        return ""
    (x1, y1), (x2, y2) = seg
    return (f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}"{attrs}/>')


def _sample_branches(k, l, n, m, sigma, vp):
    """Polyline vertex runs for the sigma != 0, k != 0 locus, split where
    the branch radicand goes negative."""
    xs = [float(vp.xmin) + i * float(vp.xmax - vp.xmin) / (vp.samples - 1)
          for i in range(vp.samples)]
    runs = []
    for sign in (1.0, -1.0):
        current = []
        for x in xs:
            q = k * x * x - 2 * l * x + m
            rad = n * n + sigma * k * q
            if rad < 0.0:
                if len(current) >= 2:
                    runs.append(current)
                current = []
                continue
            current.append((x, (-n + sign * math.sqrt(rad)) / (sigma * k)))
        if len(current) >= 2:
            runs.append(current)
    return runs


def _polyline(points, attrs) -> str:
    body = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return f'<polyline points="{body}"{attrs}/>'


def render_cycle(c: Cycle, sigma, vp: Viewport, style: Style | None = None) -> str:
    """SVG fragment for one parameter-free cycle in the given plane metric.

    Circles in the elliptic plane use a native circle element; lines are
    clipped segments; parabolic and hyperbolic loci are sampled polylines.
    """
    k, l, n, m = _numeric_coefficients(c)
    ck, cl, cn, _cm = c.coefficients()
    kz = _is_zero(ck, k)
    attrs = _style_attrs(style)

    if kz:
        if _is_zero(cl, l) and _is_zero(cn, n):
            raise UnboundedDegenerate("locus has no finite restriction")
        return _line_fragment(l, n, m, vp, attrs)

    sigma = int(sigma)
    if sigma == -1:
        rsq = (l * l + n * n - k * m) / (k * k)
        if inner(c, c).zero_test() is Trit.ZERO or rsq == 0.0:
            return _marker(l / k, n / k, vp, attrs)
        if rsq < 0.0:
            return ""  # no real locus
        return (f'<circle cx="{_fmt(l / k)}" cy="{_fmt(n / k)}" '
                f'r="{_fmt(math.sqrt(rsq))}"{attrs}/>')

    if sigma == 0:
        if _is_zero(cn, n):
            disc = l * l - k * m
            if disc < 0.0:
                return ""
            root = math.sqrt(disc)
            xs = sorted({(l - root) / k, (l + root) / k})
            return "".join(
                f'<line x1="{_fmt(x)}" y1="{_fmt(float(vp.ymin))}" '
                f'x2="{_fmt(x)}" y2="{_fmt(float(vp.ymax))}"{attrs}/>'
                for x in xs)
        step = float(vp.xmax - vp.xmin) / (vp.samples - 1)
        pts = []
        for i in range(vp.samples):
            x = float(vp.xmin) + i * step
            pts.append((x, (k * x * x - 2 * l * x + m) / (2 * n)))
        return _polyline(pts, attrs)

    if sigma == 1:
        runs = _sample_branches(k, l, n, m, 1, vp)
        return "".join(_polyline(run, attrs) for run in runs)

    raise ValueError(f"plane metric must be -1, 0 or 1, got {sigma}")


def _document(vp: Viewport, body: str, extra_root_attrs: str = "") -> str:
    vb = (f"{_fmt(float(vp.xmin))} {_fmt(-float(vp.ymax))} "
          f"{_fmt(float(vp.xmax - vp.xmin))} {_fmt(float(vp.ymax - vp.ymin))}")
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{vp.width_px}" '
        f'height="{vp.height_px}" viewBox="{vb}"{extra_root_attrs}>\n'
        f'<rect class="background" x="{_fmt(float(vp.xmin))}" '
        f'y="{_fmt(-float(vp.ymax))}" width="{_fmt(float(vp.xmax - vp.xmin))}" '
        f'height="{_fmt(float(vp.ymax - vp.ymin))}" fill="#ffffff"/>\n'
        f'<g class="content" transform="scale(1 -1)" fill="none">\n'
        f"{body}"
        "</g>\n</svg>\n"
    )


def _label_text(label: str, x: float, y: float, vp: Viewport) -> str:
    size = 12.0 * float(vp.xmax - vp.xmin) / vp.width_px
    return (f'<text x="{_fmt(x + _marker_radius(vp))}" y="{_fmt(-y)}" '
            f'transform="scale(1 -1)" class="label" font-size="{_fmt(size)}" '
            f'stroke="none" fill="#000000">{label}</text>')


def _instance_anchor(k, l, n, m, vp):
    if k != 0.0:
        return (l / k, n / k)
    seg = _clip_line(l, n, m, vp)
    if seg is None:
        return None
    (x1, y1), (x2, y2) = seg
    return ((x1 + x2) / 2, (y1 + y2) / 2)


def render_figure(fig, vp: Viewport | None = None,
                  styles: StyleMap | None = None,
                  assignment: Mapping[str, object] | None = None,
                  *, sigma=None, show_reserved: bool = False) -> str:
    """Complete SVG document for every solved instance of a figure.

    Free parameters of drawn nodes must all appear in the assignment.
    Reserved nodes are omitted unless show_reserved is set.
    """
    vp = vp or Viewport()
    styles = styles or StyleMap()
    assignment = {name: Fraction(v) if not hasattr(v, "zero_test") else v
                  for name, v in (assignment or {}).items()}
    if sigma is None:
        sigma = fig.metric.sigma

    needed = set()
    for node in fig.nodes.values():
        if node.reserved and not show_reserved:
            continue
        for inst in node.instances:
            needed |= inst.param_names()
    missing = sorted(needed - set(assignment))
    if missing:
        raise MissingAssignment(missing)

    bits = precision_bits()
    groups = []
    for node in fig.nodes.values():
        if node.reserved and not show_reserved:
            continue
        style = styles.for_node(node.key, node.label)
        kind_class = "point" if node.kind == "point" else "cycle"
        gen_class = f"gen-{node.generation}" if node.generation >= 0 \
            else "reserved"
        fill = f' fill="{style.stroke}"' if node.kind == "point" else ""
        parts = [f'<g class="{kind_class} {gen_class}"'
                 f"{_style_attrs(style)}{fill}>"]
        anchor = None
        for i, inst in enumerate(node.instances):
            vals = [eval_numeric(x, assignment, bits).midpoint()
                    for x in inst.coefficients()]
            numeric = Cycle(vals[0], (vals[1], vals[2]), vals[3], fig.metric)
            k, l, n, m = (float(v) for v in vals)
            if node.kind == "point" and k != 0.0:
                fragment = _marker(l / k, n / k, vp, "")
            else:
                try:
                    fragment = render_cycle(numeric, sigma, vp)
                except UnboundedDegenerate:
                    if node.reserved:
                        continue  # the point at infinity has nothing to draw
                    raise
            classes = ' class="line"' if k == 0.0 else ""
            parts.append(f'<g id="node-{node.key}-inst-{i}"{classes}>'
                         f"{fragment}</g>")
            if anchor is None:
                anchor = _instance_anchor(k, l, n, m, vp)
        if style.show_label and anchor is not None:
            parts.append(_label_text(node.label, anchor[0], anchor[1], vp))
        parts.append("</g>")
        groups.append("".join(parts))
    body = "".join(f"{g}\n" for g in groups)
    return _document(vp, body)


def _locus_key(c: Cycle):
    coeffs = c.coefficients()
    for x in coeffs:
        if x.zero_test() is Trit.NONZERO:
            return tuple(render_expr(y / x) for y in coeffs)
    return tuple(render_expr(y) for y in coeffs)


def orbit_closure(mirrors: Sequence[Cycle], seed: Cycle,
                  depth: int) -> list[Cycle]:
    """Distinct reflection images of the seed under mirror words of
    length at most depth, breadth first, deduplicated up to scale."""
    if not 0 <= depth <= 12:
        raise ValueError("depth must lie between 0 and 12")
    for mirror in mirrors:
        if inner(mirror, mirror).zero_test() is Trit.ZERO:
            raise DegenerateMirror("mirror has zero self-pairing")

    seen = {_locus_key(seed): seed}
    frontier = [seed]
    for _ in range(depth):
        fresh = []
        for cyc in frontier:
            for mirror in mirrors:
                image = reflect(mirror, cyc)
                key = _locus_key(image)
                if key not in seen:
                    seen[key] = image
                    fresh.append(image)
        if not fresh:
            break
        frontier = fresh
    return list(seen.values())


def render_orbit(mirrors: Sequence[Cycle], seed: Cycle, depth: int,
                 vp: Viewport | None = None, *, sigma=None,
                 style: Style | None = None) -> str:
    """Reflection images of the seed under words in the mirrors.

    Breadth-first closure up to the given word length, deduplicated up to
    scale; the root element carries the image count in data-orbit-count.
    """
    vp = vp or Viewport()
    if sigma is None:
        sigma = seed.metric.sigma
    images = orbit_closure(mirrors, seed, depth)
    rows = []
    for i, cyc in enumerate(images):
        fragment = render_cycle(cyc, sigma, vp, style)
        rows.append(f'<g id="orbit-{i}" class="cycle">{fragment}</g>\n')
    return _document(vp, "".join(rows),
                     f' data-orbit-count="{len(images)}"')
