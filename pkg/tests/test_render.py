"""SVG output: element fragments, sampling soundness, documents, orbits."""

import math
import re
from fractions import Fraction

import pytest

from cyclekit.cycle import Cycle, Metric, point_cycle
from cyclekit.errors import (
    DegenerateMirror,
    MissingAssignment,
    NonNumeric,
    UnboundedDegenerate,
)
from cyclekit.figure import new_figure
from cyclekit.render import (
    Style,
    StyleMap,
    Viewport,
    render_cycle,
    render_figure,
    render_orbit,
)
from cyclekit.render import _sample_branches
from cyclekit.symkern import Expr

from test_figure import build_tangent_chain

M = Metric(2, -1, -1)
VP = Viewport(Fraction(-3), Fraction(3), Fraction(-3), Fraction(3),
              600, 600, samples=65)


def vertices(fragment):
    pts = []
    for blob in re.findall(r'points="([^"]*)"', fragment):
        pts += [tuple(map(float, pair.split(",")))
                for pair in blob.split()]
    return pts


def residual_ok(coeffs, sigma, pts):
    k, l, n, m = coeffs
    scale = max(1.0, *(abs(v) for v in coeffs))
    for x, y in pts:
        res = k * (x * x - sigma * y * y) - 2 * l * x - 2 * n * y + m
        assert abs(res) <= 1e-6 * scale * (1 + x * x + y * y), (x, y, res)


class TestViewport:
    def test_validation(self):
        with pytest.raises(ValueError):
            Viewport(xmin=Fraction(2), xmax=Fraction(1))
        with pytest.raises(ValueError):
            Viewport(ymin=Fraction(0), ymax=Fraction(0))
        with pytest.raises(ValueError):
            Viewport(width_px=0)
        with pytest.raises(ValueError):
            Viewport(samples=1)


class TestRenderCycle:
    def test_unit_circle_native_element(self):
        frag = render_cycle(Cycle(1, (0, 0), -1, M), -1, VP)
        assert frag == '<circle cx="0.000000" cy="0.000000" r="1.000000"/>'

    def test_horizontal_line_segment(self):
        frag = render_cycle(Cycle(0, (0, 1), 2, M), -1, VP)
        assert 'y1="1.000000"' in frag and 'y2="1.000000"' in frag
        xs = sorted(float(v) for v in re.findall(r'x\d="([^"]*)"', frag))
        assert xs == [-3.0, 3.0]

    def test_line_outside_viewport_is_empty(self):
        assert render_cycle(Cycle(0, (0, 1), 20, M), -1, VP) == ""

    def test_parabolic_metric_parabola(self):
        coeffs = (1.0, 0.0, 1.0, 0.0)  # x^2 = 2y
        frag = render_cycle(Cycle(1, (0, 1), 0, M), 0, VP)
        pts = vertices(frag)
        assert len(pts) == VP.samples
        residual_ok(coeffs, 0, pts)
        assert (0.0, 0.0) in pts

    def test_parabolic_metric_vertical_lines(self):
        frag = render_cycle(Cycle(1, (0, 0), -1, M), 0, VP)  # x^2 = 1
        xs = re.findall(r'x1="([^"]*)"', frag)
        assert xs == ["-1.000000", "1.000000"]
        assert frag.count("<line") == 2

    def test_hyperbolic_metric_branches(self):
        c = Cycle(1, (0, 0), -1, M)  # x^2 - y^2 = 1
        frag = render_cycle(c, 1, VP)
        assert frag.count("<polyline") == 4  # two arcs per sign
        residual_ok((1.0, 0.0, 0.0, -1.0), 1, vertices(frag))

    def test_hyperbolic_metric_degenerate_cross(self):
        frag = render_cycle(Cycle(1, (0, 0), 0, M), 1, VP)  # y = +-x
        residual_ok((1.0, 0.0, 0.0, 0.0), 1, vertices(frag))

    def test_point_marker(self):
        frag = render_cycle(point_cycle((1, 2), M), -1, VP)
        assert 'class="point"' in frag
        assert 'cx="1.000000" cy="2.000000"' in frag

    def test_imaginary_circle_draws_nothing(self):
        assert render_cycle(Cycle(1, (0, 0), 1, M), -1, VP) == ""

    def test_unbounded_degenerate(self):
        with pytest.raises(UnboundedDegenerate):
            render_cycle(Cycle(0, (0, 0), 1, M), -1, VP)

    def test_free_params_rejected(self):
        c = Cycle(1, (Expr.parameter("t"), 0), 0, M)
        with pytest.raises(NonNumeric):
            render_cycle(c, -1, VP)

    def test_style_attributes(self):
        frag = render_cycle(Cycle(1, (0, 0), -1, M), -1, VP,
                            Style(stroke="#ff0000", width=2, dash="4 2"))
        assert 'stroke="#ff0000"' in frag
        assert 'stroke-width="2"' in frag
        assert 'stroke-dasharray="4 2"' in frag

    def test_circle_fast_path_matches_sampling(self):
        # sampled vertices of an elliptic circle stay on the native circle
        runs = _sample_branches(1.0, 0.5, -0.25, -1.0, -1, VP)
        cx, cy = 0.5, -0.25
        r = math.sqrt(cx * cx + cy * cy + 1.0)
        frag = render_cycle(Cycle(1, (Fraction(1, 2), Fraction(-1, 4)),
                                  -1, M), -1, VP)
        assert f'r="{r:.6f}"' in frag
        for run in runs:
            for x, y in run:
                assert abs(math.hypot(x - cx, y - cy) - r) <= 1e-6


class TestRenderFigure:
    def test_document_structure_and_ids(self):
        F = build_tangent_chain()
        svg = render_figure(F, VP, assignment={"u_l": Fraction(1, 2)})
        assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg"')
        assert 'viewBox="-3.000000 -3.000000 6.000000 6.000000"' in svg
        for needle in ('node-a.0-inst-0', 'node-l.2-inst-0',
                       'node-l.2-inst-1', 'node-P.3-inst-1',
                       'node-r.4-inst-0', 'class="point', 'class="line"',
                       'gen-0', 'gen-3', '<circle', '<line'):
            assert needle in svg, needle
        # reserved nodes stay hidden
        assert "node-infty" not in svg and "node-R" not in svg

    def test_byte_determinism(self):
        F = build_tangent_chain()
        a = render_figure(F, VP, assignment={"u_l": Fraction(1, 2)})
        b = render_figure(F, VP, assignment={"u_l": Fraction(1, 2)})
        assert a == b

    def test_missing_assignment(self):
        F = build_tangent_chain()
        with pytest.raises(MissingAssignment) as err:
            render_figure(F, VP)
        assert "u_l" in err.value.names

    def test_empty_figure_background_only(self):
        svg = render_figure(new_figure(), VP)
        assert 'class="background"' in svg
        assert "node-" not in svg
        assert svg.rstrip().endswith("</svg>")

    def test_show_reserved_draws_axis(self):
        svg = render_figure(new_figure(), VP, show_reserved=True)
        assert "node-R-inst-0" in svg  # the axis is drawable
        assert "node-infty-inst" not in svg  # infinity has no locus

    def test_styles_and_labels(self):
        F = new_figure()
        F.add_point((1, 1), "p")
        styles = StyleMap(default=Style(show_label=True),
                          per_node={"p": Style(stroke="#00ff00",
                                               show_label=True)})
        svg = render_figure(F, VP, styles)
        assert 'fill="#00ff00"' in svg
        assert ">p</text>" in svg

    def test_sigma_override(self):
        F = new_figure()
        F.add_cycle(Cycle(1, (0, 1), 0, F.metric), "par")
        svg = render_figure(F, VP, sigma=0)
        residual_ok((1.0, 0.0, 1.0, 0.0), 0, vertices(svg))


class TestRenderOrbit:
    def mirrors(self):
        return [Cycle(0, (1, 0), 0, M), Cycle(0, (0, 1), 0, M)]

    def seed(self):
        return Cycle(1, (1, 1), Fraction(7, 4), M)

    def count(self, svg):
        return int(re.search(r'data-orbit-count="(\d+)"', svg).group(1))

    def test_single_mirror(self):
        svg = render_orbit([self.mirrors()[0]], self.seed(), 1, VP)
        assert self.count(svg) == 2

    def test_klein_four_group(self):
        # two perpendicular mirror lines generate exactly 4 images
        svg = render_orbit(self.mirrors(), self.seed(), 2, VP)
        assert self.count(svg) == 4
        assert svg.count("<circle") == 4
        # deeper words add nothing new
        deeper = render_orbit(self.mirrors(), self.seed(), 5, VP)
        assert self.count(deeper) == 4

    def test_depth_zero_is_seed_only(self):
        assert self.count(render_orbit(self.mirrors(), self.seed(),
                                       0, VP)) == 1

    def test_determinism(self):
        a = render_orbit(self.mirrors(), self.seed(), 3, VP)
        b = render_orbit(self.mirrors(), self.seed(), 3, VP)
        assert a == b

    def test_depth_cap(self):
        with pytest.raises(ValueError):
            render_orbit(self.mirrors(), self.seed(), 13, VP)

    def test_degenerate_mirror(self):
        with pytest.raises(DegenerateMirror):
            render_orbit([point_cycle((0, 0), M)], self.seed(), 1, VP)
