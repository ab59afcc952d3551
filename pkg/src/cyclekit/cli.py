"""Command line front end.

Three subcommands: `run` executes a figure script and reports check
verdicts, `svg` renders a saved figure document to a file, and `serve`
exposes a live figure over HTTP. Verdicts print as True/False/Unknown;
under `assert` a False exits 1 and an Unknown exits 2, so proof scripts
cannot silently pass on an undecided statement.
"""

from __future__ import annotations

import argparse
import re
import socket
import sys
from fractions import Fraction
from pathlib import Path

from .cycle import Cycle
from .errors import CycleKitError, ParseError, PortInUse
from .figure import Figure, Relation, deserialize, new_figure, serialize
from .render import Viewport, render_figure
from .symkern import Trit, parse_cycle_triple, parse_expr, render_expr, \
    set_probe_seed

_SIGNATURES = (-1, 0, 1)
_TARGETED = {"orthogonal", "tangent", "steiner_power", "angle_cos_sq"}
_BARE = {"self_orthogonal", "passes_infinity", "only_reals"}
_VALUED = {"steiner_power", "angle_cos_sq"}
_VERDICT = {Trit.ZERO: "True", Trit.NONZERO: "False", Trit.UNKNOWN: "Unknown"}

_REL_RE = re.compile(
    r"^([a-z_]+)(?:\s*=\s*(.+?))?\s*\(\s*([A-Za-z_][\w.]*)\s*\)$")
_CHECK_RE = re.compile(r"^(assert\s+)?check\s+(\w+)\s+([\w.]+)\s+([\w.]+)$")
_MEASURE_RE = re.compile(r"^measure\s+(\w+)\s+([\w.]+)\s+([\w.]+)$")


def _split_top_level(text: str) -> list[str]:
    """Split on commas outside any bracket pair."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _parse_relation(text: str, fig: Figure, lineno: int) -> Relation:
    match = _REL_RE.match(text)
    if match:
        kind, value, target = match.groups()
        if kind not in _TARGETED:
            raise ParseError(f"unknown targeted relation {kind!r}",
                             line=lineno)
        if kind in _VALUED:
            if value is None:
                raise ParseError(f"{kind} needs '=<value>'", line=lineno)
            return Relation(kind, target, value=parse_expr(value, fig.tower))
        if value is not None:
            raise ParseError(f"{kind} takes no value", line=lineno)
        return Relation(kind, target)
    bare = text.strip()
    if bare in _BARE:
        return Relation(bare)
    raise ParseError(f"cannot parse relation {text!r}", line=lineno)


def _parse_assignment(pairs, lineno: int | None = None) -> dict[str, Fraction]:
    assignment = {}
    for pair in pairs:
        name, eq, value = pair.partition("=")
        if not eq or not name:
            raise ParseError(f"expected name=value, got {pair!r}", line=lineno)
        try:
            assignment[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad value for {name.strip()!r}: {exc}",
                             line=lineno) from exc
    return assignment


class _Session:
    """One script execution: a figure under construction plus verdict flags."""

    def __init__(self, base_dir: Path):
        self.base_dir = base_dir
        self.fig: Figure | None = None
        self.out: list[str] = []
        self.failed_assert = False
        self.unknown_assert = False

    def figure(self, lineno: int) -> Figure:
        if self.fig is None:
            raise ParseError("statement before the figure header",
                             line=lineno)
        return self.fig

    def path(self, name: str) -> Path:
        p = Path(name)
        return p if p.is_absolute() else self.base_dir / p

    def execute(self, line: str, lineno: int) -> None:
        match = _CHECK_RE.match(line)
        if match:
            self._do_check(match, lineno)
            return
        head = line.split(None, 1)[0]
        handler = None
        if head not in ("check", "assert"):
            handler = getattr(self, f"stmt_{head}", None)
        if handler is None:
            raise ParseError(f"cannot parse statement {line!r}", line=lineno)
        handler(line, lineno)

    def stmt_figure(self, line: str, lineno: int) -> None:
        if self.fig is not None:
            raise ParseError("duplicate figure header", line=lineno)
        parts = line.split()
        try:
            sigma, sigma_cycle = (int(p) for p in parts[1:3])
        except ValueError as exc:
            raise ParseError("figure header needs two integer signatures",
                             line=lineno) from exc
        if len(parts) != 3 or sigma not in _SIGNATURES \
                or sigma_cycle not in _SIGNATURES:
            raise ParseError("signatures must be -1, 0 or 1", line=lineno)
        self.fig = new_figure(sigma=sigma, sigma_cycle=sigma_cycle)

    def stmt_cycle(self, line: str, lineno: int) -> None:
        fig = self.figure(lineno)
        explicit = re.match(r"^cycle\s+(\w+)\s*=\s*(\(.*\))\s*$", line)
        if explicit:
            label, triple = explicit.groups()
            k, l, m = parse_cycle_triple(triple, fig.tower)
            if len(l) != fig.metric.dim:
                raise ParseError(
                    f"expected {fig.metric.dim} middle coefficients",
                    line=lineno)
            fig.add_cycle(Cycle(k, tuple(l), m, fig.metric), label)
            return
        related = re.match(r"^cycle\s+(\w+)\s*:\s*(.+)$", line)
        if not related:
            raise ParseError(f"cannot parse statement {line!r}", line=lineno)
        label, rels_text = related.groups()
        rels = [_parse_relation(part, fig, lineno)
                for part in _split_top_level(rels_text)]
        fig.add_cycle_rel(rels, label)

    def stmt_point(self, line: str, lineno: int) -> None:
        fig = self.figure(lineno)
        match = re.match(r"^point\s+(\w+)\s*=\s*\((.+)\)\s*$", line)
        if not match:
            raise ParseError(f"cannot parse statement {line!r}", line=lineno)
        label, body = match.groups()
        coords = _split_top_level(body)
        if len(coords) != fig.metric.dim:
            raise ParseError(f"expected {fig.metric.dim} coordinates",
                             line=lineno)
        fig.add_point(tuple(parse_expr(c, fig.tower) for c in coords), label)

    def _do_check(self, match: re.Match, lineno: int) -> None:
        fig = self.figure(lineno)
        asserted, kind, label1, label2 = match.groups()
        for verdict in fig.check_rel(label1, label2, kind):
            self.out.append(
                f"{label1} and {label2} are {kind}: {_VERDICT[verdict]}")
            if asserted and verdict is Trit.NONZERO:
                self.failed_assert = True
            if asserted and verdict is Trit.UNKNOWN:
                self.unknown_assert = True

    def stmt_measure(self, line: str, lineno: int) -> None:
        fig = self.figure(lineno)
        match = _MEASURE_RE.match(line)
        if not match:
            raise ParseError(f"cannot parse statement {line!r}", line=lineno)
        kind, label1, label2 = match.groups()
        for value in fig.measure(label1, label2, kind):
            self.out.append(
                f"{kind}({label1}, {label2}) = {render_expr(value)}")

    def stmt_print(self, line: str, lineno: int) -> None:
        if line.strip() != "print":
            raise ParseError(f"cannot parse statement {line!r}", line=lineno)
        self.out.append(self.figure(lineno).string())

    def stmt_svg(self, line: str, lineno: int) -> None:
        fig = self.figure(lineno)
        parts = line.split()
        if len(parts) < 2:
            raise ParseError("svg needs an output file", line=lineno)
        assignment = _parse_assignment(parts[2:], lineno)
        target = self.path(parts[1])
        target.write_text(render_figure(fig, Viewport(),
                                        assignment=assignment))
        self.out.append(f"wrote {parts[1]}")

    def stmt_save(self, line: str, lineno: int) -> None:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("save needs exactly one file", line=lineno)
        self.path(parts[1]).write_text(serialize(self.figure(lineno)))
        self.out.append(f"saved {parts[1]}")

    def stmt_load(self, line: str, lineno: int) -> None:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("load needs exactly one file", line=lineno)
        self.fig = deserialize(self.path(parts[1]).read_text())
        self.out.append(f"loaded {len(self.fig.nodes)} nodes")


def run_script_text(text: str, base_dir: Path | None = None) -> tuple[int, str]:
    session = _Session(base_dir or Path.cwd())
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            session.execute(line, lineno)
        except CycleKitError as exc:
            session.out.append(f"error: line {lineno}: {exc}")
            return 1, "\n".join(session.out)
        except OSError as exc:
            session.out.append(f"error: line {lineno}: {exc}")
            return 1, "\n".join(session.out)
    code = 1 if session.failed_assert else 2 if session.unknown_assert else 0
    return code, "\n".join(session.out)


def run_script(path) -> tuple[int, str]:
    script = Path(path)
    try:
        text = script.read_text()
    except OSError as exc:
        return 1, f"error: {exc}"
    return run_script_text(text, script.resolve().parent)


def cmd_svg(figure_path, out_path, params) -> tuple[int, str]:
    try:
        fig = deserialize(Path(figure_path).read_text())
        assignment = _parse_assignment(params)
        svg = render_figure(fig, Viewport(), assignment=assignment)
    except (CycleKitError, OSError) as exc:
        return 1, f"error: {exc}"
    Path(out_path).write_text(svg)
    return 0, f"wrote {out_path}"


def _check_port_free(bind: str, port: int) -> None:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((bind, port))
    except OSError as exc:
        raise PortInUse(f"cannot bind {bind}:{port}: {exc}") from exc
    finally:
        probe.close()


def cmd_serve(figure_path, port: int, bind: str) -> int:
    if figure_path:
        fig = deserialize(Path(figure_path).read_text())
    else:
        fig = new_figure()
    _check_port_free(bind, port)
    import uvicorn

    from .api_service import create_app
    uvicorn.run(create_app(fig), host=bind, port=port, log_level="warning")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclekit",
        description="Exact cycle geometry: scripts, SVG export, HTTP service")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for the randomized nonzero certification")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a figure script")
    p_run.add_argument("script")

    p_svg = sub.add_parser("svg", help="render a saved figure to SVG")
    p_svg.add_argument("figure")
    p_svg.add_argument("-o", "--out", required=True)
    p_svg.add_argument("-p", "--param", action="append", default=[],
                       metavar="NAME=VALUE")

    p_serve = sub.add_parser("serve", help="serve a figure over HTTP")
    p_serve.add_argument("figure", nargs="?")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--bind", default="127.0.0.1")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.seed is not None:
        set_probe_seed(args.seed)
    if args.command == "run":
        code, text = run_script(args.script)
        if text:
            print(text)
        return code
    if args.command == "svg":
        code, text = cmd_svg(args.figure, args.out, args.param)
        print(text)
        return code
    try:
        return cmd_serve(args.figure, args.port, args.bind)
    except (CycleKitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
