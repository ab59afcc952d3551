"""REST facade over one live in-memory figure.

A single session per process holds the figure plus a revision counter
that increments on every successful mutation. Mutations serialize
through one lock; optimistic clients may send expected_revision and get
a 409 when stale. Error responses carry {code, message, details}.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    ArityMismatch,
    CycleKitError,
    DimensionMismatch,
    DuplicateLabel,
    HasDependents,
    MissingAssignment,
    NoRelations,
    NotARoot,
    ParseError,
    ReservedNode,
    RevisionMismatch,
    SchemaVersionMismatch,
    UnknownKey,
    UnknownTarget,
    UnsatisfiableRelations,
    UnsupportedKind,
)
from .figure import Figure, new_figure
from .figure.serialize import (
    _cycle_doc,
    _parse_cycle,
    _parse_relation,
    figure_to_doc,
)
from .render import Viewport, render_figure
from .symkern import Trit, parse_expr

_STATUS = {
    ParseError: 400,
    SchemaVersionMismatch: 400,
    UnsupportedKind: 400,
    UnknownKey: 404,
    DuplicateLabel: 409,
    NotARoot: 409,
    ReservedNode: 409,
    HasDependents: 409,
    RevisionMismatch: 409,
    UnknownTarget: 422,
    UnsatisfiableRelations: 422,
    NoRelations: 422,
    ArityMismatch: 422,
    DimensionMismatch: 422,
    MissingAssignment: 422,
}

_VERDICT = {Trit.ZERO: "True", Trit.NONZERO: "False", Trit.UNKNOWN: "Unknown"}

_VIEWPORT_KEYS = ("xmin", "xmax", "ymin", "ymax")


def _error_details(exc: CycleKitError) -> dict:
    if isinstance(exc, MissingAssignment):
        return {"names": exc.names}
    if isinstance(exc, RevisionMismatch):
        return {"current_revision": exc.current}
    if isinstance(exc, ParseError):
        return {"line": exc.line, "column": exc.column}
    return {}


class SessionState:
    def __init__(self, fig: Figure):
        self.fig = fig
        self.revision = 0
        self.params: dict[str, Fraction] = {}
        self.lock = threading.Lock()


def _expr_texts(value, where: str):
    """Normalize JSON numbers to expression text, leave strings alone."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool) or value is None:
        raise ParseError(f"{where}: expected a number or expression string")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return str(Fraction(str(value)))
    raise ParseError(f"{where}: expected a number or expression string")


def _normalized_cycle_doc(doc, where: str) -> dict:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: cycle must be an object")
    out = dict(doc)
    if "k" in out:
        out["k"] = _expr_texts(out["k"], where)
    if "m" in out:
        out["m"] = _expr_texts(out["m"], where)
    if isinstance(out.get("l"), list):
        out["l"] = [_expr_texts(v, where) for v in out["l"]]
    return out


def _node_summary(fig: Figure, key: str, revision: int) -> dict:
    node = fig.nodes[key]
    return {
        "key": node.key,
        "label": node.label,
        "kind": node.kind,
        "generation": node.generation,
        "status": node.status,
        "free_params": list(node.free_params),
        "instances": [_cycle_doc(c) for c in node.instances],
        "revision": revision,
    }


def create_app(fig: Figure | None = None) -> FastAPI:
    app = FastAPI(title="cyclekit figure service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = SessionState(fig if fig is not None else new_figure())
    app.state.session = state

    @app.exception_handler(CycleKitError)
    async def _cyclekit_error(_request: Request, exc: CycleKitError):
        status = 422
        for klass, code in _STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "message": str(exc),
                     "details": _error_details(exc)})

    def _guard_revision(body: dict) -> None:
        expected = body.get("expected_revision")
        if expected is not None and expected != state.revision:
            raise RevisionMismatch(state.revision)

    @app.get("/figure")
    def get_figure() -> dict:
        with state.lock:
            doc = figure_to_doc(state.fig)
            doc["revision"] = state.revision
            return doc

    @app.post("/figure/nodes")
    def post_node(body: dict = Body(...)) -> dict:
        with state.lock:
            _guard_revision(body)
            label = body.get("label")
            if not isinstance(label, str) or not label:
                raise ParseError("body needs a non-empty label")
            forms = [f for f in ("cycle", "point", "relations") if f in body]
            if len(forms) != 1:
                raise ParseError(
                    "body needs exactly one of cycle, point or relations")
            fig = state.fig
            if forms[0] == "cycle":
                doc = _normalized_cycle_doc(body["cycle"], label)
                key = fig.add_cycle(
                    _parse_cycle(doc, fig.metric, fig.tower, label), label)
            elif forms[0] == "point":
                coords = body["point"]
                if not isinstance(coords, list) \
                        or len(coords) != fig.metric.dim:
                    raise ParseError(
                        f"point needs {fig.metric.dim} coordinates")
                point = tuple(parse_expr(_expr_texts(v, label), fig.tower)
                              for v in coords)
                key = fig.add_point(point, label)
            else:
                rels_doc = body["relations"]
                if not isinstance(rels_doc, list):
                    raise ParseError("relations must be a list")
                rels = []
                for rel in rels_doc:
                    if not isinstance(rel, dict):
                        raise ParseError("each relation must be an object")
                    rel = dict(rel)
                    rel.setdefault("target", "SELF")
                    if "value" in rel and rel["value"] is not None:
                        rel["value"] = _expr_texts(rel["value"], label)
                    rels.append(_parse_relation(rel, fig.tower, label))
                key = fig.add_cycle_rel(rels, label)
            state.revision += 1
            return _node_summary(fig, key, state.revision)

    @app.patch("/figure/nodes/{key}")
    def patch_node(key: str, body: dict = Body(...)) -> dict:
        with state.lock:
            _guard_revision(body)
            fig = state.fig
            if "point" in body:
                coords = body["point"]
                if not isinstance(coords, list) \
                        or len(coords) != fig.metric.dim:
                    raise ParseError(
                        f"point needs {fig.metric.dim} coordinates")
                point = tuple(parse_expr(_expr_texts(v, key), fig.tower)
                              for v in coords)
                updated = fig.modify_point(key, point)
            elif "cycle" in body:
                doc = _normalized_cycle_doc(body["cycle"], key)
                updated = fig.modify_cycle(
                    key, _parse_cycle(doc, fig.metric, fig.tower, key))
            else:
                raise ParseError("body needs point or cycle")
            state.revision += 1
            return {"revision": state.revision, "updated_keys": updated}

    @app.post("/figure/check")
    def post_check(body: dict = Body(...)) -> dict:
        with state.lock:
            for field in ("k1", "k2", "kind"):
                if not isinstance(body.get(field), str):
                    raise ParseError(f"body needs string field {field!r}")
            verdicts = state.fig.check_rel(body["k1"], body["k2"],
                                           body["kind"])
            return {"verdicts": [_VERDICT[v] for v in verdicts],
                    "revision": state.revision}

    @app.get("/figure/render.svg")
    def get_render(request: Request) -> Response:
        with state.lock:
            query = dict(request.query_params)
            window = {}
            for name in _VIEWPORT_KEYS:
                if name in query:
                    try:
                        window[name] = Fraction(query.pop(name))
                    except (ValueError, ZeroDivisionError) as exc:
                        raise ParseError(f"bad viewport value {name}: {exc}")
            for name, attr in (("width", "width_px"), ("height", "height_px"),
                               ("samples", "samples")):
                if name in query:
                    try:
                        window[attr] = int(query.pop(name))
                    except ValueError as exc:
                        raise ParseError(f"bad viewport value {name}: {exc}")
            sigma = None
            if "sigma" in query:
                try:
                    sigma = int(query.pop("sigma"))
                except ValueError as exc:
                    raise ParseError(f"bad sigma: {exc}")
            assignment = dict(state.params)
            for name, value in query.items():
                try:
                    assignment[name] = Fraction(value)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad value for parameter {name}: {exc}")
            svg = render_figure(state.fig, Viewport(**window),
                                assignment=assignment, sigma=sigma)
            return Response(content=svg, media_type="image/svg+xml")

    @app.delete("/figure/nodes/{key}")
    def delete_node(key: str, cascade: bool = Query(False)) -> dict:
        with state.lock:
            removed = state.fig.delete_cycle(key, cascade=cascade)
            state.revision += 1
            return {"revision": state.revision, "removed_keys": removed}

    return app
