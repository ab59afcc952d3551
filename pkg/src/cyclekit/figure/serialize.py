"""Figure documents: versioned JSON with expression coefficients as text.

Unknown document keys are ignored so that enclosing protocols may add
their own fields (the REST service stores its revision alongside).
"""

from __future__ import annotations

import json

from ..cycle import Cycle, Metric
from ..errors import ParseError, SchemaVersionMismatch
from ..symkern import Trit, parse_expr, render_expr
from .model import (
    INFTY_KEY,
    REAL_AXIS_KEY,
    Figure,
    Node,
    Subfigure,
    _SubPayload,
)
from .solver import SELF, Relation

SCHEMA_VERSION = 1


def _expr_text(e) -> str:
    return render_expr(e)


def _cycle_doc(c: Cycle) -> dict:
    return {
        "k": _expr_text(c.k),
        "l": [_expr_text(c.l[0]), _expr_text(c.l[1])],
        "m": _expr_text(c.m),
    }


def _relation_doc(r: Relation) -> dict:
    doc = {"kind": r.kind, "target": r.target}
    if r.value is not None:
        doc["value"] = _expr_text(r.value)
    return doc


def _node_doc(fig: Figure, node: Node) -> dict:
    doc = {
        "key": node.key,
        "label": node.label,
        "kind": node.kind,
        "generation": node.generation,
        "relations": [_relation_doc(r) for r in node.relations],
        "instances": [_cycle_doc(c) for c in node.instances],
        "free_params": list(node.free_params),
        "status": node.status,
    }
    if node.reality_conditions:
        doc["reality_conditions"] = [
            _expr_text(e) for e in node.reality_conditions]
    if node.sub is not None:
        doc["subfigure"] = {
            "figure": figure_to_doc(node.sub.sub.figure),
            "inputs": list(node.sub.sub.inputs),
            "result": node.sub.sub.result,
            "input_keys": list(node.sub.input_keys),
        }
    return doc


def figure_to_doc(fig: Figure) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "metric": {
            "dim": fig.metric.dim,
            "sigma": fig.metric.sigma,
            "sigma_cycle": fig.metric.sigma_cycle,
        },
        "nodes": [_node_doc(fig, n) for n in fig.nodes.values()],
    }


def serialize(fig: Figure) -> str:
    return json.dumps(figure_to_doc(fig), indent=2) + "\n"


# ------------------------------------------------------------------ input

def _require(doc, key, kinds, where):
    if key not in doc:
        raise ParseError(f"{where}: missing {key!r}")
    value = doc[key]
    if not isinstance(value, kinds):
        raise ParseError(f"{where}: bad type for {key!r}")
    return value


def _parse_cycle(doc, metric: Metric, tower, where: str) -> Cycle:
    k = _require(doc, "k", str, where)
    l = _require(doc, "l", list, where)
    m = _require(doc, "m", str, where)
    if len(l) != 2 or not all(isinstance(t, str) for t in l):
        raise ParseError(f"{where}: l must be two expression strings")
    return Cycle(parse_expr(k, tower), (parse_expr(l[0], tower),
                                        parse_expr(l[1], tower)),
                 parse_expr(m, tower), metric)


def _parse_relation(doc, tower, where: str) -> Relation:
    kind = _require(doc, "kind", str, where)
    target = _require(doc, "target", str, where)
    value = doc.get("value")
    if value is not None:
        value = parse_expr(value, tower)
    return Relation(kind, target, value)


def _infer_kind(node_doc, cycle: Cycle | None) -> str:
    if node_doc.get("relations"):
        return "relation"
    if cycle is None:
        return "cycle"
    from ..cycle import inner
    if cycle.k.zero_test() is Trit.NONZERO and inner(cycle, cycle).is_zero():
        return "point"
    return "cycle"


def figure_from_doc(doc) -> Figure:
    if not isinstance(doc, dict):
        raise ParseError("figure document must be an object")
    version = doc.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"version {version!r}")
    mdoc = _require(doc, "metric", dict, "metric")
    metric = Metric(_require(mdoc, "dim", int, "metric"),
                    _require(mdoc, "sigma", int, "metric"),
                    _require(mdoc, "sigma_cycle", int, "metric"))
    nodes = _require(doc, "nodes", list, "document")

    fig = Figure(metric, reserved=False)
    present = {n.get("key") for n in nodes if isinstance(n, dict)}
    if INFTY_KEY not in present or REAL_AXIS_KEY not in present:
        reserved = Figure(metric)
        for key in (INFTY_KEY, REAL_AXIS_KEY):
            if key not in present:
                fig._install(reserved.nodes[key])

    top = 0
    for ndoc in nodes:
        if not isinstance(ndoc, dict):
            raise ParseError("node entries must be objects")
        key = _require(ndoc, "key", str, "node")
        where = f"node {key}"
        label = _require(ndoc, "label", str, where)
        generation = _require(ndoc, "generation", int, where)
        relations = [_parse_relation(r, fig.tower, where)
                     for r in ndoc.get("relations", [])]
        for r in relations:
            if r.target != SELF and r.target not in fig.nodes:
                raise ParseError(f"{where}: target {r.target!r} not defined yet")
        instances = [_parse_cycle(c, metric, fig.tower, where)
                     for c in ndoc.get("instances", [])]
        if key in fig.nodes or label in fig._labels:
            raise ParseError(f"{where}: duplicate key or label")

        sub = None
        if "subfigure" in ndoc:
            sdoc = _require(ndoc, "subfigure", dict, where)
            inner_fig = figure_from_doc(_require(sdoc, "figure", dict, where))
            sub = _SubPayload(
                Subfigure(inner_fig,
                          tuple(_require(sdoc, "inputs", list, where)),
                          _require(sdoc, "result", str, where)),
                tuple(_require(sdoc, "input_keys", list, where)))
            for k in sub.input_keys:
                if k not in fig.nodes:
                    raise ParseError(f"{where}: input {k!r} not defined yet")

        kind = ndoc.get("kind")
        if kind is None:
            kind = "subfigure" if sub is not None else _infer_kind(
                ndoc, instances[0] if instances else None)
        node = Node(key, label, kind, generation, relations=relations,
                    instances=instances,
                    free_params=ndoc.get("free_params", []),
                    status=ndoc.get("status", "Solved"),
                    reality_conditions=[
                        parse_expr(t, fig.tower)
                        for t in ndoc.get("reality_conditions", [])],
                    sub=sub)
        fig._install(node)
        tail = key.rsplit(".", 1)
        if len(tail) == 2 and tail[1].isdigit():
            top = max(top, int(tail[1]) + 1)
    fig._counter = top
    return fig


def deserialize(text: str) -> Figure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return figure_from_doc(doc)
