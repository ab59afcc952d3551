"""Constraint figures: a DAG of cycle nodes.

Generation-0 nodes carry explicit cycles or points; later generations are
defined only by relations to earlier nodes and get (re)solved exactly.
Node keys are ``label.counter`` and never change; labels stay unique among
live nodes.  The two predefined nodes (the infinity cycle and the real
axis) sit at negative generations and cannot be touched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from ..cycle import (
    Cycle,
    Metric,
    angle_cos_sq,
    inner,
    point_cycle,
    same_locus,
    steiner_power,
    tangency_defect,
)
from ..errors import (
    ArityMismatch,
    DimensionMismatch,
    DuplicateLabel,
    HasDependents,
    NoRelations,
    NotARoot,
    ReservedNode,
    UnknownKey,
    UnknownTarget,
    UnsatisfiableRelations,
    UnsupportedKind,
)
from ..symkern import Expr, Tower, Trit, as_expr, render_expr
from .solver import (
    PASSES_INFINITY,
    SELF,
    Relation,
    dedupe_relations,
    solve_relations,
)

SOLVED = "Solved"
UNSATISFIABLE = "Unsatisfiable"
PENDING_UNKNOWN = "PendingUnknown"

INFTY_KEY = "infty"
REAL_AXIS_KEY = "R"

_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

CHECK_KINDS = ("orthogonal", "tangent")
MEASURE_KINDS = ("angle_cos_sq", "steiner_power", "inner")


@dataclass(frozen=True)
class Subfigure:
    """A reusable construction: a figure, its designated generation-0
    inputs, and the single node whose instances it produces."""

    figure: "Figure"
    inputs: tuple[str, ...]
    result: str

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        nodes = self.figure.nodes
        for key in self.inputs:
            if key not in nodes:
                raise UnknownKey(f"subfigure input {key!r}")
            if nodes[key].generation != 0:
                raise ValueError(f"subfigure input {key!r} is not generation 0")
        if self.result not in nodes:
            raise UnknownKey(f"subfigure result {self.result!r}")
        reach = {self.result}
        for key in reversed(list(nodes)):
            if key in reach:
                reach |= _targets_of(nodes[key])
        missing = [k for k in self.inputs if k not in reach]
        if missing:
            raise ValueError(
                f"subfigure result does not depend on inputs {missing}")


@dataclass
class _SubPayload:
    sub: Subfigure
    input_keys: tuple[str, ...]


class Node:
    __slots__ = ("key", "label", "kind", "generation", "relations",
                 "instances", "free_params", "status", "reality_conditions",
                 "sub")

    def __init__(self, key, label, kind, generation, relations=(),
                 instances=(), free_params=(), status=SOLVED,
                 reality_conditions=(), sub=None):
        self.key = key
        self.label = label
        self.kind = kind
        self.generation = generation
        self.relations = tuple(relations)
        self.instances = list(instances)
        self.free_params = list(free_params)
        self.status = status
        self.reality_conditions = list(reality_conditions)
        self.sub = sub

    @property
    def reserved(self) -> bool:
        return self.generation < 0

    def __repr__(self):
        return (f"Node({self.key!r}, kind={self.kind!r}, "
                f"generation={self.generation}, "
                f"instances={len(self.instances)})")


def _targets_of(node: Node) -> set[str]:
    targets = {r.target for r in node.relations if r.target != SELF}
    if node.sub is not None:
        targets |= set(node.sub.input_keys)
    return targets


class Figure:
    def __init__(self, metric: Metric | None = None, tower: Tower | None = None,
                 reserved: bool = True):
        self.metric = metric if metric is not None else Metric(2, -1, -1)
        self.tower = tower if tower is not None else Tower()
        self.nodes: dict[str, Node] = {}
        self._labels: dict[str, str] = {}
        self._counter = 0
        if reserved:
            self._install(Node(INFTY_KEY, INFTY_KEY, "cycle", -2,
                               instances=[Cycle(0, (0, 0), 1, self.metric)]))
            self._install(Node(REAL_AXIS_KEY, REAL_AXIS_KEY, "cycle", -1,
                               instances=[Cycle(0, (0, 1), 0, self.metric)]))

    # ------------------------------------------------------------- lookup

    def _install(self, node: Node) -> str:
        self.nodes[node.key] = node
        self._labels[node.label] = node.key
        return node.key

    def resolve(self, name: str) -> str:
        """Accept either a node key or a label."""
        if name in self.nodes:
            return name
        if name in self._labels:
            return self._labels[name]
        raise UnknownKey(name)

    def node(self, name: str) -> Node:
        return self.nodes[self.resolve(name)]

    def _claim_label(self, label: str) -> str:
        if not isinstance(label, str) or not _LABEL_RE.match(label) or label == SELF:
            raise ValueError(f"invalid label {label!r}")
        if label in self._labels:
            raise DuplicateLabel(label)
        key = f"{label}.{self._counter}"
        self._counter += 1
        return key

    def _infty(self) -> Cycle:
        return self.nodes[INFTY_KEY].instances[0]

    def _check_metric(self, c: Cycle) -> None:
        if c.metric != self.metric:
            raise DimensionMismatch(
                f"cycle metric {c.metric} differs from figure metric {self.metric}")

    # ---------------------------------------------------------- additions

    def add_cycle(self, c: Cycle, label: str) -> str:
        self._check_metric(c)
        key = self._claim_label(label)
        return self._install(Node(key, label, "cycle", 0, instances=[c],
                                  free_params=sorted(c.param_names())))

    def add_point(self, p, label: str) -> str:
        c = point_cycle(p, self.metric)
        key = self._claim_label(label)
        return self._install(Node(key, label, "point", 0, instances=[c],
                                  free_params=sorted(c.param_names())))

    def add_cycle_rel(self, relations, label: str) -> str:
        if not relations:
            raise NoRelations(f"node {label!r} needs at least one relation")
        rels = [self._normalize_relation(r) for r in relations]
        key = self._claim_label(label)
        node = Node(key, label, "relation",
                    self._generation_for(_relation_targets(rels)),
                    relations=rels)
        self._solve_node(node, raising=True)
        return self._install(node)

    def add_subfigure(self, sub: Subfigure, input_keys, label: str) -> str:
        keys = tuple(self.resolve(k) for k in input_keys)
        if len(keys) != len(sub.inputs):
            raise ArityMismatch(
                f"subfigure wants {len(sub.inputs)} inputs, got {len(keys)}")
        key = self._claim_label(label)
        node = Node(key, label, "subfigure",
                    self._generation_for(set(keys)),
                    sub=_SubPayload(sub, keys))
        self._solve_node(node, raising=True)
        return self._install(node)

    def _normalize_relation(self, r: Relation) -> Relation:
        if r.kind == PASSES_INFINITY:
            return Relation(r.kind, INFTY_KEY)
        if r.target == SELF:
            return r
        try:
            target = self.resolve(r.target)
        except UnknownKey:
            raise UnknownTarget(r.target) from None
        value = as_expr(r.value) if r.value is not None else None
        return Relation(r.kind, target, value)

    def _generation_for(self, targets: set[str]) -> int:
        gens = [-1 if self.nodes[t].generation < 0 else self.nodes[t].generation
                for t in targets]
        return (max(gens) if gens else -1) + 1

    # ------------------------------------------------------------ solving

    def _solve_node(self, node: Node, raising: bool) -> None:
        try:
            if node.kind == "relation":
                out = solve_relations(
                    node.relations, node.label, self.metric, self.tower,
                    lambda t: self.nodes[t].instances, self._infty())
                node.instances = out.instances
                node.free_params = out.free_params
                node.reality_conditions = out.reality_conditions
                node.status = PENDING_UNKNOWN if out.pending else SOLVED
            elif node.kind == "subfigure":
                self._instantiate_sub(node)
        except UnsatisfiableRelations:
            if raising:
                raise
            node.instances = []
            node.free_params = []
            node.reality_conditions = []
            node.status = UNSATISFIABLE

    def _instantiate_sub(self, node: Node) -> None:
        sub, input_keys = node.sub.sub, node.sub.input_keys
        inner_fig = sub.figure
        host_lists = [self.nodes[k].instances for k in input_keys]

        taken: set[str] = set()
        for lst in host_lists:
            for inst in lst:
                taken |= inst.param_names()

        def fresh_label(base: str) -> str:
            cand = base
            while any(p == f"u_{cand}" or p.startswith(f"u_{cand}_")
                      for p in taken):
                cand += "x"
            return cand

        instances: list[Cycle] = []
        pending = False
        for combo in product(*host_lists):
            scratch = Figure(self.metric, tower=self.tower)
            mapping = {INFTY_KEY: INFTY_KEY, REAL_AXIS_KEY: REAL_AXIS_KEY}
            try:
                for src in inner_fig.nodes.values():
                    if src.reserved:
                        continue
                    lbl = fresh_label(f"{node.label}_{src.label}")
                    if src.key in sub.inputs:
                        idx = sub.inputs.index(src.key)
                        mapping[src.key] = scratch.add_cycle(combo[idx], lbl)
                    elif src.kind in ("cycle", "point"):
                        mapping[src.key] = scratch.add_cycle(
                            src.instances[0], lbl)
                    elif src.kind == "relation":
                        rels = [Relation(r.kind,
                                         mapping.get(r.target, r.target),
                                         r.value) for r in src.relations]
                        mapping[src.key] = scratch.add_cycle_rel(rels, lbl)
                    elif src.kind == "subfigure":
                        mapped = [mapping[k] for k in src.sub.input_keys]
                        mapping[src.key] = scratch.add_subfigure(
                            src.sub.sub, mapped, lbl)
            except UnsatisfiableRelations:
                continue
            result_node = scratch.nodes[mapping[sub.result]]
            pending = pending or any(
                n.status == PENDING_UNKNOWN for n in scratch.nodes.values())
            for inst in result_node.instances:
                if not any(same_locus(prev, inst) is Trit.ZERO
                           for prev in instances):
                    instances.append(inst)

        if not instances:
            raise UnsatisfiableRelations(
                f"subfigure {node.label!r} produced no instances")

        # rename scratch-born parameters into this node's namespace
        introduced: set[str] = set()
        for inst in instances:
            introduced |= inst.param_names() - taken
        order = sorted(introduced)
        out_params = []
        for i, old in enumerate(order):
            new = f"u_{node.label}_{i + 1}" if len(order) > 1 else f"u_{node.label}"
            if old != new:
                repl = Expr.parameter(new)
                instances = [c.substitute(old, repl) for c in instances]
            out_params.append(new)

        node.instances = instances
        node.free_params = out_params
        node.reality_conditions = []
        node.status = PENDING_UNKNOWN if pending else SOLVED

    def _affected_by(self, start: str) -> list[str]:
        """Keys of nodes transitively depending on ``start``, in insertion
        (hence topological) order."""
        hit = {start}
        order: list[str] = []
        for key, node in self.nodes.items():
            if key in hit:
                continue
            if _targets_of(node) & hit:
                hit.add(key)
                order.append(key)
        return order

    # ---------------------------------------------------------- mutations

    def modify_cycle(self, name: str, c: Cycle) -> list[str]:
        """Replace a generation-0 node's cycle and re-solve everything
        downstream.  Returns the keys whose instances changed."""
        key = self.resolve(name)
        node = self.nodes[key]
        if node.reserved:
            raise ReservedNode(key)
        if node.generation != 0:
            raise NotARoot(key)
        self._check_metric(c)

        affected = self._affected_by(key)
        before = {k: [i.key() for i in self.nodes[k].instances]
                  for k in [key] + affected}

        node.instances = [c]
        node.free_params = sorted(c.param_names())
        for k in affected:
            self._solve_node(self.nodes[k], raising=False)

        changed = []
        for k in [key] + affected:
            now = [i.key() for i in self.nodes[k].instances]
            if now != before[k]:
                changed.append(k)
        return changed

    def modify_point(self, name: str, p) -> list[str]:
        key = self.resolve(name)
        return self.modify_cycle(key, point_cycle(p, self.metric))

    def delete_cycle(self, name: str, cascade: bool = False) -> list[str]:
        key = self.resolve(name)
        node = self.nodes[key]
        if node.reserved:
            raise ReservedNode(key)
        dependents = self._affected_by(key)
        if dependents and not cascade:
            raise HasDependents(
                f"{key} is used by {', '.join(dependents)}")
        removed = [key] + dependents
        for k in removed:
            gone = self.nodes.pop(k)
            del self._labels[gone.label]
        return removed

    # ------------------------------------------------------------ queries

    def get_cycle(self, name: str) -> list[Cycle]:
        return list(self.node(name).instances)

    def check_rel(self, name1: str, name2: str, kind: str) -> list[Trit]:
        """Pairwise verdicts over the two nodes' instances, row-major."""
        if kind not in CHECK_KINDS:
            raise UnsupportedKind(f"check kind {kind!r}")
        a, b = self.node(name1), self.node(name2)
        form = inner if kind == "orthogonal" else tangency_defect
        return [form(x, y).zero_test()
                for x in a.instances for y in b.instances]

    def measure(self, name1: str, name2: str, kind: str) -> list[Expr]:
        if kind not in MEASURE_KINDS:
            raise UnsupportedKind(f"measure kind {kind!r}")
        a, b = self.node(name1), self.node(name2)
        form = {"angle_cos_sq": angle_cos_sq,
                "steiner_power": steiner_power,
                "inner": inner}[kind]
        return [form(x, y) for x in a.instances for y in b.instances]

    # ------------------------------------------------------------- output

    def string(self) -> str:
        lines = []
        for key, node in self.nodes.items():
            insts = ", ".join(repr(c) for c in node.instances)
            deps = [n.label for n in self.nodes.values()
                    if key in _targets_of(n)]
            rels = []
            for r in node.relations:
                txt = r.kind
                if r.value is not None:
                    txt += "=" + render_expr(r.value)
                if r.target != SELF:
                    txt += f" {self.nodes[r.target].label}" \
                        if r.target in self.nodes else f" {r.target}"
                rels.append(txt)
            if node.sub is not None:
                rels.append("subfigure(" + ", ".join(
                    self.nodes[k].label for k in node.sub.input_keys) + ")")
            lines.append(
                f"{node.label}: {{{insts}, generation {node.generation}}}"
                f" --> ({', '.join(deps)}); <-- ({', '.join(rels)})")
        return "\n".join(lines)


def _relation_targets(rels) -> set[str]:
    return {r.target for r in dedupe_relations(rels) if r.target != SELF}


def new_figure(sigma: int = -1, sigma_cycle: int | None = None) -> Figure:
    """Fresh figure over the chosen point metric; the cycle-space signature
    defaults to matching the point one."""
    if sigma_cycle is None:
        sigma_cycle = sigma
    return Figure(Metric(2, sigma, sigma_cycle))
