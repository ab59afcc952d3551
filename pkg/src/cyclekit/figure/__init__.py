from .model import (
    CHECK_KINDS,
    INFTY_KEY,
    MEASURE_KINDS,
    PENDING_UNKNOWN,
    REAL_AXIS_KEY,
    SOLVED,
    UNSATISFIABLE,
    Figure,
    Node,
    Subfigure,
    new_figure,
)
from .serialize import deserialize, figure_from_doc, figure_to_doc, serialize
from .solver import (
    ANGLE_COS_SQ,
    ONLY_REALS,
    ORTHOGONAL,
    PASSES_INFINITY,
    RELATION_KINDS,
    SELF,
    SELF_ORTHOGONAL,
    STEINER_POWER,
    TANGENT,
    Relation,
)

__all__ = [
    "ANGLE_COS_SQ", "CHECK_KINDS", "Figure", "INFTY_KEY", "MEASURE_KINDS",
    "Node", "ONLY_REALS", "ORTHOGONAL", "PASSES_INFINITY", "PENDING_UNKNOWN",
    "REAL_AXIS_KEY", "RELATION_KINDS", "Relation", "SELF", "SELF_ORTHOGONAL",
    "SOLVED", "STEINER_POWER", "Subfigure", "TANGENT", "UNSATISFIABLE",
    "deserialize", "figure_from_doc", "figure_to_doc", "new_figure",
    "serialize",
]
