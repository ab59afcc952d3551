"""Exception types shared across the package.

Every error that callers are expected to catch lives here so that modules
can raise each other's conditions without import cycles.
"""

from __future__ import annotations


class CycleKitError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------- scalars

class DivisionByZero(CycleKitError, ZeroDivisionError):
    """Division by an expression that is syntactically zero."""


class DivisionUnknown(CycleKitError):
    """Division by an expression whose zero status cannot be decided."""


class NegativeRadicand(CycleKitError):
    """Numeric evaluation hit a square root of a certainly negative value."""


class IndeterminateSign(CycleKitError):
    """A radicand's enclosing interval straddles zero; caller may retry
    at higher precision."""


class CyclicSubstitution(CycleKitError):
    """Substitution value depends on the very parameter being replaced
    through some radicand."""


class Inconsistent(CycleKitError):
    """Linear elimination produced the contradiction 0 = nonzero."""


class PivotUnknown(CycleKitError):
    """Elimination cannot proceed without dividing by an expression of
    unknown zero status (strict mode only)."""


class Degenerate(CycleKitError):
    """Quadratic with a = b = 0 and c certainly nonzero has no roots."""


class ParseError(CycleKitError):
    """Malformed expression text, script statement or figure document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"{message} (line {line}, column {column})"
        elif line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)


# ----------------------------------------------------------------- cycles

class DimensionMismatch(CycleKitError):
    """Operands declared over different dimensions or metrics."""


class LineOperand(CycleKitError):
    """Operation requires k != 0 but a line was supplied."""


class PointOperand(CycleKitError):
    """Operation undefined for self-orthogonal (point) operands."""


class LineHasNoCenter(CycleKitError):
    """center() on a cycle with k syntactically zero."""


class SingularMatrix(CycleKitError):
    """Moebius matrix with determinant syntactically zero."""


class DegenerateMirror(CycleKitError):
    """reflect() requires a non-point mirror."""


class ZeroCycle(CycleKitError):
    """All coefficients of a cycle are syntactically zero."""


class DegenerateImage(CycleKitError):
    """Point maps to a zero divisor under a parabolic or hyperbolic
    point-space product."""


class InfinityPoint(CycleKitError):
    """Point maps to infinity under the transform (c*z + d = 0)."""


# ----------------------------------------------------------------- figure

class UnsupportedDimension(CycleKitError):
    """Figures are 2D only."""


class DuplicateLabel(CycleKitError):
    """Label already used by a live node."""


class UnsatisfiableRelations(CycleKitError):
    """Relation system admits no instances."""


class UnknownTarget(CycleKitError):
    """Relation target key does not exist."""


class NoRelations(CycleKitError):
    """add_cycle_rel with an empty relation list."""


class UnknownKey(CycleKitError):
    """No node under the given key."""


class NotARoot(CycleKitError):
    """Mutation allowed only on generation-0 nodes."""


class ReservedNode(CycleKitError):
    """Predefined nodes cannot be modified or deleted."""


class HasDependents(CycleKitError):
    """delete without cascade on a node other nodes depend on."""


class UnsupportedKind(CycleKitError):
    """check/measure kind outside the supported set."""


class ArityMismatch(CycleKitError):
    """Relation kind given the wrong target/value shape."""


class SchemaVersionMismatch(CycleKitError):
    """Serialized figure document from an unknown schema version."""


class SolverInternalError(CycleKitError):
    """A solved instance failed residual re-verification."""


# ----------------------------------------------------------------- render

class UnboundedDegenerate(CycleKitError):
    """Locus is empty or the whole plane; nothing drawable."""


class NonNumeric(CycleKitError):
    """Rendering requires parameter-free coefficients."""


class MissingAssignment(CycleKitError):
    """Free parameters left without values."""

    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("missing parameter values: " + ", ".join(self.names))


# -------------------------------------------------------------------- cli

class PortInUse(CycleKitError):
    """Requested service port is already bound."""


class RevisionMismatch(CycleKitError):
    """Optimistic concurrency check failed; client state is stale."""

    def __init__(self, current: int):
        self.current = current
        super().__init__(f"figure is at revision {current}")
