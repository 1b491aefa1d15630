"""Exception hierarchy.

Every mathematically meaningful failure raises a named subclass of
:class:`AlgebraError` so callers (and the CLI) can map errors to stable codes.
"""


class AlgebraError(Exception):
    """Base class for all library errors."""

    code = "AlgebraError"


class BaseMismatch(AlgebraError):
    """Operands live over different group rings."""

    code = "BaseMismatch"


class DimensionMismatch(AlgebraError):
    code = "DimensionMismatch"


class UnsupportedGroup(AlgebraError):
    """The group variant cannot support the requested computation."""

    code = "UnsupportedGroup"


class ObjectMismatch(AlgebraError):
    """Bimodules are not composable / do not share the required ring object."""

    code = "ObjectMismatch"


class UnsupportedShadow(AlgebraError):
    code = "UnsupportedShadow"


class NotDualizable(AlgebraError):
    code = "NotDualizable"


class ShapeMismatch(AlgebraError):
    code = "ShapeMismatch"


class NoFreeBasis(AlgebraError):
    """No free right basis is available for the requested base-change module."""

    code = "NoFreeBasis"


class SquareNotCommuting(AlgebraError):
    code = "SquareNotCommuting"


class MissingBaseObject(AlgebraError):
    code = "MissingBaseObject"


class BoundaryNotZero(AlgebraError):
    code = "BoundaryNotZero"


class InvalidChainMap(AlgebraError):
    code = "InvalidChainMap"


class LiftNotFound(AlgebraError):
    code = "LiftNotFound"


class IndexOutOfRange(AlgebraError):
    code = "IndexOutOfRange"


class SchemaError(AlgebraError):
    """CLI input document failed validation."""

    code = "SchemaError"
