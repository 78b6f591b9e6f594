"""Exception hierarchy.

Every failure raised by the engine derives from OlapError so callers can
catch one base; the leaf classes are part of the public contract and are
asserted by name in the test suite.
"""


class OlapError(Exception):
    """Base class for all engine errors."""


# ---------------------------------------------------------------- schema

class SchemaError(OlapError):
    """Constellation document rejected during validation."""


class DuplicateName(SchemaError): pass
class HierarchyNotPath(SchemaError): pass
class UnknownAttributeInHierarchy(SchemaError): pass
class StarTargetMissing(SchemaError): pass
class FactWithFewerThanTwoDimensions(SchemaError): pass
class InvalidIdentifier(SchemaError): pass
class InvalidValueKind(SchemaError): pass
class IdMismatch(SchemaError): pass
class AttributeNotInHierarchy(SchemaError): pass


# ---------------------------------------------------------------- dataset

class DataError(OlapError):
    """Tabular instance data rejected while loading."""


class MissingColumn(DataError): pass
class DanglingLink(DataError): pass
class DuplicateId(DataError): pass
class NonNumericMeasure(DataError): pass
class UnknownTable(DataError): pass
class BadValue(DataError): pass


class UnknownAttribute(OlapError):
    """Attribute name not declared on the dimension (data or algebra side)."""


# ---------------------------------------------------------------- algebra

class AlgebraError(OlapError):
    """Operator precondition violated."""


class UnknownFact(AlgebraError): pass
class UnknownDimension(AlgebraError): pass
class MeasureNotInFact(AlgebraError): pass
class DimensionNotStarred(AlgebraError): pass
class SameDimensionBothAxes(AlgebraError): pass
class HierarchyNotInDimension(AlgebraError): pass
class ConstellationMismatch(AlgebraError): pass
class EmptyMeasures(AlgebraError): pass
class DimensionNotOnAxis(AlgebraError): pass
class AxisCollision(AlgebraError): pass
class NotFinerLevel(AlgebraError): pass
class NotCoarserLevel(AlgebraError): pass
class AttributeNotDisplayed(AlgebraError): pass
class UnknownNestedAttribute(AlgebraError): pass
class UnknownQualifier(AlgebraError): pass
class UnknownAttributeOrMeasure(AlgebraError): pass
class TypeMismatchInComparison(AlgebraError): pass
class ValueNotInDomain(AlgebraError): pass
class IncompatibleAggregate(AlgebraError): pass
class AlreadyPushed(AlgebraError): pass
class MeasureNotInSubject(AlgebraError): pass
class DuplicateMeasure(AlgebraError): pass
class LastMeasure(AlgebraError): pass
class FactDoesNotShareAxes(AlgebraError): pass
class IncompatibleTarget(AlgebraError): pass


# ---------------------------------------------------------------- queries

class QueryError(OlapError):
    """Query text rejected by the parser or the evaluator."""

    def __init__(self, message: str, span: tuple[int, int] | None = None):
        super().__init__(message)
        self.span = span


class QuerySyntaxError(QueryError): pass
class UnknownOperator(QueryError): pass
class ArityError(QueryError): pass
class UnboundName(QueryError): pass


class EvaluationError(QueryError):
    """Operator error raised while evaluating a subexpression.

    Carries the source span of the failing call and the original error.
    """

    def __init__(self, message: str, span: tuple[int, int], cause: OlapError):
        super().__init__(message, span)
        self.cause = cause


# ---------------------------------------------------------------- service

class ServiceError(OlapError):
    """Session service failure."""


class ServiceNotReady(ServiceError): pass
class UnknownSession(ServiceError): pass
class NothingToUndo(ServiceError): pass
