"""The multidimensional table: the one structure every operator consumes
and produces.

A table is a subject (a fact and an ordered list of aggregated measures),
a line axis and a column axis (each a dimension, a hierarchy, and the
ordered display units below the implicit root level All), and a
restriction: a conjunction of disjunctions of comparison atoms filtering
the fact rows.  On top of that it tracks per-attribute display orders,
active subtotal specifications, and the log of operations that produced
it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .data import Dataset, Scalar, attribute_domain
from .errors import AttributeNotDisplayed, UnknownQualifier
from .schema import ALL_ATTRIBUTE, ALL_VALUE, WeakOf, attribute_level

AGGREGATE_FNS = ("SUM", "AVG", "MIN", "MAX", "COUNT")

COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")


# --------------------------------------------------------------------------
# Subject
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureTerm:
    """One subject entry: fn(measure), or a pushed attribute (fn is None)."""

    fn: str | None
    name: str
    dimension: str | None = None  # owning dimension for pushed attributes

    @property
    def pushed(self) -> bool:
        return self.fn is None

    def label(self) -> str:
        return self.name if self.fn is None else f"{self.fn}({self.name})"


@dataclass(frozen=True)
class SubjectSpec:
    fact: str
    terms: tuple[MeasureTerm, ...]


# --------------------------------------------------------------------------
# Display units
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamUnit:
    """A hierarchy parameter, optionally completed by weak attributes."""

    param: str
    weak: tuple[str, ...] = ()


@dataclass(frozen=True)
class WeakUnit:
    """Weak attributes shown without their owning parameter."""

    owner: str
    weak: tuple[str, ...]


@dataclass(frozen=True)
class NestedUnit:
    """An attribute of another starred dimension, spliced into the axis."""

    dimension: str
    attribute: str


@dataclass(frozen=True)
class MeasureUnit:
    """An aggregated measure displayed as the finest header level."""

    fn: str
    measure: str


DisplayUnit = ParamUnit | WeakUnit | NestedUnit | MeasureUnit


def unit_attributes(unit: DisplayUnit, axis_dimension: str) -> tuple[tuple[str, str], ...]:
    """(dimension, attribute) pairs a unit groups by; () for measure units."""
    if isinstance(unit, ParamUnit):
        return tuple((axis_dimension, a) for a in (unit.param, *unit.weak))
    if isinstance(unit, WeakUnit):
        return tuple((axis_dimension, a) for a in unit.weak)
    if isinstance(unit, NestedUnit):
        return ((unit.dimension, unit.attribute),)
    return ()


def unit_label(unit: DisplayUnit) -> str:
    if isinstance(unit, ParamUnit):
        head = unit.param.upper()
        return f"{head} ({', '.join(w.upper() for w in unit.weak)})" if unit.weak else head
    if isinstance(unit, WeakUnit):
        return f"({', '.join(w.upper() for w in unit.weak)})"
    if isinstance(unit, NestedUnit):
        return f"{unit.dimension.upper()}.{unit.attribute.upper()}"
    return f"{unit.fn}({unit.measure.upper()})"


@dataclass(frozen=True)
class AxisSpec:
    dimension: str
    hierarchy: str
    displayed: tuple[DisplayUnit, ...]  # below the implicit leading All

    def native_level(self, ds: Dataset, unit: ParamUnit | WeakUnit) -> int:
        """Graduation level of a native unit: its parameter's position."""
        d = ds.constellation.dimension_map[self.dimension]
        h = d.hierarchy(self.hierarchy)
        owner = unit.param if isinstance(unit, ParamUnit) else unit.owner
        level = attribute_level(d, h, owner)
        assert isinstance(level, int)  # owners are parameters by construction
        return level

    def finest_level(self, ds: Dataset) -> int:
        """Graduation level of the finest native unit (0 when none: All)."""
        d = ds.constellation.dimension_map[self.dimension]
        h = d.hierarchy(self.hierarchy)
        finest = 0
        for u in self.displayed:
            if isinstance(u, (ParamUnit, WeakUnit)):
                owner = u.param if isinstance(u, ParamUnit) else u.owner
                level = attribute_level(d, h, owner)
                if isinstance(level, int):
                    finest = max(finest, level)
        return finest


# --------------------------------------------------------------------------
# Restriction
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """qualifier.name <cmp> value, qualifier being a dimension or the fact."""

    qualifier: str
    name: str
    cmp: str
    value: Scalar

    def holds(self, left: Scalar) -> bool:
        right = self.value
        if self.cmp == "=":
            return left == right
        if self.cmp == "!=":
            return left != right
        if self.cmp == "<":
            return left < right
        if self.cmp == "<=":
            return left <= right
        if self.cmp == ">":
            return left > right
        return left >= right

    def tautology(self) -> bool:
        return self.name == ALL_ATTRIBUTE and self.cmp == "=" and self.value == ALL_VALUE


@dataclass(frozen=True)
class Restriction:
    """Conjunction of clauses; each clause is a disjunction of atoms.

    No clauses at all is the always-true restriction.
    """

    clauses: tuple[tuple[Atom, ...], ...] = ()

    @property
    def is_true(self) -> bool:
        return not self.clauses

    def qualifiers(self) -> tuple[str, ...]:
        seen: list[str] = []
        for clause in self.clauses:
            for atom in clause:
                if atom.qualifier not in seen:
                    seen.append(atom.qualifier)
        return tuple(seen)

    def normalized(self) -> frozenset[frozenset[Atom]]:
        """Clause set with tautological All atoms collapsed away.

        An atom X.All = 'all' is always true, so any clause holding one
        is dropped entirely; clause and atom order are immaterial.
        """
        clauses = set()
        for clause in self.clauses:
            if any(atom.tautology() for atom in clause):
                continue
            clauses.add(frozenset(clause))
        return frozenset(clauses)


TRUE_RESTRICTION = Restriction()


def restriction_passes(ds: Dataset, fact: str, row, r: Restriction) -> bool:
    for clause in r.clauses:
        ok = False
        for atom in clause:
            if atom.qualifier == fact:
                left = ALL_VALUE if atom.name == ALL_ATTRIBUTE else row.measures[atom.name]
            else:
                left = ds.linked_value(row, atom.qualifier, atom.name)
            if atom.holds(left):
                ok = True
                break
        if not ok:
            return False
    return True


def restriction_lines(r: Restriction) -> tuple[str, ...]:
    """Display form, one line per clause, names uppercased.

    Tautological clauses impose nothing, so they are not shown; a table
    whose restriction was cancelled renders exactly like a fresh one.
    """

    def fmt(v: Scalar) -> str:
        return f"'{v}'" if isinstance(v, str) else format_number(v)

    lines = []
    for clause in r.clauses:
        if any(atom.tautology() for atom in clause):
            continue
        lines.append(" OR ".join(
            f"{a.qualifier.upper()}.{a.name.upper()} {a.cmp} {fmt(a.value)}" for a in clause
        ))
    return tuple(lines)


def format_number(v: int | float) -> str:
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


# --------------------------------------------------------------------------
# Table
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AggregateSpec:
    """An active subtotal: insert fn blocks after each value of attribute."""

    dimension: str
    fn: str
    attribute: str


@dataclass(frozen=True)
class OperationRecord:
    """One logged operation: name, replayable arguments, and the names of
    the facts/dimensions its arguments mention."""

    op: str
    args: tuple
    tags: frozenset[str]


@dataclass(frozen=True)
class MultidimensionalTable:
    subject: SubjectSpec
    line: AxisSpec
    column: AxisSpec
    restriction: Restriction = TRUE_RESTRICTION
    domain_orders: tuple[tuple[tuple[str, str], tuple[Scalar, ...]], ...] = ()
    aggregates: tuple[AggregateSpec, ...] = ()
    history: tuple[OperationRecord, ...] = ()

    # ------------------------------------------------------------ helpers

    def axis(self, dimension: str) -> AxisSpec | None:
        if self.line.dimension == dimension:
            return self.line
        if self.column.dimension == dimension:
            return self.column
        return None

    def with_axis(self, axis: AxisSpec) -> "MultidimensionalTable":
        if self.line.dimension == axis.dimension:
            return replace(self, line=axis)
        if self.column.dimension == axis.dimension:
            return replace(self, column=axis)
        raise AttributeNotDisplayed(f"{axis.dimension!r} is not on an axis")

    def order_override(self, dimension: str, attribute: str) -> tuple[Scalar, ...] | None:
        for key, values in self.domain_orders:
            if key == (dimension, attribute):
                return values
        return None

    def with_order(self, dimension: str, attribute: str, values: tuple[Scalar, ...]) -> "MultidimensionalTable":
        key = (dimension, attribute)
        kept = tuple((k, v) for k, v in self.domain_orders if k != key)
        return replace(self, domain_orders=kept + ((key, values),))

    def logged(self, op: str, args: tuple, tags) -> "MultidimensionalTable":
        rec = OperationRecord(op, args, frozenset(tags))
        return replace(self, history=self.history + (rec,))


def effective_order(tm: MultidimensionalTable, ds: Dataset, dimension: str, attribute: str) -> list[Scalar]:
    """Current display order of an attribute's domain: the table's override
    when one was set (SWITCH/ORDER), else the default ascending order."""
    override = tm.order_override(dimension, attribute)
    if override is not None:
        return list(override)
    return attribute_domain(ds, dimension, attribute)


def displayed_attributes(tm: MultidimensionalTable) -> tuple[tuple[str, str], ...]:
    """(dimension, attribute) pairs displayed on either axis, in order."""
    pairs: list[tuple[str, str]] = []
    for axis in (tm.line, tm.column):
        for unit in axis.displayed:
            for pair in unit_attributes(unit, axis.dimension):
                if pair not in pairs:
                    pairs.append(pair)
    return tuple(pairs)


def validate_qualifier(ds: Dataset, tm: MultidimensionalTable, qualifier: str) -> None:
    c = ds.constellation
    if qualifier != tm.subject.fact and qualifier not in c.star[tm.subject.fact]:
        raise UnknownQualifier(
            f"{qualifier!r} is neither the subject fact nor one of its starred dimensions"
        )
