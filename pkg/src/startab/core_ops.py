"""The core manipulation operators.

Every operator takes the dataset for context and a table, checks its
preconditions, and returns a new table; the input is never mutated.
Unless an operator says otherwise it copies every component of its
input, so the restriction, display orders, subtotals and log carry
over.  Each application appends one replayable record to the log,
tagged with the facts/dimensions its arguments name.
"""

from __future__ import annotations

from dataclasses import replace

from .data import Dataset
from .errors import (
    AlreadyPushed,
    AttributeNotDisplayed,
    AttributeNotInHierarchy,
    AxisCollision,
    ConstellationMismatch,
    DimensionNotOnAxis,
    DimensionNotStarred,
    DuplicateMeasure,
    EmptyMeasures,
    HierarchyNotInDimension,
    IncompatibleAggregate,
    LastMeasure,
    MeasureNotInFact,
    MeasureNotInSubject,
    NotCoarserLevel,
    NotFinerLevel,
    SameDimensionBothAxes,
    TypeMismatchInComparison,
    UnknownAttribute,
    UnknownAttributeOrMeasure,
    UnknownDimension,
    UnknownFact,
    UnknownNestedAttribute,
    UnknownQualifier,
    ValueNotInDomain,
)
from .schema import ALL_ATTRIBUTE, NUMERIC_KINDS, WeakOf, attribute_level
from .table import (
    AGGREGATE_FNS,
    AggregateSpec,
    AxisSpec,
    MeasureTerm,
    MeasureUnit,
    MultidimensionalTable,
    NestedUnit,
    ParamUnit,
    Restriction,
    SubjectSpec,
    WeakUnit,
    effective_order,
    unit_attributes,
    validate_qualifier,
)


def _dimension(ds: Dataset, name: str):
    d = ds.constellation.dimension_map.get(name)
    if d is None:
        raise UnknownDimension(f"no dimension named {name!r}")
    return d


def _hierarchy(ds: Dataset, dim: str, name: str):
    d = _dimension(ds, dim)
    for h in d.hierarchies:
        if h.name == name:
            return h
    raise HierarchyNotInDimension(f"{dim!r} has no hierarchy {name!r}")


def _axis(tm: MultidimensionalTable, dim: str) -> AxisSpec:
    axis = tm.axis(dim)
    if axis is None:
        raise DimensionNotOnAxis(f"{dim!r} is not on an axis of the table")
    return axis


def _first_parameter(ds: Dataset, dim: str, hier: str) -> ParamUnit:
    h = _hierarchy(ds, dim, hier)
    return ParamUnit(h.parameters[1])  # coarsest level below All


def _check_measures(ds: Dataset, fact: str, measures) -> tuple[MeasureTerm, ...]:
    f = ds.constellation.fact_map.get(fact)
    if f is None:
        raise UnknownFact(f"no fact named {fact!r}")
    terms: list[MeasureTerm] = []
    for fn, name in measures:
        if fn not in AGGREGATE_FNS:
            raise IncompatibleAggregate(f"unknown aggregation {fn!r}")
        if name not in f.measure_map:
            raise MeasureNotInFact(f"{name!r} is not a measure of {fact!r}")
        term = MeasureTerm(fn, name)
        if term in terms:
            raise DuplicateMeasure(f"{fn}({name}) listed twice")
        terms.append(term)
    if not terms:
        raise EmptyMeasures("a table needs at least one measure")
    return tuple(terms)


# --------------------------------------------------------------------------

def display(ds: Dataset, constellation: str, fact: str, measures,
            line_dim: str, line_hier: str, col_dim: str, col_hier: str) -> MultidimensionalTable:
    """Build a fresh table: the entry point of every analysis.

    measures is an ordered list of (fn, measure) pairs.  Both axes start
    at the coarsest graduation of the chosen hierarchy, the restriction
    is all-true and the log is empty.
    """
    if constellation != ds.constellation.name:
        raise ConstellationMismatch(
            f"{constellation!r} is not the loaded constellation {ds.constellation.name!r}"
        )
    terms = _check_measures(ds, fact, measures)
    if line_dim == col_dim:
        raise SameDimensionBothAxes(f"{line_dim!r} cannot be both line and column")
    for dim in (line_dim, col_dim):
        _dimension(ds, dim)
        if dim not in ds.constellation.star[fact]:
            raise DimensionNotStarred(f"{dim!r} is not starred by {fact!r}")
    return MultidimensionalTable(
        subject=SubjectSpec(fact, terms),
        line=AxisSpec(line_dim, line_hier, (_first_parameter(ds, line_dim, line_hier),)),
        column=AxisSpec(col_dim, col_hier, (_first_parameter(ds, col_dim, col_hier),)),
    )


def drotate(ds: Dataset, tm: MultidimensionalTable, d_old: str, d_new: str, hier: str) -> MultidimensionalTable:
    """Replace one axis dimension (or change hierarchy when d_old == d_new)."""
    axis = _axis(tm, d_old)
    _dimension(ds, d_new)
    if d_new not in ds.constellation.star[tm.subject.fact]:
        raise DimensionNotStarred(f"{d_new!r} is not starred by {tm.subject.fact!r}")
    other = tm.column if axis is tm.line else tm.line
    if d_new == other.dimension:
        raise AxisCollision(f"{d_new!r} is already on the other axis")
    new_axis = AxisSpec(d_new, hier, (_first_parameter(ds, d_new, hier),))
    out = replace(tm, line=new_axis) if axis is tm.line else replace(tm, column=new_axis)
    return out.logged("DROTATE", (d_old, d_new, hier), {d_old, d_new})


def _resolve_selector(ds: Dataset, axis: AxisSpec, selector) -> ParamUnit | WeakUnit:
    if isinstance(selector, str):
        selector = ParamUnit(selector)
    d = ds.constellation.dimension_map[axis.dimension]
    h = d.hierarchy(axis.hierarchy)
    owner = selector.param if isinstance(selector, ParamUnit) else selector.owner
    level = attribute_level(d, h, owner)
    if isinstance(level, WeakOf):
        raise AttributeNotInHierarchy(f"{owner!r} is a weak attribute, not a parameter")
    declared = h.weak.get(owner, ())
    for w in selector.weak:
        if w not in declared:
            raise AttributeNotInHierarchy(
                f"{w!r} is not a weak attribute of {owner!r} on {h.name!r}"
            )
    return selector


def drilldown(ds: Dataset, tm: MultidimensionalTable, dim: str, selector) -> MultidimensionalTable:
    """Show a finer graduation level; intermediate levels are not added."""
    axis = _axis(tm, dim)
    unit = _resolve_selector(ds, axis, selector)
    level = axis.native_level(ds, unit)
    if level <= axis.finest_level(ds):
        raise NotFinerLevel(f"{unit!r} is not finer than the displayed levels")
    out = tm.with_axis(replace(axis, displayed=axis.displayed + (unit,)))
    return out.logged("DRILLDOWN", (dim, unit), {dim})


def rollup(ds: Dataset, tm: MultidimensionalTable, dim: str, att_sup: str) -> MultidimensionalTable:
    """Cut graduations finer than att_sup; All empties the axis."""
    axis = _axis(tm, dim)
    if att_sup == ALL_ATTRIBUTE:
        out = tm.with_axis(replace(axis, displayed=()))
        return out.logged("ROLLUP", (dim, att_sup), {dim})
    d = ds.constellation.dimension_map[dim]
    h = d.hierarchy(axis.hierarchy)
    level = attribute_level(d, h, att_sup)
    if isinstance(level, WeakOf):
        raise AttributeNotInHierarchy(f"{att_sup!r} is a weak attribute, not a parameter")
    if level > axis.finest_level(ds):
        raise NotCoarserLevel(f"{att_sup!r} is finer than the displayed levels")
    kept: list = []
    has_target = False
    for unit in axis.displayed:
        if isinstance(unit, (ParamUnit, WeakUnit)):
            if axis.native_level(ds, unit) > level:
                break
            if axis.native_level(ds, unit) == level:
                has_target = True
        kept.append(unit)
    if not has_target:
        kept.append(ParamUnit(att_sup))
    out = tm.with_axis(replace(axis, displayed=tuple(kept)))
    return out.logged("ROLLUP", (dim, att_sup), {dim})


def nest(ds: Dataset, tm: MultidimensionalTable, dim: str, att: str,
         nested_dim: str, nested_att: str) -> MultidimensionalTable:
    """Splice an attribute of another starred dimension in right after att."""
    axis = _axis(tm, dim)
    at = None
    for i, unit in enumerate(axis.displayed):
        if isinstance(unit, (ParamUnit, WeakUnit)):
            names = (unit.param, *unit.weak) if isinstance(unit, ParamUnit) else unit.weak
            if att in names:
                at = i
                break
    if at is None:
        raise AttributeNotDisplayed(f"{att!r} is not displayed on the {dim!r} axis")
    nd = _dimension(ds, nested_dim)
    if nested_dim not in ds.constellation.star[tm.subject.fact]:
        raise DimensionNotStarred(f"{nested_dim!r} is not starred by {tm.subject.fact!r}")
    if nested_att not in nd.attribute_map:
        raise UnknownNestedAttribute(f"{nested_att!r} is not an attribute of {nested_dim!r}")
    displayed = axis.displayed[: at + 1] + (NestedUnit(nested_dim, nested_att),) + axis.displayed[at + 1:]
    out = tm.with_axis(replace(axis, displayed=displayed))
    return out.logged("NEST", (dim, att, nested_dim, nested_att), {dim, nested_dim})


def _check_predicate(ds: Dataset, tm: MultidimensionalTable, pred: Restriction) -> None:
    c = ds.constellation
    fact = c.fact_map[tm.subject.fact]
    for clause in pred.clauses:
        for atom in clause:
            validate_qualifier(ds, tm, atom.qualifier)
            if atom.qualifier == tm.subject.fact:
                if atom.name == ALL_ATTRIBUTE:
                    kind = "text"
                elif atom.name in fact.measure_map:
                    kind = fact.measure_map[atom.name].value_kind
                else:
                    raise UnknownAttributeOrMeasure(
                        f"{atom.name!r} is not a measure of {atom.qualifier!r}"
                    )
            else:
                d = c.dimension_map[atom.qualifier]
                if atom.name not in d.attribute_map:
                    raise UnknownAttributeOrMeasure(
                        f"{atom.name!r} is not an attribute of {atom.qualifier!r}"
                    )
                kind = d.attribute_map[atom.name].value_kind
            numeric = kind in NUMERIC_KINDS
            if numeric != isinstance(atom.value, (int, float)):
                raise TypeMismatchInComparison(
                    f"{atom.qualifier}.{atom.name} is {kind}, got {atom.value!r}"
                )


def select(ds: Dataset, tm: MultidimensionalTable, pred: Restriction) -> MultidimensionalTable:
    """Install a new restriction; the previous one is replaced, not refined."""
    _check_predicate(ds, tm, pred)
    out = replace(tm, restriction=pred)
    return out.logged("SELECT", (pred,), set(pred.qualifiers()))


def switch(ds: Dataset, tm: MultidimensionalTable, dim: str, att: str, v1, v2) -> MultidimensionalTable:
    """Swap two values in an attribute's display order; whole blocks move."""
    axis = _axis(tm, dim)
    if not any((dim, att) in unit_attributes(u, axis.dimension) for u in axis.displayed):
        raise AttributeNotDisplayed(f"{att!r} is not displayed on the {dim!r} axis")
    dom = effective_order(tm, ds, dim, att)
    for v in (v1, v2):
        if v not in dom:
            raise ValueNotInDomain(f"{v!r} is not a value of {dim}.{att}")
    i, j = dom.index(v1), dom.index(v2)
    dom[i], dom[j] = dom[j], dom[i]
    out = tm.with_order(dim, att, tuple(dom))
    return out.logged("SWITCH", (dim, att, v1, v2), {dim})


def agregate(ds: Dataset, tm: MultidimensionalTable, dim: str, fn: str, att: str) -> MultidimensionalTable:
    """Insert fn subtotal lines after each value block of att."""
    axis = _axis(tm, dim)
    if fn not in AGGREGATE_FNS:
        raise IncompatibleAggregate(f"unknown aggregation {fn!r}")
    leading = [
        unit_attributes(u, axis.dimension)[0]
        for u in axis.displayed
        if unit_attributes(u, axis.dimension)
    ]
    if (dim, att) not in leading:
        raise AttributeNotDisplayed(
            f"{att!r} is not a displayed level of the {dim!r} axis"
        )
    spec = AggregateSpec(dim, fn, att)
    aggs = tm.aggregates if spec in tm.aggregates else tm.aggregates + (spec,)
    out = replace(tm, aggregates=aggs)
    return out.logged("AGREGATE", (dim, fn, att), {dim})


def unagregate(ds: Dataset, tm: MultidimensionalTable) -> MultidimensionalTable:
    """Drop every subtotal."""
    out = replace(tm, aggregates=())
    return out.logged("UNAGREGATE", (), set())


def push(ds: Dataset, tm: MultidimensionalTable, dim: str, att: str) -> MultidimensionalTable:
    """Move a dimension attribute into the cells as a distinct-value set."""
    d = _dimension(ds, dim)
    if dim not in ds.constellation.star[tm.subject.fact]:
        raise DimensionNotStarred(f"{dim!r} is not starred by {tm.subject.fact!r}")
    if att not in d.attribute_map:
        raise UnknownAttribute(f"{att!r} is not an attribute of {dim!r}")
    term = MeasureTerm(None, att, dim)
    if term in tm.subject.terms:
        raise AlreadyPushed(f"{dim}.{att} is already in the subject")
    subject = replace(tm.subject, terms=tm.subject.terms + (term,))
    out = replace(tm, subject=subject)
    return out.logged("PUSH", (dim, att), {dim})


def pull(ds: Dataset, tm: MultidimensionalTable, fn: str, measure: str, dim: str) -> MultidimensionalTable:
    """Move an aggregated measure out of the cells onto an axis header."""
    term = MeasureTerm(fn, measure)
    if term not in tm.subject.terms:
        raise MeasureNotInSubject(f"{fn}({measure}) is not in the subject")
    if len(tm.subject.terms) < 2:
        # a later rotation could drop the pulled level and leave a table
        # with no measure at all, so the subject keeps at least one entry
        raise LastMeasure("cannot pull the only subject entry")
    axis = _axis(tm, dim)
    subject = replace(tm.subject, terms=tuple(t for t in tm.subject.terms if t != term))
    out = replace(tm, subject=subject).with_axis(
        replace(axis, displayed=axis.displayed + (MeasureUnit(fn, measure),))
    )
    return out.logged("PULL", (fn, measure, dim), {dim})


def addm(ds: Dataset, tm: MultidimensionalTable, fn: str, measure: str) -> MultidimensionalTable:
    """Add an aggregated measure to the subject."""
    fact = ds.constellation.fact_map[tm.subject.fact]
    if fn not in AGGREGATE_FNS:
        raise IncompatibleAggregate(f"unknown aggregation {fn!r}")
    if measure not in fact.measure_map:
        raise MeasureNotInFact(f"{measure!r} is not a measure of {tm.subject.fact!r}")
    term = MeasureTerm(fn, measure)
    if term in tm.subject.terms:
        raise DuplicateMeasure(f"{fn}({measure}) already in the subject")
    # a pulled measure is still displayed; re-adding it would show it twice
    for axis in (tm.line, tm.column):
        for u in axis.displayed:
            if isinstance(u, MeasureUnit) and (u.fn, u.measure) == (fn, measure):
                raise DuplicateMeasure(f"{fn}({measure}) is pulled onto an axis")
    subject = replace(tm.subject, terms=tm.subject.terms + (term,))
    out = replace(tm, subject=subject)
    return out.logged("ADDM", (fn, measure), {tm.subject.fact})


def delm(ds: Dataset, tm: MultidimensionalTable, fn: str, measure: str) -> MultidimensionalTable:
    """Remove a subject entry; the subject can never be emptied this way."""
    term = MeasureTerm(fn, measure)
    if term not in tm.subject.terms:
        raise MeasureNotInSubject(f"{fn}({measure}) is not in the subject")
    if len(tm.subject.terms) < 2:
        raise LastMeasure("cannot remove the only subject entry")
    subject = replace(tm.subject, terms=tuple(t for t in tm.subject.terms if t != term))
    out = replace(tm, subject=subject)
    return out.logged("DELM", (fn, measure), {tm.subject.fact})
