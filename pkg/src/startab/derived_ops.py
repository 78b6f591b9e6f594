"""Second-level operators, each a composition of core operators.

The log a table carries is what makes FROTATE and HISTORY work: a
record is replayed onto another table by re-running its operator with
the recorded arguments.  A record whose preconditions fail on the new
table is skipped with a warning on the "startab.history" logger; the
rest of the replay continues.
"""

from __future__ import annotations

import logging

from .data import Dataset
from .errors import (
    AttributeNotDisplayed,
    FactDoesNotShareAxes,
    IncompatibleTarget,
    OlapError,
    UnknownFact,
)
from .schema import ALL_ATTRIBUTE, ALL_VALUE
from .table import Atom, MultidimensionalTable, Restriction, effective_order, unit_attributes
from . import core_ops
from .core_ops import display, drilldown, drotate, rollup, select, switch

log = logging.getLogger("startab.history")

# Operator name -> callable(ds, tm, *record.args); every replayable record
# written by core_ops resolves here.
REPLAY = {
    "DROTATE": core_ops.drotate,
    "DRILLDOWN": core_ops.drilldown,
    "ROLLUP": core_ops.rollup,
    "NEST": core_ops.nest,
    "SELECT": core_ops.select,
    "SWITCH": core_ops.switch,
    "AGREGATE": core_ops.agregate,
    "UNAGREGATE": core_ops.unagregate,
    "PUSH": core_ops.push,
    "PULL": core_ops.pull,
    "ADDM": core_ops.addm,
    "DELM": core_ops.delm,
}


def hrotate(ds: Dataset, tm: MultidimensionalTable, dim: str, hier: str) -> MultidimensionalTable:
    """Switch a displayed dimension to another of its hierarchies."""
    return drotate(ds, tm, dim, dim, hier)


def plot(ds: Dataset, tm: MultidimensionalTable, dim: str, selector) -> MultidimensionalTable:
    """Jump an axis straight to one graduation level."""
    return drilldown(ds, rollup(ds, tm, dim, ALL_ATTRIBUTE), dim, selector)


def order(ds: Dataset, tm: MultidimensionalTable, dim: str, att: str, direction: str) -> MultidimensionalTable:
    """Sort an attribute's display order ascending or descending.

    Realized as value transpositions, so the log stays replayable.
    """
    if direction not in ("asc", "dsc"):
        raise OlapError(f"order direction must be asc or dsc, got {direction!r}")
    axis = core_ops._axis(tm, dim)
    if not any((dim, att) in unit_attributes(u, axis.dimension) for u in axis.displayed):
        raise AttributeNotDisplayed(f"{att!r} is not displayed on the {dim!r} axis")
    current = effective_order(tm, ds, dim, att)
    target = sorted(current, reverse=(direction == "dsc"))
    work = list(current)
    out = tm
    for i, want in enumerate(target):
        j = work.index(want)
        if j != i:
            out = switch(ds, out, dim, att, work[i], work[j])
            work[i], work[j] = work[j], work[i]
    return out


def unselect(ds: Dataset, tm: MultidimensionalTable) -> MultidimensionalTable:
    """Reset the restriction to the literal all-true conjunction."""
    qualifiers = (tm.subject.fact, *ds.constellation.star[tm.subject.fact])
    pred = Restriction(tuple(
        (Atom(q, ALL_ATTRIBUTE, "=", ALL_VALUE),) for q in qualifiers
    ))
    return select(ds, tm, pred)


def _replay(ds: Dataset, onto: MultidimensionalTable, records, obj: str) -> MultidimensionalTable:
    out = onto
    for rec in records:
        if obj not in rec.tags:
            continue
        try:
            out = REPLAY[rec.op](ds, out, *rec.args)
        except OlapError as exc:
            log.warning("skipping %s%r while replaying %s: %s", rec.op, rec.args, obj, exc)
    return out


def frotate(ds: Dataset, tm: MultidimensionalTable, fact: str, measures) -> MultidimensionalTable:
    """Change the analysed fact, keeping both axes as they look now.

    The new fact must star both axis dimensions.  A fresh table is built
    on the current axes, then the log entries touching the column
    dimension and then those touching the line dimension are replayed
    onto it.
    """
    if fact not in ds.constellation.fact_map:
        raise UnknownFact(f"no fact named {fact!r}")
    axes = {tm.line.dimension, tm.column.dimension}
    if not axes <= set(ds.constellation.star[fact]):
        raise FactDoesNotShareAxes(f"{fact!r} does not star {sorted(axes)}")
    fresh = display(
        ds, ds.constellation.name, fact, measures,
        tm.line.dimension, tm.line.hierarchy,
        tm.column.dimension, tm.column.hierarchy,
    )
    out = _replay(ds, fresh, tm.history, tm.column.dimension)
    return _replay(ds, out, tm.history, tm.line.dimension)


def history(ds: Dataset, t_old: MultidimensionalTable, obj: str,
            t_new: MultidimensionalTable) -> MultidimensionalTable:
    """Replay onto t_new every logged operation of t_old referencing obj."""
    star = ds.constellation.star[t_new.subject.fact]
    if obj != t_new.subject.fact and obj not in star:
        raise IncompatibleTarget(
            f"{obj!r} plays no role in the target table's star"
        )
    return _replay(ds, t_new, t_old.history, obj)
