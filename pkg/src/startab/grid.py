"""Materialization: turning a table specification into a rendered grid.

The grid is computed directly from the base fact rows: rows passing the
restriction are grouped by the full (line units x column units) value
tuple and each subject entry is folded over its group.  Header tuples
that match no row are omitted; a surviving row/column combination may
still hold an empty cell.  Subtotal lines requested by AGREGATE are
folded from the same base rows, with levels finer than the subtotal
attribute left unconstrained.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .data import Dataset, Scalar
from .schema import ALL_VALUE
from .table import (
    AxisSpec,
    MeasureUnit,
    MultidimensionalTable,
    ParamUnit,
    WeakUnit,
    effective_order,
    displayed_attributes,
    format_number,
    restriction_lines,
    restriction_passes,
    unit_attributes,
    unit_label,
)

CellValue = int | float | None | tuple  # tuple = distinct values of a pushed attribute


@dataclass(frozen=True)
class HeaderNode:
    label: str
    kind: str  # "value" | "measure" | "subtotal" | "all"
    value: tuple[Scalar, ...] = ()
    fn: str | None = None  # subtotal nodes: the fold applied to their block
    children: tuple["HeaderNode", ...] = ()


@dataclass(frozen=True)
class HeaderTree:
    caption: str  # e.g. "FOURNISSEURS HGEO"
    layers: tuple[str, ...]  # one label per display unit
    nodes: tuple[HeaderNode, ...]


@dataclass(frozen=True)
class Cell:
    values: tuple[CellValue, ...]
    pulled: tuple[CellValue, ...] = ()


@dataclass(frozen=True)
class Grid:
    fact: str
    measures: tuple[str, ...]  # subject entry labels, in order
    pulled: tuple[str, ...]  # labels of measures displayed as header levels
    restriction: tuple[str, ...]  # display form, one line per clause
    rows: HeaderTree
    columns: HeaderTree
    cells: tuple[tuple[Cell, ...], ...]  # [row leaf][column leaf]


# --------------------------------------------------------------------------
# Folds
# --------------------------------------------------------------------------

def fold(fn: str, values: list) -> int | float:
    if fn == "SUM":
        return sum(values)
    if fn == "AVG":
        return sum(values) / len(values)
    if fn == "MIN":
        return min(values)
    if fn == "MAX":
        return max(values)
    return len(values)  # COUNT


# --------------------------------------------------------------------------
# Axis plans: display units -> grouping layers
# --------------------------------------------------------------------------

@dataclass
class _Layer:
    unit: object
    label: str
    attrs: tuple[tuple[str, str], ...]  # () for measure layers
    key_pos: int  # index into the grouping key; -1 for measure layers


def _axis_layers(axis: AxisSpec) -> list[_Layer]:
    layers: list[_Layer] = []
    pos = 0
    for unit in axis.displayed:
        attrs = unit_attributes(unit, axis.dimension)
        if attrs:
            layers.append(_Layer(unit, unit_label(unit), attrs, pos))
            pos += 1
        else:
            layers.append(_Layer(unit, unit_label(unit), (), -1))
    return layers


class _Node:
    __slots__ = ("label", "kind", "value", "fn", "children", "meta")

    def __init__(self, label, kind, value=(), fn=None, meta=None):
        self.label = label
        self.kind = kind
        self.value = value
        self.fn = fn
        self.children: list[_Node] = []
        self.meta = meta  # subtotal: (key_pos, comp, value, fn)


def _value_label(values: tuple[Scalar, ...]) -> str:
    texts = [format_number(v) if isinstance(v, (int, float)) else str(v) for v in values]
    if len(texts) == 1:
        return texts[0]
    return f"{texts[0]} ({', '.join(texts[1:])})" if texts else ""


def _build_tree(keys: list[tuple], layers: list[_Layer], li: int) -> list[_Node]:
    if not keys or li >= len(layers):
        return []
    layer = layers[li]
    if layer.key_pos < 0:
        node = _Node(layer.label, "measure")
        node.children = _build_tree(keys, layers, li + 1)
        return [node]
    nodes: list[_Node] = []
    i = 0
    while i < len(keys):
        v = keys[i][layer.key_pos]
        j = i
        while j < len(keys) and keys[j][layer.key_pos] == v:
            j += 1
        if isinstance(layer.unit, WeakUnit):
            node = _Node(f"({_value_label(v)})" if v else "()", "value", v)
        else:
            node = _Node(_value_label(v), "value", v)
        node.children = _build_tree(keys[i:j], layers, li + 1)
        nodes.append(node)
        i = j
    return nodes


def _insert_subtotals(nodes: list[_Node], li: int, g: int, comp: int, fn: str) -> None:
    if li == g:
        out: list[_Node] = []
        run_value = None
        run_open = False

        def close_run():
            if run_open:
                v = run_value[comp]
                label = f"{fn}({format_number(v) if isinstance(v, (int, float)) else v})"
                sub = _Node(label, "subtotal", (v,), fn=fn, meta=(g, comp, v, fn))
                out.append(sub)

        for n in nodes:
            if n.kind == "value":
                if run_open and n.value[comp] != run_value[comp]:
                    close_run()
                    run_open = False
                if not run_open:
                    run_value = n.value
                    run_open = True
            out.append(n)
        close_run()
        nodes[:] = out
        return
    for n in nodes:
        if n.kind != "subtotal":
            _insert_subtotals(n.children, li + 1, g, comp, fn)


def _collect_leaves(nodes: list[_Node], prefix: tuple, out: list) -> None:
    for n in nodes:
        if n.kind == "subtotal":
            out.append(("sub", prefix, n.meta))
        elif n.children:
            nxt = prefix + (n.value,) if n.kind == "value" else prefix
            _collect_leaves(n.children, nxt, out)
        else:
            full = prefix + (n.value,) if n.kind == "value" else prefix
            out.append(("cell", full, None))


def _freeze(nodes: list[_Node]) -> tuple[HeaderNode, ...]:
    return tuple(
        HeaderNode(n.label, n.kind, n.value, n.fn, _freeze(n.children)) for n in nodes
    )


# --------------------------------------------------------------------------
# materialize
# --------------------------------------------------------------------------

def materialize(ds: Dataset, tm: MultidimensionalTable) -> Grid:
    c = ds.constellation
    fact = tm.subject.fact
    line_layers = _axis_layers(tm.line)
    col_layers = _axis_layers(tm.column)

    # Grouping pass: one (line key, column key) per row passing R.
    def key_of(row, layers):
        return tuple(
            tuple(ds.linked_value(row, dim, attr) for dim, attr in layer.attrs)
            for layer in layers
            if layer.key_pos >= 0
        )

    pairs: list[tuple[tuple, tuple, object]] = []
    for row in ds.fact_instances[fact]:
        if restriction_passes(ds, fact, row, tm.restriction):
            pairs.append((key_of(row, line_layers), key_of(row, col_layers), row))

    # Display order: ascending per attribute unless the table overrides it,
    # finer levels nested inside coarser ones.
    def ranker(layers):
        ranks = []
        for layer in layers:
            if layer.key_pos < 0:
                continue
            comp_ranks = []
            for dim, attr in layer.attrs:
                order = effective_order(tm, ds, dim, attr)
                comp_ranks.append({v: i for i, v in enumerate(order)})
            ranks.append(comp_ranks)
        return ranks

    def sort_keys(keys, ranks):
        def k(key):
            parts = []
            for tup, comp_ranks in zip(key, ranks):
                for v, r in zip(tup, comp_ranks):
                    parts.append(r.get(v, len(r)))
            return tuple(parts)
        return sorted(keys, key=k)

    line_keys = sort_keys({p[0] for p in pairs}, ranker(line_layers))
    col_keys = sort_keys({p[1] for p in pairs}, ranker(col_layers))

    # Header trees; an axis rolled up to All shows the single line "all".
    def build_axis(keys, layers, axis):
        if not layers:
            nodes = [_Node(ALL_VALUE, "all")] if keys else []
        else:
            nodes = _build_tree(keys, layers, 0)
        for spec in tm.aggregates:
            if spec.dimension != axis.dimension:
                continue
            # Subtotals attach to the unit whose leading attribute is the
            # requested one; leading attributes keep equal values adjacent
            # under the sort, so each value forms one block.
            for li, layer in enumerate(layers):
                if layer.key_pos >= 0 and layer.attrs and layer.attrs[0] == (spec.dimension, spec.attribute):
                    _insert_subtotals(nodes, 0, li, 0, spec.fn)
                    break
        return nodes

    line_nodes = build_axis(line_keys, line_layers, tm.line)
    col_nodes = build_axis(col_keys, col_layers, tm.column)

    line_leaves: list = []
    col_leaves: list = []
    _collect_leaves(line_nodes, (), line_leaves)
    _collect_leaves(col_nodes, (), col_leaves)

    # Leaf lookup: project row keys down to each leaf's granularity once.
    def leaf_cfg(leaf):
        kind, _, meta = leaf
        if kind == "cell":
            return None
        # meta holds (key_pos, comp, value, fn) relative to the layer list;
        # key_pos counts group layers only.
        return (meta[0], meta[1])

    def project(key, cfg, layers):
        if cfg is None:
            return key
        li, comp = cfg
        kp = layers[li].key_pos
        return key[:kp] + (key[kp][comp],)

    def leaf_key(leaf, cfg, layers):
        kind, data, meta = leaf
        if cfg is None:
            return data
        return data + (meta[2],)

    cache: dict[tuple, dict] = {}

    def instances(rleaf, cleaf):
        rcfg, ccfg = leaf_cfg(rleaf), leaf_cfg(cleaf)
        table = cache.get((rcfg, ccfg))
        if table is None:
            table = {}
            for lk, ck, row in pairs:
                k = (project(lk, rcfg, line_layers), project(ck, ccfg, col_layers))
                table.setdefault(k, []).append(row)
            cache[(rcfg, ccfg)] = table
        k = (leaf_key(rleaf, rcfg, line_layers), leaf_key(cleaf, ccfg, col_layers))
        return table.get(k, ())

    pulled_specs = [
        (u.fn, u.measure)
        for axis in (tm.line, tm.column)
        for u in axis.displayed
        if isinstance(u, MeasureUnit)
    ]
    terms = tm.subject.terms

    def make_cell(rleaf, cleaf):
        rows = instances(rleaf, cleaf)
        if not rows:
            return Cell((None,) * len(terms), (None,) * len(pulled_specs))
        sub_fn = rleaf[2][3] if rleaf[0] == "sub" else (cleaf[2][3] if cleaf[0] == "sub" else None)
        values = []
        for t in terms:
            if t.pushed:
                distinct = {ds.linked_value(r, t.dimension, t.name) for r in rows}
                values.append(tuple(sorted(distinct)))
            else:
                values.append(fold(sub_fn or t.fn, [r.measures[t.name] for r in rows]))
        pulled = tuple(fold(fn, [r.measures[m] for r in rows]) for fn, m in pulled_specs)
        return Cell(tuple(values), pulled)

    cells = tuple(
        tuple(make_cell(rl, cl) for cl in col_leaves) for rl in line_leaves
    )

    def caption(axis):
        return f"{axis.dimension.upper()} {axis.hierarchy.upper()}"

    return Grid(
        fact=fact,
        measures=tuple(t.label() for t in terms),
        pulled=tuple(f"{fn}({m.upper()})" for fn, m in pulled_specs),
        restriction=restriction_lines(tm.restriction),
        rows=HeaderTree(caption(tm.line), tuple(l.label for l in line_layers), _freeze(line_nodes)),
        columns=HeaderTree(caption(tm.column), tuple(l.label for l in col_layers), _freeze(col_nodes)),
        cells=cells,
    )


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def _cell_text(cell: Cell) -> str:
    if all(v is None for v in cell.values) and all(v is None for v in cell.pulled):
        return ""

    def fmt(v: CellValue) -> str:
        if isinstance(v, tuple):
            return "{" + ", ".join(
                format_number(x) if isinstance(x, (int, float)) else str(x) for x in v
            ) + "}"
        return format_number(v) if v is not None else ""

    parts = []
    if cell.pulled:
        parts.append("[" + ", ".join(fmt(v) for v in cell.pulled) + "]")
    if cell.values:
        parts.append("(" + ", ".join(fmt(v) for v in cell.values) + ")")
    return " ".join(parts)


def _leaf_rows(tree: HeaderTree) -> list[list[HeaderNode]]:
    """One entry per leaf: the node path from root to that leaf."""
    paths: list[list[HeaderNode]] = []

    def walk(nodes, path):
        for n in nodes:
            if n.children:
                walk(n.children, path + [n])
            else:
                paths.append(path + [n])

    walk(tree.nodes, [])
    return paths


def render_text(g: Grid) -> str:
    row_paths = _leaf_rows(g.rows)
    col_paths = _leaf_rows(g.columns)
    H = max(1, len(g.rows.layers))
    D = max(1, len(col_paths))
    width = 1 + H + D

    def blank() -> list[str]:
        return [""] * width

    lines: list[list[str]] = []

    head = blank()
    head[0] = g.fact.upper()
    head[1 + H] = g.columns.caption
    lines.append(head)
    meas = blank()
    meas[0] = ", ".join(g.measures) if g.measures else "-"
    lines.append(meas)

    # One row per column header layer; each leaf prints its label at the
    # first data column it spans.
    n_col_layers = len(g.columns.layers) if g.columns.layers else (1 if col_paths else 0)
    for li in range(n_col_layers):
        row = blank()
        if li < len(g.columns.layers):
            row[H] = g.columns.layers[li]
        prev = None
        for ci, path in enumerate(col_paths):
            node = path[li] if li < len(path) else None
            if node is not None and node is not prev:
                row[1 + H + ci] = node.label
            prev = node
        lines.append(row)

    cap = blank()
    cap[0] = g.rows.caption
    lines.append(cap)
    if g.rows.layers:
        lab = blank()
        for i, layer in enumerate(g.rows.layers):
            lab[1 + i] = layer
        lines.append(lab)

    prev_path: list[HeaderNode] = []
    for ri, path in enumerate(row_paths):
        row = blank()
        for li, node in enumerate(path):
            if li >= len(prev_path) or prev_path[li] is not node:
                row[1 + li] = node.label
        prev_path = list(path)
        for ci in range(len(col_paths)):
            row[1 + H + ci] = _cell_text(g.cells[ri][ci])
        lines.append(row)

    widths = [max((len(r[i]) for r in lines), default=0) for i in range(width)]
    # trailing empty cells leave bare separators; trim them
    out = [" | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip(" |") for row in lines]
    for clause in g.restriction:
        out.append(clause)
    return "\n".join(out) + "\n"


def _node_doc(n: HeaderNode) -> dict:
    doc: dict = {"label": n.label, "kind": n.kind, "value": list(n.value)}
    if n.fn is not None:
        doc["fn"] = n.fn
    doc["children"] = [_node_doc(ch) for ch in n.children]
    return doc


def _node_from_doc(doc: dict) -> HeaderNode:
    return HeaderNode(
        doc["label"],
        doc["kind"],
        tuple(doc["value"]),
        doc.get("fn"),
        tuple(_node_from_doc(ch) for ch in doc.get("children", [])),
    )


def grid_to_document(g: Grid) -> dict:
    def cell_doc(c: Cell) -> dict:
        enc = lambda v: list(v) if isinstance(v, tuple) else v
        return {"values": [enc(v) for v in c.values], "pulled": [enc(v) for v in c.pulled]}

    def tree_doc(t: HeaderTree) -> dict:
        return {"caption": t.caption, "layers": list(t.layers), "nodes": [_node_doc(n) for n in t.nodes]}

    return {
        "kind": "grid",
        "subject": {"fact": g.fact, "measures": list(g.measures)},
        "pulled": list(g.pulled),
        "restriction": list(g.restriction),
        "rows": tree_doc(g.rows),
        "columns": tree_doc(g.columns),
        "cells": [[cell_doc(c) for c in row] for row in g.cells],
    }


def grid_from_document(doc: dict) -> Grid:
    def cell(c: dict) -> Cell:
        dec = lambda v: tuple(v) if isinstance(v, list) else v
        return Cell(tuple(dec(v) for v in c["values"]), tuple(dec(v) for v in c["pulled"]))

    def tree(t: dict) -> HeaderTree:
        return HeaderTree(t["caption"], tuple(t["layers"]), tuple(_node_from_doc(n) for n in t["nodes"]))

    return Grid(
        fact=doc["subject"]["fact"],
        measures=tuple(doc["subject"]["measures"]),
        pulled=tuple(doc["pulled"]),
        restriction=tuple(doc["restriction"]),
        rows=tree(doc["rows"]),
        columns=tree(doc["columns"]),
        cells=tuple(tuple(cell(c) for c in row) for row in doc["cells"]),
    )


def render(g: Grid, format: str = "text") -> str:
    """Deterministic display form of a grid: "text" or "structured" (JSON)."""
    if format == "structured":
        return json.dumps(grid_to_document(g), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if format != "text":
        raise ValueError(f"unknown render format {format!r}")
    return render_text(g)


# --------------------------------------------------------------------------
# Equality
# --------------------------------------------------------------------------

def tm_equal(ds: Dataset, a: MultidimensionalTable, b: MultidimensionalTable) -> bool:
    """Same subject, axes, restriction up to logical normalization, same
    display orders on displayed attributes, and identical grids.

    History and raw subtotal specifications are not compared: two tables
    reached by different routes count as equal when they show the same
    thing.
    """
    if a.subject != b.subject or a.line != b.line or a.column != b.column:
        return False
    if a.restriction.normalized() != b.restriction.normalized():
        return False
    for dim, attr in displayed_attributes(a):
        if effective_order(a, ds, dim, attr) != effective_order(b, ds, dim, attr):
            return False
    ga, gb = materialize(ds, a), materialize(ds, b)
    return (
        ga.rows == gb.rows
        and ga.columns == gb.columns
        and ga.cells == gb.cells
        and ga.measures == gb.measures
        and ga.pulled == gb.pulled
    )
