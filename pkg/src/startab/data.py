"""Instance data for a constellation.

Dimension instances are rows keyed by the dimension's Id attribute;
fact instances carry one numeric value per measure and one link per
starred dimension (the Id of the dimension instance they point at).
Data loads from one CSV file per dimension and per fact: first row is
the column names, cells are typed by each attribute's declared kind.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import (
    BadValue,
    DanglingLink,
    DuplicateId,
    MissingColumn,
    NonNumericMeasure,
    UnknownAttribute,
    UnknownTable,
)
from .schema import (
    ALL_ATTRIBUTE,
    ALL_VALUE,
    Constellation,
    Dimension,
    parse_schema_text,
    validate_constellation,
)

Scalar = str | int | float


@dataclass(frozen=True)
class DimensionInstance:
    dimension: str
    values: dict[str, Scalar]  # attribute name -> value; always holds All


@dataclass(frozen=True)
class FactInstance:
    fact: str
    measures: dict[str, int | float]
    links: dict[str, Scalar]  # dimension name -> Id value of the linked instance


@dataclass(frozen=True)
class Dataset:
    constellation: Constellation
    dim_instances: dict[str, tuple[DimensionInstance, ...]]
    fact_instances: dict[str, tuple[FactInstance, ...]]

    @cached_property
    def dim_index(self) -> dict[str, dict[Scalar, DimensionInstance]]:
        """Per dimension: Id value -> instance."""
        index: dict[str, dict[Scalar, DimensionInstance]] = {}
        for d in self.constellation.dimensions:
            key = d.id_attribute
            index[d.name] = {inst.values[key]: inst for inst in self.dim_instances[d.name]}
        return index

    def linked_value(self, row: FactInstance, dimension: str, attribute: str) -> Scalar:
        """Value of attribute on the dimension instance row links to."""
        return self.dim_index[dimension][row.links[dimension]].values[attribute]


def _parse_cell(raw: str, kind: str, where: str) -> Scalar:
    raw = raw.strip()
    try:
        if kind == "integer":
            return int(raw)
        if kind == "decimal":
            return float(raw)
    except ValueError as exc:
        raise BadValue(f"{where}: {raw!r} is not a {kind}") from exc
    return raw


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return [], []
    header = [c.strip() for c in rows[0]]
    return header, [r for r in rows[1:] if any(c.strip() for c in r)]


def _load_dimension(d: Dimension, path: Path) -> tuple[DimensionInstance, ...]:
    header, rows = _read_rows(path)
    declared = [a.name for a in d.attributes if a.name != ALL_ATTRIBUTE]
    for name in declared:
        if name not in header:
            raise MissingColumn(f"{path.name}: missing column {name!r}")
    for name in header:
        if name not in declared:
            raise UnknownAttribute(f"{path.name}: column {name!r} not declared on {d.name!r}")
    instances = []
    seen_ids: set[Scalar] = set()
    for i, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise BadValue(f"{path.name} line {i}: {len(row)} cells for {len(header)} columns")
        values: dict[str, Scalar] = {ALL_ATTRIBUTE: ALL_VALUE}
        for name, cell in zip(header, row):
            kind = d.attribute_map[name].value_kind
            values[name] = _parse_cell(cell, kind, f"{path.name} line {i}, column {name}")
        key = values.get(d.id_attribute)
        if key is None:
            raise MissingColumn(f"{path.name} line {i}: no value for {d.id_attribute!r}")
        if key in seen_ids:
            raise DuplicateId(f"{path.name} line {i}: duplicate {d.id_attribute} {key!r}")
        seen_ids.add(key)
        instances.append(DimensionInstance(d.name, values))
    return tuple(instances)


def _load_fact(c: Constellation, fact_name: str, path: Path,
               dims: dict[str, tuple[DimensionInstance, ...]]) -> tuple[FactInstance, ...]:
    fact = c.fact_map[fact_name]
    header, rows = _read_rows(path)
    link_cols = {}  # column name -> dimension name
    for dname in c.star[fact_name]:
        key = c.dimension_map[dname].id_attribute
        if key not in header:
            raise MissingColumn(f"{path.name}: missing link column {key!r} for {dname!r}")
        link_cols[key] = dname
    for m in fact.measures:
        if m.name not in header:
            raise MissingColumn(f"{path.name}: missing measure column {m.name!r}")
    for name in header:
        if name not in link_cols and name not in fact.measure_map:
            raise UnknownAttribute(f"{path.name}: column {name!r} not declared on {fact_name!r}")

    ids = {
        dname: {inst.values[c.dimension_map[dname].id_attribute] for inst in dims[dname]}
        for dname in c.star[fact_name]
    }
    instances = []
    for i, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise BadValue(f"{path.name} line {i}: {len(row)} cells for {len(header)} columns")
        measures: dict[str, int | float] = {}
        links: dict[str, Scalar] = {}
        for name, cell in zip(header, row):
            where = f"{path.name} line {i}, column {name}"
            if name in link_cols:
                dname = link_cols[name]
                kind = c.dimension_map[dname].attribute_map[c.dimension_map[dname].id_attribute].value_kind
                value = _parse_cell(cell, kind, where)
                if value not in ids[dname]:
                    raise DanglingLink(f"{where}: no {dname} instance with id {value!r}")
                links[dname] = value
            else:
                kind = fact.measure_map[name].value_kind
                value = _parse_cell(cell, kind, where)
                if not isinstance(value, (int, float)):
                    raise NonNumericMeasure(f"{where}: measure value {cell!r} is not numeric")
                measures[name] = value
        instances.append(FactInstance(fact_name, measures, links))
    return tuple(instances)


def load_dataset(c: Constellation, tables: dict[str, Path | str]) -> Dataset:
    """Load one tabular file per dimension and per fact.

    tables maps each fact/dimension name to its CSV path; every entity of
    the constellation must be covered.
    """
    tables = {name: Path(p) for name, p in tables.items()}
    dims: dict[str, tuple[DimensionInstance, ...]] = {}
    for d in c.dimensions:
        if d.name not in tables:
            raise UnknownTable(f"no table given for dimension {d.name!r}")
        dims[d.name] = _load_dimension(d, tables[d.name])
    facts: dict[str, tuple[FactInstance, ...]] = {}
    for f in c.facts:
        if f.name not in tables:
            raise UnknownTable(f"no table given for fact {f.name!r}")
        facts[f.name] = _load_fact(c, f.name, tables[f.name], dims)
    return Dataset(c, dims, facts)


def load_directory(directory: Path | str) -> Dataset:
    """Load a constellation directory: one .schema document plus CSVs.

    The directory holds exactly one *.schema file; each entity NAME loads
    from NAME.csv, falling back to the lowercased file name.
    """
    directory = Path(directory)
    schemas = sorted(directory.glob("*.schema"))
    if len(schemas) != 1:
        raise UnknownTable(
            f"{directory} must hold exactly one .schema document, found {len(schemas)}"
        )
    c = validate_constellation(parse_schema_text(schemas[0].read_text(encoding="utf-8")))
    tables: dict[str, Path] = {}
    for name in [d.name for d in c.dimensions] + [f.name for f in c.facts]:
        exact = directory / f"{name}.csv"
        lower = directory / f"{name.lower()}.csv"
        tables[name] = exact if exact.exists() else lower
        if not tables[name].exists():
            raise UnknownTable(f"no CSV found for {name!r} in {directory}")
    return load_dataset(c, tables)


def member_values(ds: Dataset, dimension: str, attributes: list[str] | tuple[str, ...]) -> list[tuple[Scalar, ...]]:
    """Distinct value tuples of attributes over the dimension's instances.

    Tuples come back in display order: ascending per attribute, finer
    positions nested inside coarser ones.
    """
    d = ds.constellation.dimension_map[dimension]
    for a in attributes:
        if a not in d.attribute_map:
            raise UnknownAttribute(f"{a!r} is not an attribute of {dimension!r}")
    # per-position types are homogeneous (cells are typed by attribute kind)
    distinct = {tuple(inst.values[a] for a in attributes) for inst in ds.dim_instances[dimension]}
    return sorted(distinct)


def attribute_domain(ds: Dataset, dimension: str, attribute: str) -> list[Scalar]:
    """Distinct values of one attribute, in default ascending order."""
    return [t[0] for t in member_values(ds, dimension, (attribute,))]
