"""Constellation schemas.

A constellation groups facts (subjects of analysis, carrying numeric
measures) around shared dimensions (axes of analysis).  Each dimension
is organized by one or more hierarchies: acyclic paths of parameters
running from the synthetic root attribute All down to the dimension's
identity attribute, e.g. All > Annee > Mois > IdDate.  A parameter may
carry weak attributes: descriptive attributes attached at its level
that add detail without defining a level of their own.

Schemas arrive either as a declarative text document (see
docs/schema_format.md and parse_schema_text) or as the equivalent raw
mapping; validate_constellation checks every structural rule and
returns the immutable Constellation used by the rest of the engine.
"""

from __future__ import annotations

import configparser
import io
import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    DuplicateName,
    FactWithFewerThanTwoDimensions,
    HierarchyNotPath,
    IdMismatch,
    InvalidIdentifier,
    InvalidValueKind,
    AttributeNotInHierarchy,
    SchemaError,
    StarTargetMissing,
    UnknownAttributeInHierarchy,
)

# The root attribute present in every hierarchy; its single value tags
# the fully aggregated level.
ALL_ATTRIBUTE = "All"
ALL_VALUE = "all"

VALUE_KINDS = ("text", "integer", "decimal", "date")
NUMERIC_KINDS = ("integer", "decimal")

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def is_identifier(name: str) -> bool:
    return bool(_IDENT.match(name))


def _check_identifier(name: str, role: str) -> None:
    if not is_identifier(name):
        raise InvalidIdentifier(f"{role} name {name!r} is not a valid identifier")


@dataclass(frozen=True)
class Attribute:
    name: str
    value_kind: str = "text"  # one of VALUE_KINDS


@dataclass(frozen=True)
class WeakOf:
    """Level marker for a weak attribute: the parameter it decorates."""

    parameter: str


@dataclass(frozen=True)
class Hierarchy:
    """An ordered path of parameters, coarsest first.

    parameters always starts with All and ends with the dimension's Id.
    weak maps a parameter to the weak attributes attached at its level.
    """

    name: str
    parameters: tuple[str, ...]
    weak: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def level_of(self, attribute: str) -> int | WeakOf | None:
        """Position of attribute on this path, or WeakOf(parameter), or None."""
        for i, p in enumerate(self.parameters):
            if p == attribute:
                return i
        for p, extras in self.weak.items():
            if attribute in extras:
                return WeakOf(p)
        return None


@dataclass(frozen=True)
class Dimension:
    name: str
    attributes: tuple[Attribute, ...]
    hierarchies: tuple[Hierarchy, ...]

    @cached_property
    def attribute_map(self) -> dict[str, Attribute]:
        return {a.name: a for a in self.attributes}

    @property
    def id_attribute(self) -> str:
        # Validation guarantees every hierarchy ends with the same finest
        # parameter: the instance key of the dimension.
        return self.hierarchies[0].parameters[-1]

    def hierarchy(self, name: str) -> Hierarchy:
        for h in self.hierarchies:
            if h.name == name:
                return h
        raise KeyError(name)


@dataclass(frozen=True)
class Fact:
    name: str
    measures: tuple[Attribute, ...]

    @cached_property
    def measure_map(self) -> dict[str, Attribute]:
        return {m.name: m for m in self.measures}


@dataclass(frozen=True)
class Constellation:
    name: str
    facts: tuple[Fact, ...]
    dimensions: tuple[Dimension, ...]
    star: dict[str, tuple[str, ...]]  # fact name -> starred dimension names

    @cached_property
    def fact_map(self) -> dict[str, Fact]:
        return {f.name: f for f in self.facts}

    @cached_property
    def dimension_map(self) -> dict[str, Dimension]:
        return {d.name: d for d in self.dimensions}


def attribute_level(dimension: Dimension, hierarchy: Hierarchy, attribute: str) -> int | WeakOf:
    """Graduation level of attribute on hierarchy (0 = All, higher = finer).

    Weak attributes resolve to WeakOf(parameter) at their parameter's level.
    """
    level = hierarchy.level_of(attribute)
    if level is None:
        raise AttributeNotInHierarchy(
            f"{attribute!r} is not on hierarchy {hierarchy.name!r} of {dimension.name!r}"
        )
    return level


# --------------------------------------------------------------------------
# Validation: raw mapping -> Constellation
# --------------------------------------------------------------------------

def _parse_attr_decl(decl: str) -> Attribute:
    # "Name" or "Name:kind"
    name, _, kind = decl.partition(":")
    name, kind = name.strip(), kind.strip()
    if kind and kind not in VALUE_KINDS:
        raise InvalidValueKind(f"unknown value kind {kind!r} for attribute {name!r}")
    return Attribute(name, kind or "text")


def _validate_dimension(raw: dict) -> Dimension:
    name = raw["name"]
    _check_identifier(name, "dimension")

    attrs: list[Attribute] = []
    seen: set[str] = set()
    for a in raw.get("attributes", []):
        attr = a if isinstance(a, Attribute) else Attribute(a[0], a[1]) if isinstance(a, tuple) else _parse_attr_decl(a)
        _check_identifier(attr.name, "attribute")
        if attr.value_kind not in VALUE_KINDS:
            raise InvalidValueKind(f"unknown value kind {attr.value_kind!r} for {attr.name!r}")
        if attr.name in seen:
            raise DuplicateName(f"attribute {attr.name!r} declared twice in {name!r}")
        seen.add(attr.name)
        attrs.append(attr)
    if ALL_ATTRIBUTE not in seen:
        attrs.insert(0, Attribute(ALL_ATTRIBUTE, "text"))
        seen.add(ALL_ATTRIBUTE)

    hierarchies: list[Hierarchy] = []
    hier_names: set[str] = set()
    for h in raw.get("hierarchies", []):
        hname = h["name"]
        _check_identifier(hname, "hierarchy")
        if hname in hier_names:
            raise DuplicateName(f"hierarchy {hname!r} declared twice in {name!r}")
        hier_names.add(hname)
        params = list(h["parameters"])
        if not params:
            raise HierarchyNotPath(f"hierarchy {hname!r} of {name!r} has no parameters")
        if params[0] != ALL_ATTRIBUTE:
            params.insert(0, ALL_ATTRIBUTE)
        if len(params) < 2:
            raise HierarchyNotPath(f"hierarchy {hname!r} of {name!r} has no level below All")
        if len(set(params)) != len(params):
            raise HierarchyNotPath(f"hierarchy {hname!r} of {name!r} repeats a parameter")
        weak: dict[str, tuple[str, ...]] = {}
        for p, extras in dict(h.get("weak", {})).items():
            if p not in params:
                raise UnknownAttributeInHierarchy(
                    f"weak attributes of {hname!r} attached to {p!r}, not a parameter"
                )
            extras = tuple(extras)
            for w in extras:
                if w not in seen:
                    raise UnknownAttributeInHierarchy(
                        f"weak attribute {w!r} of {hname!r} not declared in {name!r}"
                    )
                if w in params:
                    raise HierarchyNotPath(
                        f"{w!r} cannot be both a parameter and a weak attribute of {hname!r}"
                    )
            if extras:
                weak[p] = extras
        for p in params:
            if p not in seen:
                raise UnknownAttributeInHierarchy(
                    f"parameter {p!r} of {hname!r} not declared in {name!r}"
                )
        hierarchies.append(Hierarchy(hname, tuple(params), weak))

    if not hierarchies:
        raise HierarchyNotPath(f"dimension {name!r} declares no hierarchy")
    finest = {h.parameters[-1] for h in hierarchies}
    if len(finest) != 1:
        raise IdMismatch(
            f"hierarchies of {name!r} end at different attributes: {sorted(finest)}"
        )
    return Dimension(name, tuple(attrs), tuple(hierarchies))


def _validate_fact(raw: dict) -> Fact:
    name = raw["name"]
    _check_identifier(name, "fact")
    measures: list[Attribute] = []
    seen: set[str] = set()
    for m in raw.get("measures", []):
        attr = m if isinstance(m, Attribute) else Attribute(m[0], m[1]) if isinstance(m, tuple) else _parse_attr_decl(m if ":" in m else m + ":decimal")
        _check_identifier(attr.name, "measure")
        if attr.value_kind not in NUMERIC_KINDS:
            raise InvalidValueKind(f"measure {attr.name!r} must be numeric, got {attr.value_kind!r}")
        if attr.name in seen:
            raise DuplicateName(f"measure {attr.name!r} declared twice in {name!r}")
        seen.add(attr.name)
        measures.append(attr)
    if not measures:
        raise SchemaError(f"fact {name!r} declares no measure")
    return Fact(name, tuple(measures))


def validate_constellation(raw: dict | Constellation) -> Constellation:
    """Check every schema rule and return the immutable Constellation.

    Accepts either a raw mapping (see parse_schema_text) or an existing
    Constellation, which is re-derived and re-checked.
    """
    if isinstance(raw, Constellation):
        raw = constellation_to_raw(raw)

    name = raw.get("name", "")
    _check_identifier(name, "constellation")

    dimensions = [_validate_dimension(d) for d in raw.get("dimensions", [])]
    facts = [_validate_fact(f) for f in raw.get("facts", [])]

    names: set[str] = set()
    for n in [d.name for d in dimensions] + [f.name for f in facts]:
        if n in names:
            raise DuplicateName(f"{n!r} used for more than one fact/dimension")
        names.add(n)
    if not facts:
        raise SchemaError(f"constellation {name!r} declares no fact")

    dim_names = {d.name for d in dimensions}
    star: dict[str, tuple[str, ...]] = {}
    raw_star = dict(raw.get("star", {}))
    for f in facts:
        linked = tuple(raw_star.get(f.name, ()))
        for d in linked:
            if d not in dim_names:
                raise StarTargetMissing(f"fact {f.name!r} links unknown dimension {d!r}")
        if len(set(linked)) != len(linked):
            raise DuplicateName(f"fact {f.name!r} links a dimension twice")
        if len(linked) < 2:
            raise FactWithFewerThanTwoDimensions(
                f"fact {f.name!r} must link at least two dimensions, got {len(linked)}"
            )
        star[f.name] = linked

    return Constellation(name, tuple(facts), tuple(dimensions), star)


def constellation_to_raw(c: Constellation) -> dict:
    """Inverse of validate_constellation, up to attribute defaults."""
    return {
        "name": c.name,
        "dimensions": [
            {
                "name": d.name,
                "attributes": [(a.name, a.value_kind) for a in d.attributes],
                "hierarchies": [
                    {"name": h.name, "parameters": list(h.parameters), "weak": dict(h.weak)}
                    for h in d.hierarchies
                ],
            }
            for d in c.dimensions
        ],
        "facts": [
            {"name": f.name, "measures": [(m.name, m.value_kind) for m in f.measures]}
            for f in c.facts
        ],
        "star": {f: list(ds) for f, ds in c.star.items()},
    }


# --------------------------------------------------------------------------
# Text document form
# --------------------------------------------------------------------------

_WEAK_DECL = re.compile(r"^(?P<param>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\((?P<weak>[^)]*)\))?$")


def _parse_hierarchy_value(hname: str, value: str) -> dict:
    params: list[str] = []
    weak: dict[str, tuple[str, ...]] = {}
    for part in value.split(">"):
        part = part.strip()
        m = _WEAK_DECL.match(part)
        if not m:
            raise SchemaError(f"cannot read hierarchy level {part!r} in {hname!r}")
        params.append(m.group("param"))
        if m.group("weak"):
            weak[m.group("param")] = tuple(w.strip() for w in m.group("weak").split(","))
    return {"name": hname, "parameters": params, "weak": weak}


def parse_schema_text(text: str) -> dict:
    """Read the declarative schema document into a raw mapping.

    The format is line-oriented key/value sections; docs/schema_format.md
    holds the exact grammar.  This function only reads the document; all
    structural checking happens in validate_constellation.
    """
    cp = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",), interpolation=None)
    cp.optionxform = str  # keep identifier case
    try:
        cp.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise SchemaError(f"malformed schema document: {exc}") from exc

    raw: dict = {"name": "", "dimensions": [], "facts": [], "star": {}}
    for section in cp.sections():
        body = cp[section]
        if section == "constellation":
            raw["name"] = body.get("name", "").strip()
            continue
        kind, _, entity = section.partition(" ")
        entity = entity.strip()
        if kind == "dimension" and entity:
            hierarchies = []
            attributes: list[str] = []
            for key, value in body.items():
                if key == "attributes":
                    attributes = [a.strip() for a in value.split(",") if a.strip()]
                elif key.startswith("hierarchy "):
                    hierarchies.append(_parse_hierarchy_value(key.split(None, 1)[1], value))
                else:
                    raise SchemaError(f"unknown key {key!r} in [{section}]")
            raw["dimensions"].append(
                {"name": entity, "attributes": attributes, "hierarchies": hierarchies}
            )
        elif kind == "fact" and entity:
            measures: list[str] = []
            linked: list[str] = []
            for key, value in body.items():
                if key == "measures":
                    measures = [m.strip() for m in value.split(",") if m.strip()]
                elif key == "dimensions":
                    linked = [d.strip() for d in value.split(",") if d.strip()]
                else:
                    raise SchemaError(f"unknown key {key!r} in [{section}]")
            raw["facts"].append({"name": entity, "measures": measures})
            raw["star"][entity] = linked
        else:
            raise SchemaError(f"unknown section [{section}]")
    return raw


def render_schema_text(c: Constellation) -> str:
    """Write a Constellation back to the document form."""
    out: list[str] = ["[constellation]", f"name = {c.name}", ""]
    for d in c.dimensions:
        out.append(f"[dimension {d.name}]")
        decls = [
            a.name if a.value_kind == "text" else f"{a.name}:{a.value_kind}"
            for a in d.attributes
            if a.name != ALL_ATTRIBUTE
        ]
        out.append(f"attributes = {', '.join(decls)}")
        for h in d.hierarchies:
            levels = []
            for p in h.parameters:
                if p == ALL_ATTRIBUTE:
                    continue
                extras = h.weak.get(p)
                levels.append(f"{p}({', '.join(extras)})" if extras else p)
            out.append(f"hierarchy {h.name} = {' > '.join(levels)}")
        out.append("")
    for f in c.facts:
        out.append(f"[fact {f.name}]")
        out.append(f"measures = {', '.join(f'{m.name}:{m.value_kind}' for m in f.measures)}")
        out.append(f"dimensions = {', '.join(c.star[f.name])}")
        out.append("")
    return "\n".join(out)
