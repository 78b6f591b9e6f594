"""startab: an in-memory engine for multidimensional tables.

A constellation schema (facts, dimensions, hierarchies) is loaded from
a schema file plus CSV data, then queried through a closed algebra of
table operators, a textual query language, a CLI and an HTTP service.
"""

from .data import Dataset, load_dataset, load_directory
from .errors import (
    AlgebraError,
    DataError,
    OlapError,
    QueryError,
    SchemaError,
    ServiceError,
)
from .grid import Grid, grid_from_document, grid_to_document, materialize, render, tm_equal
from .schema import (
    Attribute,
    Constellation,
    Dimension,
    Fact,
    Hierarchy,
    parse_schema_text,
    render_schema_text,
    validate_constellation,
)
from .table import MultidimensionalTable, Restriction

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "Attribute",
    "Constellation",
    "DataError",
    "Dataset",
    "Dimension",
    "Fact",
    "Grid",
    "Hierarchy",
    "MultidimensionalTable",
    "OlapError",
    "QueryError",
    "Restriction",
    "SchemaError",
    "ServiceError",
    "__version__",
    "grid_from_document",
    "grid_to_document",
    "load_dataset",
    "load_directory",
    "materialize",
    "parse_schema_text",
    "render",
    "render_schema_text",
    "tm_equal",
    "validate_constellation",
]
