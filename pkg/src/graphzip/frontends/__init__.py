"""Ingestion frontends: profile parsing and input-to-graph lowering."""

from graphzip.frontends.csv import (
    ROUTE_GENERIC,
    ROUTE_PARSE_INT,
    ROUTE_TOKENIZE,
    ROW_CRLF,
    ROW_EOF,
    ROW_LF,
    Column,
    CsvDialect,
    CsvParse,
    column_type_probe,
    csv_parse,
)
from graphzip.graphs.pipelines import (
    STEPS_BY_KIND,
    TERMINALS,
    Pipeline,
    apply_pipeline,
    steps_for,
)
from graphzip.frontends.profiles import (
    NUMERIC_WIDTHS,
    PROFILE_NAMES,
    build_input_graph,
    parse_profile,
)

__all__ = [
    "ROUTE_GENERIC",
    "ROUTE_PARSE_INT",
    "ROUTE_TOKENIZE",
    "ROW_CRLF",
    "ROW_EOF",
    "ROW_LF",
    "Column",
    "CsvDialect",
    "CsvParse",
    "column_type_probe",
    "csv_parse",
    "STEPS_BY_KIND",
    "TERMINALS",
    "Pipeline",
    "apply_pipeline",
    "steps_for",
    "NUMERIC_WIDTHS",
    "PROFILE_NAMES",
    "build_input_graph",
    "parse_profile",
]
