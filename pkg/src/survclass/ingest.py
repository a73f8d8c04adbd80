"""CSV ingestion, pruning of sparse columns and incomplete rows, encoding.

The CSV dialect is UTF-8, comma-separated, RFC-4180 quoting, first row a
header naming a superset of the schema variables. Cells matching a
variable's declared missing codes become MISSING; header columns not in
the schema are dropped.

Encoding turns a fully observed table into the design matrix: numeric
variables become one column each (optionally standardized to zero mean
and unit population stddev; constant columns map to all-zeros),
categorical variables with L levels become L one-hot indicator columns.
Only feature-role variables are encoded; the label source never leaks
into the matrix.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .data_model import (
    Categorical,
    Cell,
    ColumnMeta,
    EncodedMatrix,
    MISSING,
    RawTable,
    Role,
    Schema,
    column_missing_fraction,
)


class CsvParseError(ValueError):
    """Malformed CSV input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_csv(text: str, schema: Schema) -> RawTable:
    """Parse a CSV extract against a schema.

    Raises:
        CsvParseError: On unbalanced quotes, ragged rows, a header missing
            a schema variable, or a categorical cell that is neither a
            declared level nor a missing code.
    """
    reader = csv.reader(io.StringIO(text), strict=True)
    try:
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("empty input, expected a header row") from None
        positions = _header_positions(header, schema)
        rows: list[tuple[Cell, ...]] = []
        for record in reader:
            if not record:
                continue  # blank line
            if len(record) != len(header):
                raise CsvParseError(
                    f"expected {len(header)} fields, got {len(record)}", reader.line_num
                )
            rows.append(_convert_row(record, positions, schema, reader.line_num))
    except csv.Error as e:
        raise CsvParseError(f"malformed CSV ({e})", reader.line_num) from e
    return RawTable(schema, rows)


def _header_positions(header: list[str], schema: Schema) -> list[int]:
    missing = [name for name in schema.names() if name not in header]
    if missing:
        raise CsvParseError(f"header missing schema variables: {', '.join(missing)}", 1)
    return [header.index(name) for name in schema.names()]


def _convert_row(
    record: list[str], positions: list[int], schema: Schema, line: int
) -> tuple[Cell, ...]:
    cells: list[Cell] = []
    for var, pos in zip(schema.variables, positions):
        raw = record[pos]
        if var.is_missing_code(raw):
            cells.append(MISSING)
        elif isinstance(var.kind, Categorical) and raw not in var.kind.levels:
            raise CsvParseError(
                f"variable {var.name!r}: {raw!r} is not a declared level or missing code", line
            )
        else:
            cells.append(raw)
    return tuple(cells)


def emit_csv(table: RawTable) -> str:
    """Render a table back to the ingest CSV format (header + rows).

    MISSING cells are written as the variable's empty-string code when
    declared, otherwise the smallest declared code; a column with missing
    cells but no declared codes cannot be emitted faithfully.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.schema.names())
    codes = [_missing_code_for(v) for v in table.schema.variables]
    for r, row in enumerate(table.rows):
        record = []
        for c, cell in enumerate(row):
            if cell is MISSING:
                if codes[c] is None:
                    name = table.schema.variables[c].name
                    raise ValueError(
                        f"row {r}: {name!r} is missing but declares no missing codes"
                    )
                record.append(codes[c])
            else:
                record.append(cell)
        writer.writerow(record)
    return out.getvalue()


def _missing_code_for(var) -> Optional[str]:
    if not var.missing_codes:
        return None
    return "" if "" in var.missing_codes else min(var.missing_codes)


def drop_columns(table: RawTable, names: Sequence[str]) -> RawTable:
    """Project the named variables out of the table (order preserved)."""
    gone = set(names)
    keep_idx = [i for i, v in enumerate(table.schema.variables) if v.name not in gone]
    schema = table.schema.without(names)
    rows = [tuple(row[i] for i in keep_idx) for row in table.rows]
    return RawTable(schema, rows)


def drop_ignored_columns(table: RawTable) -> tuple[RawTable, list[str]]:
    """Remove variables declared unimportant (role IGNORED)."""
    removed = [v.name for v in table.schema.variables if v.role is Role.IGNORED]
    return drop_columns(table, removed), removed


def drop_sparse_columns(
    table: RawTable, threshold: float, protect: Sequence[str] = ()
) -> tuple[RawTable, list[str]]:
    """Remove columns whose missing fraction exceeds ``threshold``.

    Row count is unchanged. ``protect`` names variables exempt from
    removal (the pipeline shields the label source); with the default
    empty set every column is a candidate.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    shielded = set(protect)
    removed = [
        v.name
        for v in table.schema.variables
        if v.name not in shielded and column_missing_fraction(table, v.name) > threshold
    ]
    return drop_columns(table, removed), removed


def drop_incomplete_rows(table: RawTable) -> RawTable:
    """Keep only rows with zero MISSING cells; column set unchanged."""
    rows = [row for row in table.rows if all(cell is not MISSING for cell in row)]
    return RawTable(table.schema, rows)


def encode(table: RawTable, standardize_numeric: bool = True) -> EncodedMatrix:
    """Encode a fully observed table into the numeric design matrix.

    Column order follows schema order; within a categorical variable,
    level order. Standardization uses the population (divide-by-n)
    stddev; a column whose values are all identical maps to zeros.

    Raises:
        ValueError: If any feature or label cell is MISSING, or a numeric
            cell does not parse as a float.
    """
    for var in table.schema.variables:
        if any(cell is MISSING for cell in table.column(var.name)):
            raise ValueError(f"variable {var.name!r} has missing cells; prune rows first")
    features = table.schema.feature_variables()
    n = table.n_rows
    columns: list[np.ndarray] = []
    meta: list[ColumnMeta] = []
    for var in features:
        cells = table.column(var.name)
        if isinstance(var.kind, Categorical):
            for level in var.kind.levels:
                columns.append(np.array([1.0 if c == level else 0.0 for c in cells]))
                meta.append(ColumnMeta(source=var.name, level=level))
        else:
            values = _parse_numeric(var.name, cells)
            if standardize_numeric:
                values, m, s = _standardize(values)
                meta.append(ColumnMeta(source=var.name, mean=m, std=s))
            else:
                meta.append(ColumnMeta(source=var.name))
            columns.append(values)
    matrix = np.column_stack(columns) if columns else np.zeros((n, 0))
    return EncodedMatrix(matrix, meta)


def _parse_numeric(name: str, cells: Sequence[Cell]) -> np.ndarray:
    values = np.empty(len(cells))
    for i, cell in enumerate(cells):
        try:
            values[i] = float(cell)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ValueError(f"variable {name!r}, row {i}: {cell!r} is not numeric") from None
    return values


def _standardize(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    # Identical values are the constant-column case and map to exact zeros;
    # near-constant columns standardize normally.
    if values.size == 0 or np.all(values == values[0]):
        return np.zeros_like(values), float(values[0]) if values.size else 0.0, 0.0
    mean = float(values.mean())
    std = float(np.sqrt(np.mean((values - mean) ** 2)))
    return (values - mean) / std, mean, std


def standardize_columns(values: np.ndarray) -> np.ndarray:
    """Population-standardize every column of a matrix (constants to zeros)."""
    out = np.empty_like(values, dtype=np.float64)
    for j in range(values.shape[1]):
        out[:, j] = _standardize(values[:, j])[0]
    return out


STAGE_SPARSE = "sparse/unimportant"
STAGE_CORRELATION = "correlation"
STAGE_RFE = "rfe"
STAGE_PCA = "pca"
STAGE_ORDER = (STAGE_SPARSE, STAGE_CORRELATION, STAGE_RFE, STAGE_PCA)


@dataclass(frozen=True)
class LedgerStage:
    """One reduction step: which feature columns it removed."""

    stage: str
    removed: tuple[str, ...]

    def __init__(self, stage: str, removed: Sequence[str]):
        if stage not in STAGE_ORDER:
            raise ValueError(f"unknown stage {stage!r}")
        object.__setattr__(self, "stage", stage)
        object.__setattr__(self, "removed", tuple(removed))

    @property
    def count(self) -> int:
        return len(self.removed)


@dataclass(frozen=True)
class ReductionLedger:
    """Per-stage accounting of feature-column removals.

    All counts are in design-matrix column units: a removed categorical
    variable contributes one entry per level, a numeric variable one
    entry. ``initial_count`` is the width the full feature set would
    encode to, so ``initial - sum(removed) == final`` holds exactly.
    """

    initial_count: int
    stages: tuple[LedgerStage, ...]
    final_count: int

    def __init__(self, initial_count: int, stages: Sequence[LedgerStage], final_count: int):
        stages = tuple(stages)
        order = [s.stage for s in stages]
        expected = [st for st in STAGE_ORDER if st in order]
        if order != expected:
            raise ValueError(f"stages out of pipeline order: {order}")
        object.__setattr__(self, "initial_count", initial_count)
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "final_count", final_count)

    def removed_total(self) -> int:
        return sum(s.count for s in self.stages)

    def conserved(self) -> bool:
        """The Table-1 style identity: initial - sum(removed) == final."""
        return self.initial_count - self.removed_total() == self.final_count
