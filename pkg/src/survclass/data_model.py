"""Core value types shared by every pipeline stage.

A :class:`Schema` declares the survey variables (numeric, or categorical
with a fixed level list), which role each plays (feature, label source,
ignored) and which string codes mark a missing cell. A :class:`RawTable`
holds parsed string cells with explicit missing markers; an
:class:`EncodedMatrix` is the numeric design matrix with per-column
provenance back to the source variables.

All types are immutable after construction and safe to share between
concurrent tasks without synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

# Cells are either a raw string or MISSING.
MISSING = None
Cell = Optional[str]

# Codes treated as missing unless a variable declares its own set.
# "Don't Know" is deliberately absent: where the survey lists it, it is a
# legitimate category level, not an absent value.
DEFAULT_MISSING_CODES = frozenset({"", "NA"})


class Role(str, Enum):
    """What a variable contributes to the pipeline."""

    FEATURE = "feature"
    LABEL_SOURCE = "label_source"
    IGNORED = "ignored"


@dataclass(frozen=True)
class Numeric:
    """Real-valued variable; one design-matrix column."""


@dataclass(frozen=True)
class Categorical:
    """Fixed-level variable; one indicator column per level."""

    levels: tuple[str, ...]

    def __init__(self, levels: Sequence[str]):
        object.__setattr__(self, "levels", tuple(levels))


Kind = Union[Numeric, Categorical]


@dataclass(frozen=True)
class VariableSpec:
    """Declaration of a single survey variable."""

    name: str
    kind: Kind
    role: Role = Role.FEATURE
    missing_codes: frozenset[str] = DEFAULT_MISSING_CODES

    def __init__(
        self,
        name: str,
        kind: Kind,
        role: Role = Role.FEATURE,
        missing_codes: Sequence[str] = DEFAULT_MISSING_CODES,
    ):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "role", Role(role))
        object.__setattr__(self, "missing_codes", frozenset(missing_codes))

    @property
    def is_categorical(self) -> bool:
        return isinstance(self.kind, Categorical)

    def is_missing_code(self, cell: str) -> bool:
        return cell in self.missing_codes

    def encoded_width(self) -> int:
        """Number of design-matrix columns this variable produces."""
        if isinstance(self.kind, Categorical):
            return len(self.kind.levels)
        return 1

    def encoded_names(self) -> tuple[str, ...]:
        """Design-matrix column names: ``var`` or ``var=level``."""
        if isinstance(self.kind, Categorical):
            return tuple(f"{self.name}={lvl}" for lvl in self.kind.levels)
        return (self.name,)


@dataclass(frozen=True)
class AnemiaRule:
    """Positive label means anemic, derived from hemoglobin thresholds.

    With ``from_prebinned`` the label source carries the already-binned
    status levels instead of a raw hemoglobin measurement.
    """

    from_prebinned: bool = False


@dataclass(frozen=True)
class MalariaRule:
    """Positive label means a positive recorded malaria test."""


LabelRule = Union[AnemiaRule, MalariaRule]


@dataclass(frozen=True)
class Schema:
    """Ordered variable declarations plus the label-construction rule."""

    variables: tuple[VariableSpec, ...]
    label_rule: LabelRule

    def __init__(self, variables: Sequence[VariableSpec], label_rule: LabelRule):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "label_rule", label_rule)

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def variable(self, name: str) -> VariableSpec:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(f"unknown variable: {name!r}")

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise KeyError(f"unknown variable: {name!r}")

    def label_source(self) -> VariableSpec:
        sources = [v for v in self.variables if v.role is Role.LABEL_SOURCE]
        if len(sources) != 1:
            raise ValueError(f"schema has {len(sources)} label-source variables, expected 1")
        return sources[0]

    def feature_variables(self) -> tuple[VariableSpec, ...]:
        return tuple(v for v in self.variables if v.role is Role.FEATURE)

    def without(self, names: Sequence[str]) -> "Schema":
        """New schema with the named variables removed."""
        gone = set(names)
        return Schema([v for v in self.variables if v.name not in gone], self.label_rule)


def schema_validate(schema: Schema) -> list[str]:
    """Check every schema invariant; return violations as data.

    Returns an empty list iff the schema is well formed. Each violation
    message names the offending variable.
    """
    violations: list[str] = []
    seen: set[str] = set()
    for v in schema.variables:
        if v.name in seen:
            violations.append(f"duplicate variable name: {v.name!r}")
        seen.add(v.name)
        if isinstance(v.kind, Categorical):
            if not v.kind.levels:
                violations.append(f"categorical variable {v.name!r} has an empty level list")
            if len(set(v.kind.levels)) != len(v.kind.levels):
                violations.append(f"categorical variable {v.name!r} has duplicate levels")
    sources = [v.name for v in schema.variables if v.role is Role.LABEL_SOURCE]
    if not sources:
        violations.append("schema has no label-source variable")
    elif len(sources) > 1:
        violations.append(f"schema has multiple label-source variables: {', '.join(sources)}")
    return violations


@dataclass(frozen=True)
class RawTable:
    """Parsed table: one cell per schema variable per row, MISSING allowed."""

    schema: Schema
    rows: tuple[tuple[Cell, ...], ...]

    def __init__(self, schema: Schema, rows: Sequence[Sequence[Cell]]):
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        self._check_cells()

    def _check_cells(self) -> None:
        width = len(self.schema.variables)
        for r, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {r} has {len(row)} cells, schema has {width} variables")
        for c, var in enumerate(self.schema.variables):
            if not isinstance(var.kind, Categorical):
                continue
            levels = set(var.kind.levels)
            for r, row in enumerate(self.rows):
                cell = row[c]
                if cell is not MISSING and cell not in levels:
                    raise ValueError(
                        f"row {r}, variable {var.name!r}: {cell!r} is not a declared level"
                    )

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> tuple[Cell, ...]:
        idx = self.schema.index_of(name)
        return tuple(row[idx] for row in self.rows)


def column_missing_fraction(table: RawTable, variable: str) -> float:
    """Fraction of MISSING cells in one column; 0.0 for an empty table."""
    col = table.column(variable)  # KeyError for unknown names
    if not col:
        return 0.0
    return sum(1 for cell in col if cell is MISSING) / len(col)


@dataclass(frozen=True)
class ColumnMeta:
    """Provenance of one design-matrix column."""

    source: str
    level: Optional[str] = None  # one-hot level; None for numeric columns
    mean: Optional[float] = None  # standardization parameters when applied
    std: Optional[float] = None

    @property
    def name(self) -> str:
        return self.source if self.level is None else f"{self.source}={self.level}"


@dataclass(frozen=True, eq=False)
class EncodedMatrix:
    """Dense numeric design matrix with column provenance.

    ``values`` is an (n_rows, n_cols) float64 array, read-only after
    construction; ``column_meta`` has one entry per column.
    """

    values: np.ndarray
    column_meta: tuple[ColumnMeta, ...]

    def __init__(self, values: np.ndarray, column_meta: Sequence[ColumnMeta]):
        arr = np.ascontiguousarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"values must be 2-D, got shape {arr.shape}")
        meta = tuple(column_meta)
        if arr.shape[1] != len(meta):
            raise ValueError(f"{arr.shape[1]} columns but {len(meta)} metadata entries")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "column_meta", meta)

    @classmethod
    def from_array(cls, values: np.ndarray, names: Optional[Sequence[str]] = None) -> "EncodedMatrix":
        """Wrap a plain array, inventing numeric column metadata."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if names is None:
            names = [f"c{i}" for i in range(arr.shape[1])]
        return cls(arr, [ColumnMeta(source=n) for n in names])

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.column_meta)

    def select_columns(self, indices: Sequence[int]) -> "EncodedMatrix":
        idx = list(indices)
        return EncodedMatrix(self.values[:, idx], [self.column_meta[i] for i in idx])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EncodedMatrix):
            return NotImplemented
        return self.column_meta == other.column_meta and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class LabelVector:
    """Binary labels over {+1, -1} plus what the positive class means."""

    labels: np.ndarray
    positive_meaning: str = "positive"

    def __init__(self, labels: Sequence[int], positive_meaning: str = "positive"):
        arr = np.asarray(labels, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("labels must be 1-D")
        bad = np.setdiff1d(np.unique(arr), [-1, 1])
        if bad.size:
            raise ValueError(f"labels must be +1 or -1, found {bad.tolist()}")
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)
        object.__setattr__(self, "positive_meaning", positive_meaning)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_positive(self) -> int:
        return int(np.sum(self.labels == 1))

    @property
    def n_negative(self) -> int:
        return int(np.sum(self.labels == -1))

    @property
    def both_classes_present(self) -> bool:
        return self.n_positive > 0 and self.n_negative > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelVector):
            return NotImplemented
        return self.positive_meaning == other.positive_meaning and np.array_equal(
            self.labels, other.labels
        )
