"""Deterministic generator of survey-like tables with planted signal.

Stands in for the registration-gated survey extract in tests and
benchmarks. All randomness comes from one PCG64 stream seeded with the
caller's integer seed, consumed in a documented order so fixtures can be
regenerated from (algorithm, seed) alone:

1. one draw of n values per non-label variable, in schema order
   (numeric: standard normal; categorical: uniform level index);
2. n label-noise uniforms;
3. draws for the label-source representation (task dependent);
4. n missing-mask uniforms per non-label variable, in schema order.

The latent score is the weighted sum of the informative numeric columns;
the label is its sign (+1 at zero), flipped with probability
``noise_rate``. Labels are written into the label-source column, so
re-deriving labels from the emitted table reproduces them exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .data_model import (
    AnemiaRule,
    Categorical,
    LabelVector,
    MalariaRule,
    Numeric,
    RawTable,
    Role,
    Schema,
    VariableSpec,
)
from .labeling import MALARIA_NEGATIVE, MALARIA_POSITIVE


@dataclass(frozen=True)
class SignalSpec:
    """Which columns carry signal, how strongly, and what gets corrupted."""

    informative: tuple[str, ...]
    weights: tuple[float, ...]
    noise_rate: float = 0.0
    missing_rate: float = 0.0
    missing_overrides: Mapping[str, float] = field(default_factory=dict)

    def __init__(
        self,
        informative: Sequence[str],
        weights: Sequence[float],
        noise_rate: float = 0.0,
        missing_rate: float = 0.0,
        missing_overrides: Mapping[str, float] | None = None,
    ):
        object.__setattr__(self, "informative", tuple(informative))
        object.__setattr__(self, "weights", tuple(float(w) for w in weights))
        object.__setattr__(self, "noise_rate", float(noise_rate))
        object.__setattr__(self, "missing_rate", float(missing_rate))
        object.__setattr__(self, "missing_overrides", dict(missing_overrides or {}))


def _validate_spec(schema: Schema, spec: SignalSpec) -> None:
    if len(spec.informative) != len(spec.weights):
        raise ValueError(
            f"{len(spec.informative)} informative columns but {len(spec.weights)} weights"
        )
    if not 0.0 <= spec.noise_rate < 1.0:
        raise ValueError(f"noise_rate must be in [0, 1), got {spec.noise_rate}")
    rates = [spec.missing_rate, *spec.missing_overrides.values()]
    if any(not 0.0 <= r < 1.0 for r in rates):
        raise ValueError("missing rates must be in [0, 1)")
    feature_names = {v.name for v in schema.feature_variables()}
    for name in spec.informative:
        if name not in feature_names:
            raise ValueError(f"informative column {name!r} is not a schema feature")
        if not isinstance(schema.variable(name).kind, Numeric):
            raise ValueError(f"informative column {name!r} must be numeric")
    for name in spec.missing_overrides:
        schema.variable(name)  # KeyError for unknown names
    for v in schema.variables:
        if v.role is Role.LABEL_SOURCE:
            continue
        rate = spec.missing_overrides.get(v.name, spec.missing_rate)
        if rate > 0.0 and not v.missing_codes:
            raise ValueError(f"variable {v.name!r} can be masked but declares no missing codes")


def generate(schema: Schema, n: int, spec: SignalSpec, seed: int) -> tuple[RawTable, LabelVector]:
    """Draw a fully reproducible table plus its planted labels.

    Raises:
        ValueError: n < 1 or an invalid signal spec.
    """
    if n < 1:
        raise ValueError(f"need at least one row, got {n}")
    _validate_spec(schema, spec)
    rng = np.random.default_rng(seed)

    numeric_values: dict[str, np.ndarray] = {}
    cells: dict[str, list[str]] = {}
    label_var = schema.label_source()
    for v in schema.variables:
        if v.role is Role.LABEL_SOURCE:
            continue
        if isinstance(v.kind, Numeric):
            values = rng.standard_normal(n)
            numeric_values[v.name] = values
            cells[v.name] = [repr(float(x)) for x in values]
        else:
            idx = rng.integers(0, len(v.kind.levels), size=n)
            cells[v.name] = [v.kind.levels[i] for i in idx]

    score = np.zeros(n)
    for name, w in zip(spec.informative, spec.weights):
        score += w * numeric_values[name]
    labels = np.where(score >= 0.0, 1, -1)
    flips = rng.random(n) < spec.noise_rate
    labels = np.where(flips, -labels, labels)

    cells[label_var.name] = _label_cells(schema.label_rule, label_var, labels, rng, n)

    for v in schema.variables:
        if v.role is Role.LABEL_SOURCE:
            continue
        draws = rng.random(n)
        rate = spec.missing_overrides.get(v.name, spec.missing_rate)
        if rate > 0.0:
            column = cells[v.name]
            for i in np.flatnonzero(draws < rate):
                column[i] = None  # type: ignore[call-overload]

    names = schema.names()
    rows = [tuple(cells[name][r] for name in names) for r in range(n)]
    meaning = "malaria-positive" if isinstance(schema.label_rule, MalariaRule) else "anemic"
    return RawTable(schema, rows), LabelVector(labels, positive_meaning=meaning)


def _label_cells(rule, label_var: VariableSpec, labels: np.ndarray, rng, n: int) -> list[str]:
    if isinstance(rule, MalariaRule):
        return [MALARIA_POSITIVE if y > 0 else MALARIA_NEGATIVE for y in labels]
    if isinstance(rule, AnemiaRule):
        if rule.from_prebinned:
            pos_pick = rng.integers(0, 3, size=n)  # Severe / Moderate / Mild
            positive_levels = ("Severe", "Moderate", "Mild")
            return [
                positive_levels[pos_pick[i]] if labels[i] > 0 else "Not anaemic"
                for i in range(n)
            ]
        # hemoglobin tenths: anemic below 11.0 g/dl, non-anemic at or above
        pos_tenths = rng.integers(70, 110, size=n)
        neg_tenths = rng.integers(110, 151, size=n)
        out = []
        for i in range(n):
            t = int(pos_tenths[i] if labels[i] > 0 else neg_tenths[i])
            out.append(f"{t // 10}.{t % 10}")
        return out
    raise TypeError(f"unknown label rule: {rule!r}")


def gaussian_schema(
    n_features: int,
    label_name: str = "outcome",
    prefix: str = "x",
) -> Schema:
    """All-numeric feature schema with a Positive/Negative outcome label.

    Feature names are zero-padded (``x01`` ... ) so schema order matches
    lexicographic order.
    """
    if n_features < 1:
        raise ValueError("need at least one feature")
    width = len(str(n_features))
    variables = [
        VariableSpec(name=f"{prefix}{i + 1:0{width}d}", kind=Numeric())
        for i in range(n_features)
    ]
    variables.append(
        VariableSpec(
            name=label_name,
            kind=Categorical([MALARIA_POSITIVE, MALARIA_NEGATIVE]),
            role=Role.LABEL_SOURCE,
        )
    )
    return Schema(variables, MalariaRule())
