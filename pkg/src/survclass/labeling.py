"""Binary label construction.

Anemia labels derive from WHO hemoglobin thresholds; grouping the three
anemic severities against the non-anemic class gives the +1/-1 target.
Malaria labels map the recorded blood-test result directly.

Hemoglobin is carried as an integer count of tenths of g/dl so the
threshold bins tile exactly (10.9 g/dl -> 109); parsing rejects more
than one fractional digit to avoid float boundary misclassification.
"""

from __future__ import annotations

import re
from enum import IntEnum

from .data_model import (
    AnemiaRule,
    Categorical,
    LabelVector,
    MalariaRule,
    MISSING,
    Numeric,
    RawTable,
)

# Threshold breakpoints in tenths of g/dl.
SEVERE_BELOW = 70
MODERATE_BELOW = 100
MILD_BELOW = 110
HB_TENTHS_MAX = 250  # physiological guard

POSITIVE = 1
NEGATIVE = -1


class AnemiaLevel(IntEnum):
    """Anemia severity, ordered by hemoglobin level."""

    SEVERE = 0
    MODERATE = 1
    MILD = 2
    NOT_ANEMIC = 3


def anemia_level(hb_tenths: int) -> AnemiaLevel:
    """Classify a hemoglobin measurement (tenths of g/dl) into a severity.

    Raises:
        ValueError: If ``hb_tenths`` is outside [0, 250].
    """
    if not 0 <= hb_tenths <= HB_TENTHS_MAX:
        raise ValueError(f"hemoglobin {hb_tenths} tenths g/dl outside [0, {HB_TENTHS_MAX}]")
    if hb_tenths < SEVERE_BELOW:
        return AnemiaLevel.SEVERE
    if hb_tenths < MODERATE_BELOW:
        return AnemiaLevel.MODERATE
    if hb_tenths < MILD_BELOW:
        return AnemiaLevel.MILD
    return AnemiaLevel.NOT_ANEMIC


def binarize_anemia(level: AnemiaLevel) -> int:
    """Severe, moderate and mild are the positive class; not anemic is negative."""
    return NEGATIVE if level is AnemiaLevel.NOT_ANEMIC else POSITIVE


MALARIA_POSITIVE = "Positive"
MALARIA_NEGATIVE = "Negative"


def malaria_label(test_result: str) -> int:
    """Map a recorded malaria test result to +1/-1."""
    if test_result == MALARIA_POSITIVE:
        return POSITIVE
    if test_result == MALARIA_NEGATIVE:
        return NEGATIVE
    raise ValueError(f"malaria test result must be Positive or Negative, got {test_result!r}")


_HB_PATTERN = re.compile(r"^(\d+)(?:\.(\d))?$")


def hb_tenths_from_text(text: str) -> int:
    """Parse a decimal hemoglobin string (g/dl) into tenths, exactly.

    Accepts at most one fractional digit, e.g. ``"10.9" -> 109`` and
    ``"11" -> 110``; anything else raises ValueError.
    """
    m = _HB_PATTERN.match(text.strip())
    if m is None:
        raise ValueError(f"not a hemoglobin value with <=1 fractional digit: {text!r}")
    whole, frac = m.groups()
    return int(whole) * 10 + (int(frac) if frac is not None else 0)


# Level names used by the pre-binned anemia label source (survey encoding).
PREBINNED_POSITIVE_LEVELS = frozenset({"Severe", "Moderate", "Mild"})
PREBINNED_NEGATIVE_LEVEL = "Not anaemic"


def _prebinned_label(cell: str) -> int:
    if cell in PREBINNED_POSITIVE_LEVELS:
        return POSITIVE
    if cell == PREBINNED_NEGATIVE_LEVEL:
        return NEGATIVE
    raise ValueError(f"unknown anemia status level: {cell!r}")


def labels_from_table(table: RawTable) -> LabelVector:
    """Build the label vector from a complete table's label-source column.

    Dispatches on the schema's label rule: anemia labels come from raw
    hemoglobin (or pre-binned status levels), malaria labels from the
    recorded test result. Every label-source cell must be observed.
    """
    rule = table.schema.label_rule
    source = table.schema.label_source()
    cells = table.column(source.name)
    labels: list[int] = []
    for r, cell in enumerate(cells):
        if cell is MISSING:
            raise ValueError(f"row {r}: label source {source.name!r} is missing")
        labels.append(_label_one(rule, source.kind, cell))
    meaning = "malaria-positive" if isinstance(rule, MalariaRule) else "anemic"
    return LabelVector(labels, positive_meaning=meaning)


def _label_one(rule, kind, cell: str) -> int:
    if isinstance(rule, MalariaRule):
        return malaria_label(cell)
    if isinstance(rule, AnemiaRule):
        if rule.from_prebinned:
            if not isinstance(kind, Categorical):
                raise ValueError("pre-binned anemia labels need a categorical label source")
            return _prebinned_label(cell)
        if not isinstance(kind, Numeric):
            raise ValueError("hemoglobin anemia labels need a numeric label source")
        return binarize_anemia(anemia_level(hb_tenths_from_text(cell)))
    raise TypeError(f"unknown label rule: {rule!r}")
