import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from survclass.data_model import (
    AnemiaRule,
    Categorical,
    MalariaRule,
    Numeric,
    RawTable,
    Role,
    Schema,
    VariableSpec,
)


@pytest.fixture
def mini_anemia_schema() -> Schema:
    """Small custom schema with an ignored column and a hemoglobin label."""
    return Schema(
        [
            VariableSpec("case id", Numeric(), role=Role.IGNORED),
            VariableSpec("age", Numeric()),
            VariableSpec("sex", Categorical(("Male", "Female"))),
            VariableSpec("region", Categorical(("North", "South"))),
            VariableSpec("hb", Numeric(), role=Role.LABEL_SOURCE),
        ],
        AnemiaRule(),
    )


@pytest.fixture
def mini_malaria_schema() -> Schema:
    return Schema(
        [
            VariableSpec("age", Numeric()),
            VariableSpec("fever", Categorical(("No", "Yes"))),
            VariableSpec("test", Categorical(("Positive", "Negative")), role=Role.LABEL_SOURCE),
        ],
        MalariaRule(),
    )


@pytest.fixture
def mini_anemia_table(mini_anemia_schema) -> RawTable:
    rows = [
        ("1", "2.0", "Male", "North", "6.9"),
        ("2", "3.5", "Female", "South", "10.9"),
        ("3", "1.0", "Male", "South", "11.0"),
        ("4", "4.0", "Female", "North", "12.4"),
    ]
    return RawTable(mini_anemia_schema, rows)
