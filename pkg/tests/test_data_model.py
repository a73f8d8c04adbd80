import numpy as np
import pytest

from survclass.data_model import (
    AnemiaRule,
    Categorical,
    ColumnMeta,
    EncodedMatrix,
    LabelVector,
    MISSING,
    Numeric,
    RawTable,
    Role,
    Schema,
    VariableSpec,
    column_missing_fraction,
    schema_validate,
)
from survclass.fixtures import anemia_schema, anemia_schema_prebinned, malaria_schema


def _schema(variables):
    return Schema(variables, AnemiaRule())


def test_duplicate_variable_names_flagged():
    schema = _schema(
        [
            VariableSpec("region", Categorical(("a", "b"))),
            VariableSpec("region", Numeric()),
            VariableSpec("hb", Numeric(), role=Role.LABEL_SOURCE),
        ]
    )
    violations = schema_validate(schema)
    assert len(violations) == 1
    assert "duplicate" in violations[0] and "region" in violations[0]


def test_missing_label_source_flagged():
    schema = _schema([VariableSpec("age", Numeric())])
    violations = schema_validate(schema)
    assert violations == ["schema has no label-source variable"]


def test_multiple_label_sources_flagged():
    schema = _schema(
        [
            VariableSpec("a", Numeric(), role=Role.LABEL_SOURCE),
            VariableSpec("b", Numeric(), role=Role.LABEL_SOURCE),
        ]
    )
    assert any("multiple label-source" in v for v in schema_validate(schema))


def test_bad_level_lists_flagged():
    schema = _schema(
        [
            VariableSpec("empty", Categorical(())),
            VariableSpec("dupes", Categorical(("x", "x"))),
            VariableSpec("hb", Numeric(), role=Role.LABEL_SOURCE),
        ]
    )
    violations = schema_validate(schema)
    assert any("empty" in v and "empty level list" in v for v in violations)
    assert any("dupes" in v and "duplicate levels" in v for v in violations)


@pytest.mark.parametrize(
    "build", [anemia_schema, anemia_schema_prebinned, malaria_schema]
)
def test_survey_fixture_schemas_are_valid(build):
    assert schema_validate(build()) == []


def test_fixture_schemas_express_survey_representations():
    schema = anemia_schema()
    residence = schema.variable("Type place of residence")
    assert residence.kind == Categorical(("Urban", "Rural"))
    assert schema.variable("Child height").kind == Numeric()
    region = schema.variable("Region")
    assert len(region.kind.levels) == 13 and "Kedougou" in region.kind.levels
    # "Don't Know" is a category level, never a missing code
    vit = schema.variable("Vitamin A in last 6 months")
    assert "Don't Know" in vit.kind.levels
    assert "Don't Know" not in vit.missing_codes
    assert schema.label_source().name == "Hemoglobin level"
    assert malaria_schema().label_source().name == "Result of malaria test"


class TestColumnMissingFraction:
    def test_fully_observed(self, mini_anemia_table):
        assert column_missing_fraction(mini_anemia_table, "age") == 0.0

    def test_fully_missing(self, mini_anemia_schema):
        rows = [("1", MISSING, "Male", "North", "7.0") for _ in range(10)]
        table = RawTable(mini_anemia_schema, rows)
        assert column_missing_fraction(table, "age") == 1.0

    def test_three_of_eight(self, mini_anemia_schema):
        rows = [
            ("1", MISSING if i < 3 else "1.0", "Male", "North", "7.0") for i in range(8)
        ]
        table = RawTable(mini_anemia_schema, rows)
        assert column_missing_fraction(table, "age") == 0.375

    def test_unknown_variable_raises(self, mini_anemia_table):
        with pytest.raises(KeyError):
            column_missing_fraction(mini_anemia_table, "nope")


class TestRawTable:
    def test_row_width_checked(self, mini_anemia_schema):
        with pytest.raises(ValueError, match="cells"):
            RawTable(mini_anemia_schema, [("1", "2.0", "Male", "North")])

    def test_undeclared_level_rejected(self, mini_anemia_schema):
        with pytest.raises(ValueError, match="declared level"):
            RawTable(mini_anemia_schema, [("1", "2.0", "Elsewhere", "North", "7.0")])

    def test_missing_cells_allowed(self, mini_anemia_schema):
        table = RawTable(mini_anemia_schema, [("1", MISSING, MISSING, "North", "7.0")])
        assert table.n_rows == 1


class TestEncodedMatrix:
    def test_shape_and_meta_agree(self):
        with pytest.raises(ValueError, match="metadata"):
            EncodedMatrix(np.zeros((2, 3)), [ColumnMeta(source="a")])

    def test_values_are_read_only(self):
        m = EncodedMatrix.from_array(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            m.values[0, 0] = 1.0

    def test_select_columns_keeps_provenance(self):
        m = EncodedMatrix.from_array(np.arange(6.0).reshape(2, 3), names=["a", "b", "c"])
        sub = m.select_columns([2, 0])
        assert sub.column_names() == ("c", "a")
        assert np.array_equal(sub.values, [[2.0, 0.0], [5.0, 3.0]])

    def test_equality(self):
        a = EncodedMatrix.from_array(np.eye(2))
        b = EncodedMatrix.from_array(np.eye(2))
        assert a == b
        assert a != EncodedMatrix.from_array(np.zeros((2, 2)))


class TestLabelVector:
    def test_rejects_other_values(self):
        with pytest.raises(ValueError, match=r"\+1 or -1"):
            LabelVector([1, 0, -1])

    def test_counts(self):
        y = LabelVector([1, 1, -1], positive_meaning="anemic")
        assert (y.n_positive, y.n_negative) == (2, 1)
        assert y.both_classes_present
        assert not LabelVector([1, 1]).both_classes_present

    def test_equality_includes_meaning(self):
        assert LabelVector([1, -1]) == LabelVector([1, -1])
        assert LabelVector([1, -1], "anemic") != LabelVector([1, -1], "malaria-positive")


def test_column_meta_names():
    assert ColumnMeta(source="age").name == "age"
    assert ColumnMeta(source="sex", level="Male").name == "sex=Male"


def test_encoded_width_and_names():
    v = VariableSpec("sex", Categorical(("Male", "Female")))
    assert v.encoded_width() == 2
    assert v.encoded_names() == ("sex=Male", "sex=Female")
    assert VariableSpec("age", Numeric()).encoded_names() == ("age",)
