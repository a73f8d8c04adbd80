"""Binary classification toolkit for schema-driven survey extracts.

Pipeline: CSV ingest against a declared variable schema, sparse-column
and incomplete-row pruning, one-hot/standardized encoding, WHO-threshold
or test-result label construction, correlation/RFE/PCA feature
reduction, four from-scratch classifiers (KNN, linear soft-margin SVM,
random forest, naive Bayes) and a seeded comparison harness.
"""

from .data_model import (
    AnemiaRule,
    Categorical,
    ColumnMeta,
    EncodedMatrix,
    LabelVector,
    MISSING,
    MalariaRule,
    Numeric,
    RawTable,
    Role,
    Schema,
    VariableSpec,
    column_missing_fraction,
    schema_validate,
)

__version__ = "0.1.0"

__all__ = [
    "AnemiaRule",
    "Categorical",
    "ColumnMeta",
    "EncodedMatrix",
    "LabelVector",
    "MISSING",
    "MalariaRule",
    "Numeric",
    "RawTable",
    "Role",
    "Schema",
    "VariableSpec",
    "column_missing_fraction",
    "schema_validate",
    "__version__",
]
