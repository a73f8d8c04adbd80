"""Schema (de)serialization to the YAML config format.

Round-trip contract: ``schema_from_yaml(schema_to_yaml(s)) == s``.
Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import yaml

from .data_model import (
    AnemiaRule,
    Categorical,
    DEFAULT_MISSING_CODES,
    Kind,
    LabelRule,
    MalariaRule,
    Numeric,
    Role,
    Schema,
    VariableSpec,
)


class SchemaFormatError(ValueError):
    """Schema document does not follow the documented key set."""


_VARIABLE_KEYS = {"name", "kind", "levels", "role", "missing_codes"}
_RULE_KEYS = {"kind", "from_prebinned"}
_TOP_KEYS = {"label_rule", "variables"}


def schema_to_dict(schema: Schema) -> dict:
    rule: dict = {}
    if isinstance(schema.label_rule, AnemiaRule):
        rule = {"kind": "anemia", "from_prebinned": schema.label_rule.from_prebinned}
    elif isinstance(schema.label_rule, MalariaRule):
        rule = {"kind": "malaria"}
    else:
        raise SchemaFormatError(f"unknown label rule: {schema.label_rule!r}")
    variables = []
    for v in schema.variables:
        entry: dict = {"name": v.name}
        if isinstance(v.kind, Categorical):
            entry["kind"] = "categorical"
            entry["levels"] = list(v.kind.levels)
        else:
            entry["kind"] = "numeric"
        entry["role"] = v.role.value
        entry["missing_codes"] = sorted(v.missing_codes)
        variables.append(entry)
    return {"label_rule": rule, "variables": variables}


def schema_from_dict(doc: dict) -> Schema:
    if not isinstance(doc, dict):
        raise SchemaFormatError(f"schema document must be a mapping, got {type(doc).__name__}")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SchemaFormatError(f"unknown schema keys: {sorted(unknown)}")
    if "label_rule" not in doc or "variables" not in doc:
        raise SchemaFormatError("schema document needs 'label_rule' and 'variables'")
    rule = _rule_from_dict(doc["label_rule"])
    entries = doc["variables"]
    if not isinstance(entries, list):
        raise SchemaFormatError("'variables' must be a list")
    return Schema([_variable_from_dict(e) for e in entries], rule)


def _rule_from_dict(raw: dict) -> LabelRule:
    if not isinstance(raw, dict):
        raise SchemaFormatError("'label_rule' must be a mapping")
    unknown = set(raw) - _RULE_KEYS
    if unknown:
        raise SchemaFormatError(f"unknown label_rule keys: {sorted(unknown)}")
    kind = raw.get("kind")
    if kind == "anemia":
        return AnemiaRule(from_prebinned=bool(raw.get("from_prebinned", False)))
    if kind == "malaria":
        if "from_prebinned" in raw:
            raise SchemaFormatError("'from_prebinned' only applies to anemia rules")
        return MalariaRule()
    raise SchemaFormatError(f"label_rule kind must be 'anemia' or 'malaria', got {kind!r}")


def _variable_from_dict(entry: dict) -> VariableSpec:
    if not isinstance(entry, dict):
        raise SchemaFormatError("variable entries must be mappings")
    unknown = set(entry) - _VARIABLE_KEYS
    if unknown:
        raise SchemaFormatError(f"unknown variable keys: {sorted(unknown)}")
    name = entry.get("name")
    if not isinstance(name, str) or not name:
        raise SchemaFormatError(f"variable needs a non-empty name, got {name!r}")
    kind = _kind_from_entry(name, entry)
    role = entry.get("role", Role.FEATURE.value)
    try:
        role = Role(role)
    except ValueError:
        raise SchemaFormatError(f"variable {name!r}: unknown role {role!r}") from None
    codes = entry.get("missing_codes", sorted(DEFAULT_MISSING_CODES))
    if not isinstance(codes, list) or not all(isinstance(c, str) for c in codes):
        raise SchemaFormatError(f"variable {name!r}: missing_codes must be a list of strings")
    return VariableSpec(name=name, kind=kind, role=role, missing_codes=codes)


def _kind_from_entry(name: str, entry: dict) -> Kind:
    kind = entry.get("kind")
    if kind == "numeric":
        if "levels" in entry:
            raise SchemaFormatError(f"variable {name!r}: numeric variables take no levels")
        return Numeric()
    if kind == "categorical":
        levels = entry.get("levels")
        if not isinstance(levels, list) or not all(isinstance(l, str) for l in levels):
            raise SchemaFormatError(f"variable {name!r}: categorical needs a list of levels")
        return Categorical(levels)
    raise SchemaFormatError(f"variable {name!r}: kind must be 'numeric' or 'categorical'")


def schema_to_yaml(schema: Schema) -> str:
    return yaml.safe_dump(schema_to_dict(schema), sort_keys=False, allow_unicode=True)


def schema_from_yaml(text: str) -> Schema:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise SchemaFormatError(f"invalid YAML: {e}") from e
    return schema_from_dict(doc)


def load_schema(path: Union[str, Path]) -> Schema:
    return schema_from_yaml(Path(path).read_text(encoding="utf-8"))


def save_schema(schema: Schema, path: Union[str, Path]) -> None:
    Path(path).write_text(schema_to_yaml(schema), encoding="utf-8")
