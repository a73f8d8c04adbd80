"""Config-driven pipeline: ingest -> label -> select -> train -> report.

Configs are YAML with nested sections; unknown keys are rejected and all
violations are reported together. Seeds are mandatory so every run is
reproducible; reports are byte-identical for identical (data, config,
seed).

Stage order is fixed: sparse/unimportant column drop, incomplete-row
drop, encoding, labeling, correlation filter, RFE, PCA, train/evaluate.
Errors surface with the failing stage name so the CLI can map them to
exit codes.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import yaml

from .data_model import (
    ColumnMeta,
    EncodedMatrix,
    LabelVector,
    Role,
    Schema,
    schema_validate,
)
from .evaluation import (
    ALGORITHM_ORDER,
    AlgoParams,
    AlgorithmResult,
    BayesParams,
    ComparisonReport,
    ConfusionMatrix,
    ForestParams,
    Holdout,
    KFold,
    KnnParams,
    SplitSpec,
    SvmParams,
    compare_algorithms,
)
from .feature_select import (
    RankerConfig,
    choose_components,
    correlation_filter,
    pca_fit,
    pca_transform,
    rfe_rank,
    rfe_select,
)
from .fixtures import TASK_SCHEMAS
from .ingest import (
    LedgerStage,
    ReductionLedger,
    STAGE_CORRELATION,
    STAGE_PCA,
    STAGE_RFE,
    STAGE_SPARSE,
    drop_ignored_columns,
    drop_incomplete_rows,
    drop_sparse_columns,
    encode,
    parse_csv,
    standardize_columns,
)
from .labeling import labels_from_table
from .schema_io import load_schema
from .synthgen import SignalSpec, generate

TASKS = ("anemia", "anemia_prebinned", "malaria", "custom")


class ConfigError(ValueError):
    """One or more config violations; ``errors`` lists them all."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class PipelineStageError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it for exit-code mapping."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


@dataclass(frozen=True)
class SynthSpec:
    rows: int
    informative: tuple[str, ...] = ()
    weights: tuple[float, ...] = ()
    noise_rate: float = 0.0
    missing_rate: float = 0.0


@dataclass(frozen=True)
class RfeSpec:
    keep: Optional[int] = None
    remove: Optional[int] = None
    svm_c: float = 1.0
    svm_tol: float = 1e-2
    max_passes: Optional[int] = None
    sample_rows: Optional[int] = None

    def resolve_keep(self, n_cols: int) -> int:
        if self.keep is not None:
            return self.keep
        assert self.remove is not None
        return n_cols - self.remove


@dataclass(frozen=True)
class PcaSpec:
    variance_target: Optional[float] = 0.95
    components: Optional[int] = None
    remove: Optional[int] = None
    standardize: bool = True


@dataclass(frozen=True)
class PipelineConfig:
    task: str
    seed: int
    input_csv: Optional[str] = None
    synth: Optional[SynthSpec] = None
    schema_path: Optional[str] = None
    output: Optional[str] = None
    sparse_threshold: float = 0.5
    standardize: bool = True
    correlation_threshold: float = 0.75
    rfe: RfeSpec = field(default_factory=RfeSpec)
    pca: PcaSpec = field(default_factory=PcaSpec)
    algorithms: dict = field(default_factory=dict)
    split: SplitSpec = field(default_factory=Holdout)


DEFAULT_ALGORITHMS: dict[str, AlgoParams] = {
    "knn": KnnParams(),
    "random_forest": ForestParams(),
    "svm": SvmParams(),
    "naive_bayes": BayesParams(),
}

_TOP_KEYS = {
    "task",
    "seed",
    "input",
    "synth",
    "schema",
    "output",
    "ingest",
    "select",
    "algorithms",
    "split",
}
_INGEST_KEYS = {"sparse_threshold", "standardize"}
_SELECT_KEYS = {"correlation_threshold", "rfe", "pca"}
_RFE_KEYS = {"keep", "remove", "svm_c", "svm_tol", "max_passes", "sample_rows"}
_PCA_KEYS = {"variance_target", "components", "remove", "standardize"}
_SYNTH_KEYS = {"rows", "informative", "weights", "noise_rate", "missing_rate"}
_SPLIT_KEYS = {"kind", "test_fraction", "folds"}
_ALGO_KEYS = {
    "knn": {"k", "metric"},
    "random_forest": {"n_trees", "max_depth", "features_per_split", "min_split", "bootstrap"},
    "svm": {"C", "tol", "max_passes"},
    "naive_bayes": {"laplace_alpha", "variance_floor"},
}


def parse_config(text: str) -> PipelineConfig:
    """Parse and validate a YAML pipeline config.

    Defaults are applied for optional keys (correlation threshold 0.75,
    SVM C=10, 75/25 stratified holdout...); ``task``, ``seed``, a data
    source, and the RFE keep/remove count are mandatory.

    Raises:
        ConfigError: Syntax errors (with line numbers), unknown keys,
            missing required keys, or out-of-range values — all collected.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ConfigError([f"config syntax error{where}: {e}"]) from e
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError([f"config must be a mapping, got {type(doc).__name__}"])

    errors: list[str] = []
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        errors.append(f"unknown config keys: {sorted(unknown)}")

    task = doc.get("task")
    if task is None:
        errors.append("task is required (anemia | anemia_prebinned | malaria | custom)")
    elif task not in TASKS:
        errors.append(f"task must be one of {TASKS}, got {task!r}")

    seed = doc.get("seed")
    if seed is None:
        errors.append("seed is required (runs must be reproducible)")
    elif not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        errors.append(f"seed must be a non-negative integer, got {seed!r}")

    input_csv = _optional_str(doc, "input", errors)
    schema_path = _optional_str(doc, "schema", errors)
    output = _optional_str(doc, "output", errors)
    synth = _parse_synth(doc.get("synth"), errors)
    if input_csv is not None and synth is not None:
        errors.append("give either 'input' or 'synth', not both")
    if input_csv is None and synth is None:
        errors.append("a data source is required: 'input' (CSV path) or 'synth'")
    if task == "custom" and schema_path is None:
        errors.append("custom tasks need an explicit 'schema' path")

    ingest_sec = _section(doc.get("ingest"), "ingest", _INGEST_KEYS, errors)
    sparse_threshold = ingest_sec.get("sparse_threshold", 0.5)
    if not _is_number(sparse_threshold) or not 0.0 <= sparse_threshold <= 1.0:
        errors.append(f"ingest.sparse_threshold must be in [0, 1], got {sparse_threshold!r}")
    standardize = ingest_sec.get("standardize", True)
    if not isinstance(standardize, bool):
        errors.append(f"ingest.standardize must be a boolean, got {standardize!r}")

    select_sec = _section(doc.get("select"), "select", _SELECT_KEYS, errors)
    correlation_threshold = select_sec.get("correlation_threshold", 0.75)
    if not _is_number(correlation_threshold) or not 0.0 < correlation_threshold <= 1.0:
        errors.append(
            f"select.correlation_threshold must be in (0, 1], got {correlation_threshold!r}"
        )
    rfe = _parse_rfe(select_sec.get("rfe"), errors)
    pca = _parse_pca(select_sec.get("pca"), errors)

    algorithms = _parse_algorithms(doc.get("algorithms"), errors)
    split = _parse_split(doc.get("split"), errors)

    if errors:
        raise ConfigError(errors)
    return PipelineConfig(
        task=task,
        seed=seed,
        input_csv=input_csv,
        synth=synth,
        schema_path=schema_path,
        output=output,
        sparse_threshold=float(sparse_threshold),
        standardize=standardize,
        correlation_threshold=float(correlation_threshold),
        rfe=rfe,
        pca=pca,
        algorithms=algorithms,
        split=split,
    )


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _optional_str(doc: dict, key: str, errors: list[str]) -> Optional[str]:
    value = doc.get(key)
    if value is None:
        return None
    if not isinstance(value, str) or not value:
        errors.append(f"{key} must be a non-empty string, got {value!r}")
        return None
    return value


def _section(raw, name: str, allowed: set[str], errors: list[str]) -> dict:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        errors.append(f"{name} must be a mapping, got {type(raw).__name__}")
        return {}
    unknown = set(raw) - allowed
    if unknown:
        errors.append(f"unknown {name} keys: {sorted(unknown)}")
    return raw


def _parse_synth(raw, errors: list[str]) -> Optional[SynthSpec]:
    if raw is None:
        return None
    sec = _section(raw, "synth", _SYNTH_KEYS, errors)
    rows = sec.get("rows")
    if not isinstance(rows, int) or isinstance(rows, bool) or rows < 1:
        errors.append(f"synth.rows must be a positive integer, got {rows!r}")
        rows = 1
    informative = sec.get("informative", [])
    weights = sec.get("weights", [])
    if not isinstance(informative, list) or not all(isinstance(s, str) for s in informative):
        errors.append("synth.informative must be a list of column names")
        informative = []
    if not isinstance(weights, list) or not all(_is_number(w) for w in weights):
        errors.append("synth.weights must be a list of numbers")
        weights = []
    if len(informative) != len(weights):
        errors.append("synth.informative and synth.weights must have equal length")
    noise_rate = sec.get("noise_rate", 0.0)
    missing_rate = sec.get("missing_rate", 0.0)
    for key, rate in (("noise_rate", noise_rate), ("missing_rate", missing_rate)):
        if not _is_number(rate) or not 0.0 <= rate < 1.0:
            errors.append(f"synth.{key} must be in [0, 1), got {rate!r}")
    return SynthSpec(
        rows=rows,
        informative=tuple(informative),
        weights=tuple(float(w) for w in weights if _is_number(w)),
        noise_rate=float(noise_rate) if _is_number(noise_rate) else 0.0,
        missing_rate=float(missing_rate) if _is_number(missing_rate) else 0.0,
    )


def _parse_rfe(raw, errors: list[str]) -> RfeSpec:
    sec = _section(raw, "select.rfe", _RFE_KEYS, errors)
    keep = sec.get("keep")
    remove = sec.get("remove")
    if keep is None and remove is None:
        errors.append("select.rfe needs 'keep' or 'remove' (the count is not inferable)")
    if keep is not None and remove is not None:
        errors.append("select.rfe takes 'keep' or 'remove', not both")
    for key, value in (("keep", keep), ("remove", remove)):
        if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 0):
            errors.append(f"select.rfe.{key} must be a non-negative integer, got {value!r}")
    svm_c = sec.get("svm_c", 1.0)
    if not _is_number(svm_c) or svm_c <= 0:
        errors.append(f"select.rfe.svm_c must be positive, got {svm_c!r}")
    svm_tol = sec.get("svm_tol", 1e-2)
    if not _is_number(svm_tol) or svm_tol <= 0:
        errors.append(f"select.rfe.svm_tol must be positive, got {svm_tol!r}")
    max_passes = sec.get("max_passes")
    if max_passes is not None and (not isinstance(max_passes, int) or max_passes < 1):
        errors.append(f"select.rfe.max_passes must be a positive integer, got {max_passes!r}")
    sample_rows = sec.get("sample_rows")
    if sample_rows is not None and (not isinstance(sample_rows, int) or sample_rows < 2):
        errors.append(f"select.rfe.sample_rows must be an integer >= 2, got {sample_rows!r}")
    return RfeSpec(
        keep=keep if isinstance(keep, int) and not isinstance(keep, bool) else None,
        remove=remove if isinstance(remove, int) and not isinstance(remove, bool) else None,
        svm_c=float(svm_c) if _is_number(svm_c) else 1.0,
        svm_tol=float(svm_tol) if _is_number(svm_tol) else 1e-2,
        max_passes=max_passes,
        sample_rows=sample_rows,
    )


def _parse_pca(raw, errors: list[str]) -> PcaSpec:
    sec = _section(raw, "select.pca", _PCA_KEYS, errors)
    modes = [k for k in ("variance_target", "components", "remove") if k in sec]
    if len(modes) > 1:
        errors.append(f"select.pca takes one of variance_target/components/remove, got {modes}")
    variance_target: Optional[float] = 0.95
    components = remove = None
    if "components" in sec:
        components = sec["components"]
        variance_target = None
        if not isinstance(components, int) or isinstance(components, bool) or components < 1:
            errors.append(f"select.pca.components must be a positive integer, got {components!r}")
    elif "remove" in sec:
        remove = sec["remove"]
        variance_target = None
        if not isinstance(remove, int) or isinstance(remove, bool) or remove < 0:
            errors.append(f"select.pca.remove must be a non-negative integer, got {remove!r}")
    elif "variance_target" in sec:
        variance_target = sec["variance_target"]
        if not _is_number(variance_target) or not 0.0 < variance_target <= 1.0:
            errors.append(
                f"select.pca.variance_target must be in (0, 1], got {variance_target!r}"
            )
    pca_standardize = sec.get("standardize", True)
    if not isinstance(pca_standardize, bool):
        errors.append(f"select.pca.standardize must be a boolean, got {pca_standardize!r}")
    return PcaSpec(
        variance_target=float(variance_target) if _is_number(variance_target) else variance_target,
        components=components if isinstance(components, int) else None,
        remove=remove if isinstance(remove, int) else None,
        standardize=bool(pca_standardize) if isinstance(pca_standardize, bool) else True,
    )


def _parse_algorithms(raw, errors: list[str]) -> dict[str, AlgoParams]:
    if raw is None:
        return dict(DEFAULT_ALGORITHMS)
    if not isinstance(raw, dict):
        errors.append(f"algorithms must be a mapping, got {type(raw).__name__}")
        return dict(DEFAULT_ALGORITHMS)
    if not raw:
        errors.append("algorithms selects zero algorithms; list at least one")
        return {}
    unknown = set(raw) - set(ALGORITHM_ORDER)
    if unknown:
        errors.append(f"unknown algorithms: {sorted(unknown)} (known: {list(ALGORITHM_ORDER)})")
    out: dict[str, AlgoParams] = {}
    for name in ALGORITHM_ORDER:
        if name not in raw:
            continue
        sec = _section(raw[name] or {}, f"algorithms.{name}", _ALGO_KEYS[name], errors)
        try:
            out[name] = _algo_params(name, sec)
        except (TypeError, ValueError) as e:
            errors.append(f"algorithms.{name}: {e}")
    return out


def _algo_params(name: str, sec: dict) -> AlgoParams:
    if name == "knn":
        params = KnnParams(k=sec.get("k", 5), metric=sec.get("metric", "euclidean"))
        if not isinstance(params.k, int) or params.k < 1:
            raise ValueError(f"k must be a positive integer, got {params.k!r}")
        if params.metric not in ("euclidean", "manhattan"):
            raise ValueError(f"metric must be euclidean or manhattan, got {params.metric!r}")
        return params
    if name == "random_forest":
        return ForestParams(
            n_trees=sec.get("n_trees", 100),
            max_depth=sec.get("max_depth"),
            features_per_split=sec.get("features_per_split"),
            min_split=sec.get("min_split", 2),
            bootstrap=sec.get("bootstrap", True),
        )
    if name == "svm":
        c = sec.get("C", 10.0)
        if not _is_number(c) or c <= 0:
            raise ValueError(f"C must be positive, got {c!r}")
        tol = sec.get("tol", 1e-3)
        if not _is_number(tol) or tol <= 0:
            raise ValueError(f"tol must be positive, got {tol!r}")
        return SvmParams(C=float(c), tol=float(tol), max_passes=sec.get("max_passes"))
    if name == "naive_bayes":
        alpha = sec.get("laplace_alpha", 1.0)
        if not _is_number(alpha) or alpha <= 0:
            raise ValueError(f"laplace_alpha must be positive, got {alpha!r}")
        floor = sec.get("variance_floor", 1e-9)
        if not _is_number(floor) or floor <= 0:
            raise ValueError(f"variance_floor must be positive, got {floor!r}")
        return BayesParams(laplace_alpha=float(alpha), variance_floor=float(floor))
    raise ValueError(f"unknown algorithm {name!r}")


def _parse_split(raw, errors: list[str]) -> SplitSpec:
    sec = _section(raw, "split", _SPLIT_KEYS, errors)
    kind = sec.get("kind", "holdout")
    if kind == "holdout":
        if "folds" in sec:
            errors.append("split.folds only applies to kind: kfold")
        fraction = sec.get("test_fraction", 0.25)
        if not _is_number(fraction) or not 0.0 < fraction < 1.0:
            errors.append(f"split.test_fraction must be in (0, 1), got {fraction!r}")
            fraction = 0.25
        return Holdout(test_fraction=float(fraction))
    if kind == "kfold":
        if "test_fraction" in sec:
            errors.append("split.test_fraction only applies to kind: holdout")
        folds = sec.get("folds", 5)
        if not isinstance(folds, int) or isinstance(folds, bool) or folds < 2:
            errors.append(f"split.folds must be an integer >= 2, got {folds!r}")
            folds = 5
        return KFold(folds=folds)
    errors.append(f"split.kind must be holdout or kfold, got {kind!r}")
    return Holdout()


def emit_config(config: PipelineConfig) -> str:
    """Render a config back to YAML; parse(emit(parse(t))) == parse(t)."""
    doc: dict = {"task": config.task, "seed": config.seed}
    if config.input_csv is not None:
        doc["input"] = config.input_csv
    if config.synth is not None:
        doc["synth"] = {
            "rows": config.synth.rows,
            "informative": list(config.synth.informative),
            "weights": list(config.synth.weights),
            "noise_rate": config.synth.noise_rate,
            "missing_rate": config.synth.missing_rate,
        }
    if config.schema_path is not None:
        doc["schema"] = config.schema_path
    if config.output is not None:
        doc["output"] = config.output
    doc["ingest"] = {
        "sparse_threshold": config.sparse_threshold,
        "standardize": config.standardize,
    }
    rfe: dict = {}
    if config.rfe.keep is not None:
        rfe["keep"] = config.rfe.keep
    if config.rfe.remove is not None:
        rfe["remove"] = config.rfe.remove
    rfe.update({"svm_c": config.rfe.svm_c, "svm_tol": config.rfe.svm_tol})
    if config.rfe.max_passes is not None:
        rfe["max_passes"] = config.rfe.max_passes
    if config.rfe.sample_rows is not None:
        rfe["sample_rows"] = config.rfe.sample_rows
    pca: dict = {}
    if config.pca.components is not None:
        pca["components"] = config.pca.components
    elif config.pca.remove is not None:
        pca["remove"] = config.pca.remove
    else:
        pca["variance_target"] = config.pca.variance_target
    pca["standardize"] = config.pca.standardize
    doc["select"] = {
        "correlation_threshold": config.correlation_threshold,
        "rfe": rfe,
        "pca": pca,
    }
    algos: dict = {}
    for name in ALGORITHM_ORDER:
        if name in config.algorithms:
            algos[name] = asdict(config.algorithms[name])
    doc["algorithms"] = algos
    if isinstance(config.split, Holdout):
        doc["split"] = {"kind": "holdout", "test_fraction": config.split.test_fraction}
    else:
        doc["split"] = {"kind": "kfold", "folds": config.split.folds}
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)


def _resolve_schema(config: PipelineConfig) -> Schema:
    if config.schema_path is not None:
        return load_schema(config.schema_path)
    return TASK_SCHEMAS[config.task]()


def _expanded_names(schema: Schema, names: list[str]) -> list[str]:
    """Design-matrix column names of the given variables, in schema order."""
    gone = set(names)
    out: list[str] = []
    for v in schema.variables:
        if v.name in gone:
            out.extend(v.encoded_names())
    return out


def run_pipeline(config: PipelineConfig) -> ComparisonReport:
    """Execute every stage and assemble the comparison report.

    Raises:
        PipelineStageError: Tagged with the failing stage (ingest,
            labeling, selection, evaluation).
    """
    # --- ingest -----------------------------------------------------------
    try:
        schema = _resolve_schema(config)
        violations = schema_validate(schema)
        if violations:
            raise ValueError("invalid schema: " + "; ".join(violations))
        if config.synth is not None:
            spec = SignalSpec(
                informative=config.synth.informative,
                weights=config.synth.weights,
                noise_rate=config.synth.noise_rate,
                missing_rate=config.synth.missing_rate,
            )
            table, _ = generate(schema, config.synth.rows, spec, config.seed)
        else:
            assert config.input_csv is not None
            text = Path(config.input_csv).read_text(encoding="utf-8")
            table = parse_csv(text, schema)

        label_name = schema.label_source().name
        initial_count = sum(
            v.encoded_width() for v in schema.variables if v.role is not Role.LABEL_SOURCE
        )
        table, ignored = drop_ignored_columns(table)
        table, sparse = drop_sparse_columns(
            table, config.sparse_threshold, protect=[label_name]
        )
        stage1 = LedgerStage(STAGE_SPARSE, _expanded_names(schema, ignored + sparse))
        table = drop_incomplete_rows(table)
        if table.n_rows == 0:
            raise ValueError("no complete rows survive pruning")
        matrix = encode(table, standardize_numeric=config.standardize)
        if matrix.n_cols == 0:
            raise ValueError("no feature columns survive pruning")
    except (ValueError, OSError) as e:
        raise PipelineStageError("ingest", str(e)) from e

    # --- labeling ---------------------------------------------------------
    try:
        labels = labels_from_table(table)
    except ValueError as e:
        raise PipelineStageError("labeling", str(e)) from e

    # --- selection --------------------------------------------------------
    try:
        kept, removed = correlation_filter(matrix, config.correlation_threshold)
        names = matrix.column_names()
        corr_stage = LedgerStage(STAGE_CORRELATION, [names[j] for j in removed])
        matrix = matrix.select_columns(kept)

        n_keep = config.rfe.resolve_keep(matrix.n_cols)
        if not 1 <= n_keep <= matrix.n_cols:
            raise ValueError(
                f"rfe keeps {n_keep} of {matrix.n_cols} columns; adjust keep/remove"
            )
        if n_keep < matrix.n_cols:
            ranking = _rank_features(matrix, labels, config)
            kept_rfe = rfe_select(ranking, n_keep)
        else:
            kept_rfe = list(range(matrix.n_cols))
        names = matrix.column_names()
        rfe_stage = LedgerStage(
            STAGE_RFE, [names[j] for j in range(matrix.n_cols) if j not in set(kept_rfe)]
        )
        matrix = matrix.select_columns(kept_rfe)

        pca_input = (
            standardize_columns(matrix.values) if config.pca.standardize else matrix.values
        )
        model = pca_fit(EncodedMatrix(pca_input, matrix.column_meta))
        k = _resolve_components(config.pca, model)
        projected = pca_transform(model, pca_input, k)
        pca_stage = LedgerStage(
            STAGE_PCA, [f"PC{i + 1}" for i in range(k, model.n_components)]
        )
        final = EncodedMatrix(
            projected, [ColumnMeta(source=f"PC{i + 1}") for i in range(k)]
        )
        ledger = ReductionLedger(
            initial_count=initial_count,
            stages=(stage1, corr_stage, rfe_stage, pca_stage),
            final_count=k,
        )
        if not ledger.conserved():  # arithmetic guard; holds by construction
            raise ValueError("reduction ledger does not conserve column counts")
        selected = matrix.column_names()
    except (ValueError, RuntimeError) as e:
        if isinstance(e, PipelineStageError):
            raise
        raise PipelineStageError("selection", str(e)) from e

    # --- evaluation -------------------------------------------------------
    try:
        return compare_algorithms(
            final,
            labels,
            config.algorithms,
            config.split,
            config.seed,
            task=config.task,
            ledger=ledger,
            selected_features=selected,
        )
    except (ValueError, RuntimeError) as e:
        raise PipelineStageError("evaluation", str(e)) from e


def _rank_features(matrix: EncodedMatrix, labels, config: PipelineConfig):
    ranker = RankerConfig(
        C=config.rfe.svm_c, tol=config.rfe.svm_tol, max_passes=config.rfe.max_passes
    )
    sample = config.rfe.sample_rows
    if sample is not None and sample < matrix.n_rows:
        # ranking-only subsample; the selected columns still carry all rows
        rng = np.random.default_rng([config.seed, 1])
        rows = np.sort(rng.choice(matrix.n_rows, size=sample, replace=False))
        sub = EncodedMatrix(matrix.values[rows], matrix.column_meta)
        return rfe_rank(
            sub, LabelVector(labels.labels[rows], labels.positive_meaning), ranker
        )
    return rfe_rank(matrix, labels, ranker)


def _resolve_components(spec: PcaSpec, model) -> int:
    if spec.components is not None:
        if spec.components > model.n_components:
            raise ValueError(
                f"pca components {spec.components} exceed available {model.n_components}"
            )
        return spec.components
    if spec.remove is not None:
        k = model.n_components - spec.remove
        if k < 1:
            raise ValueError(
                f"pca remove {spec.remove} leaves no components of {model.n_components}"
            )
        return k
    return choose_components(model, spec.variance_target)


# --- report serialization --------------------------------------------------


def report_to_dict(report: ComparisonReport) -> dict:
    """JSON-shaped report with keys in documented fixed order."""
    ledger = None
    if report.ledger is not None:
        ledger = {
            "initial_count": report.ledger.initial_count,
            "stages": [
                {"stage": s.stage, "removed": list(s.removed), "count": s.count}
                for s in report.ledger.stages
            ],
            "final_count": report.ledger.final_count,
            "conserved": report.ledger.conserved(),
        }
    algorithms = []
    for entry in report.entries:
        algorithms.append(
            {
                "name": entry.name,
                "params": entry.params,
                "accuracy": entry.accuracy,
                "accuracy_pct": (
                    f"{entry.accuracy * 100:.2f}%" if entry.accuracy is not None else None
                ),
                "confusion": (
                    {
                        "tp": entry.confusion.tp,
                        "fp": entry.confusion.fp,
                        "tn": entry.confusion.tn,
                        "fn": entry.confusion.fn,
                    }
                    if entry.confusion is not None
                    else None
                ),
                "seed": entry.seed,
                "error": entry.error,
            }
        )
    return {
        "task": report.task,
        "seed": report.seed,
        "split": report.split,
        "ledger": ledger,
        "selected_features": list(report.selected_features),
        "algorithms": algorithms,
    }


def report_from_dict(doc: dict) -> ComparisonReport:
    ledger = None
    if doc.get("ledger") is not None:
        raw = doc["ledger"]
        ledger = ReductionLedger(
            initial_count=raw["initial_count"],
            stages=tuple(LedgerStage(s["stage"], s["removed"]) for s in raw["stages"]),
            final_count=raw["final_count"],
        )
    entries = []
    for e in doc["algorithms"]:
        conf = e.get("confusion")
        entries.append(
            AlgorithmResult(
                name=e["name"],
                params=e["params"],
                accuracy=e["accuracy"],
                confusion=ConfusionMatrix(**conf) if conf is not None else None,
                seed=e["seed"],
                error=e.get("error"),
            )
        )
    return ComparisonReport(
        task=doc["task"],
        entries=tuple(entries),
        split=doc["split"],
        seed=doc["seed"],
        ledger=ledger,
        selected_features=tuple(doc.get("selected_features", ())),
    )


def emit_report(report: ComparisonReport, path: Union[str, Path]) -> None:
    """Write the JSON report; identical reports produce identical bytes."""
    Path(path).write_text(
        json.dumps(report_to_dict(report), indent=2) + "\n", encoding="utf-8"
    )


def read_report(path: Union[str, Path]) -> ComparisonReport:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
