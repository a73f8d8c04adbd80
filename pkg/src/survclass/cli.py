"""Command-line entry point.

Subcommands:
    run       execute the configured pipeline and write the JSON report
    synth     generate a synthetic survey CSV (optionally its schema)
    validate  check a schema or config file without running anything
    fixtures  write the bundled task schemas and reproduction configs

Exit codes partition by failing stage:
    0  success (for `run`: a report was written)
    2  config or usage error
    3  ingest stage failed
    4  labeling stage failed
    5  feature-selection stage failed
    6  training/evaluation stage failed
    7  report output could not be written

``SURVCLASS_OUT_DIR`` sets the directory used when a run's output path is
not given by the config or ``--out``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .data_model import schema_validate
from .evaluation import ALGORITHM_ORDER
from .fixtures import TASK_SCHEMAS, reproduction_config_yaml
from .ingest import emit_csv
from .pipeline import (
    ConfigError,
    PipelineStageError,
    emit_report,
    parse_config,
    run_pipeline,
)
from .schema_io import SchemaFormatError, load_schema, save_schema
from .synthgen import SignalSpec, generate, gaussian_schema

EXIT_OK = 0
EXIT_CONFIG = 2
STAGE_EXIT_CODES = {
    "ingest": 3,
    "labeling": 4,
    "selection": 5,
    "evaluation": 6,
    "output": 7,
}

OUT_DIR_ENV = "SURVCLASS_OUT_DIR"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="survclass", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the pipeline from a config file")
    run.add_argument("--config", required=True, help="YAML pipeline config")
    run.add_argument("--task", choices=("anemia", "anemia_prebinned", "malaria", "custom"))
    run.add_argument("--out", help="report path (overrides config output)")
    run.add_argument("--seed", type=int, help="seed override")
    run.add_argument(
        "--algorithm",
        action="append",
        choices=ALGORITHM_ORDER,
        help="restrict to this algorithm (repeatable)",
    )

    synth = sub.add_parser("synth", help="generate a synthetic survey CSV")
    synth.add_argument("--schema", help="schema YAML to generate against")
    synth.add_argument("--features", type=int, help="or: all-numeric schema of this width")
    synth.add_argument("--rows", type=int, required=True)
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--noise-rate", type=float, default=0.0)
    synth.add_argument("--missing-rate", type=float, default=0.0)
    synth.add_argument(
        "--informative",
        action="append",
        default=[],
        metavar="NAME=WEIGHT",
        help="planted signal column (repeatable)",
    )
    synth.add_argument("--out", required=True, help="CSV output path")
    synth.add_argument("--emit-schema", help="also write the schema YAML here")

    validate = sub.add_parser("validate", help="check a schema or config file")
    group = validate.add_mutually_exclusive_group(required=True)
    group.add_argument("--schema", help="schema YAML to validate")
    group.add_argument("--config", help="pipeline config to validate")

    fixtures = sub.add_parser("fixtures", help="write bundled schemas and configs")
    fixtures.add_argument("--out-dir", required=True)
    return parser


def _default_report_path() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / "report.json"


def _cmd_run(args) -> int:
    try:
        config = parse_config(Path(args.config).read_text(encoding="utf-8"))
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as e:
        for msg in e.errors:
            print(f"config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG

    if args.task:
        config = replace(config, task=args.task)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.algorithm:
        wanted = set(args.algorithm)
        filtered = {k: v for k, v in config.algorithms.items() if k in wanted}
        if not filtered:
            print("config error: --algorithm filter matches nothing", file=sys.stderr)
            return EXIT_CONFIG
        config = replace(config, algorithms=filtered)

    out = Path(args.out) if args.out else (
        Path(config.output) if config.output else _default_report_path()
    )
    try:
        report = run_pipeline(config)
    except PipelineStageError as e:
        print(f"error: {e}", file=sys.stderr)
        return STAGE_EXIT_CODES.get(e.stage, EXIT_CONFIG)
    try:
        emit_report(report, out)
    except OSError as e:
        print(f"error: cannot write report to {out}: {e}", file=sys.stderr)
        return STAGE_EXIT_CODES["output"]
    print(f"report written to {out}")
    return EXIT_OK


def _parse_informative(pairs: list[str]) -> tuple[list[str], list[float]]:
    names: list[str] = []
    weights: list[float] = []
    for pair in pairs:
        name, sep, weight = pair.partition("=")
        if not sep or not name:
            raise ValueError(f"--informative takes NAME=WEIGHT, got {pair!r}")
        names.append(name)
        weights.append(float(weight))
    return names, weights


def _cmd_synth(args) -> int:
    try:
        if (args.schema is None) == (args.features is None):
            raise ValueError("give exactly one of --schema or --features")
        schema = (
            load_schema(args.schema) if args.schema else gaussian_schema(args.features)
        )
        names, weights = _parse_informative(args.informative)
        spec = SignalSpec(
            informative=names,
            weights=weights,
            noise_rate=args.noise_rate,
            missing_rate=args.missing_rate,
        )
        table, _ = generate(schema, args.rows, spec, args.seed)
        Path(args.out).write_text(emit_csv(table), encoding="utf-8")
        if args.emit_schema:
            save_schema(schema, args.emit_schema)
    except (ValueError, SchemaFormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wrote {args.rows} rows to {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        if args.schema:
            violations = schema_validate(load_schema(args.schema))
            if violations:
                for v in violations:
                    print(f"schema violation: {v}", file=sys.stderr)
                return EXIT_CONFIG
            print("schema ok")
        else:
            parse_config(Path(args.config).read_text(encoding="utf-8"))
            print("config ok")
    except (ConfigError, SchemaFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, build in TASK_SCHEMAS.items():
            save_schema(build(), out_dir / f"{name}_schema.yaml")
        for task in ("anemia", "malaria"):
            (out_dir / f"{task}_reproduction.yaml").write_text(
                reproduction_config_yaml(task), encoding="utf-8"
            )
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return STAGE_EXIT_CODES["output"]
    print(f"fixtures written to {out_dir}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "synth": _cmd_synth,
        "validate": _cmd_validate,
        "fixtures": _cmd_fixtures,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
