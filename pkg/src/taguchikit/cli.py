"""Command-line front end: design, analyze, predict, validate.

File-based workflow: a declarative YAML project config plus a results CSV
in, run sheets / reports / predictions out. Identical inputs produce
byte-identical outputs, and files are written via write-then-rename so an
error never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from taguchikit import reporting
from taguchikit.analysis import (
    AnalysisReport,
    Objective,
    ResponseSpec,
    analyze,
    predict_optimum,
    read_results_csv,
    validate,
)
from taguchikit.arrays import get_array, select_array
from taguchikit.design import Design, Factor, bind, export_run_sheet
from taguchikit.errors import ConfigError, TaguchiKitError

__all__ = ["ProjectConfig", "load_config", "build_design", "main", "run"]


@dataclass(frozen=True)
class ProjectConfig:
    """Declarative experiment definition: array, factors, responses."""

    array: str
    factors: tuple[Factor, ...]
    responses: tuple[ResponseSpec, ...]
    precision: dict[str, int] = field(default_factory=dict)


def load_config(path: str | Path) -> ProjectConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return _parse_config(data, str(path))


def _parse_config(data: dict, where: str) -> ProjectConfig:
    def fail(field_path: str, message: str) -> ConfigError:
        return ConfigError(f"{where}: {field_path}: {message}")

    array = data.get("array")
    if not isinstance(array, str) or not array:
        raise fail("array", "expected an array name or 'auto'")

    raw_factors = data.get("factors")
    if not isinstance(raw_factors, list) or not raw_factors:
        raise fail("factors", "expected a non-empty list")
    factors = []
    for i, item in enumerate(raw_factors):
        loc = f"factors[{i}]"
        if not isinstance(item, dict):
            raise fail(loc, "expected a mapping with name/unit/levels")
        name = item.get("name")
        if not isinstance(name, str) or not name:
            raise fail(f"{loc}.name", "expected a non-empty string")
        unit = item.get("unit", "")
        if not isinstance(unit, str):
            raise fail(f"{loc}.unit", "expected a string")
        levels = item.get("levels")
        if not isinstance(levels, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in levels
        ):
            raise fail(f"{loc}.levels", "expected a list of numbers")
        try:
            factors.append(Factor(name=name, unit=unit, levels=tuple(levels)))
        except TaguchiKitError as exc:
            raise fail(loc, str(exc)) from None

    raw_responses = data.get("responses")
    if not isinstance(raw_responses, list) or not raw_responses:
        raise fail("responses", "expected a non-empty list")
    responses = []
    for i, item in enumerate(raw_responses):
        loc = f"responses[{i}]"
        if not isinstance(item, dict):
            raise fail(loc, "expected a mapping with name/unit/objective")
        name = item.get("name")
        if not isinstance(name, str) or not name:
            raise fail(f"{loc}.name", "expected a non-empty string")
        unit = item.get("unit", "")
        if not isinstance(unit, str):
            raise fail(f"{loc}.unit", "expected a string")
        try:
            objective = Objective.from_string(item.get("objective", ""))
        except ValueError as exc:
            raise fail(f"{loc}.objective", str(exc)) from None
        target = item.get("target")
        if target is not None and not isinstance(target, (int, float)):
            raise fail(f"{loc}.target", "expected a number")
        try:
            responses.append(
                ResponseSpec(
                    name=name,
                    unit=unit,
                    objective=objective,
                    target=float(target) if target is not None else None,
                )
            )
        except ValueError as exc:
            raise fail(loc, str(exc)) from None
    names = [r.name for r in responses]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise fail("responses", f"duplicate response name(s): {', '.join(dupes)}")

    precision = data.get("precision", {})
    if not isinstance(precision, dict) or not all(
        isinstance(k, str) and isinstance(v, int) and not isinstance(v, bool)
        for k, v in precision.items()
    ):
        raise fail("precision", "expected a mapping of quantity name to decimals")
    unknown = sorted(set(precision) - set(reporting.REPORT_PRECISION))
    if unknown:
        raise fail(
            "precision",
            f"unknown quantity name(s): {', '.join(unknown)}; "
            f"expected: {', '.join(sorted(reporting.REPORT_PRECISION))}",
        )

    return ProjectConfig(
        array=array,
        factors=tuple(factors),
        responses=tuple(responses),
        precision=dict(precision),
    )


def build_design(config: ProjectConfig, array_override: str | None = None) -> tuple[Design, str | None]:
    """Bind the configured factors; returns the design and an auto-selection note."""
    name = array_override or config.array
    note = None
    if name == "auto":
        level_counts = {len(f.levels) for f in config.factors}
        if len(level_counts) != 1:
            raise ConfigError(
                "auto array selection needs all factors at the same level count; got "
                + ", ".join(str(c) for c in sorted(level_counts))
            )
        levels = level_counts.pop()
        array = select_array(len(config.factors), levels)
        note = f"array: {array.name} (auto-selected for {len(config.factors)} factors x {levels} levels)"
    else:
        array = get_array(name)
    return bind(array, config.factors), note


def _write_output(path: str | None, text: str) -> None:
    """Print to stdout, or atomically replace the target file."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _analyze_from_files(config_path: str, results_path: str, array_override: str | None) -> tuple[ProjectConfig, AnalysisReport]:
    config = load_config(config_path)
    design, _ = build_design(config, array_override)
    try:
        text = Path(results_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read results {results_path}: {exc}") from None
    results = read_results_csv(text, expected_responses=[r.name for r in config.responses])
    return config, analyze(design, results, config.responses)


def _cmd_design(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    design, note = build_design(config, args.array)
    sheet = export_run_sheet(design)
    if note:
        sheet = f"# {note}\n{sheet}"
    _write_output(args.out, sheet)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config, report = _analyze_from_files(args.config, args.results, args.array)
    if args.plot_data:
        _write_output(args.plot_data, reporting.main_effects_csv(report))
    if args.format == "json":
        _write_output(args.out, reporting.report_to_json(report))
    else:
        _write_output(args.out, reporting.report_to_text(report, config.precision))
    return 0


def _parse_level_override(design: Design, text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != len(design.factors):
        raise ConfigError(
            f"--levels needs {len(design.factors)} comma-separated values, got {len(parts)}"
        )
    indices = []
    for factor, part in zip(design.factors, parts):
        try:
            value = float(part)
        except ValueError:
            raise ConfigError(f"--levels: {part!r} is not a number") from None
        indices.append(factor.level_index(value))
    return indices


def _cmd_predict(args: argparse.Namespace) -> int:
    config, report = _analyze_from_files(args.config, args.results, args.array)
    levels = None
    if args.levels:
        levels = _parse_level_override(report.design, args.levels)
    prediction = predict_optimum(report, args.response, levels)
    if args.format == "text":
        _write_output(args.out, reporting.prediction_to_text(prediction, config.precision))
    else:
        _write_output(args.out, reporting.prediction_to_json(prediction))
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.prediction)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read prediction {path}: {exc}") from None
    try:
        prediction = reporting.prediction_from_json_dict(json.loads(text))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    confirmed = validate(prediction, args.confirmed)
    if args.format == "json":
        _write_output(args.out, reporting.prediction_to_json(confirmed))
    else:
        _write_output(args.out, reporting.prediction_to_text(confirmed))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taguchikit",
        description="Orthogonal-array experiment design, S/N analysis, and optimum prediction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="emit the run sheet for a project config")
    p_design.add_argument("config", help="project config (YAML)")
    p_design.add_argument("--array", help="override the configured array (name or 'auto')")
    p_design.add_argument("--out", help="write to file instead of stdout")
    p_design.set_defaults(handler=_cmd_design)

    p_analyze = sub.add_parser("analyze", help="screen measured results")
    p_analyze.add_argument("config", help="project config (YAML)")
    p_analyze.add_argument("results", help="results CSV (run,<response>,...)")
    p_analyze.add_argument("--array", help="override the configured array")
    p_analyze.add_argument("--format", choices=("json", "text"), default="text")
    p_analyze.add_argument("--out", help="write to file instead of stdout")
    p_analyze.add_argument("--plot-data", help="also write main-effects plot data CSV here")
    p_analyze.set_defaults(handler=_cmd_analyze)

    p_predict = sub.add_parser("predict", help="additive prediction at chosen levels")
    p_predict.add_argument("config", help="project config (YAML)")
    p_predict.add_argument("results", help="results CSV")
    p_predict.add_argument("--array", help="override the configured array")
    p_predict.add_argument("--response", required=True, help="response to predict")
    p_predict.add_argument(
        "--levels",
        help="comma-separated physical values, one per factor (default: per-response optimum)",
    )
    p_predict.add_argument("--format", choices=("json", "text"), default="json")
    p_predict.add_argument("--out", help="write to file instead of stdout")
    p_predict.set_defaults(handler=_cmd_predict)

    p_validate = sub.add_parser("validate", help="compare a prediction with a confirmation run")
    p_validate.add_argument("prediction", help="prediction JSON from 'predict'")
    p_validate.add_argument("--confirmed", type=float, required=True, help="measured confirmation value")
    p_validate.add_argument("--format", choices=("json", "text"), default="text")
    p_validate.add_argument("--out", help="write to file instead of stdout")
    p_validate.set_defaults(handler=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except TaguchiKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    """Console entry point."""
    raise SystemExit(main())
