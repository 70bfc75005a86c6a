"""Signal-to-noise ratios, main-effects screening, and additive optimum prediction.

All operations are pure functions over immutable inputs. Screening
(deltas, ranks, optimal levels) works on raw-response level means; S/N
level means are computed alongside for reference but do not drive the
ranking.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, replace
from statistics import fmean
from typing import Iterable, Mapping, Sequence

from taguchikit.design import Design
from taguchikit.errors import (
    ConfirmationError,
    IncompleteResultsError,
    InvalidLevelError,
    ResultsFormatError,
    SingularityError,
    UnknownResponseError,
)

__all__ = [
    "Objective",
    "ResponseSpec",
    "RunResult",
    "ResponseAnalysis",
    "AnalysisReport",
    "Prediction",
    "snr",
    "read_results_csv",
    "level_means",
    "rank_factors",
    "optimal_levels",
    "analyze",
    "predict_optimum",
    "error_percent",
    "validate",
    "weighted_optimal_levels",
]


class Objective(enum.Enum):
    """Direction in which a response is optimized."""

    SMALLER_IS_BETTER = "smaller-the-better"
    LARGER_IS_BETTER = "larger-the-better"
    NOMINAL_IS_BEST = "nominal-the-best"

    @classmethod
    def from_string(cls, text: str) -> "Objective":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(
            f"unknown objective {text!r}; expected one of: "
            + ", ".join(m.value for m in cls)
        )


@dataclass(frozen=True)
class ResponseSpec:
    """What is measured per run and which direction is better."""

    name: str
    unit: str
    objective: Objective
    target: float | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("response name must be non-empty")
        if self.objective is Objective.NOMINAL_IS_BEST:
            if self.target is None or not math.isfinite(self.target):
                raise ValueError(f"response {self.name!r}: nominal-the-best needs a finite target")
        elif self.target is not None:
            raise ValueError(f"response {self.name!r}: target only applies to nominal-the-best")


@dataclass(frozen=True)
class RunResult:
    """Measured replicate values for one run, keyed by response name."""

    run_number: int
    values: dict[str, tuple[float, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "values",
            {name: tuple(float(v) for v in ys) for name, ys in self.values.items()},
        )
        for name, ys in self.values.items():
            if not ys:
                raise ResultsFormatError(
                    f"run {self.run_number}: response {name!r} has no replicate values"
                )


def snr(
    values: Sequence[float],
    objective: Objective = Objective.SMALLER_IS_BETTER,
    *,
    target: float | None = None,
) -> float:
    """Signal-to-noise ratio in dB for one run's replicate values.

    smaller-the-better: ``-10 log10(sum(y_i^2) / n)``. The companion
    conventions follow the same mean-square-deviation shape:
    larger-the-better uses ``1/y_i^2`` and nominal-the-best uses
    ``(y_i - target)^2``. Higher is always better.

    Raises :class:`SingularityError` when the log argument degenerates to
    zero (all-zero values, a zero value under larger-the-better, or every
    value exactly on target).
    """
    ys = [float(v) for v in values]
    if not ys:
        raise SingularityError("S/N ratio needs at least one value")
    if objective is Objective.SMALLER_IS_BETTER:
        msd = fmean(y * y for y in ys)
        if msd == 0.0:
            raise SingularityError("smaller-the-better S/N undefined for all-zero values")
    elif objective is Objective.LARGER_IS_BETTER:
        if any(y == 0.0 for y in ys):
            raise SingularityError("larger-the-better S/N undefined when any value is zero")
        msd = fmean(1.0 / (y * y) for y in ys)
    elif objective is Objective.NOMINAL_IS_BEST:
        if target is None:
            raise SingularityError("nominal-the-best S/N needs a target")
        msd = fmean((y - target) ** 2 for y in ys)
        if msd == 0.0:
            raise SingularityError("nominal-the-best S/N undefined when every value equals the target")
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unhandled objective {objective!r}")
    return -10.0 * math.log10(msd)


def read_results_csv(
    text: str | Iterable[str],
    expected_responses: Sequence[str] | None = None,
) -> tuple[RunResult, ...]:
    """Parse a results table: header ``run,<response>,...``, one row per run.

    Repeated rows for the same run number are treated as replicates and
    appended in file order. Bad cells are reported with their row number
    and column name.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    rows = [line for line in lines if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ResultsFormatError("results table is empty")
    reader = csv.reader(rows)
    header = [h.strip() for h in next(reader)]
    if not header or header[0] != "run":
        raise ResultsFormatError("results table must start with a 'run' column")
    responses = header[1:]
    if not responses:
        raise ResultsFormatError("results table has no response columns")
    if expected_responses is not None:
        missing = [r for r in expected_responses if r not in responses]
        if missing:
            raise ResultsFormatError(
                f"results table lacks response column(s): {', '.join(missing)}"
            )
    replicates: dict[int, dict[str, list[float]]] = {}
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise ResultsFormatError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            number = int(row[0])
        except ValueError:
            raise ResultsFormatError(f"row {lineno}, column 'run': not an integer: {row[0]!r}") from None
        bucket = replicates.setdefault(number, {name: [] for name in responses})
        for name, cell in zip(responses, row[1:]):
            try:
                bucket[name].append(float(cell))
            except ValueError:
                raise ResultsFormatError(
                    f"row {lineno}, column {name!r}: not a number: {cell!r}"
                ) from None
    return tuple(
        RunResult(number, {name: tuple(ys) for name, ys in replicates[number].items()})
        for number in sorted(replicates)
    )


def _merge_pair(old: RunResult, new: RunResult) -> RunResult:
    """Concatenate replicates response-by-response, keeping keys from both."""
    combined = {name: ys for name, ys in old.values.items()}
    for name, ys in new.values.items():
        combined[name] = combined.get(name, ()) + ys
    return RunResult(old.run_number, combined)


def _run_means(design: Design, results: Sequence[RunResult], response: str) -> list[float]:
    """Per-run replicate means in design row order; refuses incomplete data."""
    by_number: dict[int, RunResult] = {}
    for result in results:
        if result.run_number in by_number:
            by_number[result.run_number] = _merge_pair(by_number[result.run_number], result)
        else:
            by_number[result.run_number] = result
    design_numbers = [run.number for run in design.runs]
    unknown = sorted(set(by_number) - set(design_numbers))
    if unknown:
        raise IncompleteResultsError(
            f"results reference run number(s) not in the design: {', '.join(map(str, unknown))}"
        )
    missing = [
        n for n in design_numbers
        if n not in by_number or not by_number[n].values.get(response)
    ]
    if missing:
        raise IncompleteResultsError(
            f"missing {response!r} results for run(s): {', '.join(map(str, missing))}"
        )
    return [fmean(by_number[n].values[response]) for n in design_numbers]


def _level_matrix(design: Design, per_run: Sequence[float]) -> tuple[tuple[float, ...], ...]:
    """Mean of a per-run statistic at every (factor, level) cell."""
    matrix = []
    for j, factor in enumerate(design.factors):
        row = []
        for level in range(len(factor.levels)):
            positions = design.runs_at(j, level)
            if not positions:
                raise IncompleteResultsError(
                    f"level {level + 1} of factor {factor.name!r} is never exercised"
                )
            row.append(fmean(per_run[i] for i in positions))
        matrix.append(tuple(row))
    return tuple(matrix)


def level_means(
    design: Design, results: Sequence[RunResult], response: str
) -> tuple[tuple[float, ...], ...]:
    """Main-effect means: cell (f, l) averages the run means where factor f is at level l.

    With a balanced array every cell averages ``runs / levels`` runs, which
    is what makes these means comparable across levels.
    """
    return _level_matrix(design, _run_means(design, results, response))


def rank_factors(
    level_means_matrix: Sequence[Sequence[float]],
) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Deltas (max - min of each factor's level means) and 1..k influence ranks.

    Rank 1 is the largest delta; ties go to the earlier column.
    """
    deltas = tuple(max(row) - min(row) for row in level_means_matrix)
    order = sorted(range(len(deltas)), key=lambda f: (-deltas[f], f))
    ranks = [0] * len(deltas)
    for position, f in enumerate(order):
        ranks[f] = position + 1
    return deltas, tuple(ranks)


def optimal_levels(
    level_means_matrix: Sequence[Sequence[float]],
    objective: Objective,
    *,
    target: float | None = None,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Best level index per factor, plus which factors were decided by a tie.

    smaller-the-better takes the argmin of each factor's level means,
    larger-the-better the argmax, nominal-the-best the level closest to
    the target. Ties break toward the lower level index and the factor is
    reported in the second tuple.
    """
    if objective is Objective.SMALLER_IS_BETTER:
        score = lambda m: m
    elif objective is Objective.LARGER_IS_BETTER:
        score = lambda m: -m
    else:
        if target is None:
            raise InvalidLevelError("nominal-the-best optimal levels need a target")
        score = lambda m: abs(m - target)
    choices: list[int] = []
    tied: list[int] = []
    for f, row in enumerate(level_means_matrix):
        scores = [score(m) for m in row]
        best = min(scores)
        winners = [i for i, s in enumerate(scores) if s == best]
        choices.append(winners[0])
        if len(winners) > 1:
            tied.append(f)
    return tuple(choices), tuple(tied)


@dataclass(frozen=True)
class ResponseAnalysis:
    """Everything the screening derives for one response."""

    spec: ResponseSpec
    grand_mean: float
    run_means: tuple[float, ...]
    snr_per_run: tuple[float, ...]
    level_means: tuple[tuple[float, ...], ...]
    snr_level_means: tuple[tuple[float, ...], ...]
    deltas: tuple[float, ...]
    ranks: tuple[int, ...]
    optimal_levels: tuple[int, ...]
    ties: tuple[int, ...]


@dataclass(frozen=True)
class AnalysisReport:
    design: Design
    responses: tuple[ResponseAnalysis, ...]

    def response(self, name: str | None = None) -> ResponseAnalysis:
        if name is None:
            if len(self.responses) == 1:
                return self.responses[0]
            raise UnknownResponseError(
                "report has several responses; name one of: "
                + ", ".join(r.spec.name for r in self.responses)
            )
        for analysis in self.responses:
            if analysis.spec.name == name:
                return analysis
        raise UnknownResponseError(
            f"no response named {name!r}; available: "
            + ", ".join(r.spec.name for r in self.responses)
        )

    def optimal_settings(self, name: str | None = None) -> dict[str, float]:
        analysis = self.response(name)
        return {
            factor.name: factor.levels[level]
            for factor, level in zip(self.design.factors, analysis.optimal_levels)
        }


def analyze(
    design: Design,
    results: Sequence[RunResult],
    specs: Sequence[ResponseSpec],
) -> AnalysisReport:
    """Full screening for every response: S/N, level means, deltas, ranks, optima."""
    if not specs:
        raise UnknownResponseError("at least one response spec is required")
    analyses = []
    for spec in specs:
        run_means = _run_means(design, results, spec.name)
        by_number = {r.run_number: r for r in _merge_replicates(results)}
        snr_per_run = tuple(
            snr(by_number[run.number].values[spec.name], spec.objective, target=spec.target)
            for run in design.runs
        )
        means = _level_matrix(design, run_means)
        deltas, ranks = rank_factors(means)
        best, tied = optimal_levels(means, spec.objective, target=spec.target)
        analyses.append(
            ResponseAnalysis(
                spec=spec,
                grand_mean=fmean(run_means),
                run_means=tuple(run_means),
                snr_per_run=snr_per_run,
                level_means=means,
                snr_level_means=_level_matrix(design, snr_per_run),
                deltas=deltas,
                ranks=ranks,
                optimal_levels=best,
                ties=tied,
            )
        )
    return AnalysisReport(design=design, responses=tuple(analyses))


def _merge_replicates(results: Sequence[RunResult]) -> list[RunResult]:
    merged: dict[int, RunResult] = {}
    for result in results:
        if result.run_number in merged:
            merged[result.run_number] = _merge_pair(merged[result.run_number], result)
        else:
            merged[result.run_number] = result
    return list(merged.values())


@dataclass(frozen=True)
class Prediction:
    """Additive estimate of a response at a chosen level combination."""

    response: str
    unit: str
    level_indices: tuple[int, ...]
    settings: dict[str, float]
    predicted: float
    confirmation: float | None = None
    error_percent: float | None = None


def predict_optimum(
    report: AnalysisReport,
    response: str | None = None,
    levels: Sequence[int] | None = None,
) -> Prediction:
    """Additive optimum prediction: grand mean plus per-factor level-mean offsets.

    With level means ``m[f][l]`` and grand mean ``g`` the estimate at a
    combination ``L`` is ``g + sum_f (m[f][L_f] - g)``. By default ``L``
    is the response's optimal level per factor; any valid combination may
    be supplied instead.
    """
    analysis = report.response(response)
    if levels is None:
        chosen = analysis.optimal_levels
    else:
        chosen = tuple(levels)
        if len(chosen) != len(report.design.factors):
            raise InvalidLevelError(
                f"expected {len(report.design.factors)} level choices, got {len(chosen)}"
            )
        for factor, level in zip(report.design.factors, chosen):
            if not 0 <= level < len(factor.levels):
                raise InvalidLevelError(
                    f"level index {level} out of range for factor {factor.name!r} "
                    f"(0..{len(factor.levels) - 1})"
                )
    grand = analysis.grand_mean
    predicted = grand + sum(
        analysis.level_means[f][chosen[f]] - grand for f in range(len(chosen))
    )
    settings = {
        factor.name: factor.levels[level]
        for factor, level in zip(report.design.factors, chosen)
    }
    return Prediction(
        response=analysis.spec.name,
        unit=analysis.spec.unit,
        level_indices=chosen,
        settings=settings,
        predicted=predicted,
    )


def error_percent(predicted: float, confirmed: float) -> float:
    """Relative deviation of the prediction from the confirmation value.

    ``|confirmed - predicted| / confirmed * 100``; the confirmation run is
    the denominator.
    """
    if not math.isfinite(confirmed) or confirmed <= 0:
        raise ConfirmationError(f"confirmation value must be positive, got {confirmed!r}")
    return abs(confirmed - predicted) / confirmed * 100.0


def validate(prediction: Prediction, confirmation_value: float) -> Prediction:
    """Attach a confirmation measurement and its error percentage to a prediction."""
    return replace(
        prediction,
        confirmation=confirmation_value,
        error_percent=error_percent(prediction.predicted, confirmation_value),
    )


def weighted_optimal_levels(
    report: AnalysisReport, weights: Mapping[str, float]
) -> tuple[int, ...]:
    """Single compromise level combination for conflicting per-response optima.

    Desk heuristic, not part of the classical screening procedure: each
    response's level means are scaled per factor to [0, 1] with 0 at that
    response's best level, then combined as a weighted sum and minimized.
    Weights must be non-negative with at least one positive entry.
    """
    if not weights:
        raise UnknownResponseError("weighted recommendation needs at least one weight")
    for name in weights:
        report.response(name)  # raises on unknown names
    if any(w < 0 for w in weights.values()) or all(w == 0 for w in weights.values()):
        raise ValueError("weights must be non-negative and not all zero")
    factor_count = len(report.design.factors)
    choices = []
    for f in range(factor_count):
        level_count = len(report.design.factors[f].levels)
        scores = [0.0] * level_count
        for name, weight in weights.items():
            analysis = report.response(name)
            row = analysis.level_means[f]
            spread = max(row) - min(row)
            if spread == 0.0:
                continue
            if analysis.spec.objective is Objective.SMALLER_IS_BETTER:
                scaled = [(m - min(row)) / spread for m in row]
            elif analysis.spec.objective is Objective.LARGER_IS_BETTER:
                scaled = [(max(row) - m) / spread for m in row]
            else:
                dist = [abs(m - (analysis.spec.target or 0.0)) for m in row]
                dspread = max(dist) - min(dist)
                scaled = [0.0] * level_count if dspread == 0 else [
                    (d - min(dist)) / dspread for d in dist
                ]
            for level in range(level_count):
                scores[level] += weight * scaled[level]
        choices.append(min(range(level_count), key=lambda l: (scores[l], l)))
    return tuple(choices)
