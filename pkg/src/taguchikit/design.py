"""Bind physical factors to array columns and produce concrete run sheets."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from taguchikit.arrays import OrthogonalArray
from taguchikit.errors import BindError, ResultsFormatError
from taguchikit.formatting import number_label

__all__ = ["Factor", "Run", "Design", "bind", "export_run_sheet", "read_run_sheet"]


@dataclass(frozen=True)
class Factor:
    """A controllable process input with its tested settings.

    Levels are strictly ascending physical values; the unit is an opaque
    label carried through to reports (no conversion is attempted).
    """

    name: str
    unit: str
    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        if not self.name:
            raise BindError("factor name must be non-empty")
        if len(self.levels) < 2:
            raise BindError(f"factor {self.name!r} needs >= 2 levels, got {len(self.levels)}")
        for v in self.levels:
            if not math.isfinite(v):
                raise BindError(f"factor {self.name!r} has a non-finite level: {v!r}")
        if any(a >= b for a, b in zip(self.levels, self.levels[1:])):
            raise BindError(f"levels of factor {self.name!r} must be strictly increasing")

    def label(self) -> str:
        return f"{self.name}({self.unit})" if self.unit else self.name

    def level_index(self, value: float) -> int:
        """Index of a physical value in the level list (exact match)."""
        for i, v in enumerate(self.levels):
            if v == value:
                return i
        choices = ", ".join(number_label(v) for v in self.levels)
        raise BindError(f"{number_label(value)} is not a level of {self.name!r} (levels: {choices})")


@dataclass(frozen=True)
class Run:
    """One experiment: a 1-based run number and its factor settings."""

    number: int
    settings: dict[str, float]


@dataclass(frozen=True)
class Design:
    """An orthogonal array with factors bound to its columns.

    The run sheet substitutes physical values for level indices while
    preserving the array's row order, so run numbers are stable across
    exports and analyses.
    """

    array: OrthogonalArray
    factors: tuple[Factor, ...]
    runs: tuple[Run, ...]

    @property
    def factor_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.factors)

    def factor(self, name: str) -> Factor:
        for f in self.factors:
            if f.name == name:
                return f
        raise BindError(f"no factor named {name!r} in design")

    def runs_at(self, factor_index: int, level_index: int) -> tuple[int, ...]:
        """0-based row positions where the given factor sits at the given level."""
        return tuple(
            i for i, row in enumerate(self.array.cells) if row[factor_index] == level_index
        )


def bind(array: OrthogonalArray, factors: Sequence[Factor]) -> Design:
    """Bind one factor per array column, in order.

    Raises :class:`BindError` on a factor/column count mismatch, a level
    cardinality mismatch, or duplicate factor names.
    """
    factors = tuple(factors)
    if len(factors) != array.columns:
        raise BindError(
            f"{array.name} has {array.columns} columns but {len(factors)} factors were given"
        )
    names = [f.name for f in factors]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise BindError(f"duplicate factor names: {', '.join(dupes)}")
    for j, factor in enumerate(factors):
        want = array.levels_per_column[j]
        if len(factor.levels) != want:
            raise BindError(
                f"factor {factor.name!r} has {len(factor.levels)} levels but column "
                f"{j + 1} of {array.name} has {want}"
            )
    runs = tuple(
        Run(i + 1, {f.name: f.levels[row[j]] for j, f in enumerate(factors)})
        for i, row in enumerate(array.cells)
    )
    return Design(array=array, factors=factors, runs=runs)


def export_run_sheet(design: Design) -> str:
    """Run sheet as CSV: ``run,<factor(unit)>,...`` with one row per run.

    Values are printed with their shortest exact decimal form, so levels
    declared as ``47`` or ``3.5`` come back out character-identical.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["run"] + [f.label() for f in design.factors])
    for run in design.runs:
        writer.writerow([run.number] + [number_label(run.settings[f.name]) for f in design.factors])
    return buf.getvalue()


def read_run_sheet(text: str | Iterable[str]) -> tuple[Run, ...]:
    """Parse a run-sheet CSV back into runs (inverse of :func:`export_run_sheet`).

    Lines starting with ``#`` are ignored so annotated exports round-trip.
    Header units in parentheses are stripped from the factor names.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    rows = [line for line in lines if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ResultsFormatError("run sheet is empty")
    reader = csv.reader(rows)
    header = next(reader)
    if not header or header[0].strip() != "run":
        raise ResultsFormatError("run sheet must start with a 'run' column")
    names = [_strip_unit(h) for h in header[1:]]
    runs: list[Run] = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise ResultsFormatError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            number = int(row[0])
            values = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise ResultsFormatError(f"row {lineno}: {exc}") from None
        runs.append(Run(number, dict(zip(names, values))))
    return tuple(runs)


def _strip_unit(label: str) -> str:
    label = label.strip()
    if label.endswith(")") and "(" in label:
        return label[: label.rindex("(")]
    return label
