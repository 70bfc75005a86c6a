"""Table replay and additive surrogate evaluators."""

from __future__ import annotations

from itertools import product
from statistics import fmean

import pytest

from taguchikit.analysis import Objective, ResponseSpec, RunResult, analyze, predict_optimum
from taguchikit.arrays import OrthogonalArray
from taguchikit.design import Factor, bind
from taguchikit.errors import (
    CombinationNotCoveredError,
    InvalidLevelError,
    UnbalancedDesignError,
    UnknownResponseError,
)
from taguchikit.evaluators import SurrogateEvaluator, TableEvaluator, fit_surrogate

CYCLE = (49.4161, 51.0519, 54.4495, 29.3798, 30.4038, 32.3585, 22.925, 23.4541, 24.4298)


@pytest.fixture(scope="module")
def table(clip_design, clip_results):
    return TableEvaluator.from_results(clip_design, clip_results)


class TestTableEvaluator:
    def test_replays_recorded_run5(self, table):
        settings = {
            "mould_temperature": 80,
            "melt_temperature": 220,
            "injection_pressure": 58,
            "holding_time": 3.5,
        }
        assert table.evaluate(settings, "cycle_time") == 30.4038

    def test_covers_only_recorded_combinations(self, table, clip_design):
        assert table.covers(clip_design.runs[0].settings)
        assert not table.covers(
            {
                "mould_temperature": 85,
                "melt_temperature": 215,
                "injection_pressure": 53,
                "holding_time": 3.5,
            }
        )

    def test_miss_lists_nearest_recorded(self, table):
        probe = {
            "mould_temperature": 85,
            "melt_temperature": 215,
            "injection_pressure": 53,
            "holding_time": 3.5,
        }
        with pytest.raises(CombinationNotCoveredError) as exc:
            table.evaluate(probe, "cycle_time")
        message = str(exc.value)
        assert "no recorded result at (85, 215, 53, 3.5)" in message
        # run 9 differs in two positions; something at distance <= 2 must show up
        assert "(85, 230, 53, 3.5)" in message

    def test_requires_response_name_for_multi_response_tables(self, table):
        with pytest.raises(UnknownResponseError, match="several responses"):
            table.evaluate(
                {
                    "mould_temperature": 80,
                    "melt_temperature": 220,
                    "injection_pressure": 58,
                    "holding_time": 3.5,
                }
            )

    def test_unknown_response_rejected(self, table, clip_design):
        with pytest.raises(UnknownResponseError, match="warpage"):
            table.evaluate(clip_design.runs[0].settings, "warpage")

    def test_missing_factor_in_query(self, table):
        with pytest.raises(InvalidLevelError, match="holding_time"):
            table.evaluate(
                {"mould_temperature": 80, "melt_temperature": 220, "injection_pressure": 58},
                "cycle_time",
            )

    def test_reemitted_csv_is_byte_identical(self, table, fixtures_dir):
        original = (fixtures_dir / "clip_moulding_results.csv").read_text(encoding="utf-8")
        assert table.to_results_csv() == original

    def test_replicates_average_on_evaluate(self):
        array = OrthogonalArray("pair", (2,), ((0,), (1,)))
        design = bind(array, (Factor("x", "", (1.0, 2.0)),))
        results = [RunResult(1, {"y": (10.0, 14.0)}), RunResult(2, {"y": (20.0,)})]
        evaluator = TableEvaluator.from_results(design, results)
        assert evaluator.evaluate({"x": 1.0}, "y") == 12.0


class TestSurrogate:
    def test_grand_mean_from_fit(self, clip_report):
        surrogate = fit_surrogate(clip_report, "cycle_time")
        assert surrogate.grand_mean == pytest.approx(sum(CYCLE) / 9, rel=1e-12)
        assert abs(surrogate.grand_mean - 35.3187) <= 0.0001
        assert len(surrogate.offsets) == 4
        assert all(len(table) == 3 for table in surrogate.offsets)

    @pytest.mark.parametrize("response", ["cycle_time", "shrinkage"])
    def test_matches_prediction_on_every_combination(self, clip_report, response):
        surrogate = fit_surrogate(clip_report, response)
        factors = clip_report.design.factors
        for combo in product(range(3), repeat=4):
            predicted = predict_optimum(clip_report, response, levels=combo).predicted
            settings = {f.name: f.levels[l] for f, l in zip(factors, combo)}
            evaluated = surrogate.evaluate(settings)
            assert abs(evaluated - predicted) <= 1e-9 * max(1.0, abs(predicted))

    def test_exhaustive_minimum_sits_at_per_factor_argmin(self, clip_report):
        surrogate = fit_surrogate(clip_report, "cycle_time")
        factors = clip_report.design.factors
        values = {
            combo: surrogate.evaluate(
                {f.name: f.levels[l] for f, l in zip(factors, combo)}
            )
            for combo in product(range(3), repeat=4)
        }
        best_combo = min(values, key=values.get)
        assert best_combo == clip_report.response("cycle_time").optimal_levels

    def test_design_run_average_recovers_grand_mean(self, clip_report):
        surrogate = fit_surrogate(clip_report, "cycle_time")
        per_run = [surrogate.evaluate(run.settings) for run in clip_report.design.runs]
        assert fmean(per_run) == pytest.approx(sum(CYCLE) / 9, rel=1e-9)
        assert abs(fmean(per_run) - 35.3187) <= 0.0001

    def test_constant_response_has_zero_offsets(self, clip_design):
        results = [RunResult(n, {"flat": (3.25,)}) for n in range(1, 10)]
        report = analyze(
            clip_design, results, (ResponseSpec("flat", "", Objective.SMALLER_IS_BETTER),)
        )
        surrogate = fit_surrogate(report, "flat")
        assert all(offset == 0.0 for table in surrogate.offsets for offset in table.values())
        assert surrogate.evaluate(clip_design.runs[4].settings) == 3.25

    def test_unbalanced_design_rejected(self):
        lopsided = OrthogonalArray("lopsided", (2,), ((0,), (0,), (1,)))
        design = bind(lopsided, (Factor("x", "", (1.0, 2.0)),))
        results = [RunResult(n, {"y": (float(n),)}) for n in (1, 2, 3)]
        report = analyze(design, results, (ResponseSpec("y", "", Objective.SMALLER_IS_BETTER),))
        with pytest.raises(UnbalancedDesignError, match="column"):
            fit_surrogate(report, "y")

    def test_unfitted_level_value_rejected(self, clip_report):
        surrogate = fit_surrogate(clip_report, "cycle_time")
        with pytest.raises(InvalidLevelError, match="not a fitted level"):
            surrogate.evaluate(
                {
                    "mould_temperature": 82,
                    "melt_temperature": 215,
                    "injection_pressure": 53,
                    "holding_time": 3.5,
                }
            )

    def test_answers_only_its_own_response(self, clip_report):
        surrogate = fit_surrogate(clip_report, "cycle_time")
        assert surrogate.responses == ("cycle_time",)
        with pytest.raises(UnknownResponseError, match="shrinkage"):
            surrogate.evaluate(clip_report.design.runs[0].settings, "shrinkage")

    def test_json_round_trip_evaluates_identically(self, clip_report):
        surrogate = fit_surrogate(clip_report, "shrinkage")
        clone = SurrogateEvaluator.from_json(surrogate.to_json())
        factors = clip_report.design.factors
        for combo in product(range(3), repeat=4):
            settings = {f.name: f.levels[l] for f, l in zip(factors, combo)}
            assert clone.evaluate(settings) == surrogate.evaluate(settings)

    def test_covers_reports_fitted_grid(self, clip_report):
        surrogate = fit_surrogate(clip_report, "cycle_time")
        assert surrogate.covers(clip_report.design.runs[0].settings)
        assert not surrogate.covers({"mould_temperature": 82})
