from __future__ import annotations

import json
from pathlib import Path

import pytest

from taguchikit.analysis import analyze, read_results_csv
from taguchikit.cli import build_design, load_config

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def clip_config():
    return load_config(FIXTURES / "clip_moulding.yaml")


@pytest.fixture(scope="session")
def clip_design(clip_config):
    design, _ = build_design(clip_config)
    return design


@pytest.fixture(scope="session")
def clip_results():
    return read_results_csv((FIXTURES / "clip_moulding_results.csv").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def clip_report(clip_design, clip_results, clip_config):
    return analyze(clip_design, clip_results, clip_config.responses)


@pytest.fixture(scope="session")
def moldflow_reference():
    return json.loads((FIXTURES / "moldflow_reference.json").read_text(encoding="utf-8"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from _acceptance_log import RESULTS
    except ImportError:  # acceptance module not collected in this run
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, description, passed in RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {criterion}: {description}")
