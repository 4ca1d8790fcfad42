"""Acceptance criteria 1-10 at their pinned tolerances.

Each criterion runs the corresponding verification suite with the default
configuration (seed 42, float tolerance 1e-9, truncation order 32) and
prints a single PASS/FAIL line.
"""

import json

import pytest

from conftest import ACCEPTANCE_LINES
from padelic.config import Config
from padelic.verify import SUITES, run_suite

PINNED = Config(truncation_order=32, tolerance=1e-9, oracle_budget=10**7, seed=42)


@pytest.mark.parametrize("number,name", [(k, n) for k, n, _ in SUITES], ids=[f"{k:02d}-{n}" for k, n, _ in SUITES])
def test_criterion(number, name):
    report = run_suite(number, PINNED)
    status = "PASS" if report["passed"] else "FAIL"
    line = f"criterion {number:>2} {name:<24} {status}  {json.dumps(report['metrics'], default=str, sort_keys=True)}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert not report["warnings"], report["warnings"]
    assert report["passed"], report["metrics"]
