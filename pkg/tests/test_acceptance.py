"""Acceptance criteria; each test prints a single PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the lines alone.
"""
import sys

import pytest

from trotter_dixmier.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
