"""Acceptance criteria 1-10 at their stated sizes and tolerances.

Each test prints one PASS/FAIL line (outside pytest's capture). Run directly
with ``python3 tests/test_acceptance.py`` for just the table.
"""

import json
import sys

import pytest

from trireg.certify import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number]("full")
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, json.dumps(result.detail, indent=1, default=str)


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        r = CRITERIA[k]("full")
        print(r.line(), flush=True)
        failed += not r.passed
    sys.exit(1 if failed else 0)
