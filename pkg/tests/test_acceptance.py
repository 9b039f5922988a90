"""Acceptance criteria, one test per criterion.

Each test prints ``PASS criterion N: title`` or ``FAIL criterion N: title``
followed by its individual checks.  The lines are also repeated in the
pytest terminal summary (see conftest.py), and running this file directly
prints them without pytest.
"""

import sys

import pytest

from qharmonic.verify import SUITES, run_suite

RESULTS: dict = {}


def _report(number: int) -> tuple:
    title, checks, ok = run_suite(number, seed=0)
    lines = [f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"]
    for c in checks:
        detail = f" ({c.detail})" if c.detail else ""
        lines.append(f"    [{'ok' if c.passed else 'FAILED'}] {c.name}{detail}")
    RESULTS[number] = lines
    return ok, lines


@pytest.mark.parametrize("number", sorted(SUITES), ids=[f"criterion_{n}" for n in sorted(SUITES)])
def test_criterion(number):
    ok, lines = _report(number)
    print("\n".join(lines))
    failed = [line.strip() for line in lines[1:] if "[FAILED]" in line]
    assert ok, "; ".join(failed)


if __name__ == "__main__":
    status = 0
    for n in sorted(SUITES):
        ok, lines = _report(n)
        print("\n".join(lines), flush=True)
        status |= not ok
    sys.exit(status)
