"""End-to-end acceptance checks, one per criterion.

Each test prints a single PASS/FAIL line.  The lines are also collected and shown in
the pytest terminal summary, so they appear without ``-s``.  Running this file as a
script prints the same lines directly.
"""

import pytest

from wgc.verify import CHECKS, run_check

RESULTS: dict[int, str] = {}


def line(result) -> str:
    status = "PASS" if result.passed else "FAIL"
    within = "" if result.seconds <= result.budget else " over budget"
    return (f"criterion {result.criterion:2d}: {status}  {result.name} "
            f"({result.seconds:.2f}s of {result.budget:g}s{within})")


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    result = run_check(number)
    RESULTS[number] = line(result)
    print(RESULTS[number])
    assert result.passed, result.details
    assert result.seconds <= result.budget


if __name__ == "__main__":
    for n in sorted(CHECKS):
        print(line(run_check(n)))
