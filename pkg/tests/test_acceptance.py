"""Acceptance suite: every criterion at its stated size and tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see the one-line verdict
per criterion as it completes (also available via ``heatvar selftest``).
The full suite is Monte Carlo at reference scale and takes a few minutes
with the compiled backend.
"""

import pytest

from heatvar.acceptance import ALL_CRITERIA

_results = {}


def _run(criterion: int):
    if criterion not in _results:
        res = ALL_CRITERIA[criterion](fast=False)
        print(res.line(), flush=True)
        _results[criterion] = res
    return _results[criterion]


@pytest.mark.parametrize("criterion", sorted(ALL_CRITERIA))
def test_acceptance_criterion(criterion):
    res = _run(criterion)
    assert res.passed, res.line()
