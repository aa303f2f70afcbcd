"""The release gate: one test per criterion, each printing its verdict.

The criteria run once per session (module-scoped fixture) in their numbered
order; every test asserts its own criterion so failures are attributable.
Run with ``pytest -s tests/test_acceptance.py`` to watch the verdict lines
appear, or via the CLI: ``rotorlab verify``.
"""

import pytest

from rotorlab import acceptance


@pytest.fixture(scope="module")
def results():
    res = acceptance.run_acceptance(echo=True)
    return {r.number: r for r in res}


def _check(results, number):
    res = results[number]
    assert res.ok, f"criterion {number} ({res.name}): {res.detail}"


def test_criterion_01_limit_table(results):
    _check(results, 1)


def test_criterion_02_series_sum(results):
    _check(results, 2)


def test_criterion_03_percentage(results):
    _check(results, 3)


def test_criterion_04_period_code_oracle(results):
    _check(results, 4)


def test_criterion_05_involution_suite(results):
    _check(results, 5)


def test_criterion_06_generator_table(results):
    _check(results, 6)


def test_criterion_07_covering_ledger(results):
    _check(results, 7)


def test_criterion_08_crossover(results):
    _check(results, 8)


def test_criterion_09_interval_engine(results):
    _check(results, 9)


def test_criterion_10_remainder_membership(results):
    _check(results, 10)


def test_criterion_11_pocket_families(results):
    _check(results, 11)
