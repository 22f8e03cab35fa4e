"""Acceptance gate: runs every registered check at full scale and prints one
pass/fail line per check."""

import pytest

from gapsecretary.acceptance import CHECKS


@pytest.mark.parametrize(
    "suite,check", CHECKS, ids=[fn.__name__.removeprefix("check_") for _, fn in CHECKS]
)
def test_acceptance(suite, check, capsys):
    result = check(fast=False)
    with capsys.disabled():
        status = "PASS" if result.passed else "FAIL"
        print(
            f"\n{status}  {result.name} [{result.suite}]  "
            f"measured: {result.measured}  expected: {result.expected}  "
            f"({result.seconds:.1f}s)"
        )
    assert result.passed, (
        f"{result.name}: measured {result.measured}, expected {result.expected}"
    )
    assert result.suite == suite
