"""Acceptance gate: one pass/fail line per criterion, exact values, stated time budgets."""
import pytest

from heredpoly import verify

NUMBERS = [num for num, *_ in verify.CRITERIA]


def _report(capsys, result):
    with capsys.disabled():
        print("\n" + result.line())
    failed = [f"{c.label}: {c.detail}" for c in result.checks if not c.passed]
    assert result.passed, "\n".join(failed) or f"took {result.seconds:.1f} s, budget {result.budget:g} s"


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(number, capsys):
    _report(capsys, verify.run_criterion(number))


@pytest.mark.slow
@pytest.mark.parametrize("number", [7, 8])
def test_criterion_slow_part(number, capsys):
    result = verify.run_criterion(number, slow=True)
    assert len(result.checks) > len(verify.run_criterion(number).checks)
    _report(capsys, result)
