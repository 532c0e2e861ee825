"""One test per acceptance criterion; a summary line per criterion is printed at the end."""
import pytest

from todaprep.acceptance import CRITERIA, run_criterion

RESULTS = {}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA],
                         ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number):
    res = run_criterion(number)
    RESULTS[number] = res
    print(res.line())
    assert res.passed, res.detail
