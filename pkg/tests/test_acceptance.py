"""The acceptance matrix, one test per criterion.

Run with ``--fast`` to leave out the slow tier (D4 contractions and the
GL3(2) X(G) e_I0 certificates); the summary at the end of the run lists one
pass/fail line per criterion.
"""

import pytest

from acdual.acceptance import CRITERIA, run_criterion

ELEMENTWISE_REFINEMENT = (
    "theta maps v0(a) to the longest element of theta(a) meeting D_{0,I0}, so "
    "w_S v0(b) w_I0 <=_r w_S v0(a) w_I0 fails on some m-entries (e.g. A3 with I0 empty); "
    "the refinement that holds is v0(theta b) <=_r v0(theta a)"
)


def numbered():
    for n in sorted(CRITERIA):
        marks = [pytest.mark.xfail(reason=ELEMENTWISE_REFINEMENT, strict=True)] if n == 1 else []
        yield pytest.param(n, marks=marks, id=f"criterion-{n:02d}")


@pytest.mark.parametrize("number", list(numbered()))
def test_criterion(number, slow_tier, acceptance_log):
    c = run_criterion(number, slow=slow_tier, seed=0)
    print(c.line())
    acceptance_log.append(c.line())
    assert c.ok, c.detail


def test_criterion_1_other_identities_hold(slow_tier):
    # everything in criterion 1 apart from the element-wise refinement
    c = run_criterion(1, slow=slow_tier)
    assert c.data["instances"] == (69 if slow_tier else 54)
    assert c.data["literal_failures"] > 0
    assert "refinement holds as v0(theta b) <=_r v0(theta a) everywhere" in c.detail
