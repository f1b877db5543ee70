"""Acceptance criteria at their stated sizes and tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are repeated in
the terminal summary under "acceptance criteria".
"""

import pytest

from conftest import ACCEPTANCE_LINES
from terraspan import harness


@pytest.mark.parametrize("number", sorted(harness.CRITERIA))
def test_criterion(number):
    result = harness.CRITERIA[number]()
    line = result.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, line
