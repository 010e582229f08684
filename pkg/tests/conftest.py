import math

import numpy as np
import pytest

from chronospin.singlet import OutcomeRule

ANGLE_GRID = (0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)
N = 100_000
SEED = 20240917

_acceptance_lines: list[str] = []


def record_criterion(label: str, ok: bool, detail: str = "") -> None:
    _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(params=list(OutcomeRule), ids=lambda r: r.value)
def rule(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
