"""Outcome tables with binomial errors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SINGLE_CELLS = ("up", "down")
# (z-side outcome, phi-side outcome)
PAIR_CELLS = ("up_up", "up_down", "down_up", "down_down")


def binomial_sigma(p: float, n: int) -> float:
    if n <= 0:
        return math.nan
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def z_score(observed: float, expected: float, n: int) -> float:
    """Deviation in units of the binomial sigma of ``expected`` at ``n`` draws.

    A zero sigma (expected 0 or 1) gives 0 for an exact match and ``inf``
    otherwise.
    """
    sigma = binomial_sigma(expected, n)
    dev = observed - expected
    if sigma == 0.0:
        return 0.0 if dev == 0.0 else math.copysign(math.inf, dev)
    return dev / sigma


@dataclass(frozen=True)
class StatsSummary:
    experiment: str
    cells: tuple[str, ...]
    counts: tuple[int, ...]
    total: int
    accepted: int
    angle: float | None = None
    rule: str | None = None
    oracle: tuple[float, ...] | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) != len(self.cells):
            raise ValueError("one count per cell required")
        if self.total < 1:
            raise ValueError("summary needs at least one trial")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        if sum(counts) != self.accepted or self.accepted > self.total:
            raise ValueError(
                f"inconsistent counts: sum={sum(counts)} accepted={self.accepted} "
                f"total={self.total}")
        if self.oracle is not None and len(self.oracle) != len(self.cells):
            raise ValueError("one oracle probability per cell required")

    @classmethod
    def from_counts(cls, experiment, cells, counts, total, **kw) -> "StatsSummary":
        counts = np.asarray(counts, dtype=np.int64)
        return cls(experiment, tuple(cells), tuple(int(c) for c in counts), int(total),
                   int(counts.sum()), **kw)

    def count(self, cell: str) -> int:
        return self.counts[self.cells.index(cell)]

    @property
    def frequencies(self) -> tuple[float, ...]:
        if self.accepted == 0:
            return tuple(math.nan for _ in self.counts)
        return tuple(c / self.accepted for c in self.counts)

    def frequency(self, cell: str) -> float:
        return self.frequencies[self.cells.index(cell)]

    @property
    def stderr(self) -> tuple[float, ...]:
        return tuple(binomial_sigma(p, self.accepted) for p in self.frequencies)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.total

    @property
    def rejection_rate(self) -> float:
        return 1.0 - self.acceptance_rate

    @property
    def deviations(self) -> tuple[float, ...] | None:
        if self.oracle is None:
            return None
        return tuple(f - p for f, p in zip(self.frequencies, self.oracle))

    @property
    def z_scores(self) -> tuple[float, ...] | None:
        if self.oracle is None:
            return None
        return tuple(z_score(f, p, self.accepted)
                     for f, p in zip(self.frequencies, self.oracle))

    def conditional(self, given: str, outcome: str) -> tuple[float, int]:
        """P(phi-side = ``outcome`` | z-side = ``given``) and the conditioning count."""
        if self.cells != PAIR_CELLS:
            raise ValueError("conditionals are defined for pair tables only")
        hit = self.count(f"{given}_{outcome}")
        n = hit + self.count(f"{given}_{'down' if outcome == 'up' else 'up'}")
        return (hit / n if n else math.nan), n

    def correlation(self) -> tuple[float, float]:
        """``E = P(same) - P(opposite)`` over accepted trials and its standard error."""
        if self.cells != PAIR_CELLS:
            raise ValueError("correlation is defined for pair tables only")
        n = self.accepted
        if n == 0:
            return math.nan, math.nan
        same = self.count("up_up") + self.count("down_down")
        e = (2 * same - n) / n
        return e, math.sqrt(max(1.0 - e * e, 0.0) / n)
