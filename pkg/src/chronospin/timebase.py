"""Discrete classical time grid.

Time advances in integer ticks of an unspecified step ``dt``.  Every rule in
the model depends only on the tick count and its parity, so ``dt`` never
takes a numeric value here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["TimeStep", "Delay", "Parity", "phase", "parity", "QUARTER_TURNS"]

# phase(n) for n mod 4, exact multiples of pi/2
QUARTER_TURNS = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls(int(n) % 2)

    def __str__(self) -> str:
        return self.name.lower()


@dataclass(frozen=True, order=True)
class TimeStep:
    """Tick index ``n`` on the classical grid, ``t_n = n * dt``."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise TypeError(f"tick index must be an integer, got {self.n!r}")
        if self.n < 0:
            raise ValueError(f"tick index must be non-negative, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    def __add__(self, other: "Delay | int") -> "TimeStep":
        k = other.k if isinstance(other, Delay) else other
        return TimeStep(self.n + k)

    def __sub__(self, other: "TimeStep") -> "Delay":
        return Delay(self.n - other.n)

    @property
    def parity(self) -> Parity:
        return Parity.of(self.n)


@dataclass(frozen=True, order=True)
class Delay:
    """Number of ticks between two measurements."""

    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)):
            raise TypeError(f"delay must be an integer, got {self.k!r}")
        if self.k < 0:
            raise ValueError(f"delay must be non-negative, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def parity(self) -> Parity:
        return Parity.of(self.k)


def _ticks(n) -> int:
    if isinstance(n, (TimeStep,)):
        return n.n
    if isinstance(n, Delay):
        return n.k
    return int(n)


def phase(n) -> float:
    """Oscillation angle ``pi * n / 2`` reduced to ``[0, 2*pi)``.

    ``n`` is reduced mod 4 before multiplying so the four-tick period is
    exact for arbitrarily large tick counts.

    >>> phase(3) == 3 * math.pi / 2
    True
    >>> phase(4)
    0.0
    """
    return QUARTER_TURNS[_ticks(n) % 4]


def parity(n) -> Parity:
    return Parity.of(_ticks(n))
