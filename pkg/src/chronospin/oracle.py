"""Closed-form standard quantum mechanics for the free spin and the singlet.

Nothing here samples; these are the reference values the Monte Carlo tables
are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .spin import Axis
from .stats import PAIR_CELLS

__all__ = ["JointDistribution", "qm_single_spin", "qm_singlet_joint", "qm_correlation",
           "qm_conditional"]


@dataclass(frozen=True)
class JointDistribution:
    """P(z-side outcome, phi-side outcome) keyed by ``PAIR_CELLS`` names."""

    probabilities: dict
    phi: float

    def __post_init__(self):
        if set(self.probabilities) != set(PAIR_CELLS):
            raise ValueError(f"cells must be {PAIR_CELLS}")
        if any(p < 0 for p in self.probabilities.values()):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(self.probabilities.values()) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")

    def __getitem__(self, cell: str) -> float:
        return self.probabilities[cell]

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(self.probabilities[c] for c in PAIR_CELLS)


def _axis(phi) -> Axis:
    return phi if isinstance(phi, Axis) else Axis(phi)


def qm_single_spin() -> tuple[float, float]:
    """``(P_up, P_down)`` for the equal superposition."""
    return 0.5, 0.5


def qm_singlet_joint(phi) -> JointDistribution:
    axis = _axis(phi)
    s2 = math.sin(axis.phi / 2) ** 2
    c2 = math.cos(axis.phi / 2) ** 2
    return JointDistribution(
        {"up_up": 0.5 * s2, "up_down": 0.5 * c2, "down_up": 0.5 * c2, "down_down": 0.5 * s2},
        axis.phi,
    )


def qm_conditional(phi, given: str = "down", outcome: str = "up") -> float:
    """P(phi-side = ``outcome`` | z-side = ``given``)."""
    joint = qm_singlet_joint(phi)
    other = "down" if outcome == "up" else "up"
    hit = joint[f"{given}_{outcome}"]
    return hit / (hit + joint[f"{given}_{other}"])


def qm_correlation(phi) -> float:
    """``P(same) - P(opposite)``, equal to ``-cos(phi)``."""
    joint = qm_singlet_joint(phi)
    return (joint["up_up"] + joint["down_down"]) - (joint["up_down"] + joint["down_up"])
