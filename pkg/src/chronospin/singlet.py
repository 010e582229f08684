"""Singlet pair as a product of two oscillating carriers on one clock.

Both carriers start from opposite z labels at the same reference tick.  The
first particle is read along z; its partner keeps oscillating from the
opposite z label, anchored at the first-measurement tick, and is read along
an axis ``phi`` after a delay of ``k`` ticks.

The delayed branch terms carry coefficients ``cos^2(phi/2)`` (even ``k``) or
``sin^2(phi/2)`` (odd ``k``) that do not sum to one within a branch.  Two
readings are offered:

``OutcomeRule.PAPER_ENSEMBLE``
    the coefficient is a per-trial acceptance probability (post-selection);
    acceptance-normalized frequencies then match the ensemble average.
``OutcomeRule.BORN_PROJECTION``
    the partner's evolved z label is projected onto the ``phi`` basis with
    Born probabilities; every trial is accepted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .engine import count_trials, draw_ticks
from .spin import (Amplitudes, Axis, OscillatingSpin, Spin, SpinLabel, Z_AXIS,
                   amplitudes_at, amplitudes_at_time, cross_term, measure_z,
                   rotate_to_axis)
from .stats import PAIR_CELLS, StatsSummary
from .timebase import Delay, Parity, TimeStep

__all__ = [
    "OutcomeRule",
    "DelayPolicy",
    "SingletPair",
    "PairAmplitudes",
    "PairOutcome",
    "pair_amplitudes",
    "pair_amplitudes_at_time",
    "measure_first_z",
    "delayed_partner_components",
    "measure_second_at_angle",
    "singlet_kernel",
    "run_singlet_ensemble",
]


class OutcomeRule(enum.Enum):
    PAPER_ENSEMBLE = "paper-ensemble"
    BORN_PROJECTION = "born-projection"

    def __str__(self) -> str:
        return self.value


class DelayPolicy(enum.Enum):
    UNIFORM = "uniform-parity"
    EVEN = "fixed-even"
    ODD = "fixed-odd"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SingletPair:
    p1: OscillatingSpin
    p2: OscillatingSpin

    def __post_init__(self):
        if self.p1.start_label is self.p2.start_label:
            raise ValueError("singlet carriers must start from opposite z labels")
        if self.p1.reference_tick != self.p2.reference_tick:
            raise ValueError("singlet carriers must share one reference tick")

    @classmethod
    def from_start(cls, first_start: Spin, reference_tick: TimeStep | int = 0) -> "SingletPair":
        """Pair whose particle 1 starts at ``first_start``."""
        ref = reference_tick if isinstance(reference_tick, TimeStep) else TimeStep(reference_tick)
        return cls(OscillatingSpin(first_start, ref),
                   OscillatingSpin(first_start.flipped(), ref))

    @property
    def clock(self) -> TimeStep:
        return self.p1.reference_tick

    def swapped(self) -> "SingletPair":
        return SingletPair(self.p2, self.p1)


@dataclass(frozen=True)
class PairAmplitudes:
    """z-basis product coefficients, named (particle 1, particle 2)."""

    down_up: float
    up_down: float
    down_down: float
    up_up: float

    def as_dict(self) -> dict[str, float]:
        return {"down_up": self.down_up, "up_down": self.up_down,
                "down_down": self.down_down, "up_up": self.up_up}


def _pair_from(a1: Amplitudes, a2: Amplitudes, mixed: float) -> PairAmplitudes:
    # both same-label coefficients are sin*cos; the shared cross term keeps
    # them exactly zero at integer ticks
    return PairAmplitudes(
        down_up=a1.a_down * a2.a_up,
        up_down=a1.a_up * a2.a_down,
        down_down=mixed,
        up_up=mixed,
    )


def pair_amplitudes(pair: SingletPair, n: TimeStep | int) -> PairAmplitudes:
    k = pair.p1.elapsed(n)
    a1 = amplitudes_at(pair.p1, n)
    a2 = amplitudes_at(pair.p2, n)
    return _pair_from(a1, a2, cross_term(k))


def pair_amplitudes_at_time(pair: SingletPair, t: float) -> PairAmplitudes:
    """Product coefficients at continuous time ``t`` (ticks)."""
    a1 = amplitudes_at_time(pair.p1, t)
    a2 = amplitudes_at_time(pair.p2, t)
    return _pair_from(a1, a2, cross_term(float(t) - pair.clock.n))


def measure_first_z(pair: SingletPair, n: TimeStep | int, *, first: int = 1
                    ) -> tuple[SpinLabel, SpinLabel]:
    """Read particle ``first`` along z at tick ``n``.

    Returns the outcome and the z label its partner is left in (always the
    opposite one).
    """
    if first not in (1, 2):
        raise ValueError(f"first must be 1 or 2, got {first}")
    carrier = pair.p1 if first == 1 else pair.p2
    outcome = measure_z(carrier, n)
    return outcome, outcome.flipped()


def delayed_partner_components(partner_z: SpinLabel | Spin, axis: Axis, k) -> Amplitudes:
    """Partner state ``k`` ticks after the first read, in the ``phi`` basis.

    For a partner left in ``up`` this is
    ``cos(theta_k) cos(phi/2) |up>_phi + sin(theta_k) sin(phi/2) |down>_phi``
    and the mirror image for ``down``.  ``k`` may be a float for off-grid
    times, where the result is not normalized.
    """
    value = partner_z.value if isinstance(partner_z, SpinLabel) else partner_z
    if isinstance(k, Delay):
        k = k.k
    if isinstance(k, (int, np.integer)):
        cos_t, sin_t = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[int(k) % 4]
    else:
        theta = math.pi * float(k) / 2
        cos_t, sin_t = math.cos(theta), math.sin(theta)
    c = math.cos(axis.phi / 2)
    s = math.sin(axis.phi / 2)
    if value is Spin.UP:
        return Amplitudes(a_down=sin_t * s, a_up=cos_t * c)
    return Amplitudes(a_down=cos_t * c, a_up=sin_t * s)


@dataclass(frozen=True)
class PairOutcome:
    outcome1: SpinLabel
    outcome2: SpinLabel
    delay_parity: Parity
    accepted: bool
    weight: float

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"weight must lie in [0, 1], got {self.weight}")


def measure_second_at_angle(partner_z: SpinLabel, axis: Axis, k: Delay | int,
                            rule: OutcomeRule, rng) -> PairOutcome:
    """Read the partner along ``axis`` ``k`` ticks after the first read.

    ``rng`` needs a ``random()`` method returning a uniform in [0, 1); exactly
    one draw is made.  ``outcome1`` of the result is the first particle's z
    label, i.e. the opposite of ``partner_z``.
    """
    if isinstance(partner_z, Spin):
        partner_z = SpinLabel(partner_z, Z_AXIS)
    if not partner_z.axis.is_z:
        raise ValueError("partner label must be a z label")
    delay = k if isinstance(k, Delay) else Delay(k)
    u = rng.random()
    outcome1 = partner_z.flipped()

    if rule is OutcomeRule.PAPER_ENSEMBLE:
        comp = delayed_partner_components(partner_z, axis, delay.k)
        # the surviving component: the partner's own label after an even
        # delay, the opposite one after an odd delay
        value = partner_z.value if delay.parity is Parity.EVEN else partner_z.value.flipped()
        weight = min(comp.of(value) ** 2, 1.0)
        return PairOutcome(outcome1, SpinLabel(value, axis), delay.parity,
                           bool(u < weight), weight)

    if rule is OutcomeRule.BORN_PROJECTION:
        # partner resumes oscillating from its collapsed z label
        evolved = measure_z(OscillatingSpin(partner_z.value), delay.k)
        p_up = rotate_to_axis(evolved, axis).p_up
        value = Spin.UP if u < p_up else Spin.DOWN
        return PairOutcome(outcome1, SpinLabel(value, axis), delay.parity, True, 1.0)

    raise ValueError(f"unknown outcome rule {rule!r}")


@dataclass(frozen=True)
class TrialDraws:
    """Raw per-trial variates for one block, in draw order."""

    start1_up: np.ndarray
    first_tick: np.ndarray
    delay: np.ndarray
    u: np.ndarray


def draw_trials(rng: np.random.Generator, size: int, delay_policy: DelayPolicy) -> TrialDraws:
    start1_up = rng.integers(0, 2, size=size, dtype=np.int64).astype(bool)
    first_tick = draw_ticks(rng, size)
    delay = draw_ticks(rng, size, DelayPolicy(delay_policy).value)
    u = rng.random(size)
    return TrialDraws(start1_up, first_tick, delay, u)


def classify(draws: TrialDraws, axis: Axis, rule: OutcomeRule, first: int = 1):
    """Vectorized protocol.  Returns ``(z_up, phi_up, accepted)`` arrays.

    ``z_up`` belongs to the first-measured particle, ``phi_up`` to its partner.
    """
    cos2, sin2 = axis.half_angle_weights()
    start_first_up = draws.start1_up if first == 1 else ~draws.start1_up
    z_up = start_first_up ^ (draws.first_tick & 1).astype(bool)
    partner_up = ~z_up
    k_odd = (draws.delay & 1).astype(bool)
    evolved_up = partner_up ^ k_odd
    if rule is OutcomeRule.PAPER_ENSEMBLE:
        weight = np.where(k_odd, sin2, cos2)
        return z_up, evolved_up, draws.u < weight
    if rule is OutcomeRule.BORN_PROJECTION:
        p_up = np.where(evolved_up, cos2, sin2)
        return z_up, draws.u < p_up, np.ones_like(z_up)
    raise ValueError(f"unknown outcome rule {rule!r}")


def cell_counts(z_up: np.ndarray, phi_up: np.ndarray, accepted: np.ndarray) -> np.ndarray:
    """Counts over ``PAIR_CELLS`` for the accepted trials."""
    idx = 2 * (~z_up[accepted]).astype(np.int64) + (~phi_up[accepted]).astype(np.int64)
    return np.bincount(idx, minlength=4)


def singlet_kernel(axis: Axis, rule: OutcomeRule, delay_policy: DelayPolicy, first: int = 1):
    def kernel(rng, size):
        draws = draw_trials(rng, size, delay_policy)
        return cell_counts(*classify(draws, axis, rule, first))
    return kernel


def run_singlet_ensemble(trials: int, seed: int, axis: Axis | float = Z_AXIS,
                         rule: OutcomeRule = OutcomeRule.PAPER_ENSEMBLE,
                         delay_policy: DelayPolicy = DelayPolicy.UNIFORM, *,
                         first: int = 1, salt: int = 0, workers: int = 1,
                         experiment: str = "singlet") -> StatsSummary:
    """Joint outcome table for the sequential z / ``phi`` protocol.

    Cells are ``(z-side, phi-side)`` over accepted trials; the summary's
    ``total`` counts all trials so the rejection rate is visible.
    """
    from .oracle import qm_singlet_joint

    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if first not in (1, 2):
        raise ValueError(f"first must be 1 or 2, got {first}")
    axis = axis if isinstance(axis, Axis) else Axis(axis)
    rule = OutcomeRule(rule)
    delay_policy = DelayPolicy(delay_policy)
    counts = count_trials(singlet_kernel(axis, rule, delay_policy, first),
                          trials, seed, salt=salt, workers=workers)
    joint = qm_singlet_joint(axis)
    return StatsSummary.from_counts(
        experiment, PAIR_CELLS, counts, trials, angle=axis.phi, rule=rule.value,
        oracle=tuple(joint.probabilities[c] for c in PAIR_CELLS),
        meta={"delay_policy": delay_policy.value, "first_measured_particle": first},
    )
