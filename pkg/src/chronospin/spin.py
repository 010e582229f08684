"""Single spin-1/2 carrier that oscillates between its z eigenstates.

Instead of a static superposition, the carrier swings harmonically from its
start label to the opposite label and back with a period of four ticks.  A
measurement at an integer tick therefore always finds a definite label,
fixed by the parity of the elapsed tick count.

Amplitudes are stored unit-normalized; the 1/2 weights that appear in the
ensemble averages are applied by the sampling code, not folded into the
per-carrier amplitudes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .engine import count_trials, draw_ticks
from .stats import SINGLE_CELLS, StatsSummary
from .timebase import Parity, TimeStep

__all__ = [
    "Spin",
    "Axis",
    "Z_AXIS",
    "SpinLabel",
    "Amplitudes",
    "OscillatingSpin",
    "amplitudes_at",
    "amplitudes_at_time",
    "measure_z",
    "measured_value",
    "rotate_to_axis",
    "cross_term",
    "draw_single_trials",
    "run_single_spin_ensemble",
]

TWO_PI = 2 * math.pi
NORM_TOL = 1e-12

# (cos, sin) of phase(n) indexed by n mod 4, exact
_COS_SIN = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


class Spin(enum.Enum):
    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> int:
        return 1 if self is Spin.UP else -1

    def flipped(self) -> "Spin":
        return Spin.DOWN if self is Spin.UP else Spin.UP

    @classmethod
    def parse(cls, text: str) -> "Spin":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"spin label must be 'up' or 'down', got {text!r}") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Axis:
    """Measurement axis at angle ``phi`` (radians) from z, kept in [0, 2*pi)."""

    phi: float = 0.0

    def __post_init__(self):
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValueError(f"axis angle must be finite, got {self.phi!r}")
        phi = math.fmod(phi, TWO_PI)
        if phi < 0:
            phi += TWO_PI
        if phi >= TWO_PI:  # fmod of a tiny negative can round up to 2*pi
            phi = 0.0
        object.__setattr__(self, "phi", phi)

    @property
    def is_z(self) -> bool:
        return self.phi == 0.0

    def half_angle_weights(self) -> tuple[float, float]:
        """Return ``(cos^2(phi/2), sin^2(phi/2))``."""
        c = math.cos(self.phi / 2)
        s = math.sin(self.phi / 2)
        return c * c, s * s


Z_AXIS = Axis(0.0)


@dataclass(frozen=True)
class SpinLabel:
    value: Spin
    axis: Axis = Z_AXIS

    def flipped(self) -> "SpinLabel":
        return SpinLabel(self.value.flipped(), self.axis)

    def __str__(self) -> str:
        if self.axis.is_z:
            return f"{self.value}(z)"
        return f"{self.value}({self.axis.phi:.6g})"


@dataclass(frozen=True)
class Amplitudes:
    """Real coefficients on the down and up states of some basis."""

    a_down: float
    a_up: float

    @property
    def p_down(self) -> float:
        return self.a_down * self.a_down

    @property
    def p_up(self) -> float:
        return self.a_up * self.a_up

    @property
    def norm(self) -> float:
        return self.p_down + self.p_up

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def of(self, value: Spin) -> float:
        return self.a_up if value is Spin.UP else self.a_down


@dataclass(frozen=True)
class OscillatingSpin:
    """Carrier that equals ``start_label`` at ``reference_tick``."""

    start_label: Spin
    reference_tick: TimeStep = TimeStep(0)

    def __post_init__(self):
        if isinstance(self.start_label, SpinLabel):
            if not self.start_label.axis.is_z:
                raise ValueError("oscillating carriers start from a z label")
            object.__setattr__(self, "start_label", self.start_label.value)
        if not isinstance(self.start_label, Spin):
            raise TypeError(f"start_label must be a Spin, got {self.start_label!r}")
        if not isinstance(self.reference_tick, TimeStep):
            object.__setattr__(self, "reference_tick", TimeStep(self.reference_tick))

    def elapsed(self, n: TimeStep | int) -> int:
        tick = n.n if isinstance(n, TimeStep) else int(n)
        k = tick - self.reference_tick.n
        if k < 0:
            raise ValueError(
                f"tick {tick} precedes the carrier's reference tick {self.reference_tick.n}"
            )
        return k


def _orient(start: Spin, cos_t: float, sin_t: float) -> Amplitudes:
    # a down-start carrier holds cos on |down>, an up-start one holds cos on |up>
    if start is Spin.DOWN:
        return Amplitudes(a_down=cos_t, a_up=sin_t)
    return Amplitudes(a_down=sin_t, a_up=cos_t)


def amplitudes_at(spin: OscillatingSpin, n: TimeStep | int) -> Amplitudes:
    """z-basis amplitudes of ``spin`` at integer tick ``n`` (exact values)."""
    cos_t, sin_t = _COS_SIN[spin.elapsed(n) % 4]
    return _orient(spin.start_label, cos_t, sin_t)


def amplitudes_at_time(spin: OscillatingSpin, t: float) -> Amplitudes:
    """Amplitudes at a continuous time ``t`` measured in ticks.

    Off-grid values are legal for the quantum-mechanical time; only
    integer ticks are observable.
    """
    dt = float(t) - spin.reference_tick.n
    if dt < 0:
        raise ValueError(f"time {t} precedes the carrier's reference tick")
    theta = math.pi * dt / 2
    return _orient(spin.start_label, math.cos(theta), math.sin(theta))


def measure_z(spin: OscillatingSpin, n: TimeStep | int) -> SpinLabel:
    """Read the carrier along z at tick ``n``.

    At an integer tick exactly one z amplitude is non-zero, so the outcome is
    deterministic: the start label after an even number of ticks, the
    opposite label after an odd number.
    """
    amps = amplitudes_at(spin, n)
    value = Spin.UP if amps.p_up == 1.0 else Spin.DOWN
    return SpinLabel(value, Z_AXIS)


def measured_value(start: Spin, elapsed_parity: Parity) -> Spin:
    return start if elapsed_parity is Parity.EVEN else start.flipped()


def rotate_to_axis(label: SpinLabel | Spin, target: Axis) -> Amplitudes:
    """Expand a z eigenstate in the basis of ``target``.

    ``|down>_z = sin(phi/2)|up>_phi + cos(phi/2)|down>_phi`` and
    ``|up>_z = cos(phi/2)|up>_phi + sin(phi/2)|down>_phi``; signs are
    irrelevant because only squared magnitudes are observed.
    """
    if isinstance(label, SpinLabel):
        if not label.axis.is_z:
            raise ValueError("rotate_to_axis expects a z-axis label")
        value = label.value
    else:
        value = label
    c = math.cos(target.phi / 2)
    s = math.sin(target.phi / 2)
    if value is Spin.DOWN:
        return Amplitudes(a_down=c, a_up=s)
    return Amplitudes(a_down=s, a_up=c)


def cross_term(n_elapsed) -> float:
    """``sin(theta) * cos(theta)`` at elapsed time ``n_elapsed`` (ticks).

    Integer arguments give an exact 0.0.  Floats are treated as continuous
    time and evaluate ``sin(pi * t) / 2``.
    """
    if isinstance(n_elapsed, TimeStep):
        n_elapsed = n_elapsed.n
    if isinstance(n_elapsed, (int, np.integer)) and not isinstance(n_elapsed, bool):
        cos_t, sin_t = _COS_SIN[int(n_elapsed) % 4]
        return sin_t * cos_t + 0.0  # no signed zeros
    return 0.5 * math.sin(math.pi * float(n_elapsed))


def draw_single_trials(rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Start-label bits (1 = up) and elapsed ticks for ``size`` trials."""
    start_up = rng.integers(0, 2, size=size, dtype=np.int64)
    return start_up, draw_ticks(rng, size)


def _single_spin_kernel(start: Spin | None):
    def kernel(rng, size):
        start_up, n = draw_single_trials(rng, size)
        if start is not None:
            start_up[:] = start is Spin.UP
        up = start_up ^ (n & 1)
        n_up = int(up.sum())
        return n_up, size - n_up
    return kernel


def run_single_spin_ensemble(trials: int, seed: int, *, start: Spin | None = None,
                             workers: int = 1) -> StatsSummary:
    """Monte Carlo over randomized start labels and measurement ticks.

    Each trial draws a start label (unless ``start`` pins it) and an elapsed
    tick count; only the tick parity matters for the outcome.  Cells are
    ``up`` and ``down``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    counts = count_trials(_single_spin_kernel(start), trials, seed, workers=workers)
    experiment = "single-spin" if start is None else f"single-spin|start={start}"
    return StatsSummary.from_counts(experiment, SINGLE_CELLS, counts, trials,
                                    oracle=(0.5, 0.5))
