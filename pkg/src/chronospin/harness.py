"""Experiment orchestration on top of the spin and singlet ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import engine
from .oracle import qm_conditional, qm_correlation, qm_singlet_joint
from .singlet import (DelayPolicy, OutcomeRule, SingletPair, draw_trials,
                      measure_first_z, measure_second_at_angle, run_singlet_ensemble)
from .spin import (Axis, OscillatingSpin, Spin, Z_AXIS, draw_single_trials, measure_z,
                   run_single_spin_ensemble)
from .stats import PAIR_CELLS, StatsSummary, binomial_sigma, z_score
from .timebase import Delay, Parity, TimeStep

__all__ = [
    "KINDS",
    "ConfigError",
    "ExperimentConfig",
    "TrialRecord",
    "OracleReport",
    "ChshResult",
    "ExperimentResult",
    "run_experiment",
    "compare_to_oracle",
    "chsh",
    "iter_trial_records",
    "DEFAULT_ANGLE_GRID",
    "Z_THRESHOLD",
]

KINDS = ("single-spin", "singlet-zz", "singlet-angle-sweep", "chsh")
DEFAULT_TRIALS = 100_000
Z_THRESHOLD = 4.0
DEFAULT_ANGLE_GRID = (0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2,
                      2 * math.pi / 3, math.pi)
CHSH_LABEL = "exploratory"
CHSH_PAIR_NAMES = ("ab", "ab2", "a2b", "a2b2")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    angles: tuple[float, ...] = ()
    rule: OutcomeRule = OutcomeRule.PAPER_ENSEMBLE
    delay_policy: DelayPolicy = DelayPolicy.UNIFORM
    first_measured_particle: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}; got {self.kind!r}")
        for name in ("trials", "seed", "first_measured_particle"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(name, f"must be an integer, got {value!r}")
        if self.trials < 1:
            raise ConfigError("trials", f"must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError("seed", f"must be >= 0, got {self.seed}")
        if self.first_measured_particle not in (1, 2):
            raise ConfigError("first_measured_particle",
                              f"must be 1 or 2, got {self.first_measured_particle}")
        try:
            object.__setattr__(self, "rule", OutcomeRule(self.rule))
        except ValueError:
            raise ConfigError("rule", f"unknown rule {self.rule!r}") from None
        try:
            object.__setattr__(self, "delay_policy", DelayPolicy(self.delay_policy))
        except ValueError:
            raise ConfigError("delay_policy", f"unknown policy {self.delay_policy!r}") from None
        try:
            angles = tuple(float(a) for a in self.angles)
        except (TypeError, ValueError):
            raise ConfigError("angles", f"must be numbers, got {self.angles!r}") from None
        if not all(math.isfinite(a) for a in angles):
            raise ConfigError("angles", "must be finite")
        object.__setattr__(self, "angles", angles)

        if self.kind == "single-spin" and angles:
            raise ConfigError("angles", "not used by kind single-spin")
        if self.kind == "singlet-zz" and any(Axis(a).phi != 0.0 for a in angles):
            raise ConfigError("angles", "kind singlet-zz measures both particles along z")
        if self.kind == "singlet-angle-sweep" and not angles:
            raise ConfigError("angles", "kind singlet-angle-sweep needs at least one angle")
        if self.kind == "chsh" and len(angles) != 4:
            raise ConfigError("angles", f"kind chsh needs exactly 4 angles, got {len(angles)}")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "trials": int(self.trials),
            "seed": int(self.seed),
            "angles": list(self.angles),
            "rule": self.rule.value,
            "delay_policy": self.delay_policy.value,
            "first_measured_particle": int(self.first_measured_particle),
        }


@dataclass(frozen=True)
class TrialRecord:
    """One realized run.  Pair fields are ``None`` for single-spin runs."""

    index: int
    start: Spin
    first_parity: Parity
    outcome1: str
    outcome2: str | None = None
    delay_parity: Parity | None = None
    accepted: bool = True
    weight: float = 1.0
    angle: float | None = None


@dataclass(frozen=True)
class CellCheck:
    cell: str
    observed: float
    expected: float
    n: int
    z: float

    @property
    def deviation(self) -> float:
        return self.observed - self.expected

    @property
    def sigma(self) -> float:
        return binomial_sigma(self.expected, self.n)

    def flagged(self, threshold: float = Z_THRESHOLD) -> bool:
        return abs(self.z) > threshold


@dataclass(frozen=True)
class OracleReport:
    """Per-cell and derived comparisons of a singlet table with the oracle."""

    angle: float
    rule: str | None
    cells: tuple[CellCheck, ...]
    conditional: CellCheck
    correlation: tuple[float, float, float, float]  # observed, expected, sigma, z
    threshold: float = Z_THRESHOLD

    @property
    def flagged_cells(self) -> tuple[str, ...]:
        return tuple(c.cell for c in self.cells if c.flagged(self.threshold))

    @property
    def conditional_flagged(self) -> bool:
        return self.conditional.flagged(self.threshold)

    @property
    def correlation_flagged(self) -> bool:
        return abs(self.correlation[3]) > self.threshold

    @property
    def flagged(self) -> bool:
        return bool(self.flagged_cells) or self.conditional_flagged or self.correlation_flagged

    def as_dict(self) -> dict:
        return {
            "angle": self.angle,
            "rule": self.rule,
            "threshold": self.threshold,
            "cells": [{"cell": c.cell, "observed": c.observed, "expected": c.expected,
                       "deviation": c.deviation, "sigma": c.sigma, "z": c.z,
                       "flagged": c.flagged(self.threshold)} for c in self.cells],
            "conditional_up_given_down": {
                "observed": self.conditional.observed, "expected": self.conditional.expected,
                "n": self.conditional.n, "z": self.conditional.z,
                "flagged": self.conditional_flagged},
            "correlation": dict(zip(("observed", "expected", "sigma", "z"), self.correlation),
                                flagged=self.correlation_flagged),
            "flagged": self.flagged,
        }


def compare_to_oracle(summary: StatsSummary, phi, threshold: float = Z_THRESHOLD
                      ) -> OracleReport:
    """Check a singlet table against the closed-form joint distribution.

    Cell z-scores use the oracle's binomial sigma at the accepted count.  The
    conditional P(up along phi | down along z) and the correlation
    ``P(same) - P(opposite)`` are checked alongside.
    """
    if summary.cells != PAIR_CELLS or summary.angle is None:
        raise ValueError("compare_to_oracle needs a singlet summary")
    axis = phi if isinstance(phi, Axis) else Axis(phi)
    if abs(axis.phi - summary.angle) > 1e-12:
        raise ValueError(f"axis mismatch: summary at {summary.angle!r}, oracle at {axis.phi!r}")
    if summary.accepted == 0:
        raise ValueError("summary has no accepted trials")

    joint = qm_singlet_joint(axis)
    n = summary.accepted
    cells = tuple(CellCheck(c, f, joint[c], n, z_score(f, joint[c], n))
                  for c, f in zip(summary.cells, summary.frequencies))

    cond_obs, cond_n = summary.conditional("down", "up")
    cond_exp = qm_conditional(axis, "down", "up")
    cond_z = z_score(cond_obs, cond_exp, cond_n) if cond_n else math.inf
    conditional = CellCheck("up|down", cond_obs, cond_exp, cond_n, cond_z)

    e_obs, _ = summary.correlation()
    e_exp = qm_correlation(axis)
    e_sigma = math.sqrt(max(1.0 - e_exp * e_exp, 0.0) / n)
    e_dev = e_obs - e_exp
    if e_sigma == 0.0:
        e_z = 0.0 if abs(e_dev) <= 1e-12 else math.copysign(math.inf, e_dev)
    else:
        e_z = e_dev / e_sigma
    return OracleReport(axis.phi, summary.rule, cells, conditional,
                        (e_obs, e_exp, e_sigma, e_z), threshold)


@dataclass(frozen=True)
class ChshResult:
    settings: tuple[float, float, float, float]
    rule: str
    correlations: tuple[float, float, float, float]
    stderrs: tuple[float, float, float, float]
    s: float
    sigma: float
    qm_s: float
    summaries: tuple[StatsSummary, ...] = field(repr=False, default=())
    label: str = CHSH_LABEL

    @property
    def interval(self) -> tuple[float, float]:
        return self.s - Z_THRESHOLD * self.sigma, self.s + Z_THRESHOLD * self.sigma

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "settings": list(self.settings),
            "rule": self.rule,
            "pairs": list(CHSH_PAIR_NAMES),
            "correlations": list(self.correlations),
            "stderrs": list(self.stderrs),
            "S": self.s,
            "sigma": self.sigma,
            "interval": list(self.interval),
            "qm_S": self.qm_s,
        }


def _chsh_pairs(settings):
    a, a2, b, b2 = settings
    return ((a, b), (a, b2), (a2, b), (a2, b2))


def chsh(config: ExperimentConfig, *, workers: int = 1) -> ChshResult:
    """CHSH combination ``E(a,b) - E(a,b') + E(a',b) + E(a',b')``.

    Each correlation comes from its own singlet run with particle 1 read
    along the first setting and particle 2 along the second.  The model only
    reads the first particle along z, so a pair of settings is realized by
    its relative angle ``second - first``.  The four runs use separate
    random streams, so the variances add.
    """
    if len(config.angles) != 4:
        raise ConfigError("angles", f"chsh needs exactly 4 angles, got {len(config.angles)}")
    summaries, es, ses, qm = [], [], [], []
    for i, (x, y) in enumerate(_chsh_pairs(config.angles)):
        axis = Axis(y - x)
        summary = run_singlet_ensemble(
            config.trials, config.seed, axis, config.rule, config.delay_policy,
            first=config.first_measured_particle, salt=i, workers=workers,
            experiment=f"chsh-{CHSH_PAIR_NAMES[i]}")
        e, se = summary.correlation()
        summaries.append(summary)
        es.append(e)
        ses.append(se)
        qm.append(qm_correlation(axis))
    signs = (1, -1, 1, 1)
    s = sum(k * e for k, e in zip(signs, es))
    sigma = math.sqrt(sum(se * se for se in ses))
    return ChshResult(tuple(config.angles), config.rule.value, tuple(es), tuple(ses), s, sigma,
                      sum(k * e for k, e in zip(signs, qm)), tuple(summaries))


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    summaries: list[StatsSummary]
    reports: list[OracleReport | None]
    chsh: ChshResult | None = None
    records: list[TrialRecord] | None = None

    def as_dict(self) -> dict:
        out = {
            "config": self.config.as_dict(),
            "tables": [],
        }
        for summary, report in zip(self.summaries, self.reports):
            table = {
                "experiment": summary.experiment,
                "angle": summary.angle,
                "rule": summary.rule,
                "total": summary.total,
                "accepted": summary.accepted,
                "acceptance_rate": summary.acceptance_rate,
                "cells": {c: {"count": n, "frequency": f, "stderr": se,
                              "oracle": None if summary.oracle is None else summary.oracle[i],
                              "z": None if summary.z_scores is None else summary.z_scores[i]}
                          for i, (c, n, f, se) in enumerate(zip(
                              summary.cells, summary.counts, summary.frequencies,
                              summary.stderr))},
            }
            if summary.meta:
                table.update(summary.meta)
            if report is not None:
                table["oracle_report"] = report.as_dict()
            out["tables"].append(table)
        if self.chsh is not None:
            out["chsh"] = self.chsh.as_dict()
        return out


def run_experiment(config: ExperimentConfig, *, workers: int = 1,
                   records: bool = False) -> ExperimentResult:
    """Run ``config`` and return its tables, oracle reports and, optionally, trials.

    Output depends only on ``config`` (including its seed), never on
    ``workers``.
    """
    if config.kind == "single-spin":
        summaries = [run_single_spin_ensemble(config.trials, config.seed, workers=workers)]
        reports = [None]
        result = ExperimentResult(config, summaries, reports)
    elif config.kind == "singlet-zz":
        # both particles read along z at the same tick: zero delay
        summary = run_singlet_ensemble(
            config.trials, config.seed, Z_AXIS, config.rule, DelayPolicy.EVEN,
            first=config.first_measured_particle, workers=workers, experiment="singlet-zz")
        result = ExperimentResult(config, [summary], [compare_to_oracle(summary, Z_AXIS)])
    elif config.kind == "singlet-angle-sweep":
        summaries, reports = [], []
        for i, phi in enumerate(config.angles):
            summary = run_singlet_ensemble(
                config.trials, config.seed, Axis(phi), config.rule, config.delay_policy,
                first=config.first_measured_particle, salt=i, workers=workers,
                experiment="singlet-angle-sweep")
            summaries.append(summary)
            reports.append(compare_to_oracle(summary, phi))
        result = ExperimentResult(config, summaries, reports)
    else:
        res = chsh(config, workers=workers)
        result = ExperimentResult(config, list(res.summaries),
                                  [compare_to_oracle(s, s.angle) for s in res.summaries], res)
    if records:
        result.records = list(iter_trial_records(config))
    return result


class _Fixed:
    """Stand-in generator that replays one pre-drawn uniform."""

    def __init__(self, u: float):
        self.u = float(u)

    def random(self) -> float:
        return self.u


def _singlet_settings(config: ExperimentConfig) -> list[tuple[int, Axis, DelayPolicy]]:
    if config.kind == "singlet-zz":
        return [(0, Z_AXIS, DelayPolicy.EVEN)]
    if config.kind == "singlet-angle-sweep":
        return [(i, Axis(phi), config.delay_policy) for i, phi in enumerate(config.angles)]
    return [(i, Axis(y - x), config.delay_policy)
            for i, (x, y) in enumerate(_chsh_pairs(config.angles))]


def iter_trial_records(config: ExperimentConfig) -> Iterator[TrialRecord]:
    """Per-trial records, replaying the ensemble's random draws one trial at a time.

    Uses the scalar measurement functions rather than the vectorized kernels,
    so aggregating these records is an independent check on the tables.
    """
    if config.kind == "single-spin":
        for lo, rng, size in engine.iter_blocks(config.trials, config.seed):
            start_up, ticks = draw_single_trials(rng, size)
            for j in range(size):
                start = Spin.UP if start_up[j] else Spin.DOWN
                n = TimeStep(int(ticks[j]))
                yield TrialRecord(lo + j, start, n.parity,
                                  measure_z(OscillatingSpin(start), n).value.value)
        return

    first = config.first_measured_particle
    for salt, axis, policy in _singlet_settings(config):
        for lo, rng, size in engine.iter_blocks(config.trials, config.seed, salt):
            draws = draw_trials(rng, size, policy)
            for j in range(size):
                start = Spin.UP if draws.start1_up[j] else Spin.DOWN
                pair = SingletPair.from_start(start)
                n = TimeStep(int(draws.first_tick[j]))
                _, partner = measure_first_z(pair, n, first=first)
                out = measure_second_at_angle(partner, axis, Delay(int(draws.delay[j])),
                                              config.rule, _Fixed(draws.u[j]))
                z_side, phi_side = out.outcome1.value.value, out.outcome2.value.value
                o1, o2 = (z_side, phi_side) if first == 1 else (phi_side, z_side)
                yield TrialRecord(salt * config.trials + lo + j, start, n.parity, o1, o2, out.delay_parity,
                                  out.accepted, out.weight, axis.phi)
