"""Discrete-time oscillating-spin simulator with a standard quantum mechanics oracle."""

from .harness import (ConfigError, ExperimentConfig, ExperimentResult, chsh,
                      compare_to_oracle, iter_trial_records, run_experiment)
from .oracle import qm_correlation, qm_single_spin, qm_singlet_joint
from .singlet import (DelayPolicy, OutcomeRule, SingletPair, measure_first_z,
                      measure_second_at_angle, pair_amplitudes, run_singlet_ensemble)
from .spin import (Amplitudes, Axis, OscillatingSpin, Spin, SpinLabel, amplitudes_at,
                   cross_term, measure_z, rotate_to_axis, run_single_spin_ensemble)
from .stats import StatsSummary
from .timebase import Delay, Parity, TimeStep, parity, phase

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ExperimentConfig", "ExperimentResult", "chsh", "compare_to_oracle",
    "iter_trial_records", "run_experiment",
    "qm_correlation", "qm_single_spin", "qm_singlet_joint",
    "DelayPolicy", "OutcomeRule", "SingletPair", "measure_first_z", "measure_second_at_angle",
    "pair_amplitudes", "run_singlet_ensemble",
    "Amplitudes", "Axis", "OscillatingSpin", "Spin", "SpinLabel", "amplitudes_at", "cross_term",
    "measure_z", "rotate_to_axis", "run_single_spin_ensemble",
    "StatsSummary",
    "Delay", "Parity", "TimeStep", "parity", "phase",
]
