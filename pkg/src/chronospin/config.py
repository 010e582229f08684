"""Flat ``key = value`` experiment files.

One key per line, ``#`` starts a comment, lists are comma-separated.  Angles
accept a ``deg`` or ``rad`` suffix (default radians) and simple multiples of
``pi`` such as ``pi/3``, ``2pi/3`` or ``3*pi/4``::

    kind = singlet-angle-sweep
    angles = 0, 30deg, pi/4, 1.0471975511965976
    rule = paper-ensemble
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .harness import ConfigError, ExperimentConfig

KEYS = ("kind", "trials", "seed", "angles", "rule", "delay_policy", "first_measured_particle")
REQUIRED = ("kind",)

_PI_RE = re.compile(r"^([+-]?\d*\.?\d*)\s*\*?\s*pi(?:\s*/\s*(\d*\.?\d+))?$")
_UNIT_RE = re.compile(r"^(.*?)\s*(deg|rad)$")


def parse_angle(token: str, key: str = "angles") -> float:
    text = token.strip().lower()
    if not text:
        raise ConfigError(key, "empty angle")
    unit = "rad"
    m = _UNIT_RE.match(text)
    if m:
        text, unit = m.group(1).strip(), m.group(2)
    m = _PI_RE.match(text)
    try:
        if m:
            coef = m.group(1)
            coef = float(coef) if coef not in ("", "+", "-") else float(coef + "1")
            value = coef * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        else:
            value = float(text)
    except ValueError:
        raise ConfigError(key, f"cannot read angle {token!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, f"angle must be finite, got {token!r}")
    return math.radians(value) if unit == "deg" else value


def parse_angles(text: str, key: str = "angles") -> tuple[float, ...]:
    items = [t for t in text.split(",") if t.strip()]
    return tuple(parse_angle(t, key) for t in items)


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text.strip().replace("_", ""))
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


def config_from_mapping(raw: dict[str, str]) -> ExperimentConfig:
    """Validate string values into an :class:`ExperimentConfig`, applying defaults."""
    for key in raw:
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
    for key in REQUIRED:
        if key not in raw or not str(raw[key]).strip():
            raise ConfigError(key, "missing required key")
    kw = {"kind": raw["kind"].strip()}
    for key in ("trials", "seed", "first_measured_particle"):
        if key in raw:
            kw[key] = _parse_int(key, raw[key])
    if "angles" in raw:
        kw["angles"] = parse_angles(raw["angles"])
    for key in ("rule", "delay_policy"):
        if key in raw:
            kw[key] = raw[key].strip()
    return ExperimentConfig(**kw)


def parse_config_text(text: str, overrides: dict | None = None) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key in raw:
            raise ConfigError(key, f"duplicate key on line {lineno}")
        raw[key] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = str(value)
    return config_from_mapping(raw)


def parse_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read and validate a config file; ``overrides`` (e.g. CLI flags) win."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}") from None
    return parse_config_text(text, overrides)


def format_config(config: ExperimentConfig) -> str:
    """Config echo that :func:`parse_config_text` reads back to an equal config."""
    lines = [
        f"kind = {config.kind}",
        f"trials = {config.trials}",
        f"seed = {config.seed}",
    ]
    if config.angles:
        lines.append("angles = " + ", ".join(repr(a) for a in config.angles))
    lines += [
        f"rule = {config.rule.value}",
        f"delay_policy = {config.delay_policy.value}",
        f"first_measured_particle = {config.first_measured_particle}",
    ]
    return "\n".join(lines) + "\n"
