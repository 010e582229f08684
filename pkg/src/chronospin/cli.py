"""Command-line front end.

    chronospin run CONFIG [--seed N] [--trials N] [--out DIR] [--formats csv,json,svg]
    chronospin sweep --kind singlet-angle-sweep --angles LIST
    chronospin chsh --angles a,a',b,b'
    chronospin trace --start down --ticks 8

Exit status: 0 on success, 1 on a configuration error, 2 on a runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import config_from_mapping, format_config, parse_config
from .harness import ConfigError, ExperimentConfig, ExperimentResult, run_experiment
from .plots import correlation_svg, oscillation_trace, trace_svg
from .spin import Spin

FORMATS = ("csv", "json", "svg")
CSV_HEADER = ("experiment", "angle", "cell", "count", "frequency", "stderr", "oracle", "z_score")


def fmt(x) -> str:
    """12 significant digits; blanks for missing values."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


def results_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in result.summaries:
        oracle = s.oracle or (None,) * len(s.cells)
        zs = s.z_scores or (None,) * len(s.cells)
        for cell, n, f, se, p, z in zip(s.cells, s.counts, s.frequencies, s.stderr, oracle, zs):
            w.writerow((s.experiment, fmt(s.angle), cell, n, fmt(f), fmt(se), fmt(p), fmt(z)))
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


@dataclass
class RunManifest:
    config_echo: str
    seed: int
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    outputs: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"tool": "chronospin", "version": self.version, "seed": self.seed,
                "timestamp": self.timestamp, "config_echo": self.config_echo,
                "outputs": self.outputs}


def _correlation_points(result: ExperimentResult):
    angles, es, ses = [], [], []
    for s in result.summaries:
        e, se = s.correlation()
        angles.append(s.angle)
        es.append(e)
        ses.append(se)
    return angles, es, ses


def emit_results(result: ExperimentResult, out_dir, formats=FORMATS,
                 manifest: RunManifest | None = None) -> RunManifest:
    """Write tables, the full JSON document, optional plots and ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = result.config
    if manifest is None:
        manifest = RunManifest(format_config(config), config.seed)
    stem = config.kind
    written: list[Path] = []

    def write(name: str, text: str):
        path = out / name
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)

    write("config.txt", manifest.config_echo)
    if "csv" in formats:
        write(f"{stem}.csv", results_csv(result))
    if "json" in formats:
        write(f"{stem}.json", json.dumps(_jsonable(result.as_dict()), indent=2) + "\n")
    if "svg" in formats:
        write("trace.svg", trace_svg(Spin.DOWN, 8))
        if config.kind != "single-spin":
            angles, es, ses = _correlation_points(result)
            if config.kind == "chsh":
                title = "CHSH pair correlations vs relative angle"
            else:
                title = f"Correlation vs angle ({config.rule.value})"
            write(f"{stem}_correlation.svg", correlation_svg(angles, es, ses, title))
    manifest.outputs = [str(p) for p in written] + [str(out / "manifest.json")]
    (out / "manifest.json").write_text(json.dumps(manifest.as_dict(), indent=2) + "\n",
                                       encoding="utf-8")
    return manifest


def _formats(text: str) -> tuple[str, ...]:
    items = tuple(t.strip().lower() for t in text.split(",") if t.strip())
    bad = [t for t in items if t not in FORMATS]
    if bad:
        raise ConfigError("formats", f"unknown format(s) {', '.join(bad)}")
    return items


def _print_summary(result: ExperimentResult, stream=None):
    stream = stream or sys.stdout
    for s in result.summaries:
        head = s.experiment if s.angle is None else f"{s.experiment} phi={s.angle:.6g}"
        print(f"{head}  trials={s.total} accepted={s.accepted}", file=stream)
        for cell, n, f, se in zip(s.cells, s.counts, s.frequencies, s.stderr):
            print(f"  {cell:<10} {n:>9d}  {f:.6f} ± {se:.6f}", file=stream)
    for r in result.reports:
        if r is not None and r.flagged:
            print(f"  oracle mismatch at phi={r.angle:.6g}: |z| > {r.threshold:g}", file=stream)
    if result.chsh is not None:
        c = result.chsh
        lo, hi = c.interval
        print(f"CHSH ({c.label}, {c.rule}): S = {c.s:.6f} ± {c.sigma:.6f} "
              f"[4σ: {lo:.6f}, {hi:.6f}]  QM: {c.qm_s:.6f}", file=stream)


def _execute(config: ExperimentConfig, args) -> int:
    formats = _formats(args.formats)
    result = run_experiment(config, workers=args.workers)
    _print_summary(result)
    manifest = emit_results(result, args.out, formats)
    print(f"wrote {len(manifest.outputs)} files to {args.out}")
    return 0


def cmd_run(args) -> int:
    overrides = {"seed": args.seed, "trials": args.trials}
    return _execute(parse_config(args.config, overrides), args)


def _flag_config(kind: str, args) -> ExperimentConfig:
    raw = {"kind": kind, "angles": args.angles, "rule": args.rule,
           "delay_policy": args.delay_policy, "seed": args.seed, "trials": args.trials,
           "first_measured_particle": args.first}
    return config_from_mapping({k: str(v) for k, v in raw.items() if v is not None})


def cmd_sweep(args) -> int:
    return _execute(_flag_config(args.kind, args), args)


def cmd_chsh(args) -> int:
    return _execute(_flag_config("chsh", args), args)


def cmd_trace(args) -> int:
    if args.ticks < 0:
        raise ConfigError("ticks", f"must be >= 0, got {args.ticks}")
    try:
        start = Spin.parse(args.start)
    except ValueError as exc:
        raise ConfigError("start", str(exc)) from None
    rows = oscillation_trace(start, args.ticks)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("tick", "p_down", "p_up"))
    for n, p_down, p_up in rows:
        w.writerow((n, fmt(p_down), fmt(p_up)))
    sys.stdout.write(buf.getvalue())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        formats = _formats(args.formats)
        if "csv" in formats:
            (out / "trace.csv").write_text(buf.getvalue(), encoding="utf-8")
        if "svg" in formats:
            (out / "trace.svg").write_text(trace_svg(start, args.ticks), encoding="utf-8")
    return 0


def _common(p: argparse.ArgumentParser, *, flags: bool):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default="results", help="output directory (default: results)")
    p.add_argument("--formats", default="csv,json,svg")
    p.add_argument("--workers", type=int, default=1,
                   help="threads for block sampling; results do not depend on it")
    if flags:
        p.add_argument("--rule", default=None, help="paper-ensemble | born-projection")
        p.add_argument("--delay-policy", default=None,
                       help="uniform-parity | fixed-even | fixed-odd")
        p.add_argument("--first", type=int, default=None, help="particle measured first (1|2)")


class _Parser(argparse.ArgumentParser):
    # malformed flags are validation errors: exit 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chronospin", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run an experiment file")
    p.add_argument("config")
    _common(p, flags=False)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="singlet correlation over a list of angles")
    p.add_argument("--kind", default="singlet-angle-sweep")
    p.add_argument("--angles", required=True, help="comma-separated, e.g. 0,30deg,pi/4")
    _common(p, flags=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chsh", help="CHSH combination (exploratory)")
    p.add_argument("--angles", required=True, help="a,a',b,b'")
    _common(p, flags=True)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("trace", help="oscillation trace at integer ticks")
    p.add_argument("--start", default="down")
    p.add_argument("--ticks", type=int, default=8)
    p.add_argument("--out", default=None)
    p.add_argument("--formats", default="csv,svg")
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version, malformed flags
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
