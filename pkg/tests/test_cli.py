import csv
import io
import json
import math
from pathlib import Path

import pytest
from hypothesis import given, strategies as st
import xml.etree.ElementTree as ET

from chronospin import cli
from chronospin.config import format_config, parse_angle, parse_config, parse_config_text
from chronospin.harness import ConfigError, ExperimentConfig, KINDS
from chronospin.plots import oscillation_trace
from chronospin.spin import Spin


def test_minimal_file_gets_defaults(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# single spin\nkind = single-spin\n")
    c = parse_config(path)
    assert c == ExperimentConfig("single-spin")
    assert c.trials == 100_000 and c.rule.value == "paper-ensemble"


@pytest.mark.parametrize("token, expected", [
    ("60deg", math.pi / 3),
    ("90 deg", math.pi / 2),
    ("1.5rad", 1.5),
    ("0.25", 0.25),
    ("pi/3", math.pi / 3),
    ("2pi/3", 2 * math.pi / 3),
    ("3*pi/4", 3 * math.pi / 4),
    ("pi", math.pi),
    ("-pi/2", -math.pi / 2),
])
def test_angle_units(token, expected):
    assert parse_angle(token) == pytest.approx(expected, rel=1e-15)


def test_angles_list():
    c = parse_config_text("kind = singlet-angle-sweep\nangles = 0, 30deg, pi/2\n")
    assert c.angles == pytest.approx((0.0, math.pi / 6, math.pi / 2))


@pytest.mark.parametrize("text, field", [
    ("kind = single-spin\ntrials = 0\n", "trials"),
    ("kind = single-spin\ncolour = red\n", "colour"),
    ("trials = 10\n", "kind"),
    ("kind = single-spin\ntrials = many\n", "trials"),
    ("kind = singlet-angle-sweep\nangles = 0, abc\n", "angles"),
    ("kind = single-spin\nkind = chsh\n", "kind"),
])
def test_validation_errors_name_key(text, field):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert err.value.field == field


def test_overrides_win():
    c = parse_config_text("kind = single-spin\nseed = 1\n", {"seed": 9, "trials": None})
    assert c.seed == 9 and c.trials == 100_000


configs = st.builds(
    lambda kind, trials, seed, angles, rule, policy, first: ExperimentConfig(
        kind, trials, seed,
        {"single-spin": (), "singlet-zz": (), "singlet-angle-sweep": angles or (0.1,),
         "chsh": (angles + (0.0,) * 4)[:4]}[kind],
        rule, policy, first),
    st.sampled_from(KINDS), st.integers(1, 10**7), st.integers(0, 2**63),
    st.lists(st.floats(-10, 10, allow_nan=False), max_size=6).map(tuple),
    st.sampled_from(["paper-ensemble", "born-projection"]),
    st.sampled_from(["uniform-parity", "fixed-even", "fixed-odd"]),
    st.sampled_from([1, 2]),
)


@given(configs)
def test_config_echo_round_trips(config):
    assert parse_config_text(format_config(config)) == config


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_sweep_table_and_plot(tmp_path):
    out = tmp_path / "sweep"
    code = cli.main(["sweep", "--angles", "0,pi/6,pi/4,pi/3,pi/2,2pi/3,pi", "--trials", "5000",
                     "--out", str(out)])
    assert code == 0
    rows = _rows(out / "singlet-angle-sweep.csv")
    assert rows[0] == list(cli.CSV_HEADER)
    assert len(rows) == 1 + 7 * 4
    ET.parse(out / "singlet-angle-sweep_correlation.svg")
    ET.parse(out / "trace.svg")
    manifest = json.loads((out / "manifest.json").read_text())
    for name in manifest["outputs"]:
        assert Path(name).exists()
    assert parse_config_text(manifest["config_echo"]) == parse_config(out / "config.txt")


def test_single_spin_two_rows(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("kind = single-spin\ntrials = 1000\n")
    assert cli.main(["run", str(cfg), "--out", str(tmp_path / "o"), "--formats", "csv"]) == 0
    rows = _rows(tmp_path / "o" / "single-spin.csv")
    assert [r[2] for r in rows[1:]] == ["up", "down"]


def test_csv_number_format(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("kind = singlet-angle-sweep\nangles = 1\ntrials = 777\nseed = 5\n")
    cli.main(["run", str(cfg), "--out", str(tmp_path / "o"), "--formats", "csv"])
    rows = _rows(tmp_path / "o" / "singlet-angle-sweep.csv")
    for r in rows[1:]:
        for field in r[4:]:
            digits = field.lstrip("-").replace(".", "").split("e")[0].lstrip("0")
            assert len(digits) <= 12


def test_chsh_command(tmp_path, capsys):
    code = cli.main(["chsh", "--angles", "0,pi/2,pi/4,3pi/4", "--trials", "4000",
                     "--out", str(tmp_path), "--formats", "json"])
    assert code == 0
    doc = json.loads((tmp_path / "chsh.json").read_text())
    assert doc["chsh"]["label"] == "exploratory"
    assert "CHSH (exploratory" in capsys.readouterr().out


def test_trace_command(capsys, tmp_path):
    assert cli.main(["trace", "--start", "down", "--ticks", "8", "--out", str(tmp_path)]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["tick", "p_down", "p_up"]
    assert [(int(r[0]), float(r[1])) for r in rows[1:6]] == [(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]
    assert len(rows) == 10
    ET.parse(tmp_path / "trace.svg")


def test_trace_up_start():
    assert [r[2] for r in oscillation_trace(Spin.UP, 3)] == [1.0, 0.0, 1.0, 0.0]


@pytest.mark.parametrize("argv", [
    ["sweep", "--angles", "0", "--trials", "0"],
    ["chsh", "--angles", "0,1"],
    ["run", "/does/not/exist.cfg"],
    ["trace", "--start", "sideways"],
    ["sweep", "--angles", "0", "--trials", "ten"],
    ["sweep", "--angles", "0", "--formats", "pdf"],
])
def test_validation_exit_code(argv, capsys):
    assert cli.main(argv) == 1
    err = capsys.readouterr().err
    assert "error" in err


def test_runtime_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = cli.main(["sweep", "--angles", "0", "--trials", "100", "--out", str(blocker / "sub")])
    assert code == 2


def test_csv_golden_stability(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("kind = singlet-angle-sweep\nangles = 0, 1, 2\ntrials = 20000\nseed = 8\n")
    for name in ("a", "b"):
        cli.main(["run", str(cfg), "--out", str(tmp_path / name), "--formats", "csv"])
    a = (tmp_path / "a" / "singlet-angle-sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "singlet-angle-sweep.csv").read_bytes()
