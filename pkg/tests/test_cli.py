import json
import os
import subprocess
import sys

from epdisc.cli import EXIT_COMPUTE, EXIT_NOINPUT, EXIT_OK, EXIT_USAGE, main
from epdisc.report import read_json


def test_usage_errors_exit_64(capsys):
    bad = [
        [],
        ["scan"],
        ["scan", "--model", "mathieu", "--n-min", "4", "--n-max", "6"],
        ["scan", "--model", "box-x2", "--n-min", "4", "--n-max", "6"],
        ["scan", "--model", "box-x"],
        ["scan", "--model", "box-x", "--n-min", "1", "--n-max", "5"],
        ["scan", "--model", "box-x", "--n-min", "5", "--n-max", "5"],
        ["scan", "--model", "box-x", "--n-min", "4", "--n-max", "6",
         "--precision", "8"],
    ]
    for argv in bad:
        assert main(argv) == EXIT_USAGE, argv
        capsys.readouterr()


def test_unknown_flag_exits_64(capsys):
    try:
        main(["scan", "--bogus"])
        assert False
    except SystemExit as exc:
        assert exc.code == EXIT_USAGE
    capsys.readouterr()


def test_missing_files_exit_66(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert main(["scan", "--model", "toy3", "--config", missing]) == EXIT_NOINPUT
    assert main(["figure", "--report", missing]) == EXIT_NOINPUT
    capsys.readouterr()


def test_malformed_config_exits_64(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text("not json at all {")
    assert main(["scan", "--model", "toy3", "--config", str(p)]) == EXIT_USAGE
    p.write_text("[1, 2, 3]")
    assert main(["scan", "--model", "toy3", "--config", str(p)]) == EXIT_USAGE
    p.write_text('{"no-such-key": 5}')
    assert main(["scan", "--model", "toy3", "--config", str(p)]) == EXIT_USAGE
    capsys.readouterr()


def test_scan_writes_json_and_csv(tmp_path, capsys):
    base = str(tmp_path / "toy")
    assert main(["scan", "--model", "toy3", "--out", base,
                 "--format", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "toy3: dims 3..3, 2 accepted, 0 rejected" in out
    rep = read_json(base + ".json")
    assert len(rep.accepted) == 2
    lines = (tmp_path / "toy.csv").read_text().splitlines()
    assert len(lines) == 3 and lines[0].startswith("model,")


def test_out_extension_is_stripped(tmp_path, capsys):
    target = tmp_path / "x.json"
    assert main(["scan", "--model", "toy3", "--out", str(target)]) == EXIT_OK
    capsys.readouterr()
    assert target.exists()
    assert not (tmp_path / "x.json.json").exists()


def test_config_provides_defaults_flags_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    base = str(tmp_path / "boxscan")
    cfg.write_text(json.dumps({
        "model": "box-x", "n-min": 4, "n-max": 6, "out": base,
    }))
    assert main(["scan", "--config", str(cfg), "--n-max", "5"]) == EXIT_OK
    capsys.readouterr()
    rep = read_json(base + ".json")
    assert rep.model.kind == "BoxX"
    assert rep.dims == (4, 5)


def test_rotor_class_flags(tmp_path, capsys):
    base = str(tmp_path / "rot")
    assert main(["scan", "--model", "rotor", "--M", "1", "--n-min", "4",
                 "--n-max", "6", "--out", base]) == EXIT_OK
    capsys.readouterr()
    assert read_json(base + ".json").model == \
        read_json(base + ".json").model.__class__(kind="RigidRotor", M=1)


def test_figure_from_saved_reports(tmp_path, capsys):
    b1 = str(tmp_path / "m0")
    b2 = str(tmp_path / "m1")
    assert main(["scan", "--model", "rotor", "--M", "0", "--n-min", "4",
                 "--n-max", "6", "--out", b1]) == EXIT_OK
    assert main(["scan", "--model", "rotor", "--M", "1", "--n-min", "4",
                 "--n-max", "6", "--out", b2]) == EXIT_OK
    fig = str(tmp_path / "fig")
    assert main(["figure", "--report", b1 + ".json", "--report", b2 + ".json",
                 "--out", fig]) == EXIT_OK
    out = capsys.readouterr().out
    assert "2 series" in out
    assert (tmp_path / "fig.csv").exists()
    assert (tmp_path / "fig.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_figure_inline_scan(tmp_path, capsys):
    fig = str(tmp_path / "inline")
    assert main(["figure", "--model", "toy3", "--out", fig]) == EXIT_OK
    capsys.readouterr()
    assert (tmp_path / "inline.csv").exists()
    assert (tmp_path / "inline.png").exists()


def test_toy_prints_exact_artifacts(capsys):
    assert main(["toy"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "beta = 1/10" in out
    assert "E^3: [-1]" in out
    assert "1 + 1/10*i*sqrt2" in out
    assert "1 - 1/10*i*sqrt2" in out
    assert "v1 = (-1/2*i, 1/2*sqrt2, 1/2*i)" in out
    assert "U^-1 H U rows:" in out
    assert main(["toy", "--beta", "1/5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "beta = 1/5" in out
    assert "jordan" not in out


def test_exact_rerun_matches_except_timing(tmp_path, capsys):
    bases = [str(tmp_path / n) for n in ("a", "b")]
    for b in bases:
        assert main(["scan", "--model", "box-x", "--n-min", "4",
                     "--n-max", "6", "--out", b]) == EXIT_OK
        capsys.readouterr()

    def load(b):
        with open(b + ".json") as fh:
            d = json.load(fh)
        d.pop("seconds")
        for r in d["per_dim"]:
            r.pop("seconds")
        return d

    assert load(bases[0]) == load(bases[1])


def test_precision_env_sets_default():
    code = "from epdisc.rings import DEFAULT_PRECISION; print(DEFAULT_PRECISION)"
    env = dict(os.environ, EPDISC_PRECISION="128")
    got = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert got.stdout.strip() == "128"
    env.pop("EPDISC_PRECISION")
    got = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert got.stdout.strip() == "256"
