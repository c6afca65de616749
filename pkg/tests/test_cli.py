import json
import math

import pandas as pd
import pytest

from config import TOOL_VERSION, parse_config
from emit import CommandResult, emit, to_csv
from errors import BasisError, ConfigError, MalformedNumberError, MissingFieldError, UnknownKeyError
from main import main


# ─────────────────────────── parse_config ───────────────────────────────
def test_spectrum_flags():
    cfg = parse_config(["spectrum", "--n", "20", "--u", "1", "--j", "1", "--eps", "0.5", "--format", "json"])
    assert cfg.command == "spectrum"
    assert (cfg.n, cfg.u, cfg.j, cfg.eps) == (20, 1.0, 1.0, 0.5)
    assert cfg.format == "json"
    assert cfg.precision == 12
    p = cfg.model_params()
    assert (p.N, p.U, p.J, p.epsilon) == (20, 1.0, 1.0, 0.5)


def test_negative_values_are_numbers():
    cfg = parse_config(["stationary", "--u", "-2", "--j", "1", "--eps=-0.5"])
    assert cfg.u == -2.0 and cfg.eps == -0.5


def test_unknown_flag_is_named():
    with pytest.raises(UnknownKeyError) as info:
        parse_config(["--frobnicate", "3"])
    assert info.value.key == "frobnicate"
    assert "frobnicate" in str(info.value)


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# trimer run\nn = 10\nu = -1\nj=1\n\neps = 0.25  # tilt\n", encoding="utf-8")
    cfg = parse_config(["spectrum", "--config", str(path), "--n", "20"])
    assert cfg.n == 20
    assert cfg.u == -1.0
    assert cfg.eps == 0.25


def test_file_rejects_unknown_key(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("colour = blue\n", encoding="utf-8")
    with pytest.raises(UnknownKeyError) as info:
        parse_config(["grid", "--config", str(path)])
    assert info.value.key == "colour"


def test_file_accepts_dashed_keys(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("n-jobs = 2\ncluster-tol = 0.5\n", encoding="utf-8")
    cfg = parse_config(["grid", "--config", str(path)])
    assert cfg.n_jobs == 2 and cfg.cluster_tol == 0.5


def test_missing_field_is_named():
    with pytest.raises(MissingFieldError) as info:
        parse_config(["spectrum", "--n", "4", "--u", "1", "--j", "1"])
    assert info.value.key == "eps"


def test_sweep_needs_the_fixed_couplings():
    with pytest.raises(MissingFieldError) as info:
        parse_config(["sweep", "--n", "4", "--axis", "U", "--start", "0", "--stop", "1", "--steps", "3", "--j", "1"])
    assert info.value.key == "eps"
    cfg = parse_config(["sweep", "--n", "4", "--axis", "eps", "--start", "0", "--stop", "1", "--steps", "3",
                        "--j", "1", "--u", "0"])
    assert cfg.axis == "epsilon"


@pytest.mark.parametrize("flag, text", [("--u", "abc"), ("--n", "2.5"), ("--j", "nan")])
def test_malformed_number_is_named(flag, text):
    argv = ["spectrum", "--n", "4", "--u", "1", "--j", "1", "--eps", "0"]
    argv[argv.index(flag) + 1] = text
    with pytest.raises(MalformedNumberError) as info:
        parse_config(argv)
    assert info.value.key == flag[2:]


def test_bad_choice():
    with pytest.raises(ConfigError):
        parse_config(["critical", "--family", "U0"])


# ─────────────────────────── emit ───────────────────────────────────────
def test_empty_frame_is_header_only():
    frame = pd.DataFrame(columns=["ratio", "classical_e", "quantum_e"])
    assert to_csv(frame, 12) == "ratio,classical_e,quantum_e\n"


def test_precision_formatting():
    assert to_csv(pd.DataFrame({"x": [-math.sqrt(2.0)]}), 12) == "x\n-1.41421356237\n"


def test_json_roundtrip(tmp_path):
    out = tmp_path / "out.json"
    cfg = parse_config(["stationary", "--u", "1", "--j", "0", "--eps", "1", "--format", "json", "--output", str(out)])
    frame = pd.DataFrame({"label": ["x4"], "energy": [1.0 / 3.0], "ok": [True], "missing": [math.nan]})
    payload = emit(CommandResult(frame, {"regime": "J0"}), cfg)
    assert out.read_bytes() == payload
    doc = json.loads(payload)
    assert doc["meta"]["version"] == TOOL_VERSION
    assert doc["meta"]["regime"] == "J0"
    assert doc["meta"]["u"] == 1.0
    assert doc["rows"] == [{"label": "x4", "energy": 0.333333333333, "ok": True, "missing": None}]


# ─────────────────────────── main ───────────────────────────────────────
def run_main(tmp_path, argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--output", str(out)])
    return code, out


def test_spectrum_command(tmp_path):
    code, out = run_main(tmp_path, ["spectrum", "--n", "4", "--u", "-1", "--j", "1", "--eps", "0.2"])
    assert code == 0
    frame = pd.read_csv(out)
    assert frame.columns.tolist() == ["n", "u", "j", "eps", "e0", "gap1", "gap2", "qn1", "qn2", "qn3", "degenerate"]
    assert frame.loc[0, "qn1"] + frame.loc[0, "qn2"] + frame.loc[0, "qn3"] == pytest.approx(1.0, abs=1e-9)


def test_spectrum_all_levels(tmp_path):
    code, out = run_main(tmp_path, ["spectrum", "--n", "6", "--u", "10000", "--j", "1", "--eps", "0",
                                    "--levels", "all", "--cluster-tol", "1"])
    assert code == 0
    frame = pd.read_csv(out)
    assert len(frame) == 28
    assert frame["cluster"].value_counts().sort_index().tolist() == [4, 8, 8, 8]


def test_stationary_command(tmp_path):
    code, out = run_main(tmp_path, ["stationary", "--u", "2", "--j", "1", "--eps", "0.5"])
    assert code == 0
    frame = pd.read_csv(out)
    assert len(frame) == 5
    assert (frame["residual"] < 1e-9).all()


def test_sweep_output_is_deterministic(tmp_path):
    argv = ["sweep", "--n", "4", "--axis", "U", "--start", "-1", "--stop", "1", "--steps", "5",
            "--j", "1", "--eps", "0.3", "--per", "J"]
    _, first = run_main(tmp_path, argv, "a.csv")
    _, second = run_main(tmp_path, [*argv, "--n-jobs", "2"], "b.csv")
    assert first.read_bytes() == second.read_bytes()
    header = first.read_text().splitlines()[0]
    assert header == "ratio,u,j,eps,classical_e,quantum_e,qn1,qn2,qn3,cn1,cn2,cn3,gap1,gap2,degenerate,error"


def test_critical_command(tmp_path):
    code, out = run_main(tmp_path, ["critical", "--family", "eps0", "--format", "json"], "c.json")
    assert code == 0
    row = json.loads(out.read_text())["rows"][0]
    assert row["critical"] == -0.5
    assert row["second_order"] is True


def test_correspond_command(tmp_path):
    code, out = run_main(tmp_path, ["correspond", "--u", "-3", "--j", "1", "--eps", "0", "--tol", "0.25",
                                    "--n-max", "3", "--format", "json"], "d.json")
    assert code == 0
    assert json.loads(out.read_text())["meta"]["min_n"] == 2


def test_fidelity_command(tmp_path):
    code, out = run_main(tmp_path, ["fidelity", "--n", "6", "--u", "1", "--j", "1",
                                    "--start", "0", "--stop", "0.1", "--steps", "3"])
    assert code == 0
    assert pd.read_csv(out)["fidelity"].iloc[0] == pytest.approx(1.0, abs=1e-12)


def test_grid_command(tmp_path):
    code, out = run_main(tmp_path, ["grid", "--steps", "3", "--quantity", "n1"])
    assert code == 0
    assert len(pd.read_csv(out)) == 9


def test_exit_codes(tmp_path):
    assert main(["--frobnicate", "3"]) == 2
    assert main(["spectrum", "--n", "2"]) == 2
    assert main(["stationary", "--u", "0", "--j", "0", "--eps", "0"]) == 2
    assert main(["grid", "--steps", "2", "--output", str(tmp_path / "missing" / "x.csv")]) == 1


def test_unexpected_toolkit_error_exits_cleanly(tmp_path, monkeypatch):
    import commands.spectrum

    def broken(cfg):
        raise BasisError("state (1, 1, 2) is not in the N=3 basis")

    monkeypatch.setattr(commands.spectrum, "run", broken)
    argv = ["spectrum", "--n", "3", "--u", "1", "--j", "1", "--eps", "0", "--output", str(tmp_path / "x.csv")]
    assert main(argv) == 3
