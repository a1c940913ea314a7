import json
import subprocess
import sys

import pytest

from affinedyn.cli import InvalidInput, main, parse_complex


def run(tmp_path, *args):
    out = tmp_path / "out"
    code = main([*args, "--out", str(out)])
    return code, out


@pytest.mark.parametrize(
    "text, value",
    [("1+0i", 1 + 0j), ("0+1i", 1j), ("-2.5-3i", -2.5 - 3j), ("2", 2 + 0j), ("i", 1j), ("-i", -1j), ("0i", 0j), ("3i", 3j), ("1-i", 1 - 1j), ("1e-3+2e1i", 0.001 + 20j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "foo", "1+", "1+2j", "1+2i+3"])
def test_parse_complex_rejects(text):
    with pytest.raises(InvalidInput):
        parse_complex(text)


def test_classify_positive_expansive(tmp_path, capsys):
    code, out = run(tmp_path, "classify", "--a", "0.5", "--b", "1+0i", "--alpha", "0")
    assert code == 0
    text = capsys.readouterr().out
    row = next(line for line in text.splitlines() if line.startswith("positive_expansive"))
    assert "true" in row and "uniformly-positive-expansive" in row
    data = json.loads((out / "result.json").read_text())
    assert data["result"]["positive_expansive"]["value"] is True


def test_classify_identity(tmp_path, capsys):
    code, out = run(tmp_path, "classify", "--a", "1", "--b", "0i", "--alpha", "0")
    assert code == 0
    data = json.loads((out / "result.json").read_text())["result"]
    assert data["unitary"]["value"] is True
    assert data["spectrum"]["value"]["kind"] == "singleton_one"


def test_classify_shadowing_citation(tmp_path, capsys):
    code, out = run(tmp_path, "classify", "--a", "2", "--b", "1+1i", "--alpha", "0")
    data = json.loads((out / "result.json").read_text())["result"]
    assert data["positive_shadowing"] == {"value": True, "citation": "thm:shadowing(ii): a > 1"}


@pytest.mark.parametrize(
    "args, constraint",
    [
        (["--a", "0"], "a > 0"),
        (["--a", "-1"], "a > 0"),
        (["--b=-1+0i"], "Re(b) >= 0"),
        (["--alpha", "-1"], "alpha > -1"),
        (["--b", "x"], "RE+IMi"),
    ],
)
def test_invalid_input_exit_code(tmp_path, capsys, args, constraint):
    code, _ = run(tmp_path, "classify", *args)
    assert code == 2
    assert constraint in capsys.readouterr().err


def test_regime_mismatch_is_invalid_input(tmp_path, capsys):
    code, _ = run(tmp_path, "witness", "--a", "1", "--b", "1")
    assert code == 2
    code, _ = run(tmp_path, "shadow", "--a", "1", "--b", "1i")
    assert code == 2


def test_spectrum_writes_svg(tmp_path, capsys):
    code, out = run(tmp_path, "spectrum", "--a", "2", "--b", "0i")
    assert code == 0
    svg = (out / "spectrum.svg").read_text()
    assert svg.startswith("<svg") and 'width="800"' in svg and "stroke-dasharray" in svg
    assert "http" not in svg.replace('xmlns="http://www.w3.org/2000/svg"', "")
    data = json.loads((out / "result.json").read_text())["result"]
    assert data["spectrum"] == {"kind": "circle", "radius": 0.5}


def test_spiral_svg(tmp_path, capsys):
    code, out = run(tmp_path, "spectrum", "--a", "1", "--b", "1+0i")
    assert code == 0
    svg = (out / "spectrum.svg").read_text()
    assert "<polyline" in svg and svg.count("<circle") == 2


def test_shadow_command(tmp_path, capsys):
    code, out = run(tmp_path, "shadow", "--a", "2", "--b", "1", "--alpha", "0", "--delta", "0.01", "--n", "100")
    assert code == 0
    data = json.loads((out / "result.json").read_text())["result"]["shadow"]
    assert data["epsilon_observed"] <= 0.02
    assert (out / "shadow.csv").read_text().startswith("n,value,bound\n")


def test_shadow_expansion_command(tmp_path, capsys):
    code, out = run(tmp_path, "shadow", "--a", "0.5", "--b", "0+1i", "--n", "20")
    assert code == 0
    data = json.loads((out / "result.json").read_text())["result"]["shadow"]
    assert data["epsilon_observed"] <= data["epsilon_bound"]


def test_witness_command(tmp_path, capsys):
    code, out = run(tmp_path, "witness", "--a", "0.7", "--b", "0.3", "--alpha", "0", "--delta", "0.1", "--epsilon", "1")
    assert code == 0
    data = json.loads((out / "result.json").read_text())["result"]
    assert data["n_star"] == 22


def test_laplace_check_command(tmp_path, capsys):
    code, out = run(tmp_path, "laplace-check", "--alpha", "0")
    assert code == 0
    data = json.loads((out / "result.json").read_text())["result"]
    assert data["relative_gap"] < 1e-6
    assert data["mu_norm"] == pytest.approx(0.5) and data["bergman_norm"] == pytest.approx(0.5)
    assert (out / "isometry.csv").read_text().startswith("level,bergman_norm,mu_norm,gap\n")


@pytest.mark.parametrize(
    "args, csv_name",
    [
        (["orbit", "--a", "2", "--b", "1i", "--n", "20"], "orbit.csv"),
        (["lower-estimate", "--a", "0.5", "--b", "1", "--z0", "1"], "lower_estimate.csv"),
        (["cesaro", "--a", "0.5", "--b", "0", "--n", "40"], "cesaro.csv"),
        (["estimates", "--a", "3", "--b", "2i", "--alpha", "1", "--samples", "20"], None),
        (["irregular", "--a", "0.5", "--b", "1"], None),
        (["sweep"], "sweep.csv"),
    ],
)
def test_other_commands(tmp_path, capsys, args, csv_name):
    code, out = run(tmp_path, *args)
    assert code == 0
    assert json.loads((out / "result.json").read_text())["exit_code"] == 0
    if csv_name:
        assert (out / csv_name).exists()


def test_orbit_csv_columns(tmp_path, capsys):
    _, out = run(tmp_path, "orbit", "--a", "2", "--b", "1i", "--n", "3")
    lines = (out / "orbit.csv").read_text().splitlines()
    assert lines[0] == "n,norm,log_norm" and len(lines) == 5
    assert lines[1].startswith("0,0.5,")


def test_sweep_grid_file(tmp_path, capsys):
    grid = tmp_path / "grid.csv"
    grid.write_text("a,b_re,b_im,alpha\n0.5,1,0,0\n2,0,1,1\n")
    code, out = run(tmp_path, "sweep", "--grid", str(grid))
    assert code == 0
    assert len((out / "sweep.csv").read_text().splitlines()) == 3
    grid.write_text("a,b_re,b_im,alpha\n-1,0,0,0\n")
    code, _ = run(tmp_path, "sweep", "--grid", str(grid))
    assert code == 2


def test_json_is_byte_identical(tmp_path, capsys):
    a = tmp_path / "a"
    b = tmp_path / "b"
    args = ["shadow", "--a", "2", "--b", "1+1i", "--delta", "0.01", "--n", "50", "--seed", "7"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    assert (a / "result.json").read_bytes() == (b / "result.json").read_bytes()
    assert (a / "shadow.csv").read_bytes() == (b / "shadow.csv").read_bytes()


def test_floats_use_17_digits(tmp_path, capsys):
    _, out = run(tmp_path, "classify", "--a", "0.7", "--b", "0.3")
    text = (out / "result.json").read_text()
    assert '"value": 1.4285714285714286' in text


def test_config_file_and_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\na = 0.5\nb = 0+1i\nalpha = 2\n")
    env_out = tmp_path / "env-out"
    monkeypatch.setenv("AFFINEDYN_OUT", str(env_out))
    assert main(["classify", "--config", str(cfg)]) == 0
    data = json.loads((env_out / "result.json").read_text())
    assert data["config"]["a"] == 0.5 and data["config"]["b"] == [0.0, 1.0] and data["config"]["alpha"] == 2.0
    # flags override the file
    assert main(["classify", "--config", str(cfg), "--a", "2"]) == 0
    assert json.loads((env_out / "result.json").read_text())["config"]["a"] == 2.0
    cfg.write_text("colour = red\n")
    assert main(["classify", "--config", str(cfg)]) == 2


def test_json_flag_prints_result(tmp_path, capsys):
    run(tmp_path, "classify", "--a", "2", "--json")
    printed = json.loads(capsys.readouterr().out)
    assert printed["command"] == "classify"


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "affinedyn.cli", "classify", "--a", "0", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "a > 0" in proc.stderr
