import json

import numpy as np
import pytest

from gravipack.cli import main, parse_config_file


def data_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return header, rows


def comments(text):
    out = {}
    for ln in text.splitlines():
        if ln.startswith("# ") and " = " in ln:
            key, value = ln[2:].split(" = ", 1)
            out[key] = value
    return out


def test_density_point(capsys):
    assert main(["density", "--mu", "1", "--sigma", "1", "--dt", "1", "--g", "0", "--x", "0"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# gravipack")
    header, rows = data_rows(text)
    assert header == ["x", "rho"]
    # Sigma = sqrt(2): rho(0) = 1 / sqrt(2 pi)
    assert rows[0, 1] == pytest.approx(1 / np.sqrt(2 * np.pi), rel=1e-15)
    assert "3.9894228040143265e-01" in text
    assert comments(text)["mu"] == "1.0"


def test_density_table_normalized(tmp_path):
    out = tmp_path / "rho.csv"
    assert main(["density", "--mu", "2", "--sigma", "0.5", "--dt", "1", "--g", "3", "--k0", "1",
                 "--out", str(out)]) == 0
    _, rows = data_rows(out.read_text())
    assert np.trapezoid(rows[:, 1], rows[:, 0]) == pytest.approx(1.0, abs=1e-10)


def test_evolve_columns(capsys):
    assert main(["evolve", "--mu", "1", "--sigma", "1", "--dt", "1", "--grid-n", "9"]) == 0
    header, rows = data_rows(capsys.readouterr().out)
    assert header == ["x", "re_psi", "im_psi", "rho"]
    np.testing.assert_allclose(rows[:, 1] ** 2 + rows[:, 2] ** 2, rows[:, 3], rtol=1e-12)


def test_si_units(capsys):
    assert main(["density", "--units", "SI", "--mass-mev", "134.98", "--sigma", "1e-8",
                 "--dt", "0.02", "--x", "0"]) == 0
    cfg = comments(capsys.readouterr().out)
    assert float(cfg["g"]) == 9.80665


def test_compare(capsys):
    code = main(["compare", "--mu", "1.5", "--sigma", "0.8", "--dt", "1", "--g", "2", "--u0", "0.3"])
    captured = capsys.readouterr()
    assert code == 0
    deviation = float(comments(captured.out)["sup_relative_deviation"])
    assert deviation < 1e-6
    assert "sup relative deviation" in captured.err


def test_scan_hbar(capsys):
    assert main(["scan-hbar", "--mu", "8", "--sigma", "1", "--dt", "1", "--g", "9.8", "--u0", "0.5",
                 "--octaves", "5"]) == 0
    text = capsys.readouterr().out
    _, rows = data_rows(text)
    assert rows.shape == (6, 3)
    assert np.all(np.diff(rows[:, 2]) < 0)
    assert comments(text)["deviation_decreasing"] == "True"


def test_scan_sigma(capsys):
    assert main(["scan-sigma", "--sigma", "1", "--dt", "1", "--g", "9.8", "--u0", "0.5"]) == 0
    _, rows = data_rows(capsys.readouterr().out)
    assert rows[-1, 1] == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(rows[:, 2], -4.4, rtol=1e-12)


def test_figures(tmp_path, capsys):
    out = tmp_path / "figs"
    assert main(["figures", "--out", str(out)]) == 0
    summary = capsys.readouterr().out
    assert "fig1" in summary and "fig2" in summary
    for stem, other in (("fig1", "pi+-"), ("fig2", "K0")):
        csv = (out / f"{stem}.csv").read_text()
        header, rows = data_rows(csv)
        assert header == ["x_m", "rho_pi0", f"rho_{other}"]
        centre = np.argmin(np.abs(rows[:, 0]))
        assert rows[centre, 2] > rows[centre, 1]
        svg = (out / f"{stem}.svg").read_text()
        assert 'viewBox="0 0 800 500"' in svg
    first = (out / "fig2.svg").read_bytes()
    assert main(["figures", "--out", str(out)]) == 0
    assert (out / "fig2.svg").read_bytes() == first


def test_validate(capsys):
    assert main(["validate"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 10
    assert all(ln.startswith("PASS") for ln in lines)


@pytest.mark.parametrize("argv", [
    ["density", "--mu", "1", "--sigma", "1"],
    ["density", "--mu", "-1", "--sigma", "1", "--dt", "1"],
    ["density", "--sigma", "1", "--dt", "1"],
    [],
    ["density", "--mode", "evolve", "--mu", "1", "--sigma", "1", "--dt", "1"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_k0_u0_exclusive():
    with pytest.raises(SystemExit) as exc:
        main(["density", "--k0", "1", "--u0", "1"])
    assert exc.value.code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# example\nmode = density\nmu = 1\nsigma = 1\ndt = 1   # seconds\nx = 0\ng = 5\n")
    assert parse_config_file(cfg)["dt"] == "1"
    assert main(["--config", str(cfg), "--g", "0"]) == 0
    text = capsys.readouterr().out
    assert comments(text)["g"] == "0.0"
    assert "3.9894228040143265e-01" in text


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mode = density\nflavour = up\n")
    assert main(["--config", str(cfg)]) == 2


def test_validate_failure_json(monkeypatch, capsys):
    from gravipack import validation

    def broken():
        return [validation.Check("demo", False, 1.0, 0.5)]

    monkeypatch.setattr(validation, "run_all", broken)
    assert main(["validate"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("FAIL demo")
    assert json.loads(out[1])["failures"][0]["name"] == "demo"
