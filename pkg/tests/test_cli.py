import csv
import io
import math

import numpy as np
import pytest

from ampsense import cli
from ampsense.interferometer import HEADLINE_DEFAULTS


def read_table(path):
    text = path.read_text()
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.reader(rows))


def run(tmp_path, command, *sets, config_text=None):
    out = tmp_path / f"{command}.csv"
    argv = [command, "--out", str(out)]
    if config_text is not None:
        cfg = tmp_path / "run.cfg"
        cfg.write_text(config_text)
        argv += ["--config", str(cfg)]
    for s in sets:
        argv += ["--set", s]
    return cli.main(argv), out


def test_empty_document_gives_headline_defaults():
    cfg = cli.parse_config("")
    for key, value in HEADLINE_DEFAULTS.items():
        assert getattr(cfg, key) == value


def test_single_override_and_comments():
    cfg = cli.parse_config("# headline config\ng2 = 2.7   # panel a\n\n")
    assert cfg.g2 == 2.7
    assert cfg.eta == 0.5


def test_range_error_names_key_and_line():
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config("g2 = 3.0\neta = 1.5\n")
    assert "eta" in str(err.value)
    assert err.value.line == 2


@pytest.mark.parametrize("text, line", [("bogus = 1", 1), ("g2 = 1\nnonsense line", 2),
                                        ("g1 = abc", 1), ("n_points = 2.5", 1), ("g1 =", 1)])
def test_malformed_documents(text, line):
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config(text)
    assert err.value.line == line


def test_overrides_apply_after_document():
    cfg = cli.parse_config("eta = 0.3", ["eta=0.2", "sv_enabled = false"])
    assert cfg.eta == 0.2 and cfg.sv_enabled is False
    with pytest.raises(cli.ConfigError):
        cli.parse_config("", ["mu=0"])


def test_snl_command(tmp_path, capsys):
    code, out = run(tmp_path, "snl")
    assert code == 0
    assert capsys.readouterr().out.strip() == "snl_mrad=25.76"
    header, row = read_table(out)
    assert header[0] == "snl_rad"
    assert 25 <= float(row[1]) <= 27


def test_sweep_two_points(tmp_path):
    code, out = run(tmp_path, "sweep", "n_points=2")
    assert code == 0
    table = read_table(out)
    assert len(table) == 3
    assert table[0] == ["phi_rad", "mean_n_photons", "var_n_photons2", "delta_phi_rad", "snl_rad"]


def test_sweep_all_extrema_is_numeric_failure(tmp_path):
    code, _ = run(tmp_path, "sweep", "n_points=2", f"phi_min={-math.pi!r}", f"phi_max={math.pi!r}",
                  "sv_enabled=false", "g2=0")
    assert code == 3


def test_qmap_matrix(tmp_path):
    code, out = run(tmp_path, "qmap", "eta_points=12", "g2_points=6")
    assert code == 0
    table = read_table(out)
    g2s = [float(v) for v in table[0][1:]]
    etas = [float(r[0]) for r in table[1:]]
    assert g2s[0] == 0.0 and g2s[-1] == 5.0
    assert etas[0] == 0.01 and etas[-1] == 1.0
    values = np.array([[float(v) for v in r[1:]] for r in table[1:]])
    assert np.all((values > 0) & (values <= 1))
    assert np.allclose(values[-1], 1.0)


def test_threshold_command(tmp_path, capsys):
    code, out = run(tmp_path, "threshold")
    assert code == 0
    assert capsys.readouterr().out.startswith("eta_threshold=")
    code, _ = run(tmp_path, "threshold", "g1=0", "g2=0", "g2_corr=1", "dark_rms=0")
    assert code == 3


def test_wigner_command(tmp_path, capsys):
    code, out = run(tmp_path, "wigner", "scenario=classical", "grid_points=41", "n_phases=3")
    assert code == 0
    table = read_table(out)
    assert table[0] == ["state_index", "phi_rad", "x", "p", "wigner_per_quadrature2"]
    assert len(table) == 1 + 3 * 41 * 41
    assert "min_integral=1.0000" in capsys.readouterr().out


def test_calibrate_command(tmp_path, capsys):
    data = tmp_path / "gain.csv"
    powers = [0.5, 1.0, 2.0, 4.0]
    data.write_text("pump_power,mean_photons\n" + "".join(
        f"{p!r},{math.sinh(2.0 * math.sqrt(p)) ** 2!r}\n" for p in powers))
    code, out = run(tmp_path, "calibrate", f"calib_data={data}")
    assert code == 0
    assert float(read_table(out)[1][4]) == pytest.approx(2.0, abs=1e-6)
    code, _ = run(tmp_path, "calibrate")
    assert code == 2


def test_config_errors_exit_2(tmp_path):
    assert run(tmp_path, "snl", "eta=1.5")[0] == 2
    assert run(tmp_path, "snl", config_text="unknown_key = 3\n")[0] == 2
    assert cli.main(["snl", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_zero_photons_is_numeric_failure(tmp_path):
    assert run(tmp_path, "snl", "n_alpha=0", "g1=0")[0] == 3


def test_unwritable_output(tmp_path):
    cfg = cli.parse_config("")
    assert cli.run_command("snl", cfg, tmp_path / "no" / "such" / "dir.csv", io.StringIO()) == 1


def test_deterministic_output(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    cfg = cli.parse_config("g2 = 2.7\nn_points = 50\n")
    cli.run_command("sweep", cfg, a, io.StringIO())
    cli.run_command("sweep", cli.parse_config("g2 = 2.7\nn_points = 50\n"), b, io.StringIO())
    assert a.read_bytes() == b.read_bytes()


def test_metadata_round_trip(tmp_path):
    text = "g2 = 2.7\neta = 0.29\ng2_corr = 1.003\nphi_min = 0.1\nphi_max = 1.2345678901234567\n"
    cfg = cli.parse_config(text)
    out = tmp_path / "s.csv"
    cli.run_command("sweep", cfg, out, io.StringIO())
    assert cli.config_from_csv(out.read_text()) == cfg


def test_float_format():
    assert cli.fmt(0.1) == "0.1"
    assert cli.fmt(1 / 3) == repr(1 / 3)
    assert cli.fmt(float("inf")) == "inf"
    assert float(cli.fmt(np.float64(2.5e-7))) == 2.5e-7
