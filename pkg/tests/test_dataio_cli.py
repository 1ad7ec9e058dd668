"""Plain-text I/O and the command-line surface."""

import os

import numpy as np
import pytest

from odehazard import ConstantHazard, simulate_dataset
from odehazard.cli import main
from odehazard.dataio import (
    apply_overrides,
    read_config,
    read_dataset,
    write_dataset,
)
from odehazard.errors import ConfigError, DataFormatError


# --- config files ------------------------------------------------------------


def test_read_config_and_overrides(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("family=constant\nc = 0.6  # baseline\n\n# comment line\n")
    cfg = read_config(str(p))
    assert cfg == {"family": "constant", "c": "0.6"}
    cfg = apply_overrides(cfg, ["c=0.9", "n=100"])
    assert cfg["c"] == "0.9" and cfg["n"] == "100"
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["oops"])
    with pytest.raises(ConfigError):
        read_config(str(tmp_path / "missing.cfg"))


def test_read_config_rejects_garbage(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("just some words\n")
    with pytest.raises(ConfigError):
        read_config(str(p))


# --- dataset round trips -----------------------------------------------------


def test_dataset_write_read_exact_round_trip(tmp_path):
    d = simulate_dataset(ConstantHazard(0.6), 200, censor="uniform", seed=5, c_max=4.0)
    path = str(tmp_path / "d.csv")
    write_dataset(path, d)
    back = read_dataset(path, convention="status01", time_unit="native")
    assert np.array_equal(back.times, d.times)  # bitwise: repr round-trips float64
    assert np.array_equal(back.events, d.events)


def test_read_dataset_status12_convention(tmp_path):
    p = tmp_path / "clin.csv"
    p.write_text("time,status\n455,2\n1010,1\n")
    d = read_dataset(str(p), convention="status12", time_unit="days-to-years")
    assert d.times[0] == pytest.approx(455 / 365.25, rel=1e-15)
    assert list(d.events) == [1, 0]
    assert "years" in d.meta["time_unit"]


def test_read_dataset_drops_missing_times_with_count(tmp_path):
    p = tmp_path / "na.csv"
    p.write_text("time,status\n1.0,1\nNA,1\n2.0,0\n")
    d = read_dataset(str(p))
    assert d.n == 2 and d.meta["dropped_rows"] == 1


def test_read_dataset_rejects_unknown_status(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("time,status\n1.0,3\n2.0,1\n")
    with pytest.raises(DataFormatError, match="status 3"):
        read_dataset(str(p))


def test_read_dataset_rejects_empty(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("time,status\n")
    with pytest.raises(DataFormatError, match="no usable rows"):
        read_dataset(str(p))


def test_read_dataset_requires_header(tmp_path):
    p = tmp_path / "headerless.csv"
    p.write_text("1.0,1\n2.0,0\n")
    with pytest.raises(DataFormatError, match="header"):
        read_dataset(str(p))


# --- CLI commands ------------------------------------------------------------


def read_curve(path):
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    return rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]


def test_cli_curves_preset_damped(tmp_path):
    out = str(tmp_path / "curves")
    assert main(["curves", "--set", "preset=damped-regimes", "--set", "dt=0.01", "--out", out]) == 0
    names = sorted(os.listdir(out))
    assert names == ["critical.csv", "overdamped.csv", "underdamped.csv"]
    for name in names:
        t, h, S, H = read_curve(os.path.join(out, name))
        assert S[0] == 1.0
        assert np.all(np.diff(t) > 0)
        assert np.max(np.abs(S - np.exp(-H))) <= 1e-12
        assert np.all(np.diff(H) >= 0.0)


def test_cli_curves_byte_identical_reruns(tmp_path):
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    for out in (out1, out2):
        assert main(["curves", "--set", "preset=sinusoidal-baseline", "--set", "dt=0.01", "--out", out]) == 0
    a = open(os.path.join(out1, "sinusoidal.csv"), "rb").read()
    b = open(os.path.join(out2, "sinusoidal.csv"), "rb").read()
    assert a == b


def test_cli_curves_boundary_survival_plateau(tmp_path):
    out = str(tmp_path / "curves")
    assert main(["curves", "--set", "preset=exp-improper-boundary", "--out", out]) == 0
    t, h, S, H = read_curve(os.path.join(out, "boundary.csv"))
    idx = np.searchsorted(t, 40.0)
    assert 0.367 <= S[idx] <= 0.369


def test_cli_curves_logistic_overshoot_pattern(tmp_path):
    out = str(tmp_path / "curves")
    assert main(["curves", "--set", "preset=logistic-comparison", "--set", "dt=0.01", "--out", out]) == 0
    _, h1, _, _ = read_curve(os.path.join(out, "first-order.csv"))
    _, hd, _, _ = read_curve(os.path.join(out, "delayed.csv"))
    _, h2, _, _ = read_curve(os.path.join(out, "second-order.csv"))
    K = 1.0
    assert np.max(h1) <= K + 1e-9
    assert np.max(hd) > K and np.max(h2) > K


def test_cli_curves_single_model_requires_horizon(tmp_path):
    code = main(["curves", "--set", "family=constant", "--set", "c=0.6", "--out", str(tmp_path)])
    assert code == 2  # missing horizon


def test_cli_simulate_and_ingest_round_trip(tmp_path):
    out = str(tmp_path / "sim")
    args = [
        "simulate", "--out", out, "--seed", "42",
        "--set", "family=constant", "--set", "c=0.6",
        "--set", "n=100", "--set", "censor=uniform", "--set", "c_max=4.0",
    ]
    assert main(args) == 0
    direct = simulate_dataset(ConstantHazard(0.6), 100, censor="uniform", seed=42, c_max=4.0)
    back = read_dataset(os.path.join(out, "dataset.csv"))
    assert np.array_equal(back.times, direct.times)
    assert np.array_equal(back.events, direct.events)
    meta = dict(
        line.split("=", 1) for line in open(os.path.join(out, "dataset.meta")).read().splitlines()
    )
    assert float(meta["censoring_rate"]) == pytest.approx(direct.censoring_rate)
    # same seed, fresh run: byte-identical dataset
    out2 = str(tmp_path / "sim2")
    assert main(args[:2] + [out2] + args[3:]) == 0
    assert open(os.path.join(out, "dataset.csv"), "rb").read() == open(
        os.path.join(out2, "dataset.csv"), "rb"
    ).read()


def test_cli_simulate_censor_target_within_band(tmp_path):
    out = str(tmp_path / "sim")
    args = [
        "simulate", "--out", out, "--seed", "3",
        "--set", "family=constant", "--set", "c=0.6",
        "--set", "n=2000", "--set", "censor=uniform", "--set", "censor_target=0.25",
    ]
    assert main(args) == 0
    back = read_dataset(os.path.join(out, "dataset.csv"))
    assert abs(back.censoring_rate - 0.25) <= 0.03


def test_cli_simulate_improper_without_horizon_fails_cleanly(tmp_path, capsys):
    args = [
        "simulate", "--out", str(tmp_path), "--seed", "1",
        "--set", "family=exp", "--set", "alpha=0.1", "--set", "beta=0",
        "--set", "h0=0.31623", "--set", "v0=-0.1", "--set", "n=20",
    ]
    assert main(args) == 2
    assert "improper" in capsys.readouterr().err


def test_cli_fit_reports(tmp_path):
    data_out = str(tmp_path / "sim")
    main([
        "simulate", "--out", data_out, "--seed", "10",
        "--set", "family=constant", "--set", "c=0.6", "--set", "n=400",
    ])
    fit_out = str(tmp_path / "fits")
    code = main([
        "fit", "--data", os.path.join(data_out, "dataset.csv"), "--out", fit_out,
        "--set", "families=weibull,lognormal",
    ])
    assert code == 0
    report = open(os.path.join(fit_out, "fit_weibull.txt")).read()
    assert "bic=" in report and "converged=1" in report


def test_cli_fit_with_init_file(tmp_path):
    data_out = str(tmp_path / "sim")
    main([
        "simulate", "--out", data_out, "--seed", "11",
        "--set", "family=constant", "--set", "c=0.6", "--set", "n=300",
    ])
    init_file = tmp_path / "init.cfg"
    init_file.write_text("b=0.6\nk=1.0\n")
    fit_out = str(tmp_path / "fits")
    code = main([
        "fit", "--data", os.path.join(data_out, "dataset.csv"), "--out", fit_out,
        "--init", str(init_file), "--set", "families=weibull",
    ])
    assert code == 0
    assert os.path.exists(os.path.join(fit_out, "fit_weibull.txt"))
    # missing keys in the init file are a configuration error
    bad = tmp_path / "bad_init.cfg"
    bad.write_text("b=0.6\n")
    assert main([
        "fit", "--data", os.path.join(data_out, "dataset.csv"), "--out", fit_out,
        "--init", str(bad), "--set", "families=weibull",
    ]) == 2


def test_cli_mgf_sweep(tmp_path):
    out = str(tmp_path / "mgf")
    args = [
        "mgf", "--out", out,
        "--set", "family=constant", "--set", "c=0.6", "--set", "s_list=0.3,0.6,0.7",
    ]
    assert main(args) == 0
    lines = open(os.path.join(out, "mgf.csv")).read().splitlines()
    assert lines[0] == "s,value,divergent"
    rows = [line.split(",") for line in lines[1:]]
    assert float(rows[0][1]) == pytest.approx(2.0, abs=1e-6)
    assert [r[2] for r in rows] == ["0", "1", "1"]


def test_cli_ingest_check(tmp_path, capsys):
    p = tmp_path / "clin.csv"
    p.write_text("time,status\n455,2\n1010,1\n210,2\n")
    code = main([
        "ingest-check", "--data", str(p),
        "--set", "convention=status12", "--set", "time_unit=days-to-years",
    ])
    assert code == 0
    text = capsys.readouterr().out
    assert "rows=3 events=2 censored=1" in text
    p2 = tmp_path / "bad.csv"
    p2.write_text("time,status\n455,7\n")
    assert main(["ingest-check", "--data", str(p2), "--set", "convention=status12"]) == 4


def test_cli_study_small(tmp_path):
    out = str(tmp_path / "study")
    args = [
        "study", "--out", out, "--seed", "5", "--jobs", "1",
        "--set", "family=constant", "--set", "true_c=0.6",
        "--set", "n_grid=60", "--set", "replications=2",
        "--set", "iterations=1200", "--set", "burn_in=300", "--set", "thin=5",
    ]
    assert main(args) == 0
    table = open(os.path.join(out, "study.csv")).read().splitlines()
    assert table[0] == "n,c_mean,c_rmse,failures"
    assert table[1].startswith("60,")
    assert os.path.exists(os.path.join(out, "study_seeds.txt"))


def test_cli_unknown_family_exit_code(tmp_path):
    assert main(["curves", "--set", "family=nosuch", "--set", "horizon=1", "--out", str(tmp_path)]) == 2
