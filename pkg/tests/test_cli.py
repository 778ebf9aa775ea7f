import json
import subprocess
import sys

import numpy as np
import pytest

from tempderiv import FourCoeffs, GammaTimeChange, ModelParams, SimConfig, simulate_paths
from tempderiv.cli import main

MODEL_CFG = {
    "alpha": 0.25, "t0": -3.0,
    "seasonal": [8.0, 0.0008, -5.9, -12.9],
    "vol": [3.5, 0.0, 0.5, 1.0],
    "timechange": {"a": 1.5, "b": 1.0, "mu1": 0.3},
}
CONTRACT_CFG = {"horizon_t": 30, "k1_strike": 330.0, "k2_strike": 250.0,
                "d1": 1.0, "d2": 1.0, "rate_r": 0.02}


@pytest.fixture
def price_config(tmp_path):
    cfg = {"model": MODEL_CFG, "contract": CONTRACT_CFG,
           "cos": {"auto": True, "l_mult": 10.0, "n1": 256, "n2": 256},
           "sim": {"n_paths": 20000, "seed": 7}}
    path = tmp_path / "price.json"
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.fixture
def sim_config(tmp_path):
    cfg = {"model": MODEL_CFG, "horizon": 40,
           "sim": {"n_paths": 3, "seed": 11}, "start_date": "2018-01-01"}
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.fixture
def fit_csv(tmp_path):
    model = ModelParams(alpha=0.25, t0=-5.0, seasonal=FourCoeffs(8.0, 0.0008, -6.0, -13.0),
                        vol=FourCoeffs(1.0, 0, 0, 0), timechange=GammaTimeChange(1.5, 1.0, 0.2),
                        horizon=701.0)
    _, paths = simulate_paths(model, SimConfig(step=1.0, n_paths=1, seed=2024), 700.0)
    base = np.datetime64("2016-01-01")
    lines = ["date,tavg"] + [f"{base + i},{v:.4f}" for i, v in enumerate(paths[0])]
    path = tmp_path / "daily.csv"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestFit:
    def test_fit_outputs_all_betas(self, fit_csv, tmp_path):
        out = tmp_path / "fit.json"
        rc = main(["fit", fit_csv, "--out", str(out), "--vol-shape", "constant"])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert len(payload["seasonal"]["estimate"]) == 4
        assert payload["alpha"]["estimate"] > 0
        assert {"a", "b", "mu1"} <= payload["timechange"].keys()

    def test_gap_csv_exit_2(self, tmp_path, capsys):
        lines = ["date,tavg"]
        base = np.datetime64("2020-01-01")
        for i in range(40):
            val = "" if 10 <= i < 20 else "5.0"
            lines.append(f"{base + i},{val}")
        path = tmp_path / "gap.csv"
        path.write_text("\n".join(lines) + "\n")
        rc = main(["fit", str(path)])
        assert rc == 2
        assert "gap" in capsys.readouterr().err


class TestPrice:
    def test_zero_ticks_price_zero(self, tmp_path):
        cfg = {"model": MODEL_CFG,
               "contract": dict(CONTRACT_CFG, d1=0.0, d2=0.0)}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        out = tmp_path / "price.json"
        assert main(["price", "--config", str(p), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["price"] == 0.0

    def test_price_with_mc_flag(self, price_config, tmp_path):
        out = tmp_path / "report.json"
        rc = main(["price", "--config", price_config, "--out", str(out),
                   "--mc", "--paths", "20000"])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["theta"]["source"] == "solved"
        assert "price" in payload and "mc" in payload
        assert payload["mc"]["within_3_stderr"] is True
        assert payload["convergence"]["relative_change"] < 1e-6

    def test_alpha_sweep_rows(self, tmp_path):
        cfg = {"model": MODEL_CFG, "contract": CONTRACT_CFG,
               "alpha_sweep": [0.15, 0.25, 0.35]}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        out = tmp_path / "sweep.json"
        assert main(["price", "--config", str(p), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        alphas = [row["alpha"] for row in payload["alpha_sweep"]]
        assert alphas == [0.15, 0.25, 0.35] and alphas == sorted(alphas)
        assert all("price" in row and "theta" in row for row in payload["alpha_sweep"])

    def test_no_bracket_exit_4(self, tmp_path, capsys):
        cfg = {"model": dict(MODEL_CFG, t0=3000.0, vol=[1e-6, 0, 0, 0],
                             seasonal=[0.0, 0, 0, 0], timechange={"a": 1.0, "b": 1.0, "mu1": 0.0}),
               "contract": CONTRACT_CFG}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        assert main(["price", "--config", str(p)]) == 4
        assert "no sign change" in capsys.readouterr().err

    def test_missing_config_exit_2(self):
        assert main(["price"]) == 2


class TestSimulate:
    def test_deterministic_repeat(self, sim_config, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", "--config", sim_config, "--out", str(out1)]) == 0
        assert main(["simulate", "--config", sim_config, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_row_count(self, sim_config, tmp_path):
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--config", sim_config, "--out", str(out),
                     "--paths", "100"]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 1 + 100 * 41  # header + n_paths * (horizon + 1)

    def test_noiseless_equals_deterministic(self, tmp_path):
        cfg = {"model": dict(MODEL_CFG, vol=[0.0, 0.0, 0.0, 0.0]), "horizon": 10,
               "sim": {"n_paths": 1, "seed": 3}}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        out = tmp_path / "det.csv"
        assert main(["simulate", "--config", str(p), "--out", str(out)]) == 0
        rows = [line.split(",") for line in out.read_text().strip().split("\n")[1:]]
        temps = np.array([float(r[2]) for r in rows])
        model = ModelParams(alpha=0.25, t0=-3.0, seasonal=FourCoeffs(8.0, 0.0008, -5.9, -12.9),
                            vol=FourCoeffs(0, 0, 0, 0), timechange=GammaTimeChange(1.5, 1.0, 0.3))
        expected = model.det_mean(np.arange(11.0))
        assert np.max(np.abs(temps - expected)) < 1e-9

    def test_seed_required(self, tmp_path, capsys):
        cfg = {"model": MODEL_CFG, "horizon": 10, "sim": {"n_paths": 1}}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        assert main(["simulate", "--config", str(p)]) == 2


class TestDensity:
    def test_density_integrates_to_one(self, tmp_path):
        cfg = {"model": MODEL_CFG, "horizon_t": 30, "measure": "P", "points": 513}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        out = tmp_path / "density.csv"
        assert main(["density", "--config", str(p), "--out", str(out)]) == 0
        rows = np.array([[float(v) for v in line.split(",")]
                         for line in out.read_text().strip().split("\n")[1:]])
        integral = np.trapezoid(rows[:, 1], rows[:, 0])
        assert integral == pytest.approx(1.0, abs=1e-3)

    def test_q_measure_density(self, tmp_path):
        cfg = {"model": MODEL_CFG, "contract": CONTRACT_CFG, "horizon_t": 30,
               "measure": "Q", "points": 129}
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg))
        out = tmp_path / "density_q.csv"
        assert main(["density", "--config", str(p), "--out", str(out)]) == 0
        assert len(out.read_text().strip().split("\n")) == 130


class TestStats:
    def test_constant_file(self, tmp_path):
        base = np.datetime64("2020-01-01")
        lines = ["date,tavg"] + [f"{base + i},5.0" for i in range(60)]
        src = tmp_path / "const.csv"
        src.write_text("\n".join(lines) + "\n")
        out = tmp_path / "stats.json"
        assert main(["stats", str(src), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["summary"]["std"] == 0.0
        assert payload["summary"]["skewness"] is None  # undefined marker

    def test_histogram_counts_sum_to_n(self, fit_csv, tmp_path):
        out = tmp_path / "stats.json"
        assert main(["stats", fit_csv, "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert sum(payload["histogram"]["counts"]) == payload["input"]["n"]
        assert len(payload["kde"]["x"]) == len(payload["kde"]["density"]) == 256


class TestDeterminism:
    def test_price_byte_identical(self, price_config, tmp_path):
        out1, out2 = tmp_path / "p1.json", tmp_path / "p2.json"
        main(["price", "--config", price_config, "--out", str(out1), "--mc"])
        main(["price", "--config", price_config, "--out", str(out2), "--mc"])
        assert out1.read_bytes() == out2.read_bytes()

    def test_entry_point_runs(self, tmp_path):
        res = subprocess.run([sys.executable, "-m", "tempderiv.cli", "--help"],
                             capture_output=True, text=True)
        assert res.returncode == 0
        assert "fit" in res.stdout and "price" in res.stdout
