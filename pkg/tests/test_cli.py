"""CLI: outputs, manifests, replay determinism, exit codes."""

import json
import hashlib
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from gltshrink.cli import main
from gltshrink.distributions import Gpd, gpd_sample, make_rng


def run_cli(*args):
    return CliRunner().invoke(main, [str(a) for a in args], catch_exceptions=False)


def digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    res = run_cli("simulate", "--n", 30, "--p", 20, "--q", 3, "--seed", 11,
                  "--out-dir", out)
    assert res.exit_code == 0
    return out


class TestSimulate:
    def test_outputs_exist(self, dataset):
        for name in ["y.csv", "X.csv", "truth.csv", "meta.json", "manifest.json"]:
            assert (dataset / name).exists()
        meta = json.loads((dataset / "meta.json").read_text())
        assert meta["n"] == 30 and meta["p"] == 20 and meta["sigma0"] > 0

    def test_matrix_shape(self, dataset):
        X = np.loadtxt(dataset / "X.csv", delimiter=",", skiprows=1)
        assert X.shape == (30, 20)
        assert np.allclose(np.linalg.norm(X, axis=0), 1.0, atol=1e-12)

    def test_deterministic(self, dataset, tmp_path):
        res = run_cli("simulate", "--n", 30, "--p", 20, "--q", 3, "--seed", 11,
                      "--out-dir", tmp_path)
        assert res.exit_code == 0
        assert digest(tmp_path / "y.csv") == digest(dataset / "y.csv")

    def test_env_validation_exit_2(self, tmp_path):
        res = CliRunner().invoke(
            main, ["simulate", "--n", "2", "--p", "5", "--q", "1",
                   "--out-dir", str(tmp_path / "bad")],
        )
        assert res.exit_code == 2


class TestFit:
    def test_fit_and_replay_bit_identical(self, dataset, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        res = run_cli("fit", "--prior", "glt", "--y", dataset / "y.csv",
                      "--x", dataset / "X.csv", "--burn", 200, "--keep", 200,
                      "--thin", 5, "--seed", 17, "--out-dir", out1)
        assert res.exit_code == 0
        res = run_cli("replay", "--manifest", out1 / "manifest.json", "--out-dir", out2)
        assert res.exit_code == 0
        for name in ["draws.csv", "summary.json"]:
            assert digest(out1 / name) == digest(out2 / name)

    def test_same_seed_same_digests(self, dataset, tmp_path):
        digests = []
        for sub in ("r1", "r2"):
            out = tmp_path / sub
            res = run_cli("fit", "--prior", "horseshoe", "--y", dataset / "y.csv",
                          "--x", dataset / "X.csv", "--burn", 100, "--keep", 100,
                          "--thin", 5, "--seed", 23, "--out-dir", out)
            assert res.exit_code == 0
            digests.append(digest(out / "draws.csv"))
        assert digests[0] == digests[1]

    def test_identity_design_reversed_s(self, tmp_path):
        # 50 z-values: strong signals stay near the line, noise shrinks
        rng = make_rng(400)
        y = rng.standard_normal(50)
        y[:5] = np.array([5.0, -5.5, 4.5, 6.0, -4.8])
        ypath = tmp_path / "z.csv"
        ypath.write_text("y\n" + "\n".join(f"{v!r}" for v in y) + "\n")
        out = tmp_path / "fit"
        res = run_cli("fit", "--prior", "glt", "--y", ypath, "--identity-design",
                      "--burn", 2000, "--keep", 2000, "--thin", 20,
                      "--seed", 2, "--out-dir", out)
        assert res.exit_code == 0
        s = json.loads((out / "summary.json").read_text())
        beta = np.array(s["beta_mean"])
        signals = np.abs(y) > 4
        assert np.all(np.abs(beta[signals] - y[signals]) < 0.3 * np.abs(y[signals]))
        noise = np.abs(y) < 1
        assert np.all(np.abs(beta[noise]) < 0.5 * np.abs(y[noise]) + 0.05)
        assert not s["collapse"]

    def test_malformed_csv_exit_2_with_location(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("y\n1.0\nnot-a-number\n")
        res = CliRunner().invoke(
            main, ["fit", "--y", str(bad), "--identity-design",
                   "--out-dir", str(tmp_path / "out")],
        )
        assert res.exit_code == 2
        assert "row 3" in res.output and "column 1" in res.output

    def test_dimension_mismatch_exit_2(self, dataset, tmp_path):
        y_short = tmp_path / "short.csv"
        y_short.write_text("y\n1.0\n2.0\n")
        res = CliRunner().invoke(
            main, ["fit", "--y", str(y_short), "--x", str(dataset / "X.csv"),
                   "--out-dir", str(tmp_path / "out")],
        )
        assert res.exit_code == 2

    def test_sampler_abort_exit_3(self, dataset, tmp_path, monkeypatch):
        from gltshrink import cli as cli_module
        from gltshrink.errors import SamplerAbort

        def boom(*args, **kwargs):
            raise SamplerAbort("synthetic failure")

        monkeypatch.setattr(cli_module, "run_chain", boom)
        res = CliRunner().invoke(
            main, ["fit", "--y", str(dataset / "y.csv"), "--x", str(dataset / "X.csv"),
                   "--burn", "100", "--keep", "100", "--thin", "5",
                   "--out-dir", str(tmp_path / "out")],
        )
        assert res.exit_code == 3


class TestScenario:
    def test_desk_scale_smoke_and_worker_independence(self, tmp_path, monkeypatch):
        outs = []
        for workers, sub in (("1", "w1"), ("4", "w4")):
            monkeypatch.setenv("GLT_THREADS", workers)
            out = tmp_path / sub
            res = run_cli("scenario", "--scenario", 1, "--replicates", 3,
                          "--n", 30, "--p", 40, "--burn", 100, "--keep", 100,
                          "--thin", 10, "--seed", 5, "--out-dir", out)
            assert res.exit_code == 0
            outs.append(out)
        for name in ["medians.csv", "replicates.csv"]:
            assert digest(outs[0] / name) == digest(outs[1] / name)
        lines = (outs[0] / "medians.csv").read_text().splitlines()
        assert lines[0].startswith("q,prior")
        assert len(lines) == 1 + 10 * 2  # ten grid points, both priors

    def test_manifest_protocol_flags(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GLT_THREADS", "2")
        out = tmp_path / "s"
        res = run_cli("scenario", "--scenario", 3, "--replicates", 2,
                      "--n", 25, "--p", 15, "--burn", 100, "--keep", 100,
                      "--thin", 10, "--seed", 6, "--out-dir", out)
        assert res.exit_code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["protocol"]["replicates"] == "desk-scale"
        assert manifest["protocol"]["iterations"] == "reduced"

    def test_scenario_replay(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GLT_THREADS", "2")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        res = run_cli("scenario", "--scenario", 2, "--replicates", 2,
                      "--n", 25, "--p", 15, "--burn", 100, "--keep", 100,
                      "--thin", 10, "--seed", 9, "--out-dir", out1)
        assert res.exit_code == 0
        res = run_cli("replay", "--manifest", out1 / "manifest.json", "--out-dir", out2)
        assert res.exit_code == 0
        assert digest(out1 / "medians.csv") == digest(out2 / "medians.csv")


class TestDensityEval:
    def test_glt_beta_symmetric_positive(self, tmp_path):
        res = run_cli("density-eval", "--kind", "glt-beta", "--tau", 1, "--xi", 2,
                      "--grid-points", 50, "--out-dir", tmp_path)
        assert res.exit_code == 0
        table = np.loadtxt(tmp_path / "table.csv", delimiter=",", skiprows=1)
        assert np.all(table[:, 1] > 0) and np.all(np.isfinite(table[:, 1]))
        assert np.allclose(table[:, 1], table[::-1, 1], rtol=1e-9)

    def test_hs_beta_tiny_tau_support_near_zero(self, tmp_path):
        res = run_cli("density-eval", "--kind", "hs-beta", "--tau", 0.001,
                      "--grid-min", -1, "--grid-max", 1, "--grid-points", 41,
                      "--out-dir", tmp_path)
        assert res.exit_code == 0
        table = np.loadtxt(tmp_path / "table.csv", delimiter=",", skiprows=1)
        x, dens = table[:, 0], table[:, 1]
        peak = dens.max()
        assert np.all(dens[np.abs(x) > 0.1] < 1e-3 * peak)

    def test_kappa_kinds(self, tmp_path):
        for kind in ("glt-kappa", "hs-kappa"):
            out = tmp_path / kind
            res = run_cli("density-eval", "--kind", kind, "--tau", 1, "--xi", 1.5,
                          "--grid-points", 21, "--out-dir", out)
            assert res.exit_code == 0
            table = np.loadtxt(out / "table.csv", delimiter=",", skiprows=1)
            assert np.all(table[:, 1] > 0)

    def test_domain_error_exit_2(self, tmp_path):
        res = CliRunner().invoke(
            main, ["density-eval", "--kind", "glt-beta", "--xi", "0.3",
                   "--out-dir", str(tmp_path)],
        )
        assert res.exit_code == 2


class TestHillPlot:
    def test_windowed_mean_near_shape(self, tmp_path):
        lam = gpd_sample(Gpd(1.0, 1.5), make_rng(9), size=5000)
        path = tmp_path / "lam.csv"
        path.write_text("lam\n" + "\n".join(f"{v!r}" for v in lam) + "\n")
        res = run_cli("hill-plot", "--lambdas", path, "--k-lo", 2, "--k-hi", 500,
                      "--out-dir", tmp_path)
        assert res.exit_code == 0
        table = np.loadtxt(tmp_path / "hillplot.csv", delimiter=",", skiprows=1)
        assert table.shape[0] == 4999
        assert table[0, 3] == pytest.approx(1.5, abs=0.25)

    def test_invalid_window_exit_2(self, tmp_path):
        path = tmp_path / "lam.csv"
        path.write_text("lam\n1.0\n2.0\n3.0\n")
        res = CliRunner().invoke(
            main, ["hill-plot", "--lambdas", str(path), "--k-hi", "10",
                   "--out-dir", str(tmp_path)],
        )
        assert res.exit_code == 2
