import json
import numpy as np
import pytest
from click.testing import CliRunner

from reegeom import cli, css, qstate

from conftest import random_density_matrix


@pytest.fixture
def runner():
    return CliRunner()


def write_state(path, rho):
    with open(path, "w") as fh:
        json.dump(cli.matrix_json(rho), fh)
    return str(path)


class TestDecompose:
    def test_bell_correlation_tensor(self, runner, tmp_path):
        p = write_state(tmp_path / "bell.json", qstate.BELL_STATES[0])
        out = tmp_path / "pauli.json"
        res = runner.invoke(cli.main, ["decompose", p, "--out", str(out)])
        assert res.exit_code == 0
        d = json.load(open(out))
        assert np.allclose(d["g"], np.diag([1, -1, 1]), atol=1e-12)
        assert d["concurrence"] == pytest.approx(1.0, abs=1e-10)
        assert d["ppt"] is False
        assert (tmp_path / "pauli.json.manifest.json").exists()

    def test_maximally_mixed_all_zero(self, runner, tmp_path):
        p = write_state(tmp_path / "mm.json", np.eye(4) / 4)
        res = runner.invoke(cli.main, ["decompose", p])
        assert res.exit_code == 0
        d = json.loads(res.output)
        assert np.allclose(d["r"], 0) and np.allclose(d["s"], 0)
        assert np.allclose(d["g"], 0)

    def test_invalid_matrix_exit_2(self, runner, tmp_path):
        p = write_state(tmp_path / "bad.json", np.eye(4, dtype=complex))
        res = runner.invoke(cli.main, ["decompose", p])
        assert res.exit_code == 2

    def test_reconstruct_round_trip(self, runner, tmp_path):
        rho = random_density_matrix(np.random.default_rng(1))
        p = write_state(tmp_path / "rho.json", rho)
        pauli = tmp_path / "pauli.json"
        back = tmp_path / "back.json"
        assert runner.invoke(cli.main, ["decompose", p, "--out", str(pauli)]).exit_code == 0
        assert runner.invoke(cli.main, ["reconstruct", str(pauli),
                                        "--out", str(back)]).exit_code == 0
        assert np.max(np.abs(cli.load_state(str(back)) - rho)) < 1e-12


class TestCss:
    def test_vp_example(self, runner, tmp_path):
        p = write_state(tmp_path / "vp.json", css._vp_state((0.5, 0.3, 0.2)))
        res = runner.invoke(cli.main, ["css", p])
        assert res.exit_code == 0
        d = json.loads(res.output)
        assert d["family"] == "GeneralizedVP"
        assert np.allclose(np.diag(d["css"]["re"]), [0.55, 0, 0, 0.45], atol=1e-12)

    def test_separable_horodecki(self, runner, tmp_path):
        p = write_state(tmp_path / "h.json", css._horodecki_state((0.2, 0.4, 0.4)))
        res = runner.invoke(cli.main, ["css", p])
        assert res.exit_code == 0
        d = json.loads(res.output)
        assert d["separable"] is True and d["ree"] == 0.0

    def test_other_geometric_exit_3(self, runner, tmp_path):
        rng = np.random.default_rng(2)
        while True:
            rho = random_density_matrix(rng)
            if css.classify(rho).kind is css.FamilyKind.OTHER:
                break
        p = write_state(tmp_path / "o.json", rho)
        res = runner.invoke(cli.main, ["css", p, "--method", "geometric"])
        assert res.exit_code == 3

    def test_bits_flag(self, runner, tmp_path):
        p = write_state(tmp_path / "bell.json", qstate.BELL_STATES[0])
        res = runner.invoke(cli.main, ["css", p, "--bits"])
        d = json.loads(res.output)
        assert d["units"] == "bits"
        assert d["ree"] == pytest.approx(1.0, abs=1e-10)


class TestSurface:
    def test_octahedron_samples(self, runner, tmp_path):
        out = tmp_path / "mesh.csv"
        res = runner.invoke(cli.main, ["surface", "--body", "L", "--r", "0",
                                       "--s", "0", "--n", "16", "--out", str(out)])
        assert res.exit_code == 0
        lines = open(out).read().splitlines()
        assert lines[0] == "q1,q2,q3,sheet"
        for line in lines[1:]:
            q1, q2, q3, sheet = line.split(",")
            assert abs(float(q1)) + abs(float(q2)) + abs(float(q3)) == \
                pytest.approx(1.0, abs=1e-8)
            assert sheet in ("mu", "nu")

    def test_deterministic_output(self, runner, tmp_path):
        args = ["surface", "--body", "T", "--r", "0.3", "--s", "0.3", "--n", "12"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        runner.invoke(cli.main, args + ["--out", str(a)])
        runner.invoke(cli.main, args + ["--out", str(b)])
        assert open(a).read() == open(b).read()

    def test_bad_flags_exit_2(self, runner, tmp_path):
        res = runner.invoke(cli.main, ["surface", "--body", "T", "--r", "2",
                                       "--s", "0", "--out", str(tmp_path / "x.csv")])
        assert res.exit_code == 2


class TestSweep:
    def test_schema_and_determinism(self, runner, tmp_path):
        args = ["sweep", "--r", "0.3", "--s", "0.3", "--families", "3",
                "--xsteps", "8", "--seed", "4"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert runner.invoke(cli.main, args + ["--out", str(a)]).exit_code == 0
        assert runner.invoke(cli.main, args + ["--out", str(b)]).exit_code == 0
        text = open(a).read()
        assert text.splitlines()[0] == "family_id,x,t1,t2,t3,tau1,tau2,tau3,r,s"
        assert text == open(b).read()

    def test_zero_families_empty_file(self, runner, tmp_path):
        out = tmp_path / "empty.csv"
        res = runner.invoke(cli.main, ["sweep", "--r", "0", "--s", "0",
                                       "--families", "0", "--out", str(out)])
        assert res.exit_code == 0
        assert open(out).read() == "family_id,x,t1,t2,t3,tau1,tau2,tau3,r,s\n"


class TestVerify:
    def test_families_and_revmap_pass(self, runner):
        res = runner.invoke(cli.main, ["verify", "--suite", "families"])
        assert res.exit_code == 0 and "PASS" in res.output
        res = runner.invoke(cli.main, ["verify", "--suite", "revmap"])
        assert res.exit_code == 0

    def test_oracle_tiny_budget_fails(self, runner):
        res = runner.invoke(cli.main, ["verify", "--suite", "oracle",
                                       "--max-iterations", "2"])
        assert res.exit_code == 1
        assert "NotConverged" in res.output

    def test_json_report(self, runner, tmp_path):
        out = tmp_path / "report.json"
        res = runner.invoke(cli.main, ["verify", "--suite", "revmap",
                                       "--out", str(out)])
        assert res.exit_code == 0
        d = json.load(open(out))
        assert d["passed"] == d["total"]
