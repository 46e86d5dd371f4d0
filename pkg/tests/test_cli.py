import json
from fractions import Fraction as F

import pytest

from tpflag import RationalMatrix, evaluate_params, sample_positive
from tpflag.cli import main
from tpflag.weyl import longest_element


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def matrix_file(tmp_path, name, m):
    return write_json(tmp_path / name, m.to_json_dict())


@pytest.fixture
def lower_member(tmp_path):
    m = RationalMatrix.from_rows([[1, 0], [1, 1]])
    return matrix_file(tmp_path, "lower.json", m)


class TestCheck:
    def test_member_exits_zero(self, tmp_path, capsys, lower_member):
        code, out = run(capsys, "check", lower_member, "--kind", "lower")
        assert code == 0
        assert json.loads(out)["verdict"]["member"] is True

    def test_identity_g_positive_exits_one(self, tmp_path, capsys):
        path = matrix_file(tmp_path, "id.json", RationalMatrix.identity(3))
        code, out = run(capsys, "check", path, "--kind", "g")
        assert code == 1
        verdict = json.loads(out)["verdict"]
        assert verdict["member"] is False
        assert verdict["witness"]["rows"]

    def test_truncated_json_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 2, "entries": [["1", "0"]')
        code, _ = run(capsys, "check", str(bad), "--kind", "lower")
        assert code == 2

    def test_missing_file_exits_two(self, capsys):
        code, _ = run(capsys, "check", "/nonexistent.json", "--kind", "lower")
        assert code == 2


def sample_instance(tmp_path, capsys, n=3, seed=5):
    path = tmp_path / "instance.json"
    code, out = run(capsys, "sample", "--kind", "instance", "--n", str(n),
                    "--seed", str(seed), "--output", str(path))
    assert code == 0
    return json.loads(path.read_text()), str(path)


class TestTheta:
    def test_forward_recovers_sampled_targets(self, tmp_path, capsys):
        instance, path = sample_instance(tmp_path, capsys)
        code, out = run(capsys, "theta", "forward", "--instance", path)
        assert code == 0
        assert json.loads(out)["z"] == instance["z"]

    def test_solve_closed_round_trips(self, tmp_path, capsys):
        instance, path = sample_instance(tmp_path, capsys)
        code, out = run(capsys, "theta", "solve", "--instance", path,
                        "--method", "closed")
        assert code == 0
        payload = json.loads(out)
        expected = [F(c) for c in instance["t"]]
        assert payload["residual"] < 1e-12
        for got, want in zip(payload["solution"], expected):
            assert abs(got - float(want)) < 1e-9

    def test_solve_methods_agree(self, tmp_path, capsys):
        instance, path = sample_instance(tmp_path, capsys, n=2, seed=9)
        _, closed = run(capsys, "theta", "solve", "--instance", path,
                        "--method", "closed")
        _, numeric = run(capsys, "theta", "solve", "--instance", path,
                         "--method", "numeric", "--seed", "3")
        a = json.loads(closed)["solution"][0]
        b = json.loads(numeric)["solution"][0]
        assert abs(a - b) / a < 1e-10

    def test_symmetric_irrational_instance(self, tmp_path, capsys):
        # coordinates sqrt(2)+1 (as floats) map the symmetric 3x3 pair to
        # targets (1, 1); solving the targets recovers the coordinates
        u = {"n": 3, "entries": [["1", "0", "0"], ["1", "1", "0"],
                                 ["1/2", "1", "1"]]}
        root = 2 ** 0.5 + 1
        path = write_json(tmp_path / "sym.json",
                          {"u": u, "uprime": u, "t": [root, root],
                           "z": ["1", "1"]})
        code, out = run(capsys, "theta", "forward", "--instance", path)
        assert code == 0
        assert all(abs(v - 1) < 1e-12 for v in json.loads(out)["z"])
        code, out = run(capsys, "theta", "solve", "--instance", path)
        assert code == 0
        assert all(abs(v - root) < 1e-10 for v in json.loads(out)["solution"])

    def test_forward_outside_domain_exits_three(self, tmp_path, capsys):
        n = 2
        w0 = longest_element(range(1, n), n)
        u = evaluate_params(sample_positive(w0, "lower", 1), "lower", n)
        instance = {"u": u.to_json_dict(), "uprime": u.to_json_dict(),
                    "t": ["1/1000000"]}
        path = write_json(tmp_path / "bad.json", instance)
        code, _ = run(capsys, "theta", "forward", "--instance", path)
        assert code == 3

    def test_solve_without_convergence_exits_four(self, tmp_path, capsys):
        _, path = sample_instance(tmp_path, capsys, n=4, seed=2)
        code, _ = run(capsys, "theta", "solve", "--instance", path,
                      "--method", "numeric", "--starts", "1",
                      "--max-iterations", "1", "--newton-tol", "1e-15")
        assert code == 4


class TestVerify:
    def config(self, tmp_path, **overrides):
        payload = {"n": 2, "trials": 3, "seed": 11, "starts": 4,
                   "output_csv": str(tmp_path / "campaign.csv"),
                   "output_json": str(tmp_path / "campaign.json")}
        payload.update(overrides)
        return write_json(tmp_path / "config.json", payload)

    def test_small_campaign_succeeds(self, tmp_path, capsys):
        path = self.config(tmp_path)
        code, out = run(capsys, "verify", "--config", path)
        assert code == 0
        csv_lines = (tmp_path / "campaign.csv").read_text().splitlines()
        assert csv_lines[0] == \
            "instance_id,n,seed,residual,starts,distinct_limits,iterations_max,roundtrip_err"
        assert len(csv_lines) == 4
        for line in csv_lines[1:]:
            fields = line.split(",")
            assert float(fields[3]) < 1e-12   # residual
            assert fields[5] == "1"           # distinct_limits
        summary = json.loads((tmp_path / "campaign.json").read_text())
        assert summary["success_rate"] == 1.0
        assert summary["all_unique_limits"] is True
        assert "generated_at" in summary

    def test_reports_regenerate_identically(self, tmp_path, capsys):
        path = self.config(tmp_path)
        run(capsys, "verify", "--config", path)
        first_csv = (tmp_path / "campaign.csv").read_bytes()
        first_json = json.loads((tmp_path / "campaign.json").read_text())
        run(capsys, "verify", "--config", path)
        assert (tmp_path / "campaign.csv").read_bytes() == first_csv
        second_json = json.loads((tmp_path / "campaign.json").read_text())
        first_json.pop("generated_at")
        second_json.pop("generated_at")
        assert first_json == second_json

    def test_bad_config_exits_two(self, tmp_path, capsys):
        path = self.config(tmp_path, trials=0)
        code, _ = run(capsys, "verify", "--config", path)
        assert code == 2


class TestFlag:
    def g_file(self, tmp_path, capsys, n=3, seed=4):
        path = tmp_path / "g.json"
        run(capsys, "sample", "--kind", "g", "--n", str(n),
            "--seed", str(seed), "--output", str(path))
        return str(path)

    def test_zeta_emits_float_and_snapped(self, tmp_path, capsys):
        code, out = run(capsys, "flag", "zeta", self.g_file(tmp_path, capsys))
        assert code == 0
        payload = json.loads(out)
        assert "rep_float" in payload and "rep" in payload
        snapped = RationalMatrix.from_json_dict(payload["rep"])
        for i in range(3):
            for j in range(3):
                assert abs(float(snapped.rows[i][j])
                           - payload["rep_float"][i][j]) < 1e-8

    def test_zeta_non_member_exits_one(self, tmp_path, capsys):
        path = matrix_file(tmp_path, "id.json", RationalMatrix.identity(2))
        code, out = run(capsys, "flag", "zeta", path)
        assert code == 1
        assert "verdict" in json.loads(out)

    def test_classify_includes_perron_verdict(self, tmp_path, capsys):
        code, out = run(capsys, "flag", "classify",
                        self.g_file(tmp_path, capsys), "--J", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["J"] == [1]
        assert payload["perron_check"]["ok"] is True

    def test_classify_full_type_gives_identity(self, tmp_path, capsys):
        code, out = run(capsys, "flag", "classify",
                        self.g_file(tmp_path, capsys), "--J", "1,2")
        assert code == 0
        rep = json.loads(out)["rep_float"]
        for i in range(3):
            for j in range(3):
                assert abs(rep[i][j] - (1.0 if i == j else 0.0)) < 1e-9

    def test_split_trivial_parabolic(self, tmp_path, capsys):
        n = 3
        w0 = longest_element(range(1, n), n)
        u = evaluate_params(sample_positive(w0, "lower", 6), "lower", n)
        path = matrix_file(tmp_path, "u.json", u)
        code, out = run(capsys, "flag", "split", path, "--J", "")
        assert code == 0
        payload = json.loads(out)
        assert RationalMatrix.from_json_dict(payload["first"]) == u
        assert RationalMatrix.from_json_dict(payload["second"]) == \
            RationalMatrix.identity(n)

    def test_sigma_round_trip_through_files(self, tmp_path, capsys):
        # build a fibre element: u' v t u'^-1 with t = diag(2, 1/2)
        uprime = RationalMatrix.from_rows([[1, 0], [1, 1]])
        v = RationalMatrix.from_rows([[1, 1], [0, 1]])
        t = RationalMatrix.diagonal([F(2), F(1, 2)])
        g = uprime @ v @ t @ uprime.inverse()
        g_path = matrix_file(tmp_path, "g.json", g)
        b_path = matrix_file(tmp_path, "b.json", uprime)
        code, out = run(capsys, "flag", "sigma", "--g", g_path, "--b", b_path)
        assert code == 0
        payload = json.loads(out)
        assert payload["v"]["params"] == ["1"]
        assert payload["zvec"] == ["1"]

    def test_sigma_missing_args_exits_two(self, capsys):
        code, _ = run(capsys, "flag", "sigma")
        assert code == 2


class TestSample:
    def test_deterministic_output(self, capsys):
        code1, out1 = run(capsys, "sample", "--kind", "g", "--n", "3",
                          "--seed", "42")
        code2, out2 = run(capsys, "sample", "--kind", "g", "--n", "3",
                          "--seed", "42")
        assert code1 == code2 == 0
        assert out1 == out2

    def test_lower_sample_is_member(self, capsys, tmp_path):
        code, out = run(capsys, "sample", "--kind", "lower", "--n", "4",
                        "--seed", "12")
        assert code == 0
        payload = json.loads(out)
        path = write_json(tmp_path / "m.json", payload["matrix"])
        code, _ = run(capsys, "check", path, "--kind", "lower")
        assert code == 0

    def test_bad_kind_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["sample", "--kind", "weird", "--n", "3"])
