import json
import subprocess
import sys

import pytest

from lagwronski import cli
from lagwronski.symplectic import SymplecticSpace
from lagwronski.serial import tensor_to_json

THETA = json.dumps(tensor_to_json(SymplecticSpace.darboux(2).theta))


def run(*argv):
    return subprocess.run([sys.executable, "-m", "lagwronski", *argv], capture_output=True, text=True)


def call(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerify:
    @pytest.mark.parametrize("suite", ["involution", "decomposition", "wronski", "adjoint", "poles"])
    def test_suites_pass(self, capsys, suite):
        code, out, _ = call(capsys, "verify", suite, "--m", "2", "--seed", "7")
        report = json.loads(out)
        assert code == 0 and report["passed"] and report["checks"]
        assert all(c["name"].startswith(suite + ".") for c in report["checks"])

    def test_all_byte_identical_and_parallel(self):
        a = run("verify", "all", "--m", "2")
        b = run("verify", "all", "--m", "2")
        c = run("verify", "all", "--m", "2", "--jobs", "3")
        assert a.returncode == 0
        assert a.stdout == b.stdout == c.stdout

    def test_out_of_range(self, capsys):
        code, _, err = call(capsys, "verify", "wronski", "--m", "9")
        assert code == 2 and json.loads(err)["error"] == "InputError"

    def test_unknown_suite(self):
        r = run("verify", "nonsense")
        assert r.returncode == 2

    def test_check_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setitem(cli.SUITE_FUNCS, "adjoint", lambda m, seed, trials: [cli._check("forced", False)])
        code, out, _ = call(capsys, "verify", "adjoint", "--m", "2")
        assert code == 1 and not json.loads(out)["passed"]

    def test_timing_opt_in(self, capsys):
        _, out, _ = call(capsys, "verify", "adjoint", "--m", "1")
        assert "wall_time" not in json.loads(out)
        _, out, _ = call(capsys, "verify", "adjoint", "--m", "1", "--timing")
        assert "wall_time" in json.loads(out)


class TestCommands:
    def test_wronski(self, capsys):
        code, out, _ = call(capsys, "wronski", "--basis", "[[0,1],[0,0,1]]")
        r = json.loads(out)["results"]
        assert code == 0 and r["wronskian"] == ["0", "0", "1"]

    def test_wronski_d4_fiber(self, capsys):
        code, out, _ = call(capsys, "wronski", "--basis", "[[1],[0,1],[0,0,1],[0,0,0,1]]")
        r = json.loads(out)["results"]
        assert code == 0 and r["center_dim"] == 1 and r["self_dual"]
        assert r["fiber"]["multiplicities"] == [1, 1] and r["fiber"]["pairing"] == [1, 0]

    def test_involution_theta(self, capsys):
        code, out, _ = call(capsys, "involution", "--m", "2", "--tensor", THETA)
        r = json.loads(out)["results"]
        assert code == 0 and r["eigenvalue"] == -1
        neg = [{"index": d["index"], "coeff": "-" + d["coeff"]} for d in json.loads(THETA)]
        assert r["image"] == neg

    def test_poles_zero_gain(self, capsys, tmp_path):
        from lagwronski.exact import charpoly
        from lagwronski.serial import matrix_to_json, poly_to_json
        from lagwronski.syslin import demo_system

        sysm = demo_system(0)
        path = tmp_path / "demo.json"
        path.write_text(json.dumps({"A": matrix_to_json(sysm.A), "B": matrix_to_json(sysm.B), "C": matrix_to_json(sysm.C)}))
        code, out, _ = call(capsys, "poles", "--system", str(path), "--K", "[[0,0],[0,0]]")
        r = json.loads(out)["results"]
        assert code == 0 and r["pole_poly"] == poly_to_json(charpoly(sysm.A))
        assert r["symmetric"] and r["mcmillan"] == 4 and r["same_poles"]

    def test_poles_demo(self, capsys):
        code, out, _ = call(capsys, "poles", "--system", "demo", "--K", "[[1,2],[3,4]]")
        r = json.loads(out)["results"]
        assert code == 0 and r["partner_K"] == [["1", "3"], ["2", "4"]]

    def test_fiber_default_center(self, capsys):
        code, out, _ = call(capsys, "fiber", "--plane", "[[1,0],[0,1],[0,0],[0,0]]")
        assert code == 0
        assert len(json.loads(out)["results"]["points"]) == 2

    def test_degree(self, capsys):
        code, out, _ = call(capsys, "degree", "--m", "2", "--trials", "5")
        assert code == 0 and json.loads(out)["results"]["max_fiber"] == 2

    def test_output_file(self, capsys, tmp_path):
        dest = tmp_path / "r.json"
        code, out, _ = call(capsys, "verify", "adjoint", "--m", "1", "--output", str(dest))
        assert code == 0 and out == "" and json.loads(dest.read_text())["passed"]


class TestErrors:
    def test_json_parse_error_position(self, capsys):
        code, _, err = call(capsys, "wronski", "--basis", "[[1],\n [0, 1")
        e = json.loads(err)
        assert code == 2 and "line 2" in e["message"] and "column" in e["message"]

    def test_input_file_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"basis": [1,]}')
        code, _, err = call(capsys, "wronski", "--input", str(bad))
        assert code == 2 and "line 1, column" in json.loads(err)["message"]

    def test_missing_file(self, capsys):
        code, _, err = call(capsys, "wronski", "--input", "/nonexistent/x.json")
        assert code == 2

    def test_semantic_error_relayed(self, capsys):
        code, _, err = call(capsys, "wronski", "--basis", "[[0,1],[0,2]]")
        assert code == 2 and json.loads(err)["error"] == "NotAdmissibleError"

    def test_wrong_grade(self, capsys):
        code, _, err = call(capsys, "involution", "--m", "2", "--tensor", '[{"index": [0], "coeff": "1"}]')
        assert code == 2

    def test_help_lists_commands(self):
        r = run("--help")
        for name in ("verify", "fiber", "degree", "wronski", "involution", "poles"):
            assert name in r.stdout

    def test_log_env(self):
        import os

        env = {**os.environ, "LW_LOG": "info"}
        r = subprocess.run([sys.executable, "-m", "lagwronski", "verify", "adjoint", "--m", "1"],
                           capture_output=True, text=True, env=env)
        assert r.returncode == 0 and "INFO" in r.stderr
