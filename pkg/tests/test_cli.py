import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tto_workbench.cli import dispatch, load_payload, main
from tto_workbench.serialize import dumps

from conftest import blaschke_products

Z2 = '{"constant":[1,0],"zeros":[[0,0],[0,0]]}'
Z3 = '{"constant":[1,0],"zeros":[[0,0],[0,0],[0,0]]}'
NEG = '{"constant":[1,0],"zeros":[[0.1,0],[0.2,0],[0.3,0]]}'


def run(*argv, stdin=None):
    return dispatch(list(argv), stdin)


def theta_json(B):
    return json.dumps({"constant": [B.constant.real, B.constant.imag],
                       "zeros": [[z.real, z.imag] for z in B.zeros]})


class TestDispatch:
    def test_kernel_at_origin(self):
        code, doc = run("kernel", "--theta", Z2, "--lambda", "[0,0]")
        assert code == 0
        assert np.allclose(doc["coeffs"], [[1, 0], [0, 0]], atol=1e-12)
        assert doc["quad_points"] >= 4
        assert "membership" in doc["tolerances"]

    def test_negative_iso_decision(self):
        code, doc = run("iso", "decide", "--theta1", Z3, "--theta2", NEG)
        assert code == 1
        assert doc["certificate"] is None
        assert doc["diagnostics"]["max_invariant_gap"] > 0.1

    def test_positive_iso_decision_and_verify(self, tmp_path):
        B = '{"constant":[1,0],"zeros":[[0.3,0],[0,0.2]]}'
        code, doc = run("iso", "decide", "--theta1", B, "--theta2", B)
        assert code == 0
        cert = tmp_path / "cert.json"
        cert.write_text(dumps(doc["certificate"]))
        code, doc = run("iso", "verify", "--theta1", B, "--theta2", B, "--cert", str(cert))
        assert code == 0

    def test_unknown_subcommand(self):
        code, doc = run("frobnicate")
        assert code == 2
        assert doc["error"] == "usage"
        assert doc["quad_points"] is None

    def test_missing_subcommand(self):
        assert run()[0] == 2

    def test_bad_json(self):
        code, doc = run("kernel", "--theta", "{not json", "--lambda", "[0,0]")
        assert code == 2
        assert doc["error"] == "invalid input"

    def test_stdin_payload(self):
        code, doc = run("kernel", "--theta", "-", "--lambda", "[0,0]", stdin=io.StringIO(Z2))
        assert code == 0
        assert np.allclose(doc["coeffs"], [[1, 0], [0, 0]], atol=1e-12)

    def test_file_payload(self, tmp_path):
        path = tmp_path / "theta.json"
        path.write_text(Z2)
        assert load_payload(str(path)) == json.loads(Z2)

    def test_global_flags_before_and_after(self):
        _, before = run("--tol", "1e-6", "zn-test", "--theta", Z3)
        _, after = run("zn-test", "--theta", Z3, "--tol", "1e-6")
        assert before["tolerances"] == after["tolerances"]
        assert before["tolerances"] != run("zn-test", "--theta", Z3)[1]["tolerances"]

    def test_nonpositive_tol_rejected(self):
        assert run("--tol", "0", "zn-test", "--theta", Z3)[0] == 2

    def test_zn_test_exit_codes(self):
        assert run("zn-test", "--theta", Z3)[0] == 0
        assert run("zn-test", "--theta", NEG)[0] == 1

    def test_membership_exit_codes(self):
        assert run("tto", "membership", "--theta", Z2, "--matrix", "[[[1,0],[2,0]],[[0,0],[1,0]]]")[0] == 0
        assert run("tto", "membership", "--theta", Z2, "--matrix", "[[[1,0],[0,0]],[[0,0],[0,0]]]")[0] == 1

    def test_realize_jordan(self):
        code, doc = run("realize", "jordan", "--spec", "[[[2,0],2]]", "--zeros", "[[0,0]]")
        assert code == 0
        assert doc["witness_kind"] == "similarity"
        assert doc["residual"] < 1e-7

    def test_realize_rank1(self):
        code, doc = run("realize", "rank1", "--u", "[[1,0],[0,0]]", "--v", "[[0.5,0],[0.8,0]]")
        assert code == 0
        assert doc["witness_kind"] == "unitary"

    def test_blaschke_eval(self):
        code, doc = run("blaschke", "eval", "--theta", Z2, "--z", "[0.5,0]")
        assert code == 0
        assert json.loads(dumps(doc)) == doc


class TestMain:
    def test_out_file_matches_stdout(self, tmp_path, capsys):
        out = tmp_path / "doc.json"
        code = main(["distance", "--z1", "[0,0]", "--z2", "[0.5,0]", "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert out.read_text() == printed
        assert json.loads(printed)["distance"] == pytest.approx(math.log(3), abs=1e-15)

    def test_no_file_without_out(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        main(["distance", "--z1", "[0,0]", "--z2", "[0.5,0]"])
        assert list(tmp_path.iterdir()) == []

    def test_console_script_exit_code(self):
        proc = subprocess.run([sys.executable, "-m", "tto_workbench.cli", "frobnicate"],
                              capture_output=True, text=True)
        assert proc.returncode == 2
        assert json.loads(proc.stdout)["error"] == "usage"


@given(blaschke_products(1, 4))
def test_output_round_trips(B):
    argv = ["critical-points", "--theta", theta_json(B)]
    text = dumps(dispatch(argv)[1])
    assert dumps(dispatch(argv)[1]) == text
    # an emitted theta fed back in reproduces the same downstream output
    emitted = dumps(dispatch(["blaschke", "sharp", "--theta", theta_json(B)])[1]["theta"])
    twice = dumps(dispatch(["blaschke", "sharp", "--theta", emitted])[1]["theta"])
    back = dumps(dispatch(["blaschke", "sharp", "--theta", twice])[1]["theta"])
    assert back == emitted
    assert json.loads(dumps(json.loads(text))) == json.loads(text)


class TestSelftest:
    def test_fast(self):
        code, doc = run("selftest", "fast")
        assert code == 0
        names = {c["name"] for c in doc["criteria"]}
        assert {"dim_TTO", "csym_defect_max"} <= names
        dim = next(c for c in doc["criteria"] if c["name"] == "dim_TTO")
        assert dim["passed"]
        csym = next(c for c in doc["criteria"] if c["name"] == "csym_defect_max")
        assert csym["measured"] < 1e-10
