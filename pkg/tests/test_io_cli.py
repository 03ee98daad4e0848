import json
import subprocess
import sys

import numpy as np
import pytest

from luob import cli
from luob.fixtures import example2, example3, load_fixture
from luob.hamfile import LoadError, dumps_spec, load_spec, parse_spec, save_spec, spec_document
from luob.locus import DegeneratingLocus, member_many
from luob.operators import HermitianOperator
from luob.pencil import pencil_from_operator


class TestHamFiles:
    def test_round_trip_dense(self, tmp_path):
        H = example2().H
        save_spec(tmp_path / "h.ham", H, name="ex2")
        assert np.max(np.abs(load_spec(tmp_path / "h.ham").matrix - H.matrix)) <= 1e-12

    def test_round_trip_generators(self, tmp_path):
        fx = example3()
        save_spec(tmp_path / "g.ham", name="g", vectors=fx.vectors, weights=fx.weights)
        assert np.max(np.abs(load_spec(tmp_path / "g.ham").matrix - fx.H.matrix)) <= 1e-12

    def test_weights_kept_as_written(self):
        doc = spec_document(name="w", vectors=example3().vectors, weights=[2.0, 0.5])
        parsed = parse_spec(dumps_spec(doc))
        assert abs(parsed.operator.trace() - 2.5) < 1e-12
        assert parsed.weights == [2.0, 0.5]

    def test_error_names_field_and_line(self):
        text = '{\n "dims": [2, 2],\n "generators": [\n  {"weight": 1, "amplitudes": [[1, 0], [0, 0]]}\n ]\n}'
        with pytest.raises(LoadError) as e:
            parse_spec(text)
        assert e.value.field_path == "generators[0].amplitudes" and e.value.line == 4

    @pytest.mark.parametrize("text", [
        "not json",
        '{"dims": [2, 0], "dense": []}',
        '{"dims": [2], "dense": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "generators": []}',
        '{"dims": [2], "dense": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}',
        '{"dims": [2], "generators": [{"weight": -1, "amplitudes": [[1, 0], [0, 0]]}]}',
        '{"dims": [2], "generators": [{"amplitudes": [[2, 0], [0, 0]]}]}',
        '{"dims": [2], "generators": [{"amplitudes": [[1, 0], [0]]}]}',
    ])
    def test_malformed_documents(self, text):
        with pytest.raises(LoadError):
            parse_spec(text)

    def test_format_is_valid_json(self):
        doc = spec_document(HermitianOperator(np.eye(2), (2,)), name="id")
        assert json.loads(dumps_spec(doc)) == doc


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_compare_exit_codes(self, capsys):
        assert run(["compare", "--fixture", "example4", "--theorem", "2"], capsys)[0] == 10
        assert run(["compare", "--fixture", "example3", "--theorem", "1"], capsys)[0] == 10
        assert run(["compare", "--fixture", "example3", "--self"], capsys)[0] == 0
        assert run(["compare", "--fixture", "example4", "--theorem", "1"], capsys)[0] == 11

    def test_auto_falls_back_to_theorem2(self, capsys):
        code, out, _ = run(["compare", "--fixture", "example4"], capsys)
        assert code == 10 and "full-Schmidt-rank" in out

    def test_swapcheck_and_theorem_aliases(self, capsys):
        assert run(["swapcheck", "--fixture", "example2"], capsys)[0] == 10
        assert run(["theorem2", "--fixture", "example4"], capsys)[0] == 10
        assert run(["theorem3", "--fixture", "ghz-w"], capsys)[0] == 10

    def test_invariants_json_is_deterministic(self, capsys):
        args = ["invariants", "--fixture", "example3", "--side", "A", "--format", "json", "--seed", "3"]
        c1, o1, _ = run(args, capsys)
        c2, o2, _ = run(args, capsys)
        assert c1 == 0 and o1 == o2
        doc = json.loads(o1)
        rows = {(r["operator"], r["k"]): r["signature"] for r in doc["invariants"]}
        assert rows[("H", 0)]["empty"] and rows[("H'", 0)]["empty"]
        assert len(rows[("H", 1)]["finite_points"]) == 2 and len(rows[("H'", 1)]["finite_points"]) == 1
        assert doc["seed"] == 3 and len(doc["inputs"][0]["sha256"]) == 64

    def test_smooth_cubic_reported(self, capsys):
        code, out, _ = run(["invariants", "--fixture", "example1:0,0,3.14159265", "--k", "2"], capsys)
        assert code == 0 and "smooth Hesse cubic k=-452.73" in out

    def test_zero_operator_full(self, tmp_path, capsys):
        save_spec(tmp_path / "zero.ham", HermitianOperator(np.zeros((4, 4)), (2, 2)), name="zero")
        code, out, _ = run(["invariants", "--input", str(tmp_path / "zero.ham")], capsys)
        assert code == 0 and out.count("full space") == 4

    def test_file_pair(self, tmp_path, capsys):
        fx = example3()
        save_spec(tmp_path / "a.ham", fx.H)
        save_spec(tmp_path / "b.ham", fx.Hprime)
        argv = ["compare", "--input", str(tmp_path / "a.ham"), "--prime", str(tmp_path / "b.ham")]
        assert run(argv, capsys)[0] == 10

    def test_error_codes(self, tmp_path, capsys):
        assert run(["invariants", "--input", str(tmp_path / "missing.ham")], capsys)[0] == 3
        (tmp_path / "bad.ham").write_text("{")
        code, _, err = run(["invariants", "--input", str(tmp_path / "bad.ham")], capsys)
        assert code == 2 and "line" in err
        assert run(["invariants", "--fixture", "nope"], capsys)[0] == 2
        assert run(["invariants", "--fixture", "example3", "--tol", "bogus=1"], capsys)[0] == 2
        assert run(["compare", "--fixture", "example2:2,3"], capsys)[0] == 2

    def test_seed_from_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("LUOB_SEED", "41")
        _, out, _ = run(["invariants", "--fixture", "example3", "--k", "0", "--format", "json"], capsys)
        assert json.loads(out)["seed"] == 41
        monkeypatch.setenv("LUOB_SEED", "x")
        assert run(["invariants", "--fixture", "example3"], capsys)[0] == 2

    def test_plotdata(self, tmp_path, capsys):
        out = tmp_path / "p.csv"
        code, _, _ = run(["plotdata", "--fixture", "example1:0,0,3.14159265", "--k", "2", "--count", "200",
                          "--output", str(out)], capsys)
        lines = out.read_text().splitlines()
        assert code == 0 and lines[0] == "re(r1/r3),im(r1/r3),re(r2/r3),im(r2/r3)"
        rows = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
        assert len(rows) >= 150
        r1, r2 = rows[:, 0] + 1j * rows[:, 1], rows[:, 2] + 1j * rows[:, 3]
        L = DegeneratingLocus(pencil_from_operator(load_fixture("example1:0,0,3.14159265").H, "A"), 2)
        x = np.stack([r1, r2, np.ones_like(r1)], axis=1)
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        q = L.minors[0]
        assert np.max(np.abs(q.evaluate_many(x))) <= 1e-8
        assert member_many(L, [x]).all()

    def test_examples_write(self, tmp_path, capsys):
        code, out, _ = run(["examples", "--write", str(tmp_path)], capsys)
        assert code == 0 and "example5" in out
        H = load_spec(tmp_path / "example3_prime.ham")
        assert np.allclose(H.matrix, example3().Hprime.matrix, atol=1e-12)

    def test_selftest_command(self, capsys):
        code, out, _ = run(["selftest", "--fixture", "example3", "--trials", "2", "--seed", "7"], capsys)
        assert code == 0 and out.strip().endswith("PASS")

    def test_module_entry_point(self):
        r = subprocess.run([sys.executable, "-m", "luob", "examples"], capture_output=True, text=True)
        assert r.returncode == 0 and "bell:1,2" in r.stdout
