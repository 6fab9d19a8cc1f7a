"""Command-line interface and serialization round-trips."""

import io
import json
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction

import pytest

from seqlimit import PiecewisePoly, SeededStream, Word
from seqlimit import serialize as ser
from seqlimit.cli import dispatch
from seqlimit.permutons import GridMeasure, Permutation
from seqlimit.piecewise import LimitVector
from seqlimit.regularity import IntervalPartition

from util import random_step_irregular


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = dispatch(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_density_word():
    code, out, _ = run_cli("density", "--word", "0101", "--pattern", "01")
    assert code == 0
    doc = json.loads(out)
    assert doc["density"] == "1/2"
    assert doc["count"] == 3 and doc["num"] == "1" and doc["den"] == "2"


def test_density_limit(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(ser.dumps(ser.limitfn_to_obj(PiecewisePoly.constant(Fraction(1, 2)))))
    code, out, _ = run_cli("density", "--limit", str(f), "--pattern", "11")
    assert code == 0
    assert json.loads(out)["density"] == "1/4"


def test_analyze_constant_word():
    code, out, _ = run_cli("analyze", "1111", "--density", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["discrepancy"] == "0"
    assert doc["best_uniformity"]["density"] == "1"


def test_exit_codes():
    assert run_cli("analyze", "1111", "--bogus-flag")[0] == 2
    assert run_cli("no-such-command")[0] == 2
    code, _, err = run_cli("density", "--word", "01", "--pattern", "0101")
    assert code == 1 and "error:" in err
    code, _, err = run_cli("density", "--word", "01x2", "--pattern", "01")
    assert code == 1


def test_distance_modes(tmp_path):
    code, out, _ = run_cli("distance", "1100", "0011", "--metric", "l1")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "1" and doc["exact"] is True
    code, out, _ = run_cli("distance", "1100", "0011", "--metric", "box")
    assert json.loads(out)["value"] == "1/2"
    code, out, _ = run_cli("distance", "1100", "0011", "--metric", "prefix")
    assert json.loads(out)["value"] == "1/2"


def test_sample_deterministic():
    args = ("--seed", "5", "sample", "--limit", '{"breakpoints": ["0","1"], "pieces": [{"coeffs": ["1/2"]}]}', "--length", "20", "--count", "3")
    code1, out1, _ = run_cli(*args)
    code2, out2, _ = run_cli(*args)
    assert code1 == 0 and out1 == out2
    doc = json.loads(out1)
    assert doc["seed"] == 5 and doc["prng"] == "philox4x64"
    assert len(doc["words"]) == 3 and all(len(w) == 20 for w in doc["words"])
    _, other, _ = run_cli("--seed", "6", *args[2:])
    assert other != out1


def test_regularize(tmp_path):
    f = tmp_path / "step.json"
    f.write_text(ser.dumps(ser.limitfn_to_obj(PiecewisePoly.step([1, 0]))))
    code, out, _ = run_cli("regularize", "--limit", str(f), "--eps", "1/10")
    assert code == 0
    doc = json.loads(out)
    assert Fraction(doc["final_deviation"]) <= Fraction(1, 10)
    assert len(doc["energies"]) == doc["rounds"] + 1


def test_tester_member_and_far():
    code, out, _ = run_cli("--seed", "3", "test", "--word", "0" * 30 + "1" * 30, "--forbid", "10", "--query-size", "10", "--trials", "100")
    assert code == 0
    doc = json.loads(out)
    assert doc["accept_fraction"] == 1 and doc["is_member"] is True
    code, out, _ = run_cli("--seed", "3", "test", "--word", "10" * 40, "--forbid", "10", "--query-size", "12", "--trials", "100")
    doc = json.loads(out)
    assert doc["d1"] == "1/2" and doc["accept_fraction"] < 0.5


def test_forcibility_cli():
    limit = '{"breakpoints": ["0","1"], "pieces": [{"coeffs": ["1/2"]}]}'
    cand = '{"breakpoints": ["0","1/2","1"], "pieces": [{"coeffs": ["1"]}, {"coeffs": ["0"]}]}'
    code, out, _ = run_cli("forcibility", "--limit", limit, "--candidate", cand)
    assert code == 0
    doc = json.loads(out)
    assert doc["residual_self"] == "0"
    assert all(len(w) <= 3 for w in doc["words"])
    assert doc["candidate"]["densities_match"] is False
    assert Fraction(doc["candidate"]["residual"]) > 0


def test_permuton_cli():
    code, out, _ = run_cli("permuton", "density", "--perm", "2,1,4,3", "--pattern", "21")
    assert code == 0
    assert json.loads(out)["value"] == "1/3"
    code, out, _ = run_cli("permuton", "density", "--grid", "2,1,4,3", "--pattern", "21")
    assert json.loads(out)["exact"] is True
    code, out, _ = run_cli("permuton", "distance", "1", "1,2")
    assert json.loads(out)["value"] == "1/4"
    code, out, _ = run_cli("--seed", "9", "permuton", "sample", "--grid", "3,1,2", "--size", "2", "--count", "4")
    doc = json.loads(out)
    assert len(doc["patterns"]) == 4
    # large pattern on a large grid falls back to Monte Carlo
    perm10 = ",".join(str(i) for i in range(1, 11))
    code, out, _ = run_cli("--seed", "9", "permuton", "density", "--grid", perm10, "--pattern", "12345", "--trials", "2000")
    doc = json.loads(out)
    assert doc["exact"] is False and doc["trials"] == 2000


def test_experiment_batch(tmp_path):
    batch = {
        "experiments": [
            {"kind": "subsequence_tail", "name": "tail", "word": "01" * 200, "length": 50, "eps": 0.6, "trials": 20},
            {"kind": "nonsense", "name": "broken"},
        ]
    }
    spec = tmp_path / "batch.json"
    spec.write_text(json.dumps(batch))
    code, out, _ = run_cli("--seed", "2", "experiment", str(spec), "--out", str(tmp_path / "results"))
    assert code == 1  # one experiment failed, the other completed
    doc = json.loads(out)
    statuses = {e["name"]: e["status"] for e in doc["experiments"]}
    assert statuses == {"tail": "ok", "broken": "error"}
    saved = json.loads((tmp_path / "results" / "tail.json").read_text())
    assert saved["trials"] == 20
    # empty batch: success, nothing written
    spec.write_text(json.dumps({"experiments": []}))
    code, out, _ = run_cli("experiment", str(spec), "--out", str(tmp_path / "empty"))
    assert code == 0 and json.loads(out)["failures"] == 0


def test_csv_format():
    code, out, _ = run_cli("--format", "csv", "density", "--word", "0101", "--pattern", "01")
    assert code == 0
    cells = dict(line.split(",", 1) for line in out.strip().splitlines())
    assert cells["density"] == "1/2" and cells["count"] == "3"


def test_float_serialization_has_17_significant_digits():
    text = ser.dumps({"x": 1 / 3})
    assert "0.33333333333333331" in text
    assert ser.dumps({"x": 1 / 3}) == ser.dumps({"x": 1 / 3})


def test_serialization_round_trips(tmp_path):
    w = Word.from_string("01101")
    assert ser.word_from_text(ser.word_to_text(w)) == w
    stream = SeededStream(101)
    for t in range(5):
        f = random_step_irregular(stream.substream(t), max_steps=6)
        assert ser.limitfn_from_obj(ser.limitfn_to_obj(f)) == f
    F = LimitVector.from_binary(PiecewisePoly.step([1, 0]))
    G = ser.limitvector_from_obj(ser.limitvector_to_obj(F))
    assert G.components == F.components
    mu = GridMeasure.random(4, SeededStream(102))
    assert ser.grid_from_obj(json.loads(ser.dumps(ser.grid_to_obj(mu)))) == mu
    sigma = Permutation((2, 1, 4, 3))
    assert ser.permutation_from_text(ser.permutation_to_text(sigma)) == sigma
    part = IntervalPartition((Fraction(0), Fraction(1, 3), Fraction(1)))
    assert ser.partition_from_obj(ser.partition_to_obj(part)) == part
