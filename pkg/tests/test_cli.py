import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from stieltjes import MonotoneFn, compose, decompose, flat_levels, left_inverse, selector_inverse
from stieltjes.cli import main
from stieltjes.generate import random_instance
from stieltjes.io import (
    DocumentError,
    dump_number,
    monotone_from_json,
    monotone_to_json,
    parse_number,
    piecewise_from_json,
    piecewise_to_json,
)


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    text = out.getvalue()
    try:
        return code, json.loads(text)
    except json.JSONDecodeError:
        return code, text


@pytest.fixture
def fx(fixtures_dir):
    return lambda name: fixtures_dir / f"{name}.json"


class TestNumbers:
    def test_float_exact(self):
        assert parse_number(0.1) == Fraction(0.1)
        assert parse_number("0.1") == Fraction(0.1)
        assert parse_number("1/3") == Fraction(1, 3)

    def test_dump_roundtrip(self):
        for v in (Fraction(1, 3), Fraction(0.1), Fraction(5, 2), Fraction(-7, 1024)):
            assert parse_number(json.loads(json.dumps(dump_number(v)))) == v

    @pytest.mark.parametrize("bad", [True, None, "abc", [1], float("nan")])
    def test_rejects(self, bad):
        with pytest.raises(DocumentError):
            parse_number(bad, "x")


class TestDocuments:
    @pytest.mark.parametrize("seed", range(15))
    def test_roundtrip_exact(self, seed):
        inst = random_instance(seed)
        H = flat_levels(inst.M)
        fns = [compose(inst.N, inst.M), left_inverse(inst.M),
               selector_inverse(inst.M, Fraction(1, 3)), *list(vars(decompose(inst.N, H)).values())[:3]]
        rng = np.random.default_rng(seed)
        for F in fns:
            back = monotone_from_json(json.loads(json.dumps(monotone_to_json(F))))
            assert back == F
            for x in rng.uniform(float(F.lo), float(F.hi), 100):
                for s in ("left", "value", "right"):
                    assert back.eval_at(x, s) == F.eval_at(x, s)
        f = inst.f
        back = piecewise_from_json(json.loads(json.dumps(piecewise_to_json(f))))
        assert back.knots == f.knots and back.polys == f.polys and back.point_values == f.point_values

    def test_field_paths(self):
        doc = {"domain": [0, 1], "breakpoints": [{"x": 0, "left": 0, "value": 0, "right": 0},
                                                 {"x": 1, "left": 1, "value": "oops", "right": 1}]}
        with pytest.raises(DocumentError, match=r"breakpoints\[1\]\.value"):
            monotone_from_json(doc)
        doc["breakpoints"][1]["value"] = 1
        del doc["breakpoints"][1]["right"]
        with pytest.raises(DocumentError, match=r"breakpoints\[1\]\.right: missing"):
            monotone_from_json(doc)

    def test_inconsistent_segment(self):
        doc = monotone_to_json(MonotoneFn.identity(0, 1))
        doc["segments"][0]["slope"] = 2
        with pytest.raises(DocumentError, match=r"segments\[0\]\.slope"):
            monotone_from_json(doc)

    def test_non_monotone(self):
        doc = {"domain": [0, 1], "breakpoints": [{"x": 0, "left": 0, "value": 1, "right": 1},
                                                 {"x": 1, "left": 0, "value": 0, "right": 0}]}
        with pytest.raises(DocumentError):
            monotone_from_json(doc)

    def test_point_values_as_pairs(self):
        f = piecewise_from_json({"pieces": [{"interval": [0, 1], "coeffs": [0, 1]}],
                                 "point_values": [[0, 0], [1, 5]]})
        assert f(1) == 5

    def test_piecewise_missing_point_value(self):
        with pytest.raises(DocumentError, match="missing point values"):
            piecewise_from_json({"pieces": [{"interval": [0, 1], "coeffs": [0, 1]}],
                                 "point_values": {"0": 0}})


class TestCommands:
    def test_verify_eq5_fix1(self, fx):
        code, rep = run("verify", "eq5", fx("fix1_f"), fx("fix1_M"), fx("fix1_N"))
        assert code == 0
        assert rep["lhs"] == 4.5 and [t["value"] for t in rep["rhs_terms"]] == [3.0, 0.5, 1.0]
        assert rep["pass"] is True

    def test_verify_eq3_precondition(self, fx):
        code, rep = run("verify", "eq3", fx("fix1_f"), fx("fix1_M"), fx("fix1_N"))
        assert code == 3
        assert rep["level"] == 1.0 and "y=1" in rep["message"]

    def test_verify_eq3_forced_fails_numerically(self, fx):
        code, rep = run("verify", "eq3", fx("fix1_f"), fx("fix1_M"), fx("fix1_N"), "--force")
        assert code == 2
        assert rep["details"]["interval_mismatch"][0]["difference"] == 0.5

    def test_verify_eq1_theta(self, fx):
        code, rep = run("verify", "eq1", fx("fix2_f"), fx("fix2_M"), fx("fix2_N"), "--theta", "0.37")
        assert code == 0 and rep["lhs"] == rep["rhs_total"] == 2.5

    def test_flats(self, fx):
        assert run("flats", fx("fix2_M")) == (0, [])
        assert run("flats", fx("fix1_M")) == (0, [{"y": 1.0, "x_left": 1.0, "x_right": 2.0}])

    def test_eval(self, fx):
        assert run("eval", fx("fix2_M"), "--at", 1, "--side", "right") == (0, 1.5)

    def test_invert_and_compose_reparse(self, fx, tmp_path):
        code, doc = run("invert", fx("fix1_M"), "--theta", "0.5")
        assert code == 0 and monotone_from_json(doc)(1) == Fraction(3, 2)
        code, doc = run("invert", fx("fix1_M"), "--side", "right")
        assert monotone_from_json(doc)(1) == 2
        code, doc = run("compose", fx("fix1_N"), fx("fix1_M"))
        L = monotone_from_json(doc)
        assert (L.left(2), L(2), L.right(2)) == (1.5, 1.5, 2)

    def test_decompose(self, fx):
        code, doc = run("decompose", fx("fix1_N"), fx("fix1_M"))
        assert code == 0
        assert doc["jumps"] == [{"y": 1.0, "delta_minus": 0.5, "delta_plus": 0.5}]
        assert monotone_from_json(doc["n1"]) == MonotoneFn.identity(0, 2)

    def test_integrate(self, fx):
        code, doc = run("integrate", fx("fix2_f"), fx("fix2_M"), "--oracle", "--mesh", "1e-4")
        assert doc["closed_form"] == 2.5 and abs(doc["oracle"] - 2.5) <= 1e-3

    def test_inequalities(self, fx):
        code, reps = run("inequalities", fx("fix1_f"), fx("fix1_M"), fx("fix1_N"))
        assert code == 0
        ineq7 = [r for r in reps if r["tag"] == "ineq7"]
        assert sorted(r["rhs_total"] for r in ineq7) == [4.0, 5.0]

    def test_inequalities_decreasing_rejects_increasing(self, fx):
        code, _ = run("inequalities", fx("fix1_f"), fx("fix1_M"), fx("fix1_N"), "--decreasing")
        assert code == 1

    def test_plot_data(self, fx):
        code, text = run("plot-data", fx("fix2_M"), "--samples", 5)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["x", "left", "value", "right"]
        assert ["1.0", "1.0", "1.25", "1.5"] in rows

    def test_malformed_json(self, tmp_path, fx):
        bad = tmp_path / "bad.json"
        bad.write_text('{"domain": [0, 1],\n "breakpoints": [}')
        code, _ = run("flats", bad)
        assert code == 1

    def test_missing_file(self, tmp_path):
        assert run("flats", tmp_path / "nope.json")[0] == 1

    def test_batch(self, fx, tmp_path):
        for name, n in (("a", "fix1_N"), ("b", "fix1r_N")):
            d = tmp_path / name
            d.mkdir()
            for src, dst in (("fix1_f", "f"), ("fix1_M", "M"), (n, "N")):
                (d / f"{dst}.json").write_text(fx(src).read_text())
        code, res = run("batch", tmp_path, "--tag", "eq5", "--jobs", 2)
        assert code == 0 and all(r["report"]["pass"] for r in res)
        code, res = run("batch", tmp_path, "--tag", "eq3")
        assert code == 3
        assert [r.get("error") for r in res] == ["precondition", None]

    def test_random_check_seed_from_env(self, monkeypatch):
        monkeypatch.setenv("STIELTJES_SEED", "123")
        code, doc = run("random-check", "eq4", "--count", 5)
        assert code == 0 and doc["seed"] == 123 and doc["failures"] == []


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "stieltjes", "flats", str(fixtures_dir / "fix2_M.json")],
        capture_output=True, text=True, env={**os.environ},
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == []
