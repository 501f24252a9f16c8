import csv
import io
import json
import math
import subprocess
import sys

import pytest

from entbounds.bounds import evaluate_bound, massey_variance
from entbounds.cli import figure_rows, main, run
from entbounds.dist import FamilySpec, build
from entbounds.entropy import discrete_entropy
from entbounds.guessing import guessing_profile, lb_improved


def call(*argv):
    text, code = run(list(argv))
    return text, code


def record(*argv):
    text, code = call(*argv)
    assert code == 0, text
    return json.loads(text)


class TestEntropy:
    def test_golden_full_precision(self):
        r = record("--full-precision", "entropy", "--dist", "poisson:lambda=4", "--alpha", "1,0.5,2")
        assert r["format_version"] == 1 and r["command"][1] == "entropy"
        p = build(FamilySpec.parse("poisson:lambda=4"))
        got = [row["bits"] for row in r["results"]["entropies"]]
        assert got == [discrete_entropy(p), discrete_entropy(p, 0.5), discrete_entropy(p, 2.0)]

    def test_default_rounding(self):
        r = record("entropy", "--dist", "bernoulli:p=0.11")
        v = r["results"]["entropies"][0]["bits"]
        assert v == float(f"{discrete_entropy(build(FamilySpec.parse('bernoulli:p=0.11'))):.12g}")

    def test_bad_order_inline(self):
        r = record("entropy", "--dist", "uniform:M=4", "--alpha", "2,-1")
        assert r["results"]["entropies"][1]["error_type"] == "OrderError"

    def test_pmf_file(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("# comment\n0 0.25\n3 0.75\n")
        r = record("--full-precision", "entropy", "--pmf-file", str(f))
        assert r["results"]["entropies"][0]["bits"] == pytest.approx(-(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75)), rel=1e-15)
        j = tmp_path / "p.json"
        j.write_text("[[0, 0.5], [1, 0.5]]")
        assert record("entropy", "--pmf-file", str(j))["results"]["entropies"][0]["bits"] == 1.0

    def test_joint_csv(self, tmp_path):
        f = tmp_path / "j.csv"
        f.write_text("x,0,1\n0,0.25,0.25\n1,0.25,0.25\n")
        r = record("entropy", "--joint", str(f), "--alpha", "2")
        assert r["results"]["conditional"] is True
        assert r["results"]["entropies"][0]["bits"] == 1.0


class TestBounds:
    def test_poisson_all_hold(self):
        r = record("--full-precision", "bounds", "--dist", "poisson:lambda=4")
        rows = {row["name"]: row for row in r["results"]["bounds"]}
        assert set(rows) == {"massey_variance", "mean_bound", "support_bound", "improved_variance",
                             "mixed_variance", "mixed_mean", "gaussian_condition"}
        p = build(FamilySpec.parse("poisson:lambda=4"))
        for name in ("massey_variance", "improved_variance"):
            assert rows[name]["bound_bits"] == evaluate_bound(name, p).bound_bits
            assert rows[name]["holds"] is True
        assert rows["improved_variance"]["bound_bits"] < rows["massey_variance"]["bound_bits"]

    def test_params_and_validity_inline(self):
        r = record("--full-precision", "bounds", "--sigma2", "1", "--bound", "massey_variance", "--alpha", "0.5,0.3")
        ok, bad = r["results"]["bounds"]
        assert ok["bound_bits"] == massey_variance(1.0, 0.5).bound_bits
        assert bad["error_type"] == "ValidityError" and bad["threshold"] == pytest.approx(1 / 3)

    def test_usage_errors(self):
        assert call("bounds", "--bound", "nope", "--sigma2", "1")[1] == 2
        assert call("bounds", "--bound", "massey_variance")[1] == 2
        assert call("entropy")[1] == 2
        assert call("entropy", "--dist", "nosuch:a=1")[1] == 2
        assert call("entropy", "--dist", "uniform:M=2", "--pmf-file", "x")[1] == 2


class TestGuess:
    def test_uniform_256(self):
        r = record("--full-precision", "guess", "--dist", "uniform:M=256", "--rho", "1,2")
        res = r["results"]
        assert res["G"] == 128.5 == guessing_profile(build(FamilySpec.parse("uniform:M=256"))).G
        imp = next(b for b in res["bounds"] if b["name"] == "lb_improved")
        assert imp["bound_bits"] == lb_improved(8.0)
        assert all(b["holds"] for b in res["bounds"])
        assert "lb_renyi[alpha=0.25]" in res["inadmissible"]

    def test_joint(self, tmp_path):
        f = tmp_path / "j.csv"
        f.write_text("x,0,1\n0,0.1,0.6\n1,0.3,0\n")
        res = record("guess", "--joint", str(f))["results"]
        assert res["conditional"] and res["G"] == pytest.approx(1.1)


class TestFigures:
    def test_fig3(self):
        rows = figure_rows("fig3_moustache")
        half = next(r for r in rows[1:] if r[0] == 0.5)
        assert abs(half[2] - half[1]) <= 1e-14
        assert all(r[2] >= r[1] for r in rows[1:])

    def test_fig4_crossing(self):
        rows = [r for r in figure_rows("fig4_guessing")[1:] if r[1] is not None]
        sign = [r[2] > r[1] for r in rows]
        k = sign.index(True)
        assert rows[k - 1][0] < math.log2(2 * math.e / (4 - math.e)) < rows[k][0]
        assert all(sign[k:])

    def test_csv_stdout_and_blank_cells(self):
        text, code = call("figure", "fig4_guessing")
        assert code == 0
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["H", "massey_original", "improved"] and rows[1][1] == ""
        assert len(rows) == 1002

    def test_unknown(self):
        assert call("figure", "fig9")[1] == 2

    def test_env_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ENTBOUNDS_OUTPUT_DIR", str(tmp_path))
        r = record("figure", "fig3_moustache")
        assert (tmp_path / "fig3_moustache.csv").exists() and r["results"]["rows"] == 199


class TestVerify:
    def test_small_run_writes_report(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"families": ["poisson:lam=2"], "dither_pmfs": 2}))
        out = tmp_path / "rep.json"
        code = main(["verify", "--config", str(cfg), "--random-pmfs", "10", "--random-joints", "2", "--output", str(out)])
        cap = capsys.readouterr()
        assert code == 0
        assert json.loads(cap.out)["results"]["ok"] is True
        assert "checks run" in cap.err
        assert json.loads(out.read_text())["violations"] == []

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert call("verify", "--config", str(cfg))[1] == 2
        cfg.write_text('{"bogus": 1}')
        assert call("verify", "--config", str(cfg))[1] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "entbounds", "entropy", "--dist", "uniform:M=8"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["results"]["entropies"][0]["bits"] == 3.0


def test_argparse_usage_exit_code():
    assert main(["nosuchcommand"]) == 2
