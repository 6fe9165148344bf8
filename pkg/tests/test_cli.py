"""Scenario files and the command line."""

import json
import os

import pytest

from convexdiff import cli, scenario
from convexdiff.cli import build_report, demo_document, dumps, main

SQ = {"dim": 2, "vertices": [["0", "0"], ["2", "0"], ["2", "2"], ["0", "2"]]}
SEG = {"dim": 2, "vertices": [["0", "0"], ["1", "0"]]}
ABS = {"pieces": [{"gradient": ["1"], "offset": "0"}, {"gradient": ["-1"], "offset": "0"}]}


def doc(operation, inputs, **extra):
    d = {"version": 1, "seed": 0, "operation": operation, "inputs": inputs}
    d.update(extra)
    return d


def write(tmp_path, d, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return p


def strip_timing(text):
    r = json.loads(text)
    r.pop("timing")
    return r


class TestValidation:
    @pytest.mark.parametrize("name", cli.DEMOS)
    def test_bundled_are_valid(self, name):
        assert scenario.validate(demo_document(name)) == []

    @pytest.mark.parametrize("d, fragment", [
        (doc("cover-diff", {"X": SQ, "Y": {"dim": 2, "vertices": [[0, "1/2"], [1, 0]]}}),
         "inputs.Y: mixes JSON numbers"),
        (doc("cover-diff", {"X": SQ, "Y": {"dim": 2, "vertices": [["0", "x"]]}}),
         "inputs.Y.vertices[0][1]"),
        (doc("cover-diff", {"X": SQ, "Y": {"dim": 2, "vertices": [["0"]]}}),
         "inputs.Y.vertices[0]: expected 2 coordinates"),
        (doc("cover-diff", {"X": SQ, "Y": {"dim": 1, "vertices": [["0"]]}}),
         "dimension mismatch"),
        (doc("cover-diff", {"X": SQ}), "inputs.Y: missing"),
        (doc("cover-diff", {"X": SQ, "Y": SQ, "Z": SQ}), "inputs.Z: not an input"),
        (doc("frobnicate", {}), "operation: unknown"),
        (doc("eps-subdiff", {"f": ABS, "x": ["1"], "eps": ["1", "-1/2"]}),
         "inputs.eps[1]: must be nonnegative"),
        (doc("lipschitz-probe", {"f": ABS, "x": ["1"], "eps": "1", "upsilon": "1"}),
         "0 < upsilon < eps"),
        (doc("gmp-minimal", {"X": SQ, "Y": SEG, "m": 4}), "m >= 8"),
        (doc("graph-convexity", {"t": "3/2"}), "inputs.t: must lie in [0, 1]"),
        (doc("hull", {"points": [["0"]]}, output={"log": "x"}), "output:"),
        ({"version": 1, "operation": "norm", "inputs": {"X": SQ}}, "seed: required"),
        (doc("norm", {"X": SQ}, version=2), "version: expected 1"),
    ])
    def test_diagnostics(self, d, fragment):
        errs = scenario.validate(d)
        assert any(fragment in e for e in errs), errs

    def test_validate_command(self, tmp_path, capsys):
        good = write(tmp_path, doc("norm", {"X": SQ}), "good.json")
        assert main(["validate", str(good)]) == 0
        bad = write(tmp_path, doc("norm", {"X": {"dim": 2, "vertices": [[0, "1"]]}}), "bad.json")
        assert main(["validate", str(bad)]) == 2
        assert "inputs.X: mixes" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        p = tmp_path / "broken.json"
        p.write_text('{"version": 1,\n "seed": }')
        assert main(["validate", str(p)]) == 2
        assert "line 2 column" in capsys.readouterr().err
        assert main(["run", str(p), "--out", str(tmp_path)]) == 2


class TestRun:
    def test_report_layout(self, tmp_path):
        p = write(tmp_path, doc("erode-diff", {"X": SQ, "Y": SEG}))
        assert main(["run", str(p), "--out", str(tmp_path)]) == 0
        r = json.loads((tmp_path / "s.report.json").read_text())
        assert set(r) == {"schema_version", "scenario", "arithmetic", "tolerance", "results",
                          "checks", "passed", "timing"}
        assert r["scenario"]["operation"] == "erode-diff" and r["tolerance"] == 0
        verts = r["results"]["erode_diff"]["vertices"]
        assert sorted(map(tuple, verts)) == [("0", "0"), ("0", "2"), ("1", "0"), ("1", "2")]

    def test_no_stray_temporaries(self, tmp_path):
        p = write(tmp_path, doc("norm", {"X": SQ}, output={"report": "out/n.json"}))
        assert main(["run", str(p), "--out", str(tmp_path)]) == 0
        assert os.listdir(tmp_path / "out") == ["n.json"]

    def test_atomic_write_keeps_old_file_on_failure(self, tmp_path, monkeypatch):
        target = tmp_path / "r.json"
        target.write_text("old")

        def boom(*a):
            raise OSError("disk full")
        monkeypatch.setattr(cli.os, "replace", boom)
        with pytest.raises(OSError):
            cli.write_atomic(target, "new")
        assert target.read_text() == "old"
        assert os.listdir(tmp_path) == ["r.json"]

    def test_eps_scenario(self, tmp_path):
        d = doc("eps-subdiff", {"f": ABS, "x": ["1"], "eps": ["0", "1/2", "2"]})
        r, _ = build_report(d, "eps")
        sets = [row["set"]["vertices"] for row in r["results"]["subdifferentials"]]
        assert sets == [[["1"]], [["1/2"], ["1"]], [["-1"], ["1"]]]
        assert r["passed"]

    def test_double_numbers(self):
        d = doc("hausdorff", {"X": {"dim": 1, "vertices": [[0], [1]]},
                              "Y": {"dim": 1, "vertices": [[0.5], [3]]}}, arithmetic="double")
        r, _ = build_report(d, "h")
        assert r["arithmetic"] == "double" and r["tolerance"] == pytest.approx(1e-9)
        assert r["results"]["distance"] == pytest.approx(2.0)

    def test_failed_check_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setattr(scenario, "eps_subdiff_oracle", lambda *a, **k: False)
        p = write(tmp_path, doc("eps-subdiff", {"f": ABS, "x": ["1"], "eps": "1"}))
        assert main(["run", str(p), "--out", str(tmp_path)]) == 1
        assert json.loads((tmp_path / "s.report.json").read_text())["passed"] is False

    def test_budget_exit_code(self, tmp_path, capsys):
        p = write(tmp_path, doc("gmp-oracle", {"X": SQ, "Y": SEG, "budget": 1}))
        assert main(["run", str(p), "--out", str(tmp_path)]) == 3
        assert not (tmp_path / "s.report.json").exists()

    def test_three_dimensional_extraction(self):
        cube = {"dim": 3, "vertices": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"],
                                       ["0", "0", "1"]]}
        r, svg = build_report(doc("gmp-minimal", {"X": cube, "Y": cube,
                                                  "selectors": [["1", "0", "0"]]}), "c")
        assert r["passed"] and svg is None
        assert r["results"]["reports"][0]["exact_minimal"] is None

    def test_dimension_exit_code(self, tmp_path, capsys):
        p = write(tmp_path, doc("gmp-oracle", {"X": {"dim": 3, "vertices": [["0", "0", "0"]]},
                                               "Y": {"dim": 3, "vertices": [["1", "0", "0"]]}}))
        assert main(["run", str(p), "--out", str(tmp_path)]) == 2
        assert "unsupported input" in capsys.readouterr().err

    def test_seed_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CONVEXDIFF_SEED", "11")
        r, _ = build_report(doc("lipschitz-probe", {"f": ABS, "x": ["1"], "eps": "1",
                                                    "upsilon": "1/2", "n": 20}), "l")
        assert r["scenario"]["seed"] == 11
        monkeypatch.setenv("CONVEXDIFF_SEED", "abc")
        p = write(tmp_path, doc("norm", {"X": SQ}))
        assert main(["run", str(p), "--out", str(tmp_path)]) == 2

    def test_jobs_must_be_positive(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["demo", "fig1", "--jobs", "0", "--out", str(tmp_path)])


class TestDemo:
    def test_segment_demo_outputs(self, tmp_path, capsys):
        assert main(["demo", "fig1", "--out", str(tmp_path)]) == 0
        r = json.loads((tmp_path / "fig1.report.json").read_text())
        assert r["passed"] and r["results"]["distinct_elements"] == 8
        assert (tmp_path / "fig1.svg").read_text().startswith("<?xml")
        assert "[PASS] feasible" in capsys.readouterr().out

    def test_segment_demo_parallel_matches_serial(self):
        a, svg_a = build_report(demo_document("fig1"), "fig1")
        b, svg_b = build_report(demo_document("fig1"), "fig1", jobs=2)
        assert strip_timing(dumps(a)) == strip_timing(dumps(b))
        assert svg_a == svg_b

    def test_segment_demo_double(self):
        r, _ = build_report(demo_document("fig1"), "fig1", arithmetic="double")
        assert r["arithmetic"] == "double" and r["passed"]
