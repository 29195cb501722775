"""Command-line client: file parsing, exit codes, and output stability."""

import json

import numpy as np
import pytest

from atiyah_lab.cli import (
    EXIT_DEGENERATE,
    EXIT_FAILURES,
    EXIT_OK,
    EXIT_PARSE,
    load_points,
    main,
)
from conftest import EQUILATERAL, REGULAR_TET, UNIT_SQUARE


def write_json(tmp_path, pts, name="pts.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"points": np.asarray(pts).tolist()}))
    return str(path)


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestLoadPoints:
    def test_json_roundtrip(self, tmp_path):
        path = write_json(tmp_path, EQUILATERAL)
        assert np.allclose(load_points(path), EQUILATERAL)

    def test_csv_with_header(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("x,y,z\n0,0,0\n1,0,0\n")
        assert load_points(str(path)) == [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]

    def test_json_error_reports_location(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"points": [[0,0')
        with pytest.raises(Exception) as e:
            load_points(str(path))
        assert "line 1" in str(e.value)

    def test_csv_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n0,0,0\n")
        with pytest.raises(Exception, match="header"):
            load_points(str(path))

    def test_csv_wrong_column_count_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y,z\n0,0,0\n1,2\n")
        with pytest.raises(Exception, match="line 3"):
            load_points(str(path))


class TestDetCommand:
    def test_equilateral(self, tmp_path, capsys):
        code, out, _ = run(capsys, "det", "--in", write_json(tmp_path, EQUILATERAL))
        assert code == EXIT_OK
        assert json.loads(out)["abs_d"] == pytest.approx(1.125, rel=1e-10)

    def test_two_points(self, tmp_path, capsys):
        code, out, _ = run(
            capsys, "det", "--in", write_json(tmp_path, [[0, 0, 0], [1, 2, 3]])
        )
        assert code == EXIT_OK
        assert json.loads(out)["abs_d"] == pytest.approx(1.0, abs=1e-12)

    def test_duplicate_point_exits_2(self, tmp_path, capsys):
        path = write_json(tmp_path, [[0, 0, 0], [0, 0, 0], [1, 0, 0]])
        code, _, err = run(capsys, "det", "--in", path)
        assert code == EXIT_DEGENERATE
        assert "degenerate" in err

    def test_parse_error_exits_1(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("not json")
        code, _, err = run(capsys, "det", "--in", str(path))
        assert code == EXIT_PARSE

    def test_missing_file_exits_1(self, capsys):
        code, _, _ = run(capsys, "det", "--in", "/no/such/file.json")
        assert code == EXIT_PARSE

    def test_repeat_invocations_byte_identical(self, tmp_path, capsys):
        path = write_json(tmp_path, EQUILATERAL)
        _, out1, _ = run(capsys, "det", "--in", path)
        _, out2, _ = run(capsys, "det", "--in", path)
        assert out1 == out2


class TestNgonCommand:
    def test_square(self, capsys):
        code, out, _ = run(capsys, "ngon", "--n", "4", "--direct", "--bounds")
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["closed_form"] == pytest.approx(1.45710678, abs=1e-8)
        assert body["rel_diff"] <= 1e-8

    def test_large_n(self, capsys):
        code, out, _ = run(capsys, "ngon", "--n", "100000")
        assert code == EXIT_OK
        assert abs(json.loads(out)["log_over_n2"] - 0.07970479) <= 1e-3

    def test_usage_error_small_n(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["ngon", "--n", "2"])
        assert e.value.code == EXIT_PARSE


class TestFourCommand:
    def test_square_degenerate_crelle(self, tmp_path, capsys):
        code, out, _ = run(capsys, "four", "--in", write_json(tmp_path, UNIT_SQUARE))
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["crelle"]["degenerate"] is True
        assert body["margins"]["conj3_n4"] >= 0.0

    def test_regular_tetrahedron(self, tmp_path, capsys):
        code, out, _ = run(capsys, "four", "--in", write_json(tmp_path, REGULAR_TET))
        body = json.loads(out)
        assert body["margins"]["conj4"] == pytest.approx(1.5, rel=1e-10)
        assert abs(body["isosceles"]["margin"]) <= 1e-9
        # coplanar-only fields are explicitly null, never fabricated
        assert body["margins"]["conj2_formula"] is None
        assert body["crelle_angle_combos"] is None

    def test_wrong_count_exits_1(self, tmp_path, capsys):
        code, _, _ = run(capsys, "four", "--in", write_json(tmp_path, EQUILATERAL))
        assert code == EXIT_PARSE


class TestVerifyCommand:
    def test_clean_run_writes_report(self, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code, out, _ = run(
            capsys, "verify", "--suite", "conj4", "--trials", "500",
            "--seed", "7", "--out", str(out_path),
        )
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["failures"] == 0
        assert json.loads(out_path.read_text())["failures"] == 0

    def test_failures_exit_3_and_write_counterexamples(self, tmp_path, capsys, monkeypatch):
        # an impossible tolerance turns every trial into a counterexample
        from atiyah_lab import harness as H

        real = H.run_suite

        def forced(suite, trials, seed, **kw):
            kw["tolerances"] = {"conj4": -10.0}
            return real(suite, trials, seed, **kw)

        monkeypatch.setattr(H, "run_suite", forced)
        ce_path = tmp_path / "ce.jsonl"
        code, out, _ = run(
            capsys, "verify", "--suite", "conj4", "--trials", "20",
            "--seed", "5", "--counterexamples", str(ce_path),
        )
        assert code == EXIT_FAILURES
        assert json.loads(out)["failures"] == 20
        lines = ce_path.read_text().splitlines()
        assert len(lines) == 20
        assert "points_hex" in json.loads(lines[0])

    def test_unknown_suite_exits_1(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "nope", "--trials", "10")
        assert code == EXIT_PARSE
        assert "known" in err

    def test_repeat_reports_identical_modulo_timing(self, tmp_path, capsys):
        args = ["verify", "--suite", "conj4", "--trials", "300", "--seed", "3"]
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        d1, d2 = json.loads(out1), json.loads(out2)
        d1.pop("wall_ms")
        d2.pop("wall_ms")
        assert d1 == d2

    def test_workers_flag_matches_serial(self, capsys):
        _, out1, _ = run(capsys, "verify", "--suite", "conj4", "--trials", "2000",
                         "--seed", "9", "--workers", "1")
        _, out4, _ = run(capsys, "verify", "--suite", "conj4", "--trials", "2000",
                         "--seed", "9", "--workers", "4")
        d1, d4 = json.loads(out1), json.loads(out4)
        d1.pop("wall_ms")
        d4.pop("wall_ms")
        assert d1 == d4


class TestConstantsCommand:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "constants")
        assert code == EXIT_OK
        body = json.loads(out)
        assert abs(body["zeta3"] - 1.2020569031595943) <= 1e-12
        assert abs(body["growth_b"] - 0.42627839) <= 1e-8
        assert abs(body["limit_l"] - 0.07970479) <= 2e-8
        for rec in body["integral_checks"].values():
            assert rec["error"] <= 1e-8


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == EXIT_PARSE

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["det"])
        assert e.value.code == EXIT_PARSE
