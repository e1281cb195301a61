"""CLI contract: output formats, exit codes, round trips."""

import json

import pytest

from galdir import PointSet
from galdir.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("p 3\n0 0\n1 0\n0 1\n")
    return str(path)


class TestAnalyze:
    def test_text_output(self, capsys, triangle_file):
        code, out, _ = run(capsys, "analyze", triangle_file)
        assert code == 0
        assert "D = 3 special" in out
        assert "not covered by 1 lines" in out

    def test_json_output(self, capsys, triangle_file):
        code, out, _ = run(capsys, "analyze", "--json", triangle_file)
        assert code == 0
        payload = json.loads(out)
        assert payload["D"] == 3 and payload["E"] == 3
        assert payload["theta"] == 1
        assert payload["determined_directions"] == ["0", "2", "inf"]
        assert payload["manifest"]["version"]
        assert triangle_file in payload["manifest"]["input_digests"]

    def test_theta_serializes_as_fraction(self, capsys, tmp_path):
        path = tmp_path / "u.txt"
        path.write_text("p 3\n0 0\n1 1\n")
        _, out, _ = run(capsys, "analyze", "--json", str(path))
        assert json.loads(out)["theta"] == "2/3"

    def test_full_plane(self, capsys, tmp_path):
        path = tmp_path / "full.txt"
        path.write_text("p 3\n" + "".join(f"{a} {b}\n" for a in range(3) for b in range(3)))
        _, out, _ = run(capsys, "analyze", "--json", str(path))
        payload = json.loads(out)
        assert payload["D"] == payload["E"] == payload["W"] == 0

    def test_parse_error_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("p 3\n5 1\n")
        code, _, err = run(capsys, "analyze", str(path))
        assert code == 2
        assert "line 2" in err


class TestConstruct:
    def test_roundtrip(self, capsys, tmp_path):
        out_path = tmp_path / "u.txt"
        code, out, _ = run(
            capsys, "construct", "redei", "-p", "5", "--variant", "plus",
            "-o", str(out_path),
        )
        assert code == 0
        U = PointSet.load(out_path)
        assert U.points == ((0, 0), (1, 1), (2, 3), (3, 2), (4, 4))
        assert "determined directions: 4" in out

    def test_extremal(self, capsys, tmp_path):
        out_path = tmp_path / "u.txt"
        code, _, _ = run(
            capsys, "construct", "extremal", "-p", "5", "-n", "2", "-o", str(out_path)
        )
        assert code == 0
        assert PointSet.load(out_path).N == 10

    def test_even_prime_rejected(self, capsys):
        code, _, err = run(capsys, "construct", "redei", "-p", "2")
        assert code == 2
        assert "odd" in err


class TestVerify:
    def test_theorem(self, capsys, triangle_file):
        code, out, _ = run(capsys, "verify", "theorem", triangle_file)
        assert code == 0
        assert "pass" in out

    def test_rs(self, capsys, triangle_file):
        code, out, _ = run(capsys, "verify", "rs", triangle_file)
        assert code == 0

    def test_polynomial_skips_rich_slope(self, capsys, tmp_path):
        path = tmp_path / "line.txt"
        path.write_text("p 3\n" + "".join(f"{u} 0\n" for u in range(3)))
        code, out, _ = run(capsys, "verify", "polynomial", str(path), "--m", "0")
        assert code == 0
        assert "skipped" in out

    def test_audit_json(self, capsys, triangle_file):
        code, out, _ = run(capsys, "verify", "audit", triangle_file, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["failures"] == 0
        names = [rec["check"] for rec in payload["results"]]
        assert "ineq_pair_total_identity" in names

    def test_exhaustive_p3(self, capsys):
        code, out, _ = run(capsys, "verify", "exhaustive", "-p", "3")
        assert code == 0
        assert "511 subsets, 0 failures" in out

    def test_blackbox_skips(self, capsys, tmp_path):
        path = tmp_path / "line.txt"
        path.write_text("p 3\n" + "".join(f"{u} 0\n" for u in range(3)))
        code, out, _ = run(capsys, "verify", "blackbox", str(path))
        assert code == 0
        assert "skipped" in out


class TestSearch:
    def test_refusal_exit_2(self, capsys):
        code, _, err = run(capsys, "search", "-p", "7", "--exhaustive")
        assert code == 2
        assert "refused" in err

    def test_long_run_gate(self, capsys):
        code, _, err = run(capsys, "search", "-p", "5", "--exhaustive")
        assert code == 2
        assert "long-run" in err or "long_run" in err

    def test_report_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _, _ = run(
            capsys, "search", "-p", "3", "--exhaustive", "-o", str(out_path)
        )
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["p"] == 3 and report["failures"] == []
        assert report["manifest"]["command"].startswith("galdir search")

    def test_byte_identity_small(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        base = ["search", "-p", "5", "--samples", "2000", "--seed", "42"]
        assert run(capsys, *base, "-o", str(a))[0] == 0
        assert run(capsys, *base, "-o", str(b), "--threads", "8")[0] == 0
        assert a.read_bytes() == b.read_bytes()
