import csv
import io
import json
import subprocess
import sys

import pytest

from cantor_quant.cli import fmt, main
from cantor_quant.measure import centroid_of_union

from conftest import ANCHOR, R0


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestBuild:
    def test_beta4(self, capsys):
        code, out, _ = run(capsys, "build", "--set", "beta", "--n", "4")
        rec = json.loads(out)
        assert code == 0 and rec["n"] == 4
        assert rec["points"][0] == pytest.approx(R0 * R0 / 2, abs=1e-14)
        assert rec["words"][0] == ["11"] and rec["words"][-1] == ["22"]

    def test_gamma3(self, capsys):
        _, out, _ = run(capsys, "build", "--set", "gamma", "--n", "3")
        rec = json.loads(out)
        assert rec["points"][0] == pytest.approx(centroid_of_union(R0, ["11", "121"]), abs=1e-14)

    def test_delta3_right(self, capsys):
        _, out, _ = run(capsys, "build", "--set", "delta", "--n", "3", "--variant", "right", "--r", "0.44")
        assert json.loads(out)["words"] == [["11"], ["12", "2111"], ["2112", "212", "22"]]

    def test_index_set(self, capsys):
        _, out, _ = run(capsys, "build", "--n", "5", "--index-set", "22", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["words"] for r in rows][-2:] == ["221", "222"]


class TestDistortion:
    @pytest.mark.parametrize("n, expected", [(2, 0.0186274), (8, 0.000667229), (16, 0.00012628)])
    def test_anchors(self, capsys, n, expected):
        _, out, _ = run(capsys, "distortion", "--set", "beta", "--n", str(n))
        rec = json.loads(out)
        assert rec["value"] == pytest.approx(expected, abs=ANCHOR)
        assert rec["lower"] <= rec["value"] <= rec["upper"]


class TestCritical:
    def test_constants(self, capsys):
        code, out, _ = run(capsys, "critical")
        rec = json.loads(out)
        assert code == 0
        assert rec["r0"]["value"] == pytest.approx(0.4350411707, abs=5e-9)
        assert rec["beta_cvt_bound"]["value"] == pytest.approx(0.4384471872, abs=5e-9)
        assert rec["delta_crossing"]["value"] == pytest.approx(0.4371985206, abs=5e-8)


class TestSweep:
    def test_winner_flips(self, capsys, monkeypatch):
        monkeypatch.setenv("QNT_THREADS", "3")
        code, out, _ = run(capsys, "sweep", "--n", "3", "--r-lo", "0.42", "--r-hi", "0.44", "--steps", "21", "--depth", "12")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 21
        rs = [float(r["r"]) for r in rows]
        assert rs == sorted(rs)
        for row in rows:
            r = float(row["r"])
            if r < R0:
                assert row["winner"] == "beta"
            elif r > 0.4372:
                assert row["winner"] != "beta"
        near = min(rows, key=lambda row: abs(float(row["r"]) - 0.4376))
        assert float(near["v_gamma"]) <= float(near["v_beta"])

    def test_delta_beats_beta(self, capsys):
        _, out, _ = run(capsys, "sweep", "--r-lo", "0.438", "--r-hi", "0.438", "--steps", "1", "--format", "json")
        row = json.loads(out)["rows"][0]
        assert row["v_delta"] < row["v_beta"]

    def test_thread_count_does_not_change_output(self, capsys, monkeypatch):
        argv = ("sweep", "--steps", "7", "--depth", "10")
        monkeypatch.setenv("QNT_THREADS", "1")
        _, one, _ = run(capsys, *argv)
        monkeypatch.setenv("QNT_THREADS", "5")
        _, five, _ = run(capsys, *argv)
        assert one == five

    def test_bad_threads(self, capsys, monkeypatch):
        monkeypatch.setenv("QNT_THREADS", "many")
        assert run(capsys, "sweep", "--steps", "2")[0] == 2


class TestVerify:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        rec = json.loads(out)
        assert code == 0 and rec["passed"]
        assert rec["count"] >= 20 and len(rec["anchors"]) == rec["count"]
        for a in rec["anchors"]:
            assert {"expected", "computed", "passed"} <= set(a)

    def test_perturbed(self, capsys):
        code, out, err = run(capsys, "verify", "--perturb", "critical polynomial at r0=1e-3")
        assert code == 1
        assert json.loads(out)["failed"] == ["critical polynomial at r0"]
        assert "critical polynomial at r0" in err


class TestOutput:
    def test_fmt(self):
        assert fmt(0.1 + 0.2) == "0.3"
        assert fmt(1 / 3) == "0.333333333333333"

    @pytest.mark.parametrize(
        "argv",
        [
            ("build", "--set", "gamma", "--n", "7"),
            ("distortion", "--set", "delta", "--n", "5"),
            ("cvt", "--set", "beta", "--n", "3", "--r", "0.44"),
            ("critical",),
        ],
    )
    def test_deterministic_and_round_trip(self, capsys, argv):
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second
        assert json.dumps(json.loads(first), indent=2) + "\n" == first

    def test_csv_dialect(self, capsys):
        _, out, _ = run(capsys, "build", "--n", "3", "--format", "csv")
        assert "\r" not in out
        assert out.splitlines()[0] == "index,point,words"

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "beta.json"
        code, out, _ = run(capsys, "build", "--n", "3", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["n"] == 3


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ("build", "--n", "3", "--r", "0.6"),
            ("build", "--n", "1"),
            ("build", "--n", "5", "--index-set", "1"),
            ("distortion", "--n", "3", "--tol", "-1"),
            ("sweep", "--r-lo", "0.45", "--r-hi", "0.40"),
            ("sweep", "--depth", "30", "--steps", "2"),
            ("build",),
            ("frobnicate",),
        ],
    )
    def test_usage_errors(self, capsys, argv):
        try:
            code = main(list(argv))
        except SystemExit as exc:  # argparse rejects before dispatch
            code = exc.code
        _, err = capsys.readouterr()
        assert code == 2
        assert err

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cantor_quant", "build", "--n", "2"], capture_output=True, text=True, check=False
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["n"] == 2
