import csv
import json
import subprocess
import sys

import pytest

from utaut.cli import config_from_args, main
from utaut.report import Report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info_heisenberg(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "info", "--p", "5", "--m", "1", "--n", "3", "--k", "3", "--out", str(out))
    assert code == 0 and "verdict: PASS" in text
    rep = json.loads(out.read_text())
    assert rep["group_order"] == 125 and rep["center_order"] == 5


def test_verify_b_flagship(tmp_path, capsys):
    out = tmp_path / "b.json"
    code, _, _ = run(capsys, "verify-b", "--p", "2", "--m", "2", "--n", "3", "--method", "all", "--out", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["autc_order"] == 256 and rep["verdict"] == "PASS"


def test_verify_a(capsys):
    assert run(capsys, "verify-a", "--p", "2", "--n", "4", "--k", "4")[0] == 0


def test_abelian_class_count(tmp_path, capsys):
    out = tmp_path / "c.json"
    run(capsys, "classes", "--p", "3", "--n", "4", "--k", "2", "--out", str(out))
    rep = json.loads(out.read_text())
    assert rep["class_count"] == rep["group_order"] == 27


def test_csv_beside_json(tmp_path, capsys):
    out = tmp_path / "h.json"
    assert run(capsys, "classes", "--p", "2", "--m", "2", "--n", "4", "--out", str(out), "--csv")[0] == 0
    rows = list(csv.reader((tmp_path / "h.csv").open()))
    assert rows[0] == ["class_size", "count"]
    sizes = [int(r[0]) for r in rows[1:]]
    assert sizes == sorted(sizes)
    rep = json.loads(out.read_text())
    assert [[int(a), int(b)] for a, b in rows[1:]] == rep["class_size_histogram"]


def test_key_order_and_byte_stability(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "report", "--p", "2", "--m", "2", "--n", "3", "--threads", "1", "--out", str(a))
    run(capsys, "report", "--p", "2", "--m", "2", "--n", "3", "--threads", "8", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    keys = list(json.loads(a.read_text()))
    assert keys[:4] == ["command", "params", "group_order", "center_order"]
    cbq = json.loads(a.read_text())["details"]["cb_question"]
    assert cbq["verdict"] == "SKIPPED"


def test_thm27_literal(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, _, _ = run(capsys, "thm27", "--p", "2", "--m", "2", "--n", "3", "--c", "0,1", "--out", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["details"]["c"] == [0, 1] and rep["certificates"]


def test_burnside_p3(tmp_path, capsys):
    out = tmp_path / "bu.json"
    code, _, _ = run(capsys, "burnside", "--p", "3", "--m", "2", "--n", "3", "--out", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["autc_order"] == 6561 and rep["inn_order"] == 81


@pytest.mark.parametrize("argv", [
    ["info", "--p", "4"],
    ["info", "--n", "2"],
    ["info", "--n", "3", "--k", "4"],
    ["thm27", "--m", "1"],
    ["thm27", "--c", "0,0"],
    ["thm27", "--c", "2"],
    ["verify-a", "--m", "2"],
    ["verify-b", "--n", "4", "--k", "4"],
    ["autc", "--max-candidates", "0"],
    ["classes", "--csv"],
    ["nonsense"],
])
def test_bad_params_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_caps_exit_3(capsys, monkeypatch):
    assert run(capsys, "info", "--p", "3", "--n", "5", "--max-order", "100")[0] == 3
    assert run(capsys, "autc", "--n", "4", "--max-candidates", "3")[0] == 3
    monkeypatch.setenv("UTAUT_MAX_ORDER", "10")
    assert run(capsys, "info", "--p", "3", "--n", "3")[0] == 3
    # flag wins over environment
    assert run(capsys, "info", "--p", "3", "--n", "3", "--max-order", "1000")[0] == 0


def test_env_and_defaults(monkeypatch):
    monkeypatch.setenv("UTAUT_THREADS", "3")
    monkeypatch.setenv("UTAUT_MAX_CANDIDATES", "77")
    cfg = config_from_args(["burnside"])
    assert cfg.threads == 3 and cfg.max_candidates == 77 and cfg.m == 2 and cfg.k == 3
    cfg = config_from_args(["info", "--threads", "2", "--max-candidates", "5"])
    assert cfg.threads == 2 and cfg.max_candidates == 5 and cfg.m == 1


def test_fail_maps_to_exit_1(monkeypatch, capsys):
    import utaut.cli as cli

    def broken(cfg, ctx, rep):
        rep.checks["forced"] = False
    monkeypatch.setitem(cli.HANDLERS, "info", broken)
    assert run(capsys, "info")[0] == 1


def test_report_integers_only():
    rep = Report("x", {"p": 2}, group_order=8, class_size_histogram=[[1, 2], [2, 3]])
    rep.timings = {"total": 0.5}
    assert "timings" not in rep.to_dict()
    assert rep.to_dict(with_timings=True)["timings"] == {"total": 0.5}
    assert rep.histogram_csv() == "class_size,count\n1,2\n2,3\n"


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "utaut", "info", "--p", "2", "--n", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "group_order: 8" in out.stdout
