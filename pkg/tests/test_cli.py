import io
import json
import os
import subprocess
import sys

import pytest

from conftest import ROOT, SAMPLES
from pmlog import parse_atom
from pmlog.cli import main

S = SAMPLES


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def test_check_five_rules():
    code, out, _ = run("check", f"{S}/five_rules.pml")
    assert code == 0 and out.startswith("OK: 5 rules")
    code, out, _ = run("check", f"{S}/five_rules.pml", "--sbt-only")
    assert code == 2
    assert [f"rule#{k}" in out for k in range(1, 6)] == [False, False, True, True, True]


def test_check_json_and_strata():
    code, out, _ = run("check", "--program", f"{S}/traffic.pml", "--json", "--show-strata")
    payload = json.loads(out)
    assert code == 0 and payload["ok"] and payload["rules"] == 5
    assert ["Change"] in payload["strata"]


def test_syntax_error_reports_position(write):
    code, _, err = run("check", write("bad.pml", "p(t) :- q(t).\nr(t :- q(t).\n"))
    assert code == 1
    assert "bad.pml:2:" in err


def test_unbound_head_variable(write):
    code, out, _ = run("check", write("rr.pml", "p(t, x) :- q(t, z).\n"))
    assert code == 2
    assert "[RANGE]" in out and " x" in out


def test_missing_file():
    assert run("run", "no/such/file.pml")[0] == 1


def test_run_split_example():
    code, out, _ = run("run", f"{S}/split.pml")
    assert code == 0
    assert out == ("Model 1 (2 atoms)\n  a(0)\n  b(0)\n"
                   "Model 2 (3 atoms)\n  a(0)\n  b(0)\n  c(0)\n")


def test_run_traffic_json_round_trips():
    code, out, _ = run("run", f"{S}/traffic.pml", "--facts", f"Change={S}/traffic_events.csv",
                       "--json")
    assert code == 0
    (model,) = json.loads(out)
    atoms = [parse_atom(a) for a in model]
    assert parse_atom("FullState(1, {1}, {2})") in atoms
    assert parse_atom("Faulty(7, 2, 4)") in atoms
    times = [a.time for a in atoms]
    assert times == sorted(times)


def test_run_header_flag(write):
    csv = write("ev.csv", "1,1,green\n2,1,red\n")
    _, out, _ = run("run", f"{S}/traffic.pml", "--facts", f"Change={csv}")
    assert 'State(1, 1, "green")' in out
    _, out, _ = run("run", f"{S}/traffic.pml", "--facts", f"Change={csv}", "--header")
    assert 'State(1, 1, "green")' not in out and 'State(2, 1, "red")' in out


def test_run_incremental_batches(write):
    first = write("a.csv", "1,1,green\n1,2,red\n3,1,yellow\n")
    rest = write("b.csv", "4,2,green\n6,1,red\n7,2,red\n")
    inc = run("run", f"{S}/traffic.pml", "--facts", f"Change={first}", "--add-facts",
              f"Change={rest}")
    batch = run("run", f"{S}/traffic.pml", "--facts", f"Change={S}/traffic_events.csv")
    assert inc == batch


def test_stale_batch_is_an_input_error(write):
    first = write("a.csv", "5,1,green\n")
    old = write("b.csv", "2,1,red\n")
    code, _, err = run("run", f"{S}/traffic.pml", "--facts", f"Change={first}", "--add-facts",
                       f"Change={old}")
    assert code == 1 and err


def test_fail_everything(write):
    code, out, _ = run("run", write("f.pml", "p(0).\nFAIL :- p(t).\n"))
    assert code == 3 and out == "No models\n"


def test_limit_exit_code(write):
    prog = write("loop.pml", "p(0).\np(t + 1) :- p(t).\n")
    code, out, err = run("run", prog, "--max-time", "5")
    assert code == 4
    assert "PARTIAL: max_time=5" in out
    code, out, _ = run("run", prog, "--max-time", "5", "--json")
    assert json.loads(out)["partial"] is True


def test_trace(write):
    code, out, _ = run("trace", f"{S}/split.pml")
    assert code == 0
    assert "[time 0 / stratum 1] rule#2 fired: c(0)" in out
    code, out, err = run("run", f"{S}/split.pml", "--trace")
    assert "rule#1 fired: a(0)" in err and "fired" not in out
    code, out, _ = run("trace", f"{S}/split.pml", "--json")
    payload = json.loads(out)
    assert payload["trace"][0]["rule"] == 3 and len(payload["models"]) == 2


def test_dl_family():
    code, out, _ = run("dl", f"{S}/family.kb", "--entails", "Fred : Poor", "--entails",
                       "Bob : Rich")
    assert code == 0
    assert out.splitlines() == ["SAT (2 models)", "ENTAILED: Fred : Poor",
                                "NOT-ENTAILED: Bob : Rich"]


def test_dl_unsat_and_syntax_error(write):
    assert run("dl", write("c.kb", "abox: a : And2(C, Not(C))\n"))[:2] == (3, "UNSAT (0 models)\n")
    assert run("dl", write("e.kb", "abox: a\n"))[0] == 1


def test_dl_undecided():
    code, out, _ = run("dl", f"{S}/loop.kb", "--max-time", "1")
    assert code == 4 and out.startswith("UNDECIDED")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pmlog", "run", f"{S}/split.pml", "--json"],
                          cwd=ROOT, capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == [["a(0)", "b(0)"], ["a(0)", "b(0)", "c(0)"]]
