import io
import json
import re
import subprocess
import sys

import pytest

from tacause.cli import event_from_json, event_literal, main, parse_event_literal

from conftest import BENCH, RUNNING_EFFECT

MODEL = str(BENCH / "running_example.rtn")
RUN = str(BENCH / "running_example.run")


def run_cli(*argv):
    out = io.StringIO()
    rc = main(list(argv), out=out)
    return rc, out.getvalue()


def test_compute_actual_table():
    rc, out = run_cli("compute-causes", MODEL, RUN, RUNNING_EFFECT)
    assert rc == 0
    assert "4 causes, 12 events" in out
    for cell in ("(beta,1,A1)", "(1.0,1,A1)", "(beta,1,A2)", "(2.0,1,A2)"):
        assert cell in out


def test_table_and_json_agree():
    rc, out = run_cli("compute-causes", MODEL, RUN, RUNNING_EFFECT, "--mode", "butfor",
                      "--emit", "json")
    doc = json.loads(out)
    assert rc == 0 and doc["schema"] == 1 and doc["query"]["mode"] == "butfor"
    _, table = run_cli("compute-causes", MODEL, RUN, RUNNING_EFFECT, "--mode", "butfor")
    rows = [line for line in table.splitlines() if re.match(r"\s+\d+\s+\(", line)]
    from_table = {frozenset(re.findall(r"\([^)]*\)", r)) for r in rows}

    def cell(e):
        head = e["label"] if e["kind"] == "action" else e["value"]["decimal"]
        return f"({head},{e['index']},{e['component']})"

    assert from_table == {frozenset(map(cell, c)) for c in doc["causes"]}
    assert len(rows) == len(doc["causes"]) == 5


def test_json_causes_feed_check_cause(running):
    net = running[0]
    _, out = run_cli("compute-causes", MODEL, RUN, RUNNING_EFFECT, "--emit", "json")
    for cause in json.loads(out)["causes"]:
        lits = [event_literal(event_from_json(e, net), net) for e in cause]
        rc, text = run_cli("check-cause", MODEL, RUN, RUNNING_EFFECT, *lits, "--emit", "json")
        assert rc == 0 and json.loads(text)["is_cause"]


def test_check_cause_table():
    rc, out = run_cli("check-cause", MODEL, RUN, RUNNING_EFFECT, "beta@1:A1")
    assert rc == 0 and out.splitlines()[0] == "true"
    rc, out = run_cli("check-cause", MODEL, RUN, RUNNING_EFFECT, "beta@1:A1", "--mode", "butfor")
    assert out.splitlines()[0] == "false"


@pytest.mark.parametrize("lit", ["beta@1:A1", "delay@2:A2=3", "delay@1:A1=1/2"])
def test_event_literal_round_trip(running, lit):
    net = running[0]
    ev = parse_event_literal(lit, net)
    assert parse_event_literal(event_literal(ev, net), net) == ev


def test_mc_violation_has_witness():
    rc, out = run_cli("mc", MODEL, "G(!crit1 || !crit2)")
    assert rc == 1 and "violated" in out and "witness" in out
    rc, out = run_cli("mc", MODEL, "G(!crit1 || !init1)")
    assert rc == 0


def test_diagnostics_exit_1(capsys):
    rc, _ = run_cli("compute-causes", MODEL, RUN, "!G(!crit1 || ")
    assert rc == 1
    assert "1:14: error" in capsys.readouterr().err


def test_budget_exit_2(capsys):
    rc, _ = run_cli("compute-causes", MODEL, RUN, RUNNING_EFFECT, "--node-limit", "2")
    assert rc == 2
    assert "budget exhausted" in capsys.readouterr().err


def test_expected_count_warning(capsys):
    rc, _ = run_cli("compute-causes", MODEL, RUN, RUNNING_EFFECT, "--mode", "butfor",
                    "--expect-causes", "6")
    assert rc == 0
    assert "warning" in capsys.readouterr().err


def test_divergent_conflicts_with_allow_zeno():
    rc, _ = run_cli("mc", MODEL, "G !crit1", "--semantics", "divergent", "--allow-zeno")
    assert rc == 1


def test_dumps():
    rc, out = run_cli("dump-cf", MODEL, RUN, "beta@1:A1")
    assert rc == 0 and "automaton A1" in out and "d_A1" in out
    rc, out = run_cli("dump-contingency", MODEL, RUN, "beta@1:A1")
    assert rc == 0 and "clock wrapper" in out


def test_events_and_project():
    rc, out = run_cli("events", MODEL, RUN)
    assert rc == 0 and out.strip().endswith("12 events")
    assert run_cli("validate-run", MODEL, RUN)[0] == 0
    assert run_cli("project", MODEL, RUN)[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tacause", "events", MODEL, RUN],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "beta@1:A1" in proc.stdout
