import sys
from pathlib import Path

import pytest

from tacause.dsl import parse_model, parse_run
from tacause.model import validate_run

ROOT = Path(__file__).resolve().parent.parent
BENCH = ROOT / "benchmarks"
sys.path.insert(0, str(Path(__file__).resolve().parent))

RUNNING_EFFECT = "!G(!crit1 || !crit2)"
FISCHER_EFFECT = "!G !crit1"


def load(model: str, run: str | None = None):
    net = parse_model((BENCH / model).read_text())
    if run is None:
        return net
    return net, validate_run(net, parse_run((BENCH / run).read_text(), net))


@pytest.fixture(scope="session")
def running():
    return load("running_example.rtn", "running_example.run")


@pytest.fixture(scope="session")
def single():
    return load("running_example_single.rtn", "running_example_single.run")


@pytest.fixture(scope="session")
def fischer_rho1():
    return load("fischer2.rtn", "fischer_rho1.run")


@pytest.fixture(scope="session")
def fischer_rho2():
    return load("fischer2.rtn", "fischer_rho2.run")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
