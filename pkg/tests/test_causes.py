from fractions import Fraction

import pytest

from tacause.causes import (ACTUAL, BUT_FOR, BoundExceeded, CauseQuery, check_cause,
                            compute_causes, naive_compute_causes)
from tacause.dsl import parse_formula
from tacause.model import ModelError
from tacause.runs import Event

from conftest import RUNNING_EFFECT

D = lambda v, i, k: Event.delay(Fraction(v), i, k)  # noqa: E731
ACT = lambda a, i, k: Event.action(a, i, k)  # noqa: E731


@pytest.fixture(scope="module")
def queries(running):
    net, run = running
    eff = parse_formula(RUNNING_EFFECT, net)
    return {m: CauseQuery(net, run, eff, m) for m in (BUT_FOR, ACTUAL)}


def test_check_cause_conditions(queries):
    q = queries[ACTUAL]
    assert check_cause(q, [ACT("beta", 1, 1)]).is_cause
    # a superset of a cause is counterfactual but not minimal
    chk = check_cause(q, [ACT("beta", 1, 1), D(1, 1, 1)])
    assert chk.sat and chk.cf and not chk.minimal
    # an event that did not happen fails SAT
    assert not check_cause(q, [D(7, 1, 1)]).sat
    # the empty set does not avoid the effect
    assert not check_cause(q, []).cf


def test_preemption_needs_contingency(queries):
    # changing A1's first action alone is not enough without contingencies
    assert not check_cause(queries[BUT_FOR], [ACT("beta", 1, 1)]).cf
    assert check_cause(queries[ACTUAL], [ACT("beta", 1, 1)]).cf


def test_reports_are_antichains(queries):
    for q in queries.values():
        causes = compute_causes(q).causes
        for a in causes:
            assert not any(a < b for b in causes)


def test_actual_refines_but_for(queries):
    bf = compute_causes(queries[BUT_FOR]).causes
    act = compute_causes(queries[ACTUAL]).causes
    for c in act:
        assert any(c <= b for b in bf)


def test_parallel_matches_sequential(running):
    net, run = running
    eff = parse_formula(RUNNING_EFFECT, net)
    seq = compute_causes(CauseQuery(net, run, eff, BUT_FOR)).causes
    par = compute_causes(CauseQuery(net, run, eff, BUT_FOR), jobs=2).causes
    assert set(seq) == set(par)


@pytest.mark.parametrize("budget", [0, 1, 12, 10_000])
def test_down_budget_does_not_change_result(single, budget):
    net, run = single
    q = CauseQuery(net, run, parse_formula("F[0,5] crit", net), BUT_FOR)
    ref = naive_compute_causes(q)
    assert set(compute_causes(q, down_budget=budget).causes) == ref


def test_effect_must_hold(running):
    net, run = running
    q = CauseQuery(net, run, parse_formula("G !crit1", net))
    with pytest.raises(ModelError):
        compute_causes(q)


def test_naive_bound(queries):
    with pytest.raises(BoundExceeded):
        naive_compute_causes(queries[BUT_FOR], bound=10)
