from fractions import Fraction

from tacause.causes import CauseQuery, cf_result
from tacause.checker import model_check_all
from tacause.dbm import DBM, bound
from tacause.dsl import parse_formula, parse_model
from tacause.model import validate_run
from tacause.runs import Event
from tacause.witness import concretize, pick_point

from conftest import RUNNING_EFFECT
from test_checker import LOOP


def test_pick_point_handles_open_unit_intervals():
    z = DBM.universe(2)
    z.constrain(0, 1, bound(-1, True))  # x > 1
    z.constrain(1, 0, bound(2, True))  # x < 2
    z.constrain(2, 1, bound(0, True))  # y < x
    z.constrain(1, 2, bound(1, True))  # x - y < 1
    v = pick_point(z)
    assert z.contains_point(v)
    assert 1 < v[1] < 2


def test_violation_witness_reaches_bad_state(running):
    net, _ = running
    res = model_check_all(net, parse_formula("G(!crit1 || !crit2)", net))
    w = concretize(res, net)
    assert w.kind == "reach"
    assert w.prefix[-1].target == ("crit1", "crit2")


def test_cycle_witness_is_a_valid_lasso():
    net = parse_model(LOOP)
    res = model_check_all(net, parse_formula("F pb", net), "divergent")
    w = concretize(res, net)
    assert w.kind == "cycle" and w.closed
    run = validate_run(net, w.to_run())
    assert run.period > 0


def test_counterfactual_witness_avoids_effect(running):
    net, run = running
    q = CauseQuery(net, run, parse_formula(RUNNING_EFFECT, net), "butfor")
    res = cf_result(q, [Event.delay(Fraction(2), 1, 2)])
    w = concretize(res, net)
    assert w.prefix and not w.contingency_used()
    assert all(s.target != ("crit1", "crit2") for s in w.prefix + w.loop)
