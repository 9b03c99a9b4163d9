from fractions import Fraction

import pytest

from tacause.dsl import parse_model, parse_run
from tacause.model import (Atom, Constraint, InvalidTransition, LassoRun, LoopMismatch,
                           ModelError, NetworkAction, Step, action_successors,
                           delay_successor, fmt_rational, intersect_trace, validate_run)
from tacause.counterfactual import build_cta
from tacause.runs import local_projection


def test_running_example_states(running):
    net, run = running
    xs = [s.clocks["x1"] for s in run.states]
    assert xs[:4] == [0, 0, 1, 3]
    assert run.states[0].locations == ("init1", "init2")
    assert run.loop_start == 4 and run.length == 5
    assert run.period == 2


def test_delay_respects_invariant(running):
    net, run = running
    s = run.states[1]  # A1 in crit1 with x1 = 0
    assert delay_successor(s, Fraction(3), net).clocks["x1"] == 3
    with pytest.raises(ModelError):
        delay_successor(s, Fraction(7, 2), net)


def test_synchronisation_requires_partner():
    net = parse_model("""
        clock x;
        automaton A { init location a {} location b {} edge a -> b on c!; }
        automaton B { init location p {} location q {} edge p -> q on c?; }
        system A, B;""")
    moves = action_successors(net.initial_state(), net)
    assert [(str(a), s.locations) for a, s in moves] == [("<A1,A2,c>", ("b", "q"))]


def test_validate_rejects_wrong_delay(running):
    net, run = running
    bad = LassoRun((Step(Fraction(1), NetworkAction(1, 1, "beta")),
                    Step(Fraction(1), NetworkAction(1, 1, "beta"))),
                   (Step(Fraction(2), NetworkAction(1, 1, "alpha")),))
    with pytest.raises(InvalidTransition):
        validate_run(net, bad)


def test_validate_rejects_open_loop():
    net = parse_model("""
        clock x;
        automaton A { init location a {} location b {}
          edge a -> b on t do x := 0; edge b -> a on t do x := 0; }
        system A;""")
    run = parse_run("prefix { } loop { 1 A t; }", net)
    with pytest.raises(LoopMismatch):
        validate_run(net, run)
    ok = parse_run("prefix { } loop { 1 A t; 1 A t; }", net)
    assert validate_run(net, ok).states[2].locations == ("a",)


def test_eventual_periodicity_of_growing_clock(running):
    net, run = running
    # x2 is never reset in the loop; the run is still a valid lasso
    assert run.states[-1].clocks["x2"] == 5
    assert run.states[-1].locations == run.states[run.loop_start].locations


def test_intersection_with_trace_automaton(single):
    net, run = single
    comp = net.components[0]
    cta = build_cta(local_projection(run, 1), set(), comp.alphabet(), "d")
    prod = intersect_trace(comp, cta)
    assert prod.initial == "init|0"
    assert all(e.label in comp.alphabet() for e in prod.edges)
    # only the product locations reachable along the trace are kept
    assert prod.locations == ("init|0", "crit|1", "init|2")


def test_constraint_evaluation():
    c = Constraint((Atom("x", "<=", Fraction(3)), Atom("x", ">", Fraction(1))))
    assert c.holds({"x": Fraction(2)})
    assert not c.holds({"x": Fraction(1)})


def test_fmt_rational():
    assert fmt_rational(Fraction(3)) == "3.0"
    assert fmt_rational(Fraction(1, 4)) == "0.25"
    assert fmt_rational(Fraction(1, 3)) == "1/3"
