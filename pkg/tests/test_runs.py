from fractions import Fraction

from tacause.model import Label
from tacause.runs import (Event, events_of_run, filter_component, local_locations,
                          local_projection, satisfies_events, segments, sort_events)

B, A = Label("beta"), Label("alpha")


def test_running_example_projections(running):
    net, run = running
    a1, a2 = local_projection(run, 1), local_projection(run, 2)
    assert a1.steps == ((1, B), (3, B), (3, A), (2, A))
    assert a1.loop_start == 3
    assert a2.steps == ((2, B), (3, B)) and a2.loop_start is None
    assert local_locations(run, 1) == ["init1", "crit1", "init1", "init1"]
    assert local_locations(run, 2) == ["init2", "crit2", "init2"]


def test_single_component_projection_matches_trace(single):
    net, run = single
    t = local_projection(run, 1)
    assert str(t) == "<1.0,beta><3.0,beta>(<2.0,alpha>)^w"


def test_event_counts(running, fischer_rho1, fischer_rho2):
    assert len(events_of_run(running[1], 2)) == 12
    assert len(events_of_run(fischer_rho1[1], 2)) == 8
    assert len(events_of_run(fischer_rho2[1], 2)) == 14


def test_events_and_filter(running):
    net, run = running
    ev = events_of_run(run, 2)
    assert Event.delay(Fraction(1), 1, 1) in ev
    assert Event.action("beta", 1, 2) in ev
    assert filter_component(ev, 2) == {("delay", 1), ("action", 1), ("delay", 2), ("action", 2)}
    assert satisfies_events(run, [Event.delay(Fraction(2), 1, 2)], 2)
    assert not satisfies_events(run, [Event.delay(Fraction(5), 1, 2)], 2)
    assert str(sort_events(ev)[0]) == "(1.0,1,A1)"


def test_signal_segments(running):
    net, run = running
    segs = list(segments(net, run, Fraction(8)))
    assert segs[0] == (0, 1, frozenset({"init1", "init2"}))
    # crit1 and crit2 overlap on [2, 4)
    both = [(s, e) for s, e, lab in segs if {"crit1", "crit2"} <= lab]
    assert both == [(2, 4)]
    assert segs[-1][1] >= 8
