from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tacause.counterfactual import build_but_for_network, build_cta
from tacause.dsl import emit_model
from tacause.model import Label, ModelError
from tacause.runs import Event, LocalTrace, local_projection

B, A = Label("beta"), Label("alpha")
GOLDEN_TRACE = LocalTrace(((Fraction(1), B), (Fraction(3), B), (Fraction(2), A)), 2)

CTA_GOLDEN = """\
clock d;
automaton CTA {
  init location "0" { invariant d <= 1.0; }
  location "1" {}
  location "2" { invariant d <= 2.0; }
  edge "0" -> "1" on alpha when d == 1.0 do d := 0.0;
  edge "0" -> "1" on beta when d == 1.0 do d := 0.0;
  edge "1" -> "2" on beta do d := 0.0;
  edge "2" -> "2" on alpha when d == 2.0 do d := 0.0;
}
system CTA;
"""


def test_cta_golden():
    cta = build_cta(GOLDEN_TRACE, {("action", 1), ("delay", 2)}, [A, B])
    assert emit_model(cta) == CTA_GOLDEN


def test_cta_without_interventions_is_the_trace():
    cta = build_cta(GOLDEN_TRACE, set(), [A, B])
    assert [(e.src, e.label.name, e.dst) for e in cta.edges] == \
        [("0", "beta", "1"), ("1", "beta", "2"), ("2", "alpha", "2")]
    assert all(e.guard.atoms for e in cta.edges)


def test_finite_trace_gets_terminal_location():
    t = LocalTrace(((Fraction(2), B), (Fraction(3), B)), None)
    cta = build_cta(t, set(), [A, B])
    assert cta.locations == ("0", "1", "2")
    assert not cta.outgoing("2") and cta.invariant("2").atoms == ()


def test_intervention_out_of_range():
    with pytest.raises(ModelError):
        build_cta(GOLDEN_TRACE, {("delay", 4)}, [A, B])


@settings(max_examples=100, deadline=None)
@given(st.sets(st.tuples(st.sampled_from(["delay", "action"]), st.integers(1, 3))))
def test_cta_rule_coverage(cs):
    """Each position follows exactly one of the four rules."""
    cta = build_cta(GOLDEN_TRACE, cs, [A, B])
    for i, (delta, act) in enumerate(GOLDEN_TRACE.steps, 1):
        src = str(i - 1)
        out = cta.outgoing(src)
        labels = {e.label for e in out}
        assert labels == ({A, B} if ("action", i) in cs else {act})
        for e in out:
            assert bool(e.guard.atoms) == (("delay", i) not in cs)
        inv = cta.invariant(src).atoms
        assert bool(inv) == (("delay", i) not in cs)
        assert all(dict(e.update.assignments) == {"d": 0} for e in out)


def test_but_for_network_keeps_components(running):
    net, run = running
    bf = build_but_for_network(net, run, [Event.delay(Fraction(1), 1, 1)])
    assert bf.size == 2
    assert {"d_A1", "d_A2"} <= bf.all_clocks()
    first = bf.components[0]
    assert first.initial == "init1|0"
    # the intervened first delay of A1 has no invariant in the trace automaton part
    assert all(a.left != "d_A1" for a in first.invariant("init1|0").atoms)
    assert local_projection(run, 1).steps[0][0] == 1
