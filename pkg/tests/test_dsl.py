from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tacause.dsl import (DslError, emit_formula, emit_model, emit_run, model_diagnostics,
                         parse_formula, parse_model, parse_run)
from tacause.mitl import Finally, Globally, Interval, Not, Prop
from tacause.model import validate_run

from conftest import BENCH


@pytest.mark.parametrize("name", sorted(p.name for p in BENCH.glob("*.rtn")))
def test_model_round_trip(name):
    net = parse_model((BENCH / name).read_text())
    again = parse_model(emit_model(net))
    assert emit_model(again) == emit_model(net)
    for a, b in zip(again.components, net.components):
        assert (a.locations, a.initial, a.edges, a.invariants, a.labels) == \
            (b.locations, b.initial, b.edges, b.invariants, b.labels)


def test_run_round_trip(running):
    net, run = running
    again = validate_run(net, parse_run(emit_run(run, net), net))
    assert again.prefix == run.prefix and again.loop == run.loop


def test_run_syntax_variants(running):
    net, _ = running
    text = """prefix { 1 : A1 beta -> (crit1, _); 1.0 2 beta; 2 A1 beta; 1 A2 beta; }
              loop { 2 1 alpha; }"""
    run = validate_run(net, parse_run(text, net))
    assert run.length == 5


def test_diagnostics_have_positions():
    diags = model_diagnostics("clock x;\nautomaton A {\n  init location a {}\n"
                              "  edge a -> b on t when y <= 1;\n}\nsystem A;")
    assert diags and all(d.line == 4 for d in diags)
    msgs = " ".join(d.message for d in diags)
    assert "b" in msgs and "y" in msgs


def test_missing_loop_is_an_error(running):
    net, _ = running
    with pytest.raises(DslError) as exc:
        parse_run("prefix { 1 A1 beta; }", net)
    assert "loop" in str(exc.value)


def test_formula_parsing(running):
    net, _ = running
    f = parse_formula("!G(!crit1 || !crit2)", net)
    assert isinstance(f, Not) and isinstance(f.sub, Globally)
    g = parse_formula("F[2, 4) crit1", net)
    assert g == Finally(Interval(Fraction(2), Fraction(4), False, True), Prop("crit1"))
    with pytest.raises(DslError):
        parse_formula("F[2,2] crit1", net)  # singleton interval
    with pytest.raises(DslError):
        parse_formula("G nosuch", net)


names = st.sampled_from(["p", "q", "r"])
intervals = st.one_of(
    st.just(None),
    st.tuples(st.integers(0, 5), st.integers(1, 4), st.booleans(), st.booleans())
    .map(lambda t: Interval(Fraction(t[0]), Fraction(t[0] + t[1]), t[2], t[3])),
    st.integers(0, 5).map(lambda a: Interval(Fraction(a))))


def formulas():
    return st.recursive(
        names.map(Prop),
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: t[0] & t[1]),
            st.tuples(sub, sub).map(lambda t: t[0] | t[1]),
            st.tuples(intervals, sub).map(lambda t: Finally(t[0] or Interval(), t[1])),
            st.tuples(intervals, sub).map(lambda t: Globally(t[0] or Interval(), t[1]))),
        max_leaves=6)


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_formula_round_trip(f):
    assert parse_formula(emit_formula(f)) == f


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="clockautomaton{}();:=<>!?&|-x0123 \nedgelocinitsym", max_size=80))
def test_parser_fuzz_never_crashes(text):
    # arbitrary input yields a network or positioned diagnostics, nothing else
    try:
        parse_model(text)
    except DslError as exc:
        assert exc.diagnostics
        assert all(d.line >= 1 and d.column >= 1 for d in exc.diagnostics)
