"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from .causes import (ACTUAL, BUT_FOR, CauseQuery, check_cause, compute_causes,
                     counterfactual_system)
from .checker import DIVERGENT, MAXIMAL, OBSERVATIONS, STATES, ResourceLimit, model_check_all
from .contingency import ActualNetwork
from .dsl import DslError, emit_model, parse_formula, parse_model, parse_run
from .model import LassoRun, ModelError, Network, fmt_rational, validate_run
from .runs import Event, local_locations, local_projection, sort_events
from .witness import concretize

SCHEMA_VERSION = 1
EXIT_OK, EXIT_DIAG, EXIT_BUDGET = 0, 1, 2

_LITERAL = re.compile(r"^\s*([A-Za-z_][\w']*[!?]?)@(\d+):([\w']+)(?:=(\S+))?\s*$")


class UsageError(ModelError):
    pass


# -- event literals ------------------------------------------------------------

def _component(network: Network, name: str) -> int:
    try:
        return network.index_of(name)
    except KeyError:
        pass
    m = re.fullmatch(r"A(\d+)", name) or re.fullmatch(r"(\d+)", name)
    if m and 1 <= int(m.group(1)) <= network.size:
        return int(m.group(1))
    raise UsageError(f"unknown component {name!r}")


def parse_event_literal(text: str, network: Network) -> Event:
    """``label@i:Comp`` for an action, ``delay@i:Comp=value`` for a delay."""
    m = _LITERAL.match(text)
    if not m:
        raise UsageError(f"bad event literal {text!r}; expected label@i:Comp or delay@i:Comp=value")
    name, index, comp, value = m.groups()
    k = _component(network, comp)
    if name == "delay":
        if value is None:
            raise UsageError(f"delay literal {text!r} needs '=value'")
        try:
            v = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad delay value {value!r}") from None
        return Event.delay(v, int(index), k)
    if value is not None:
        raise UsageError(f"action literal {text!r} takes no value")
    return Event.action(name, int(index), k)


def event_literal(e: Event, network: Network) -> str:
    comp = network.component(e.component).name
    if e.kind == "delay":
        return f"delay@{e.index}:{comp}={fmt_rational(e.value)}"
    return f"{e.value}@{e.index}:{comp}"


def _rational_json(x: Fraction) -> dict:
    x = Fraction(x)
    out = {"exact": f"{x.numerator}/{x.denominator}"}
    dec = fmt_rational(x)
    if "/" not in dec:
        out["decimal"] = dec
    return out


def event_json(e: Event, network: Network) -> dict:
    out = {"kind": e.kind}
    if e.kind == "delay":
        out["value"] = _rational_json(e.value)
    else:
        out["label"] = str(e.value)
    out["index"] = e.index
    out["component"] = network.component(e.component).name
    return out


def event_from_json(obj: dict, network: Network) -> Event:
    k = _component(network, obj["component"])
    if obj["kind"] == "delay":
        return Event.delay(Fraction(obj["value"]["exact"]), obj["index"], k)
    return Event.action(obj["label"], obj["index"], k)


def _tuple_event(e: Event, network: Network) -> str:
    v = fmt_rational(e.value) if e.kind == "delay" else str(e.value)
    return f"({v},{e.index},{network.component(e.component).name})"


# -- loading -------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_model(path: str) -> Network:
    return parse_model(_read(path))


def load_run(path: str, network: Network) -> LassoRun:
    return validate_run(network, parse_run(_read(path), network))


def _semantics(args) -> str:
    if args.allow_zeno and args.semantics == DIVERGENT:
        raise UsageError("--allow-zeno contradicts --semantics divergent")
    return args.semantics


def _query(args, network: Network, run: LassoRun) -> CauseQuery:
    return CauseQuery(network, run, parse_formula(args.effect, network), args.mode,
                      _semantics(args), args.node_limit, args.time_limit, args.observation)


def _causes(args, network: Network) -> list[Event]:
    out = []
    for text in args.cause or ():
        for part in text.split(","):
            if part.strip():
                out.append(parse_event_literal(part, network))
    return out


# -- subcommands -----------------------------------------------------------------

def cmd_mc(args, out) -> int:
    net = load_model(args.model)
    formula = parse_formula(args.formula, net)
    res = model_check_all(net, formula, _semantics(args), args.node_limit, args.time_limit,
                          observation=args.observation)
    if not res.found:
        print(f"satisfied: every run satisfies {formula} ({res.nodes} zones)", file=out)
        return EXIT_OK
    print(f"violated: {formula} ({res.nodes} zones)", file=out)
    for line in concretize(res, net).lines():
        print(line, file=out)
    return 1


def cmd_validate_run(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    print(f"valid lasso run: {len(run.prefix)} prefix steps, {len(run.loop)} loop steps, "
          f"period {fmt_rational(run.period)}", file=out)
    for j, s in enumerate(run.states):
        clocks = ", ".join(f"{x}={fmt_rational(v)}" for x, v in s.clocks.items())
        vars_ = "".join(f", {v}={n}" for v, n in s.vars.items())
        mark = "  <- loop start" if j == run.loop_start else ""
        print(f"  s{j}: ({', '.join(s.locations)}) {clocks}{vars_}{mark}", file=out)
    return EXIT_OK


def cmd_project(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    for k, comp in enumerate(net.components, 1):
        trace = local_projection(run, k)
        locs = " ".join(local_locations(run, k))
        print(f"{comp.name}: {trace}", file=out)
        print(f"  locations: {locs}", file=out)
    return EXIT_OK


def cmd_events(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    events = sort_events(CauseQuery(net, run, parse_formula("true")).events)
    if args.emit == "json":
        json.dump({"schema": SCHEMA_VERSION, "events": [event_json(e, net) for e in events]},
                  out, indent=2)
        print(file=out)
    else:
        for e in events:
            print(f"{_tuple_event(e, net):<18} {event_literal(e, net)}", file=out)
        print(f"{len(events)} events", file=out)
    return EXIT_OK


def cmd_check_cause(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    q = _query(args, net, run)
    c = _causes(args, net)
    chk = check_cause(q, c)
    if args.emit == "json":
        json.dump({"schema": SCHEMA_VERSION, "query": _echo(args),
                   "cause": [event_json(e, net) for e in sort_events(c)],
                   "sat": chk.sat, "cf": chk.cf, "min": chk.minimal,
                   "is_cause": chk.is_cause}, out, indent=2)
        print(file=out)
    else:
        print("true" if chk.is_cause else "false", file=out)
        print(f"  SAT={chk.sat} CF={chk.cf} MIN={chk.minimal}", file=out)
    return EXIT_OK


def _echo(args) -> dict:
    return {"model": args.model, "run": args.run, "effect": args.effect, "mode": args.mode,
            "semantics": _semantics(args), "observation": args.observation}


def cmd_compute_causes(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    q = _query(args, net, run)
    rep = compute_causes(q, jobs=args.jobs)
    causes = rep.sorted_causes()
    warnings = list(rep.warnings)
    if args.expect_causes is not None and args.expect_causes != len(causes):
        warnings.append(f"found {len(causes)} causes, expected {args.expect_causes}")
    if args.expect_events is not None and args.expect_events != len(rep.events):
        warnings.append(f"run has {len(rep.events)} events, expected {args.expect_events}")
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.emit == "json":
        json.dump({
            "schema": SCHEMA_VERSION,
            "query": _echo(args),
            "causes": [[event_json(e, net) for e in c] for c in causes],
            "stats": {"events": len(rep.events), "causes": len(causes),
                      "checks": len(rep.stats), "superset_pruned": rep.superset_pruned,
                      "subset_pruned": rep.subset_pruned,
                      "seconds": round(rep.total_time, 3)},
            "warnings": warnings,
        }, out, indent=2)
        print(file=out)
        return EXIT_OK
    print(f"{'#':>3}  {'cause':<40} {'mode':<7} witness", file=out)
    for i, c in enumerate(causes, 1):
        text = " ".join(_tuple_event(e, net) for e in c) or "{}"
        summary = ""
        if args.witness:
            res = _cf_check(q, c)
            summary = res
        print(f"{i:>3}  {text:<40} {args.mode:<7} {summary}", file=out)
    print(f"{len(causes)} causes, {len(rep.events)} events, {len(rep.stats)} checks, "
          f"{rep.total_time:.2f}s", file=out)
    return EXIT_OK


def _cf_check(q: CauseQuery, c) -> str:
    from .causes import cf_result
    res = cf_result(q, c)
    if not res.found:
        return "-"
    w = concretize(res)
    steps = len(w.prefix) + len(w.loop)
    extra = ", contingency" if w.contingency_used() else ""
    return f"{w.kind} after {steps} steps{extra}"


def cmd_dump_cf(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    q = CauseQuery(net, run, parse_formula("true"), BUT_FOR)
    print(emit_model(counterfactual_system(q, _causes(args, net))), file=out, end="")
    return EXIT_OK


def cmd_dump_contingency(args, out) -> int:
    net = load_model(args.model)
    run = load_run(args.run, net)
    q = CauseQuery(net, run, parse_formula("true"), ACTUAL)
    system = counterfactual_system(q, _causes(args, net))
    assert isinstance(system, ActualNetwork)
    print(emit_model(system.network), file=out, end="")
    w = system.wrapper
    print(f"// clock wrapper: positions 0..{w.length - 1}, loop back to {w.loop_start}", file=out)
    for j, vals in enumerate(w.valuations):
        text = ", ".join(f"{x} := {fmt_rational(v)}" for x, v in vals.items())
        print(f"//   position {j}: {text}", file=out)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------------

def _budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--node-limit", type=int, default=200_000,
                   help="maximum zone graph nodes per checker call")
    p.add_argument("--time-limit", type=float, default=None,
                   help="seconds per checker call")
    p.add_argument("--semantics", choices=(MAXIMAL, DIVERGENT), default=MAXIMAL,
                   help="which runs count as witnesses (default: maximal)")
    p.add_argument("--allow-zeno", action="store_true",
                   help="accept zeno and time-locked witnesses (the default)")
    p.add_argument("--observation", choices=OBSERVATIONS, default=STATES,
                   help="states: every visited state is observed; lcro: only states with dwell time")


def _emit(p: argparse.ArgumentParser) -> None:
    p.add_argument("--emit", choices=("table", "json"), default="table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tacause",
                                 description="Causes of MITL effects in timed automata runs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mc", help="model check an MITL formula on all runs")
    p.add_argument("model")
    p.add_argument("formula")
    _budget(p)
    p.set_defaults(func=cmd_mc)

    for name, func, help_ in (("validate-run", cmd_validate_run, "check a lasso run"),
                              ("project", cmd_project, "local projections of a run"),
                              ("events", cmd_events, "events of a run")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("model")
        p.add_argument("run")
        if name == "events":
            _emit(p)
        p.set_defaults(func=func)

    for name, func, help_ in (("check-cause", cmd_check_cause, "check one candidate cause"),
                              ("compute-causes", cmd_compute_causes, "all causes of an effect")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("model")
        p.add_argument("run")
        p.add_argument("effect")
        if name == "check-cause":
            p.add_argument("cause", nargs="*",
                           help="event literals label@i:Comp or delay@i:Comp=value")
        p.add_argument("--mode", choices=(BUT_FOR, ACTUAL), default=ACTUAL)
        _emit(p)
        _budget(p)
        if name == "compute-causes":
            p.add_argument("--jobs", type=int, default=1, help="parallel checker processes")
            p.add_argument("--witness", action="store_true",
                           help="summarize a counterfactual witness per cause")
            p.add_argument("--expect-causes", type=int, default=None,
                           help="warn if the number of causes differs")
            p.add_argument("--expect-events", type=int, default=None,
                           help="warn if the number of events differs")
        p.set_defaults(func=func)

    for name, func, help_ in (("dump-cf", cmd_dump_cf, "print the intervened network"),
                              ("dump-contingency", cmd_dump_contingency,
                               "print the contingency network and clock wrapper")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("model")
        p.add_argument("run")
        p.add_argument("cause", nargs="*", help="intervened events")
        p.set_defaults(func=func)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except DslError as exc:
        for d in exc.diagnostics:
            print(f"{d}", file=sys.stderr)
        return EXIT_DIAG
    except ResourceLimit as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAG


if __name__ == "__main__":
    sys.exit(main())
