"""Counterfactual trace automata and the intervened network for but-for checks."""

from __future__ import annotations

from typing import Iterable

from .model import (TRUE, Atom, Constraint, Edge, Label, LassoRun, ModelError,
                    Network, TimedAutomaton, Update, intersect_trace)
from .runs import Event, LocalTrace, filter_component, local_projection, trace_dst


def build_cta(trace: LocalTrace, interventions: Iterable[tuple[str, int]],
              alphabet: Iterable[Label], clock: str = "d", name: str = "CTA"
              ) -> TimedAutomaton:
    """Automaton whose traces agree with ``trace`` outside the intervened events.

    ``interventions`` holds local ``(kind, index)`` pairs.  Position ``i``
    of the trace becomes one edge per admissible label from location
    ``i-1`` to ``dst(i)``; its guard pins the delay to ``delta_i`` unless
    that delay is intervened.  A finite trace gets an extra final location
    without outgoing edges.
    """
    cs = set(interventions)
    length = len(trace)
    for kind, i in cs:
        if not 1 <= i <= length:
            raise ModelError(f"intervention at position {i} outside 1..{length}")
    alphabet = sorted(set(alphabet))
    count = length if trace.is_lasso else length + 1
    locs = tuple(str(q) for q in range(count))
    reset = Update.of({clock: 0})
    edges = []
    for i in range(1, length + 1):
        delta, act = trace.steps[i - 1]
        guard = TRUE if ("delay", i) in cs else Constraint((Atom(clock, "==", delta),))
        labels = alphabet if ("action", i) in cs else [act]
        for lbl in labels:
            edges.append(Edge(str(i - 1), guard, lbl, reset, str(trace_dst(trace, i))))
    invariants = {}
    for q in range(length):
        if ("delay", q + 1) not in cs:
            invariants[str(q)] = Constraint((Atom(clock, "<=", trace.steps[q][0]),))
    return TimedAutomaton(name, locs, "0", frozenset({clock}), tuple(edges), invariants, {})


def fresh_clock(network: Network, base: str, taken: set[str]) -> str:
    name = base
    while name in taken or name in network.all_clocks():
        name += "_"
    taken.add(name)
    return name


def trace_clocks(network: Network) -> list[str]:
    """One fresh clock per component for its trace automaton."""
    taken: set[str] = set()
    return [fresh_clock(network, f"d_{c.name}", taken) for c in network.components]


def build_but_for_network(network: Network, run: LassoRun, causes: Iterable[Event]
                          ) -> Network:
    """Each component restricted to the traces its trace automaton allows."""
    causes = frozenset(causes)
    comps = []
    clocks = trace_clocks(network)
    for k, comp in enumerate(network.components, 1):
        cta = build_cta(local_projection(run, k), filter_component(causes, k),
                        comp.alphabet(), clocks[k - 1], f"CTA_{comp.name}")
        comps.append(intersect_trace(comp, cta))
    return Network(tuple(comps), network.clocks | frozenset(clocks), network.variables)
