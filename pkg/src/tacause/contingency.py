"""Contingencies: resetting locations and clocks to values seen in the run."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .counterfactual import build_cta, trace_clocks
from .model import (Edge, LassoRun, ModelError, Network, TimedAutomaton,
                    intersect_trace)
from .runs import (Event, filter_component, local_locations, local_projection,
                   trace_dst)


def copy_name(q: str, i: int) -> str:
    return f"{q}#{i}"


def split_copy(name: str) -> tuple[str, int]:
    q, _, i = name.rpartition("#")
    return q, int(i)


def build_location_contingency(component: TimedAutomaton, run: LassoRun, k: int
                               ) -> TimedAutomaton:
    """Copy ``component`` once per local position of the run.

    Besides its normal target, every edge taken at local position ``i`` may
    also jump to the location the component had after its ``i``-th step in
    the run.  A finite projection gets a final copy that loops to itself.
    """
    if run.states is None:
        raise ModelError("run must be validated first")
    trace = local_projection(run, k)
    locs = local_locations(run, k)
    length = len(trace)
    copies = len(locs)

    def dst(i: int) -> int:
        return trace_dst(trace, i) if i <= length else length

    names = [copy_name(q, i) for i in range(copies) for q in component.locations]
    edges = []
    positions = range(1, length + (1 if trace.is_lasso else 2))
    for i in positions:
        j = dst(i)
        for e in component.edges:
            src = copy_name(e.src, i - 1)
            edges.append(Edge(src, e.guard, e.label, e.update, copy_name(e.dst, j),
                              e.var_guard, e.var_update))
            if locs[j] != e.dst:
                edges.append(Edge(src, e.guard, e.label, e.update, copy_name(locs[j], j),
                                  e.var_guard, e.var_update))
    return TimedAutomaton(
        component.name, tuple(names), copy_name(component.initial, 0), component.clocks,
        tuple(edges),
        {copy_name(q, i): component.invariant(q)
         for i in range(copies) for q in component.locations},
        {copy_name(q, i): component.labels[q]
         for i in range(copies) for q in component.locations},
    )


@dataclass(frozen=True)
class ClockWrapper:
    """Global run position tracker allowing clock resets to run valuations.

    The explored state carries a position in ``0..length-1``.  Any network
    move from position ``i-1`` goes to ``dst(i)``; the contingency variant
    additionally sets every clock in ``clocks`` to its value at that run
    position.
    """

    length: int
    loop_start: int
    clocks: tuple[str, ...]
    valuations: tuple[dict[str, Fraction], ...]  # indexed by run position 0..length-1

    def dst(self, i: int) -> int:
        return self.loop_start if i == self.length else i

    def next_position(self, pos: int) -> int:
        return self.dst(pos + 1)

    def reset_at(self, pos: int) -> dict[str, Fraction]:
        return self.valuations[pos]


def build_clock_wrapper(network: Network, run: LassoRun) -> ClockWrapper:
    if run.states is None:
        raise ModelError("run must be validated first")
    clocks = tuple(sorted(network.all_clocks()))
    vals = tuple({x: run.states[j].clocks[x] for x in clocks} for j in range(run.length))
    return ClockWrapper(run.length, run.loop_start, clocks, vals)


@dataclass(frozen=True)
class ActualNetwork:
    """Intervened, location-contingent network plus the clock wrapper."""

    network: Network
    wrapper: ClockWrapper


def build_actual_network(network: Network, run: LassoRun, causes: Iterable[Event]
                         ) -> ActualNetwork:
    causes = frozenset(causes)
    clocks = trace_clocks(network)
    comps = []
    for k, comp in enumerate(network.components, 1):
        cont = build_location_contingency(comp, run, k)
        cta = build_cta(local_projection(run, k), filter_component(causes, k),
                        comp.alphabet(), clocks[k - 1], f"CTA_{comp.name}")
        comps.append(intersect_trace(cont, cta))
    net = Network(tuple(comps), network.clocks | frozenset(clocks), network.variables)
    return ActualNetwork(net, build_clock_wrapper(network, run))
