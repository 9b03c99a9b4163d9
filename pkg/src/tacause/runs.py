"""Local projections of lasso runs, events, and the signal of a run."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .model import (Label, LassoRun, ModelError, Network, State, action_of,
                    participates)

UNROLL = 3


@dataclass(frozen=True)
class LocalTrace:
    """Sequence of ``(delay, label)``; ``loop_start`` is None for finite traces."""

    steps: tuple[tuple[Fraction, Label], ...]
    loop_start: int | None = None

    def __post_init__(self):
        if self.loop_start is not None and not 0 <= self.loop_start < len(self.steps):
            raise ModelError("lasso trace needs loop_start < length")

    @property
    def is_lasso(self) -> bool:
        return self.loop_start is not None

    def __len__(self) -> int:
        return len(self.steps)

    def delay(self, i: int) -> Fraction:
        return self.steps[i - 1][0]

    def action(self, i: int) -> Label:
        return self.steps[i - 1][1]

    def __str__(self) -> str:
        parts = [f"<{_num(d)},{a}>" for d, a in self.steps]
        if self.loop_start is None:
            return "".join(parts)
        n = self.loop_start
        return "".join(parts[:n]) + "(" + "".join(parts[n:]) + ")^w"


def _num(x: Fraction) -> str:
    return str(float(x)) if x.denominator in (1, 2, 4, 5, 8, 10) else str(x)


@dataclass(frozen=True, order=True)
class Event:
    """A delay or action occurrence at local position ``index`` of a component."""

    component: int
    index: int
    kind: str  # "delay" | "action"
    value: Fraction | Label

    def __post_init__(self):
        if self.index < 1:
            raise ModelError("event index must be >= 1")
        if self.kind not in ("delay", "action"):
            raise ModelError(f"unknown event kind {self.kind!r}")

    @classmethod
    def delay(cls, value, index: int, component: int) -> "Event":
        return cls(component, index, "delay", Fraction(value))

    @classmethod
    def action(cls, label: Label | str, index: int, component: int) -> "Event":
        if isinstance(label, str):
            label = Label(label.rstrip("!?"), label[-1] if label[-1] in "!?" else "")
        return cls(component, index, "action", label)

    def local(self) -> tuple[str, int]:
        return (self.kind, self.index)

    def __str__(self) -> str:
        v = _num(self.value) if self.kind == "delay" else str(self.value)
        return f"({v},{self.index},A{self.component})"


EventSet = frozenset  # frozenset[Event]


def dst_index(length: int, loop_start: int | None, k: int) -> int:
    """Successor position of step ``k``: ``k`` except the last step of a loop."""
    if not 1 <= k <= length:
        raise IndexError(f"position {k} outside 1..{length}")
    if loop_start is not None and k == length:
        return loop_start
    return k


def run_dst(run: LassoRun, k: int) -> int:
    return dst_index(run.length, run.loop_start, k)


def trace_dst(trace: LocalTrace, k: int) -> int:
    return dst_index(len(trace), trace.loop_start, k)


def unrolled_steps(run: LassoRun, loops: int = UNROLL):
    return list(run.prefix) + list(run.loop) * loops


def _participations(run: LassoRun, k: int, loops: int):
    """``(global position, cumulative delay, label)`` for each move of ``k``."""
    out = []
    acc = Fraction(0)
    for j, step in enumerate(unrolled_steps(run, loops), 1):
        acc += step.delay
        if participates(k, step.action):
            out.append((j, acc, action_of(k, step.action)))
            acc = Fraction(0)
    return out


def _location_after(run: LassoRun, j: int, k: int) -> str:
    """Location of component ``k`` at unrolled position ``j``."""
    states = run.states
    if states is None:
        raise ModelError("run must be validated first")
    p, n = run.length, run.loop_start
    if j > p:
        j = n + (j - n) % (p - n) if (j - n) % (p - n) else p
    return states[j].locations[k - 1]


def _local_lasso(run: LassoRun, k: int):
    moves = _participations(run, k, UNROLL)
    per_loop = sum(1 for s in run.loop if participates(k, s.action))
    in_prefix = sum(1 for s in run.prefix if participates(k, s.action))
    if per_loop == 0:
        moves = moves[:in_prefix]
        return moves, None
    seq = [(d, a, _location_after(run, j, k)) for j, d, a in moves]
    m = per_loop
    start = next(s for s in range(len(seq))
                 if all(seq[j] == seq[j + m] for j in range(s, len(seq) - m)))
    return moves[:start + m], start


def local_projection(run: LassoRun, k: int) -> LocalTrace:
    moves, start = _local_lasso(run, k)
    return LocalTrace(tuple((d, a) for _, d, a in moves), start)


def local_locations(run: LassoRun, k: int) -> list[str]:
    """Location of ``k`` initially and after each of its local steps.

    For lasso projections the list has one entry per trace position
    (0..|pi|-1); for finite ones it also includes the final location.
    """
    moves, start = _local_lasso(run, k)
    locs = [_location_after(run, 0, k)] + [_location_after(run, j, k) for j, _, _ in moves]
    return locs[:-1] if start is not None else locs


def localize(run: LassoRun, network: Network) -> tuple[LocalTrace, ...]:
    return tuple(local_projection(run, k) for k in range(1, network.size + 1))


def trace_events(trace: LocalTrace, k: int) -> frozenset[Event]:
    out = set()
    for i, (d, a) in enumerate(trace.steps, 1):
        out.add(Event.delay(d, i, k))
        out.add(Event.action(a, i, k))
    return frozenset(out)


def events_of_run(run: LassoRun, n_components: int) -> frozenset[Event]:
    out: set[Event] = set()
    for k in range(1, n_components + 1):
        out |= trace_events(local_projection(run, k), k)
    return frozenset(out)


def filter_component(events: Iterable[Event], k: int) -> frozenset[tuple[str, int]]:
    """Local ``(kind, index)`` view of the events of component ``k``."""
    return frozenset(e.local() for e in events if e.component == k)


def satisfies_events(run: LassoRun, events: Iterable[Event], n_components: int) -> bool:
    return frozenset(events) <= events_of_run(run, n_components)


def sort_events(events: Iterable[Event]) -> list[Event]:
    return sorted(events, key=lambda e: (e.component, e.index, e.kind != "delay"))


def segments(network: Network, run: LassoRun, horizon: Fraction
             ) -> Iterator[tuple[Fraction, Fraction, frozenset[str]]]:
    """Positive-length signal segments ``[start, end)`` covering ``[0, horizon)``.

    If the loop takes no time the last state before the zeno limit is kept
    forever.
    """
    states = run.states
    if states is None:
        raise ModelError("run must be validated first")
    steps = run.steps
    p, n = run.length, run.loop_start
    t = Fraction(0)
    j = 0
    while True:
        step = steps[j] if j < p else steps[n + (j - n) % (p - n)]
        loc_state = _state_at(run, j)
        end = t + step.delay
        if end > t:
            yield t, end, network.labels(loc_state.locations)
        t = end
        j += 1
        if t >= horizon:
            return
        if j > p and run.period == 0:
            yield t, horizon, network.labels(_state_at(run, j).locations)
            return


def _state_at(run: LassoRun, j: int) -> State:
    p, n = run.length, run.loop_start
    if j > p:
        j = n + (j - n) % (p - n) if (j - n) % (p - n) else p
    return run.states[j]


def signal_at(network: Network, run: LassoRun, t) -> frozenset[str]:
    t = Fraction(t)
    for start, end, labels in segments(network, run, t + 1):
        if start <= t < end:
            return labels
    raise ModelError(f"time {t} not covered")
