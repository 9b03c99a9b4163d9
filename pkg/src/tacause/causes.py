"""But-for and actual causes of an effect in a lasso run."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

from .checker import MAXIMAL, STATES, CheckResult, exists_run_satisfying, negation_goal
from .contingency import build_actual_network
from .counterfactual import build_but_for_network
from .mitl import Formula, evaluate_mitl_on_lasso
from .model import LassoRun, ModelError, Network, validate_run
from .runs import Event, events_of_run, sort_events

BUT_FOR = "butfor"
ACTUAL = "actual"
MODES = (BUT_FOR, ACTUAL)


class BoundExceeded(ModelError):
    pass


@dataclass
class CauseQuery:
    network: Network
    run: LassoRun
    effect: Formula
    mode: str = BUT_FOR
    semantics: str = MAXIMAL
    node_limit: int = 200_000
    time_limit: float | None = None  # per checker call
    observation: str = STATES

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.run.states is None:
            self.run = validate_run(self.network, self.run)
        self._events: frozenset[Event] | None = None
        self._memo: dict[frozenset[Event], bool] = {}
        self._effect_holds: bool | None = None

    @property
    def events(self) -> frozenset[Event]:
        if self._events is None:
            self._events = events_of_run(self.run, self.network.size)
        return self._events

    def effect_holds(self) -> bool:
        if self._effect_holds is None:
            self._effect_holds = evaluate_mitl_on_lasso(self.network, self.run, self.effect,
                                                       self.observation)
        return self._effect_holds

    def with_mode(self, mode: str) -> "CauseQuery":
        q = CauseQuery(self.network, self.run, self.effect, mode, self.semantics,
                       self.node_limit, self.time_limit, self.observation)
        q._events = self._events
        q._effect_holds = self._effect_holds
        return q


def counterfactual_system(query: CauseQuery, causes: Iterable[Event]):
    if query.mode == BUT_FOR:
        return build_but_for_network(query.network, query.run, causes)
    return build_actual_network(query.network, query.run, causes)


def cf_result(query: CauseQuery, causes: Iterable[Event]) -> CheckResult:
    """Search for an intervened (and contingent) run avoiding the effect."""
    system = counterfactual_system(query, causes)
    return exists_run_satisfying(system, negation_goal(query.effect), query.semantics,
                                 query.node_limit, query.time_limit,
                                 observation=query.observation)


def cf_holds(query: CauseQuery, causes: Iterable[Event]) -> bool:
    key = frozenset(causes)
    got = query._memo.get(key)
    if got is None:
        got = cf_result(query, key).found
        query._memo[key] = got
    return got


@dataclass
class CauseCheck:
    sat: bool
    cf: bool
    minimal: bool

    @property
    def is_cause(self) -> bool:
        return self.sat and self.cf and self.minimal


def check_cause(query: CauseQuery, causes: Iterable[Event]) -> CauseCheck:
    """SAT, CF and MIN for one candidate; removing single events suffices for MIN."""
    c = frozenset(causes)
    sat = c <= query.events and query.effect_holds()
    if not sat:
        return CauseCheck(False, False, False)
    cf = cf_holds(query, c)
    if not cf:
        return CauseCheck(True, False, False)
    minimal = all(not cf_holds(query, c - {e}) for e in c)
    return CauseCheck(True, True, minimal)


@dataclass
class CauseReport:
    causes: list[frozenset[Event]]
    events: frozenset[Event]
    stats: dict[frozenset[Event], tuple[bool, float]] = field(default_factory=dict)
    superset_pruned: int = 0
    subset_pruned: int = 0
    total_time: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def sorted_causes(self) -> list[list[Event]]:
        out = [sort_events(c) for c in self.causes]
        return sorted(out, key=lambda c: (len(c), [(e.component, e.index, e.kind) for e in c]))


# -- parallel helpers -------------------------------------------------------

_WORKER_QUERY: CauseQuery | None = None


def _init_worker(query: CauseQuery) -> None:
    global _WORKER_QUERY
    _WORKER_QUERY = query


def _worker_check(c: frozenset[Event]) -> tuple[bool, float]:
    t = time.perf_counter()
    found = cf_result(_WORKER_QUERY, c).found
    return found, time.perf_counter() - t


class _Lattice:
    def __init__(self, query: CauseQuery, jobs: int, down_budget: int):
        self.query = query
        self.report = CauseReport([], query.events)
        self.positives: list[frozenset[Event]] = []
        self.negatives: list[frozenset[Event]] = []  # maximal checked negatives
        self.pool = ProcessPoolExecutor(jobs, initializer=_init_worker,
                                        initargs=(query,)) if jobs > 1 else None
        self.down_budget = down_budget

    def implied_negative(self, c: frozenset[Event]) -> bool:
        return any(c <= m for m in self.negatives)

    def implied_positive(self, c: frozenset[Event]) -> bool:
        return any(p <= c for p in self.positives)

    def check_all(self, cands: list[frozenset[Event]]) -> list[bool]:
        memo = self.query._memo
        todo = [c for c in cands if c not in memo]
        if self.pool is not None and len(todo) > 1:
            results = list(self.pool.map(_worker_check, todo))
        else:
            results = []
            for c in todo:
                t = time.perf_counter()
                results.append((cf_result(self.query, c).found, time.perf_counter() - t))
        for c, (v, dt) in zip(todo, results):
            memo[c] = v
            self.report.stats[c] = (v, dt)
        return [memo[c] for c in cands]

    def record_negative(self, c: frozenset[Event]) -> None:
        self.negatives = [m for m in self.negatives if not m <= c]
        self.negatives.append(c)

    def close(self) -> None:
        if self.pool is not None:
            self.pool.shutdown()


def compute_causes(query: CauseQuery, jobs: int = 1, down_budget: int = 256) -> CauseReport:
    """All causes, by a bidirectional walk over the subsets of the run's events.

    Sizes are visited alternately from below (0, 1, ...) and from above
    (|E|, |E|-1, ...).  A counterfactual success prunes all supersets, a
    failure all subsets.  Upper tiers are only expanded while they have at
    most ``down_budget`` sets.
    """
    start = time.perf_counter()
    if not query.effect_holds():
        raise ModelError("the run does not satisfy the effect")
    events = sort_events(query.events)
    n = len(events)
    lat = _Lattice(query, jobs, down_budget)
    rep = lat.report
    try:
        up, down = 0, n
        frontier: list[frozenset[Event]] = [frozenset()]
        pending: list[frozenset[Event]] = []  # positives of the last descending tier
        while up <= down and frontier:
            # -- ascending tier: candidates built from the negative frontier
            if up == 0:
                cands = [frozenset()]
            else:
                cands = _extend(frontier, events)
            live, implied = [], []
            for c in cands:
                if lat.implied_positive(c):
                    rep.superset_pruned += 1
                elif lat.implied_negative(c):
                    rep.subset_pruned += 1
                    implied.append(c)
                else:
                    live.append(c)
            verdicts = lat.check_all(live)
            frontier = implied[:]
            for c, v in zip(live, verdicts):
                if v:
                    lat.positives.append(c)
                else:
                    frontier.append(c)
            if up == 0 and lat.positives:
                break  # the empty set is the unique cause
            up += 1
            # -- descending tier
            if down >= up and comb(n, down) <= down_budget:
                tier = [frozenset(c) for c in combinations(events, down)]
                live = []
                for c in tier:
                    if lat.implied_positive(c):
                        rep.superset_pruned += 1
                    elif lat.implied_negative(c):
                        rep.subset_pruned += 1
                    else:
                        live.append(c)
                positives = []
                for c, v in zip(live, lat.check_all(live)):
                    if v:
                        positives.append(c)
                    else:
                        lat.record_negative(c)
                # a positive set one tier up is a cause if all its subsets failed
                for c in pending:
                    if all(lat.implied_negative(c - {x}) for x in c):
                        lat.positives.append(c)
                pending = positives
                down -= 1
        # the tier below the pending sets was settled by the ascending walk
        for c in pending:
            if not lat.implied_positive(c):
                lat.positives.append(c)
    finally:
        lat.close()
    causes = [c for c in lat.positives
              if not any(p < c for p in lat.positives)]  # MIN filter
    rep.causes = causes
    rep.total_time = time.perf_counter() - start
    return rep


def _extend(frontier: list[frozenset[Event]], events: list[Event]) -> list[frozenset[Event]]:
    """Sets one larger whose every immediate subset lies in ``frontier``."""
    order = {e: i for i, e in enumerate(events)}
    known = set(frontier)
    out = []
    seen = set()
    for base in frontier:
        top = max((order[e] for e in base), default=-1)
        for e in events[top + 1:]:
            c = base | {e}
            if c in seen:
                continue
            if all(c - {x} in known for x in c):
                seen.add(c)
                out.append(c)
    return out


def naive_compute_causes(query: CauseQuery, bound: int = 10) -> set[frozenset[Event]]:
    """Test every subset of the events and keep the minimal successful ones."""
    if not query.effect_holds():
        raise ModelError("the run does not satisfy the effect")
    events = sort_events(query.events)
    if len(events) > bound:
        raise BoundExceeded(f"{len(events)} events exceed the oracle bound {bound}")
    positive = []
    for size in range(len(events) + 1):
        for c in combinations(events, size):
            c = frozenset(c)
            if cf_holds(query, c):
                positive.append(c)
    return {c for c in positive if not any(p < c for p in positive)}
