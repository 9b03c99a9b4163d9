"""Zone-based search for runs of a network satisfying a simple MITL goal.

Goals are ``G_I psi`` or ``F_I psi`` with ``psi`` propositional.  A run's
signal is left-closed/right-open: a state left after zero time is never
observed, and the last state of a run that cannot continue is observed up
to and including the time it gets stuck.

Two readings of "run" are supported.  Under ``maximal`` semantics (the
default) any maximal path counts: infinite ones, zeno or not, and finite
ones ending in a state from which neither delay nor action is possible.
Under ``divergent`` semantics only infinite time-divergent runs count.

Extra clocks: ``w`` measures the dwell time in the current state, ``T``
the global time (only for bounded or shifted intervals), ``z`` witnesses
time progress along cycles (divergent semantics only).
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .contingency import ActualNetwork, ClockWrapper
from .dbm import DBM, bound
from .mitl import (TRUE_F, Finally, Formula, Globally, Interval, Not,
                   UnsupportedFragment, desugar, eval_prop, is_propositional)
from .model import (Atom, Constraint, ConflictingUpdate, ModelError, Network,
                    NetworkAction)

MAXIMAL = "maximal"
DIVERGENT = "divergent"
SEMANTICS = (MAXIMAL, DIVERGENT)
STATES = "states"
LCRO = "lcro"
OBSERVATIONS = (STATES, LCRO)


class ResourceLimit(ModelError):
    pass


@dataclass(frozen=True)
class Goal:
    """Exists a run with ``G_I psi`` (kind "G") or ``F_I psi`` (kind "F")."""

    kind: str
    psi: Formula
    interval: Interval = Interval()

    def formula(self) -> Formula:
        return (Globally if self.kind == "G" else Finally)(self.interval, self.psi)

    def __str__(self) -> str:
        return f"E {self.formula()}"


def goal_of(formula: Formula) -> Goal:
    """Goal asking for a run that satisfies ``formula``."""
    f = desugar(formula)
    while isinstance(f, Not) and isinstance(f.sub, Not):
        f = f.sub.sub
    if isinstance(f, Not) and isinstance(f.sub, (Globally, Finally)):
        inner = f.sub
        kind = "F" if isinstance(inner, Globally) else "G"
        return _goal(kind, Not(inner.sub), inner.interval)
    if isinstance(f, (Globally, Finally)):
        return _goal("G" if isinstance(f, Globally) else "F", f.sub, f.interval)
    raise UnsupportedFragment(
        f"{formula}: only G_I psi, F_I psi and their negations are supported")


def _goal(kind: str, psi: Formula, itv: Interval) -> Goal:
    if not is_propositional(psi):
        raise UnsupportedFragment(f"{psi} is not propositional")
    return Goal(kind, psi, itv)


def negation_goal(formula: Formula) -> Goal:
    """Goal asking for a run that violates ``formula``."""
    return goal_of(Not(formula))


# -- symbolic transitions --------------------------------------------------

@dataclass(frozen=True)
class STrans:
    action: NetworkAction
    edges: tuple  # ((k, Edge), ...)
    guard: tuple[tuple[int, int, int], ...]  # DBM constraints (i, j, raw bound)
    resets: tuple[tuple[int, int], ...]  # (clock index, scaled value)
    target: tuple[str, ...]
    vars: tuple[tuple[str, int], ...]
    position: int  # wrapper position after the move, -1 without wrapper
    contingency: bool = False


@dataclass
class Node:
    ident: int
    disc: tuple  # (locations, vars, position, mode)
    zone: DBM  # delayed zone
    entry: DBM
    parent: int | None = None
    via: STrans | None = None  # None for the root and for tick edges
    tick: bool = False


@dataclass
class Witness:
    """Symbolic witness path; ``kind`` is "cycle", "stuck", "idle" or "reach"."""

    kind: str
    path: list[Node]
    cycle: list[Node] = field(default_factory=list)
    region: DBM | None = None  # where the last path node ends, if restricted
    cycle_via: list = field(default_factory=list)  # edge into each cycle node, None for ticks


@dataclass
class CheckResult:
    found: bool
    witness: Witness | None
    nodes: int
    goal: Goal
    semantics: str
    search: "Search | None" = None


class Search:
    """Zone graph exploration for one network (and optional clock wrapper)."""

    def __init__(self, network: Network, goal: Goal, semantics: str = MAXIMAL,
                 wrapper: ClockWrapper | None = None, node_limit: int = 200_000,
                 time_limit: float | None = None, subsumption: bool = False,
                 observation: str = STATES):
        if semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {semantics!r}")
        if observation not in OBSERVATIONS:
            raise ValueError(f"unknown observation {observation!r}")
        self.observation = observation
        if network.diagonal_clocks():
            raise UnsupportedFragment("diagonal clock constraints are not supported by the checker")
        self.net = network
        self.goal = goal
        self.semantics = semantics
        self.wrapper = wrapper
        self.node_limit = node_limit
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.subsumption = subsumption
        itv = goal.interval
        self.timed = not itv.trivial
        self.clocks = sorted(network.all_clocks())
        names = list(self.clocks) + ["$w"]
        if self.timed:
            names.append("$T")
        if semantics == DIVERGENT:
            names.append("$z")
        self.names = names
        self.idx = {x: i + 1 for i, x in enumerate(names)}
        self.dim = len(names)
        self.W = self.idx["$w"]
        self.T = self.idx.get("$T")
        self.Z = self.idx.get("$z")
        self.scale = self._scale_factor()
        ceil = network.max_constants()
        if wrapper is not None:
            for v in wrapper.valuations:
                for x, c in v.items():
                    ceil[x] = max(ceil.get(x, Fraction(0)), c)
        self.ceilings = [0] * (self.dim + 1)
        for x in self.clocks:
            self.ceilings[self.idx[x]] = self._s(ceil.get(x, 0))
        if self.T:
            hi = itv.high if itv.bounded else itv.low
            self.ceilings[self.T] = self._s(max(itv.low, Fraction(hi)))
        if self.Z:
            self.ceilings[self.Z] = self.scale
        self._psi_cache: dict = {}
        self._trans_cache: dict = {}
        self._inv_cache: dict = {}

    # -- helpers ---------------------------------------------------------
    def _scale_factor(self) -> int:
        dens = {1}
        for comp in self.net.components:
            for c in list(comp.invariants.values()) + [e.guard for e in comp.edges]:
                dens.update(Fraction(a.bound).denominator for a in c.atoms)
            for e in comp.edges:
                dens.update(Fraction(v).denominator for _, v in e.update.assignments)
        if self.wrapper is not None:
            for v in self.wrapper.valuations:
                dens.update(Fraction(c).denominator for c in v.values())
        itv = self.goal.interval
        dens.add(Fraction(itv.low).denominator)
        if itv.bounded:
            dens.add(Fraction(itv.high).denominator)
        return math.lcm(*dens)

    def _s(self, value) -> int:
        v = Fraction(value) * self.scale
        assert v.denominator == 1
        return int(v)

    def atom_constraints(self, atom: Atom) -> list[tuple[int, int, int]]:
        i = self.idx[atom.left]
        j = self.idx[atom.right] if atom.right else 0
        c = self._s(atom.bound)
        op = atom.op
        out = []
        if op in ("<=", "==", "<"):
            out.append((i, j, bound(c, op == "<")))
        if op in (">=", "==", ">"):
            out.append((j, i, bound(-c, op == ">")))
        return out

    def constraint(self, c: Constraint) -> tuple[tuple[int, int, int], ...]:
        return tuple(x for a in c.atoms for x in self.atom_constraints(a))

    def invariant(self, locs: tuple[str, ...]):
        got = self._inv_cache.get(locs)
        if got is None:
            inv = self.net.invariant(locs)
            bounded = any(a.op in ("<", "<=", "==") and a.right is None for a in inv.atoms)
            tight = [self.atom_constraints(Atom(a.left, ">=", a.bound))[0]
                     for a in inv.atoms if a.op in ("<=", "==") and a.right is None]
            got = (self.constraint(inv), bounded, tuple(tight), inv)
            self._inv_cache[locs] = got
        return got

    def psi(self, locs: tuple[str, ...]) -> bool:
        got = self._psi_cache.get(locs)
        if got is None:
            got = eval_prop(self.goal.psi, self.net.labels(locs))
            self._psi_cache[locs] = got
        return got

    @staticmethod
    def apply(z: DBM, cons: Iterable[tuple[int, int, int]]) -> DBM:
        for i, j, b in cons:
            z.constrain(i, j, b)
            if z.is_empty():
                break
        return z

    # -- transitions -----------------------------------------------------
    def transitions(self, locs: tuple[str, ...], env: tuple, pos: int) -> list[STrans]:
        key = (locs, env, pos)
        got = self._trans_cache.get(key)
        if got is not None:
            return got
        vars_ = dict(env)
        enabled = []
        for k, (comp, q) in enumerate(zip(self.net.components, locs), 1):
            enabled.append([e for e in comp.outgoing(q)
                            if all(a.holds(vars_) for a in e.var_guard)])
        moves = []
        for k, edges in enumerate(enabled, 1):
            for e in edges:
                if e.label.polarity == "":
                    moves.append((NetworkAction(k, k, e.label.name), ((k, e),)))
                elif e.label.polarity == "!":
                    for j, others in enumerate(enabled, 1):
                        if j != k:
                            for f in others:
                                if f.label == e.label.complement():
                                    moves.append((NetworkAction(k, j, e.label.name),
                                                  ((k, e), (j, f))))
        out = []
        for action, mv in moves:
            out.extend(self._symbolic(action, mv, locs, vars_, pos))
        self._trans_cache[key] = out
        return out

    def _symbolic(self, action, mv, locs, vars_, pos) -> list[STrans]:
        guard = Constraint()
        upd = {}
        assigned: dict[str, int] = {}
        try:
            for _, e in mv:
                guard = guard.conj(e.guard)
                for x, v in e.update.assignments:
                    if x in upd and upd[x] != v:
                        raise ConflictingUpdate(x)
                    upd[x] = v
                for var, v in e.var_update:
                    if assigned.get(var, v) != v:
                        raise ConflictingUpdate(var)
                    assigned[var] = v
        except ConflictingUpdate:
            return []
        env = dict(vars_)
        env.update(assigned)
        for v in self.net.variables:
            if (v.low is not None and env[v.name] < v.low) or (
                    v.high is not None and env[v.name] > v.high):
                return []
        target = list(locs)
        for k, e in mv:
            target[k - 1] = e.dst
        target = tuple(target)
        env_t = tuple(sorted(env.items()))
        gcons = self.constraint(guard)
        variants = [(upd, False)]
        npos = -1
        if self.wrapper is not None:
            npos = self.wrapper.next_position(pos)
            cont = dict(upd)
            cont.update(self.wrapper.reset_at(npos))
            if cont != upd:
                variants.append((cont, True))
        out = []
        for u, is_cont in variants:
            resets = tuple(sorted((self.idx[x], self._s(v)) for x, v in u.items()))
            out.append(STrans(action, mv, gcons, resets, target, env_t, npos, is_cont))
        return out

    def enabling(self, t: STrans) -> DBM | None:
        """Valuations from which ``t`` can fire (guard and target invariant)."""
        z = DBM.universe(self.dim)
        self.apply(z, t.guard)
        reset = dict(t.resets)
        inv = self.net.invariant(t.target)
        for a in inv.atoms:
            for i, j, b in self.atom_constraints(a):
                if i in reset or j in reset:
                    vi = reset.get(i, 0) if i else 0
                    vj = reset.get(j, 0) if j else 0
                    if i not in reset and i != 0:
                        # x_i - v_j (b)
                        z.constrain(i, 0, b + 2 * vj)
                    elif j not in reset and j != 0:
                        z.constrain(0, j, b - 2 * vi)
                    elif bound(vi - vj) > b:
                        return None
                else:
                    z.constrain(i, j, b)
        return None if z.is_empty() else z

    def fire(self, zone: DBM, t: STrans) -> DBM | None:
        z = self.apply(zone.copy(), t.guard)
        if z.is_empty():
            return None
        for i, v in t.resets:
            z.reset(i, v)
        z.reset(self.W, 0)
        self.apply(z, self.invariant(t.target)[0])
        return None if z.is_empty() else z

    # -- node construction ---------------------------------------------
    def delayed(self, entry: DBM, locs) -> DBM:
        inv = self.invariant(locs)[0]
        z = self.apply(entry.copy(), inv)
        if z.is_empty():
            return z
        return self.apply(z.up(), inv)

    def pre_bound(self) -> tuple[int, int, int]:
        """``T`` still before the interval when the state is left."""
        itv = self.goal.interval
        strict = self.observation == STATES and not itv.low_open
        return (self.T, 0, bound(self._s(itv.low), strict))

    def post_entry(self, entry: DBM) -> DBM:
        """Entry zone restricted to ``T`` already past the interval."""
        itv = self.goal.interval
        return entry.copy().constrain(0, self.T, bound(-self._s(itv.high), not itv.high_open))

    def mode_zones(self, entry: DBM, locs) -> list[tuple[str, DBM]]:
        """Delayed zones for the ways the state may be occupied."""
        if self.goal.kind == "F" or self.psi(locs):
            return [("psi", self.delayed(entry, locs))]
        inv = self.invariant(locs)[0]
        out = []
        if self.observation == LCRO:
            out.append(("trans", self.apply(entry.copy(), inv)))
        itv = self.goal.interval
        if self.T is not None:
            if itv.low > 0 or (self.observation == STATES and itv.low_open):
                pre = [self.pre_bound()]
                z = self.apply(self.delayed(self.apply(entry.copy(), pre), locs), pre)
                out.append(("pre", z))
            if itv.bounded:
                out.append(("post", self.delayed(self.post_entry(entry), locs)))
        return [(m, z) for m, z in out if not z.is_empty()]

    def stuck(self, entry: DBM, locs, env, pos) -> list[DBM]:
        """Part of the delayed zone from which no action can ever fire."""
        real = self.delayed(entry, locs)
        if real.is_empty():
            return []
        pieces = [real]
        for t in self.transitions(locs, env, pos):
            en = self.enabling(t)
            if en is None:
                continue
            reach = real.intersect(en)
            if reach.is_empty():
                continue
            reach.down().close()
            reach = real.intersect(reach)
            nxt = []
            for p in pieces:
                nxt.extend(p.subtract(reach))
            pieces = nxt
            if not pieces:
                break
        return pieces

    def terminal_ok(self, entry: DBM, locs, env, pos, after: bool = False
                    ) -> tuple[str, DBM] | None:
        """A way for the path to end here acceptably, if any.

        Without upper bounds in the invariant the run may idle forever;
        otherwise (maximal semantics only) it may get stuck where no action
        can fire any more.
        """
        _, bounded, tight, _ = self.invariant(locs)
        goal, itv = self.goal, self.goal.interval
        if not bounded:
            if after or (goal.kind == "G" and self.psi(locs)):
                z = self.delayed(entry, locs)
                return None if z.is_empty() else ("idle", z)
            if goal.kind == "G" and self.T is not None and itv.bounded:
                z = self.delayed(self.post_entry(entry), locs)
                return None if z.is_empty() else ("idle", z)
            return None
        if self.semantics == DIVERGENT:
            return None
        pieces = self.stuck(entry, locs, env, pos)
        if not pieces:
            return None
        if after or (goal.kind == "G" and self.psi(locs)):
            return "stuck", pieces[0]
        if goal.kind == "G":
            if self.T is None:
                return None
            if itv.bounded:
                late = self.post_entry(entry)
                if not late.is_empty():
                    for p in self.stuck(late, locs, env, pos):
                        return "stuck", p
            a = self._s(itv.low)
            for p in pieces:
                for i, j, b in tight:
                    z = p.copy().constrain(i, j, b)
                    z.constrain(self.T, 0, bound(a, not itv.low_open))
                    if not z.is_empty():
                        return "stuck", z
            return None
        # F goal under LCRO: a psi state observed only at its lock point
        if not self.psi(locs) or self.observation != LCRO:
            return None
        for p in pieces:
            for i, j, b in tight:
                z = p.copy().constrain(i, j, b)
                if self.T is not None:
                    self._in_interval(z)
                if not z.is_empty():
                    return "stuck", z
        return None

    def _in_interval(self, z: DBM) -> DBM:
        itv = self.goal.interval
        z.constrain(0, self.T, bound(-self._s(itv.low), itv.low_open))
        if itv.bounded:
            z.constrain(self.T, 0, bound(self._s(itv.high), itv.high_open))
        return z

    def observed(self, entry: DBM, locs) -> DBM | None:
        """Sub-zone of the delayed zone where ``psi`` was seen during ``I``."""
        if not self.psi(locs):
            return None
        z = entry.copy()
        itv = self.goal.interval
        if self.T is not None and itv.bounded:
            z.constrain(self.T, 0, bound(self._s(itv.high), itv.high_open))
        z = self.delayed(z, locs)
        low = self._s(itv.low) if self.T is not None else 0
        if self.observation == LCRO:
            z.constrain(0, self.W, bound(0, True))  # w > 0
            if self.T is not None:
                z.constrain(0, self.T, bound(-low, True))  # T > a
        elif self.T is not None:
            z.constrain(0, self.T, bound(-low, itv.low_open))
        return None if z.is_empty() else z

    def tick(self, zone: DBM, locs, mode: str) -> DBM | None:
        """Mark one time unit of progress: needs ``z >= 1``, then resets ``z``."""
        z = zone.copy().constrain(0, self.Z, bound(-self.scale))
        if z.is_empty():
            return None
        z.reset(self.Z, 0)
        if mode == "trans":
            return z
        z = self.delayed(z, locs)
        if mode == "pre":
            z.constrain(*self.pre_bound())
        return z

    # -- main loop -------------------------------------------------------
    def run(self) -> CheckResult:
        net = self.net
        init_locs = tuple(c.initial for c in net.components)
        init_env = tuple(sorted((v.name, v.initial) for v in net.variables))
        pos0 = 0 if self.wrapper is not None else -1
        entry0 = DBM.zero(self.dim)
        self.nodes: list[Node] = []
        self.succ: list[list[tuple[int, bool, STrans | None]]] = []
        self.index: dict = {}
        self.by_disc: dict = {}
        queue: deque[int] = deque()
        phase_goal = self.goal.kind == "F"

        def add(disc, zone, entry, parent, via, tick=False) -> int | None:
            zone.extrapolate(self.ceilings)
            if zone.is_empty():
                return None
            key = (disc, zone.key())
            got = self.index.get(key)
            if got is None and self.subsumption:
                for other in self.by_disc.get(disc, ()):
                    if self.nodes[other].zone.includes(zone):
                        got = other
                        break
            if got is not None:
                if parent is not None:
                    self.succ[parent].append((got, tick, via))
                return None
            if len(self.nodes) >= self.node_limit:
                raise ResourceLimit(f"node limit {self.node_limit} exceeded")
            n = Node(len(self.nodes), disc, zone, entry, parent, via, tick)
            self.nodes.append(n)
            self.succ.append([])
            self.index[key] = n.ident
            self.by_disc.setdefault(disc, []).append(n.ident)
            if parent is not None:
                self.succ[parent].append((n.ident, tick, via))
            queue.append(n.ident)
            return n.ident

        def spawn(locs, env, pos, entry, parent, via, phase):
            if phase_goal and phase == 0:
                yield "psi", self.delayed(entry, locs)
            elif phase_goal:
                yield "after", self.delayed(entry, locs)
            else:
                yield from self.mode_zones(entry, locs)

        phase0 = 0
        for mode, z in spawn(init_locs, init_env, pos0, entry0, None, None, phase0):
            add((init_locs, init_env, pos0, mode), z, entry0, None, None)

        found: Witness | None = None
        checked_stuck: set = set()
        steps = 0
        while queue and found is None:
            nid = queue.popleft()
            node = self.nodes[nid]
            locs, env, pos, mode = node.disc
            steps += 1
            if self.deadline is not None and steps % 256 == 0 and time.monotonic() > self.deadline:
                raise ResourceLimit("time limit exceeded")
            after = mode == "after"
            # acceptance through a stuck or idle state
            skey = (locs, env, pos, after, (node.zone if after else node.entry).key())
            if skey not in checked_stuck:
                checked_stuck.add(skey)
                if not phase_goal or after or self.semantics == MAXIMAL:
                    ok = self.terminal_ok(node.zone if after else node.entry,
                                          locs, env, pos, after)
                    if ok is not None:
                        found = Witness(ok[0], self.path_to(nid), region=ok[1])
                        break
            if phase_goal and not after:
                obs = self.observed(node.entry, locs)
                if obs is not None:
                    if self.semantics == MAXIMAL:
                        found = Witness("reach", self.path_to(nid), region=obs)
                        break
                    if self.T is not None:
                        obs.free(self.T)  # the interval no longer matters
                    add((locs, env, pos, "after"), obs, node.entry, nid, None)
            # only accepting nodes need progress ticks
            if self.Z is not None and (after or not phase_goal):
                tz = self.tick(node.zone, locs, mode)
                if tz is not None:
                    add(node.disc, tz, node.entry, nid, None, tick=True)
            for t in self.transitions(locs, env, pos):
                entry = self.fire(node.zone, t)
                if entry is None:
                    continue
                for m, z in spawn(t.target, t.vars, t.position, entry, nid, t,
                                  1 if after else 0):
                    if m == "psi" and after:
                        m = "after"
                    add((t.target, t.vars, t.position, m), z, entry, nid, t)
        if found is None and not (phase_goal and self.semantics == MAXIMAL):
            found = self.find_cycle()
        return CheckResult(found is not None, found, len(self.nodes), self.goal,
                           self.semantics, self)

    def path_to(self, nid: int) -> list[Node]:
        out = []
        cur: int | None = nid
        while cur is not None:
            out.append(self.nodes[cur])
            cur = self.nodes[cur].parent
        return out[::-1]

    def find_cycle(self) -> Witness | None:
        """A reachable cycle (with a tick edge under divergent semantics)."""
        allowed = None
        if self.goal.kind == "F":
            allowed = {n.ident for n in self.nodes if n.disc[3] == "after"}
        comp = _tarjan(len(self.nodes), self.succ, allowed)
        for members in comp:
            mset = set(members)
            inner = [(u, v, tk, t) for u in members for v, tk, t in self.succ[u] if v in mset]
            if not inner:
                continue
            if self.semantics == DIVERGENT:
                ticks = [e for e in inner if e[2]]
                if not ticks:
                    continue
                u, v, _, last = ticks[0]
            else:
                u, v, _, last = inner[0]
            # cycle: v ->* u -> v inside the component
            back = _bfs_path(self.succ, v, u, mset)
            edges = []
            for a, b in zip(back, back[1:]):
                edges.append(next(t for x, _, t in self.succ[a] if x == b))
            edges.append(last)
            return Witness("cycle", self.path_to(v), [self.nodes[i] for i in back[1:] + [v]],
                           cycle_via=edges)
        return None


def _tarjan(n: int, succ, allowed=None) -> list[list[int]]:
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    out = []
    counter = 0
    for root in range(n):
        if index[root] != -1 or (allowed is not None and root not in allowed):
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            v, i = work[-1]
            nxt = succ[v]
            while i < len(nxt) and allowed is not None and nxt[i][0] not in allowed:
                i += 1
            if i < len(nxt):
                work[-1] = (v, i + 1)
                w = nxt[i][0]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, 0))
                elif on[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    out.append(comp)
    return out


def _bfs_path(succ, src: int, dst: int, within: set[int]) -> list[int]:
    """Node ids of a path ``src ->* dst`` (inclusive) inside ``within``."""
    prev = {src: None}
    q = deque([src])
    while q:
        u = q.popleft()
        if u == dst:
            break
        for v, _, _ in succ[u]:
            if v in within and v not in prev:
                prev[v] = u
                q.append(v)
    out = []
    cur = dst
    while cur is not None:
        out.append(cur)
        cur = prev[cur]
    return out[::-1]


# -- public API ----------------------------------------------------------------

def _unpack(system) -> tuple[Network, ClockWrapper | None]:
    if isinstance(system, ActualNetwork):
        return system.network, system.wrapper
    return system, None


def exists_run_satisfying(system, goal: Goal, semantics: str = MAXIMAL,
                          node_limit: int = 200_000, time_limit: float | None = None,
                          subsumption: bool = False, observation: str = STATES
                          ) -> CheckResult:
    net, wrapper = _unpack(system)
    return Search(net, goal, semantics, wrapper, node_limit, time_limit,
                  subsumption, observation).run()


def model_check_all(system, formula: Formula, semantics: str = MAXIMAL,
                    node_limit: int = 200_000, time_limit: float | None = None,
                    observation: str = STATES) -> CheckResult:
    """``found`` is False iff every run satisfies ``formula``."""
    return exists_run_satisfying(system, negation_goal(formula), semantics,
                                 node_limit, time_limit, observation=observation)


def holds(system, formula: Formula, **kw) -> bool:
    return not model_check_all(system, formula, **kw).found


def reachable_zone_graph(system, restriction: Formula | None = None,
                         node_limit: int = 200_000) -> list[Node]:
    """All reachable zone nodes, optionally restricted to ``restriction`` states."""
    net, wrapper = _unpack(system)
    psi = restriction if restriction is not None else TRUE_F
    s = Search(net, Goal("G", psi), MAXIMAL, wrapper, node_limit)
    s.terminal_ok = lambda *a: None  # explore everything
    s.mode_zones = lambda entry, locs: (
        [("psi", s.delayed(entry, locs))] if s.psi(locs) else [])
    s.run()
    return s.nodes

