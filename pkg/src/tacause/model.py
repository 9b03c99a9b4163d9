"""Updatable timed automata, networks and their concrete semantics.

Clock values and constants are exact :class:`fractions.Fraction` values.
Component indices are 1-based everywhere in the public API, as in the
``(e, i, A_k)`` event notation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

RELATIONS = ("<", "<=", "==", ">=", ">")
VAR_RELATIONS = ("<", "<=", "==", "!=", ">=", ">")


class ModelError(Exception):
    """Raised for ill-formed models or semantic violations."""


class ParticipationError(ModelError):
    pass


class InadmissibleDelay(ModelError):
    pass


class ConflictingUpdate(ModelError):
    pass


class InvalidTransition(ModelError):
    pass


class LoopMismatch(ModelError):
    pass


def _cmp(lhs, op: str, rhs) -> bool:
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == "==":
        return lhs == rhs
    if op == ">=":
        return lhs >= rhs
    if op == ">":
        return lhs > rhs
    if op == "!=":
        return lhs != rhs
    raise ValueError(op)


@dataclass(frozen=True, order=True)
class Atom:
    """``left - right op bound``; ``right`` is None for single-clock atoms."""

    left: str
    op: str
    bound: Fraction
    right: str | None = None

    def holds(self, val: Mapping[str, Fraction]) -> bool:
        lhs = val[self.left] - (val[self.right] if self.right else 0)
        return _cmp(lhs, self.op, self.bound)

    def clocks(self) -> tuple[str, ...]:
        return (self.left,) if self.right is None else (self.left, self.right)

    def __str__(self) -> str:
        lhs = self.left if self.right is None else f"{self.left} - {self.right}"
        return f"{lhs} {self.op} {fmt_rational(self.bound)}"


@dataclass(frozen=True)
class Constraint:
    """Conjunction of clock atoms; no atoms means true."""

    atoms: tuple[Atom, ...] = ()

    def holds(self, val: Mapping[str, Fraction]) -> bool:
        return all(a.holds(val) for a in self.atoms)

    def conj(self, other: "Constraint") -> "Constraint":
        if not other.atoms:
            return self
        if not self.atoms:
            return other
        return Constraint(tuple(dict.fromkeys(self.atoms + other.atoms)))

    def clocks(self) -> set[str]:
        return {c for a in self.atoms for c in a.clocks()}

    @property
    def is_true(self) -> bool:
        return not self.atoms

    def __str__(self) -> str:
        return " && ".join(map(str, self.atoms)) if self.atoms else "true"


TRUE = Constraint()


@dataclass(frozen=True)
class VarAtom:
    var: str
    op: str
    value: int

    def holds(self, env: Mapping[str, int]) -> bool:
        return _cmp(env[self.var], self.op, self.value)

    def __str__(self) -> str:
        return f"{self.var} {self.op} {self.value}"


@dataclass(frozen=True)
class Update:
    """Partial map clock -> constant, kept sorted by clock name."""

    assignments: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, Fraction] | Iterable[tuple[str, Fraction]]) -> "Update":
        items = dict(mapping)
        for clock, value in items.items():
            if value < 0:
                raise ModelError(f"negative reset value for {clock}")
        return cls(tuple(sorted((c, Fraction(v)) for c, v in items.items())))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.assignments)

    def apply(self, val: Mapping[str, Fraction]) -> dict[str, Fraction]:
        out = dict(val)
        out.update(self.assignments)
        return out

    def union(self, other: "Update") -> "Update":
        merged = self.as_dict()
        for clock, value in other.assignments:
            if clock in merged and merged[clock] != value:
                raise ConflictingUpdate(
                    f"clock {clock} assigned both {merged[clock]} and {value}")
            merged[clock] = value
        return Update.of(merged)

    def clocks(self) -> set[str]:
        return {c for c, _ in self.assignments}


NO_UPDATE = Update()


@dataclass(frozen=True, order=True)
class Label:
    """Action label; polarity ``!`` sends, ``?`` receives, ``""`` is internal."""

    name: str
    polarity: str = ""

    def complement(self) -> "Label":
        return Label(self.name, {"!": "?", "?": "!", "": ""}[self.polarity])

    def __str__(self) -> str:
        return self.name + self.polarity


@dataclass(frozen=True)
class Edge:
    src: str
    guard: Constraint
    label: Label
    update: Update
    dst: str
    var_guard: tuple[VarAtom, ...] = ()
    var_update: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True, eq=False)
class TimedAutomaton:
    name: str
    locations: tuple[str, ...]
    initial: str
    clocks: frozenset[str]
    edges: tuple[Edge, ...]
    invariants: Mapping[str, Constraint]
    labels: Mapping[str, frozenset[str]]

    def __post_init__(self):
        if self.initial not in self.locations:
            raise ModelError(f"{self.name}: initial location {self.initial!r} unknown")
        locs = set(self.locations)
        for e in self.edges:
            if e.src not in locs or e.dst not in locs:
                raise ModelError(f"{self.name}: edge {e.src}->{e.dst} leaves the automaton")
        # totalise invariant and label maps
        object.__setattr__(self, "invariants",
                           {q: self.invariants.get(q, TRUE) for q in self.locations})
        object.__setattr__(self, "labels",
                           {q: frozenset(self.labels.get(q, ())) for q in self.locations})

    def invariant(self, q: str) -> Constraint:
        return self.invariants[q]

    def alphabet(self) -> frozenset[Label]:
        return frozenset(e.label for e in self.edges)

    def outgoing(self, q: str) -> list[Edge]:
        return [e for e in self.edges if e.src == q]

    def propositions(self) -> frozenset[str]:
        return frozenset(p for ps in self.labels.values() for p in ps)


@dataclass(frozen=True, order=True)
class NetworkAction:
    """``<A_first, A_second, label>``; internal iff first == second."""

    first: int
    second: int
    label: str

    @property
    def internal(self) -> bool:
        return self.first == self.second

    def __str__(self) -> str:
        if self.internal:
            return f"<A{self.first},{self.label}>"
        return f"<A{self.first},A{self.second},{self.label}>"


def participates(component: int, a: NetworkAction) -> bool:
    return component == a.first or component == a.second


def action_of(component: int, a: NetworkAction) -> Label:
    """Local label of ``a`` as seen by ``component``."""
    if a.internal:
        if component == a.first:
            return Label(a.label)
    elif component == a.first:
        return Label(a.label, "!")
    elif component == a.second:
        return Label(a.label, "?")
    raise ParticipationError(f"A{component} does not take part in {a}")


@dataclass(frozen=True)
class IntVar:
    name: str
    initial: int = 0
    low: int | None = None
    high: int | None = None


@dataclass(frozen=True, eq=False)
class Network:
    components: tuple[TimedAutomaton, ...]
    clocks: frozenset[str]
    variables: tuple[IntVar, ...] = ()

    def __post_init__(self):
        seen: dict[str, str] = {}
        for comp in self.components:
            for p in comp.propositions():
                if p in seen and seen[p] != comp.name:
                    raise ModelError(
                        f"label {p!r} used by both {seen[p]} and {comp.name}")
                seen[p] = comp.name

    @property
    def size(self) -> int:
        return len(self.components)

    def component(self, k: int) -> TimedAutomaton:
        return self.components[k - 1]

    def index_of(self, name: str) -> int:
        for k, comp in enumerate(self.components, 1):
            if comp.name == name:
                return k
        raise KeyError(name)

    def all_clocks(self) -> frozenset[str]:
        out = set(self.clocks)
        for comp in self.components:
            out |= comp.clocks
        return frozenset(out)

    def initial_state(self) -> "State":
        return State(tuple(c.initial for c in self.components),
                     {x: Fraction(0) for x in sorted(self.all_clocks())},
                     {v.name: v.initial for v in self.variables})

    def invariant(self, locs: Sequence[str]) -> Constraint:
        inv = TRUE
        for comp, q in zip(self.components, locs):
            inv = inv.conj(comp.invariant(q))
        return inv

    def labels(self, locs: Sequence[str]) -> frozenset[str]:
        out: set[str] = set()
        for comp, q in zip(self.components, locs):
            out |= comp.labels[q]
        return frozenset(out)

    def propositions(self) -> frozenset[str]:
        return frozenset(p for c in self.components for p in c.propositions())

    def max_constants(self) -> dict[str, Fraction]:
        """Largest constant each clock is compared against (0 if none)."""
        out = {x: Fraction(0) for x in self.all_clocks()}
        for comp in self.components:
            cons = list(comp.invariants.values()) + [e.guard for e in comp.edges]
            for c in cons:
                for a in c.atoms:
                    for x in a.clocks():
                        out[x] = max(out[x], abs(a.bound))
            for e in comp.edges:
                for x, v in e.update.assignments:
                    out[x] = max(out[x], v)
        return out

    def diagonal_clocks(self) -> set[str]:
        out: set[str] = set()
        for comp in self.components:
            for c in list(comp.invariants.values()) + [e.guard for e in comp.edges]:
                for a in c.atoms:
                    if a.right is not None:
                        out.update(a.clocks())
        return out


@dataclass
class State:
    locations: tuple[str, ...]
    clocks: dict[str, Fraction]
    vars: dict[str, int] = field(default_factory=dict)

    def key(self):
        return (self.locations, tuple(sorted(self.clocks.items())),
                tuple(sorted(self.vars.items())))

    def __eq__(self, other):
        return isinstance(other, State) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def delay_successor(state: State, delay: Fraction, network: Network) -> State:
    delay = Fraction(delay)
    if delay < 0:
        raise InadmissibleDelay("negative delay")
    inv = network.invariant(state.locations)
    after = {x: v + delay for x, v in state.clocks.items()}
    # conjunctive invariants are convex: both endpoints suffice
    if not inv.holds(state.clocks) or not inv.holds(after):
        raise InadmissibleDelay(f"delay {delay} violates invariant {inv}")
    return State(state.locations, after, dict(state.vars))


def _edge_enabled(e: Edge, state: State) -> bool:
    return e.guard.holds(state.clocks) and all(a.holds(state.vars) for a in e.var_guard)


def _fire(network: Network, state: State, moves: list[tuple[int, Edge]]) -> State | None:
    update = NO_UPDATE
    for _, e in moves:
        update = update.union(e.update)
    env = dict(state.vars)
    assigned: dict[str, int] = {}
    for _, e in moves:
        for var, value in e.var_update:
            if assigned.get(var, value) != value:
                raise ConflictingUpdate(f"variable {var} assigned {assigned[var]} and {value}")
            assigned[var] = value
    env.update(assigned)
    _check_var_bounds(network, env)
    locs = list(state.locations)
    for k, e in moves:
        locs[k - 1] = e.dst
    target = State(tuple(locs), update.apply(state.clocks), env)
    if not network.invariant(target.locations).holds(target.clocks):
        return None
    return target


def _check_var_bounds(network: Network, env: Mapping[str, int]) -> None:
    for v in network.variables:
        if (v.low is not None and env[v.name] < v.low) or (
                v.high is not None and env[v.name] > v.high):
            raise ModelError(f"variable {v.name} out of range: {env[v.name]}")


def transitions(network: Network, state: State):
    """Yield ``(NetworkAction, [(k, edge), ...])`` for every enabled move."""
    enabled = []
    for k, (comp, q) in enumerate(zip(network.components, state.locations), 1):
        enabled.append([e for e in comp.outgoing(q) if _edge_enabled(e, state)])
    for k, edges in enumerate(enabled, 1):
        for e in edges:
            if e.label.polarity == "":
                yield NetworkAction(k, k, e.label.name), [(k, e)]
            elif e.label.polarity == "!":
                for j, others in enumerate(enabled, 1):
                    if j == k:
                        continue
                    for f in others:
                        if f.label == e.label.complement():
                            yield NetworkAction(k, j, e.label.name), [(k, e), (j, f)]


def action_successors(state: State, network: Network) -> list[tuple[NetworkAction, State]]:
    out = []
    for action, moves in transitions(network, state):
        target = _fire(network, state, moves)
        if target is not None:
            out.append((action, target))
    return out


def _intersect_name(q: str, r: str) -> str:
    return f"{q}|{r}"


def intersect_trace(component: TimedAutomaton, cta: TimedAutomaton) -> TimedAutomaton:
    """Synchronous product on identical labels; labels come from ``component``.

    Only product locations reachable in the discrete graph are kept.
    """
    if cta.propositions():
        raise ModelError("trace automaton operand must be unlabelled")
    if component.clocks & cta.clocks:
        raise ModelError("operands share clocks")
    by_label: dict[tuple[str, Label], list[Edge]] = {}
    for e in cta.edges:
        by_label.setdefault((e.src, e.label), []).append(e)
    start = (component.initial, cta.initial)
    seen = {start}
    order = [start]
    edges: list[Edge] = []
    i = 0
    while i < len(order):
        q, r = order[i]
        i += 1
        for e in component.outgoing(q):
            for f in by_label.get((r, e.label), ()):
                tgt = (e.dst, f.dst)
                edges.append(Edge(_intersect_name(q, r), e.guard.conj(f.guard), e.label,
                                  e.update.union(f.update), _intersect_name(*tgt),
                                  e.var_guard, e.var_update))
                if tgt not in seen:
                    seen.add(tgt)
                    order.append(tgt)
    names = [_intersect_name(q, r) for q, r in order]
    return TimedAutomaton(
        name=component.name,
        locations=tuple(names),
        initial=names[0],
        clocks=component.clocks | cta.clocks,
        edges=tuple(edges),
        invariants={_intersect_name(q, r): component.invariant(q).conj(cta.invariant(r))
                    for q, r in order},
        labels={_intersect_name(q, r): component.labels[q] for q, r in order},
    )


def base_location(name: str) -> str:
    """Strip product/copy decorations from a generated location id."""
    return name.split("|", 1)[0].split("#", 1)[0]


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return f"{x.numerator}.0"
    d = x.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        # terminating decimal
        digits = 1
        while (x * 10 ** digits).denominator != 1:
            digits += 1
        return f"{float(x):.{digits}f}"
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Step:
    delay: Fraction
    action: NetworkAction
    target: tuple[str | None, ...] | None = None  # optional location hints


@dataclass(frozen=True, eq=False)
class LassoRun:
    """Finite prefix followed by a loop repeated forever.

    ``states[j]`` is the state at position ``j`` (0..p) of the first
    unfolding; it is filled in by :func:`validate_run`.
    """

    prefix: tuple[Step, ...]
    loop: tuple[Step, ...]
    states: tuple[State, ...] | None = None

    def __post_init__(self):
        if not self.loop:
            raise ModelError("lasso run needs a non-empty loop")
        for s in self.steps:
            if s.delay < 0:
                raise ModelError("negative delay in run")

    @property
    def steps(self) -> tuple[Step, ...]:
        return self.prefix + self.loop

    @property
    def loop_start(self) -> int:
        return len(self.prefix)

    @property
    def length(self) -> int:
        return len(self.prefix) + len(self.loop)

    def __len__(self) -> int:
        return self.length

    @property
    def validated(self) -> bool:
        return self.states is not None

    def time_of(self, j: int) -> Fraction:
        """Accumulated delay up to position ``j`` of the first unfolding."""
        return sum((s.delay for s in self.steps[:j]), Fraction(0))

    @property
    def period(self) -> Fraction:
        return sum((s.delay for s in self.loop), Fraction(0))


def equivalent_states(a: State, b: State, ceilings: Mapping[str, Fraction],
                      exact: Iterable[str] = ()) -> bool:
    """Equal discrete part and clocks equal or both above their ceiling."""
    if a.locations != b.locations or a.vars != b.vars:
        return False
    exact = set(exact)
    for x, va in a.clocks.items():
        vb = b.clocks[x]
        if va == vb:
            continue
        if x in exact or va <= ceilings.get(x, 0) or vb <= ceilings.get(x, 0):
            return False
    return True


MAX_LOOP_UNFOLDINGS = 4


def validate_run(network: Network, run: LassoRun) -> LassoRun:
    """Replay ``run`` from the initial state and attach the visited states.

    Nondeterministic edge choices are resolved by backtracking.  The loop
    must return to its starting locations and variable values, and is
    accepted once two consecutive loop iterations end in equivalent states.
    """
    ceilings = network.max_constants()
    exact = network.diagonal_clocks()
    steps = list(run.prefix) + list(run.loop) * MAX_LOOP_UNFOLDINGS
    n, m = run.loop_start, len(run.loop)
    deepest: list = [-1, ""]

    def fail(j: int, msg: str) -> None:
        if j > deepest[0]:
            deepest[0], deepest[1] = j, msg

    def successors(state: State, j: int):
        step = steps[j]
        try:
            state = delay_successor(state, step.delay, network)
        except InadmissibleDelay as exc:
            fail(j, f"step {j + 1}: {exc}")
            return
        found = False
        for action, moves in transitions(network, state):
            if action != step.action:
                continue
            target = _fire(network, state, moves)
            if target is None:
                continue
            if step.target and any(h is not None and h != q
                                   for h, q in zip(step.target, target.locations)):
                continue
            found = True
            yield target
        if not found:
            fail(j, f"step {j + 1}: action {step.action} not enabled")

    def dfs(path: list[State]) -> list[State] | None:
        j = len(path) - 1
        if j == n + m and (path[j].locations != path[n].locations
                           or path[j].vars != path[n].vars):
            fail(j, "loop does not return to its starting locations")
            return None
        if j >= n + m and (j - n) % m == 0 and equivalent_states(
                path[j - m], path[j], ceilings, exact):
            return path
        if j == len(steps):
            return None
        for nxt in successors(path[-1], j):
            got = dfs(path + [nxt])
            if got is not None:
                return got
        return None

    path = dfs([network.initial_state()])
    if path is None:
        if 0 <= deepest[0] < run.length:
            raise InvalidTransition(deepest[1])
        if deepest[0] == run.length and deepest[1].startswith("loop"):
            raise LoopMismatch(deepest[1])
        raise LoopMismatch(f"loop does not close within {MAX_LOOP_UNFOLDINGS} unfoldings")
    return LassoRun(run.prefix, run.loop, tuple(path[:run.length + 1]))
