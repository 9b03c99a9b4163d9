"""Concrete timed runs from symbolic checker witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .checker import CheckResult, Search
from .dbm import DBM, INF, b_const, b_strict, bound
from .model import LassoRun, ModelError, Network, NetworkAction, Step, base_location, \
    fmt_rational, validate_run


@dataclass
class ConcreteStep:
    delay: Fraction
    action: NetworkAction
    target: tuple[str, ...]  # locations of the original components
    contingency: bool = False

    def __str__(self) -> str:
        mark = " [contingency]" if self.contingency else ""
        return f"{fmt_rational(self.delay)} {self.action} -> ({', '.join(self.target)}){mark}"


@dataclass
class ConcreteWitness:
    """A run prefix (and loop, for cycles) with exact delays."""

    kind: str
    prefix: list[ConcreteStep]
    loop: list[ConcreteStep] = field(default_factory=list)
    final_delay: Fraction | None = None  # time spent in the last state, if finite
    closed: bool = False  # the loop was re-validated as a lasso of the model

    def lines(self) -> list[str]:
        out = [f"witness ({self.kind})"]
        out += [f"  {s}" for s in self.prefix]
        if self.loop:
            out.append("  loop:" if self.closed else "  loop (one unfolding):")
            out += [f"    {s}" for s in self.loop]
        if self.final_delay is not None:
            out.append(f"  then delay {fmt_rational(self.final_delay)}")
        elif self.kind in ("idle", "stuck"):
            out.append(f"  then {'idle forever' if self.kind == 'idle' else 'stuck'}")
        return out

    def to_run(self) -> LassoRun | None:
        if not self.closed or self.contingency_used():
            return None
        conv = lambda s: Step(s.delay, s.action, s.target)
        return LassoRun(tuple(map(conv, self.prefix)), tuple(map(conv, self.loop)))

    def contingency_used(self) -> bool:
        return any(s.contingency for s in self.prefix + self.loop)


def _scale(d: DBM, k: int) -> None:
    """Multiply every constant of ``d`` by ``k`` (keeps strictness and closure)."""
    for idx, b in enumerate(d.d):
        if b < INF:
            d.d[idx] = bound(b_const(b) * k, b_strict(b))


def pick_point(d: DBM) -> list[Fraction]:
    """A rational point of a closed, non-empty DBM (``vals[0] = 0``)."""
    if d.is_empty():
        raise ModelError("cannot pick a point of an empty zone")
    z = d.copy()
    scale = 1
    vals = [0] * z.n
    for i in range(1, z.n):
        while True:
            lo_b, hi_b = z[0, i], z[i, 0]
            lo = -b_const(lo_b)
            if not b_strict(lo_b):
                v = lo
            elif hi_b >= INF or lo + 1 < b_const(hi_b) or (
                    lo + 1 == b_const(hi_b) and not b_strict(hi_b)):
                v = lo + 1
            else:
                _scale(z, 2)
                scale *= 2
                vals = [x * 2 for x in vals]
                continue
            break
        vals[i] = v
        z.constrain(i, 0, bound(v))
        z.constrain(0, i, bound(-v))
        if z.is_empty():
            raise ModelError("point selection failed")
    return [Fraction(v, scale) for v in vals]


class _Timeline:
    """Difference constraints over the firing times of a symbolic path."""

    def __init__(self, search: Search, count: int):
        self.s = search
        self.z = DBM.universe(count - 1)
        for i in range(1, count):
            self.z.constrain(i - 1, i, bound(0))  # t_{i-1} <= t_i
        self.resets = {i: (0, 0) for i in range(1, search.dim + 1)}  # clock -> (time var, value)

    def add_zone(self, zone: DBM, at: int) -> None:
        """The clock valuation at time variable ``at`` lies in ``zone``."""
        s = self.s
        for i in range(zone.n):
            for j in range(zone.n):
                b = zone[i, j]
                if i == j or b >= INF or s.Z in (i, j):
                    continue
                ri, vi = self.resets[i] if i else (at, 0)
                rj, vj = self.resets[j] if j else (at, 0)
                # x_i - x_j = t_rj - t_ri + vi - vj
                c = b_const(b) - vi + vj
                if rj == ri:
                    if c < 0 or (c == 0 and b_strict(b)):
                        self.z.constrain(0, 0, bound(-1))  # infeasible
                    continue
                self.z.constrain(rj, ri, bound(c, b_strict(b)))

    def add_guard(self, cons, at: int) -> None:
        g = DBM.universe(self.s.dim)
        Search.apply(g, cons)
        self.add_zone(g, at)

    def fire(self, resets, at: int) -> None:
        for i, v in resets:
            self.resets[i] = (at, v)
        self.resets[self.s.W] = (at, 0)


def _dwells(w) -> tuple[list, int]:
    """``(node, via)`` pairs of the witness, one per dwell, and the loop start.

    Tick edges only continue the dwell of their source, so they are dropped.
    """
    pairs = [(n, n.via) for n in w.path if not n.tick]
    start = len(pairs)
    pairs += [(n, t) for n, t in zip(w.cycle, w.cycle_via) if t is not None]
    return pairs, start


def concretize(result: CheckResult, original: Network | None = None) -> ConcreteWitness:
    """Exact delays for the symbolic witness of ``result``.

    ``original`` is the model the counterfactual system was built from; when
    given and the witness is a cycle without contingency moves, the lasso is
    re-validated against it.
    """
    w, search = result.witness, result.search
    if w is None or search is None:
        raise ModelError("no witness to concretize")
    pairs, loop_at = _dwells(w)
    finite = loop_at == len(pairs)
    count = len(pairs) + (1 if finite else 0)  # time variables t_0..t_{count-1}
    tl = _Timeline(search, count)
    for i, (node, via) in enumerate(pairs):
        if i > 0:
            tl.add_guard(via.guard, i)
            tl.fire(via.resets, i)
        if i < loop_at:
            tl.add_zone(node.entry, i)  # the entry zone belongs to the tree edge
        tl.add_zone(node.zone, i)
        if i + 1 < count:
            last = finite and i == len(pairs) - 1
            tl.add_zone(w.region if last and w.region is not None else node.zone, i + 1)
    tl.z.close()
    if tl.z.is_empty():
        raise ModelError("symbolic witness has no concrete realization")
    times = [t / search.scale for t in pick_point(tl.z)]

    def step(i: int) -> ConcreteStep:
        via = pairs[i][1]
        target = tuple(base_location(q) for q in via.target)
        return ConcreteStep(times[i] - times[i - 1], via.action, target, via.contingency)

    prefix = [step(i) for i in range(1, loop_at)]
    cyc = [step(i) for i in range(loop_at, len(pairs))]
    final = times[-1] - times[-2] if finite and w.kind not in ("idle",) else None
    out = ConcreteWitness(w.kind, prefix, cyc, final)
    if cyc and original is not None and not out.contingency_used():
        out.closed = True
        try:
            validate_run(original, out.to_run())
        except ModelError:
            out.closed = False
    return out
