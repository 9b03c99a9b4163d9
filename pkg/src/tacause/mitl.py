"""MITL formulas and their evaluation on lasso-shaped runs.

Signals are represented as finite unions of intervals with open or closed
endpoints.  A state that is left after zero time does not contribute to the
signal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import LassoRun, ModelError, Network

INF = float("inf")


class UnsupportedFragment(ModelError):
    pass


@dataclass(frozen=True)
class Interval:
    low: Fraction = Fraction(0)
    high: Fraction | float = INF
    low_open: bool = False
    high_open: bool = True

    def __post_init__(self):
        if self.low < 0:
            raise ModelError("interval bounds must be non-negative")
        if self.high == INF and not self.high_open:
            raise ModelError("unbounded interval must be right-open")
        if self.high < self.low or (self.high == self.low):
            raise ModelError(f"interval {self} must be non-singular and non-empty")

    @property
    def bounded(self) -> bool:
        return self.high != INF

    @property
    def trivial(self) -> bool:
        """True for ``[0, inf)``."""
        return self.low == 0 and not self.low_open and self.high == INF

    def __str__(self) -> str:
        hi = "inf" if self.high == INF else _num(self.high)
        return f"{'(' if self.low_open else '['}{_num(self.low)},{hi}{')' if self.high_open else ']'}"


def _num(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(float(x)) if \
        x.denominator in (2, 4, 5, 8, 10) else str(x)


ALWAYS = Interval()


class Formula:
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Prop(Formula):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula

    def __str__(self):
        return f"!{_paren(self.sub)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class Finally(Formula):
    interval: Interval
    sub: Formula

    def __str__(self):
        return f"F{_itv(self.interval)} {_paren(self.sub)}"


@dataclass(frozen=True)
class Globally(Formula):
    interval: Interval
    sub: Formula

    def __str__(self):
        return f"G{_itv(self.interval)} {_paren(self.sub)}"


@dataclass(frozen=True)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} U{_itv(self.interval)} {self.right})"


def _itv(i: Interval) -> str:
    return "" if i.trivial else str(i)


def _paren(f: Formula) -> str:
    return str(f) if isinstance(f, (Prop, Const, Not, And, Or)) else f"({f})"


TRUE_F = Const(True)
FALSE_F = Const(False)


def is_propositional(f: Formula) -> bool:
    if isinstance(f, (Prop, Const)):
        return True
    if isinstance(f, Not):
        return is_propositional(f.sub)
    if isinstance(f, (And, Or)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def props_of(f: Formula) -> set[str]:
    if isinstance(f, Prop):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Not, Finally, Globally)):
        return props_of(f.sub)
    return props_of(f.left) | props_of(f.right)


def eval_prop(f: Formula, labels: frozenset[str] | set[str]) -> bool:
    if isinstance(f, Prop):
        return f.name in labels
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not eval_prop(f.sub, labels)
    if isinstance(f, And):
        return eval_prop(f.left, labels) and eval_prop(f.right, labels)
    if isinstance(f, Or):
        return eval_prop(f.left, labels) or eval_prop(f.right, labels)
    raise UnsupportedFragment(f"{f} is not propositional")


def desugar(f: Formula) -> Formula:
    """Rewrite ``true U_I p`` into ``F_I p``; other untils are unsupported."""
    if isinstance(f, Until):
        if f.left == TRUE_F:
            return Finally(f.interval, desugar(f.right))
        raise UnsupportedFragment("until is only supported with a 'true' left operand")
    if isinstance(f, Not):
        return Not(desugar(f.sub))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, Finally):
        return Finally(f.interval, desugar(f.sub))
    if isinstance(f, Globally):
        return Globally(f.interval, desugar(f.sub))
    return f


# -- interval sets ---------------------------------------------------------

# A piece is (lo, lo_closed, hi, hi_closed).

class IntervalSet:
    __slots__ = ("pieces",)

    def __init__(self, pieces=()):
        self.pieces = _normalize(pieces)

    def contains(self, t) -> bool:
        for lo, lc, hi, hc in self.pieces:
            if (lo < t or (lc and lo == t)) and (t < hi or (hc and t == hi)):
                return True
        return False

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    def complement(self, horizon) -> "IntervalSet":
        out = []
        cur, cur_closed = Fraction(0), True
        for lo, lc, hi, hc in self.pieces:
            if lo > cur or (lo == cur and cur_closed and not lc):
                out.append((cur, cur_closed, lo, not lc))
            cur, cur_closed = hi, not hc
        if cur < horizon:
            out.append((cur, cur_closed, horizon, False))
        return IntervalSet(out)

    def intersect(self, other: "IntervalSet", horizon) -> "IntervalSet":
        return self.complement(horizon).union(other.complement(horizon)).complement(horizon)

    def clip(self, horizon) -> "IntervalSet":
        out = []
        for lo, lc, hi, hc in self.pieces:
            if lo < 0:
                lo, lc = Fraction(0), True
            if hi > horizon or (hi == horizon and hc):
                hi, hc = horizon, False
            out.append((lo, lc, hi, hc))
        return IntervalSet(out)

    def __repr__(self):
        return " u ".join(f"{'[' if lc else '('}{lo},{hi}{']' if hc else ')'}"
                          for lo, lc, hi, hc in self.pieces) or "{}"


def _nonempty(p) -> bool:
    lo, lc, hi, hc = p
    return lo < hi or (lo == hi and lc and hc)


def _normalize(pieces):
    ps = sorted((p for p in pieces if _nonempty(p)), key=lambda p: (p[0], not p[1]))
    out: list = []
    for lo, lc, hi, hc in ps:
        if out:
            plo, plc, phi, phc = out[-1]
            if lo < phi or (lo == phi and (phc or lc)):
                if hi > phi or (hi == phi and hc):
                    out[-1] = (plo, plc, hi, hc)
                elif hi == phi:
                    out[-1] = (plo, plc, phi, phc or hc)
                continue
        out.append((lo, lc, hi, hc))
    return tuple(out)


def _shift_back(s: IntervalSet, itv: Interval) -> IntervalSet:
    """Times ``t`` with some ``t' in s`` and ``t' - t in itv``, ``t' > t``."""
    a, a_open = itv.low, itv.low_open
    if a == 0:
        a_open = True  # the witness lies strictly in the future
    b, b_open = itv.high, itv.high_open
    out = []
    for lo, lc, hi, hc in s.pieces:
        new_lo = lo - b if b != INF else -INF
        new_lc = lc and not b_open and b != INF
        new_hi = hi - a
        new_hc = hc and not a_open
        out.append((new_lo, new_lc, new_hi, new_hc))
    return IntervalSet(out)


# -- evaluation ------------------------------------------------------------

def _signals(network: Network, run: LassoRun, horizon):
    from .runs import segments
    return list(segments(network, run, Fraction(horizon)))


class _Evaluator:
    def __init__(self, network: Network, run: LassoRun):
        if run.states is None:
            raise ModelError("run must be validated first")
        self.network = network
        self.run = run
        self.settle = run.time_of(run.loop_start)
        self.period = run.period if run.period > 0 else Fraction(1)
        self._segs: list = []
        self._seg_horizon = Fraction(-1)

    def segs(self, horizon):
        if horizon > self._seg_horizon:
            self._segs = _signals(self.network, self.run, horizon)
            self._seg_horizon = horizon
        return self._segs

    def eval(self, f: Formula, h) -> IntervalSet:
        """Satisfaction set of ``f``, exact on ``[0, h)``."""
        if is_propositional(f):
            return IntervalSet([(s, True, e, False) for s, e, labels in self.segs(h)
                                if eval_prop(f, labels)]).clip(h)
        if isinstance(f, Not):
            return self.eval(f.sub, h).complement(h)
        if isinstance(f, And):
            return self.eval(f.left, h).intersect(self.eval(f.right, h), h)
        if isinstance(f, Or):
            return self.eval(f.left, h).union(self.eval(f.right, h)).clip(h)
        if isinstance(f, Globally):
            return self.eval(Not(Finally(f.interval, Not(f.sub))), h)
        if isinstance(f, Finally):
            itv = f.interval
            if itv.bounded:
                inner = Fraction(h) + Fraction(itv.high) + 1
            else:
                inner = max(Fraction(h) + itv.low, self.settle) + self.period + 1
            sub = self.eval(f.sub, inner)
            return _shift_back(sub, itv).clip(h)
        raise UnsupportedFragment(f"cannot evaluate {f}")


def satisfaction_set(network: Network, run: LassoRun, formula: Formula, horizon) -> IntervalSet:
    return _Evaluator(network, run).eval(desugar(formula), Fraction(horizon))


def _visits(network: Network, run: LassoRun, itv: Interval):
    """Labels of the states whose closed dwell interval meets ``itv``."""
    p, n = run.length, run.loop_start
    steps, states = run.steps, run.states
    t, j = Fraction(0), 0
    last = None  # index after which one more loop unfolding suffices
    while True:
        k = j if j < p else n + (j - n) % (p - n)
        end = t + steps[k].delay
        early = end < itv.low or (end == itv.low and itv.low_open)
        if itv.bounded and (t > itv.high or (t == itv.high and itv.high_open)):
            return
        if not early:
            yield network.labels(states[k].locations)
            if last is None and not itv.bounded:
                last = max(j, n) + (p - n)
        if last is None and run.period == 0 and j >= p:
            last = j + (p - n)  # zeno loop: time never reaches the interval
        t, j = end, j + 1
        if last is not None and j > last:
            return


def _eval_states(network: Network, run: LassoRun, f: Formula) -> bool:
    if is_propositional(f):
        return eval_prop(f, network.labels(run.states[0].locations))
    if isinstance(f, Not):
        return not _eval_states(network, run, f.sub)
    if isinstance(f, And):
        return _eval_states(network, run, f.left) and _eval_states(network, run, f.right)
    if isinstance(f, Or):
        return _eval_states(network, run, f.left) or _eval_states(network, run, f.right)
    if isinstance(f, (Finally, Globally)) and is_propositional(f.sub):
        seen = (eval_prop(f.sub, labels) for labels in _visits(network, run, f.interval))
        return any(seen) if isinstance(f, Finally) else all(seen)
    raise UnsupportedFragment(f"state observation cannot evaluate {f}")


def evaluate_mitl_on_lasso(network: Network, run: LassoRun, formula: Formula,
                           observation: str = "states") -> bool:
    """Does ``run`` satisfy ``formula`` at time 0?

    With ``"states"`` every visited state counts, including those left
    without delay; with ``"signal"`` only positive-length dwelling does.
    """
    if observation == "states":
        if run.states is None:
            raise ModelError("run must be validated first")
        return _eval_states(network, run, desugar(formula))
    return satisfaction_set(network, run, formula, Fraction(1)).contains(Fraction(0))
