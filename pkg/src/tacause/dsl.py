"""Text formats for networks (``.rtn``), lasso runs (``.run``) and MITL formulas.

Model syntax::

    clock x1, x2;
    int id[0,2] = 0;            // optional bounded integer variables
    automaton A1 {
      init location init1 { label init1; }
      location crit1 { invariant x1 <= 3; label crit1; }
      edge init1 -> crit1 on beta do x1 := 0;
      edge crit1 -> init1 on beta when x1 == 3;
    }
    system A1;

Location names may be quoted (``location "init#1" {}``) so generated automata
round-trip.  Run syntax::

    prefix { 1.0 A1 beta; 1.0 A1 A2 sync; }
    loop   { 2.0 A1 alpha; }

A step is ``delay component [receiver] label``; components are given by name
or by 1-based index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .mitl import (FALSE_F, INF, TRUE_F, And, Finally, Formula, Globally,
                   Interval, Not, Or, Prop, Until, props_of)
from .model import (Atom, Constraint, Edge, IntVar, Label, LassoRun,
                    ModelError, Network, NetworkAction, Step, TimedAutomaton,
                    Update, VarAtom, fmt_rational)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class DslError(ModelError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(map(str, diagnostics)))


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|//[^\n]*|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<str>"[^"\n]*")
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>:=|->|&&|\|\||<=|>=|==|!=|[<>!?;,{}()\[\]:=\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslError([ParseDiagnostic(line, pos - line_start + 1,
                                            f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        if kind != "ws":
            toks.append(Tok(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


def parse_number(text: str) -> Fraction:
    return Fraction(text)


class _Parser:
    def __init__(self, text: str):
        if isinstance(text, bytes):
            text = text.decode("utf-8", errors="replace")
        self.toks = tokenize(text)
        self.i = 0
        self.diags: list[ParseDiagnostic] = []

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, tok: Tok | None = None):
        tok = tok or self.cur
        raise DslError(self.diags + [ParseDiagnostic(tok.line, tok.col, msg)])

    def error(self, msg: str, tok: Tok) -> None:
        self.diags.append(ParseDiagnostic(tok.line, tok.col, msg))

    def at(self, *texts: str) -> bool:
        return self.cur.kind in ("op", "id") and self.cur.text in texts

    def accept(self, text: str) -> Tok | None:
        if self.at(text):
            tok = self.cur
            self.i += 1
            return tok
        return None

    def expect(self, text: str) -> Tok:
        tok = self.accept(text)
        if tok is None:
            self.fail(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        return tok

    def ident(self, what: str = "identifier") -> Tok:
        if self.cur.kind != "id":
            self.fail(f"expected {what}, found {self.cur.text or 'end of input'!r}")
        tok = self.cur
        self.i += 1
        return tok

    def name(self, what: str = "name") -> tuple[str, Tok]:
        tok = self.cur
        if tok.kind == "str":
            self.i += 1
            return tok.text[1:-1], tok
        return self.ident(what).text, tok

    def number(self) -> Fraction:
        tok = self.cur
        if tok.kind != "num":
            self.fail(f"expected number, found {tok.text or 'end of input'!r}")
        self.i += 1
        return parse_number(tok.text)

    def integer(self) -> int:
        neg = self.accept("-") is not None
        value = self.number()
        if value.denominator != 1:
            self.fail("expected integer")
        return -int(value) if neg else int(value)


# -- models ----------------------------------------------------------------

class _ModelParser(_Parser):
    def parse(self) -> Network:
        self.clocks: dict[str, Tok] = {}
        self.ints: dict[str, IntVar] = {}
        automata: dict[str, TimedAutomaton] = {}
        while self.at("clock", "int"):
            if self.accept("clock"):
                while True:
                    tok = self.ident("clock name")
                    if tok.text in self.clocks or tok.text in self.ints:
                        self.error(f"duplicate declaration of {tok.text!r}", tok)
                    self.clocks[tok.text] = tok
                    if not self.accept(","):
                        break
                self.expect(";")
            else:
                self.expect("int")
                self._int_decl()
        if not self.at("automaton"):
            self.fail("expected 'automaton'")
        while self.at("automaton"):
            start = self.cur
            ta = self._automaton()
            if ta.name in automata:
                self.error(f"duplicate automaton {ta.name!r}", start)
            automata[ta.name] = ta
        self.expect("system")
        order = []
        while True:
            tok = self.ident("automaton name")
            if tok.text not in automata:
                self.error(f"unknown automaton {tok.text!r}", tok)
            elif tok.text in order:
                self.error(f"automaton {tok.text!r} listed twice", tok)
            else:
                order.append(tok.text)
            if not self.accept(","):
                break
        self.expect(";")
        if self.cur.kind != "eof":
            self.fail(f"unexpected {self.cur.text!r} after system declaration")
        comps = tuple(automata[n] for n in order)
        owner: dict[str, str] = {}
        for comp in comps:
            for p in sorted(comp.propositions()):
                if p in owner:
                    self.error(f"label {p!r} used by both {owner[p]} and {comp.name}",
                               self._label_toks.get((comp.name, p), self.cur))
                owner.setdefault(p, comp.name)
        if self.diags:
            raise DslError(self.diags)
        return Network(comps, frozenset(self.clocks), tuple(self.ints.values()))

    def _int_decl(self) -> None:
        tok = self.ident("variable name")
        low = high = None
        if self.accept("["):
            low = self.integer()
            self.expect(",")
            high = self.integer()
            self.expect("]")
        initial = 0
        if self.accept("="):
            initial = self.integer()
        self.expect(";")
        if tok.text in self.clocks or tok.text in self.ints:
            self.error(f"duplicate declaration of {tok.text!r}", tok)
        if low is not None and not low <= initial <= high:
            self.error(f"initial value of {tok.text!r} outside its range", tok)
        self.ints[tok.text] = IntVar(tok.text, initial, low, high)

    def _automaton(self) -> TimedAutomaton:
        self.expect("automaton")
        name = self.ident("automaton name").text
        self.expect("{")
        locs: list[str] = []
        initial = None
        invariants: dict[str, Constraint] = {}
        labels: dict[str, tuple[str, ...]] = {}
        self.used: set[str] = set()
        if not hasattr(self, "_label_toks"):
            self._label_toks: dict = {}
        while self.at("init", "location"):
            is_init = self.accept("init") is not None
            self.expect("location")
            loc, tok = self.name("location name")
            if loc in locs:
                self.error(f"duplicate location {loc!r}", tok)
            else:
                locs.append(loc)
            if is_init:
                if initial is not None:
                    self.error(f"second initial location {loc!r}", tok)
                initial = initial or loc
            self.expect("{")
            while not self.accept("}"):
                if self.accept("invariant"):
                    inv, vatoms = self._constraint()
                    if vatoms:
                        self.error("invariants may only constrain clocks", tok)
                    invariants[loc] = invariants.get(loc, Constraint()).conj(inv)
                    self.expect(";")
                elif self.accept("label"):
                    names = []
                    while True:
                        lt = self.ident("label")
                        names.append(lt.text)
                        self._label_toks.setdefault((name, lt.text), lt)
                        if not self.accept(","):
                            break
                    labels[loc] = labels.get(loc, ()) + tuple(names)
                    self.expect(";")
                else:
                    self.fail(f"expected 'invariant', 'label' or '}}', found {self.cur.text!r}")
        if not locs:
            self.fail("automaton needs at least one location")
        edges = []
        while self.at("edge"):
            edges.append(self._edge(set(locs)))
        self.expect("}")
        return TimedAutomaton(name, tuple(locs), initial or locs[0],
                              frozenset(self.used), tuple(edges), invariants, labels)

    def _edge(self, locs: set[str]) -> Edge:
        self.expect("edge")
        src, stok = self.name("source location")
        self.expect("->")
        dst, dtok = self.name("target location")
        for loc, tok in ((src, stok), (dst, dtok)):
            if loc not in locs:
                self.error(f"unknown location {loc!r}", tok)
        self.expect("on")
        lbl = self.ident("action label").text
        pol = ""
        if self.at("!", "?"):
            pol = self.cur.text
            self.i += 1
        guard, vguard = Constraint(), ()
        if self.accept("when"):
            guard, vguard = self._constraint()
        resets: dict[str, Fraction] = {}
        vupd: dict[str, int] = {}
        if self.accept("do"):
            while True:
                tok = self.ident("clock or variable")
                self.expect(":=")
                if tok.text in self.ints:
                    value = self.integer()
                    if tok.text in vupd:
                        self.error(f"{tok.text!r} assigned twice", tok)
                    vupd[tok.text] = value
                else:
                    self._clock(tok)
                    value = self.number()
                    if tok.text in resets:
                        self.error(f"{tok.text!r} assigned twice", tok)
                    resets[tok.text] = value
                if not self.accept(","):
                    break
        self.expect(";")
        return Edge(src if src in locs else next(iter(locs)), guard, Label(lbl, pol),
                    Update.of(resets), dst if dst in locs else next(iter(locs)),
                    vguard, tuple(sorted(vupd.items())))

    def _clock(self, tok: Tok) -> None:
        if tok.text not in self.clocks:
            self.error(f"unknown clock {tok.text!r}", tok)
        self.used.add(tok.text)

    def _constraint(self) -> tuple[Constraint, tuple[VarAtom, ...]]:
        if self.accept("true"):
            return Constraint(), ()
        atoms: list[Atom] = []
        vatoms: list[VarAtom] = []
        while True:
            tok = self.ident("clock or variable")
            if tok.text in self.ints:
                op = self._relation(var=True)
                vatoms.append(VarAtom(tok.text, op, self.integer()))
            else:
                self._clock(tok)
                right = None
                if self.accept("-"):
                    rt = self.ident("clock")
                    self._clock(rt)
                    right = rt.text
                op = self._relation(var=False)
                neg = self.accept("-") is not None
                bound = self.number()
                if neg and right is None:
                    self.error("clock bounds must be non-negative", tok)
                atoms.append(Atom(tok.text, op, -bound if neg else bound, right))
            if not self.accept("&&"):
                break
        return Constraint(tuple(atoms)), tuple(vatoms)

    def _relation(self, var: bool) -> str:
        ops = ("<", "<=", "==", ">=", ">") + (("!=",) if var else ())
        if self.cur.kind == "op" and self.cur.text in ops:
            op = self.cur.text
            self.i += 1
            return op
        self.fail(f"expected relation, found {self.cur.text!r}")


def parse_model(text: str) -> Network:
    """Parse a network; raises :class:`DslError` carrying the diagnostics."""
    return _ModelParser(text).parse()


def model_diagnostics(text: str) -> list[ParseDiagnostic]:
    try:
        parse_model(text)
    except DslError as exc:
        return exc.diagnostics
    except ModelError as exc:
        return [ParseDiagnostic(1, 1, str(exc))]
    return []


# -- runs ------------------------------------------------------------------

class _RunParser(_Parser):
    def __init__(self, text: str, network: Network | None):
        super().__init__(text)
        self.network = network

    def parse(self) -> LassoRun:
        prefix: tuple[Step, ...] = ()
        if self.at("prefix"):
            self.i += 1
            prefix = self._block()
        if not self.at("loop"):
            self.fail("expected 'loop' section (runs are infinite)")
        loop_tok = self.expect("loop")
        loop = self._block()
        if self.cur.kind != "eof":
            self.fail(f"unexpected {self.cur.text!r} after loop")
        if not loop:
            self.error("loop section must contain at least one step", loop_tok)
        if self.diags:
            raise DslError(self.diags)
        return LassoRun(prefix, loop)

    def _block(self) -> tuple[Step, ...]:
        self.expect("{")
        steps = []
        while not self.accept("}"):
            steps.append(self._step())
        return tuple(steps)

    def _step(self) -> Step:
        tok = self.cur
        neg = self.accept("-") is not None
        delay = self.number()
        if neg:
            self.error("negative delay", tok)
        self.accept(":")
        first = self._component()
        second = first
        names = []
        while self.cur.kind in ("id", "num") and not self.at(";", "->"):
            names.append(self.cur)
            self.i += 1
        if not names:
            self.fail("expected action label")
        if len(names) == 2:
            second = self._resolve(names[0])
        elif len(names) > 2:
            self.fail("too many names in step", names[2])
        label = names[-1].text
        target = None
        if self.accept("->"):
            self.expect("(")
            target = []
            while True:
                if self.accept("_"):
                    target.append(None)
                else:
                    target.append(self.name("location")[0])
                if not self.accept(","):
                    break
            self.expect(")")
            target = tuple(target)
        self.expect(";")
        return Step(-delay if neg else delay, NetworkAction(first, second, label), target)

    def _component(self) -> int:
        tok = self.cur
        if tok.kind not in ("id", "num"):
            self.fail("expected component")
        self.i += 1
        return self._resolve(tok)

    def _resolve(self, tok: Tok) -> int:
        if tok.kind == "num":
            return int(tok.text)
        if self.network is not None:
            try:
                return self.network.index_of(tok.text)
            except KeyError:
                pass
        m = re.fullmatch(r"A(\d+)", tok.text)
        if m:
            return int(m.group(1))
        self.fail(f"unknown component {tok.text!r}", tok)


def parse_run(text: str, network: Network | None = None) -> LassoRun:
    """Parse a run; component names are resolved against ``network``."""
    run = _RunParser(text, network).parse()
    if network is not None:
        for s in run.steps:
            for k in (s.action.first, s.action.second):
                if not 1 <= k <= network.size:
                    raise DslError([ParseDiagnostic(1, 1, f"component index {k} out of range")])
    return run


# -- formulas --------------------------------------------------------------

_KEYWORDS = {"G", "F", "U", "true", "false", "inf"}


class _FormulaParser(_Parser):
    def parse(self) -> Formula:
        f = self._implication()
        if self.cur.kind != "eof":
            self.fail(f"unexpected {self.cur.text!r}")
        return f

    def _implication(self) -> Formula:
        left = self._or()
        if self.accept("->"):
            return Or(Not(left), self._implication())
        return left

    def _or(self) -> Formula:
        f = self._and()
        while self.accept("||"):
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._until()
        while self.accept("&&"):
            f = And(f, self._until())
        return f

    def _until(self) -> Formula:
        f = self._unary()
        if self.accept("U"):
            itv = self._interval()
            return Until(itv, f, self._unary())
        return f

    def _unary(self) -> Formula:
        if self.accept("!"):
            return Not(self._unary())
        if self.at("G", "F"):
            op = self.cur.text
            self.i += 1
            itv = self._interval()
            sub = self._unary()
            return Globally(itv, sub) if op == "G" else Finally(itv, sub)
        if self.accept("("):
            f = self._implication()
            self.expect(")")
            return f
        if self.accept("true"):
            return TRUE_F
        if self.accept("false"):
            return FALSE_F
        tok = self.ident("proposition")
        if tok.text in _KEYWORDS:
            self.fail(f"unexpected keyword {tok.text!r}", tok)
        return Prop(tok.text)

    def _interval(self) -> Interval:
        if not (self.at("[") or (self.at("(") and self.peek().kind == "num")):
            return Interval()
        tok = self.cur
        low_open = self.cur.text == "("
        self.i += 1
        low = self.number()
        self.expect(",")
        if self.accept("inf"):
            high = INF
        else:
            high = self.number()
        if not self.at("]", ")"):
            self.fail("expected ']' or ')'")
        high_open = self.cur.text == ")"
        self.i += 1
        if high == INF and not high_open:
            self.fail("unbounded interval must be right-open", tok)
        if high == low:
            self.fail("singleton intervals are not allowed", tok)
        if high < low:
            self.fail("empty interval", tok)
        return Interval(low, high, low_open, high_open)


def parse_formula(text: str, network: Network | None = None) -> Formula:
    f = _FormulaParser(text).parse()
    if network is not None:
        unknown = sorted(props_of(f) - network.propositions())
        if unknown:
            raise DslError([ParseDiagnostic(1, 1, f"unknown proposition {p!r}")
                            for p in unknown])
    return f


# -- emitters --------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_RESERVED = {"clock", "int", "automaton", "init", "location", "invariant", "label",
             "edge", "on", "when", "do", "system", "true"}


def _q(name: str) -> str:
    return name if _IDENT.fullmatch(name) and name not in _RESERVED else f'"{name}"'


def emit_constraint(c: Constraint, vguard=()) -> str:
    parts = [str(a) for a in c.atoms] + [str(v) for v in vguard]
    return " && ".join(parts) if parts else "true"


def emit_automaton(ta: TimedAutomaton) -> str:
    lines = [f"automaton {ta.name} {{"]
    for q in ta.locations:
        body = []
        if not ta.invariant(q).is_true:
            body.append(f"invariant {ta.invariant(q)};")
        if ta.labels[q]:
            body.append(f"label {', '.join(sorted(ta.labels[q]))};")
        init = "init " if q == ta.initial else ""
        lines.append(f"  {init}location {_q(q)} {{ {' '.join(body)} }}".replace("{  }", "{}"))
    for e in ta.edges:
        s = f"  edge {_q(e.src)} -> {_q(e.dst)} on {e.label}"
        if e.guard.atoms or e.var_guard:
            s += f" when {emit_constraint(e.guard, e.var_guard)}"
        ups = [f"{x} := {fmt_rational(v)}" for x, v in e.update.assignments]
        ups += [f"{v} := {n}" for v, n in e.var_update]
        if ups:
            s += " do " + ", ".join(ups)
        lines.append(s + ";")
    lines.append("}")
    return "\n".join(lines)


def emit_model(obj: Network | TimedAutomaton) -> str:
    if isinstance(obj, TimedAutomaton):
        obj = Network((obj,), frozenset(obj.clocks))
    out = []
    clocks = sorted(obj.all_clocks())
    if clocks:
        out.append(f"clock {', '.join(clocks)};")
    for v in obj.variables:
        rng = f"[{v.low},{v.high}]" if v.low is not None else ""
        out.append(f"int {v.name}{rng} = {v.initial};")
    for comp in obj.components:
        out.append(emit_automaton(comp))
    out.append(f"system {', '.join(c.name for c in obj.components)};")
    return "\n".join(out) + "\n"


def _emit_step(s: Step, network: Network | None) -> str:
    def name(k: int) -> str:
        return network.component(k).name if network is not None else f"A{k}"
    a = s.action
    who = name(a.first) if a.internal else f"{name(a.first)} {name(a.second)}"
    return f"{fmt_rational(s.delay)} {who} {a.label};"


def emit_run(run: LassoRun, network: Network | None = None) -> str:
    pre = "\n".join(f"  {_emit_step(s, network)}" for s in run.prefix)
    loop = "\n".join(f"  {_emit_step(s, network)}" for s in run.loop)
    return f"prefix {{\n{pre}\n}}\nloop {{\n{loop}\n}}\n".replace("{\n\n}", "{ }")


def emit_formula(f: Formula) -> str:
    return str(f)
