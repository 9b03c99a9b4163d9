"""Difference bound matrices over integer constants.

A bound ``(c, <=)`` is stored as ``2c + 1`` and ``(c, <)`` as ``2c``; so the
natural integer order coincides with the order of bounds.  Index 0 is the
reference clock.  Entry ``(i, j)`` bounds ``x_i - x_j``.
"""

from __future__ import annotations

from fractions import Fraction

INF = 1 << 60
LE_ZERO = 1
LT_ZERO = 0


def bound(c: int, strict: bool = False) -> int:
    return (c << 1) | (0 if strict else 1)


def b_const(b: int) -> int:
    return b >> 1


def b_strict(b: int) -> bool:
    return not (b & 1)


def b_add(a: int, b: int) -> int:
    if a >= INF or b >= INF:
        return INF
    return (((a >> 1) + (b >> 1)) << 1) | (a & b & 1)


def b_negate(b: int) -> int:
    """Bound of the complement: ``not (x - y <= c)`` is ``y - x < -c``."""
    return ((-(b >> 1)) << 1) | (1 - (b & 1))


def b_str(b: int) -> str:
    if b >= INF:
        return "<inf"
    return f"{'<' if b_strict(b) else '<='}{b_const(b)}"


class DBM:
    __slots__ = ("n", "d")

    def __init__(self, n: int, d: list[int] | None = None):
        self.n = n  # dimension including the reference clock
        self.d = d if d is not None else [LE_ZERO] * (n * n)

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, clocks: int) -> "DBM":
        return cls(clocks + 1)

    @classmethod
    def universe(cls, clocks: int) -> "DBM":
        n = clocks + 1
        d = [INF] * (n * n)
        for i in range(n):
            d[i * n + i] = LE_ZERO
            d[i] = LE_ZERO  # 0 - x_i <= 0
        return cls(n, d)

    def copy(self) -> "DBM":
        return DBM(self.n, self.d[:])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.d[ij[0] * self.n + ij[1]]

    def key(self) -> tuple:
        return tuple(self.d)

    def __eq__(self, other) -> bool:
        return isinstance(other, DBM) and self.d == other.d

    def __hash__(self) -> int:
        return hash(self.key())

    # -- closure --------------------------------------------------------
    def close(self) -> "DBM":
        n, d = self.n, self.d
        inf = INF
        for k in range(n):
            kn = k * n
            row_k = [(j, v) for j, v in enumerate(d[kn:kn + n]) if v < inf and j != k]
            for i in range(n):
                i_n = i * n
                dik = d[i_n + k]
                if dik >= inf or i == k:
                    continue
                for j, dkj in row_k:
                    # inlined b_add of two finite bounds
                    s = dik + dkj - ((dik | dkj) & 1)
                    if s < d[i_n + j]:
                        d[i_n + j] = s
            if d[0] < LE_ZERO:
                d[0] = LT_ZERO - 2
                return self
        for i in range(n):
            if d[i * n + i] < LE_ZERO:
                d[0] = LT_ZERO - 2
                return self
        return self

    def is_empty(self) -> bool:
        return self.d[0] < LE_ZERO

    def _mark_empty(self) -> "DBM":
        self.d[0] = LT_ZERO - 2
        return self

    # -- operations (all in place, return self) -------------------------
    def up(self) -> "DBM":
        n = self.n
        for i in range(1, n):
            self.d[i * n] = INF
        return self

    def down(self) -> "DBM":
        n, d = self.n, self.d
        for j in range(1, n):
            d[j] = LE_ZERO
            for i in range(1, n):
                if d[i * n + j] < d[j]:
                    d[j] = d[i * n + j]
        return self

    def constrain(self, i: int, j: int, b: int) -> "DBM":
        """Intersect with ``x_i - x_j (b)``; keeps the matrix closed."""
        if self.is_empty():
            return self
        n, d = self.n, self.d
        if b >= d[i * n + j]:
            return self
        if b_add(d[j * n + i], b) < LE_ZERO:
            return self._mark_empty()
        d[i * n + j] = b
        row_j = [(q, v) for q, v in enumerate(d[j * n:j * n + n]) if v < INF]
        for p in range(n):
            dpi = d[p * n + i]
            if dpi >= INF:
                continue
            via = dpi + b - ((dpi | b) & 1)
            pn = p * n
            for q, djq in row_j:
                s = via + djq - ((via | djq) & 1)
                if s < d[pn + q]:
                    d[pn + q] = s
        for p in range(n):
            if d[p * n + p] < LE_ZERO:
                return self._mark_empty()
        return self

    def reset(self, x: int, value: int = 0) -> "DBM":
        if self.is_empty():
            return self
        n, d = self.n, self.d
        pos, neg = bound(value), bound(-value)
        for j in range(n):
            d[x * n + j] = b_add(pos, d[j])
            d[j * n + x] = b_add(d[j * n], neg)
        d[x * n + x] = LE_ZERO
        return self

    def free(self, x: int) -> "DBM":
        n, d = self.n, self.d
        for j in range(n):
            if j != x:
                d[x * n + j] = INF
                d[j * n + x] = d[j * n]
        return self

    def intersect(self, other: "DBM") -> "DBM":
        out = self.copy()
        changed = False
        for idx, b in enumerate(other.d):
            if b < out.d[idx]:
                out.d[idx] = b
                changed = True
        return out.close() if changed else out

    def includes(self, other: "DBM") -> bool:
        if other.is_empty():
            return True
        if self.is_empty():
            return False
        return all(a >= b for a, b in zip(self.d, other.d))

    def extrapolate(self, ceilings: list[int]) -> "DBM":
        """Classic max-constant extrapolation; ``ceilings[0]`` must be 0."""
        if self.is_empty():
            return self
        n, d = self.n, self.d
        changed = False
        for i in range(n):
            ki = bound(ceilings[i])
            for j in range(n):
                if i == j:
                    continue
                v = d[i * n + j]
                if v >= INF:
                    continue
                if v > ki:
                    d[i * n + j] = INF
                    changed = True
                elif v < bound(-ceilings[j], True):
                    d[i * n + j] = bound(-ceilings[j], True)
                    changed = True
        return self.close() if changed else self

    def subtract(self, other: "DBM") -> list["DBM"]:
        """``self \\ other`` as a list of pairwise disjoint closed DBMs."""
        if self.is_empty():
            return []
        if other.is_empty() or self.intersect(other).is_empty():
            return [self.copy()]
        out = []
        rest = self.copy()
        n = self.n
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                b = other.d[i * n + j]
                if b >= INF or b >= rest.d[i * n + j]:
                    continue
                piece = rest.copy().constrain(j, i, b_negate(b))
                if not piece.is_empty():
                    out.append(piece)
                rest.constrain(i, j, b)
                if rest.is_empty():
                    return out
        return out

    # -- points ---------------------------------------------------------
    def contains_point(self, vals: list[Fraction]) -> bool:
        """``vals[0]`` must be 0."""
        if self.is_empty():
            return False
        n = self.n
        for i in range(n):
            for j in range(n):
                b = self.d[i * n + j]
                if b >= INF:
                    continue
                diff = vals[i] - vals[j]
                c = b_const(b)
                if diff > c or (diff == c and b_strict(b)):
                    return False
        return True

    def __repr__(self) -> str:
        if self.is_empty():
            return "DBM(empty)"
        rows = []
        for i in range(self.n):
            rows.append(" ".join(f"{b_str(self[i, j]):>6}" for j in range(self.n)))
        return "DBM(\n  " + "\n  ".join(rows) + ")"
