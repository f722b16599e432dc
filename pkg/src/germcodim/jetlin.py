"""Exact linear algebra on finite jet spaces.

Coordinates are triples (branch, slot, exponent) laid out branch-major, then
slot, then exponent, so the first nonzero coordinate of a ring element on a
single branch is its order.  Vectors are sparse ``{index: Fraction}`` maps.
Bases are kept in reduced row echelon form with monic pivots.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .series import MultiSeries, TruncSeries, as_orders

Vector = dict  # {int: Fraction}


class CoordinateMismatch(ValueError):
    pass


class JetCoord(NamedTuple):
    branch: int
    slot: int
    exponent: int


@dataclass(frozen=True)
class JetSpace:
    """⊕_{branch, slot} C[t_i]/t_i^{windows[i]}."""

    windows: tuple[int, ...]
    slots: int = 1

    def __post_init__(self):
        object.__setattr__(self, "windows", tuple(int(w) for w in self.windows))
        offsets, pos = [], 0
        for w in self.windows:
            offsets.append(pos)
            pos += w * self.slots
        object.__setattr__(self, "_offsets", tuple(offsets))
        object.__setattr__(self, "_dim", pos)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def branches(self) -> int:
        return len(self.windows)

    def index(self, branch: int, slot: int, exponent: int) -> int:
        w = self.windows[branch]
        if not (0 <= slot < self.slots and 0 <= exponent < w):
            raise CoordinateMismatch(f"coordinate {(branch, slot, exponent)} outside the window")
        return self._offsets[branch] + slot * w + exponent

    def coord(self, index: int) -> JetCoord:
        if not 0 <= index < self._dim:
            raise CoordinateMismatch(f"index {index} outside the jet space")
        for b in reversed(range(len(self.windows))):
            if index >= self._offsets[b] and self.windows[b]:
                slot, e = divmod(index - self._offsets[b], self.windows[b])
                return JetCoord(b, slot, e)
        raise CoordinateMismatch(f"index {index} outside the jet space")

    def block(self, branch: int, slot: int = 0, low: int = 0, high: Optional[int] = None) -> range:
        w = self.windows[branch]
        high = w if high is None else min(high, w)
        start = self._offsets[branch] + slot * w
        return range(start + low, start + max(high, low))

    def unit(self, branch: int, slot: int, exponent: int) -> Vector:
        return {self.index(branch, slot, exponent): Fraction(1)}

    # conversions -------------------------------------------------------------

    def from_multiseries(self, f: MultiSeries, slot: int = 0) -> Vector:
        """Place a ring element in one slot, truncated to the window."""
        out: Vector = {}
        for b, s in enumerate(f.components):
            w = self.windows[b]
            if s.trunc_order < w:
                raise CoordinateMismatch(
                    f"series known to t^{s.trunc_order} cannot fill a window of {w} on branch {b}"
                )
            base = self._offsets[b] + slot * w
            for e in range(w):
                c = s.coeffs[e]
                if c:
                    out[base + e] = c
        return out

    def from_slots(self, slots: Sequence[MultiSeries]) -> Vector:
        if len(slots) != self.slots:
            raise CoordinateMismatch("slot count mismatch")
        out: Vector = {}
        for k, f in enumerate(slots):
            out.update(self.from_multiseries(f, k))
        return out

    def to_multiseries(self, v: Mapping[int, Fraction], slot: int = 0) -> MultiSeries:
        comps = []
        for b, w in enumerate(self.windows):
            base = self._offsets[b] + slot * w
            comps.append(TruncSeries(tuple(v.get(base + e, Fraction(0)) for e in range(w))))
        return MultiSeries(tuple(comps))


class Insertion(enum.Enum):
    EXTENDED = "extended"
    ALREADY_IN_SPAN = "already-in-span"


class JetBasis:
    """Echelon basis of a subspace of a ``JetSpace``; single writer."""

    def __init__(self, space: JetSpace):
        self.space = space
        self._rows: dict[int, Vector] = {}

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[Vector]:
        return [dict(self._rows[p]) for p in self.pivots]

    def _check(self, v: Mapping[int, Fraction]):
        d = self.space.dim
        for k in v:
            if not (isinstance(k, int) and 0 <= k < d):
                raise CoordinateMismatch(f"index {k!r} is not a coordinate of this jet space")

    def reduce(self, v: Mapping[int, Fraction]) -> Vector:
        """Residual of v modulo the span; supported on non-pivot coordinates."""
        self._check(v)
        out = {k: Fraction(c) for k, c in v.items() if c}
        rows = self._rows
        for p in sorted(k for k in out if k in rows):
            c = out.get(p)
            if not c:
                continue
            for k, a in rows[p].items():
                x = out.get(k, 0) - c * a
                if x:
                    out[k] = x
                else:
                    out.pop(k, None)
        return out

    def contains(self, v: Mapping[int, Fraction]) -> bool:
        return not self.reduce(v)

    def insert(self, v: Mapping[int, Fraction]) -> Insertion:
        r = self.reduce(v)
        if not r:
            return Insertion.ALREADY_IN_SPAN
        self._add_reduced(r)
        return Insertion.EXTENDED

    def _add_reduced(self, r: Vector) -> int:
        p = min(r)
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for q, row in self._rows.items():
            c = row.get(p)
            if c:
                for k, a in r.items():
                    x = row.get(k, 0) - c * a
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
        self._rows[p] = r
        return p

    def insert_reduced(self, v: Mapping[int, Fraction]) -> Optional[Vector]:
        """Insert and return the monic new row, or None when v was already in the span."""
        r = self.reduce(v)
        if not r:
            return None
        p = self._add_reduced(r)
        return dict(self._rows[p])

    def codim(self, ambient: Iterable[int]) -> int:
        amb = set(ambient)
        for row in self._rows.values():
            if not amb.issuperset(row):
                raise CoordinateMismatch("basis row supported outside the ambient block")
        return len(amb) - self.dim

    def copy(self) -> "JetBasis":
        other = JetBasis(self.space)
        other._rows = {p: dict(row) for p, row in self._rows.items()}
        return other


def insert(basis: JetBasis, v: Mapping[int, Fraction]) -> Insertion:
    return basis.insert(v)


def contains(basis: JetBasis, v: Mapping[int, Fraction]) -> bool:
    return basis.contains(v)


def codim(basis: JetBasis, ambient: Iterable[int]) -> int:
    return basis.codim(ambient)


def span_of(space: JetSpace, vectors: Iterable[Mapping[int, Fraction]]) -> JetBasis:
    basis = JetBasis(space)
    for v in vectors:
        basis.insert(v)
    return basis


def rank(vectors: Sequence[Mapping[int, Fraction]]) -> int:
    """Rank of sparse vectors by column-wise elimination, independent of JetBasis."""
    rows = [{k: Fraction(c) for k, c in v.items() if c} for v in vectors]
    cols = sorted({k for r in rows for k in r})
    rk = 0
    for col in cols:
        piv = next((i for i in range(rk, len(rows)) if rows[i].get(col)), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        prow = rows[rk]
        pc = prow[col]
        for i in range(rk + 1, len(rows)):
            c = rows[i].get(col)
            if c:
                f = c / pc
                row = rows[i]
                for k, a in prow.items():
                    x = row.get(k, 0) - f * a
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
        rk += 1
    return rk


class PreconditionError(ValueError):
    pass


def saturate_algebra(generators: Sequence[MultiSeries], trunc) -> JetBasis:
    """Echelon basis of the subalgebra generated by 1 and the generators, mod t^trunc branchwise.

    Worklist: every new basis direction is multiplied by each generator and
    reinserted, breadth first, until nothing extends the basis.
    """
    if not generators:
        raise PreconditionError("at least one generator is required")
    r = generators[0].branches
    orders = as_orders(trunc, r)
    space = JetSpace(orders, 1)
    gens = []
    for g in generators:
        g = g.truncate(orders)
        for s in g.components:
            if s.trunc_order and s.coeffs[0] != 0:
                raise PreconditionError("generator with a nonzero constant term")
        gens.append(_sparse_components(g))
    basis = JetBasis(space)
    one = space.from_multiseries(MultiSeries.constant(1, orders))
    queue = []
    row = basis.insert_reduced(one)
    if row is not None:
        queue.append(row)
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for g in gens:
            w = _mul_sparse(space, v, g)
            if w:
                new = basis.insert_reduced(w)
                if new is not None:
                    queue.append(new)
    return basis


def _sparse_components(f: MultiSeries) -> list[list[tuple[int, Fraction]]]:
    return [[(e, c) for e, c in enumerate(s.coeffs) if c] for s in f.components]


def _mul_sparse(space: JetSpace, v: Mapping[int, Fraction], g) -> Vector:
    """Multiply a one-slot jet vector by a ring element given branchwise as sparse terms."""
    out: Vector = {}
    for k, a in v.items():
        b, _, e = space.coord(k)
        w = space.windows[b]
        base = k - e
        for e2, c in g[b]:
            if e + e2 >= w:
                break
            idx = base + e + e2
            x = out.get(idx, 0) + a * c
            if x:
                out[idx] = x
            else:
                out.pop(idx, None)
    return out


def multiply(space: JetSpace, v: Mapping[int, Fraction], f: MultiSeries, slot_in: int = 0, slot_out: int = 0) -> Vector:
    """Product of the ring element stored in ``slot_in`` of v with f, placed in ``slot_out``."""
    f = f.truncate(space.windows) if any(s.trunc_order > w for s, w in zip(f.components, space.windows)) else f
    g = _sparse_components(f)
    out: Vector = {}
    for k, a in v.items():
        b, slot, e = space.coord(k)
        if slot != slot_in:
            continue
        w = space.windows[b]
        base = space.index(b, slot_out, 0) if w else 0
        for e2, c in g[b]:
            if e + e2 >= w:
                break
            idx = base + e + e2
            x = out.get(idx, 0) + a * c
            if x:
                out[idx] = x
            else:
                out.pop(idx, None)
    return out
