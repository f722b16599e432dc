"""Truncated power series with exact rational coefficients.

A ``TruncSeries`` of truncation order ``N`` knows the coefficients of
``t^0 .. t^(N-1)``; everything from ``t^N`` on is unknown (not zero).
Every operation returns the tightest truncation it can vouch for.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

Q = Fraction


class AtLeast(NamedTuple):
    """Order sentinel: every stored coefficient vanishes, so the order is >= bound."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


Order = Union[int, AtLeast]


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not exact; use Fraction or int")
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class TruncSeries:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            # a zero-length window is allowed: nothing is known
            return
        if not all(isinstance(c, Fraction) for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(_q(c) for c in self.coeffs))

    # construction -----------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], trunc_order: int) -> "TruncSeries":
        """Embed a finite polynomial ``{exponent: coefficient}`` at the given truncation."""
        out = [Q(0)] * trunc_order
        for e, c in terms.items():
            if e < 0:
                raise ValueError("negative exponent in power series")
            if e < trunc_order:
                out[e] += _q(c)
        return cls(tuple(out))

    @classmethod
    def zero(cls, trunc_order: int) -> "TruncSeries":
        return cls((Q(0),) * trunc_order)

    @classmethod
    def one(cls, trunc_order: int) -> "TruncSeries":
        return cls.constant(1, trunc_order)

    @classmethod
    def constant(cls, c, trunc_order: int) -> "TruncSeries":
        if trunc_order == 0:
            return cls(())
        return cls((_q(c),) + (Q(0),) * (trunc_order - 1))

    @classmethod
    def monomial(cls, exponent: int, trunc_order: int, coeff=1) -> "TruncSeries":
        return cls.from_terms({exponent: coeff}, trunc_order)

    # basic queries ----------------------------------------------------------

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs)

    def order(self) -> Order:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return AtLeast(self.trunc_order)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if not 0 <= k < self.trunc_order:
            raise IndexError(f"coefficient t^{k} is outside the truncation window")
        return self.coeffs[k]

    def truncate(self, n: int) -> "TruncSeries":
        if n > self.trunc_order:
            raise ValueError(f"cannot raise truncation {self.trunc_order} -> {n}")
        return TruncSeries(self.coeffs[:n])

    def terms(self) -> dict[int, Fraction]:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    # arithmetic -------------------------------------------------------------

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        n = min(self.trunc_order, other.trunc_order)
        a, b = self.coeffs, other.coeffs
        return TruncSeries(tuple(a[k] + b[k] for k in range(n)))

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        c = _q(c)
        return TruncSeries(tuple(c * x for x in self.coeffs))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        n = min(self.trunc_order, other.trunc_order)
        out = [Q(0)] * n
        a = [(i, c) for i, c in enumerate(self.coeffs[:n]) if c]
        b = [(j, c) for j, c in enumerate(other.coeffs[:n]) if c]
        for i, x in a:
            for j, y in b:
                if i + j >= n:
                    break
                out[i + j] += x * y
        return TruncSeries(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            raise ValueError("negative power")
        result = TruncSeries.one(self.trunc_order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> "TruncSeries":
        """Formal d/dt; the truncation order drops by one."""
        return TruncSeries(tuple(k * self.coeffs[k] for k in range(1, self.trunc_order)))

    def substitute_scaled(self, lam) -> "TruncSeries":
        """Return a(lam * t)."""
        lam = _q(lam)
        return TruncSeries(tuple(c * lam**k for k, c in enumerate(self.coeffs)))

    def __str__(self) -> str:
        parts = [f"{c}*t^{k}" for k, c in enumerate(self.coeffs) if c]
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.trunc_order})"


def add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a + b


def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def derivative(a: TruncSeries) -> TruncSeries:
    return a.derivative()


def order(a: TruncSeries) -> Order:
    return a.order()


@dataclass(frozen=True)
class MultiSeries:
    """One truncated series per branch; an element of the semi-local ring of the normalization."""

    components: tuple[TruncSeries, ...]

    @classmethod
    def constant(cls, c, trunc_orders: Sequence[int]) -> "MultiSeries":
        return cls(tuple(TruncSeries.constant(c, n) for n in trunc_orders))

    @property
    def branches(self) -> int:
        return len(self.components)

    @property
    def trunc_orders(self) -> tuple[int, ...]:
        return tuple(s.trunc_order for s in self.components)

    def value_vector(self) -> tuple[Order, ...]:
        return tuple(s.order() for s in self.components)

    def _check(self, other: "MultiSeries"):
        if other.branches != self.branches:
            raise ValueError("branch count mismatch")

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._check(other)
        return MultiSeries(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        self._check(other)
        return MultiSeries(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "MultiSeries":
        return MultiSeries(tuple(-a for a in self.components))

    def __mul__(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            self._check(other)
            return MultiSeries(tuple(a * b for a, b in zip(self.components, other.components)))
        return MultiSeries(tuple(a.scale(other) for a in self.components))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiSeries":
        return MultiSeries(tuple(a**k for a in self.components))

    def derivative(self) -> "MultiSeries":
        return MultiSeries(tuple(a.derivative() for a in self.components))

    def truncate(self, orders: Sequence[int]) -> "MultiSeries":
        return MultiSeries(tuple(a.truncate(n) for a, n in zip(self.components, orders)))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)


def as_orders(trunc: Union[int, Sequence[int]], r: int) -> tuple[int, ...]:
    """Normalise a uniform or per-branch truncation to a per-branch tuple."""
    if isinstance(trunc, int):
        return (trunc,) * r
    orders = tuple(int(n) for n in trunc)
    if len(orders) != r:
        raise ValueError(f"expected {r} truncation orders, got {len(orders)}")
    return orders


def product(series: Iterable[TruncSeries], trunc_order: int) -> TruncSeries:
    out = TruncSeries.one(trunc_order)
    for s in series:
        out = out * s
    return out
