"""Invariants of the local ring O_X inside its normalization.

O_X is computed as the span of all monomials in the coordinate series, mod
t^N branchwise.  Answers are *certified* only once the conductor window is
seen inside that span with room for one multiplicity step beyond it: then
⊕ t_i^{c_i} C{t_i} ⊆ O_X holds exactly (Nakayama over O_X), and δ, the
conductor and everything derived from them are exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Iterator, Optional, Sequence

from .germ import Parametrization
from .jetlin import JetBasis, multiply, rank, saturate_algebra
from .series import MultiSeries

CERTIFIED = "certified"
STABILIZED = "stabilized"
UNDETERMINED = "undetermined"
NOT_APPLICABLE = "not-applicable"


class Undetermined(RuntimeError):
    """A truncated computation found no certificate below the ceiling."""

    def __init__(self, message: str, ceiling: int):
        super().__init__(message)
        self.ceiling = ceiling


def truncation_schedule(start: int, ceiling: int) -> Iterator[int]:
    n = min(start, ceiling)
    while True:
        yield n
        if n >= ceiling:
            return
        n = min(2 * n, ceiling)


# finiteness and primitivity -------------------------------------------------


@dataclass(frozen=True)
class FiniteCheck:
    finite: bool
    branch: Optional[int] = None
    reason: str = ""


def check_finite(phi: Parametrization) -> FiniteCheck:
    for i, b in enumerate(phi.branches):
        if all(not c for c in b.coords):
            return FiniteCheck(False, i, f"constant branch {b.name}")
    return FiniteCheck(True)


@dataclass(frozen=True)
class ValueSemigroup:
    branch: int
    elements: tuple[int, ...]  # realized orders below the conductor
    conductor: int
    gcd: int

    @property
    def gaps(self) -> tuple[int, ...]:
        have = set(self.elements)
        return tuple(g for g in range(self.conductor) if g not in have)

    def __contains__(self, v: int) -> bool:
        return v >= self.conductor or v in self.elements


def _orders_below(basis: JetBasis) -> list[int]:
    # single branch, single slot: pivot index is the order
    return basis.pivots


def _gcd_of(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def primitivity_degree(phi: Parametrization, branch: int, trunc: int) -> int:
    """gcd of the orders realized by the branch subalgebra below t^trunc.

    Over-estimates the true degree until the truncation is large enough; a
    value of 1 is final.
    """
    single = phi.single_branch(branch)
    basis = saturate_algebra(single.generators(trunc), trunc)
    return _gcd_of(_orders_below(basis))


def _conductor_exponents(basis: JetBasis) -> tuple[int, ...]:
    space = basis.space
    out = []
    for b, w in enumerate(space.windows):
        m = w
        while m > 0 and basis.contains(space.unit(b, 0, m - 1)):
            m -= 1
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class BranchAnalysis:
    branch: int
    degree: int  # primitivity degree k
    semigroup: Optional[ValueSemigroup]
    status: str
    trunc: int


def analyse_branch(phi: Parametrization, branch: int, start: int = 16, ceiling: int = 512) -> BranchAnalysis:
    """Primitivity degree and value semigroup of one branch, doubling the truncation."""
    single = phi.single_branch(branch)
    mt = single.branch_multiplicity(0)
    if mt is None:
        raise ValueError("constant branch has no semigroup")
    k, n = 0, start
    for n in truncation_schedule(start, ceiling):
        basis = saturate_algebra(single.generators(n), n)
        orders = _orders_below(basis)
        k = _gcd_of(orders)
        if k != 1:
            continue
        (c,) = _conductor_exponents(basis)
        if c + mt <= n:
            sg = ValueSemigroup(branch, tuple(o for o in orders if o < c), c, 1)
            return BranchAnalysis(branch, 1, sg, CERTIFIED, n)
    if k > 1:
        return BranchAnalysis(branch, k, None, STABILIZED, n)
    return BranchAnalysis(branch, 1, None, UNDETERMINED, n)


# delta and conductor ----------------------------------------------------------


@dataclass(frozen=True)
class ConductorData:
    per_branch: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.per_branch)


@dataclass(frozen=True)
class DeltaResult:
    delta: int
    conductor: ConductorData
    trunc: int
    status: str


def delta_and_conductor(phi: Parametrization, start: int = 8, ceiling: int = 512) -> DeltaResult:
    """δ = dim O_Xbar/O_X and the conductor exponents, certified or raising Undetermined."""
    mts = [phi.branch_multiplicity(i) for i in range(phi.r)]
    if any(m is None for m in mts):
        raise ValueError("parametrization is not finite")
    for n in truncation_schedule(start, ceiling):
        basis = saturate_algebra(phi.generators(n), n)
        c = _conductor_exponents(basis)
        if all(ci + m <= n for ci, m in zip(c, mts)):
            delta = phi.r * n - basis.dim
            return DeltaResult(delta, ConductorData(c), n, CERTIFIED)
    raise Undetermined(f"no conductor found up to N_max={ceiling}", ceiling)


def multiplicity(phi: Parametrization) -> tuple[int, tuple[int, ...]]:
    per = tuple(phi.branch_multiplicity(i) for i in range(phi.r))
    if any(m is None for m in per):
        raise ValueError("parametrization is not finite")
    return sum(per), per


def gorenstein_test(delta: int, conductor_degree: int) -> bool:
    return conductor_degree == 2 * delta


# linear conditions on multipliers modulo the conductor --------------------------


def conductor_quotient(phi: Parametrization, conductor: ConductorData) -> JetBasis:
    """Echelon basis of O_X / conductor inside ⊕ C[t_i]/t_i^{c_i}."""
    return saturate_algebra(phi.generators(conductor.per_branch), conductor.per_branch)


def multiplier_kernel_dim(base: JetBasis, multipliers: Sequence[MultiSeries]) -> int:
    """dim { h in ⊕ C[t_i]/t^{c_i} : h * g in span(base) for every multiplier g }."""
    space = base.space
    images = []
    gs = [g.truncate(space.windows) for g in multipliers]
    for b, w in enumerate(space.windows):
        for e in range(w):
            h = space.unit(b, 0, e)
            img: dict[Any, Any] = {}
            for j, g in enumerate(gs):
                for k, v in base.reduce(multiply(space, h, g)).items():
                    img[(j, k)] = v
            images.append(img)
    return len(images) - rank(images)


def cm_type(phi: Parametrization, delta: int, conductor: ConductorData) -> Optional[int]:
    """Cohen-Macaulay type dim (O_X : m)/O_X; None for a smooth germ.

    For singular O_X the colon (O_X : m) equals (m : m), which lies in the
    normalization and contains the conductor, so the computation stays in
    ⊕ C[t_i]/t^{c_i}.
    """
    if delta == 0:
        return None
    base = conductor_quotient(phi, conductor)
    return multiplier_kernel_dim(base, phi.generators(conductor.per_branch)) - base.dim


# the record --------------------------------------------------------------------


@dataclass
class InvariantRecord:
    n: int
    r: int
    values: dict[str, Any] = field(default_factory=dict)
    status: dict[str, str] = field(default_factory=dict)
    method: dict[str, str] = field(default_factory=dict)
    semigroups: tuple[Optional[ValueSemigroup], ...] = ()
    conductor: Optional[ConductorData] = None
    finite: bool = True
    reason: str = ""

    def set(self, key: str, value: Any, status: str = CERTIFIED, method: str = "") -> None:
        self.values[key] = value
        self.status[key] = status
        self.method[key] = method

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def certified(self, *keys: str) -> bool:
        return all(self.status.get(k) == CERTIFIED for k in keys)

    def set_delta(self, delta: int, conductor: ConductorData, status: str, method: str) -> None:
        self.conductor = conductor
        self.set("delta", delta, status, method)
        self.set("conductor_degree", conductor.degree, status, method)
        self.set("conductor", list(conductor.per_branch), status, method)
        self.set("milnor", 2 * delta - self.r + 1, status, "2*delta - r + 1")

    def set_m1(self, m1: int, status: str, method: str) -> None:
        self.set("m1", m1, status, method)
        delta = self.values["delta"]
        self.set("deligne_e", 3 * delta - m1, status, "3*delta - m1")
