"""Problem data: parametrized multigerms, ideal generators, run options."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .series import MultiSeries, TruncSeries, as_orders

def _clean1(terms: Mapping[int, object]) -> dict[int, Fraction]:
    return {int(e): Fraction(c) for e, c in sorted(terms.items()) if Fraction(c) != 0}


def _cleann(terms: Mapping[tuple, object]) -> dict[tuple[int, ...], Fraction]:
    return {tuple(e): Fraction(c) for e, c in sorted(terms.items()) if Fraction(c) != 0}


@dataclass(frozen=True)
class Branch:
    name: str
    param: str
    coords: tuple[dict[int, Fraction], ...]

    def order(self, j: int) -> Optional[int]:
        """Exact order of coordinate j along this branch; None for the zero polynomial."""
        terms = self.coords[j]
        return min(terms) if terms else None

    def degree(self) -> int:
        return max((max(c) for c in self.coords if c), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, Branch)
            and self.name == other.name
            and self.param == other.param
            and [dict(c) for c in self.coords] == [dict(c) for c in other.coords]
        )

    def __hash__(self):
        return hash((self.name, self.param))


@dataclass(frozen=True)
class Parametrization:
    """r branches, each n exact polynomials with zero constant term."""

    n: int
    branches: tuple[Branch, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("ambient dimension n must be >= 2")
        if not self.branches:
            raise ValueError("at least one branch is required")
        for b in self.branches:
            if len(b.coords) != self.n:
                raise ValueError(f"branch {b.name} has {len(b.coords)} coordinates, expected {self.n}")
            for terms in b.coords:
                if terms.get(0, 0) != 0:
                    raise ValueError(f"branch {b.name}: nonzero constant term")
                if any(e < 0 for e in terms):
                    raise ValueError(f"branch {b.name}: negative exponent")

    @classmethod
    def from_terms(cls, branches: Sequence[Sequence[Mapping[int, object]]], names=None, params=None):
        """Build from nested ``{exponent: coefficient}`` maps, e.g. ``[[{2: 1}, {3: 1}]]`` for the cusp."""
        branches = list(branches)
        n = len(branches[0])
        names = names or [f"b{i + 1}" for i in range(len(branches))]
        params = params or ["t"] * len(branches)
        return cls(
            n,
            tuple(
                Branch(names[i], params[i], tuple(_clean1(c) for c in coords))
                for i, coords in enumerate(branches)
            ),
        )

    @classmethod
    def monomial(cls, *exponent_rows: Sequence[int]) -> "Parametrization":
        """Shorthand: ``monomial((3, 4, 5))`` is t -> (t^3, t^4, t^5); 0 marks a zero coordinate."""
        return cls.from_terms([[{a: 1} if a else {} for a in row] for row in exponent_rows])

    @property
    def r(self) -> int:
        return len(self.branches)

    def series(self, i: int, j: int, trunc: int) -> TruncSeries:
        return TruncSeries.from_terms(self.branches[i].coords[j], trunc)

    def generators(self, trunc) -> list[MultiSeries]:
        """The images of x1..xn in the normalization, truncated per branch."""
        orders = as_orders(trunc, self.r)
        return [
            MultiSeries(tuple(self.series(i, j, orders[i]) for i in range(self.r)))
            for j in range(self.n)
        ]

    def velocity(self, trunc) -> list[MultiSeries]:
        """Branchwise derivatives of the coordinates, exact up to the requested truncation."""
        orders = as_orders(trunc, self.r)
        out = []
        for j in range(self.n):
            comps = []
            for i, b in enumerate(self.branches):
                d = {e - 1: e * c for e, c in b.coords[j].items()}
                comps.append(TruncSeries.from_terms(d, orders[i]))
            out.append(MultiSeries(tuple(comps)))
        return out

    def eval_monomial(self, branch: int, alpha: Sequence[int], trunc: int) -> TruncSeries:
        if len(alpha) != self.n:
            raise ValueError("exponent vector length must equal n")
        out = TruncSeries.one(trunc)
        for j, a in enumerate(alpha):
            if a:
                out = out * self.series(branch, j, trunc) ** a
        return out

    def branch_orders(self, i: int) -> list[Optional[int]]:
        return [self.branches[i].order(j) for j in range(self.n)]

    def branch_multiplicity(self, i: int) -> Optional[int]:
        orders = [o for o in self.branch_orders(i) if o is not None]
        return min(orders) if orders else None

    def single_branch(self, i: int) -> "Parametrization":
        return Parametrization(self.n, (self.branches[i],))

    def max_degree(self) -> int:
        return max(b.degree() for b in self.branches)

    def is_monomial(self) -> bool:
        return all(len(c) <= 1 for b in self.branches for c in b.coords)

    def has_monomial_weights(self) -> bool:
        """True when the input is monomial and one weight vector on x makes every branch a C*-orbit.

        Branch i with exponents a_ij needs a rate rho_i with a_ij * rho_i = w_j for every
        nonzero coordinate; this is a sufficient witness of quasihomogeneity.
        """
        if not self.is_monomial():
            return False
        exps = [{j: next(iter(c)) for j, c in enumerate(b.coords) if c} for b in self.branches]
        weight: dict[int, Fraction] = {}
        rate: dict[int, Fraction] = {}
        for root in range(self.r):
            if root in rate:
                continue
            rate[root] = Fraction(1)
            queue = [("b", root)]
            while queue:
                kind, idx = queue.pop()
                if kind == "b":
                    for j, a in exps[idx].items():
                        w = a * rate[idx]
                        if j not in weight:
                            weight[j] = w
                            queue.append(("x", j))
                        elif weight[j] != w:
                            return False
                else:
                    for i in range(self.r):
                        a = exps[i].get(idx)
                        if a is None:
                            continue
                        rho = weight[idx] / a
                        if i not in rate:
                            rate[i] = rho
                            queue.append(("b", i))
                        elif rate[i] != rho:
                            return False
        return True

    def linear_change(self, matrix: Sequence[Sequence[object]]) -> "Parametrization":
        """Apply x -> A x with an invertible rational matrix A."""
        a = [[Fraction(v) for v in row] for row in matrix]
        new = []
        for b in self.branches:
            coords = []
            for row in a:
                terms: dict[int, Fraction] = {}
                for j, coef in enumerate(row):
                    for e, c in b.coords[j].items():
                        terms[e] = terms.get(e, Fraction(0)) + coef * c
                coords.append(_clean1(terms))
            new.append(Branch(b.name, b.param, tuple(coords)))
        return Parametrization(self.n, tuple(new))

    def rescale(self, lams: Sequence[object]) -> "Parametrization":
        """Reparametrize branch i by t_i -> lam_i * t_i."""
        new = []
        for b, lam in zip(self.branches, lams):
            lam = Fraction(lam)
            coords = tuple(_clean1({e: c * lam**e for e, c in terms.items()}) for terms in b.coords)
            new.append(Branch(b.name, b.param, coords))
        return Parametrization(self.n, tuple(new))


@dataclass(frozen=True)
class IdealSpec:
    """Polynomial generators f1..fk of the defining ideal, in x1..xn."""

    names: tuple[str, ...]
    generators: tuple[dict[tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("an ideal needs at least one generator")
        for name, g in zip(self.names, self.generators):
            if any(sum(e) == 0 for e in g):
                raise ValueError(f"generator {name}: nonzero constant term")

    @classmethod
    def from_terms(cls, generators: Sequence[Mapping[tuple, object]], names=None) -> "IdealSpec":
        names = names or [f"f{i + 1}" for i in range(len(generators))]
        return cls(tuple(names), tuple(_cleann(g) for g in generators))

    @property
    def k(self) -> int:
        return len(self.generators)

    def n_vars(self) -> Optional[int]:
        for g in self.generators:
            for e in g:
                return len(e)
        return None


def poly_derivative(f: Mapping[tuple, Fraction], j: int) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in f.items():
        if e[j]:
            e2 = e[:j] + (e[j] - 1,) + e[j + 1:]
            out[e2] = out.get(e2, Fraction(0)) + c * e[j]
    return {e: c for e, c in out.items() if c}


def poly_mul(f: Mapping[tuple, Fraction], g: Mapping[tuple, Fraction]) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in sorted(out.items()) if c}


def poly_degree(f: Mapping[tuple, Fraction]) -> int:
    return max((sum(e) for e in f), default=0)


def compose(f: Mapping[tuple, Fraction], gens: Sequence[MultiSeries]) -> MultiSeries:
    """Evaluate a polynomial in x1..xn at the multiseries (x_j -> gens[j])."""
    orders = gens[0].trunc_orders
    out = MultiSeries.constant(0, orders)
    cache: dict[tuple[int, int], MultiSeries] = {}

    def power(j: int, a: int) -> MultiSeries:
        key = (j, a)
        if key not in cache:
            cache[key] = MultiSeries.constant(1, orders) if a == 0 else power(j, a - 1) * gens[j]
        return cache[key]

    for e, c in f.items():
        term = MultiSeries.constant(c, orders)
        for j, a in enumerate(e):
            if a:
                term = term * power(j, a)
        out = out + term
    return out


@dataclass
class Options:
    """Run options; ``trunc_start=None`` selects max(8, 4*mt)."""

    trunc_start: Optional[int] = None
    trunc_max: int = 512
    quasihomogeneous: Optional[bool] = None
    output_format: str = "table"

    def __post_init__(self):
        if self.trunc_start is not None and not 4 <= self.trunc_start <= self.trunc_max:
            raise ValueError("truncation options must satisfy 4 <= start <= max")
        if self.trunc_max < 4:
            raise ValueError("truncation ceiling must be >= 4")
        if self.output_format not in ("table", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass
class ProblemInstance:
    phi: Parametrization
    ideal: Optional[IdealSpec] = None
    options: Options = field(default_factory=Options)

    def start_truncation(self) -> int:
        if self.options.trunc_start is not None:
            return self.options.trunc_start
        mt = sum(self.phi.branch_multiplicity(i) or 1 for i in range(self.phi.r))
        return min(max(8, 4 * mt), self.options.trunc_max)

    def quasihomogeneous(self) -> bool:
        if self.options.quasihomogeneous is not None:
            return self.options.quasihomogeneous
        return self.phi.has_monomial_weights()

