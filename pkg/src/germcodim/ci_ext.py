"""Ideal-assisted dimensions for complete intersections and plane curves.

The user supplies generators f_1..f_k of the defining ideal.  They are
checked to vanish on the parametrization exactly; the shape must be a
complete intersection (k = n - 1), which covers plane curves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cotangent import Check, check
from .germ import IdealSpec, Parametrization, compose, poly_degree, poly_derivative
from .jetlin import JetBasis, JetSpace, multiply, rank, saturate_algebra
from .series import MultiSeries, as_orders
from .subalgebra import ConductorData, InvariantRecord, Undetermined, conductor_quotient, truncation_schedule

EXACT_DEGREE_LIMIT = 4096


class IdealMismatch(ValueError):
    pass


class UnsupportedIdealShape(ValueError):
    pass


def exact_truncation(phi: Parametrization, ideal: IdealSpec, fallback: int) -> int:
    """A truncation at which f∘φ is known completely, when that is affordable."""
    deg = max(poly_degree(f) for f in ideal.generators) * phi.max_degree() + 1
    return deg if deg <= EXACT_DEGREE_LIMIT else fallback


def verify_ideal(phi: Parametrization, ideal: IdealSpec, trunc: int = 512) -> bool:
    """Raise IdealMismatch unless every generator vanishes on φ; raise on unsupported shapes."""
    nv = ideal.n_vars()
    if nv is not None and nv != phi.n:
        raise IdealMismatch(f"ideal is written in {nv} variables, the germ lives in C^{phi.n}")
    n_ = exact_truncation(phi, ideal, trunc)
    gens = phi.generators(n_)
    for name, f in zip(ideal.names, ideal.generators):
        if not compose(f, gens).is_zero():
            raise IdealMismatch(f"generator {name} does not vanish on the parametrization")
    if ideal.k != phi.n - 1:
        raise UnsupportedIdealShape(
            f"{ideal.k} generators in C^{phi.n}: only complete intersections (k = n - 1) are supported"
        )
    return True


@dataclass
class JacobianAlongPhi:
    """entries[i][j] = (∂f_i/∂x_j)∘φ."""

    entries: list[list[MultiSeries]]

    @classmethod
    def build(cls, phi: Parametrization, ideal: IdealSpec, trunc) -> "JacobianAlongPhi":
        gens = phi.generators(trunc)
        entries = [[compose(poly_derivative(f, j), gens) for j in range(phi.n)] for f in ideal.generators]
        jac = cls(entries)
        jac.check_chain_rule(phi, trunc)
        return jac

    def check_chain_rule(self, phi: Parametrization, trunc) -> None:
        vel = phi.velocity(trunc)
        for i, row in enumerate(self.entries):
            total = MultiSeries.constant(0, vel[0].trunc_orders)
            for j, a in enumerate(row):
                total = total + a * vel[j]
            if not total.is_zero():
                raise IdealMismatch(f"chain rule fails for generator {i + 1}")

    @property
    def k(self) -> int:
        return len(self.entries)


def tjurina_ci(phi: Parametrization, ideal: IdealSpec, start: int = 16, ceiling: int = 512) -> tuple[int, int]:
    """τ = dim O_X^k / J·O_X^n, certified by a full coefficient window inside the Jacobian image.

    Returns (τ, truncation used).  Raises Undetermined without a certificate.
    """
    k, n = ideal.k, phi.n
    mts = [phi.branch_multiplicity(i) for i in range(phi.r)]
    for trunc in truncation_schedule(start, ceiling):
        ring = saturate_algebra(phi.generators(trunc), trunc)
        jac = JacobianAlongPhi.build(phi, ideal, trunc)
        space = JetSpace(as_orders(trunc, phi.r), k)
        image = JetBasis(space)
        for row in ring.rows():
            g = ring.space.to_multiseries(row)
            for j in range(n):
                image.insert(space.from_slots([g * jac.entries[i][j] for i in range(k)]))
        windows = []
        for b in range(phi.r):
            m = trunc
            while m > 0 and all(image.contains(space.unit(b, s, m - 1)) for s in range(k)):
                m -= 1
            windows.append(m)
        if all(w + mt <= trunc for w, mt in zip(windows, mts)):
            return k * ring.dim - image.dim, trunc
    raise Undetermined(f"Jacobian image did not stabilize up to N_max={ceiling}", ceiling)


@dataclass
class QuotientModuleBasis:
    """O_X mod conductor, plus unit-vector representatives of a basis of O_Xbar/O_X."""

    base: JetBasis
    representatives: list[int]

    @classmethod
    def build(cls, phi: Parametrization, conductor: ConductorData) -> "QuotientModuleBasis":
        base = conductor_quotient(phi, conductor)
        pivots = set(base.pivots)
        reps = [i for i in range(base.space.dim) if i not in pivots]
        return cls(base, reps)


def dstar_cokernel_kernel(
    phi: Parametrization, ideal: IdealSpec, conductor: ConductorData
) -> tuple[int, int, int]:
    """d*: (O_Xbar/O_X)^n -> (O_Xbar/O_X)^k given by the Jacobian.

    Returns (dim ker, dim coker, rank); ker is T^1 of the normalization with
    sections, coker is T^2 of the same functor.
    """
    if ideal.k != phi.n - 1:
        raise UnsupportedIdealShape("d* needs a complete intersection")
    quot = QuotientModuleBasis.build(phi, conductor)
    base, space = quot.base, quot.base.space
    jac = JacobianAlongPhi.build(phi, ideal, conductor.per_branch)
    columns = []
    for j in range(phi.n):
        for rep in quot.representatives:
            e = {rep: 1}
            col = {}
            for i in range(ideal.k):
                for idx, v in base.reduce(multiply(space, e, jac.entries[i][j])).items():
                    col[(i, idx)] = v
            columns.append(col)
    delta = len(quot.representatives)
    rk = rank(columns)
    return phi.n * delta - rk, ideal.k * delta - rk, rk


def fitting_t2_over_x(phi: Parametrization, ideal: IdealSpec) -> int:
    """dim coker(O_Xbar^n -> O_Xbar^k) via maximal minors: Σ_i min_j ord_{t_i} of the minor without column j."""
    if ideal.k != phi.n - 1:
        raise UnsupportedIdealShape("needs a complete intersection")
    trunc = exact_truncation(phi, ideal, 512) * max(1, ideal.k)
    gens = phi.generators(trunc)
    d = [[compose(poly_derivative(f, j), gens) for j in range(phi.n)] for f in ideal.generators]
    total = 0
    for b in range(phi.r):
        best = None
        for skip in range(phi.n):
            cols = [j for j in range(phi.n) if j != skip]
            m = [[d[i][j].components[b] for j in cols] for i in range(ideal.k)]
            o = _det(m).order()
            if isinstance(o, int):
                best = o if best is None else min(best, o)
        if best is None:
            raise Undetermined("all maximal minors vanish to the working order", trunc)
        total += best
    return total


def _det(m):
    if len(m) == 1:
        return m[0][0]
    total = None
    for c in range(len(m)):
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * _det(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total


def dedekind_conductor(phi: Parametrization, ideal: IdealSpec) -> Optional[tuple[int, ...]]:
    """Plane curves: c_i = ord(f_y∘φ_i) - ord(dx_i/dt) (or the symmetric x version)."""
    if phi.n != 2 or ideal.k != 1:
        return None
    f = ideal.generators[0]
    trunc = exact_truncation(phi, ideal, 512)
    gens = phi.generators(trunc)
    fx, fy = (compose(poly_derivative(f, j), gens) for j in (0, 1))
    vel = phi.velocity(trunc)
    out = []
    for b in range(phi.r):
        ox, oy = vel[0].components[b].order(), vel[1].components[b].order()
        if isinstance(ox, int):
            out.append(fy.components[b].order() - ox)
        else:
            out.append(fx.components[b].order() - oy)
    return tuple(out)


@dataclass
class BraidReport:
    tjurina: int
    t1_xbar_minus_x: int
    t2_xbar_minus_x: int
    t1_xbar_to_x: int
    t2_xbar_to_x: int
    t2_xbar_over_x: int
    t2_xbar_over_x_fitting: int
    dstar_rank: int
    checks: list[Check] = field(default_factory=list)


def braid_consistency(phi: Parametrization, record: InvariantRecord, tau: int, dims: Sequence[int],
                      t2_fitting: int, ae_codim: int, dedekind: Optional[Sequence[int]] = None) -> BraidReport:
    """Cross-check the relative T^1/T^2 dimensions against τ, δ, m1, μ and mt."""
    n, r = phi.n, phi.r
    ker, coker, rk = dims
    delta, m_1 = record.get("delta"), record.get("m1")
    mt, mu = record.get("mult"), record.get("milnor")
    t1_to_x = ker - m_1
    t2_to_x = coker
    t2_over_x = tau + mt - r - (t1_to_x - t2_to_x)
    checks = [
        check("T1(Xbar->X) - T2(Xbar->X) = tau - 2 delta", t1_to_x - t2_to_x, tau - 2 * delta),
        check("T1(Xbar\\X) - T2(Xbar\\X) = delta", ker - coker, delta),
        check("T2(Xbar\\X) <= (n-1) delta", coker, (n - 1) * delta, "<="),
        check("T2(Xbar/X) from exact sequence = mu + mt - 1", t2_over_x, mu + mt - 1),
        check("T2(Xbar/X) from maximal minors = mu + mt - 1", t2_fitting, mu + mt - 1),
        check("tau = e (smoothable, unobstructed)", tau, record.get("deligne_e")),
        check("d_e = (n-3) delta + tau", ae_codim, (n - 3) * delta + tau),
    ]
    if n == 2:
        checks += [
            check("plane: d* vanishes on O_Xbar/O_X", rk, 0),
            check("plane: T1(Xbar\\X) = 2 delta", ker, 2 * delta),
            check("plane: T2(Xbar\\X) = delta", coker, delta),
            check("plane: T1(Xbar->X) = tau - delta", t1_to_x, tau - delta),
            check("plane: T2(Xbar->X) = delta", t2_to_x, delta),
            check("plane: d_e = tau - delta", ae_codim, tau - delta),
        ]
        if dedekind is not None and record.conductor is not None:
            checks.append(check("plane: conductor from f_y / x'", tuple(dedekind), tuple(record.conductor.per_branch)))
    elif n == 3:
        checks.append(check("space curve: d_e = tau", ae_codim, tau))
    elif n == 4 and record.get("gorenstein"):
        checks.append(check("Gorenstein 4-space curve: d_e = tau + delta", ae_codim, tau + delta))
    return BraidReport(tau, ker, coker, t1_to_x, t2_to_x, t2_over_x, t2_fitting, rk, checks)
