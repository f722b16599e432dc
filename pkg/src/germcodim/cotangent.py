"""Parametric-side cotangent dimensions: A_e- and L_e-codimension, m1, T^1 of the normalization.

The A_e-codimension is computed directly as the codimension of
tφ(θ_S) + ωφ(θ_n) in θ(φ) = ⊕_j O_Xbar ∂/∂x_j, on a jet window that
contains the conductor, and is checked against n·δ − m1 where m1 comes
from an unrelated linear system (derivations of the normalization that
preserve O_X).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .germ import Parametrization
from .jetlin import JetBasis, JetSpace, multiply, saturate_algebra
from .series import as_orders
from .subalgebra import (
    CERTIFIED,
    ConductorData,
    InvariantRecord,
    conductor_quotient,
    multiplier_kernel_dim,
)


class FormulaMismatch(AssertionError):
    def __init__(self, name: str, left, right):
        super().__init__(f"{name}: {left} != {right}")
        self.name = name
        self.left = left
        self.right = right


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    left: Any = None
    right: Any = None
    relation: str = "="

    @property
    def detail(self) -> str:
        return f"{self.left} {self.relation} {self.right}"


def check(name: str, left, right, relation: str = "=") -> Check:
    ok = {"=": left == right, "<=": left <= right, "<": left < right, ">=": left >= right}[relation]
    return Check(name, ok, left, right, relation)


def oracle_window(phi: Parametrization, conductor: ConductorData) -> tuple[int, ...]:
    """W_i = c_i + max_j ord(dφ_i^(j)/dt) + 2; any larger window gives the same answer."""
    out = []
    for i, c in enumerate(conductor.per_branch):
        orders = [o - 1 for o in phi.branch_orders(i) if o is not None]
        out.append(c + max(orders) + 2)
    return tuple(out)


@dataclass
class TangentSpaceJets:
    ambient: JetSpace
    t_image: JetBasis
    w_image: JetBasis
    phidot: list
    ring: JetBasis  # O_X mod t^W, one slot

    def combined(self) -> JetBasis:
        basis = self.w_image.copy()
        for row in self.t_image.rows():
            basis.insert(row)
        return basis


def tangent_space_jets(phi: Parametrization, window) -> TangentSpaceJets:
    window = as_orders(window, phi.r)
    space = JetSpace(window, phi.n)
    ring = saturate_algebra(phi.generators(window), window)
    w_image = JetBasis(space)
    for row in ring.rows():
        f = ring.space.to_multiseries(row)
        for j in range(phi.n):
            w_image.insert(space.from_multiseries(f, j))
    phidot = phi.velocity(window)
    t_image = JetBasis(space)
    for b, w in enumerate(window):
        for k in range(w):
            # t_b^k e_b times the velocity vector, one slot per coordinate
            v = {}
            for j, g in enumerate(phidot):
                v.update(multiply(space, space.unit(b, 0, k), g, 0, j))
            t_image.insert(v)
    return TangentSpaceJets(space, t_image, w_image, phidot, ring)


def ae_codim_oracle(phi: Parametrization, conductor: ConductorData, window=None) -> int:
    window = oracle_window(phi, conductor) if window is None else window
    jets = tangent_space_jets(phi, window)
    return jets.ambient.dim - jets.combined().dim


def le_codim(phi: Parametrization, conductor: ConductorData, delta: Optional[int] = None, window=None) -> int:
    """Codimension of ωφ(θ_n) alone; equals n·δ, checked when δ is supplied."""
    window = oracle_window(phi, conductor) if window is None else window
    jets = tangent_space_jets(phi, window)
    value = jets.ambient.dim - jets.w_image.dim
    if delta is not None and value != phi.n * delta:
        raise FormulaMismatch("le_codim = n*delta", value, phi.n * delta)
    return value


def m1(phi: Parametrization, conductor: ConductorData) -> int:
    """dim T0_Xbar / T0_X: derivations a·d/dt with a·dφ^(j)/dt in O_X for all j, modulo the conductor."""
    base = conductor_quotient(phi, conductor)
    kernel = multiplier_kernel_dim(base, phi.velocity(conductor.per_branch))
    return conductor.degree - kernel


def t1_xbar_over_x_dim(phi: Parametrization) -> int:
    total = 0
    for i in range(phi.r):
        # the gcd of the velocity components has order min_j ord - 1
        orders = [o for o in phi.branch_orders(i) if o is not None]
        total += min(orders) - 1
    return total


@dataclass
class CotangentDims:
    ae_codim_oracle: int
    ae_codim_formula: int
    le_codim: int
    m1: int
    t1_par: int
    t1_xbar_minus_y: int
    t1_xbar_over_x: int
    base_dim_report: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ae_codim(self) -> int:
        return self.ae_codim_oracle


def inequality_chain(n, r, delta, mt, c, mu, de, t=None) -> tuple[list, list[Check]]:
    """The lower and upper bounds around d_e for a singular germ."""
    lower0 = (n - 2) * delta
    lower2 = n * delta - c + mt - r
    upper1 = (n - 1) * delta + mu - c
    upper2 = n * delta - r
    upper3 = n * delta
    checks = []
    terms: list = [lower0]
    if t is not None:
        lower1 = (n - 2) * delta + t - 1 + mt - r
        terms.append(lower1)
        checks.append(check("chain: (n-2)delta <= (n-2)delta + t - 1 + mt - r", lower0, lower1, "<="))
        checks.append(check("chain: (n-2)delta + t - 1 + mt - r <= n delta - c + mt - r", lower1, lower2, "<="))
    else:
        checks.append(check("chain: (n-2)delta <= n delta - c + mt - r", lower0, lower2, "<="))
    terms += [lower2, de, upper1, upper2, upper3]
    checks += [
        check("chain: n delta - c + mt - r <= d_e", lower2, de, "<="),
        check("chain: d_e <= (n-1)delta + mu - c", de, upper1, "<="),
        check("chain: (n-1)delta + mu - c <= n delta - r", upper1, upper2, "<="),
        check("chain: n delta - r < n delta", upper2, upper3, "<"),
    ]
    return terms, checks


def assemble_cotangent(phi: Parametrization, record: InvariantRecord, strict: bool = True) -> CotangentDims:
    """Fill every parametric-side dimension and verify the closed formulas against the oracle."""
    if not record.certified("delta"):
        raise ValueError("assemble_cotangent needs certified delta and conductor")
    n, r = phi.n, phi.r
    delta = record.get("delta")
    conductor = record.conductor
    jets = tangent_space_jets(phi, oracle_window(phi, conductor))
    oracle = jets.ambient.dim - jets.combined().dim
    left = jets.ambient.dim - jets.w_image.dim
    m_1 = record.get("m1")
    if m_1 is None:
        m_1 = m1(phi, conductor)
        record.set_m1(m_1, CERTIFIED, "kernel of derivation conditions mod conductor")
    e = record.get("deligne_e")
    formula = n * delta - m_1
    dims = CotangentDims(
        ae_codim_oracle=oracle,
        ae_codim_formula=formula,
        le_codim=left,
        m1=m_1,
        t1_par=oracle,
        t1_xbar_minus_y=n * delta,
        t1_xbar_over_x=t1_xbar_over_x_dim(phi),
        base_dim_report=formula,
    )
    mt = record.get("mult")
    checks = [
        check("d_e oracle = n delta - m1", oracle, formula),
        check("d_e oracle = (n-3) delta + e", oracle, (n - 3) * delta + e),
        check("le_codim = n delta", left, n * delta),
        check("t1_xbar_over_x = mt - r", dims.t1_xbar_over_x, mt - r),
    ]
    if delta > 0:
        _, chain = inequality_chain(
            n, r, delta, mt, record.get("conductor_degree"), record.get("milnor"),
            oracle, record.get("cm_type"),
        )
        checks += chain
    dims.checks = checks
    if strict:
        for chk in checks:
            if not chk.passed:
                raise FormulaMismatch(chk.name, chk.left, chk.right)
    return dims

