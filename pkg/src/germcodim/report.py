"""The full pipeline from a parsed instance to a checked invariant report."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .ci_ext import (
    BraidReport,
    IdealMismatch,
    UnsupportedIdealShape,
    braid_consistency,
    dedekind_conductor,
    dstar_cokernel_kernel,
    fitting_t2_over_x,
    tjurina_ci,
    verify_ideal,
)
from .cotangent import Check, CotangentDims, assemble_cotangent, check, inequality_chain, m1
from .germ import ProblemInstance
from .subalgebra import (
    CERTIFIED,
    NOT_APPLICABLE,
    STABILIZED,
    UNDETERMINED,
    InvariantRecord,
    Undetermined,
    analyse_branch,
    check_finite,
    cm_type,
    delta_and_conductor,
    gorenstein_test,
    multiplicity,
)

SMOOTH = "smooth"
ORDINARY_NODE = "ordinary-node"
SINGULAR_FINITE = "singular-finite"
NOT_FINITE = "not-finitely-determined"
UNDETERMINED_CLASS = "undetermined"

EXIT_OK, EXIT_USAGE, EXIT_NOT_FINITE, EXIT_UNDETERMINED, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4

STAGES = ("check", "invariants", "codim", "verify")

# the stable keys, in output order; extra keys follow them
REPORT_KEYS = (
    "classification", "finiteness", "branches", "mult", "primitivity", "delta", "conductor",
    "conductor_degree", "milnor", "gorenstein", "cm_type", "m1", "deligne_e", "ae_codim",
    "le_codim", "t1_par_dim", "t1_xbar_over_x_dim", "inequality_chain", "tjurina",
)


@dataclass
class RunOutcome:
    classification: str
    record: InvariantRecord
    cotangent: Optional[CotangentDims] = None
    ci: Optional[BraidReport] = None
    diagnostics: list[str] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    exit_code: int = EXIT_OK

    @property
    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_document(self) -> dict[str, Any]:
        rec = self.record
        doc: dict[str, Any] = {}
        status = CERTIFIED
        if self.classification == UNDETERMINED_CLASS:
            status = UNDETERMINED
        elif self.classification == NOT_FINITE:
            status = rec.status.get("finiteness", CERTIFIED)
        doc["classification"] = {"value": self.classification, "status": status, "method": "invariants"}
        keys = list(REPORT_KEYS) + sorted(k for k in rec.values if k not in REPORT_KEYS)
        for key in keys:
            if key == "classification":
                continue
            if key in rec.values:
                doc[key] = {"value": rec.values[key], "status": rec.status[key], "method": rec.method[key]}
            elif key != "tjurina":
                doc[key] = {"value": None, "status": NOT_APPLICABLE, "method": "not computed"}
        doc["reason"] = rec.reason
        doc["semigroups"] = [
            None if sg is None else {"conductor": sg.conductor, "gaps": list(sg.gaps)} for sg in rec.semigroups
        ]
        doc["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]
        doc["diagnostics"] = list(self.diagnostics)
        doc["exit_code"] = self.exit_code
        return doc


def _classify(record: InvariantRecord) -> str:
    delta, r, mt = record.get("delta"), record.r, record.get("mult")
    if delta == 0 and r == 1:
        return SMOOTH
    if delta == 1 and r == 2 and mt == 2:
        return ORDINARY_NODE
    return SINGULAR_FINITE


def _reject(outcome: RunOutcome, classification: str, reason: str, code: int) -> RunOutcome:
    outcome.classification = classification
    outcome.record.reason = reason
    outcome.exit_code = code
    if classification == NOT_FINITE:
        outcome.record.set("ae_codim", "infinite", outcome.record.status.get("finiteness", CERTIFIED),
                           "finite determinacy fails")
    return outcome


def run(instance: ProblemInstance, stage: str = "verify") -> RunOutcome:
    """Run the pipeline up to ``stage``; every failure is encoded in the outcome."""
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}")
    phi = instance.phi
    record = InvariantRecord(phi.n, phi.r)
    outcome = RunOutcome(UNDETERMINED_CLASS, record)
    record.set("branches", phi.r, CERTIFIED, "input")

    fin = check_finite(phi)
    if not fin.finite:
        record.finite = False
        record.set("finiteness", False, CERTIFIED, "constant branch")
        return _reject(outcome, NOT_FINITE, fin.reason, EXIT_NOT_FINITE)

    mt, _ = multiplicity(phi)
    record.set("mult", mt, CERTIFIED, "sum of minimal coordinate orders")
    start, ceiling = instance.start_truncation(), instance.options.trunc_max

    analyses = [analyse_branch(phi, i, start, ceiling) for i in range(phi.r)]
    record.semigroups = tuple(a.semigroup for a in analyses)
    worst = CERTIFIED
    for a in analyses:
        if a.status != CERTIFIED:
            worst = a.status if worst == CERTIFIED else worst
    record.set("primitivity", [a.degree for a in analyses], worst, "gcd of realized orders per branch")
    for a in analyses:
        name = phi.branches[a.branch].name
        if a.degree > 1:
            record.finite = False
            record.set("finiteness", False, a.status, "primitivity")
            return _reject(outcome, NOT_FINITE, f"imprimitive branch {name}, k={a.degree}", EXIT_NOT_FINITE)
        if a.status == UNDETERMINED:
            record.set("finiteness", None, UNDETERMINED, "primitivity")
            return _reject(outcome, UNDETERMINED_CLASS,
                           f"branch {name}: no conductor found up to N_max={ceiling}", EXIT_UNDETERMINED)

    try:
        res = delta_and_conductor(phi, start, ceiling)
    except Undetermined as exc:
        record.set("finiteness", None, UNDETERMINED, "conductor certificate")
        return _reject(outcome, UNDETERMINED_CLASS, str(exc), EXIT_UNDETERMINED)
    record.set("finiteness", True, CERTIFIED, "primitive branches and certified conductor")
    record.set_delta(res.delta, res.conductor, CERTIFIED, f"conductor certificate at N={res.trunc}")
    delta = res.delta
    record.set("gorenstein", gorenstein_test(delta, res.conductor.degree), CERTIFIED, "c = 2*delta")
    outcome.classification = _classify(record)
    if stage == "check":
        return outcome

    t = cm_type(phi, delta, res.conductor)
    if t is None:
        record.set("cm_type", None, NOT_APPLICABLE, "regular ring")
    else:
        record.set("cm_type", t, CERTIFIED, "dim (m:m)/O_X modulo the conductor")
    record.set_m1(m1(phi, res.conductor), CERTIFIED, "kernel of derivation conditions mod conductor")
    if stage == "invariants":
        return outcome

    dims = assemble_cotangent(phi, record, strict=False)
    outcome.cotangent = dims
    method = "jet-space codimension on the conductor window"
    record.set("ae_codim", dims.ae_codim, CERTIFIED, method)
    record.set("ae_codim_formula", dims.ae_codim_formula, CERTIFIED, "n*delta - m1")
    record.set("le_codim", dims.le_codim, CERTIFIED, method)
    record.set("t1_par_dim", dims.t1_par, CERTIFIED, "equals ae_codim")
    record.set("t1_xbar_minus_y_dim", dims.t1_xbar_minus_y, CERTIFIED, "n*delta")
    record.set("t1_xbar_over_x_dim", dims.t1_xbar_over_x, CERTIFIED, "sum of (min order - 1)")
    record.set("t1_xbar_relative_module", "free O_Xbar-module of rank 1", CERTIFIED,
               "structural; infinite-dimensional over C, nothing computed")
    outcome.checks += dims.checks
    de = dims.ae_codim
    if delta > 0:
        terms, _ = inequality_chain(phi.n, phi.r, delta, mt, res.conductor.degree, record.get("milnor"), de, t)
        record.set("inequality_chain", terms, CERTIFIED, "lower bounds, d_e, upper bounds")
    else:
        record.set("inequality_chain", None, NOT_APPLICABLE, "smooth germ")
    outcome.checks += _corollary_checks(instance, record, de)
    if t is not None:
        bound = (phi.n - 1) * delta - phi.r + t
        record.set("open_bound", bound, CERTIFIED if de <= bound else STABILIZED,
                   "(n-1)delta - r + t; information only")
        if de > bound:
            outcome.diagnostics.append(f"d_e = {de} exceeds (n-1)delta - r + t = {bound}")

    if stage == "verify":
        _ideal_stage(instance, outcome, start, ceiling)
    if outcome.exit_code == EXIT_OK and outcome.failed_checks:
        outcome.exit_code = EXIT_CHECK_FAILED
    return outcome


def _corollary_checks(instance: ProblemInstance, record: InvariantRecord, de: int) -> list[Check]:
    n, r = record.n, record.r
    delta, t, mu = record.get("delta"), record.get("cm_type"), record.get("milnor")
    gor = record.get("gorenstein")
    klass = _classify(record)
    out = [
        check("d_e = 0 iff smooth or ordinary node", de == 0, klass in (SMOOTH, ORDINARY_NODE)),
        check("delta >= r - 1", delta, r - 1, ">="),
    ]
    if delta > 0:
        out.append(check("Gorenstein iff t = 1", bool(gor), t == 1))
        if gor:
            out.append(check("Gorenstein: d_e <= (n-1)delta - r + 1", de, (n - 1) * delta - r + 1, "<="))
        qh = instance.quasihomogeneous()
        if qh:
            out.append(check("quasihomogeneous: d_e = (n-1)delta - r + t", de, (n - 1) * delta - r + t))
        elif gor and instance.options.quasihomogeneous is False:
            out.append(check("Gorenstein, not quasihomogeneous: d_e < (n-1)delta - r + 1",
                             de, (n - 1) * delta - r + 1, "<"))
        if gor:
            out.append(check("Gorenstein: e <= mu", record.get("deligne_e"), mu, "<="))
    return out


def _ideal_stage(instance: ProblemInstance, outcome: RunOutcome, start: int, ceiling: int) -> None:
    phi, record = instance.phi, outcome.record
    de = record.get("ae_codim")
    if instance.ideal is None:
        # smoothable and unobstructed in these cases, so tau = e
        if phi.n <= 3 or (phi.n == 4 and record.get("gorenstein")):
            record.set("tjurina", record.get("deligne_e"), CERTIFIED, "e (smoothable, unobstructed)")
        return
    ideal = instance.ideal
    try:
        verify_ideal(phi, ideal, ceiling)
    except IdealMismatch as exc:
        outcome.diagnostics.append(f"ideal rejected: {exc}")
        outcome.exit_code = EXIT_USAGE
        return
    except UnsupportedIdealShape as exc:
        outcome.diagnostics.append(str(exc))
        record.set("tjurina", None, NOT_APPLICABLE, "ideal is not a complete intersection")
        return
    try:
        trunc0 = max(start, 2 * max(c + phi.branch_multiplicity(i)
                                    for i, c in enumerate(record.conductor.per_branch)))
        tau, trunc = tjurina_ci(phi, ideal, min(trunc0, ceiling), ceiling)
    except Undetermined as exc:
        record.set("tjurina", None, UNDETERMINED, str(exc))
        outcome.diagnostics.append(str(exc))
        outcome.exit_code = EXIT_UNDETERMINED
        return
    record.set("tjurina", tau, CERTIFIED, f"O_X^k / Jacobian image, window certificate at N={trunc}")
    dims = dstar_cokernel_kernel(phi, ideal, record.conductor)
    fitting = fitting_t2_over_x(phi, ideal)
    ded = dedekind_conductor(phi, ideal)
    braid = braid_consistency(phi, record, tau, dims, fitting, de, ded)
    outcome.ci = braid
    method = "Jacobian on (O_Xbar/O_X)^n"
    record.set("t1_xbar_minus_x_dim", braid.t1_xbar_minus_x, CERTIFIED, method)
    record.set("t2_xbar_minus_x_dim", braid.t2_xbar_minus_x, CERTIFIED, method)
    record.set("t1_xbar_to_x_dim", braid.t1_xbar_to_x, CERTIFIED, "t1_xbar_minus_x - m1")
    record.set("t2_xbar_to_x_dim", braid.t2_xbar_to_x, CERTIFIED, "equals t2_xbar_minus_x")
    record.set("t2_xbar_over_x_dim", braid.t2_xbar_over_x, CERTIFIED, "exact sequence")
    record.set("t2_xbar_over_x_fitting", braid.t2_xbar_over_x_fitting, CERTIFIED, "orders of maximal minors")
    outcome.checks += braid.checks
    if not all(c.passed for c in braid.checks):
        outcome.diagnostics.append("identities involving the ideal failed: do the generators define the image exactly?")
