"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line."""
import random
from math import gcd
import time
from fractions import Fraction

import pytest

from conftest import corpus_text, random_corpus, tjurina_oracle
from test_ci_ext import implicit_plane_equation
from test_cotangent import invertible
from test_germ_io import fuzz_parser
from germcodim import IdealSpec, Options, Parametrization, ProblemInstance, parse_instance, run
from germcodim.jetlin import JetSpace, rank, span_of

RANDOM_SEED = 7
RANDOM_COUNT = 240


@pytest.fixture
def report(capsys):
    def emit(criterion: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
        assert ok, detail

    return emit


def _run_file(name: str, **opts):
    start = time.perf_counter()
    outcome = run(parse_instance(corpus_text(name), Options(**opts)))
    return outcome, time.perf_counter() - start


def _values(outcome, *keys):
    return tuple(outcome.record.get(k) for k in keys)


GOLDEN = {
    "node.germ": {"delta": 1, "branches": 2, "mult": 2, "milnor": 1, "ae_codim": 0, "le_codim": 2,
                  "classification": "ordinary-node"},
    "cusp.germ": {"delta": 1, "conductor_degree": 2, "m1": 1, "ae_codim": 1, "tjurina": 2,
                  "t1_xbar_to_x_dim": 1, "t2_xbar_to_x_dim": 1, "t2_xbar_over_x_dim": 3},
    "a4.germ": {"delta": 2, "ae_codim": 2, "tjurina": 4},
    "e6.germ": {"delta": 3, "conductor_degree": 6, "gorenstein": True, "cm_type": 1, "tjurina": 6,
                "ae_codim": 3, "m1": 3},
    "tacnode.germ": {"delta": 2, "branches": 2, "milnor": 3, "tjurina": 3, "ae_codim": 1,
                     "t1_xbar_minus_x_dim": 4, "t2_xbar_minus_x_dim": 2},
    "monomial345.germ": {"delta": 2, "conductor_degree": 3, "gorenstein": False, "cm_type": 2, "mult": 3,
                         "ae_codim": 5, "tjurina": 5},
}


def test_criterion_1_golden_corpus(report):
    bad = []
    slowest = 0.0
    for name, expected in GOLDEN.items():
        outcome, secs = _run_file(name)
        slowest = max(slowest, secs)
        for key, want in expected.items():
            got = outcome.classification if key == "classification" else outcome.record.get(key)
            if got != want:
                bad.append(f"{name}:{key}={got}!={want}")
        if outcome.exit_code != 0 or outcome.failed_checks:
            bad.append(f"{name}: exit {outcome.exit_code}, failed {[c.name for c in outcome.failed_checks]}")
        if secs > 10:
            bad.append(f"{name}: {secs:.1f}s")
    # the quasihomogeneous formula for the <3,4,5> curve
    o, _ = _run_file("monomial345.germ")
    n, r, delta, t = 3, 1, o.record.get("delta"), o.record.get("cm_type")
    if o.record.get("ae_codim") != (n - 1) * delta - r + t:
        bad.append("monomial345: d_e != (n-1)delta - r + t")
    report("1", not bad, f"{len(GOLDEN)} golden instances exact, slowest {slowest:.2f}s" if not bad else "; ".join(bad))


@pytest.fixture(scope="module")
def random_outcomes():
    out = []
    for phi in random_corpus(RANDOM_SEED, RANDOM_COUNT):
        out.append((phi, run(ProblemInstance(phi), "codim")))
    return out


def _certified(outcomes):
    return [(phi, o) for phi, o in outcomes if o.record.certified("delta", "ae_codim", "m1")]


def test_criterion_2_formula_vs_oracle(report, random_outcomes):
    cert = _certified(random_outcomes)
    mismatches = []
    for phi, o in cert:
        n, delta, m_1, e = phi.n, o.record.get("delta"), o.record.get("m1"), o.record.get("deligne_e")
        de = o.record.get("ae_codim")
        if not de == n * delta - m_1 == (n - 3) * delta + e:
            mismatches.append((phi, de, n * delta - m_1))
    ns = sorted({phi.n for phi, _ in cert})
    report("2", len(cert) >= 200 and not mismatches,
           f"{len(cert)} certified instances (n in {ns}), {len(mismatches)} mismatches")


def test_criterion_3_inequality_chain(report, random_outcomes):
    singular = [(phi, o) for phi, o in _certified(random_outcomes) if o.record.get("delta") > 0]
    violations = [
        (phi, c.name) for phi, o in singular for c in o.checks if c.name.startswith("chain:") and not c.passed
    ]
    chained = sum(1 for _, o in singular if any(c.name.startswith("chain:") for c in o.checks))
    report("3", chained == len(singular) > 0 and not violations,
           f"{len(singular)} singular instances, {len(violations)} chain violations")


def test_criterion_4_left_equivalence(report, random_outcomes):
    cert = _certified(random_outcomes)
    golden = [_run_file(name)[0] for name in GOLDEN]
    bad = [o for o in [o for _, o in cert] + golden if o.record.get("le_codim") != o.record.n * o.record.get("delta")]
    report("4", not bad, f"le_codim = n*delta on {len(cert) + len(golden)} instances, {len(bad)} mismatches")


def _plane_instances():
    out = [parse_instance(corpus_text(name)) for name in ("node.germ", "cusp.germ", "a4.germ", "e6.germ",
                                                         "tacnode.germ")]
    rng = random.Random(5)
    for _ in range(10):
        p = rng.choice([2, 3, 4])
        q = rng.choice([q for q in range(p + 1, 9) if gcd(p, q) == 1])
        a, b = {p: Fraction(1)}, {q: Fraction(1)}
        if rng.random() < 0.6:
            b[q + rng.randint(1, 3)] = Fraction(rng.choice([1, -1, 2]))
        ideal = IdealSpec.from_terms([implicit_plane_equation(a, b)])
        out.append(ProblemInstance(Parametrization.from_terms([[a, b]]), ideal))
    out.append(parse_instance(corpus_text("ci456.germ")))
    return out


def test_criterion_5_braid_laws(report):
    bad, count = [], 0
    for inst in _plane_instances():
        o = run(inst)
        rec, delta = o.record, o.record.get("delta")
        ker, coker = rec.get("t1_xbar_minus_x_dim"), rec.get("t2_xbar_minus_x_dim")
        if ker is None:
            bad.append("ideal not verified")
            continue
        count += 1
        if ker - coker != delta:
            bad.append(f"ker - coker = {ker - coker} != {delta}")
        if inst.phi.n == 2 and (o.ci.dstar_rank != 0 or ker != 2 * delta or coker != delta):
            bad.append(f"plane: rank {o.ci.dstar_rank}, ker {ker}, coker {coker}, delta {delta}")
        if rec.get("tjurina") != tjurina_oracle(list(inst.ideal.generators), inst.phi.n):
            bad.append("tau differs from the polynomial-ring oracle")
        if o.exit_code != 0:
            bad.append(f"exit {o.exit_code}")
    report("5", not bad, f"{count} instances with verified ideal" if not bad else "; ".join(bad))


def test_criterion_6_rejections(report):
    constant, _ = _run_file("constant.germ")
    imprimitive, _ = _run_file("imprimitive.germ")
    coincident, secs = _run_file("coincident.germ")
    ok = (
        constant.exit_code == 2
        and imprimitive.exit_code == 2
        and imprimitive.record.get("primitivity") == [2]
        and "k=2" in imprimitive.record.reason
        and coincident.exit_code == 3
        and coincident.classification == "undetermined"
        and "no conductor found up to N_max" in coincident.record.reason
    )
    report("6", ok, f"exits {constant.exit_code}/{imprimitive.exit_code}/{coincident.exit_code}, "
                    f"coincident run {secs:.2f}s")


DIMENSION_KEYS = ("delta", "conductor", "mult", "milnor", "m1", "deligne_e", "cm_type", "ae_codim", "le_codim",
                  "t1_xbar_over_x_dim", "gorenstein", "tjurina")


def test_criterion_7_robustness(report):
    problems = []
    # truncation independence: doubled ceiling
    for name in list(GOLDEN) + ["ci456.germ", "perturbed46.germ"]:
        a, _ = _run_file(name)
        b, _ = _run_file(name, trunc_max=1024)
        if _values(a, *DIMENSION_KEYS) != _values(b, *DIMENSION_KEYS):
            problems.append(f"{name}: depends on the ceiling")
    # insertion order
    rng = random.Random(11)
    space = JetSpace((7, 5), slots=3)
    for _ in range(200):
        vecs = [{rng.randrange(space.dim): Fraction(rng.randint(-2, 2)) for _ in range(3)} for _ in range(12)]
        perm = vecs[:]
        rng.shuffle(perm)
        if span_of(space, vecs).rows() != span_of(space, perm).rows() or span_of(space, vecs).dim != rank(vecs):
            problems.append("insertion order changed the basis")
            break
    # coordinate changes and rescalings
    changed = 0
    for phi in random_corpus(99, 30):
        base = _values(run(ProblemInstance(phi), "codim"), *DIMENSION_KEYS[:-1])
        moved = phi.linear_change(invertible(rng, phi.n)).rescale(
            [Fraction(rng.choice([2, 3, -1, 5]), rng.choice([1, 2, 7])) for _ in range(phi.r)])
        if _values(run(ProblemInstance(moved), "codim"), *DIMENSION_KEYS[:-1]) != base:
            problems.append(f"coordinate change altered {phi}")
        changed += 1
    accepted, rejected = fuzz_parser(10_000)
    if accepted + rejected != 10_000:
        problems.append("fuzz run lost inputs")
    report("7", not problems,
           f"ceiling doubling, insertion order, {changed} coordinate changes, 10^4 fuzz inputs "
           f"({accepted} accepted, {rejected} rejected)" if not problems else "; ".join(problems))
