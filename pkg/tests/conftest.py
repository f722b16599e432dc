"""Shared instance generators and independent oracles for the test suite."""
from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from pathlib import Path

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from germcodim import Parametrization

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text()


# numerical semigroups, by brute force --------------------------------------------


def semigroup_elements(generators, bound):
    """All elements below ``bound`` of the monoid generated by ``generators``."""
    seen = {0}
    for v in range(1, bound):
        if any(v - g in seen for g in generators if v >= g):
            seen.add(v)
    return seen


def semigroup_data(generators):
    """(gaps, conductor, pseudo-Frobenius numbers) for generators with gcd 1."""
    g0 = min(generators)
    bound = g0 * max(generators) + 1  # past the Frobenius number
    elems = semigroup_elements(generators, bound)
    gaps = sorted(set(range(bound)) - elems)
    conductor = gaps[-1] + 1 if gaps else 0
    positive = [s for s in elems if 0 < s <= conductor + g0]
    pf = [g for g in gaps if all((g + s) in elems or g + s >= conductor for s in positive)]
    return gaps, conductor, pf


# random instances ------------------------------------------------------------------


def _primitive_row(rng: random.Random, n: int, low=2, high=9):
    while True:
        row = [rng.randint(low, high) for _ in range(n)]
        g = 0
        for a in row:
            g = gcd(g, a)
        if g == 1:
            return row


def random_instance(rng: random.Random, n: int, perturb: bool = False, r: int = 1) -> Parametrization:
    """A monomial (optionally perturbed) parametrization with primitive branches."""
    branches = []
    for i in range(r):
        if r > 1 and i > 0:
            row = _primitive_row(rng, n, 1, 4)
        else:
            row = _primitive_row(rng, n)
        coords = []
        for a in row:
            c = Fraction(rng.choice([1, 1, 2, -1, 3]), rng.choice([1, 1, 2]))
            coords.append({a: c})
        if perturb:
            j = rng.randrange(n)
            e = min(coords[j]) + rng.randint(1, 4)
            coords[j] = {**coords[j], e: Fraction(rng.randint(-3, 3) or 1)}
        branches.append(coords)
    return Parametrization.from_terms(branches)


def random_corpus(seed: int, count: int):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = (2, 3, 4)[k % 3]
        perturb = k % 2 == 1
        r = 2 if k % 7 == 0 else 1
        out.append(random_instance(rng, n, perturb, r))
    return out


# Tjurina number of a complete intersection, by linear algebra in sympy -----------


def _monomials(nvars: int, below: int):
    if nvars == 0:
        yield ()
        return
    for a in range(below):
        for rest in _monomials(nvars - 1, below - a):
            yield (a,) + rest


def _poly_mul_mono(f, alpha):
    return {tuple(e + a for e, a in zip(ex, alpha)): c for ex, c in f.items()}


def _diff(f, j):
    out = {}
    for ex, c in f.items():
        if ex[j]:
            e = list(ex)
            e[j] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c * ex[j]
    return out


def _quotient_dim(columns, k, nvars, K):
    """dim of (Q[x]/m^K)^k modulo the span of monomial multiples of ``columns``."""
    basis = [(slot, m) for slot in range(k) for m in _monomials(nvars, K)]
    index = {b: i for i, b in enumerate(basis)}
    rows = []
    for col in columns:
        for alpha in _monomials(nvars, K):
            row = [QQ(0)] * len(basis)
            nonzero = False
            for slot, f in enumerate(col):
                for ex, c in _poly_mul_mono(f, alpha).items():
                    if sum(ex) < K:
                        row[index[(slot, ex)]] += QQ(c.numerator, c.denominator) if isinstance(c, Fraction) else QQ(c)
                        nonzero = True
            if nonzero:
                rows.append(row)
    if not rows:
        return len(basis)
    rk = DomainMatrix(rows, (len(rows), len(basis)), QQ).rank()
    return len(basis) - rk


def tjurina_oracle(generators, nvars: int, max_k: int = 40) -> int:
    """dim O^k / (I O^k + Jacobian columns) at the origin, stabilized in the m-adic filtration."""
    k = len(generators)
    columns = []
    for i, f in enumerate(generators):
        for slot in range(k):
            col = [{} for _ in range(k)]
            col[slot] = f
            columns.append(col)
    for j in range(nvars):
        columns.append([_diff(f, j) for f in generators])
    prev = None
    for K in range(1, max_k):
        d = _quotient_dim(columns, k, nvars, K)
        if d == prev:
            return d
        prev = d
    raise AssertionError("Tjurina oracle did not stabilize")
