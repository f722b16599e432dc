import random
from fractions import Fraction

import pytest
from sympy import Matrix
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_instance
from germcodim import Parametrization
from germcodim.cotangent import (
    FormulaMismatch,
    ae_codim_oracle,
    assemble_cotangent,
    inequality_chain,
    le_codim,
    m1,
    oracle_window,
)
from germcodim.subalgebra import CERTIFIED, InvariantRecord, delta_and_conductor, multiplicity


def _record(phi):
    res = delta_and_conductor(phi)
    rec = InvariantRecord(phi.n, phi.r)
    rec.set_delta(res.delta, res.conductor, CERTIFIED, "test")
    rec.set("mult", multiplicity(phi)[0])
    return rec, res


@pytest.mark.parametrize(
    "rows, de, m_1",
    [
        ([(2, 3)], 1, 1),
        ([(2, 5)], 2, 2),
        ([(3, 4)], 3, 3),
        ([(3, 4, 5)], 5, 1),
        ([(1, 0), (0, 1)], 0, 2),
        ([(1, 2)], 0, 0),
    ],
)
def test_known_codimensions(rows, de, m_1):
    phi = Parametrization.monomial(*rows)
    res = delta_and_conductor(phi)
    assert ae_codim_oracle(phi, res.conductor) == de
    assert m1(phi, res.conductor) == m_1
    assert le_codim(phi, res.conductor, res.delta) == phi.n * res.delta


def test_tacnode_codimension():
    phi = Parametrization.from_terms([[{1: 1}, {2: 1}], [{1: 1}, {2: -1}]])
    res = delta_and_conductor(phi)
    assert ae_codim_oracle(phi, res.conductor) == 1


def test_strict_assembly_raises_on_a_wrong_m1():
    phi = Parametrization.monomial((2, 3))
    rec, _ = _record(phi)
    rec.set("cm_type", 1)
    rec.set_m1(0, CERTIFIED, "deliberately wrong")
    with pytest.raises(FormulaMismatch):
        assemble_cotangent(phi, rec, strict=True)
    dims = assemble_cotangent(phi, rec, strict=False)
    assert not all(c.passed for c in dims.checks)


def test_inequality_chain_terms_for_the_cusp():
    terms, checks = inequality_chain(2, 1, 1, 2, 2, 2, 1, 1)
    assert terms == [0, 1, 1, 1, 1, 1, 2]
    assert all(c.passed for c in checks)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]), st.booleans())
def test_window_enlargement_leaves_codimension_unchanged(seed, n, perturb):
    phi = random_instance(random.Random(seed), n, perturb)
    res = delta_and_conductor(phi)
    w = oracle_window(phi, res.conductor)
    bigger = tuple(x + 5 for x in w)
    assert ae_codim_oracle(phi, res.conductor) == ae_codim_oracle(phi, res.conductor, bigger)
    assert le_codim(phi, res.conductor) == le_codim(phi, res.conductor, window=bigger)


def _invariants(phi):
    res = delta_and_conductor(phi)
    return res.delta, res.conductor.per_branch, ae_codim_oracle(phi, res.conductor), m1(phi, res.conductor)


def invertible(rng: random.Random, n: int):
    while True:
        m = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        if Matrix(m).det() != 0:
            return m


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.fractions(min_value=Fraction(1, 3), max_value=3))
def test_invariance_under_linear_changes_and_rescaling(seed, n, lam):
    rng = random.Random(seed)
    phi = random_instance(rng, n, perturb=seed % 2 == 1)
    base = _invariants(phi)
    assert _invariants(phi.linear_change(invertible(rng, n))) == base
    assert _invariants(phi.rescale([lam])) == base
