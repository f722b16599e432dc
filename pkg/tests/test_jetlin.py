import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from conftest import random_instance
from germcodim import Parametrization
from germcodim.jetlin import (
    CoordinateMismatch,
    Insertion,
    JetBasis,
    JetSpace,
    PreconditionError,
    rank,
    saturate_algebra,
    span_of,
)
from germcodim.series import MultiSeries, TruncSeries


def test_layout_is_branch_major():
    space = JetSpace((3, 2), slots=2)
    assert space.dim == 10
    assert space.index(0, 1, 0) == 3
    assert space.index(1, 0, 1) == 7
    assert tuple(space.coord(7)) == (1, 0, 1)
    with pytest.raises(CoordinateMismatch):
        space.index(1, 0, 2)


def test_insert_reports_span_membership():
    space = JetSpace((4,))
    basis = JetBasis(space)
    assert basis.insert({1: Fraction(2), 2: Fraction(1)}) is Insertion.EXTENDED
    assert basis.insert({1: Fraction(4), 2: Fraction(2)}) is Insertion.ALREADY_IN_SPAN
    assert basis.contains({1: Fraction(1), 2: Fraction(1, 2)})
    assert basis.codim(range(4)) == 3


def test_codim_rejects_rows_outside_the_ambient():
    basis = span_of(JetSpace((4,)), [{3: Fraction(1)}])
    with pytest.raises(CoordinateMismatch):
        basis.codim(range(3))


def test_cusp_subalgebra_misses_only_t():
    phi = Parametrization.monomial((2, 3))
    basis = saturate_algebra(phi.generators(8), 8)
    assert basis.pivots == [0, 2, 3, 4, 5, 6, 7]


def test_constant_generator_is_refused():
    g = MultiSeries((TruncSeries.from_terms({0: 1, 1: 1}, 4),))
    with pytest.raises(PreconditionError):
        saturate_algebra([g], 4)


def _brute_force_span(phi: Parametrization, trunc: int):
    """Every monomial in the coordinates, evaluated branchwise mod t^trunc."""
    vectors = []
    for alpha in itertools.product(range(trunc), repeat=phi.n):
        if sum(alpha) >= trunc:
            continue
        row = []
        for i in range(phi.r):
            row += list(phi.eval_monomial(i, alpha, trunc).coeffs)
        vectors.append(row)
    return vectors


def _sympy_rank(rows):
    m = DomainMatrix([[QQ(c.numerator, c.denominator) for c in r] for r in rows], (len(rows), len(rows[0])), QQ)
    return m.rank()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.booleans())
def test_saturation_matches_monomial_enumeration(seed, n, perturb):
    phi = random_instance(random.Random(seed), n, perturb)
    trunc = 10
    basis = saturate_algebra(phi.generators(trunc), trunc)
    assert basis.dim == _sympy_rank(_brute_force_span(phi, trunc))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_insertion_order_does_not_matter(seed):
    rng = random.Random(seed)
    space = JetSpace((6, 5), slots=2)
    vectors = [
        {rng.randrange(space.dim): Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(1, 4))}
        for _ in range(rng.randint(1, 14))
    ]
    a = span_of(space, vectors)
    shuffled = vectors[:]
    rng.shuffle(shuffled)
    b = span_of(space, shuffled)
    assert a.dim == b.dim == rank(vectors)
    # reduced echelon form is unique
    assert a.rows() == b.rows()


def test_rank_accepts_arbitrary_sortable_keys():
    assert rank([{("a", 1): Fraction(1)}, {("a", 1): Fraction(2)}, {("b", 0): Fraction(1)}]) == 2
