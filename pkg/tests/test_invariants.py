from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from _strategies import NILPOTENT_FIXTURES, lie_algebras
from liealg import catalog, linalg
from liealg.cohomology import derivations, is_derivation
from liealg.core import Subspace, ad_basis, direct_sum, validate_jacobi
from liealg.invariants import (
    center,
    characteristic_sequence,
    derived_series,
    engel_check,
    extend_by_derivation,
    invariant_vector,
    is_filiform,
    is_nilpotent,
    is_semisimple,
    is_solvable,
    jordan_type,
    killing_form,
    lower_central_series,
    nilindex,
    signature,
)

F = Fraction
CATALOG = catalog.standard_fixtures()


def test_series_heisenberg():
    h3 = catalog.heisenberg(1)
    assert lower_central_series(h3).dims == [3, 1, 0]
    assert is_nilpotent(h3) and nilindex(h3) == 2


@pytest.mark.parametrize("n", [1, 2, 4])
def test_abelian_nilindex_one(n):
    g = catalog.abelian(n)
    assert lower_central_series(g).dims == [n, 0]
    assert nilindex(g) == 1


def test_aff2_series():
    g = catalog.aff2()
    assert derived_series(g).dims == [2, 1, 0]
    assert lower_central_series(g).dims == [2, 1]
    assert is_solvable(g) and not is_nilpotent(g)


def test_filiform_and_solvability_flags():
    assert is_filiform(catalog.filiform4_target())
    assert is_filiform(catalog.filiform_model(5))
    assert is_nilpotent(catalog.abelian(3)) and not is_filiform(catalog.abelian(3))
    assert not is_solvable(catalog.sl2())


def test_engel_examples():
    assert engel_check(catalog.heisenberg(1))
    assert not engel_check(catalog.aff2())
    assert engel_check(catalog.abelian(3))


def test_center_examples():
    assert center(catalog.heisenberg(1)) == Subspace.span_of_indices(3, [2])
    assert center(catalog.abelian(3)) == Subspace.whole(3)
    assert center(catalog.sl2()).dim == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_characteristic_sequence_filiform(n):
    assert characteristic_sequence(catalog.filiform_model(n)).sequence == (n - 1, 1)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_characteristic_sequence_heisenberg(p):
    assert characteristic_sequence(catalog.heisenberg(p)).sequence == (2,) + (1,) * (2 * p - 1)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_characteristic_sequence_abelian(n):
    assert characteristic_sequence(catalog.abelian(n)).sequence == (1,) * n


def test_jordan_type():
    shift = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    assert jordan_type(shift) == (3,)
    assert jordan_type(linalg.zeros(2, 2)) == (1, 1)


def _sympy_killing(g):
    n = g.dim
    ads = [sympy.Matrix(ad_basis(g, a)) for a in range(n)]
    return [[F(str((ads[a] * ads[b]).trace())) for b in range(n)] for a in range(n)]


@pytest.mark.parametrize("g", [catalog.sl2(), catalog.so3(), catalog.aff2(), catalog.poincare()])
def test_killing_form_matches_sympy(g):
    assert killing_form(g) == _sympy_killing(g)


def test_semisimplicity():
    assert is_semisimple(catalog.sl2()) and linalg.det(killing_form(catalog.sl2())) != 0
    assert is_semisimple(catalog.so3())
    for g in (catalog.heisenberg(1), catalog.filiform_model(4), catalog.abelian(3)):
        assert not is_semisimple(g)
        assert linalg.is_zero_matrix(killing_form(g))


def test_killing_signatures():
    assert signature(killing_form(catalog.so3())) == (0, 3, 0)
    assert signature(killing_form(catalog.sl2())) == (2, 1, 0)


def test_extend_by_derivation():
    h3 = catalog.heisenberg(1)
    ext = extend_by_derivation(h3, [[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert ext.dim == 4 and validate_jacobi(ext).ok and is_solvable(ext) and not is_nilpotent(ext)
    assert extend_by_derivation(h3, linalg.zeros(3, 3)) == direct_sum(h3, catalog.abelian(1))
    ab = extend_by_derivation(catalog.abelian(2), linalg.identity(2))
    assert not is_nilpotent(ab) and lower_central_series(ab).dims == [3, 2]


def test_invariant_vector_distinguishes():
    a = invariant_vector(catalog.four_dim_solvable())
    b = invariant_vector(catalog.filiform4_target())
    assert a != b and a["dim"] == b["dim"] == 4


# -- properties -----------------------------------------------------------------


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: g.name)
def test_derived_inside_central(g):
    d, c = derived_series(g).terms, lower_central_series(g).terms
    for p in range(min(len(d), len(c))):
        assert c[p].contains_subspace(d[p])


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: g.name)
def test_engel_agrees_with_nilpotency_on_catalog(g):
    assert engel_check(g) == is_nilpotent(g)


@settings(max_examples=100)
@given(lie_algebras(pool=NILPOTENT_FIXTURES))
def test_engel_on_fuzzed_nilpotent(g):
    assert is_nilpotent(g) and engel_check(g)


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: g.name)
def test_killing_invariance(g):
    k = killing_form(g)
    n = g.dim
    for y in range(n):
        ad = ad_basis(g, y)
        # K(ad Y X, Z) + K(X, ad Y Z) = 0, i.e. ad^T K + K ad = 0
        lhs = linalg.matmul(linalg.transpose(ad), k)
        rhs = linalg.matmul(k, ad)
        assert all(a + b == 0 for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb))


@pytest.mark.parametrize("g", [x for x in CATALOG if x.dim <= 5], ids=lambda g: g.name)
def test_invertible_derivation_forces_nilpotency(g):
    ders = derivations(g)
    rng = random.Random(1)
    found = False
    for _ in range(30):
        coeffs = [rng.randint(-3, 3) for _ in ders]
        m = linalg.zeros(g.dim, g.dim)
        for c, d in zip(coeffs, ders):
            m = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(m, d)]
        if linalg.det(m):
            found = True
            break
    if found:
        assert is_nilpotent(g)


def test_regular_derivation_exists_on_heisenberg():
    h3 = catalog.heisenberg(1)
    f = [[1, 0, 0], [0, 1, 0], [0, 0, 2]]
    assert linalg.det(f) and is_derivation(h3, f)


def test_center_vectors_are_central():
    for g in CATALOG:
        for v in center(g).basis:
            for i in range(g.dim):
                assert not any(linalg.matvec(ad_basis(g, i), v))
