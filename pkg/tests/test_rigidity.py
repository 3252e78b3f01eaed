from __future__ import annotations

from fractions import Fraction

import pytest

from liealg import catalog
from liealg.cohomology import cohomology_basis, cohomology_dims
from liealg.core import Subspace, ad_matrix
from liealg.deformations import linear_deformation_check
from liealg.rigidity import (
    INCONCLUSIVE,
    NOT_RIGID,
    RIGID,
    RigidityError,
    check_decomposition,
    nr_test,
    rank_test,
    regular_vector,
    rigidity_report,
    root_system,
)

F = Fraction
S = Subspace.span_of_indices
CATALOG = catalog.standard_fixtures()

# (algebra, torus indices, nilradical indices)
DECOMPOSITIONS = [
    (catalog.aff2(), [0], [1]),
    (catalog.four_dim_solvable(), [0, 2], [1, 3]),
    (catalog.heisenberg(1), [], [0, 1, 2]),
    (catalog.heisenberg(2), [], [0, 1, 2, 3, 4]),
    (catalog.abelian(3), [], [0, 1, 2]),
    (catalog.filiform_model(4), [], [0, 1, 2, 3]),
    (catalog.filiform_model(5), [], [0, 1, 2, 3, 4]),
    (catalog.rigid11(), [0, 1], list(range(2, 11))),
]


def _split(g, t, n):
    return S(g.dim, t), S(g.dim, n)


# -- Nijenhuis-Richardson -------------------------------------------------------------


@pytest.mark.parametrize("g", [catalog.aff2(), catalog.sl2(), catalog.so3(), catalog.four_dim_solvable()], ids=lambda g: g.name)
def test_vanishing_h2_gives_rigid(g):
    v = nr_test(g)
    assert v.kind == RIGID and v.data["dim_H2"] == 0


def test_rigid11_is_inconclusive_with_one_class():
    v = nr_test(catalog.rigid11())
    assert v.kind == INCONCLUSIVE and v.data["dim_H2"] == 1


@pytest.mark.parametrize("g", [catalog.heisenberg(1), catalog.abelian(2), catalog.filiform_model(4)], ids=lambda g: g.name)
def test_nonvanishing_h2_is_inconclusive(g):
    assert nr_test(g).kind == INCONCLUSIVE


@pytest.mark.parametrize("g", [g for g in CATALOG if g.dim <= 6], ids=lambda g: g.name)
def test_nontrivial_linear_deformation_excludes_rigid_verdict(g):
    verdict = nr_test(g).kind
    for z in cohomology_basis(g, 2):
        if linear_deformation_check(g, z).valid_for_all_t:
            assert verdict != RIGID


# -- torus and nilradical ---------------------------------------------------------------


def test_decomposition_checks():
    aff = catalog.aff2()
    check_decomposition(aff, S(2, [0]), S(2, [1]))
    with pytest.raises(RigidityError):
        check_decomposition(aff, S(2, [1]), S(2, [0]))  # span(e1) is not an ideal
    with pytest.raises(RigidityError):
        check_decomposition(aff, S(2, []), S(2, [1]))  # does not span
    so3 = catalog.so3()
    with pytest.raises(RigidityError):
        check_decomposition(so3, S(3, [0]), S(3, [1, 2]))  # ad has no rational spectrum
    with pytest.raises(RigidityError):
        check_decomposition(catalog.sl2(), S(3, [0]), S(3, [1, 2]))  # not an ideal


def test_regular_vector_aff2():
    x, v0 = regular_vector(catalog.aff2(), S(2, [0]), S(2, [1]))
    assert x == [1, 0] and v0 == 1


def test_regular_vector_needs_a_torus():
    g = catalog.abelian(2)
    with pytest.raises(RigidityError):
        regular_vector(g, S(2, []), S(2, [0, 1]))


def test_torus_only_algebra():
    # g equal to its torus: every vector has the whole algebra as V0
    g = catalog.abelian(2)
    x, v0 = regular_vector(g, S(2, [0, 1]), S(2, []))
    assert v0 == 2


def test_regular_vector_rigid11():
    g = catalog.rigid11()
    x, v0 = regular_vector(g, S(11, [0, 1]), S(11, list(range(2, 11))))
    assert x == [1] + [0] * 10 and v0 == 2
    ad = ad_matrix(g, x)
    assert [ad[i + 1][i + 1] for i in range(10)] == list(range(10))


# -- root systems ----------------------------------------------------------------------


def test_root_system_aff2():
    g = catalog.aff2()
    rs = root_system(g, S(2, [0]), S(2, [1]))
    assert rs.rank == 0
    assert rank_test(g, rs, S(2, [1])).kind == INCONCLUSIVE


@pytest.mark.parametrize("n", [2, 3, 5])
def test_root_system_abelian(n):
    g = catalog.abelian(n)
    nil = S(n, list(range(n)))
    rs = root_system(g, S(n, []), nil)
    assert rs.relations == () and rs.rank == 0
    assert rank_test(g, rs, nil).kind == NOT_RIGID


def test_root_system_heisenberg():
    g = catalog.heisenberg(1)
    rs = root_system(g, *_split(g, [], [0, 1, 2]))
    assert rs.relation_strings() == ["y1 +y2 -y3 = 0"]


def test_root_system_rigid11():
    g = catalog.rigid11()
    torus, nil = _split(g, [0, 1], list(range(2, 11)))
    rs = root_system(g, torus, nil)
    assert nil.dim == 9
    assert rs.rank == nil.dim - 1 == 8
    assert rank_test(g, rs, nil).kind == INCONCLUSIVE
    # every relation comes from a nonzero bracket component
    assert all(sum(1 for c in row if c) in (1, 3) for row in rs.relations)


def test_root_system_rejects_vector_outside_torus():
    g = catalog.aff2()
    with pytest.raises(RigidityError):
        root_system(g, S(2, [0]), S(2, [1]), x=[0, 1])


@pytest.mark.parametrize("g,t,n", DECOMPOSITIONS, ids=lambda x: getattr(x, "name", None))
def test_verdicts_never_conflict(g, t, n):
    torus, nil = _split(g, t, n)
    rep = rigidity_report(g, torus, nil)
    kinds = {rep["nr_test"]["verdict"], rep["rank_test"]["verdict"]}
    assert kinds != {RIGID, NOT_RIGID}
    if rep["nr_test"]["verdict"] == RIGID:
        assert cohomology_dims(g, 2).dimH == 0


def test_report_without_decomposition():
    rep = rigidity_report(catalog.sl2())
    assert set(rep) == {"nr_test"} and rep["nr_test"]["verdict"] == RIGID
