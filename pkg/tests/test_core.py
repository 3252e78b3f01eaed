from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from _strategies import SMALL_FIXTURES, invertible_matrices, lie_algebras, raw_tables, vectors
from liealg import catalog, linalg
from liealg.core import (
    JacobiError,
    LieAlgebra,
    LieAlgebraError,
    ScalarForm,
    Subspace,
    act,
    bch_truncated,
    bracket,
    d_squared_vanishes,
    direct_sum,
    exterior_derivative,
    is_ideal,
    is_subalgebra,
    quotient,
    quotient_projection,
    unit,
    validate_jacobi,
)
from liealg.scalars import GaussianRational

F = Fraction


def e(n: int, i: int) -> list[Fraction]:
    return unit(n, i)


# -- construction and validation ---------------------------------------------------


def test_heisenberg_is_valid():
    assert validate_jacobi(catalog.heisenberg(1)).ok


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_abelian_has_no_residuals(n):
    rep = validate_jacobi(catalog.abelian(n))
    assert rep.ok and rep.residuals == ()


def test_broken_triple_residual():
    g = LieAlgebra(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]}, check=False)
    rep = validate_jacobi(g)
    assert not rep.ok
    assert {(i, j, k) for i, j, k, _, _ in rep.residuals} == {(0, 1, 2)}
    assert [(s, v) for *_, s, v in rep.residuals] == [(2, F(-1))]


def test_jacobi_error_raised_on_construction():
    with pytest.raises(JacobiError) as info:
        LieAlgebra(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
    assert not info.value.report.ok


def test_malformed_tables_rejected():
    with pytest.raises(LieAlgebraError):
        LieAlgebra(2, {(0, 1): [1]})
    with pytest.raises(LieAlgebraError):
        LieAlgebra(2, {(0, 2): [1, 0]})
    with pytest.raises(LieAlgebraError):
        LieAlgebra(2, {(0, 0): [1, 0]})
    with pytest.raises(LieAlgebraError):
        LieAlgebra(2, {(0, 1): [1, 0], (1, 0): [1, 0]})
    with pytest.raises(LieAlgebraError):
        LieAlgebra(2, {(0, 1): [GaussianRational(0, 1), 0]})
    with pytest.raises(LieAlgebraError):
        LieAlgebra(2, field="R")


def test_reversed_pair_is_normalized():
    assert LieAlgebra(2, {(1, 0): [0, -1]}) == catalog.aff2()


def test_gaussian_field_accepted():
    g = LieAlgebra(2, {(0, 1): [0, GaussianRational(0, 1)]}, field="Q(i)")
    assert g.structure_constant(1, 0, 1) == GaussianRational(0, -1)


# -- bracket -----------------------------------------------------------------------


def test_bracket_heisenberg():
    assert bracket(catalog.heisenberg(1), e(3, 0), e(3, 1)) == e(3, 2)


def test_bracket_sl2_e_f_is_h():
    # sl2 basis order H, E, F
    assert bracket(catalog.sl2(), e(3, 1), e(3, 2)) == e(3, 0)


@given(lie_algebras(), st.data())
def test_bracket_alternating(g, data):
    x = data.draw(vectors(g.dim))
    assert not any(bracket(g, x, x))


@given(lie_algebras(), st.data())
def test_bracket_bilinear(g, data):
    n = g.dim
    x, y, z = (data.draw(vectors(n)) for _ in range(3))
    a, b = data.draw(st.fractions(max_denominator=5)), data.draw(st.fractions(max_denominator=5))
    lhs = bracket(g, [a * p + b * q for p, q in zip(x, y)], z)
    rhs = [a * p + b * q for p, q in zip(bracket(g, x, z), bracket(g, y, z))]
    assert lhs == rhs


# -- change of basis -----------------------------------------------------------------


def test_act_two_dim_normal_form():
    # [e1, e2] = a e1 + b e2 with b != 0 becomes [e1', e2'] = e2'
    a, b = F(3), F(2)
    g = LieAlgebra(2, {(0, 1): [a, b]})
    f = [[1 / b, a], [0, b]]
    assert act(g, f) == catalog.aff2()


def test_act_identity():
    g = catalog.sl2()
    assert act(g, linalg.identity(3)) == g


def test_act_diagonal_heisenberg():
    g = act(catalog.heisenberg(1), [[2, 0, 0], [0, 3, 0], [0, 0, 1]])
    assert g.bracket_basis(0, 1) == [0, 0, 6]


def test_act_rejects_singular():
    with pytest.raises(LieAlgebraError):
        act(catalog.aff2(), [[1, 1], [1, 1]])


@settings(max_examples=40)
@given(st.sampled_from(SMALL_FIXTURES), st.data())
def test_act_is_right_action(g, data):
    f1 = data.draw(invertible_matrices(g.dim))
    f2 = data.draw(invertible_matrices(g.dim))
    assert act(g, linalg.matmul(f1, f2)) == act(act(g, f1), f2)


@settings(max_examples=40)
@given(lie_algebras())
def test_act_preserves_jacobi(g):
    assert validate_jacobi(g).ok


# -- direct sums and quotients ---------------------------------------------------


def test_direct_sum_examples():
    s = direct_sum(catalog.abelian(1), catalog.heisenberg(1))
    assert s.dim == 4 and s.bracket_basis(1, 2) == [0, 0, 0, 1] and validate_jacobi(s).ok
    assert direct_sum(catalog.abelian(2), catalog.abelian(3)) == catalog.abelian(5)
    assert direct_sum(catalog.aff2(), catalog.aff2()) == catalog.four_dim_solvable()


def test_quotients():
    h3 = catalog.heisenberg(1)
    assert quotient(h3, Subspace.span_of_indices(3, [2])) == catalog.abelian(2)
    assert quotient(h3, Subspace.whole(3)).dim == 0
    l4 = catalog.filiform_model(4)
    assert quotient(l4, Subspace.span_of_indices(4, [3])) == catalog.heisenberg(1).renamed(None)
    with pytest.raises(LieAlgebraError):
        quotient(catalog.aff2(), Subspace.span_of_indices(2, [0]))


@pytest.mark.parametrize("g,ideal", [
    (catalog.filiform_model(5), [3, 4]),
    (catalog.heisenberg(2), [4]),
    (catalog.four_dim_solvable(), [1, 3]),
    (catalog.aff2(), [1]),
])
def test_quotient_commutes_with_projection(g, ideal):
    i = Subspace.span_of_indices(g.dim, ideal)
    q = quotient(g, i)
    for a in range(g.dim):
        for b in range(g.dim):
            pa = quotient_projection(g, i, e(g.dim, a))
            pb = quotient_projection(g, i, e(g.dim, b))
            assert bracket(q, pa, pb) == quotient_projection(g, i, g.bracket_basis(a, b))


def test_subalgebras_and_ideals():
    h3 = catalog.heisenberg(1)
    assert is_ideal(h3, Subspace.span_of_indices(3, [2]))
    for g in SMALL_FIXTURES:
        assert is_ideal(g, Subspace.whole(g.dim))
    aff = catalog.aff2()
    line = Subspace.span_of_indices(2, [0])
    assert is_subalgebra(aff, line) and not is_ideal(aff, line)


# -- exterior derivative ---------------------------------------------------------


def test_exterior_derivative_examples():
    h3 = catalog.heisenberg(1)
    assert exterior_derivative(h3, ScalarForm.basis_form(3, 2)).coeffs == {(0, 1): 1}
    ab = catalog.abelian(3)
    assert exterior_derivative(ab, ScalarForm(3, 2, {(0, 1): 5, (1, 2): 1})).is_zero()
    fr = catalog.frobenius_model(2, (1,))
    assert exterior_derivative(fr, ScalarForm.basis_form(4, 0)).coeffs == {(0, 1): 1, (2, 3): 1}


def test_exterior_derivative_matches_evaluation():
    # dω(X, Y) = ω([X, Y]) on 1-forms
    for g in SMALL_FIXTURES:
        n = g.dim
        for k in range(n):
            d = exterior_derivative(g, ScalarForm.basis_form(n, k))
            for i in range(n):
                for j in range(n):
                    assert d.evaluate([e(n, i), e(n, j)]) == g.structure_constant(i, j, k)


@settings(max_examples=200)
@given(raw_tables())
def test_jacobi_iff_d_squared_zero_fuzzed(g):
    assert validate_jacobi(g).ok == d_squared_vanishes(g)


def test_jacobi_iff_d_squared_zero_catalog():
    for g in catalog.standard_fixtures():
        assert validate_jacobi(g).ok and d_squared_vanishes(g)


# -- Campbell-Hausdorff ------------------------------------------------------------


def test_bch_heisenberg_order_two_is_exact():
    h3 = catalog.heisenberg(1)
    x, y = e(3, 0), e(3, 1)
    assert bch_truncated(h3, x, y, 2) == [1, 1, F(1, 2)]
    assert bch_truncated(h3, x, y, 3) == [1, 1, F(1, 2)]


@pytest.mark.parametrize("order", [1, 2, 3])
def test_bch_with_zero(order):
    g = catalog.sl2()
    x = [F(1), F(-2), F(3, 4)]
    assert bch_truncated(g, x, [0, 0, 0], order) == x


def _sympy_bch_sl2(x: list[Fraction], y: list[Fraction]) -> list[Fraction]:
    # log(exp(sX) exp(sY)) through s^3 in the defining representation
    s = sympy.Symbol("s")
    basis = [sympy.Matrix(m) for m in catalog.sl2_matrices()]
    mx = sum((sympy.Rational(c.numerator, c.denominator) * b for c, b in zip(x, basis)), sympy.zeros(2))
    my = sum((sympy.Rational(c.numerator, c.denominator) * b for c, b in zip(y, basis)), sympy.zeros(2))

    def exp3(m):
        return sympy.eye(2) + s * m + (s * m) ** 2 / 2 + (s * m) ** 3 / 6

    z = (exp3(mx) * exp3(my) - sympy.eye(2)).applyfunc(sympy.expand)
    log = z - z * z / 2 + z * z * z / 3
    log = log.applyfunc(lambda t: sympy.expand(t).series(s, 0, 4).removeO())
    result = log.subs(s, 1)
    coords = sympy.symbols("c0:3")
    target = sum((c * b for c, b in zip(coords, basis)), sympy.zeros(2))
    sol = sympy.solve(list(target - result), coords, dict=True)[0]
    return [F(str(sol[c])) for c in coords]


def test_bch_sl2_order_three_against_matrix_series():
    g = catalog.sl2()
    for x, y in ([e(3, 1), e(3, 2)], [[F(1), F(2), F(-1)], [F(0), F(1, 2), F(3)]]):
        assert bch_truncated(g, x, y, 3) == _sympy_bch_sl2(x, y)


def test_bch_rejects_bad_order():
    with pytest.raises(LieAlgebraError):
        bch_truncated(catalog.sl2(), e(3, 0), e(3, 1), 4)


# -- subspaces ------------------------------------------------------------------


def test_subspace_operations():
    a = Subspace(3, [[1, 1, 0]])
    b = Subspace.span_of_indices(3, [2])
    assert (a + b).dim == 2
    assert a.intersection(b).dim == 0
    assert (a + b).contains([2, 2, 5])
    assert not a.contains([1, 0, 0])
    assert Subspace(3, [[1, 0, 0], [2, 0, 0]]).dim == 1
