from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from liealg import catalog, linalg
from liealg.core import Subspace, validate_jacobi
from liealg.homogeneous import (
    INVARIANT,
    MCOMPONENTS,
    PRINTED,
    Grading,
    HomogeneousError,
    MetricSpec,
    adapted_metric,
    build_so_grading,
    classify_metric,
    component_gram,
    eigenvalues_of,
    grading_check,
    grading_dims,
    invariance_check,
    metric_eigenvalues,
    metric_signature,
    naturally_reductive_check,
    reductive_check,
    so_algebra,
    symmetric_check,
)

F = Fraction
S = Subspace.span_of_indices
SO4 = build_so_grading(1)
SO8 = build_so_grading(2)
GRADINGS = {1: SO4, 2: SO8}

nonzero = st.fractions(min_value=-6, max_value=6, max_denominator=4).filter(bool)


@st.composite
def specs(draw, k: int):
    lam = {g: (draw(nonzero), draw(st.fractions(min_value=-6, max_value=6, max_denominator=4))) for g in MCOMPONENTS}
    spec = MetricSpec(k, lam)
    for g in MCOMPONENTS:
        for mu, mult in eigenvalues_of(spec, g):
            assume(not (mult and mu == 0))
    return spec


def _m_and_h(gr):
    comps = gr.grading
    h = comps.component("e")
    m = Subspace(gr.algebra.dim, [v for g in MCOMPONENTS for v in comps.component(g).basis])
    return h, m


# -- reductive and symmetric pairs -----------------------------------------------------


def test_so3_symmetric_pair():
    g = catalog.so3()
    assert reductive_check(g, S(3, [2]), S(3, [0, 1]))
    assert symmetric_check(g, S(3, [2]), S(3, [0, 1]))


def test_whole_algebra_is_reductive():
    for g in (catalog.sl2(), catalog.aff2(), catalog.heisenberg(1)):
        assert reductive_check(g, Subspace.whole(g.dim), Subspace(g.dim))


def test_non_reductive_pair():
    # h = span(e1) in aff2 moves m = span(e2) into itself, but h = span(e2) does not preserve span(e1)
    aff = catalog.aff2()
    assert reductive_check(aff, S(2, [0]), S(2, [1]))
    assert not reductive_check(aff, S(2, [1]), S(2, [0]))


def test_complementarity_is_required():
    with pytest.raises(HomogeneousError):
        reductive_check(catalog.so3(), S(3, [2]), S(3, [2]))


def test_so4_grading_pair_is_reductive_not_symmetric():
    h, m = _m_and_h(SO4)
    g = SO4.algebra
    assert reductive_check(g, h, m)
    assert not symmetric_check(g, h, m)


def _gram_on_m(metric, m):
    # express the metric in the echelon basis of m
    coords = [linalg.coordinates(list(v), metric.basis) for v in m.basis]
    c = linalg.transpose(coords)
    return linalg.matmul(linalg.matmul(linalg.transpose(c), metric.gram), c)


def test_naturally_reductive_metrics_on_so4():
    h, m = _m_and_h(SO4)
    g = SO4.algebra
    uniform = adapted_metric(SO4, MetricSpec.uniform(1, 2, 1))
    assert naturally_reductive_check(g, h, m, _gram_on_m(uniform, m))
    skew = adapted_metric(SO4, MetricSpec(1, {"a": (1, 1), "b": (2, 2), "c": (3, 3)}))
    assert not naturally_reductive_check(g, h, m, _gram_on_m(skew, m))


def test_naturally_reductive_needs_a_nondegenerate_form():
    g = catalog.so3()
    with pytest.raises(HomogeneousError):
        naturally_reductive_check(g, S(3, [2]), S(3, [0, 1]), [[1, 0], [0, 0]])


# -- so(4k) and its Z2 x Z2 grading ------------------------------------------------------


@pytest.mark.parametrize("size", [3, 4, 5])
def test_so_algebra_matches_catalog(size):
    g = so_algebra(size)
    assert validate_jacobi(g).ok
    assert g.nonzero_brackets() == catalog.so(size).nonzero_brackets()


@pytest.mark.parametrize("k", [1, 2])
def test_so_grading_dimensions(k):
    gr = GRADINGS[k]
    dims = gr.grading.dims()
    assert dims == grading_dims(k)
    assert sum(dims.values()) == 2 * k * (4 * k - 1) == gr.algebra.dim
    assert grading_check(gr.algebra, gr.grading)


@pytest.mark.parametrize("k", [1, 2])
def test_involutions_commute_and_compose(k):
    t = GRADINGS[k].involutions
    assert linalg.matmul(t["a"], t["b"]) == t["c"]


def test_identity_component_is_symplectic_type():
    # g_e has the dimension of sp(k) and is semisimple: its Killing form is nondegenerate
    from liealg.invariants import killing_form

    gr = SO8
    e = gr.grading.component("e")
    sub = _restrict(gr.algebra, e)
    assert sub.dim == 10 and linalg.det(killing_form(sub)) != 0


def _restrict(g, sp):
    from liealg.core import LieAlgebra, bracket

    basis = [list(v) for v in sp.basis]
    br = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            c = linalg.coordinates(bracket(g, basis[i], basis[j]), basis)
            assert c is not None
            if any(c):
                br[(i, j)] = c
    return LieAlgebra(len(basis), br)


def test_trivial_grading_passes():
    g = catalog.sl2()
    assert grading_check(g, Grading(2, {(0, 0): Subspace.whole(3)}))


def test_perturbed_grading_fails():
    comps = dict(SO4.grading.components)
    a, b = comps[(1, 0)], comps[(0, 1)]
    moved = a.basis[0]
    n = SO4.algebra.dim
    comps[(1, 0)] = Subspace(n, [])
    comps[(0, 1)] = Subspace(n, [list(v) for v in b.basis] + [list(moved)])
    assert not grading_check(SO4.algebra, Grading(2, comps))


def test_grading_must_decompose():
    with pytest.raises(HomogeneousError):
        grading_check(catalog.sl2(), Grading(2, {(0, 0): S(3, [0, 1])}))


def test_bad_k_rejected():
    with pytest.raises(HomogeneousError):
        build_so_grading(0)


# -- adapted metrics ---------------------------------------------------------------------


def test_so4_metric_is_diagonal():
    m = adapted_metric(SO4, MetricSpec(1, {"a": (1, 1), "b": (2, 2), "c": (3, 3)}))
    assert m.gram == [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    assert invariance_check(m)


def test_zero_parameters_rejected():
    with pytest.raises(HomogeneousError):
        adapted_metric(SO4, MetricSpec.uniform(1, 0, 0))
    with pytest.raises(HomogeneousError):
        adapted_metric(SO8, MetricSpec.uniform(1, 2, 1))  # k mismatch


def test_killing_shaped_metric_is_invariant_on_so8():
    assert invariance_check(adapted_metric(SO8, MetricSpec.uniform(2, 2, 1)))


def test_printed_cross_term_breaks_invariance_off_the_killing_line():
    assert not invariance_check(adapted_metric(SO8, MetricSpec.uniform(2, 3, 1), PRINTED))
    assert invariance_check(adapted_metric(SO8, MetricSpec.uniform(2, 3, 1), INVARIANT))


@settings(max_examples=15)
@given(specs(2))
def test_invariant_convention_is_invariant_for_every_spec(spec):
    try:
        metric = adapted_metric(SO8, spec, INVARIANT)
    except HomogeneousError:
        assume(False)
    assert invariance_check(metric)


@settings(max_examples=30)
@given(specs(1))
def test_so4_metrics_are_always_invariant(spec):
    assert invariance_check(adapted_metric(SO4, spec))


# -- eigenvalues and signatures -----------------------------------------------------------


def test_eigenvalue_multiplicities():
    ev = metric_eigenvalues(MetricSpec.uniform(2, 4, 1))
    assert ev["a"] == [(4, 4), (F(3, 2), 1), (F(1, 2), 1)]


@pytest.mark.parametrize("k", [2, 3])
def test_eigenvalues_match_sympy(k):
    spec = MetricSpec.uniform(k, F(3), F(-1, 2))
    r = k
    kinds = ["diag"] * r + ["plain"] * (spec.dim("a") - r)
    gram = component_gram(F(3), F(-1, 2), kinds)
    sym = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in gram]).eigenvals()
    expected = {}
    for mu, mult in eigenvalues_of(spec, "a"):
        if mult:
            expected[sympy.Rational(mu.numerator, mu.denominator)] = expected.get(sympy.Rational(mu.numerator, mu.denominator), 0) + mult
    assert sym == expected


def test_eigenvalues_on_the_assembled_so8_metric():
    spec = MetricSpec(2, {"a": (F(3), F(1)), "b": (F(1), F(2)), "c": (F(-2), F(1, 3))})
    metric = adapted_metric(SO8, spec)
    for gamma in MCOMPONENTS:
        block = sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in metric.blocks[gamma]])
        got = block.eigenvals()
        want = {}
        for mu, mult in eigenvalues_of(spec, gamma):
            if mult:
                want[sympy.Rational(str(mu))] = want.get(sympy.Rational(str(mu)), 0) + mult
        assert got == want


@settings(max_examples=100)
@given(st.sampled_from([1, 2]).flatmap(specs))
def test_signature_formula_matches_congruence(spec):
    assert metric_signature(spec, "formula") == metric_signature(spec, "congruence")


@settings(max_examples=50)
@given(st.integers(1, 4), nonzero)
def test_killing_line_merges_eigenvalues(k, l2):
    ev = eigenvalues_of(MetricSpec.uniform(k, 2 * l2, l2), "a")
    assert ev[1][0] == ev[2][0]


# r = k = 2, dim = 6; thresholds: -λ₁/2 and λ₁/6
SIX_ROWS = [
    ((F(6), F(2)), (6, 0)),
    ((F(6), F(0)), (5, 1)),
    ((F(6), F(-4)), (4, 2)),
    ((F(-6), F(4)), (2, 4)),
    ((F(-6), F(0)), (1, 5)),
    ((F(-6), F(-2)), (0, 6)),
]


@pytest.mark.parametrize("lams,sig", SIX_ROWS)
def test_six_row_signature_table(lams, sig):
    spec = MetricSpec(2, {g: lams for g in MCOMPONENTS})
    for route in ("formula", "congruence"):
        assert metric_signature(spec, route).components["a"] == sig


def test_degenerate_spec_rejected():
    with pytest.raises(HomogeneousError):
        metric_signature(MetricSpec.uniform(2, 6, 1))  # μ₃ = 0 on the threshold λ₁/6


def test_so4_boundary_is_not_degenerate():
    # r = 1: μ₂ has multiplicity zero, so λ₂ = -λ₁/2 is an honest parameter
    spec = MetricSpec.uniform(1, 2, -1)
    assert metric_signature(spec, "formula") == metric_signature(spec, "congruence")


# -- classification -----------------------------------------------------------------------


def test_killing_parameters_are_riemannian_and_natural():
    c = classify_metric(MetricSpec.uniform(2, 2, 1))
    assert c.riemannian and c.naturally_reductive and not c.lorentzian


def test_one_middle_band_is_lorentzian():
    spec = MetricSpec(2, {"a": (F(6), F(0)), "b": (F(2), F(1)), "c": (F(2), F(1))})
    c = classify_metric(spec)
    assert c.lorentzian and c.lorentz_pattern and not c.riemannian and not c.naturally_reductive


def test_two_middle_bands_are_neither():
    spec = MetricSpec(2, {"a": (F(6), F(0)), "b": (F(6), F(0)), "c": (F(2), F(1))})
    c = classify_metric(spec)
    assert not c.lorentzian and not c.riemannian and not c.lorentz_pattern


@settings(max_examples=100)
@given(st.sampled_from([1, 2, 3]).flatmap(specs))
def test_riemannian_iff_positive_definite(spec):
    c = classify_metric(spec)
    positive = all(mu > 0 for g in MCOMPONENTS for mu, mult in eigenvalues_of(spec, g) if mult)
    assert c.riemannian == positive
    if c.lorentz_pattern:
        assert c.lorentzian
