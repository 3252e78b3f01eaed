"""Contractions: one-parameter basis-change families and their limits at ε = 0."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import linalg
from .core import (
    LieAlgebra,
    LieAlgebraError,
    ScalarForm,
    Subspace,
    act,
    bracket,
    exterior_derivative,
    is_subalgebra,
    unit,
    validate_jacobi,
)
from .laurent import RZERO, ParamMatrix, Poly, RatFunc, as_param_matrix, param_det, param_inverse
from .linalg import Matrix, Vector, ZERO, ONE
from .scalars import Scalar, to_scalar


class ContractionError(LieAlgebraError):
    pass


@dataclass(frozen=True)
class ParamAlgebra:
    """Structure constants that are rational functions of ε, stored for ``i < j``."""

    dim: int
    entries: dict[tuple[int, int], tuple[RatFunc, ...]]
    field: str = "Q"

    def constant(self, i: int, j: int, k: int) -> RatFunc:
        if i == j:
            return RZERO
        if i > j:
            return -self.constant(j, i, k)
        v = self.entries.get((i, j))
        return v[k] if v else RZERO

    def at(self, eps: object) -> LieAlgebra:
        """Specialization at a nonzero value of ε."""
        b = {key: [x.at(eps) for x in v] for key, v in self.entries.items()}
        return LieAlgebra(self.dim, b, field=self.field, check=False)


def _is_diagonal(f: ParamMatrix) -> bool:
    return all(not f[i][j] for i in range(len(f)) for j in range(len(f)) if i != j)


def param_act(g: LieAlgebra, family: Sequence[Sequence[object]]) -> ParamAlgebra:
    """``μ_ε(X, Y) = F⁻¹ μ(F X, F Y)`` with the inverse taken over the rational functions in ε."""
    f = as_param_matrix(family)
    n = g.dim
    if len(f) != n or any(len(r) != n for r in f):
        raise ContractionError("family has the wrong shape")
    if not param_det(f):
        raise ContractionError("family is identically singular")
    entries: dict[tuple[int, int], tuple[RatFunc, ...]] = {}
    brackets = g.nonzero_brackets()
    if _is_diagonal(f):
        d = [f[i][i] for i in range(n)]
        for (i, j), vec in brackets.items():
            entries[(i, j)] = tuple(
                (d[i] * d[j] / d[k]).scale(c) if c else RZERO for k, c in enumerate(vec)
            )
        return ParamAlgebra(n, entries, g.field)
    finv = param_inverse(f)
    for i, j in itertools.combinations(range(n), 2):
        acc = [RZERO] * n
        for (a, b), vec in brackets.items():
            coef = f[a][i] * f[b][j] - f[b][i] * f[a][j]
            if not coef:
                continue
            for k, c in enumerate(vec):
                if c:
                    acc[k] = acc[k] + coef.scale(c)
        if not any(acc):
            continue
        out = []
        for r in range(n):
            s = RZERO
            for k in range(n):
                if finv[r][k] and acc[k]:
                    s = s + finv[r][k] * acc[k]
            out.append(s)
        if any(out):
            entries[(i, j)] = tuple(out)
    return ParamAlgebra(n, entries, g.field)


def limit_at_zero(pa: ParamAlgebra) -> LieAlgebra | None:
    """The contracted law, or None if some constant has a pole at ε = 0."""
    b: dict[tuple[int, int], list[Scalar]] = {}
    for key, vec in pa.entries.items():
        row = []
        for x in vec:
            o = x.order()
            if o is not None and o < 0:
                return None
            row.append(x.value_at_zero())
        if any(row):
            b[key] = row
    g0 = LieAlgebra(pa.dim, b, field=pa.field, check=False)
    if not validate_jacobi(g0).ok:
        raise ContractionError("limit fails the Jacobi identity")
    return g0._mark_checked(True)


def contract(g: LieAlgebra, family: Sequence[Sequence[object]]) -> LieAlgebra | None:
    return limit_at_zero(param_act(g, family))


def eps_diagonal(exponents: Sequence[int], coeffs: Sequence[object] | None = None) -> ParamMatrix:
    """``diag(c_i ε^{n_i})``."""
    n = len(exponents)
    cs = coeffs if coeffs is not None else [1] * n
    return [[RatFunc.eps_power(exponents[i], cs[i]) if i == j else RZERO for j in range(n)] for i in range(n)]


def abelian_family(n: int) -> ParamMatrix:
    """``f_ε = ε Id``; contracts every algebra onto the abelian one."""
    return eps_diagonal([1] * n)


# -- Inönü-Wigner ----------------------------------------------------------------


def adapted_basis(h: Subspace) -> Matrix:
    """Columns: echelon basis of h together with complementary unit vectors, ordered by pivot."""
    n = h.ambient
    cols: dict[int, Vector] = {p: list(v) for p, v in zip(h.pivots, h.basis)}
    for i in h.complement_indices():
        cols[i] = unit(n, i)
    return linalg.transpose([cols[i] for i in range(n)])


def inonu_wigner(g: LieAlgebra, h: Subspace) -> LieAlgebra:
    """Closed-form contraction keeping the subalgebra h, in the basis of :func:`adapted_basis`.

    Brackets inside h are kept, mixed brackets keep only their complement part,
    brackets of two complement vectors vanish.
    """
    if not is_subalgebra(g, h):
        raise ContractionError("h is not a subalgebra")
    n = g.dim
    ga = act(g, adapted_basis(h))
    hset = set(h.pivots)
    b: dict[tuple[int, int], Vector] = {}
    for (i, j), vec in ga.nonzero_brackets().items():
        if i in hset and j in hset:
            b[(i, j)] = list(vec)
        elif i in hset or j in hset:
            row = [ZERO if k in hset else vec[k] for k in range(n)]
            if any(row):
                b[(i, j)] = row
    return LieAlgebra(n, b, field=g.field, name=None, check=False)._mark_checked(True)


def inonu_wigner_family(h: Subspace) -> ParamMatrix:
    """``(1+ε)`` on h and ``ε`` on the complement, in the adapted basis."""
    n = h.ambient
    hset = set(h.pivots)
    one_plus = RatFunc(Poly([1, 1]))
    eps = RatFunc.eps_power(1)
    return [[(one_plus if i in hset else eps) if i == j else RZERO for j in range(n)] for i in range(n)]


# -- Weimar-Woods ----------------------------------------------------------------


def weimar_woods(g: LieAlgebra, exponents: Sequence[int]) -> LieAlgebra | None:
    """Limit of ``f(e_i) = ε^{n_i} e_i``."""
    if len(exponents) != g.dim:
        raise ContractionError("one exponent per basis vector is needed")
    return limit_at_zero(param_act(g, eps_diagonal(list(exponents))))


def weimar_woods_direct(g: LieAlgebra, exponents: Sequence[int]) -> LieAlgebra | None:
    """Same limit read off the scaling ``C_ij^k ε^{n_i+n_j-n_k}`` without rational functions."""
    b: dict[tuple[int, int], Vector] = {}
    for (i, j), vec in g.nonzero_brackets().items():
        row = []
        for k, c in enumerate(vec):
            e = exponents[i] + exponents[j] - exponents[k]
            if c and e < 0:
                return None
            row.append(c if e == 0 else ZERO)
        if any(row):
            b[(i, j)] = row
    return LieAlgebra(g.dim, b, field=g.field, check=False)._mark_checked(g.checked)


def _ww_exponents(g: LieAlgebra, target: LieAlgebra, bound: int) -> tuple[int, ...] | None:
    """Backtracking search for exponents in ``[-bound, bound]`` sending g to target."""
    n = g.dim
    eq: list[tuple[int, int, int]] = []
    pos: list[tuple[int, int, int]] = []
    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            c = g.structure_constant(i, j, k)
            t = target.structure_constant(i, j, k)
            if t and c != t:
                return None
            if t:
                eq.append((i, j, k))
            elif c:
                pos.append((i, j, k))
    by_last: dict[int, list[tuple[str, tuple[int, int, int]]]] = {}
    for kind, lst in (("eq", eq), ("pos", pos)):
        for trip in lst:
            by_last.setdefault(max(trip), []).append((kind, trip))
    values = list(range(-bound, bound + 1))
    ns = [0] * n

    def ok(level: int) -> bool:
        for kind, (i, j, k) in by_last.get(level, ()):
            e = ns[i] + ns[j] - ns[k]
            if (kind == "eq" and e != 0) or (kind == "pos" and e <= 0):
                return False
        return True

    def rec(level: int) -> bool:
        if level == n:
            return True
        for v in values:
            ns[level] = v
            if ok(level) and rec(level + 1):
                return True
        return False

    return tuple(ns) if rec(0) else None


def chain_bases(g: LieAlgebra, coeffs: Sequence[int] = (0, 1, 2)) -> Iterator[Matrix]:
    """Candidate bases ``x, y, [x,y], [x,[x,y]], …`` for small-integer x, y, in lexicographic order."""
    n = g.dim
    vecs = [list(map(Fraction, v)) for v in itertools.product(coeffs, repeat=n) if any(v)]
    for x in vecs:
        for y in vecs:
            cols = [x, y]
            cur = y
            while len(cols) < n:
                cur = bracket(g, x, cur)
                cols.append(cur)
            if linalg.rank(cols) == n:
                yield linalg.transpose(cols)


@dataclass(frozen=True)
class WeimarWoodsWitness:
    base_change: Matrix
    exponents: tuple[int, ...]


def search_weimar_woods(
    g: LieAlgebra,
    target: LieAlgebra,
    base_changes: Iterable[Matrix] | None = None,
    bound: int = 3,
) -> WeimarWoodsWitness | None:
    """First (base change, exponents) in enumeration order whose limit is exactly target."""
    if g.dim != target.dim:
        raise ContractionError("dimensions differ")
    cands = base_changes if base_changes is not None else itertools.chain([linalg.identity(g.dim)], chain_bases(g))
    for bmat in cands:
        gb = act(g, bmat)
        ex = _ww_exponents(gb, target, bound)
        if ex is not None:
            return WeimarWoodsWitness(bmat, ex)
    return None


# -- Saletan ---------------------------------------------------------------------


def saletan_family(gmat: Sequence[Sequence[object]]) -> ParamMatrix:
    """``f_ε = ε Id + (1 - ε) G``."""
    gm = linalg.as_matrix(gmat)
    n = len(gm)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            d = ONE if i == j else ZERO
            # ε d + (1 - ε) G_ij = G_ij + ε (d - G_ij)
            row.append(RatFunc(Poly([gm[i][j], d - gm[i][j]])))
        out.append(row)
    return out


def saletan(g: LieAlgebra, gmat: Sequence[Sequence[object]], max_steps: int | None = None) -> list[LieAlgebra]:
    """Iterated contraction ``g → g1 → g2 → …`` until two consecutive laws coincide."""
    gm = linalg.as_matrix(gmat)
    if len(gm) != g.dim:
        raise ContractionError("G has the wrong shape")
    if linalg.det(gm) != 0:
        raise ContractionError("G must be singular")
    fam = saletan_family(gm)
    steps = max_steps if max_steps is not None else g.dim + 2
    out: list[LieAlgebra] = []
    cur = g
    for step in range(steps):
        nxt = limit_at_zero(param_act(cur, fam))
        if nxt is None:
            raise ContractionError(f"no limit at step {step + 1}")
        if out and nxt == out[-1]:
            return out
        out.append(nxt)
        cur = nxt
    raise ContractionError("sequence did not become stationary")


# -- contact forms ---------------------------------------------------------------


def _one_form(g: LieAlgebra, omega: Sequence[object]) -> ScalarForm:
    if len(omega) != g.dim:
        raise ContractionError("1-form has the wrong length")
    return ScalarForm.from_vector([to_scalar(x) for x in omega])


def check_contact(g: LieAlgebra, omega: Sequence[object]) -> bool:
    """``ω ∧ (dω)^p ≠ 0`` for ``dim g = 2p + 1``."""
    if g.dim % 2 == 0:
        raise ContractionError("contact forms live on odd-dimensional algebras")
    w = _one_form(g, omega)
    p = g.dim // 2
    return bool(w.wedge(exterior_derivative(g, w).power(p)).top_coefficient())


def check_frobenius(g: LieAlgebra, omega: Sequence[object]) -> bool:
    """``(dω)^p ≠ 0`` for ``dim g = 2p``."""
    if g.dim % 2 == 1:
        raise ContractionError("Frobenius forms live on even-dimensional algebras")
    w = _one_form(g, omega)
    if w.is_zero():
        return False
    return bool(exterior_derivative(g, w).power(g.dim // 2).top_coefficient())


def candidate_forms(n: int, coeffs: Sequence[int] = (-1, 0, 1), limit: int = 4096) -> Iterator[Vector]:
    """Dual basis vectors first, then small-integer combinations in lexicographic order."""
    seen = set()
    for i in range(n):
        v = tuple(unit(n, i))
        seen.add(v)
        yield list(v)
    count = 0
    for v in itertools.product([Fraction(c) for c in coeffs], repeat=n):
        if not any(v) or v in seen:
            continue
        count += 1
        if count > limit:
            return
        yield list(v)


@dataclass(frozen=True)
class FormWitness:
    """A 1-form and a basis (columns) whose dual basis puts dω in normal form."""

    omega: tuple[Scalar, ...]
    basis: Matrix

    def adapted(self, g: LieAlgebra) -> LieAlgebra:
        return act(g, self.basis)


def _gram(theta: Matrix, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
    return sum((x[i] * theta[i][j] * y[j] for i in range(len(x)) if x[i] for j in range(len(y)) if theta[i][j]), ZERO)


def symplectic_basis(theta: Matrix, vectors: Sequence[Sequence[Scalar]]) -> list[tuple[Vector, Vector]]:
    """Pairs ``(u_k, v_k)`` with ``θ(u_k, v_k) = 1`` and all other pairings zero on span(vectors)."""
    n = len(theta)
    pool = [list(v) for v in linalg.row_basis(vectors, n)]
    pairs: list[tuple[Vector, Vector]] = []
    while pool:
        found = None
        for a, u in enumerate(pool):
            for b, w in enumerate(pool):
                if a != b and _gram(theta, u, w):
                    found = (a, b)
                    break
            if found:
                break
        if found is None:
            raise ContractionError("form is degenerate on the subspace")
        a, b = found
        u = pool[a]
        s = _gram(theta, u, pool[b])
        v = [x / s for x in pool[b]]
        pairs.append((u, v))
        rest = []
        for c, z in enumerate(pool):
            if c in (a, b):
                continue
            tv, tu = _gram(theta, z, v), _gram(theta, z, u)
            z2 = [zi - tv * ui + tu * vi for zi, ui, vi in zip(z, u, v)]
            if any(z2):
                rest.append(z2)
        pool = [list(r) for r in linalg.row_basis(rest, n)] if rest else []
    return pairs


def _dtheta(g: LieAlgebra, omega: Sequence[Scalar]) -> Matrix:
    return exterior_derivative(g, ScalarForm.from_vector(list(omega))).matrix()


def _is_contact_normal(g: LieAlgebra) -> bool:
    """``dω_1 = ω_2∧ω_3 + …`` in the given basis."""
    n = g.dim
    want = {(2 * k + 1, 2 * k + 2) for k in range(n // 2)}
    for i, j in itertools.combinations(range(n), 2):
        if g.structure_constant(i, j, 0) != (ONE if (i, j) in want else ZERO):
            return False
    return True


def contact_witness(g: LieAlgebra, omega: Sequence[object]) -> FormWitness:
    """Adapted basis for a contact form: the radical of dω then a symplectic basis of ker ω."""
    if not check_contact(g, omega):
        raise ContractionError("not a contact form")
    w = [to_scalar(x) for x in omega]
    n = g.dim
    if w == unit(n, 0) and _is_contact_normal(g):
        return FormWitness(tuple(w), linalg.identity(n))
    theta = _dtheta(g, w)
    rad = linalg.nullspace(theta, n)
    x1 = rad[0]
    s = sum((a * b for a, b in zip(w, x1)), ZERO)
    x1 = [x / s for x in x1]
    kernel = linalg.nullspace([w], n)
    cols = [x1]
    for u, v in symplectic_basis(theta, kernel):
        cols.extend([u, v])
    return FormWitness(tuple(w), linalg.transpose(cols))


def find_contact_form(g: LieAlgebra, limit: int = 4096) -> FormWitness | None:
    if g.dim % 2 == 0:
        raise ContractionError("contact forms live on odd-dimensional algebras")
    for w in candidate_forms(g.dim, limit=limit):
        if check_contact(g, w):
            return contact_witness(g, w)
    return None


def heisenberg_adapted(p: int) -> LieAlgebra:
    """``h_{2p+1}`` with ``[X_{2k}, X_{2k+1}] = X_1`` (1-based), the center first."""
    n = 2 * p + 1
    return LieAlgebra(n, {(2 * k + 1, 2 * k + 2): unit(n, 0) for k in range(p)}, name=f"heisenberg({p})")


def contract_contact_to_heisenberg(g: LieAlgebra, witness: FormWitness) -> LieAlgebra:
    """Limit of ``f_ε(X_1) = ε² X_1``, ``f_ε(X_i) = ε X_i`` in the adapted basis."""
    ga = witness.adapted(g)
    if not _is_contact_normal(ga):
        raise ContractionError("witness basis is not adapted")
    n = g.dim
    g0 = contract(ga, eps_diagonal([2] + [1] * (n - 1)))
    if g0 is None or g0 != heisenberg_adapted(n // 2):
        raise ContractionError("contact contraction did not reach the Heisenberg law")
    return g0


# -- Frobenius forms --------------------------------------------------------------


def _is_frobenius_normal(g: LieAlgebra) -> bool:
    """``dω_1 = ω_1∧ω_2 + ω_3∧ω_4 + …`` in the given basis."""
    n = g.dim
    want = {(2 * k, 2 * k + 1) for k in range(n // 2)}
    for i, j in itertools.combinations(range(n), 2):
        if g.structure_constant(i, j, 0) != (ONE if (i, j) in want else ZERO):
            return False
    return True


def frobenius_witness(g: LieAlgebra, omega: Sequence[object]) -> FormWitness:
    """Adapted basis ``X_1, X_2, X_3, …`` with ``ω = ω_1`` and dω₁ in normal form."""
    if not check_frobenius(g, omega):
        raise ContractionError("not a Frobenius form")
    w = [to_scalar(x) for x in omega]
    n = g.dim
    if w == unit(n, 0) and _is_frobenius_normal(g):
        return FormWitness(tuple(w), linalg.identity(n))
    theta = _dtheta(g, w)
    kernel = linalg.nullspace([w], n)
    # radical of θ restricted to ker ω
    gram = [[_gram(theta, a, b) for b in kernel] for a in kernel]
    rad = linalg.nullspace(gram, len(kernel))[0]
    x2 = [sum((rad[t] * kernel[t][i] for t in range(len(kernel))), ZERO) for i in range(n)]
    k1 = next(i for i in range(n) if w[i])
    x1 = [ONE / w[k1] if i == k1 else ZERO for i in range(n)]
    s = _gram(theta, x1, x2)
    x2 = [x / s for x in x2]
    rest_rows = [[sum((theta[a][b] * x1[a] for a in range(n)), ZERO) for b in range(n)]] + [list(w)]
    rest = linalg.nullspace(rest_rows, n)
    # complement of x2 inside {Y ∈ ker ω : θ(X1, Y) = 0}
    cols = [x1, x2]
    for u, v in symplectic_basis(theta, rest):
        cols.extend([u, v])
    return FormWitness(tuple(w), linalg.transpose(cols))


def find_frobenius_form(g: LieAlgebra, limit: int = 4096) -> FormWitness | None:
    if g.dim % 2 == 1:
        raise ContractionError("Frobenius forms live on even-dimensional algebras")
    for w in candidate_forms(g.dim, limit=limit):
        if check_frobenius(g, w):
            return frobenius_witness(g, w)
    return None


def frobenius_limit_shape(g0: LieAlgebra) -> bool:
    """dω₁ in normal form, ``dω_2 = 0`` and every ``dω_j`` (j ≥ 3) inside ``ω_2 ∧ span``."""
    n = g0.dim
    if not _is_frobenius_normal(g0):
        return False
    for (i, j), vec in g0.nonzero_brackets().items():
        if vec[1]:
            return False
        if any(vec[k] for k in range(2, n)) and i != 1:
            return False
    return True


def frobenius_contract_to_model(g: LieAlgebra, omega: Sequence[object]) -> LieAlgebra:
    """Limit of ``f_ε(X_1) = ε² X_1``, ``f_ε(X_2) = X_2``, ``f_ε(X_i) = ε X_i`` in the adapted basis."""
    wit = frobenius_witness(g, omega)
    ga = wit.adapted(g)
    n = g.dim
    g0 = contract(ga, eps_diagonal([2, 0] + [1] * (n - 2)))
    if g0 is None or not frobenius_limit_shape(g0):
        raise ContractionError("Frobenius contraction did not reach the model shape")
    return g0


@dataclass(frozen=True)
class PsiReport:
    """Checks on ``ψ = ad X_2`` restricted to ``F = span(X_3, …, X_2p)`` of a contracted law."""

    eigenvalues: dict[Fraction, int] | None
    brackets_vanish_off_pairs: bool
    brackets_vanish_inside: bool
    spectrum_symmetric: bool
    multiplicities_match: bool
    jordan_types_match: bool

    @property
    def ok(self) -> bool:
        return self.eigenvalues is not None and all(
            (
                self.brackets_vanish_off_pairs,
                self.brackets_vanish_inside,
                self.spectrum_symmetric,
                self.multiplicities_match,
                self.jordan_types_match,
            )
        )


def _jordan_sizes(m: Matrix, alpha: Fraction) -> tuple[int, ...]:
    n = len(m)
    shifted = [[m[i][j] - (alpha if i == j else 0) for j in range(n)] for i in range(n)]
    ranks = [n]
    p = linalg.identity(n)
    for _ in range(n + 1):
        p = linalg.matmul(p, shifted)
        ranks.append(linalg.rank(p))
    sizes: list[int] = []
    for s in range(n, 0, -1):
        sizes.extend([s] * (ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]))
    return tuple(sizes)


def frobenius_psi_report(g0: LieAlgebra) -> PsiReport:
    """Verify the eigenvalue pairing ``α ↔ -1-α`` of ψ when its spectrum is rational."""
    n = g0.dim
    ad2 = [[g0.structure_constant(1, j, i) for j in range(n)] for i in range(n)]
    psi = [row[2:] for row in ad2[2:]]
    eig = linalg.rational_eigenvalues(psi) if psi else {}
    if eig is None:
        return PsiReport(None, False, False, False, False, False)
    m = len(psi)

    def lift(v: Sequence[Scalar]) -> Vector:
        return [ZERO, ZERO] + list(v)

    spaces = {
        a: [lift(v) for v in linalg.nullspace([[psi[i][j] - (a if i == j else 0) for j in range(m)] for i in range(m)], m)]
        for a in eig
    }

    def commute(xs: list[Vector], ys: list[Vector]) -> bool:
        return all(not any(bracket(g0, x, y)) for x in xs for y in ys)

    off = all(commute(spaces[a], spaces[b]) for a in eig for b in eig if a != -1 - b)
    inside = all(commute(spaces[a], spaces[a]) for a in eig if a != Fraction(-1, 2))
    sym = all((-1 - a) in eig for a in eig)
    mult = sym and all(eig[a] == eig[-1 - a] for a in eig)
    jordan = sym and all(_jordan_sizes(psi, a) == _jordan_sizes(psi, -1 - a) for a in eig)
    return PsiReport(eig, off, inside, sym, mult, jordan)
