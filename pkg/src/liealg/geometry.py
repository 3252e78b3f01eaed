"""Geometric structures on a Lie algebra and the symplectic double extension."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .cohomology import is_derivation
from .core import LieAlgebra, LieAlgebraError, ScalarForm, Subspace, bracket, bracket_span, exterior_derivative, unit, validate_jacobi
from .linalg import Matrix, Vector, ZERO, ONE
from .scalars import I, GaussianRational, Scalar, simplify, to_scalar


class GeometryError(LieAlgebraError):
    pass


def _square(m: Sequence[Sequence[object]], n: int, what: str) -> Matrix:
    mm = linalg.as_matrix(m)
    if len(mm) != n or any(len(r) != n for r in mm):
        raise GeometryError(f"{what} must be {n}x{n}")
    return mm


def _form_matrix(g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]]) -> Matrix:
    if isinstance(omega, ScalarForm):
        if omega.p != 2 or omega.n != g.dim:
            raise GeometryError("expected a 2-form on g")
        return omega.matrix()
    return ScalarForm.from_matrix(_square(omega, g.dim, "2-form")).matrix()


def _as_form(g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]]) -> ScalarForm:
    return omega if isinstance(omega, ScalarForm) else ScalarForm.from_matrix(_form_matrix(g, omega))


def _pair(w: Matrix, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
    return sum((x[i] * w[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if x[i] and y[j]), ZERO)


def _combo(vectors: Sequence[Sequence[Scalar]], coeffs: Sequence[Scalar], n: int) -> Vector:
    return [sum((c * v[k] for c, v in zip(coeffs, vectors) if c), ZERO) for k in range(n)]


# -- symplectic forms ----------------------------------------------------------


@dataclass(frozen=True)
class SymplecticReport:
    closed: bool
    nondegenerate: bool
    exact: bool
    primitive: tuple[Scalar, ...] | None

    @property
    def symplectic(self) -> bool:
        return self.closed and self.nondegenerate


def exact_primitive(g: LieAlgebra, omega: ScalarForm) -> Vector | None:
    """A 1-form α with ``dα = ω`` (free coordinates zero), or None."""
    n = g.dim
    keys = list(itertools.combinations(range(n), 2))
    cols = [exterior_derivative(g, ScalarForm.basis_form(n, k)) for k in range(n)]
    m = [[c.coeffs.get(key, ZERO) for c in cols] for key in keys]
    rhs = [omega.coeffs.get(key, ZERO) for key in keys]
    return linalg.solve(m, rhs, n) if keys else [ZERO] * n


def symplectic_report(g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]]) -> SymplecticReport:
    """``dω = 0`` and ``ω^p ≠ 0`` on an algebra of dimension ``2p``, plus exactness."""
    if g.dim % 2:
        raise GeometryError("symplectic forms need even dimension")
    w = _as_form(g, omega)
    closed = exterior_derivative(g, w).is_zero()
    nondeg = bool(w.power(g.dim // 2).top_coefficient()) if g.dim else True
    alpha = exact_primitive(g, w)
    return SymplecticReport(closed, nondeg, alpha is not None, tuple(alpha) if alpha is not None else None)


def symplectic_check(g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]]) -> bool:
    return symplectic_report(g, omega).symplectic


def exact_symplectic_exists(g: LieAlgebra) -> bool:
    """Whether some ``dα`` is symplectic.

    ``(dα)^p`` is a polynomial of degree p in the coordinates of α, so it is
    nonzero iff it is nonzero somewhere on the grid ``{0..p}^n``.
    """
    n = g.dim
    if n % 2:
        raise GeometryError("symplectic forms need even dimension")
    p = n // 2
    ds = [exterior_derivative(g, ScalarForm.basis_form(n, k)) for k in range(n)]
    for coeffs in itertools.product(range(p + 1), repeat=n):
        da = ScalarForm(n, 2)
        for c, d in zip(coeffs, ds):
            if c:
                da = da + d.scale(c)
        if da.power(p).top_coefficient():
            return True
    return False


# -- pre-Lie products --------------------------------------------------------


@dataclass(frozen=True)
class PreLieProduct:
    """Bilinear product with ``table[i][j]`` the coordinates of ``∇(e_i, e_j)``."""

    dim: int
    table: tuple[tuple[tuple[Scalar, ...], ...], ...]

    @classmethod
    def from_function(cls, n: int, fn) -> "PreLieProduct":
        return cls(n, tuple(tuple(tuple(simplify(x) for x in fn(i, j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_entries(cls, n: int, entries: dict[tuple[int, int], Sequence[object]]) -> "PreLieProduct":
        zero = [ZERO] * n
        return cls.from_function(n, lambda i, j: [to_scalar(x) for x in entries.get((i, j), zero)])

    @classmethod
    def zero(cls, n: int) -> "PreLieProduct":
        return cls.from_entries(n, {})

    def apply(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
        n = self.dim
        out: Vector = [ZERO] * n
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    for k, c in enumerate(self.table[i][j]):
                        if c:
                            out[k] += a * b * c
        return [simplify(v) for v in out]

    def is_zero(self) -> bool:
        return not any(c for row in self.table for vec in row for c in vec)


@dataclass(frozen=True)
class PreLieReport:
    left_symmetric: bool
    commutator_matches: bool

    @property
    def ok(self) -> bool:
        return self.left_symmetric and self.commutator_matches


def left_symmetric(nabla: PreLieProduct) -> bool:
    """``(XY)Z - X(YZ) = (YX)Z - Y(XZ)`` on all basis triples."""
    n = nabla.dim
    e = [unit(n, i) for i in range(n)]
    t = nabla.table
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(n):
                lhs = _sub(nabla.apply(list(t[a][b]), e[c]), nabla.apply(e[a], list(t[b][c])))
                rhs = _sub(nabla.apply(list(t[b][a]), e[c]), nabla.apply(e[b], list(t[a][c])))
                if any(simplify(x - y) for x, y in zip(lhs, rhs)):
                    return False
    return True


def _sub(x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
    return [a - b for a, b in zip(x, y)]


def commutator_law(nabla: PreLieProduct) -> dict[tuple[int, int], Vector]:
    n = nabla.dim
    out = {}
    for i, j in itertools.combinations(range(n), 2):
        v = [simplify(a - b) for a, b in zip(nabla.table[i][j], nabla.table[j][i])]
        if any(v):
            out[(i, j)] = v
    return out


def preLie_report(g: LieAlgebra, nabla: PreLieProduct) -> PreLieReport:
    if nabla.dim != g.dim:
        raise GeometryError("product and algebra dimensions differ")
    comm = commutator_law(nabla)
    matches = all(
        [simplify(x) for x in comm.get((i, j), [ZERO] * g.dim)] == [simplify(x) for x in g.bracket_basis(i, j)]
        for i, j in itertools.combinations(range(g.dim), 2)
    )
    return PreLieReport(left_symmetric(nabla), matches)


def preLie_check(g: LieAlgebra, nabla: PreLieProduct) -> bool:
    return preLie_report(g, nabla).ok


def preLie_from_symplectic(g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]]) -> PreLieProduct:
    """Product defined by ``ω(X⊛Y, Z) = -ω(Y, [X, Z])``."""
    if not symplectic_check(g, omega):
        raise GeometryError("form is not symplectic")
    w = _form_matrix(g, omega)
    n = g.dim
    wt = linalg.transpose(w)
    e = [unit(n, i) for i in range(n)]

    def prod(a: int, b: int) -> Vector:
        rhs = [-_pair(w, e[b], g.bracket_basis(a, c)) for c in range(n)]
        sol = linalg.solve(wt, rhs, n)
        if sol is None:
            raise GeometryError("degenerate form")
        return sol

    return PreLieProduct.from_function(n, prod)


def preLie_from_derivation(g: LieAlgebra, f: Sequence[Sequence[object]], allow_derived: bool = False) -> PreLieProduct:
    """``∇(X, Y) = f⁻¹(μ(f X, Y))`` for an invertible derivation f.

    With ``allow_derived`` a singular f is accepted when it is invertible on
    the derived algebra, where every ``μ(f X, Y)`` lies.
    """
    n = g.dim
    fm = _square(f, n, "derivation")
    if not is_derivation(g, fm):
        raise GeometryError("f is not a derivation")
    cols = linalg.transpose(fm) if n else []
    if n == 0 or linalg.det(fm):
        finv = linalg.inverse(fm) if n else []

        def pre(w: Vector) -> Vector:
            return linalg.matvec(finv, w)

    else:
        if not allow_derived:
            raise GeometryError("derivation is singular")
        whole = Subspace.whole(n)
        d1 = bracket_span(g, whole, whole)
        basis = [list(v) for v in d1.basis]
        images = [linalg.matvec(fm, v) for v in basis]
        if basis and linalg.rank(images) != len(basis):
            raise GeometryError("derivation is not invertible on the derived algebra")

        def pre(w: Vector) -> Vector:
            c = linalg.coordinates(w, images) if any(w) else [ZERO] * len(basis)
            if c is None:
                raise GeometryError("image leaves the derived algebra")
            return _combo(basis, c, n)

    return PreLieProduct.from_function(n, lambda i, j: pre(bracket(g, cols[i], unit(n, j))))


# -- Baxter operators -------------------------------------------------------------

YANG_BAXTER = "yang-baxter"
ROTA_BAXTER = "rota-baxter"


def _operator_residual(g: LieAlgebra, r: Matrix, weight: int) -> bool:
    n = g.dim
    cols = linalg.transpose(r) if n else []
    for i, j in itertools.combinations(range(n), 2):
        lhs = bracket(g, cols[i], cols[j])
        if weight:
            lhs = [a + b for a, b in zip(lhs, g.bracket_basis(i, j))]
        inner = [a + b for a, b in zip(bracket(g, cols[i], unit(n, j)), bracket(g, unit(n, i), cols[j]))]
        rhs = linalg.matvec(r, inner)
        if any(simplify(a - b) for a, b in zip(lhs, rhs)):
            return False
    return True


def yang_baxter_check(g: LieAlgebra, r: Sequence[Sequence[object]]) -> bool:
    """``μ(RX, RY) = R(μ(RX, Y) + μ(X, RY))``."""
    return _operator_residual(g, _square(r, g.dim, "operator"), 0)


def rota_baxter_check(g: LieAlgebra, r: Sequence[Sequence[object]]) -> bool:
    """``μ(RX, RY) + μ(X, Y) = R(μ(RX, Y) + μ(X, RY))``."""
    return _operator_residual(g, _square(r, g.dim, "operator"), 1)


@dataclass(frozen=True)
class OperatorPreLie:
    kind: str
    nabla: PreLieProduct
    law: LieAlgebra
    left_symmetric: bool


def preLie_from_operator(g: LieAlgebra, r: Sequence[Sequence[object]], kind: str) -> OperatorPreLie:
    """``∇(X, Y) = μ(RX, Y)`` and the law ``μ'(X, Y) = ∇(X, Y) - ∇(Y, X)``.

    Left symmetry is reported, not assumed: it holds for Yang-Baxter
    operators but can fail for the Rota-Baxter identity with the extra term.
    """
    n = g.dim
    rm = _square(r, n, "operator")
    if kind == YANG_BAXTER:
        ok = yang_baxter_check(g, rm)
    elif kind == ROTA_BAXTER:
        ok = rota_baxter_check(g, rm)
    else:
        raise GeometryError(f"unknown operator kind {kind!r}")
    if not ok:
        raise GeometryError(f"operator does not satisfy the {kind} identity")
    cols = linalg.transpose(rm) if n else []
    nabla = PreLieProduct.from_function(n, lambda i, j: bracket(g, cols[i], unit(n, j)))
    gaussian = g.field == "Q(i)" or any(isinstance(x, GaussianRational) and x.im for row in rm for x in row)
    law = LieAlgebra(n, commutator_law(nabla), field="Q(i)" if gaussian else "Q", check=False)
    law._mark_checked(validate_jacobi(law).ok)
    return OperatorPreLie(kind, nabla, law, left_symmetric(nabla))


# -- complex structures ------------------------------------------------------


def complex_structure_check(g: LieAlgebra, j: Sequence[Sequence[object]]) -> bool:
    """``J² = -Id`` and ``μ(JX, JY) = μ(X, Y) + J(μ(JX, Y) + μ(X, JY))``."""
    n = g.dim
    if n % 2:
        raise GeometryError("complex structures need even dimension")
    jm = _square(j, n, "J")
    sq = linalg.matmul(jm, jm)
    if any(sq[a][b] != (-ONE if a == b else ZERO) for a in range(n) for b in range(n)):
        return False
    cols = linalg.transpose(jm) if n else []
    for a, b in itertools.combinations(range(n), 2):
        lhs = bracket(g, cols[a], cols[b])
        inner = [x + y for x, y in zip(bracket(g, cols[a], unit(n, b)), bracket(g, unit(n, a), cols[b]))]
        rhs = [x + y for x, y in zip(g.bracket_basis(a, b), linalg.matvec(jm, inner))]
        if lhs != rhs:
            return False
    return True


def standard_complex_structure(n: int) -> Matrix:
    """Block diagonal ``[[0, -1], [1, 0]]`` on consecutive coordinate pairs."""
    if n % 2:
        raise GeometryError("complex structures need even dimension")
    j = linalg.zeros(n, n)
    for k in range(0, n, 2):
        j[k][k + 1] = -ONE
        j[k + 1][k] = ONE
    return j


def complex_structure_candidates(n: int, count: int = 500, seed: int = 0, bound: int = 2) -> list[Matrix]:
    """Deterministic conjugates ``P J₀ P⁻¹`` of the standard structure by seeded integer matrices."""
    j0 = standard_complex_structure(n)
    rng = random.Random(seed)
    out: list[Matrix] = []
    while len(out) < count:
        p = [[to_scalar(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if not linalg.det(p):
            continue
        out.append(linalg.matmul(linalg.matmul(p, j0), linalg.inverse(p)))
    return out


def complex_structure_search(g: LieAlgebra, count: int = 500, seed: int = 0) -> list[Matrix]:
    """Valid structures among the candidates; an empty result is bounded-search evidence only."""
    return [j for j in complex_structure_candidates(g.dim, count, seed) if complex_structure_check(g, j)]


# -- generalized complex structures -------------------------------------------


def double_algebra(g: LieAlgebra) -> LieAlgebra:
    """``g ⊕ g*`` with ``[X, β] = ad*_X β`` and ``(ad*_X β)(Z) = -β([X, Z])``."""
    n = g.dim
    br: dict[tuple[int, int], Vector] = {}
    for (i, j), v in g.nonzero_brackets().items():
        br[(i, j)] = list(v) + [ZERO] * n
    for i in range(n):
        for b in range(n):
            v = [ZERO] * (2 * n)
            for c in range(n):
                v[n + c] = -g.structure_constant(i, c, b)
            if any(v):
                br[(i, n + b)] = v
    return LieAlgebra(2 * n, br, field=g.field, check=False)._mark_checked(g.checked)


def pairing_matrix(n: int) -> Matrix:
    """Gram matrix of ``<X+α, Y+β> = ½(β(X) + α(Y))``."""
    p = linalg.zeros(2 * n, 2 * n)
    half = ONE / 2
    for k in range(n):
        p[k][n + k] = p[n + k][k] = half
    return p


@dataclass(frozen=True)
class GeneralizedReport:
    isometry: bool
    square: bool
    L_isotropic_maximal: bool
    L_involutive: bool
    type: int | None

    def as_dict(self) -> dict[str, object]:
        return {
            "isometry": self.isometry,
            "square": self.square,
            "L_isotropic_maximal": self.L_isotropic_maximal,
            "L_involutive": self.L_involutive,
            "type": self.type,
        }

    @property
    def ok(self) -> bool:
        return self.isometry and self.square and self.L_isotropic_maximal and self.L_involutive


def generalized_complex_check(g: LieAlgebra, j: Sequence[Sequence[object]]) -> GeneralizedReport:
    """Isometry, ``J² = -Id``, and the ``i``-eigenspace L: maximal isotropic, involutive, type."""
    n = g.dim
    m = 2 * n
    jm = _square(j, m, "generalized structure")
    p = pairing_matrix(n)
    iso = linalg.matmul(linalg.matmul(linalg.transpose(jm), p), jm) == p
    sq = linalg.matmul(jm, jm)
    square = all(sq[a][b] == (-ONE if a == b else ZERO) for a in range(m) for b in range(m))
    if not square:
        raise GeometryError("J^2 is not -Id, so the eigenspace L is undefined")
    shifted = [[jm[a][b] - (I if a == b else ZERO) for b in range(m)] for a in range(m)]
    basis = linalg.nullspace(shifted, m)
    isotropic = all(not simplify(_pair(p, u, v)) for u in basis for v in basis)
    d = double_algebra(g)
    span = Subspace(m, basis)
    involutive = all(span.contains([simplify(x) for x in bracket(d, u, v)]) for u, v in itertools.combinations(basis, 2))
    proj = [u[:n] for u in basis]
    kind = n - linalg.rank(proj) if proj else n
    return GeneralizedReport(iso, square, isotropic and len(basis) == n, involutive, kind)


def generalized_from_complex(j: Sequence[Sequence[object]]) -> Matrix:
    """``J_j(X + α) = -j(X) + j*(α)``."""
    jm = linalg.as_matrix(j)
    n = len(jm)
    out = linalg.zeros(2 * n, 2 * n)
    jt = linalg.transpose(jm)
    for a in range(n):
        for b in range(n):
            out[a][b] = -jm[a][b]
            out[n + a][n + b] = jt[a][b]
    return out


def generalized_from_symplectic(g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]]) -> Matrix:
    """``J_ω(X + α) = i(X)ω - ω⁻¹(α)`` with ``(i(X)ω)(Z) = ω(X, Z)``."""
    w = _form_matrix(g, omega)
    n = g.dim
    wt = linalg.transpose(w)
    inv = linalg.inverse(wt)
    out = linalg.zeros(2 * n, 2 * n)
    for a in range(n):
        for b in range(n):
            out[n + a][b] = wt[a][b]
            out[a][n + b] = -inv[a][b]
    return out


# -- symplectic double extension -------------------------------------------------


@dataclass(frozen=True)
class DoubleExtension:
    """``g' = (g ⊕ K e) ⋊ K d`` with basis ``g, e, d`` and form ``ω' = ω + e*∧d*``."""

    algebra: LieAlgebra
    omega: ScalarForm
    z_omega: tuple[Scalar, ...]
    cocycle: Matrix  # central extension cocycle, as a matrix on g
    obstruction: Matrix  # the 2-form that must equal ω(Z, [·, ·])


def omega_adjoint(w: Matrix, d: Matrix) -> Matrix:
    """``D*`` with ``ω(D* X, Y) = ω(X, D Y)``, that is ``D*ᵀ W = W D``."""
    return linalg.transpose(linalg.matmul(linalg.matmul(w, d), linalg.inverse(w)))


def double_extension(
    g: LieAlgebra, omega: ScalarForm | Sequence[Sequence[object]], d: Sequence[Sequence[object]]
) -> DoubleExtension | None:
    """Double extension by a derivation D; None when Ω is not a coboundary."""
    n = g.dim
    if not symplectic_check(g, omega):
        raise GeometryError("form is not symplectic")
    dm = _square(d, n, "derivation")
    if not is_derivation(g, dm):
        raise GeometryError("D is not a derivation")
    w = _form_matrix(g, omega)
    ds = omega_adjoint(w, dm)
    s = [[dm[a][b] + ds[a][b] for b in range(n)] for a in range(n)]
    big = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(linalg.matmul(s, dm), linalg.matmul(ds, s))]
    omega_m = linalg.matmul(linalg.transpose(big), w)
    f = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(linalg.matmul(linalg.transpose(dm), w), linalg.matmul(w, dm))]
    # solve Ω(X, Y) = ω(Z, [X, Y]) on all ordered basis pairs
    rows, rhs = [], []
    for a in range(n):
        for b in range(n):
            br = g.bracket_basis(a, b)
            rows.append([sum((w[z][k] * br[k] for k in range(n)), ZERO) for z in range(n)])
            rhs.append(omega_m[a][b])
    z = linalg.solve(rows, rhs, n) if n else []
    if z is None:
        return None
    size = n + 2
    e_idx, d_idx = n, n + 1
    brackets: dict[tuple[int, int], Vector] = {}
    for a, b in itertools.combinations(range(n), 2):
        v = list(g.bracket_basis(a, b)) + [f[a][b], ZERO]
        if any(v):
            brackets[(a, b)] = v
    for a in range(n):
        # [d, X] = D1(X) = -D(X) - ω(Z, X) e
        v = [-dm[k][a] for k in range(n)] + [-sum((z[k] * w[k][a] for k in range(n)), ZERO), ZERO]
        if any(v):
            brackets[(d_idx, a)] = v
    ext = LieAlgebra(size, brackets, field=g.field, check=False)
    if not validate_jacobi(ext).ok:
        raise GeometryError("double extension failed the Jacobi identity")
    ext._mark_checked(True)
    w_form = _as_form(g, omega)
    coeffs = {k: v for k, v in w_form.coeffs.items()}
    coeffs[(e_idx, d_idx)] = ONE
    return DoubleExtension(ext, ScalarForm(size, 2, coeffs), tuple(z), f, omega_m)
