"""Lie algebras given by structure constants, with subspaces and the exterior calculus on g*.

Indices are 0-based in the Python API (the JSON format is 1-based).  Only
``C[i, j]`` with ``i < j`` is stored; reading ``(j, i)`` negates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .linalg import Matrix, Vector, ZERO, ONE
from .scalars import GaussianRational, Scalar, to_scalar


class LieAlgebraError(ValueError):
    """Malformed structure constants or a failed precondition."""


class JacobiError(LieAlgebraError):
    """Structure constants that violate the Jacobi identity."""

    def __init__(self, report: "ValidationReport") -> None:
        super().__init__(f"Jacobi identity fails at {len(report.residuals)} components")
        self.report = report


def _coerce_field(value: Scalar, field_tag: str) -> Scalar:
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return value.re
        if field_tag != "Q(i)":
            raise LieAlgebraError("Gaussian constant in an algebra over Q")
    return value


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    residuals: tuple[tuple[int, int, int, int, Scalar], ...] = ()


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q or Q(i) given by structure constants.

    ``brackets`` maps ``(i, j)`` to the coordinate vector of ``[e_i, e_j]``.
    Pairs with ``i > j`` are accepted and normalized; a pair given in both
    orders must be antisymmetric.  With ``check=False`` the Jacobi identity is
    not verified and ``checked`` is False (needed for candidate laws that are
    not Lie algebras).
    """

    __slots__ = ("dim", "field", "name", "checked", "_c")

    def __init__(
        self,
        dim: int,
        brackets: Mapping[tuple[int, int], Sequence[object]] | None = None,
        field: str = "Q",
        name: str | None = None,
        check: bool = True,
    ) -> None:
        if dim < 0:
            raise LieAlgebraError("dimension must be non-negative")
        if field not in ("Q", "Q(i)"):
            raise LieAlgebraError(f"unknown field tag {field!r}")
        self.dim = dim
        self.field = field
        self.name = name
        c: dict[tuple[int, int], tuple[Scalar, ...]] = {}
        for (i, j), vec in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise LieAlgebraError(f"bracket index ({i}, {j}) out of range")
            if len(vec) != dim:
                raise LieAlgebraError(f"bracket ({i}, {j}) has length {len(vec)}, expected {dim}")
            v = tuple(_coerce_field(to_scalar(x), field) for x in vec)
            if i == j:
                if any(v):
                    raise LieAlgebraError(f"[e{i}, e{i}] must vanish")
                continue
            if i > j:
                i, j = j, i
                v = tuple(-x for x in v)
            if (i, j) in c and c[(i, j)] != v:
                raise LieAlgebraError(f"bracket ({i}, {j}) is not antisymmetric")
            c[(i, j)] = v
        self._c = {key: v for key, v in c.items() if any(v)}
        self.checked = False
        if check:
            report = validate_jacobi(self)
            if not report.ok:
                raise JacobiError(report)
            self.checked = True

    # -- access ---------------------------------------------------------
    def structure_constant(self, i: int, j: int, k: int) -> Scalar:
        if i == j:
            return ZERO
        if i < j:
            v = self._c.get((i, j))
            return v[k] if v else ZERO
        v = self._c.get((j, i))
        return -v[k] if v else ZERO

    def bracket_basis(self, i: int, j: int) -> Vector:
        """Coordinates of ``[e_i, e_j]``."""
        if i == j:
            return [ZERO] * self.dim
        if i < j:
            v = self._c.get((i, j))
            return list(v) if v else [ZERO] * self.dim
        v = self._c.get((j, i))
        return [-x for x in v] if v else [ZERO] * self.dim

    def nonzero_brackets(self) -> dict[tuple[int, int], tuple[Scalar, ...]]:
        """The stored ``i < j`` brackets that are nonzero."""
        return dict(self._c)

    def is_abelian(self) -> bool:
        return not self._c

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self._c == other._c

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self._c.items()))))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<LieAlgebra{label} dim={self.dim} field={self.field} nonzero_brackets={len(self._c)}>"

    def _mark_checked(self, flag: bool) -> "LieAlgebra":
        self.checked = flag
        return self

    def renamed(self, name: str | None) -> "LieAlgebra":
        out = LieAlgebra.__new__(LieAlgebra)
        out.dim, out.field, out.name, out.checked, out._c = self.dim, self.field, name, self.checked, self._c
        return out


def validate_jacobi(g: LieAlgebra) -> ValidationReport:
    """Evaluate every Jacobi polynomial ``J(i<j<k)_s`` exactly."""
    n = g.dim
    residuals = []
    for i, j, k in itertools.combinations(range(n), 3):
        total = [ZERO] * n
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = g.bracket_basis(a, b)
            for l, coef in enumerate(inner):
                if coef:
                    outer = g.bracket_basis(l, c)
                    for s, x in enumerate(outer):
                        if x:
                            total[s] += coef * x
        for s, val in enumerate(total):
            if val:
                residuals.append((i, j, k, s, val))
    return ValidationReport(ok=not residuals, residuals=tuple(residuals))


def _check_vector(g: LieAlgebra, v: Sequence[object]) -> Vector:
    if len(v) != g.dim:
        raise LieAlgebraError(f"vector of length {len(v)} in an algebra of dimension {g.dim}")
    return [to_scalar(x) for x in v]


def bracket(g: LieAlgebra, x: Sequence[object], y: Sequence[object]) -> Vector:
    """Bilinear expansion of ``[x, y]`` through the structure constants."""
    xv = _check_vector(g, x)
    yv = _check_vector(g, y)
    out = [ZERO] * g.dim
    for (i, j), vec in g._c.items():
        coef = xv[i] * yv[j] - xv[j] * yv[i]
        if coef:
            for k, c in enumerate(vec):
                if c:
                    out[k] += coef * c
    return out


def ad_matrix(g: LieAlgebra, x: Sequence[object]) -> Matrix:
    """Matrix of ``ad x`` (column j is ``[x, e_j]``)."""
    n = g.dim
    cols = [bracket(g, x, unit(n, j)) for j in range(n)]
    return linalg.transpose(cols) if n else []


def ad_basis(g: LieAlgebra, i: int) -> Matrix:
    n = g.dim
    cols = [g.bracket_basis(i, j) for j in range(n)]
    return linalg.transpose(cols) if n else []


def unit(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return v


def act(g: LieAlgebra, f: Sequence[Sequence[object]]) -> LieAlgebra:
    """Transported law ``mu_f(X, Y) = f^{-1}(mu(f X, f Y))``."""
    fm = linalg.as_matrix(f)
    n = g.dim
    if len(fm) != n or any(len(r) != n for r in fm):
        raise LieAlgebraError("change of basis has the wrong shape")
    if not linalg.det(fm):
        raise LieAlgebraError("change of basis is singular")
    finv = linalg.inverse(fm)
    cols = linalg.transpose(fm)
    brackets = {}
    for i, j in itertools.combinations(range(n), 2):
        v = linalg.matvec(finv, bracket(g, cols[i], cols[j]))
        if any(v):
            brackets[(i, j)] = v
    field_tag = "Q(i)" if g.field == "Q(i)" or _any_gaussian(fm) else "Q"
    return LieAlgebra(n, brackets, field=field_tag, name=None, check=False)._mark_checked(g.checked)


def _any_gaussian(m: Matrix) -> bool:
    return any(isinstance(x, GaussianRational) and x.im != 0 for row in m for x in row)


def direct_sum(g1: LieAlgebra, g2: LieAlgebra) -> LieAlgebra:
    if g1.field != g2.field:
        raise LieAlgebraError("direct sum of algebras over different fields")
    n1, n2 = g1.dim, g2.dim
    n = n1 + n2
    brackets: dict[tuple[int, int], Vector] = {}
    for (i, j), v in g1._c.items():
        brackets[(i, j)] = list(v) + [ZERO] * n2
    for (i, j), v in g2._c.items():
        brackets[(i + n1, j + n1)] = [ZERO] * n1 + list(v)
    return LieAlgebra(n, brackets, field=g1.field, check=False)._mark_checked(g1.checked and g2.checked)


# -- subspaces -------------------------------------------------------------


class Subspace:
    """Subspace of K^n stored by its reduced row echelon basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, vectors: Iterable[Sequence[object]] = ()) -> None:
        self.ambient = ambient
        vecs = []
        for v in vectors:
            if len(v) != ambient:
                raise LieAlgebraError(f"vector of length {len(v)} in ambient dimension {ambient}")
            vecs.append([to_scalar(x) for x in v])
        vecs = [v for v in vecs if any(v)]
        if vecs:
            self.basis, self.pivots = linalg.rref(vecs, ambient)
        else:
            self.basis, self.pivots = [], []

    @classmethod
    def span_of_indices(cls, ambient: int, indices: Iterable[int]) -> "Subspace":
        return cls(ambient, [unit(ambient, i) for i in indices])

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls.span_of_indices(ambient, range(ambient))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Scalar]) -> bool:
        return linalg.in_span(v, self.basis, self.pivots)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            if w[p]:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        return w

    def complement_indices(self) -> list[int]:
        return linalg.complement_indices(self.pivots, self.ambient)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        a, b = self.basis, other.basis
        if not a or not b:
            return Subspace(self.ambient)
        # solve sum x_i a_i - sum y_j b_j = 0
        cols = [list(v) for v in a] + [[-x for x in v] for v in b]
        kernel = linalg.nullspace(linalg.transpose(cols), len(cols))
        vecs = []
        for k in kernel:
            vec = [ZERO] * self.ambient
            for coef, v in zip(k[: len(a)], a):
                if coef:
                    vec = [s + coef * t for s, t in zip(vec, v)]
            vecs.append(vec)
        return Subspace(self.ambient, vecs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient, tuple(tuple(r) for r in self.basis)))

    def __repr__(self) -> str:
        return f"<Subspace dim={self.dim} of {self.ambient}>"


def bracket_span(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    """Span of ``[x, y]`` for x in a, y in b."""
    vecs = [bracket(g, x, y) for x in a.basis for y in b.basis]
    return Subspace(g.dim, vecs)


def is_subalgebra(g: LieAlgebra, s: Subspace) -> bool:
    _same_ambient(g, s)
    return all(
        s.contains(bracket(g, x, y))
        for idx, x in enumerate(s.basis)
        for y in s.basis[idx + 1 :]
    )


def is_ideal(g: LieAlgebra, s: Subspace) -> bool:
    _same_ambient(g, s)
    return all(s.contains(bracket(g, unit(g.dim, i), y)) for i in range(g.dim) for y in s.basis)


def _same_ambient(g: LieAlgebra, s: Subspace) -> None:
    if s.ambient != g.dim:
        raise LieAlgebraError("subspace lives in a space of the wrong dimension")


def quotient(g: LieAlgebra, ideal: Subspace) -> LieAlgebra:
    """Quotient ``g / ideal`` on the classes of the non-pivot basis vectors."""
    if not is_ideal(g, ideal):
        raise LieAlgebraError("quotient by a subspace that is not an ideal")
    comp = ideal.complement_indices()
    m = len(comp)
    brackets = {}
    for a, b in itertools.combinations(range(m), 2):
        w = ideal.reduce(g.bracket_basis(comp[a], comp[b]))
        v = [w[c] for c in comp]
        if any(v):
            brackets[(a, b)] = v
    return LieAlgebra(m, brackets, field=g.field, check=False)._mark_checked(g.checked)


def quotient_projection(g: LieAlgebra, ideal: Subspace, v: Sequence[Scalar]) -> Vector:
    """Coordinates of the class of ``v`` in the basis used by :func:`quotient`."""
    w = ideal.reduce(v)
    return [w[c] for c in ideal.complement_indices()]


# -- exterior algebra on g* ------------------------------------------------


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation (0 if an index repeats) and the sorted tuple."""
    arr = list(idx)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(arr, arr[1:]):
        if a == b:
            return 0, tuple(arr)
    return sign, tuple(arr)


sort_sign = _sort_sign


class ScalarForm:
    """Element of the exterior power ``Λ^p g*`` with coefficients on ``ω_{i1}∧…∧ω_{ip}``."""

    __slots__ = ("n", "p", "coeffs")

    def __init__(self, n: int, p: int, coeffs: Mapping[Sequence[int], object] | None = None) -> None:
        self.n = n
        self.p = p
        out: dict[tuple[int, ...], Scalar] = {}
        for idx, val in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != p or any(not 0 <= i < n for i in idx):
                raise LieAlgebraError(f"form index {idx} invalid for degree {p} in dimension {n}")
            sign, key = _sort_sign(idx)
            v = to_scalar(val)
            if sign == 0 or not v:
                continue
            out[key] = out.get(key, ZERO) + sign * v
        self.coeffs = {k: v for k, v in out.items() if v}

    @classmethod
    def basis_form(cls, n: int, i: int) -> "ScalarForm":
        return cls(n, 1, {(i,): 1})

    @classmethod
    def from_vector(cls, vec: Sequence[object]) -> "ScalarForm":
        """1-form with the given coefficients on ``ω_0, …, ω_{n-1}``."""
        return cls(len(vec), 1, {(i,): x for i, x in enumerate(vec) if to_scalar(x)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "ScalarForm") -> "ScalarForm":
        self._compatible(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return ScalarForm(self.n, self.p, out)

    def __sub__(self, other: "ScalarForm") -> "ScalarForm":
        return self + other.scale(-1)

    def scale(self, c: object) -> "ScalarForm":
        c = to_scalar(c)
        return ScalarForm(self.n, self.p, {k: c * v for k, v in self.coeffs.items()})

    def wedge(self, other: "ScalarForm") -> "ScalarForm":
        if self.n != other.n:
            raise LieAlgebraError("wedge of forms on different spaces")
        out: dict[tuple[int, ...], Scalar] = {}
        for i1, v1 in self.coeffs.items():
            for i2, v2 in other.coeffs.items():
                sign, key = _sort_sign(i1 + i2)
                if sign:
                    out[key] = out.get(key, ZERO) + sign * v1 * v2
        return ScalarForm(self.n, self.p + other.p, out)

    def power(self, k: int) -> "ScalarForm":
        out = ScalarForm(self.n, 0, {(): 1})
        for _ in range(k):
            out = out.wedge(self)
        return out

    def evaluate(self, vectors: Sequence[Sequence[Scalar]]) -> Scalar:
        """Value on ``p`` vectors (determinant expansion over each index set)."""
        if len(vectors) != self.p:
            raise LieAlgebraError("wrong number of arguments for a form")
        total: Scalar = ZERO
        for idx, c in self.coeffs.items():
            sub = [[v[i] for i in idx] for v in vectors]
            total += c * linalg.det(sub)
        return total

    def matrix(self) -> Matrix:
        """Antisymmetric Gram matrix of a 2-form."""
        if self.p != 2:
            raise LieAlgebraError("matrix() needs a 2-form")
        m = linalg.zeros(self.n, self.n)
        for (i, j), v in self.coeffs.items():
            m[i][j] += v
            m[j][i] -= v
        return m

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence[object]]) -> "ScalarForm":
        n = len(m)
        mm = linalg.as_matrix(m)
        for i in range(n):
            for j in range(n):
                if mm[i][j] != -mm[j][i]:
                    raise LieAlgebraError("2-form matrix must be antisymmetric")
        return cls(n, 2, {(i, j): mm[i][j] for i in range(n) for j in range(i + 1, n) if mm[i][j]})

    def top_coefficient(self) -> Scalar:
        """Coefficient on ``ω_0∧…∧ω_{n-1}`` (requires p == n)."""
        return self.coeffs.get(tuple(range(self.n)), ZERO)

    def _compatible(self, other: "ScalarForm") -> None:
        if self.n != other.n or self.p != other.p:
            raise LieAlgebraError("forms of different shape")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarForm):
            return NotImplemented
        return self.n == other.n and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.p, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        terms = " + ".join(f"{v}*w{'^w'.join(map(str, k))}" for k, v in sorted(self.coeffs.items()))
        return f"<ScalarForm p={self.p}: {terms or '0'}>"


def exterior_derivative(g: LieAlgebra, omega: ScalarForm) -> ScalarForm:
    """Maurer-Cartan differential with ``dω(X, Y) = ω([X, Y])`` on 1-forms.

    So ``dω_k = Σ_{i<j} C_ij^k ω_i∧ω_j``, extended as an antiderivation.
    """
    if omega.n != g.dim:
        raise LieAlgebraError("form and algebra dimensions differ")
    if omega.p >= g.dim and omega.coeffs:
        return ScalarForm(g.dim, omega.p + 1)
    d1: dict[int, list[tuple[int, int, Scalar]]] = {}
    for (i, j), vec in g._c.items():
        for k, c in enumerate(vec):
            if c:
                d1.setdefault(k, []).append((i, j, c))
    out: dict[tuple[int, ...], Scalar] = {}
    for idx, coef in omega.coeffs.items():
        for r, k in enumerate(idx):
            for i, j, c in d1.get(k, ()):
                sign, key = _sort_sign(idx[:r] + (i, j) + idx[r + 1 :])
                if sign:
                    val = coef * c * (sign if r % 2 == 0 else -sign)
                    out[key] = out.get(key, ZERO) + val
    return ScalarForm(g.dim, omega.p + 1, out)


def d_squared_vanishes(g: LieAlgebra) -> bool:
    """Whether ``d∘d`` kills every basis 1-form."""
    return all(
        exterior_derivative(g, exterior_derivative(g, ScalarForm.basis_form(g.dim, k))).is_zero()
        for k in range(g.dim)
    )


def bch_truncated(g: LieAlgebra, x: Sequence[object], y: Sequence[object], order: int = 3) -> Vector:
    """Campbell-Hausdorff series of ``log(exp X exp Y)`` through the given order."""
    if order not in (1, 2, 3):
        raise LieAlgebraError("order must be 1, 2 or 3")
    xv = _check_vector(g, x)
    yv = _check_vector(g, y)
    out = [a + b for a, b in zip(xv, yv)]
    if order >= 2:
        xy = bracket(g, xv, yv)
        out = [a + Fraction(1, 2) * b for a, b in zip(out, xy)]
        if order == 3:
            t1 = bracket(g, xy, yv)
            t2 = bracket(g, xy, xv)
            out = [a + Fraction(1, 12) * (b - c) for a, b, c in zip(out, t1, t2)]
    return out
