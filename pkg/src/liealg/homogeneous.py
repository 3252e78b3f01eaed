"""Reductive pairs and the Z₂×Z₂ grading of so(4k) with its adapted metrics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .core import LieAlgebra, LieAlgebraError, Subspace, bracket, bracket_span, unit
from .linalg import Matrix, Vector, ZERO, ONE
from .scalars import Scalar, to_scalar


class HomogeneousError(LieAlgebraError):
    pass


def _check_complementary(g: LieAlgebra, h: Subspace, m: Subspace) -> None:
    if h.ambient != g.dim or m.ambient != g.dim:
        raise HomogeneousError("subspaces live in the wrong dimension")
    if h.dim + m.dim != g.dim or (h + m).dim != g.dim:
        raise HomogeneousError("h and m are not complementary")


def reductive_check(g: LieAlgebra, h: Subspace, m: Subspace) -> bool:
    """``h`` a subalgebra with ``[h, m] ⊂ m``."""
    _check_complementary(g, h, m)
    return h.contains_subspace(bracket_span(g, h, h)) and m.contains_subspace(bracket_span(g, h, m))


def symmetric_check(g: LieAlgebra, h: Subspace, m: Subspace) -> bool:
    """Reductive and ``[m, m] ⊂ h``."""
    return reductive_check(g, h, m) and h.contains_subspace(bracket_span(g, m, m))


def _m_component(h: Subspace, m: Subspace, v: Sequence[Scalar]) -> Vector:
    """Coordinates of the ``m``-part of v in the basis of m."""
    basis = [list(b) for b in m.basis] + [list(b) for b in h.basis]
    c = linalg.coordinates(list(v), basis)
    if c is None:
        raise HomogeneousError("vector outside h + m")
    return c[: m.dim]


def naturally_reductive_check(g: LieAlgebra, h: Subspace, m: Subspace, b: Sequence[Sequence[object]]) -> bool:
    """``B([Z,X]_m, Y) + B(X, [Z,Y]_m) = 0`` for X, Y, Z in m; B is a Gram matrix on the basis of m."""
    if not reductive_check(g, h, m):
        return False
    gram = linalg.as_matrix(b)
    k = m.dim
    if len(gram) != k or any(len(r) != k for r in gram):
        raise HomogeneousError("B must be a Gram matrix on the basis of m")
    if gram != linalg.transpose(gram) or (k and not linalg.det(gram)):
        raise HomogeneousError("B must be symmetric and nondegenerate")
    mb = [list(v) for v in m.basis]
    for z in mb:
        a = linalg.transpose([_m_component(h, m, bracket(g, z, x)) for x in mb]) if k else []
        s = linalg.matmul(linalg.transpose(a), gram)
        t = linalg.matmul(gram, a)
        if any(s[i][j] + t[i][j] for i in range(k) for j in range(k)):
            return False
    return True


# -- gradings -----------------------------------------------------------------

Label = tuple[int, ...]


@dataclass(frozen=True)
class Grading:
    """Decomposition indexed by ``Z₂^r`` (labels are bit tuples, the product is addition mod 2)."""

    rank: int
    components: Mapping[Label, Subspace]
    names: Mapping[Label, str] = field(default_factory=dict)

    def component(self, name: str) -> Subspace:
        for lab, nm in self.names.items():
            if nm == name:
                return self.components[lab]
        raise KeyError(name)

    def dims(self) -> dict[str, int]:
        return {self.names.get(lab, str(lab)): sp.dim for lab, sp in self.components.items()}


def _add(a: Label, b: Label) -> Label:
    return tuple((x + y) % 2 for x, y in zip(a, b))


def grading_check(g: LieAlgebra, gr: Grading) -> bool:
    """``[g_γ₁, g_γ₂] ⊂ g_{γ₁γ₂}`` for every pair of labels."""
    comps = gr.components
    total = sum(sp.dim for sp in comps.values())
    if any(sp.ambient != g.dim for sp in comps.values()):
        raise HomogeneousError("component in the wrong dimension")
    span = Subspace(g.dim, [v for sp in comps.values() for v in sp.basis])
    if total != g.dim or span.dim != g.dim:
        raise HomogeneousError("components do not decompose g")
    zero = Subspace(g.dim)
    labels = list(comps)
    for i, a in enumerate(labels):
        for b in labels[i:]:
            target = comps.get(_add(a, b), zero)
            for x in comps[a].basis:
                for y in comps[b].basis:
                    if not target.contains(bracket(g, x, y)):
                        return False
    return True


def so_algebra(size: int) -> LieAlgebra:
    """``so(size)`` on ``A_ij = E_ij - E_ji`` (i < j, lexicographic) from the closed commutator formula."""
    if size < 2:
        raise HomogeneousError("so(N) needs N >= 2")
    pairs = list(itertools.combinations(range(size), 2))
    idx = {p: t for t, p in enumerate(pairs)}
    n = len(pairs)

    def gen(a: int, b: int) -> tuple[int, int] | None:
        # A_ab as (sign, index)
        if a == b:
            return None
        return (1, idx[(a, b)]) if a < b else (-1, idx[(b, a)])

    br: dict[tuple[int, int], Vector] = {}
    for (s, (i, j)), (t, (k, l)) in itertools.combinations(enumerate(pairs), 2):
        v = [ZERO] * n
        # [A_ij, A_kl] = δ_jk A_il - δ_ik A_jl - δ_jl A_ik + δ_il A_jk
        for cond, a, b, sign in ((j == k, i, l, 1), (i == k, j, l, -1), (j == l, i, k, -1), (i == l, j, k, 1)):
            if cond:
                g_ = gen(a, b)
                if g_:
                    v[g_[1]] += sign * g_[0]
        if any(v):
            br[(s, t)] = v
    return LieAlgebra(n, br, name=f"so({size})", check=False)._mark_checked(True)


def to_antisymmetric(v: Sequence[Scalar], size: int) -> Matrix:
    m = linalg.zeros(size, size)
    for t, (i, j) in enumerate(itertools.combinations(range(size), 2)):
        m[i][j] = v[t]
        m[j][i] = -v[t]
    return m


def from_antisymmetric(m: Sequence[Sequence[Scalar]]) -> Vector:
    return [m[i][j] for i, j in itertools.combinations(range(len(m)), 2)]


def _kron(a: Matrix, b: Matrix) -> Matrix:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


S2 = [[ZERO, ONE], [-ONE, ZERO]]
X_MATRICES = {
    "a": [[-ONE, ZERO], [ZERO, ONE]],
    "b": [[ZERO, ONE], [ONE, ZERO]],
    "c": [[ZERO, -ONE], [ONE, ZERO]],
}
Z2Z2_LABELS = {"e": (0, 0), "a": (1, 0), "b": (0, 1), "c": (1, 1)}
# eigenvalue signs of (τ_a, τ_b, τ_c) on each component
SIGN_TABLE = {"e": (1, 1, 1), "a": (-1, 1, -1), "b": (1, -1, -1), "c": (-1, -1, 1)}


def grading_matrices(k: int) -> dict[str, Matrix]:
    """``J_a = X_a ⊗ S ⊗ I_k``, ``J_b = X_b ⊗ S ⊗ I_k``, ``J_c = X_c ⊗ I_2 ⊗ I_k = -J_a J_b``.

    J_a, J_b, J_c anticommute and square to -Id, so conjugation by them gives
    three commuting involutions with ``τ_a τ_b = τ_c``.
    """
    ik = linalg.identity(k)
    s = _kron(S2, ik)
    return {
        "a": _kron(X_MATRICES["a"], s),
        "b": _kron(X_MATRICES["b"], s),
        "c": _kron(X_MATRICES["c"], linalg.identity(2 * k)),
    }


def involution(j: Matrix) -> Matrix:
    """Matrix of ``M ↦ J⁻¹ M J`` on the coordinates of ``so(N)``."""
    size = len(j)
    jinv = linalg.inverse(j)
    n = size * (size - 1) // 2
    cols = [from_antisymmetric(linalg.matmul(linalg.matmul(jinv, to_antisymmetric(unit(n, t), size)), j)) for t in range(n)]
    return linalg.transpose(cols)


@dataclass(frozen=True)
class SoGrading:
    k: int
    algebra: LieAlgebra
    grading: Grading
    involutions: dict[str, Matrix]


def build_so_grading(k: int) -> SoGrading:
    """The Z₂×Z₂ grading of ``so(4k)`` by three commuting involutions; ``g_e ≅ sp(k)``."""
    if k < 1:
        raise HomogeneousError("k must be positive")
    size = 4 * k
    g = so_algebra(size)
    n = g.dim
    taus = {name: involution(j) for name, j in grading_matrices(k).items()}
    ident = linalg.identity(n)
    for name, t in taus.items():
        if linalg.matmul(t, t) != ident:
            raise HomogeneousError(f"tau_{name} is not an involution")
    for a, b in itertools.combinations(taus, 2):
        if linalg.matmul(taus[a], taus[b]) != linalg.matmul(taus[b], taus[a]):
            raise HomogeneousError("involutions do not commute")
    comps: dict[Label, Subspace] = {}
    names: dict[Label, str] = {}
    for name, signs in SIGN_TABLE.items():
        rows = []
        for (_, t), s in zip(sorted(taus.items()), signs):
            rows.extend([[t[i][j] - (s if i == j else 0) for j in range(n)] for i in range(n)])
        comps[Z2Z2_LABELS[name]] = Subspace(n, linalg.nullspace(rows, n))
        names[Z2Z2_LABELS[name]] = name
    return SoGrading(k, g, Grading(2, comps, names), taus)


def grading_dims(k: int) -> dict[str, int]:
    """Closed forms ``dim g_e = k(2k+1)`` and ``dim g_a = dim g_b = dim g_c = k(2k-1)``."""
    return {"e": k * (2 * k + 1), "a": k * (2 * k - 1), "b": k * (2 * k - 1), "c": k * (2 * k - 1)}


# -- adapted metrics --------------------------------------------------------------

MCOMPONENTS = ("a", "b", "c")


@dataclass(frozen=True)
class MetricSpec:
    """Parameters ``(λ₁^γ, λ₂^γ)`` for γ in {a, b, c} on ``so(4k)``; r = k is the symmetric block order."""

    k: int
    lambdas: Mapping[str, tuple[Scalar, Scalar]]

    @classmethod
    def uniform(cls, k: int, l1: object, l2: object) -> "MetricSpec":
        return cls(k, {g: (to_scalar(l1), to_scalar(l2)) for g in MCOMPONENTS})

    @property
    def r(self) -> int:
        return self.k

    def dim(self, gamma: str) -> int:
        return self.k * (2 * self.k - 1)

    def validate(self, eigenvalues: bool = True) -> None:
        if self.k < 1:
            raise HomogeneousError("k must be positive")
        if set(self.lambdas) != set(MCOMPONENTS):
            raise HomogeneousError("need lambdas for a, b and c")
        for gamma in MCOMPONENTS:
            l1, _ = self.lambdas[gamma]
            if not l1:
                raise HomogeneousError(f"lambda_1 of {gamma} must be nonzero")
            for mu, mult in eigenvalues_of(self, gamma) if eigenvalues else ():
                if mult and not mu:
                    raise HomogeneousError(f"degenerate metric on g_{gamma}")


def eigenvalues_of(spec: MetricSpec, gamma: str) -> list[tuple[Scalar, int]]:
    """``[(μ₁, dim-r), (μ₂, r-1), (μ₃, 1)]``."""
    l1, l2 = (to_scalar(x) for x in spec.lambdas[gamma])
    r = spec.r
    mu1 = l1
    mu2 = l2 / 2 + l1 / 4
    mu3 = l2 * Fraction(r + 1, 2) - l1 * Fraction(r - 1, 4)
    return [(mu1, spec.dim(gamma) - r), (mu2, r - 1), (mu3, 1)]


def metric_eigenvalues(spec: MetricSpec) -> dict[str, list[tuple[Scalar, int]]]:
    spec.validate()
    return {gamma: eigenvalues_of(spec, gamma) for gamma in MCOMPONENTS}


def _table_signature(l1: Scalar, l2: Scalar, r: int, dim: int) -> tuple[int, int]:
    """Six-case table for the signature of one component."""
    low = -l1 / 2
    mid = l1 * Fraction(r - 1, 2 * (r + 1))
    if r == 1 and l2 == low:
        # μ₂ has multiplicity zero, so this boundary is not degenerate
        return (dim - 1, 1) if l1 > 0 else (1, dim - 1)
    if l1 > 0:
        if l2 > mid:
            return (dim, 0)
        if low < l2 < mid:
            return (dim - 1, 1)
        if l2 < low:
            return (dim - r, r)
    else:
        if l2 > low:
            return (r, dim - r)
        if mid < l2 < low:
            return (1, dim - 1)
        if l2 < mid:
            return (0, dim)
    raise HomogeneousError("parameters on a degenerate boundary")


@dataclass(frozen=True)
class SignatureReport:
    components: dict[str, tuple[int, int]]

    @property
    def total(self) -> tuple[int, int]:
        return (sum(p for p, _ in self.components.values()), sum(q for _, q in self.components.values()))


@dataclass(frozen=True)
class ComponentCoordinates:
    """Parameter basis of one component, read off the first block row of a 4k×4k matrix.

    ``kinds[t]`` is ``"diag"`` for a diagonal entry of the symmetric block and
    ``"plain"`` otherwise.
    """

    basis: list[Vector]
    kinds: list[str]
    symmetric_block: int


# block of the first block row holding the symmetric matrix, per component
SYMMETRIC_BLOCK = {"a": 3, "b": 1, "c": 2}


def _component_coordinates(k: int, comp: Subspace, gamma: str) -> ComponentCoordinates:
    size = 4 * k
    mats = [to_antisymmetric(v, size) for v in comp.basis]
    sb = SYMMETRIC_BLOCK[gamma]
    for m in mats:
        blk = [[m[i][sb * k + j] for j in range(k)] for i in range(k)]
        if blk != linalg.transpose(blk):
            raise HomogeneousError(f"block {sb} of g_{gamma} is not symmetric")
    coords: list[tuple[int, int, int]] = []
    kinds: list[str] = []
    for bk in range(4):
        for i in range(k):
            for j in range(i, k):
                if i == j and bk != sb:
                    continue
                coords.append((bk, i, j))
                kinds.append("diag" if i == j else "plain")

    def read(m: Matrix) -> Vector:
        return [m[i][bk * k + j] for bk, i, j in coords]

    proj = linalg.transpose([read(m) for m in mats])
    if linalg.rank(proj) != comp.dim or len(coords) != comp.dim:
        raise HomogeneousError("first block row does not parameterize the component")
    basis = []
    for t in range(len(coords)):
        c = linalg.solve(proj, unit(len(coords), t), comp.dim)
        if c is None:
            raise HomogeneousError("parameter coordinates are not free")
        basis.append([sum((x * v[s] for x, v in zip(c, comp.basis) if x), ZERO) for s in range(comp.ambient)])
    return ComponentCoordinates(basis, kinds, sb)


PRINTED = "printed"
INVARIANT = "invariant"


def component_gram(l1: Scalar, l2: Scalar, kinds: Sequence[str], convention: str = PRINTED) -> Matrix:
    """Gram matrix of ``λ₁ Σ plain² + λ₂ Σ δ_ii² + c (λ₂ - λ₁/2) Σ_{i<j} δ_ii δ_jj``.

    The printed quadratic form has c = 1; it is ad(g_e)-invariant for k >= 2
    only when λ₁ = 2λ₂.  The invariant convention uses c = 2, which is
    invariant for all parameters but changes μ₂ and μ₃.
    """
    if convention not in (PRINTED, INVARIANT):
        raise HomogeneousError(f"unknown convention {convention!r}")
    n = len(kinds)
    m = linalg.zeros(n, n)
    cross = (l2 - l1 / 2) / 2 if convention == PRINTED else l2 - l1 / 2
    diag = [t for t, kd in enumerate(kinds) if kd == "diag"]
    for t, kd in enumerate(kinds):
        m[t][t] = l2 if kd == "diag" else l1
    for s, t in itertools.combinations(diag, 2):
        m[s][t] = m[t][s] = cross
    return m


@dataclass(frozen=True)
class AdaptedMetric:
    """Block-diagonal form on ``g_a ⊕ g_b ⊕ g_c`` in the concatenated parameter bases."""

    so_grading: SoGrading
    spec: MetricSpec
    basis: list[Vector]
    gram: Matrix
    blocks: dict[str, Matrix]
    convention: str = PRINTED


def adapted_metric(gr: SoGrading, spec: MetricSpec, convention: str = PRINTED) -> AdaptedMetric:
    spec.validate(eigenvalues=convention == PRINTED)
    if spec.k != gr.k:
        raise HomogeneousError("metric spec and grading disagree on k")
    basis: list[Vector] = []
    blocks: dict[str, Matrix] = {}
    for gamma in MCOMPONENTS:
        comp = gr.grading.component(gamma)
        if comp.dim != spec.dim(gamma):
            raise HomogeneousError(f"dimension mismatch on g_{gamma}")
        cc = _component_coordinates(gr.k, comp, gamma)
        l1, l2 = spec.lambdas[gamma]
        blocks[gamma] = component_gram(to_scalar(l1), to_scalar(l2), cc.kinds, convention)
        if not linalg.det(blocks[gamma]):
            raise HomogeneousError(f"degenerate metric on g_{gamma}")
        basis.extend(cc.basis)
    n = len(basis)
    gram = linalg.zeros(n, n)
    off = 0
    for gamma in MCOMPONENTS:
        b = blocks[gamma]
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                gram[off + i][off + j] = x
        off += len(b)
    return AdaptedMetric(gr, spec, basis, gram, blocks, convention)


def invariance_check(metric: AdaptedMetric) -> bool:
    """``B([Z,X],Y) + B(X,[Z,Y]) = 0`` for Z in a basis of ``g_e``."""
    g = metric.so_grading.algebra
    basis = metric.basis
    n = len(basis)
    for z in metric.so_grading.grading.component("e").basis:
        cols = []
        for x in basis:
            c = linalg.coordinates(bracket(g, z, x), basis)
            if c is None:
                raise HomogeneousError("[g_e, m] leaves m")
            cols.append(c)
        a = linalg.transpose(cols)
        s = linalg.matmul(linalg.transpose(a), metric.gram)
        t = linalg.matmul(metric.gram, a)
        if any(s[i][j] + t[i][j] for i in range(n) for j in range(n)):
            return False
    return True


def _explicit_gram(spec: MetricSpec, gamma: str) -> Matrix:
    """Gram matrix of one component without building so(4k): r diagonal coordinates, the rest plain."""
    r = spec.r
    kinds = ["diag"] * r + ["plain"] * (spec.dim(gamma) - r)
    l1, l2 = spec.lambdas[gamma]
    return component_gram(to_scalar(l1), to_scalar(l2), kinds)


def metric_signature(spec: MetricSpec, route: str = "formula") -> SignatureReport:
    """Per-component signatures from the six-case table or from congruence diagonalization."""
    spec.validate()
    out: dict[str, tuple[int, int]] = {}
    for gamma in MCOMPONENTS:
        if route == "formula":
            l1, l2 = (to_scalar(x) for x in spec.lambdas[gamma])
            out[gamma] = _table_signature(l1, l2, spec.r, spec.dim(gamma))
        elif route == "congruence":
            p, q, z = linalg.signature(_explicit_gram(spec, gamma))
            if z:
                raise HomogeneousError("degenerate metric")
            out[gamma] = (p, q)
        else:
            raise HomogeneousError(f"unknown route {route!r}")
    return SignatureReport(out)


@dataclass(frozen=True)
class MetricClassification:
    riemannian: bool
    lorentzian: bool
    naturally_reductive: bool
    lorentz_pattern: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "riemannian": self.riemannian,
            "lorentzian": self.lorentzian,
            "naturally_reductive": self.naturally_reductive,
            "lorentz_pattern": self.lorentz_pattern,
        }


def lorentz_pattern(spec: MetricSpec) -> bool:
    """All λ₁ > 0, one γ₀ in the middle band, the others above it."""
    r = spec.r
    bands = []
    for gamma in MCOMPONENTS:
        l1, l2 = (to_scalar(x) for x in spec.lambdas[gamma])
        if l1 <= 0:
            return False
        mid = l1 * Fraction(r - 1, 2 * (r + 1))
        bands.append("top" if l2 > mid else "mid" if -l1 / 2 < l2 < mid else "other")
    return bands.count("mid") == 1 and bands.count("top") == 2


def classify_metric(spec: MetricSpec) -> MetricClassification:
    sig = metric_signature(spec)
    total = sum(spec.dim(gm) for gm in MCOMPONENTS)
    l1s = {to_scalar(spec.lambdas[gm][0]) for gm in MCOMPONENTS}
    natural = len(l1s) == 1 and all(to_scalar(spec.lambdas[gm][0]) == 2 * to_scalar(spec.lambdas[gm][1]) for gm in MCOMPONENTS)
    return MetricClassification(sig.total == (total, 0), sig.total == (total - 1, 1), natural, lorentz_pattern(spec))
