"""Chevalley-Eilenberg complex with adjoint coefficients and the Gerstenhaber products.

Sign convention: ``delta`` is ``(-1)^(p+1)`` times the alternating two-sum
formula, which makes ``delta_0 X = ad X``, ``delta_1 f(X, Y) = [fX, Y] +
[X, fY] - f[X, Y]`` and ``delta_2 φ = μ∘φ + φ∘μ`` hold literally.

Cochain coordinates are ordered lexicographically by ``(i_1 < … < i_p, k)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from . import linalg
from .core import LieAlgebra, LieAlgebraError, ScalarForm, exterior_derivative, sort_sign
from .linalg import Matrix, Vector, ZERO, ONE
from .scalars import Scalar, to_scalar

Key = tuple[tuple[int, ...], int]


class Cochain:
    """Alternating p-linear map ``g^p -> g`` with coefficients ``Φ^k_{i_1…i_p}``."""

    __slots__ = ("n", "p", "coeffs")

    def __init__(self, n: int, p: int, coeffs: Mapping[tuple[Sequence[int], int], object] | None = None) -> None:
        if p < 0:
            raise LieAlgebraError("cochain degree must be non-negative")
        self.n = n
        self.p = p
        out: dict[Key, Scalar] = {}
        for (idx, k), val in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != p or not 0 <= k < n or any(not 0 <= i < n for i in idx):
                raise LieAlgebraError(f"cochain index {(idx, k)} invalid for p={p}, n={n}")
            sign, key = sort_sign(idx)
            v = to_scalar(val)
            if sign == 0 or not v:
                continue
            out[(key, k)] = out.get((key, k), ZERO) + sign * v
        self.coeffs = {key: v for key, v in out.items() if v}

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_vector(cls, n: int, p: int, vec: Sequence[object]) -> "Cochain":
        keys = cochain_keys(n, p)
        if len(vec) != len(keys):
            raise LieAlgebraError("coordinate vector has the wrong length")
        return cls(n, p, {key: v for key, v in zip(keys, vec) if to_scalar(v)})

    @classmethod
    def from_sparse(cls, n: int, p: int, entries: Mapping[int, Scalar]) -> "Cochain":
        keys = cochain_keys(n, p)
        return cls(n, p, {keys[c]: v for c, v in entries.items()})

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence[object]]) -> "Cochain":
        """1-cochain of an endomorphism (column i is the image of ``e_i``)."""
        n = len(m)
        return cls(n, 1, {((i,), k): m[k][i] for i in range(n) for k in range(n) if to_scalar(m[k][i])})

    @classmethod
    def from_vector0(cls, v: Sequence[object]) -> "Cochain":
        n = len(v)
        return cls(n, 0, {((), k): x for k, x in enumerate(v) if to_scalar(x)})

    # -- views ----------------------------------------------------------
    def to_vector(self) -> Vector:
        pos = cochain_positions(self.n, self.p)
        out = [ZERO] * len(pos)
        for key, v in self.coeffs.items():
            out[pos[key]] = v
        return out

    def to_sparse(self) -> dict[int, Scalar]:
        pos = cochain_positions(self.n, self.p)
        return {pos[key]: v for key, v in self.coeffs.items()}

    def to_matrix(self) -> Matrix:
        if self.p != 1:
            raise LieAlgebraError("to_matrix needs a 1-cochain")
        m = linalg.zeros(self.n, self.n)
        for ((i,), k), v in self.coeffs.items():
            m[k][i] = v
        return m

    def value(self, idx: Sequence[int]) -> Vector:
        """``Φ(e_{i_1}, …, e_{i_p})`` for any index tuple (sorted with sign)."""
        sign, key = sort_sign(idx)
        out = [ZERO] * self.n
        if sign == 0:
            return out
        for k in range(self.n):
            v = self.coeffs.get((key, k))
            if v:
                out[k] = sign * v
        return out

    def value_on(self, vectors: Sequence[Sequence[Scalar]]) -> Vector:
        """Multilinear evaluation on arbitrary vectors."""
        if len(vectors) != self.p:
            raise LieAlgebraError("wrong number of arguments")
        out = [ZERO] * self.n
        for (idx, k), c in self.coeffs.items():
            sub = [[v[i] for i in idx] for v in vectors]
            d = linalg.det(sub) if self.p else ONE
            if d:
                out[k] += c * d
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            out[key] = out.get(key, ZERO) + v
        return Cochain(self.n, self.p, out)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def scale(self, c: object) -> "Cochain":
        c = to_scalar(c)
        return Cochain(self.n, self.p, {key: c * v for key, v in self.coeffs.items()})

    def _compatible(self, other: "Cochain") -> None:
        if self.n != other.n or self.p != other.p:
            raise LieAlgebraError("cochains of different shape")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.n == other.n and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.p, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        return f"<Cochain p={self.p} n={self.n} nonzero={len(self.coeffs)}>"


def cochain_keys(n: int, p: int) -> list[Key]:
    return [(idx, k) for idx in itertools.combinations(range(n), p) for k in range(n)]


_POS_CACHE: dict[tuple[int, int], dict[Key, int]] = {}


def cochain_positions(n: int, p: int) -> dict[Key, int]:
    pos = _POS_CACHE.get((n, p))
    if pos is None:
        pos = {key: i for i, key in enumerate(cochain_keys(n, p))}
        _POS_CACHE[(n, p)] = pos
    return pos


def cochain_space_dim(n: int, p: int) -> int:
    return n * comb(n, p) if 0 <= p <= n else 0


def structure_cochain(g: LieAlgebra) -> Cochain:
    """The bracket μ as a 2-cochain."""
    return Cochain(
        g.dim,
        2,
        {((i, j), k): c for (i, j), vec in g.nonzero_brackets().items() for k, c in enumerate(vec) if c},
    )


def law_from_cochain(phi: Cochain, field: str = "Q", check: bool = True) -> LieAlgebra:
    """Structure constants read off a 2-cochain."""
    if phi.p != 2:
        raise LieAlgebraError("a bracket is a 2-cochain")
    n = phi.n
    b: dict[tuple[int, int], list[Scalar]] = {}
    for ((i, j), k), v in phi.coeffs.items():
        b.setdefault((i, j), [ZERO] * n)[k] = v
    return LieAlgebra(n, b, field=field, check=check)


def _full_brackets(g: LieAlgebra) -> dict[tuple[int, int], list[tuple[int, Scalar]]]:
    out: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for (i, j), vec in g.nonzero_brackets().items():
        terms = [(k, c) for k, c in enumerate(vec) if c]
        out[(i, j)] = terms
        out[(j, i)] = [(k, -c) for k, c in terms]
    return out


def _by_target(g: LieAlgebra) -> dict[int, list[tuple[int, int, Scalar]]]:
    out: dict[int, list[tuple[int, int, Scalar]]] = {}
    for (i, j), vec in g.nonzero_brackets().items():
        for k, c in enumerate(vec):
            if c:
                out.setdefault(k, []).append((i, j, c))
    return out


class _DeltaBuilder:
    """Images of basis cochains under ``delta_p``, keyed by (J, s)."""

    def __init__(self, g: LieAlgebra) -> None:
        self.g = g
        self.full = _full_brackets(g)
        self.by_target = _by_target(g)

    def image(self, idx: tuple[int, ...], k: int) -> dict[Key, Scalar]:
        n = self.g.dim
        p = len(idx)
        sgn_global = -1 if p % 2 == 0 else 1  # (-1)^(p+1)
        out: dict[Key, Scalar] = {}
        iset = set(idx)

        def add(key: Key, val: Scalar) -> None:
            nv = out.get(key, ZERO) + val
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)

        # Σ_l (-1)^(l+1) μ(Y_l, Φ(… Ŷ_l …))
        for j in range(n):
            if j in iset:
                continue
            terms = self.full.get((j, k))
            if not terms:
                continue
            jt = tuple(sorted(idx + (j,)))
            l = jt.index(j) + 1
            sign = 1 if l % 2 == 1 else -1  # (-1)^(l+1)
            for s, c in terms:
                add((jt, s), sgn_global * sign * c)
        # Σ_{r<s} (-1)^(r+s) Φ(μ(Y_r, Y_s), …)
        for pos_m, m in enumerate(idx):
            rest = idx[:pos_m] + idx[pos_m + 1 :]
            sigma = -1 if pos_m % 2 else 1  # sign of moving m to the front
            rset = set(rest)
            for a, b, c in self.by_target.get(m, ()):
                if a in rset or b in rset:
                    continue
                jt = tuple(sorted(rest + (a, b)))
                r = jt.index(a) + 1
                s = jt.index(b) + 1
                sign = 1 if (r + s) % 2 == 0 else -1
                add((jt, k), sgn_global * sign * sigma * c)
        return out


def delta(g: LieAlgebra, phi: Cochain) -> Cochain:
    """Coboundary ``delta_p`` applied to a p-cochain."""
    if phi.n != g.dim:
        raise LieAlgebraError("cochain and algebra dimensions differ")
    builder = _DeltaBuilder(g)
    out: dict[Key, Scalar] = {}
    for (idx, k), c in phi.coeffs.items():
        for key, v in builder.image(idx, k).items():
            out[key] = out.get(key, ZERO) + c * v
    return Cochain(g.dim, phi.p + 1, out)


def delta_columns(g: LieAlgebra, p: int) -> list[dict[int, Scalar]]:
    """Sparse columns of the matrix of ``delta_p`` (one per basis p-cochain)."""
    n = g.dim
    if p > n:
        return []
    builder = _DeltaBuilder(g)
    rowpos = cochain_positions(n, p + 1) if p + 1 <= n else {}
    cols = []
    for idx, k in cochain_keys(n, p):
        img = builder.image(idx, k)
        cols.append({rowpos[key]: v for key, v in img.items()})
    return cols


def delta_rows(g: LieAlgebra, p: int) -> list[dict[int, Scalar]]:
    """Sparse rows of the matrix of ``delta_p`` (one per basis (p+1)-cochain)."""
    n = g.dim
    nrows = cochain_space_dim(n, p + 1)
    rows: list[dict[int, Scalar]] = [dict() for _ in range(nrows)]
    for c, col in enumerate(delta_columns(g, p)):
        for r, v in col.items():
            rows[r][c] = v
    return rows


def delta_matrix(g: LieAlgebra, p: int) -> Matrix:
    n = g.dim
    rows = delta_rows(g, p)
    ncols = cochain_space_dim(n, p)
    return [[row.get(c, ZERO) for c in range(ncols)] for row in rows]


def delta_rank(g: LieAlgebra, p: int, method: str = "exact") -> int:
    """Rank of ``delta_p``; ``method="modular"`` gives a lower bound mod a prime."""
    if p < 0 or p >= g.dim:
        return 0
    cols = delta_columns(g, p)
    if method == "modular":
        return linalg.modular_rank(cols)
    if method != "exact":
        raise ValueError(f"unknown rank method {method!r}")
    return linalg.sparse_rank(cols)


def delta_scalar(g: LieAlgebra, omega: ScalarForm) -> ScalarForm:
    """Differential with trivial coefficients; identical to the Maurer-Cartan ``d``."""
    return exterior_derivative(g, omega)


@dataclass(frozen=True)
class CohomologyReport:
    p: int
    dim_cochains: int
    dimZ: int
    dimB: int
    dimH: int
    basis: tuple[Cochain, ...] | None = field(default=None, compare=False)
    method: str = "exact"

    def as_dict(self) -> dict[str, int]:
        return {"p": self.p, "dimC": self.dim_cochains, "dimZ": self.dimZ, "dimB": self.dimB, "dimH": self.dimH}


def cohomology_dims(g: LieAlgebra, p: int, basis: bool = False, method: str = "exact") -> CohomologyReport:
    """Dimensions of ``Z^p``, ``B^p`` and ``H^p(g, g)``.

    ``method="verified"`` first computes ranks modulo a prime (lower bounds)
    and then confirms them with exact rational elimination.
    """
    n = g.dim
    if p < 0:
        raise LieAlgebraError("degree must be non-negative")
    dim_c = cochain_space_dim(n, p)
    if method == "verified":
        lower_p = delta_rank(g, p, "modular")
        lower_b = delta_rank(g, p - 1, "modular") if p else 0
        rank_p = delta_rank(g, p)
        rank_b = delta_rank(g, p - 1) if p else 0
        if rank_p < lower_p or rank_b < lower_b:
            raise ArithmeticError("modular rank exceeds rational rank")
    else:
        rank_p = delta_rank(g, p, method)
        rank_b = delta_rank(g, p - 1, method) if p else 0
    dim_z = dim_c - rank_p
    reps = None
    if basis:
        reps = tuple(cohomology_basis(g, p))
    return CohomologyReport(p, dim_c, dim_z, rank_b, dim_z - rank_b, reps, method)


def cocycle_basis(g: LieAlgebra, p: int) -> list[Cochain]:
    n = g.dim
    if p >= n:
        return [Cochain.from_sparse(n, p, {c: ONE}) for c in range(cochain_space_dim(n, p))]
    kernel = linalg.sparse_nullspace(delta_rows(g, p), cochain_space_dim(n, p))
    return [Cochain.from_sparse(n, p, v) for v in kernel]


def coboundary_basis(g: LieAlgebra, p: int) -> list[Cochain]:
    """Independent images ``delta_{p-1}`` of basis (p-1)-cochains."""
    if p == 0:
        return []
    n = g.dim
    ech = linalg.SparseEchelon()
    out = []
    for col in delta_columns(g, p - 1):
        if ech.add(col):
            out.append(Cochain.from_sparse(n, p, col))
    return out


def cohomology_basis(g: LieAlgebra, p: int) -> list[Cochain]:
    """Cocycles whose classes form a basis of ``H^p`` (greedy completion of ``B^p``)."""
    ech = linalg.SparseEchelon()
    for b in coboundary_basis(g, p):
        ech.add(b.to_sparse())
    reps = []
    for z in cocycle_basis(g, p):
        if ech.add(z.to_sparse()):
            reps.append(z)
    return reps


def solve_coboundary(g: LieAlgebra, target: Cochain) -> Cochain | None:
    """Canonical ψ with ``delta ψ = target`` (free coordinates zero), or None."""
    p = target.p - 1
    if p < 0:
        raise LieAlgebraError("0-cochains are never coboundaries")
    n = g.dim
    rows = delta_rows(g, p)
    b = target.to_vector()
    sol = linalg.sparse_solve(rows, b)
    if sol is None:
        return None
    return Cochain.from_sparse(n, p, sol)


def derivations(g: LieAlgebra) -> list[Matrix]:
    """Basis of ``Der(g) = Z^1(g, g)`` as n x n matrices."""
    return [z.to_matrix() for z in cocycle_basis(g, 1)] if g.dim else []


def is_derivation(g: LieAlgebra, f: Sequence[Sequence[object]]) -> bool:
    return delta(g, Cochain.from_matrix(linalg.as_matrix(f))).is_zero()


def inner_derivations(g: LieAlgebra) -> list[Matrix]:
    """Echelon basis of ``ad(g) = B^1``, returned as matrices."""
    n = g.dim
    vecs = [Cochain.from_matrix(_ad(g, i)).to_vector() for i in range(n)]
    return [Cochain.from_vector(n, 1, v).to_matrix() for v in linalg.row_basis(vecs, n * n)]


def _ad(g: LieAlgebra, i: int) -> Matrix:
    cols = [g.bracket_basis(i, j) for j in range(g.dim)]
    return linalg.transpose(cols)


def derivation_dim(g: LieAlgebra) -> int:
    n = g.dim
    if n == 0:
        return 0
    return n * n - delta_rank(g, 1) if n > 1 else 1


def orbit_dimension(g: LieAlgebra) -> int:
    """``n^2 - dim Der(g)``, the dimension of the orbit of the law under GL(n)."""
    return g.dim * g.dim - derivation_dim(g)


# -- Gerstenhaber products ---------------------------------------------------


def circle_general(gq: Cochain, fp: Cochain) -> Cochain:
    """``(g_q ∘ f_p)(X_1, …, X_{p+q-1}) = Σ sgn(σ) g_q(f_p(X_σ(1..p)), X_σ(p+1..))``.

    The sum runs over (p, q-1)-shuffles.
    """
    if gq.n != fp.n:
        raise LieAlgebraError("cochains on different spaces")
    if gq.p == 0:
        raise LieAlgebraError("the outer cochain needs positive degree")
    n, p, q = gq.n, fp.p, gq.p
    arity = p + q - 1
    out: dict[Key, Scalar] = {}
    if arity > n:
        return Cochain(n, arity)
    positions = list(range(arity))
    for jt in itertools.combinations(range(n), arity):
        acc = [ZERO] * n
        for a_pos in itertools.combinations(positions, p):
            b_pos = [x for x in positions if x not in a_pos]
            sign, _ = sort_sign(list(a_pos) + b_pos)
            inner = fp.value(tuple(jt[x] for x in a_pos))
            rest = tuple(jt[x] for x in b_pos)
            for l, c in enumerate(inner):
                if c:
                    val = gq.value((l,) + rest)
                    for k, v in enumerate(val):
                        if v:
                            acc[k] += sign * c * v
        for k, v in enumerate(acc):
            if v:
                out[(jt, k)] = v
    return Cochain(n, arity, out)


def circle(phi: Cochain, psi: Cochain) -> Cochain:
    """``φ∘ψ(X,Y,Z) = φ(ψ(X,Y),Z) + φ(ψ(Y,Z),X) + φ(ψ(Z,X),Y)`` for 2-cochains."""
    if phi.p != 2 or psi.p != 2:
        raise LieAlgebraError("circle takes two 2-cochains")
    return circle_general(phi, psi)


def graded_bracket(f: Cochain, g: Cochain) -> Cochain:
    """``[f, g] = f∘g - (-1)^((p-1)(q-1)) g∘f`` for a p-cochain f and q-cochain g."""
    p, q = f.p, g.p
    sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
    return circle_general(f, g) - circle_general(g, f).scale(sign)


@dataclass(frozen=True)
class RimSquare:
    zero_in_H3: bool
    representative: Cochain
    witness: Cochain | None


def rim_sq(g: LieAlgebra, phi: Cochain) -> RimSquare:
    """Class of ``φ∘φ`` in ``H^3`` for a 2-cocycle φ; the witness solves ``delta ψ = φ∘φ``."""
    if phi.p != 2:
        raise LieAlgebraError("rim_sq takes a 2-cochain")
    if not delta(g, phi).is_zero():
        raise LieAlgebraError("rim_sq needs a 2-cocycle")
    rep = circle(phi, phi)
    if rep.is_zero():
        return RimSquare(True, rep, Cochain(g.dim, 2))
    if g.dim < 3:
        return RimSquare(False, rep, None)
    witness = solve_coboundary(g, rep)
    return RimSquare(witness is not None, rep, witness)
