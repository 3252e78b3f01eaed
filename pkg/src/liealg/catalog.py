"""Built-in algebras and the matrix-commutator builder.

Every constructor returns a Jacobi-checked :class:`LieAlgebra`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .core import LieAlgebra, LieAlgebraError
from .linalg import Matrix, ZERO, ONE
from .scalars import to_scalar


def _vec(n: int, entries: dict[int, object]) -> list[Fraction]:
    v = [ZERO] * n
    for k, c in entries.items():
        v[k] = to_scalar(c)
    return v


def abelian(n: int) -> LieAlgebra:
    if n < 0:
        raise LieAlgebraError("dimension must be non-negative")
    return LieAlgebra(n, {}, name=f"abelian({n})")


def aff2() -> LieAlgebra:
    """Two-dimensional non-abelian algebra ``[e1, e2] = e2``."""
    return LieAlgebra(2, {(0, 1): [0, 1]}, name="aff2")


def heisenberg(p: int) -> LieAlgebra:
    """``h_{2p+1}``: ``[e_{2i+1}, e_{2i+2}] = e_{2p+1}`` (1-based)."""
    if p < 1:
        raise LieAlgebraError("heisenberg needs p >= 1")
    n = 2 * p + 1
    return LieAlgebra(n, {(2 * i, 2 * i + 1): _vec(n, {n - 1: 1}) for i in range(p)}, name=f"heisenberg({p})")


def filiform_model(n: int) -> LieAlgebra:
    """Model filiform algebra ``[X1, Xi] = X_{i+1}`` for ``2 <= i <= n-1``."""
    if n < 3:
        raise LieAlgebraError("filiform_model needs n >= 3")
    return LieAlgebra(n, {(0, i): _vec(n, {i + 1: 1}) for i in range(1, n - 1)}, name=f"filiform_model({n})")


def four_dim_solvable() -> LieAlgebra:
    """``aff2 ⊕ aff2``: ``[e1, e2] = e2``, ``[e3, e4] = e4``."""
    return LieAlgebra(4, {(0, 1): [0, 1, 0, 0], (2, 3): [0, 0, 0, 1]}, name="four_dim_solvable")


def filiform4_target() -> LieAlgebra:
    """``[e1, e2] = e3``, ``[e1, e3] = e4``."""
    return LieAlgebra(4, {(0, 1): [0, 0, 1, 0], (0, 2): [0, 0, 0, 1]}, name="filiform4_target")


def rigid11() -> LieAlgebra:
    """Eleven-dimensional solvable algebra with basis ``X, X0, …, X9`` (indices 0..10).

    ``[X, Xi] = i Xi``; ``[X0, Xi] = Xi`` for i = 4..9;
    ``[X1, Xi] = X_{i+1}`` for i in {2, 4, 5, 6, 7, 8}; ``[X2, Xi] = X_{i+2}`` for i = 4..7.
    """
    n = 11

    def x(i: int) -> int:
        return i + 1

    b: dict[tuple[int, int], list[Fraction]] = {}
    for i in range(10):
        if i:
            b[(0, x(i))] = _vec(n, {x(i): i})
    for i in range(4, 10):
        b[(x(0), x(i))] = _vec(n, {x(i): 1})
    for i in (2, 4, 5, 6, 7, 8):
        b[(x(1), x(i))] = _vec(n, {x(i + 1): 1})
    for i in range(4, 8):
        b[(x(2), x(i))] = _vec(n, {x(i + 2): 1})
    return LieAlgebra(n, b, name="rigid11")


def frobenius_model(p: int, phi: Sequence[object] = ()) -> LieAlgebra:
    """Frobenius model of dimension ``2p`` read off its Maurer-Cartan equations.

    ``dω1 = ω1∧ω2 + Σ ω_{2k+1}∧ω_{2k+2}``, ``dω2 = 0``,
    ``dω_{2k+1} = φ_k ω2∧ω_{2k+1}``, ``dω_{2k+2} = -(1+φ_k) ω2∧ω_{2k+2}``,
    converted with ``dω_k = Σ_{i<j} C_ij^k ω_i∧ω_j``.
    """
    if p < 1:
        raise LieAlgebraError("frobenius_model needs p >= 1")
    if len(phi) != p - 1:
        raise LieAlgebraError(f"frobenius_model({p}) needs {p - 1} parameters")
    n = 2 * p
    b: dict[tuple[int, int], list[Fraction]] = {(0, 1): _vec(n, {0: 1})}
    for k, val in enumerate(phi, start=1):
        f = to_scalar(val)
        a, c = 2 * k, 2 * k + 1  # 0-based indices of X_{2k+1}, X_{2k+2}
        b[(a, c)] = _vec(n, {0: 1})
        b[(1, a)] = _vec(n, {a: f})
        b[(1, c)] = _vec(n, {c: -(1 + f)})
    label = ",".join(str(to_scalar(v)) for v in phi)
    return LieAlgebra(n, b, name=f"frobenius_model({p};{label})")


def commutator_algebra(basis: Sequence[Sequence[Sequence[object]]], name: str | None = None) -> LieAlgebra:
    """Lie algebra spanned by square matrices under ``[A, B] = AB - BA``."""
    mats = [linalg.as_matrix(m) for m in basis]
    if not mats:
        return LieAlgebra(0, {}, name=name)
    size = len(mats[0])
    if any(len(m) != size or any(len(r) != size for r in m) for m in mats):
        raise LieAlgebraError("basis matrices must be square of equal size")
    flat = [[x for row in m for x in row] for m in mats]
    if linalg.rank(flat) != len(flat):
        raise LieAlgebraError("basis matrices are linearly dependent")
    cols = linalg.transpose(flat)
    n = len(mats)
    b = {}
    for i, j in itertools.combinations(range(n), 2):
        a, c = mats[i], mats[j]
        comm = [
            [x - y for x, y in zip(r1, r2)]
            for r1, r2 in zip(linalg.matmul(a, c), linalg.matmul(c, a))
        ]
        target = [x for row in comm for x in row]
        coords = linalg.solve(cols, target, n)
        if coords is None:
            raise LieAlgebraError(f"commutator of basis elements {i} and {j} leaves the span")
        if any(coords):
            b[(i, j)] = coords
    return LieAlgebra(n, b, name=name)


def _unit_matrix(size: int, i: int, j: int) -> Matrix:
    m = linalg.zeros(size, size)
    m[i][j] = ONE
    return m


def sl2_matrices() -> list[Matrix]:
    """``H, E, F`` in the defining representation."""
    return [[[ONE, ZERO], [ZERO, -ONE]], _unit_matrix(2, 0, 1), _unit_matrix(2, 1, 0)]


def sl2() -> LieAlgebra:
    """``sl(2)`` in the basis ``H, E, F``: ``[H,E]=2E``, ``[H,F]=-2F``, ``[E,F]=H``."""
    return commutator_algebra(sl2_matrices(), name="sl2")


def antisymmetric_basis(size: int) -> list[Matrix]:
    """``E_ij - E_ji`` for ``i < j`` in lexicographic order."""
    out = []
    for i, j in itertools.combinations(range(size), 2):
        m = _unit_matrix(size, i, j)
        m[j][i] = -ONE
        out.append(m)
    return out


def so(n: int) -> LieAlgebra:
    """``so(n)`` in the basis ``E_ij - E_ji`` (i < j, lexicographic)."""
    if n < 2:
        raise LieAlgebraError("so(n) needs n >= 2")
    return commutator_algebra(antisymmetric_basis(n), name=f"so({n})")


def so3() -> LieAlgebra:
    """``so(3)`` in the rotation basis with ``[e1,e2]=e3``, ``[e2,e3]=e1``, ``[e3,e1]=e2``."""
    lx = linalg.zeros(3, 3)
    lx[2][1], lx[1][2] = ONE, -ONE
    ly = linalg.zeros(3, 3)
    ly[0][2], ly[2][0] = ONE, -ONE
    lz = linalg.zeros(3, 3)
    lz[1][0], lz[0][1] = ONE, -ONE
    return commutator_algebra([lx, ly, lz], name="so3")


MINKOWSKI = (-1, 1, 1, 1)


def poincare_labels() -> list[str]:
    return [f"M{a}{b}" for a, b in itertools.combinations(range(4), 2)] + [f"P{r}" for r in range(4)]


def poincare() -> LieAlgebra:
    """Poincaré algebra (dim 10) as 5x5 affine matrices, basis ``M_{μν}`` (μ<ν) then ``P_ρ``.

    Realizes ``[M_{μν}, P_ρ] = η_{μρ} P_ν - η_{νρ} P_μ`` with η = diag(-1, 1, 1, 1).
    """
    eta = MINKOWSKI
    mats = []
    for mu, nu in itertools.combinations(range(4), 2):
        m = linalg.zeros(5, 5)
        for b in range(4):
            m[nu][b] += eta[mu] if b == mu else 0
            m[mu][b] -= eta[nu] if b == nu else 0
        mats.append(m)
    for rho in range(4):
        mats.append(_unit_matrix(5, rho, 4))
    return commutator_algebra(mats, name="poincare")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable[..., LieAlgebra]
    params: tuple[str, ...]
    note: str


CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in (
        CatalogEntry("abelian", abelian, ("n",), "all brackets zero"),
        CatalogEntry("aff2", aff2, (), "[e1,e2]=e2"),
        CatalogEntry("heisenberg", heisenberg, ("p",), "[e_{2i+1},e_{2i+2}]=e_{2p+1}"),
        CatalogEntry("filiform", filiform_model, ("n",), "[X1,Xi]=X_{i+1}"),
        CatalogEntry("sl2", sl2, (), "trace-zero 2x2 matrices, basis H,E,F"),
        CatalogEntry("so", so, ("n",), "antisymmetric nxn matrices, basis E_ij-E_ji"),
        CatalogEntry("so3", so3, (), "rotation basis, [e1,e2]=e3 cyclic"),
        CatalogEntry("poincare", poincare, (), "[M_{mn},P_r]=eta_{mr}P_n-eta_{nr}P_m, eta=diag(-1,1,1,1)"),
        CatalogEntry("rigid11", rigid11, (), "rigid solvable algebra with dim H^2 = 1"),
        CatalogEntry("frobenius", frobenius_model, ("p", "phi"), "Frobenius model from Maurer-Cartan equations"),
        CatalogEntry("four_dim_solvable", four_dim_solvable, (), "[e1,e2]=e2, [e3,e4]=e4"),
        CatalogEntry("filiform4_target", filiform4_target, (), "[e1,e2]=e3, [e1,e3]=e4"),
    )
}


def standard_fixtures() -> list[LieAlgebra]:
    """The fixed set of catalog instances used for "every catalog algebra" checks."""
    return [
        abelian(1),
        abelian(2),
        abelian(3),
        abelian(4),
        aff2(),
        heisenberg(1),
        heisenberg(2),
        filiform_model(4),
        filiform_model(5),
        sl2(),
        so3(),
        so(4),
        poincare(),
        rigid11(),
        frobenius_model(2, (1,)),
        four_dim_solvable(),
        filiform4_target(),
    ]
