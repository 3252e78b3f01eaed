"""Rigidity tests: the H² criterion and the root-system rank test for solvable algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cohomology import cohomology_dims
from .core import LieAlgebra, LieAlgebraError, Subspace, act, ad_matrix, bracket, bracket_span, is_ideal
from .linalg import Matrix, Vector, ZERO

RIGID = "Rigid"
NOT_RIGID = "NotRigid"
INCONCLUSIVE = "Inconclusive"


class RigidityError(LieAlgebraError):
    pass


@dataclass(frozen=True)
class RigidityVerdict:
    kind: str
    reason: str
    data: dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict[str, object]:
        return {"verdict": self.kind, "reason": self.reason, **self.data}


def nr_test(g: LieAlgebra) -> RigidityVerdict:
    """Rigid when ``H²(g, g) = 0``; otherwise no conclusion (the converse fails)."""
    h2 = cohomology_dims(g, 2).dimH
    if h2 == 0:
        return RigidityVerdict(RIGID, "H2 vanishes", {"dim_H2": 0})
    return RigidityVerdict(INCONCLUSIVE, "H2 does not vanish", {"dim_H2": h2})


# -- torus and nilradical checks -----------------------------------------------------


def _rational_diagonalizable(m: Matrix) -> dict[Fraction, int] | None:
    """Eigenvalues with geometric multiplicities if m is diagonalizable over Q."""
    n = len(m)
    eig = linalg.rational_eigenvalues(m)
    if eig is None:
        return None
    geo = {}
    for lam in eig:
        shifted = [[m[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        geo[lam] = n - linalg.rank(shifted)
    return geo if sum(geo.values()) == n else None


def _is_nilpotent_ideal(g: LieAlgebra, nil: Subspace) -> bool:
    if not is_ideal(g, nil):
        return False
    cur = nil
    for _ in range(g.dim + 1):
        if cur.dim == 0:
            return True
        nxt = bracket_span(g, cur, nil)
        if nxt.dim == cur.dim:
            return False
        cur = nxt
    return cur.dim == 0


def check_decomposition(g: LieAlgebra, torus: Subspace, nil: Subspace) -> None:
    """Raise unless torus is an ad-diagonalizable abelian subalgebra complementing a nilpotent ideal."""
    n = g.dim
    if torus.ambient != n or nil.ambient != n:
        raise RigidityError("subspaces live in the wrong dimension")
    for a, b in itertools.combinations(torus.basis, 2):
        if any(bracket(g, a, b)):
            raise RigidityError("torus is not abelian")
    for t in torus.basis:
        if _rational_diagonalizable(ad_matrix(g, t)) is None:
            raise RigidityError("ad of a torus vector is not diagonalizable over Q")
    if not _is_nilpotent_ideal(g, nil):
        raise RigidityError("nilradical is not a nilpotent ideal")
    if torus.dim + nil.dim != n or (torus + nil).dim != n:
        raise RigidityError("torus and nilradical do not span g as a direct sum")


def regular_vector(
    g: LieAlgebra, torus: Subspace, nil: Subspace, coeffs: Sequence[int] = (-2, -1, 0, 1, 2)
) -> tuple[Vector, int]:
    """Torus vector with smallest ``dim V_0(X) = dim ker ad X`` (bounded deterministic search)."""
    check_decomposition(g, torus, nil)
    n = g.dim
    if torus.dim == 0:
        raise RigidityError("no torus: every vector of a nilpotent algebra is singular")
    cands: list[Vector] = [list(v) for v in torus.basis]
    combos = sorted(
        (cs for cs in itertools.product(coeffs, repeat=torus.dim) if any(cs)),
        key=lambda cs: (sum(abs(c) for c in cs), [-c for c in cs]),
    )
    for cs in combos:
        cands.append([sum((c * v[i] for c, v in zip(cs, torus.basis)), ZERO) for i in range(n)])
    best: tuple[Vector, int] | None = None
    for x in cands:
        k = n - linalg.rank(ad_matrix(g, x))
        if best is None or k < best[1]:
            best = (x, k)
    assert best is not None
    return best


# -- root system -----------------------------------------------------------------


@dataclass(frozen=True)
class RootSystem:
    """Linear relations among weight symbols; x-symbols for torus directions other than X, y for 𝔫."""

    symbols: tuple[str, ...]
    relations: tuple[tuple[int, ...], ...]
    basis: Matrix
    rank: int

    def relation_strings(self) -> list[str]:
        out = []
        for row in self.relations:
            terms = [f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{s}" for c, s in zip(row, self.symbols) if c]
            out.append(" ".join(terms).lstrip("+") + " = 0")
        return out


def _simultaneous_eigenbasis(g: LieAlgebra, torus_vecs: Sequence[Vector], nil: Subspace) -> list[Vector]:
    """Common eigenvectors of ``ad t`` (t in the torus) spanning the nilradical."""
    n = g.dim
    spaces: list[list[Vector]] = [[list(v) for v in nil.basis]]
    for t in torus_vecs:
        m = ad_matrix(g, t)
        refined: list[list[Vector]] = []
        for sp in spaces:
            # matrix of ad t on sp in the coordinates of sp
            imgs = [linalg.matvec(m, v) for v in sp]
            coords = [linalg.coordinates(w, sp) for w in imgs]
            if any(c is None for c in coords):
                raise RigidityError("nilradical is not invariant")
            local = linalg.transpose(coords)
            eig = _rational_diagonalizable(local)
            if eig is None:
                raise RigidityError("torus does not act diagonalizably")
            k = len(sp)
            for lam in sorted(eig):
                shifted = [[local[i][j] - (lam if i == j else 0) for j in range(k)] for i in range(k)]
                vecs = linalg.nullspace(shifted, k)
                refined.append([[sum((c * sp[a][i] for a, c in enumerate(v)), ZERO) for i in range(n)] for v in vecs])
        spaces = refined
    return [v for sp in spaces for v in sp]


def root_system(g: LieAlgebra, torus: Subspace, nil: Subspace, x: Sequence[object] | None = None) -> RootSystem:
    """Relations ``x_i+x_j=x_k``, ``y_i+y_j=y_k``, ``x_i+y_j=y_k``, ``y_i+y_j=x_k`` from nonzero components.

    The basis is X, then the remaining torus directions, then a common
    eigenbasis of the nilradical; X itself carries no symbol.
    """
    check_decomposition(g, torus, nil)
    n = g.dim
    if torus.dim:
        xv = list(x) if x is not None else regular_vector(g, torus, nil)[0]
        if not torus.contains(xv) or not any(xv):
            raise RigidityError("X must be a nonzero torus vector")
        others = [list(v) for v in torus.basis]
        # drop the torus basis vector that X replaces
        rest: list[Vector] = []
        for v in others:
            if linalg.rank([xv] + rest + [v]) == len(rest) + 2:
                rest.append(v)
        tvecs = [xv] + rest
    else:
        xv, rest, tvecs = None, [], []
    ys = _simultaneous_eigenbasis(g, tvecs, nil)
    cols = ([xv] if xv is not None else []) + rest + ys
    if linalg.rank(cols) != n:
        raise RigidityError("eigenbasis does not span g")
    basis = linalg.transpose(cols)
    ga = act(g, basis)
    off = 1 if xv is not None else 0
    symbols = tuple([f"x{i + 1}" for i in range(len(rest))] + [f"y{j + 1}" for j in range(len(ys))])
    sym_of = {off + i: i for i in range(len(symbols))}
    rows: list[tuple[int, ...]] = []
    for (i, j), vec in ga.nonzero_brackets().items():
        if i not in sym_of or j not in sym_of:
            continue
        for k, c in enumerate(vec):
            if c and k in sym_of:
                row = [0] * len(symbols)
                row[sym_of[i]] += 1
                row[sym_of[j]] += 1
                row[sym_of[k]] -= 1
                rows.append(tuple(row))
    uniq = tuple(sorted(set(rows)))
    rank = linalg.rank([list(map(Fraction, r)) for r in uniq]) if uniq else 0
    return RootSystem(symbols, uniq, basis, rank)


def rank_test(g: LieAlgebra, rs: RootSystem, nil: Subspace) -> RigidityVerdict:
    """NotRigid when ``rank(S) ≠ dim 𝔫 - 1``; otherwise no conclusion."""
    target = nil.dim - 1
    data = {"rank_S": rs.rank, "dim_nilradical_minus_1": target}
    if rs.rank != target:
        return RigidityVerdict(NOT_RIGID, "rank of the root system differs from dim n - 1", data)
    return RigidityVerdict(INCONCLUSIVE, "rank of the root system equals dim n - 1", data)


def rigidity_report(g: LieAlgebra, torus: Subspace | None = None, nil: Subspace | None = None) -> dict[str, object]:
    out: dict[str, object] = {"nr_test": nr_test(g).as_dict()}
    if torus is not None and nil is not None:
        rs = root_system(g, torus, nil)
        out["rank_test"] = rank_test(g, rs, nil).as_dict()
        out["relations"] = rs.relation_strings()
        if torus.dim:
            x, v0 = regular_vector(g, torus, nil)
            out["regular_vector"] = [str(c) for c in x]
            out["dim_V0"] = v0
    return out
