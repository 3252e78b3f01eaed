"""Structural invariants of a Lie algebra, from the central series to the Killing form."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .cohomology import is_derivation
from .core import LieAlgebra, LieAlgebraError, Subspace, ad_basis, ad_matrix, bracket_span, unit
from .linalg import Matrix, Vector, ZERO, ONE
from .scalars import Scalar, to_scalar


@dataclass(frozen=True)
class SeriesReport:
    terms: tuple[Subspace, ...]
    terminated_at_zero: bool
    index: int | None

    @property
    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]


def _series(g: LieAlgebra, derived: bool) -> SeriesReport:
    whole = Subspace.whole(g.dim)
    terms = [whole]
    while True:
        prev = terms[-1]
        nxt = bracket_span(g, prev, prev if derived else whole)
        if nxt.dim == prev.dim:
            break
        terms.append(nxt)
        if nxt.dim == 0:
            break
    zero = terms[-1].dim == 0
    return SeriesReport(tuple(terms), zero, len(terms) - 1 if zero else None)


def lower_central_series(g: LieAlgebra) -> SeriesReport:
    """``C^0 = g``, ``C^p = [C^{p-1}, g]`` until it vanishes or stabilizes."""
    return _series(g, derived=False)


def derived_series(g: LieAlgebra) -> SeriesReport:
    """``D^0 = g``, ``D^p = [D^{p-1}, D^{p-1}]`` until it vanishes or stabilizes."""
    return _series(g, derived=True)


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g).terminated_at_zero


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g).terminated_at_zero


def nilindex(g: LieAlgebra) -> int:
    """Smallest k with ``C^k(g) = 0``."""
    rep = lower_central_series(g)
    if rep.index is None:
        raise LieAlgebraError("nilindex of a non-nilpotent algebra")
    return rep.index


def is_filiform(g: LieAlgebra) -> bool:
    return is_nilpotent(g) and g.dim >= 1 and nilindex(g) == g.dim - 1


def _is_nilpotent_matrix(m: Matrix) -> bool:
    n = len(m)
    if n == 0:
        return True
    p = m
    for _ in range(n - 1):
        p = linalg.matmul(p, m)
    return linalg.is_zero_matrix(p)


def engel_check(g: LieAlgebra) -> bool:
    """Whether every basis adjoint ``ad e_a`` is a nilpotent matrix."""
    return all(_is_nilpotent_matrix(ad_basis(g, a)) for a in range(g.dim))


def center(g: LieAlgebra) -> Subspace:
    """Kernel of the stacked adjoint matrices."""
    n = g.dim
    rows = [row for a in range(n) for row in ad_basis(g, a)]
    # x is central iff [e_a, x] = 0 for all a
    return Subspace(n, linalg.nullspace(rows, n) if rows else [unit(n, i) for i in range(n)])


def jordan_type(m: Matrix) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent matrix, decreasing.

    Uses ``#blocks of size m = r_{m-1} - 2 r_m + r_{m+1}`` with ``r_m = rank(M^m)``.
    """
    n = len(m)
    ranks = [n]
    p = linalg.identity(n)
    for _ in range(n + 1):
        p = linalg.matmul(p, m)
        ranks.append(linalg.rank(p))
    if ranks[n] != 0:
        raise LieAlgebraError("jordan_type needs a nilpotent matrix")
    sizes: list[int] = []
    for size in range(n, 0, -1):
        count = ranks[size - 1] - 2 * ranks[size] + ranks[size + 1]
        sizes.extend([size] * count)
    return tuple(sizes)


@dataclass(frozen=True)
class CharacteristicSequence:
    sequence: tuple[int, ...]
    witness: tuple[Scalar, ...]
    heuristic_generic: bool = True


def characteristic_candidates(g: LieAlgebra, seed: int = 0, samples: int = 64) -> list[Vector]:
    """Deterministic candidate set outside ``C^1(g)``: basis vectors, pairwise sums, seeded samples."""
    n = g.dim
    c1 = bracket_span(g, Subspace.whole(n), Subspace.whole(n))
    cands: list[Vector] = []
    for i in range(n):
        cands.append(unit(n, i))
    for i in range(n):
        for j in range(i + 1, n):
            v = unit(n, i)
            v[j] = ONE
            cands.append(v)
    rng = random.Random(seed)
    for _ in range(samples):
        cands.append([to_scalar(rng.randint(-3, 3)) for _ in range(n)])
    return [v for v in cands if any(v) and not c1.contains(v)]


def characteristic_sequence(g: LieAlgebra, seed: int = 0) -> CharacteristicSequence:
    """Lexicographic maximum of Jordan types of ``ad X`` over the candidate set."""
    if not is_nilpotent(g):
        raise LieAlgebraError("characteristic sequence needs a nilpotent algebra")
    best: tuple[int, ...] | None = None
    witness: Vector = []
    for x in characteristic_candidates(g, seed):
        seq = jordan_type(ad_matrix(g, x))
        if best is None or seq > best:
            best, witness = seq, x
    if best is None:
        best = tuple([1] * g.dim)
    return CharacteristicSequence(best, tuple(witness))


def killing_form(g: LieAlgebra) -> Matrix:
    """``K_ab = Tr(ad e_a ∘ ad e_b)``."""
    n = g.dim
    ads = [ad_basis(g, a) for a in range(n)]
    k = linalg.zeros(n, n)
    for a in range(n):
        for b in range(a, n):
            t = sum(
                (ads[a][i][j] * ads[b][j][i] for i in range(n) for j in range(n) if ads[a][i][j] and ads[b][j][i]),
                ZERO,
            )
            k[a][b] = k[b][a] = t
    return k


def is_semisimple(g: LieAlgebra) -> bool:
    """Cartan criterion: the Killing form is nondegenerate."""
    return linalg.det(killing_form(g)) != 0


def signature(k: Sequence[Sequence[Scalar]]) -> tuple[int, int, int]:
    """``(p, q, z)`` of a symmetric rational form."""
    return linalg.signature(k)


def extend_by_derivation(g: LieAlgebra, f: Sequence[Sequence[object]]) -> LieAlgebra:
    """Algebra ``g ⊕ K e`` with ``[X, e] = f(X)`` for a derivation f."""
    fm = linalg.as_matrix(f)
    n = g.dim
    if len(fm) != n or any(len(r) != n for r in fm):
        raise LieAlgebraError("derivation has the wrong shape")
    if not is_derivation(g, fm):
        raise LieAlgebraError("f is not a derivation")
    b: dict[tuple[int, int], list[Scalar]] = {}
    for (i, j), vec in g.nonzero_brackets().items():
        b[(i, j)] = list(vec) + [ZERO]
    for i in range(n):
        col = [fm[k][i] for k in range(n)]
        if any(col):
            b[(i, n)] = col + [ZERO]
    return LieAlgebra(n + 1, b, field=g.field)


def killing_rank(g: LieAlgebra) -> int:
    return linalg.rank(killing_form(g)) if g.dim else 0


def invariant_vector(g: LieAlgebra) -> dict[str, object]:
    """Isomorphism invariants used to tell algebras apart."""
    from .cohomology import derivation_dim

    lcs = lower_central_series(g)
    ds = derived_series(g)
    out: dict[str, object] = {
        "dim": g.dim,
        "lcs_dims": lcs.dims,
        "derived_dims": ds.dims,
        "center_dim": center(g).dim,
        "der_dim": derivation_dim(g),
        "killing_rank": killing_rank(g),
    }
    if lcs.terminated_at_zero:
        out["char_seq"] = list(characteristic_sequence(g).sequence)
    return out
