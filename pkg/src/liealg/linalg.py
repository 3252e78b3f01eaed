"""Exact linear algebra over Q and Q(i).

Dense matrices are lists of row lists.  Rational ranks and determinants go
through fraction-free Bareiss elimination on integer-scaled rows; everything
else (and anything over Q(i)) uses Gauss-Jordan elimination on exact scalars.
Large sparse systems (cochain complexes) use :class:`SparseEchelon`.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import GaussianRational, Scalar

Matrix = list[list[Scalar]]
Vector = list[Scalar]

ZERO = Fraction(0)
ONE = Fraction(1)


class SingularMatrixError(ArithmeticError):
    """Raised when an inverse or a unique solve is requested of a singular matrix."""


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def as_matrix(rows: Iterable[Iterable[object]]) -> Matrix:
    from .scalars import to_scalar

    return [[to_scalar(x) for x in row] for row in rows]


def transpose(m: Sequence[Sequence[Scalar]]) -> Matrix:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    bt = transpose(b)
    inner = len(b)
    out = []
    for row in a:
        out.append([sum((row[k] * col[k] for k in range(inner) if row[k] and col[k]), ZERO) for col in bt])
    return out


def matvec(a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a]


def is_zero_matrix(m: Sequence[Sequence[Scalar]]) -> bool:
    return all(not x for row in m for x in row)


def _is_rational_matrix(m: Sequence[Sequence[Scalar]]) -> bool:
    return all(not isinstance(x, GaussianRational) for row in m for x in row)


def _integer_rows(m: Sequence[Sequence[Scalar]]) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; return the rows and the product of the scale factors."""
    out = []
    scale = ONE
    for row in m:
        den = 1
        for x in row:
            if x:
                den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
        scale *= den
    return out, scale


def bareiss_rank(int_rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by one-step fraction-free elimination."""
    a = [list(r) for r in int_rows if any(r)]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, rows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, cols):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


def bareiss_det(int_rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(r) for r in int_rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (p * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = p
    return sign * a[n - 1][n - 1]


def rref(m: Sequence[Sequence[Scalar]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    a = [list(r) for r in m]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        row = a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], row)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    if not m or not m[0]:
        return 0
    if _is_rational_matrix(m):
        ints, _ = _integer_rows(m)
        return bareiss_rank(ints)
    return len(rref(m)[1])


def det(m: Sequence[Sequence[Scalar]]) -> Scalar:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    if _is_rational_matrix(m):
        ints, scale = _integer_rows(m)
        return Fraction(bareiss_det(ints)) / scale
    a = [list(r) for r in m]
    d: Scalar = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def nullspace(m: Sequence[Sequence[Scalar]], ncols: int | None = None) -> Matrix:
    """Basis of {x : m x = 0}, one vector per free column (free entry 1)."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, pivots = rref(m, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence[Scalar]], b: Sequence[Scalar], ncols: int | None = None) -> Vector | None:
    """A solution of m x = b with every free variable zero, or None if inconsistent."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    aug = [list(row) + [rhs] for row, rhs in zip(m, b)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def inverse(m: Sequence[Sequence[Scalar]]) -> Matrix:
    n = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in red]


def row_basis(vectors: Sequence[Sequence[Scalar]], n: int) -> Matrix:
    """Reduced echelon basis of the span of ``vectors`` in dimension ``n``."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    return rref(vecs, n)[0]


def in_span(v: Sequence[Scalar], echelon: Sequence[Sequence[Scalar]], pivots: Sequence[int]) -> bool:
    """Membership test against a reduced echelon basis with the given pivots."""
    w = list(v)
    for row, p in zip(echelon, pivots):
        if w[p]:
            f = w[p]
            w = [x - f * y for x, y in zip(w, row)]
    return not any(w)


def coordinates(v: Sequence[Scalar], basis: Sequence[Sequence[Scalar]]) -> Vector | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span."""
    if not basis:
        return [] if not any(v) else None
    return solve(transpose(basis), v, len(basis))


def complement_indices(echelon_pivots: Sequence[int], n: int) -> list[int]:
    """Standard basis indices completing a subspace with the given echelon pivots."""
    piv = set(echelon_pivots)
    return [i for i in range(n) if i not in piv]


class SparseEchelon:
    """Incremental row echelon form of sparse rows ``{col: scalar}``.

    Each stored pivot row has its leading (smallest) column equal to its key
    and is normalized to 1 there.  Right-hand sides may be carried along so
    the same object solves linear systems.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, Scalar]] = {}
        self.rhs: dict[int, dict[object, Scalar]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(
        self, row: dict[int, Scalar], rhs: dict[object, Scalar] | None = None, full: bool = False
    ) -> tuple[dict[int, Scalar], dict[object, Scalar]]:
        """Eliminate pivot columns from ``row``.

        With ``full=False`` only the leading entry is eliminated repeatedly,
        which is enough to decide independence.
        """
        row = {c: v for c, v in row.items() if v}
        rhs = dict(rhs or {})
        heap = list(row)
        heapq.heapify(heap)
        seen: set[int] = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            v = row.get(c)
            if not v:
                continue
            prow = self.pivots.get(c)
            if prow is None:
                if not full:
                    break
                continue
            for j, pv in prow.items():
                nv = row.get(j, ZERO) - v * pv
                if nv:
                    if j not in row:
                        heapq.heappush(heap, j)
                    row[j] = nv
                else:
                    row.pop(j, None)
            for key, rv in self.rhs.get(c, {}).items():
                nv = rhs.get(key, ZERO) - v * rv
                if nv:
                    rhs[key] = nv
                else:
                    rhs.pop(key, None)
        return row, rhs

    def add(self, row: dict[int, Scalar], rhs: dict[object, Scalar] | None = None) -> bool:
        """Insert a row; return True if it was independent of the stored rows."""
        red, rrhs = self.reduce(row, rhs)
        if not red:
            return False
        lead = min(red)
        inv = 1 / red[lead]
        self.pivots[lead] = {c: v * inv for c, v in red.items()}
        self.rhs[lead] = {k: v * inv for k, v in rrhs.items()}
        return True

    def back_substitute(self, fixed: dict[int, Scalar], rhs_key: object | None = None) -> dict[int, Scalar]:
        """Solution with free columns set from ``fixed`` (default zero).

        Pivot variables are determined in decreasing column order from the
        stored rows (and the right-hand side named ``rhs_key`` if given).
        """
        x: dict[int, Scalar] = {c: v for c, v in fixed.items() if v}
        for c in sorted(self.pivots, reverse=True):
            val = self.rhs[c].get(rhs_key, ZERO) if rhs_key is not None else ZERO
            for j, pv in self.pivots[c].items():
                if j != c and j in x:
                    val -= pv * x[j]
            if val:
                x[c] = val
            else:
                x.pop(c, None)
        return x


def sparse_rank(rows: Iterable[dict[int, Scalar]]) -> int:
    ech = SparseEchelon()
    for row in rows:
        ech.add(row)
    return len(ech)


def sparse_nullspace(rows: Iterable[dict[int, Scalar]], ncols: int) -> list[dict[int, Scalar]]:
    """Kernel basis of a sparse matrix given by rows, one vector per free column."""
    ech = SparseEchelon()
    for row in rows:
        ech.add(row)
    free = [c for c in range(ncols) if c not in ech.pivots]
    return [ech.back_substitute({f: ONE}) for f in free]


def sparse_solve(rows: Sequence[dict[int, Scalar]], b: Sequence[Scalar]) -> dict[int, Scalar] | None:
    """Solve ``rows · x = b`` with free variables zero; None if inconsistent."""
    ech = SparseEchelon()
    for row, rhs in zip(rows, b):
        red, rrhs = ech.reduce(row, {0: rhs} if rhs else {})
        if not red:
            if rrhs.get(0):
                return None
            continue
        lead = min(red)
        inv = 1 / red[lead]
        ech.pivots[lead] = {c: v * inv for c, v in red.items()}
        ech.rhs[lead] = {k: v * inv for k, v in rrhs.items()}
    return ech.back_substitute({}, rhs_key=0)


def modular_rank(rows: Iterable[dict[int, Scalar]], prime: int = 2_147_483_629) -> int:
    """Rank modulo a prime; a lower bound for the rational rank.

    Rows whose denominators vanish mod ``prime`` raise ``ZeroDivisionError``.
    """
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        r: dict[int, int] = {}
        for c, v in row.items():
            q = Fraction(v)
            val = q.numerator % prime * pow(q.denominator % prime, -1, prime) % prime
            if val:
                r[c] = val
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                inv = pow(r[lead], -1, prime)
                pivots[lead] = {c: v * inv % prime for c, v in r.items()}
                break
            f = r[lead]
            for c, v in p.items():
                nv = (r.get(c, 0) - f * v) % prime
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return len(pivots)


def congruence_diagonalize(m: Sequence[Sequence[Scalar]]) -> list[Scalar]:
    """Diagonal of a matrix congruent to the symmetric rational matrix ``m``.

    Uses symmetric row/column operations; a zero diagonal with a nonzero
    off-diagonal entry is repaired by adding one basis vector to another.
    """
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("congruence diagonalization needs a symmetric matrix")
    diag: list[Scalar] = []
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                diag.extend(ZERO for _ in active)
                break
            i, j = pair
            # e_i <- e_i + e_j
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        for k in active:
            if k != piv and a[k][piv]:
                f = a[k][piv] / p
                for c in range(n):
                    a[k][c] -= f * a[piv][c]
                for r in range(n):
                    a[r][k] -= f * a[r][piv]
        diag.append(p)
        active.remove(piv)
    return diag


def signature(m: Sequence[Sequence[Scalar]]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric rational matrix (Sylvester)."""
    if any(isinstance(x, GaussianRational) and x.im for row in m for x in row):
        raise ValueError("signature is only defined over an ordered field")
    d = congruence_diagonalize([[Fraction(x.re) if isinstance(x, GaussianRational) else x for x in row] for row in m])
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0)


def charpoly(m: Sequence[Sequence[Scalar]]) -> list[Scalar]:
    """Coefficients ``[c_0, …, c_n]`` of ``det(x I - m)`` (Faddeev-LeVerrier)."""
    n = len(m)
    a = as_matrix(m)
    coeffs: list[Scalar] = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = zeros(n, n)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        mk = matmul(a, mk)
        for i in range(n):
            mk[i][i] += coeffs[n - k + 1]
        am = matmul(a, mk)
        coeffs[n - k] = -sum((am[i][i] for i in range(n)), ZERO) / k
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_eigenvalues(m: Sequence[Sequence[Scalar]]) -> dict[Fraction, int] | None:
    """Eigenvalues with algebraic multiplicity when all of them are rational, else None."""
    if any(isinstance(x, GaussianRational) for row in m for x in row):
        return None
    poly = [Fraction(x) for x in charpoly(m)]
    out: dict[Fraction, int] = {}
    while poly and poly[0] == 0 and len(poly) > 1:
        poly.pop(0)
        out[Fraction(0)] = out.get(Fraction(0), 0) + 1
    denom = 1
    for c in poly:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [int(c * denom) for c in poly]
    while len(ints) > 1:
        found = None
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for r in (Fraction(p, q), Fraction(-p, q)):
                    if sum(c * r**k for k, c in enumerate(ints)) == 0:
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return None
        out[found] = out.get(found, 0) + 1
        # synthetic division by (x - r), highest degree first
        hi = list(reversed(ints))
        quot = [Fraction(hi[0])]
        for c in hi[1:-1]:
            quot.append(c + found * quot[-1])
        qd = 1
        for c in quot:
            qd = qd * c.denominator // math.gcd(qd, c.denominator)
        ints = [int(c * qd) for c in reversed(quot)]
    return out
