"""Formal and valued deformations of a Lie law over truncated power series in t."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import linalg
from .cohomology import (
    Cochain,
    circle,
    cochain_keys,
    delta,
    graded_bracket,
    solve_coboundary,
    structure_cochain,
)
from .core import LieAlgebra, LieAlgebraError
from .linalg import Matrix, ZERO
from .scalars import Scalar, simplify, to_scalar

DEFAULT_ORDER = 8


class DeformationError(LieAlgebraError):
    pass


class TruncationError(DeformationError):
    """The truncation order is too shallow to decide a valuation."""

    def __init__(self, message: str, needed: int) -> None:
        super().__init__(message)
        self.needed = needed


class TruncatedSeries:
    """``a_0 + a_1 t + … + a_N t^N`` known modulo ``t^{N+1}``."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs: Sequence[object] = (), order: int = DEFAULT_ORDER) -> None:
        if order < -1:
            raise DeformationError("truncation order must be >= -1")
        c = [simplify(to_scalar(x)) for x in list(coeffs)[: order + 1]]
        c += [ZERO] * (order + 1 - len(c))
        self.c: tuple[Scalar, ...] = tuple(c)
        self.order = order

    @classmethod
    def monomial(cls, k: int, coeff: object = 1, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls([0] * k + [coeff], order)

    @classmethod
    def const(cls, x: object, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls([x], order)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None when zero to the known order."""
        for k, x in enumerate(self.c):
            if x:
                return k
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def in_maximal_ideal(self) -> bool:
        return self.order < 0 or not self.c[0]

    def constant(self) -> Scalar:
        if self.order < 0:
            raise TruncationError("constant term unknown", 0)
        return self.c[0]

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.c, min(order, self.order))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries([self.c[k] + other.c[k] for k in range(n + 1)], n)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-x for x in self.c], self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        # a t^u * b t^v is known to order min(N_a + v, N_b + u)
        va, vb = self.valuation(), other.valuation()
        if va is None or vb is None:
            n = min(self.order + (vb if vb is not None else other.order + 1),
                    other.order + (va if va is not None else self.order + 1))
            return TruncatedSeries([], n)
        n = min(self.order + vb, other.order + va)
        out = [ZERO] * (n + 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y and i + j <= n:
                        out[i + j] += x * y
        return TruncatedSeries(out, n)

    def scale(self, s: object) -> "TruncatedSeries":
        v = to_scalar(s)
        return TruncatedSeries([x * v for x in self.c], self.order)

    def shift_down(self, v: int) -> "TruncatedSeries":
        """Divide by ``t^v`` (the first v coefficients must vanish)."""
        if any(self.c[:v]):
            raise DeformationError("series is not divisible by this power of t")
        return TruncatedSeries(self.c[v:], self.order - v)

    def unit_inverse(self) -> "TruncatedSeries":
        a0 = self.constant()
        if not a0:
            raise DeformationError("not a unit")
        n = self.order
        inv = [ZERO] * (n + 1)
        inv[0] = 1 / a0
        for k in range(1, n + 1):
            s = sum((self.c[j] * inv[k - j] for j in range(1, k + 1)), ZERO)
            inv[k] = -s / a0
        return TruncatedSeries(inv, n)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        v = other.valuation()
        if v is None:
            raise TruncationError("division by a series that vanishes to the known order", other.order + 1)
        va = self.valuation()
        if va is not None and va < v:
            raise DeformationError("quotient leaves the power series ring")
        if va is None and self.order < v:
            raise TruncationError("numerator not known far enough", v)
        return self.shift_down(v) * other.shift_down(v).unit_inverse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.c[: n + 1] == other.c[: n + 1]

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        terms = [f"{x}*t^{k}" for k, x in enumerate(self.c) if x]
        return f"TruncatedSeries({' + '.join(terms) or '0'} + O(t^{self.order + 1}))"


# -- jets ---------------------------------------------------------------------


@dataclass
class DeformationJet:
    """``μ_t = μ_0 + Σ_{p=1}^{N} t^p φ_p`` modulo ``t^{N+1}``."""

    base: LieAlgebra
    terms: dict[int, Cochain] = field(default_factory=dict)
    order: int = DEFAULT_ORDER

    def __post_init__(self) -> None:
        n = self.base.dim
        for p, phi in self.terms.items():
            if p < 1:
                raise DeformationError("jet terms start at order 1")
            if phi.p != 2 or phi.n != n:
                raise DeformationError("jet terms are 2-cochains on the base space")
        self.terms = {p: phi for p, phi in self.terms.items() if p <= self.order and not phi.is_zero()}

    def term(self, p: int) -> Cochain:
        if p == 0:
            return structure_cochain(self.base)
        return self.terms.get(p, Cochain(self.base.dim, 2))

    @classmethod
    def scaled(cls, base: LieAlgebra, phi: Cochain, series: TruncatedSeries) -> "DeformationJet":
        """``μ_0 + s(t) φ`` for a series s in the maximal ideal."""
        if not series.in_maximal_ideal():
            raise DeformationError("the scaling series must have no constant term")
        return cls(base, {k: phi.scale(c) for k, c in enumerate(series.c) if k and c}, series.order)

    def coefficient_series(self) -> list[TruncatedSeries]:
        """Structure-constant series of ``μ_t - μ_0`` in cochain coordinate order."""
        n = self.base.dim
        keys = cochain_keys(n, 2)
        cols = {p: phi.to_vector() for p, phi in self.terms.items()}
        return [
            TruncatedSeries([ZERO] + [cols[p][idx] if p in cols else ZERO for p in range(1, self.order + 1)], self.order)
            for idx in range(len(keys))
        ]

    def specialize(self, t: object) -> LieAlgebra:
        """The law at a numerical value of t (no Jacobi check)."""
        tv = to_scalar(t)
        total = structure_cochain(self.base)
        for p, phi in self.terms.items():
            total = total + phi.scale(tv**p)
        from .cohomology import law_from_cochain

        return law_from_cochain(total, field=self.base.field, check=False)


def jacobi_residuals(jet: DeformationJet, up_to_order: int | None = None) -> dict[int, Cochain]:
    """Coefficient of ``t^k`` in ``μ_t ∘ μ_t`` for ``k = 1..up_to_order``."""
    top = jet.order if up_to_order is None else up_to_order
    if top > 2 * jet.order:
        raise DeformationError("residuals beyond twice the truncation order are not determined")
    n = jet.base.dim
    out: dict[int, Cochain] = {}
    for k in range(1, top + 1):
        acc = Cochain(n, 3)
        for i in range(0, k + 1):
            j = k - i
            if i > jet.order or j > jet.order:
                continue
            a, b = jet.term(i), jet.term(j)
            if a.is_zero() or b.is_zero():
                continue
            acc = acc + circle(a, b)
        out[k] = acc
    return out


def is_lie_mod(jet: DeformationJet, order: int | None = None) -> bool:
    """Whether μ_t satisfies Jacobi modulo ``t^{order+1}``."""
    return all(r.is_zero() for r in jacobi_residuals(jet, order).values())


@dataclass(frozen=True)
class LinearDeformationReport:
    is_cocycle: bool
    is_square_zero: bool
    valid_for_all_t: bool


def linear_deformation_check(base: LieAlgebra, phi: Cochain) -> LinearDeformationReport:
    """``μ_0 + t φ`` is a Lie law for all t iff ``δφ = 0`` and ``φ∘φ = 0``."""
    cocycle = delta(base, phi).is_zero()
    square = circle(phi, phi).is_zero()
    return LinearDeformationReport(cocycle, square, cocycle and square)


def obstruction(jet: DeformationJet, p: int) -> Cochain:
    """``Σ_{i+j=p+1, i,j≥1} φ_i ∘ φ_j`` built from the first p terms."""
    n = jet.base.dim
    acc = Cochain(n, 3)
    for i in range(1, p + 1):
        j = p + 1 - i
        if 1 <= j <= p:
            a, b = jet.term(i), jet.term(j)
            if not a.is_zero() and not b.is_zero():
                acc = acc + circle(a, b)
    return acc


def integrate_step(base: LieAlgebra, terms: Sequence[Cochain]) -> Cochain | None:
    """Next term ``φ_{p+1}`` solving ``δφ_{p+1} = -Σ φ_i∘φ_j``, or None when the class is nonzero."""
    p = len(terms)
    if p < 1:
        raise DeformationError("integrate_step needs at least φ_1")
    jet = DeformationJet(base, {i + 1: phi for i, phi in enumerate(terms)}, order=p)
    if not is_lie_mod(jet, p):
        raise DeformationError(f"the given terms do not solve the system up to order {p}")
    obs = obstruction(jet, p)
    if not delta(base, obs).is_zero():
        raise DeformationError("obstruction is not a 3-cocycle")
    if obs.is_zero():
        return Cochain(base.dim, 2)
    if base.dim < 3:
        return None
    return solve_coboundary(base, -obs)


def integrate(base: LieAlgebra, phi1: Cochain, order: int) -> DeformationJet | None:
    """Repeated :func:`integrate_step` up to the given order, None at the first obstruction."""
    terms = [phi1]
    while len(terms) < order:
        nxt = integrate_step(base, terms)
        if nxt is None:
            return None
        terms.append(nxt)
    return DeformationJet(base, {i + 1: t for i, t in enumerate(terms)}, order)


# -- equivalence of jets -------------------------------------------------------------

MatrixSeries = list[Matrix]


def _as_matrix_series(u: Mapping[int, Sequence[Sequence[object]]] | Sequence[Sequence[Sequence[object]]], n: int, order: int) -> MatrixSeries:
    items = u.items() if isinstance(u, Mapping) else enumerate(u)
    out = [linalg.zeros(n, n) for _ in range(order + 1)]
    for k, m in items:
        if k <= order:
            out[k] = linalg.as_matrix(m)
    return out


def _series_apply(us: MatrixSeries, vs: Sequence[Sequence[Scalar]], order: int) -> list[list[Scalar]]:
    """Coefficients of ``u(t) v(t)`` for a vector series v."""
    n = len(us[0])
    out = [[ZERO] * n for _ in range(order + 1)]
    for a, ua in enumerate(us):
        if linalg.is_zero_matrix(ua):
            continue
        for b, vb in enumerate(vs):
            if a + b > order or not any(vb):
                continue
            w = linalg.matvec(ua, vb)
            out[a + b] = [x + y for x, y in zip(out[a + b], w)]
    return out


def _jet_eval(jet: DeformationJet, xs: Sequence[Sequence[Scalar]], ys: Sequence[Sequence[Scalar]], order: int) -> list[list[Scalar]]:
    """Coefficients of ``μ_t(x(t), y(t))``."""
    n = jet.base.dim
    out = [[ZERO] * n for _ in range(order + 1)]
    for a in range(order + 1):
        phi = jet.term(a)
        if phi.is_zero():
            continue
        for b, xb in enumerate(xs):
            if not any(xb):
                continue
            for c, yc in enumerate(ys):
                if a + b + c > order or not any(yc):
                    continue
                w = phi.value_on([xb, yc])
                out[a + b + c] = [s + v for s, v in zip(out[a + b + c], w)]
    return out


def jet_equivalence_check(
    jet1: DeformationJet,
    jet2: DeformationJet,
    u: Mapping[int, Sequence[Sequence[object]]] | Sequence[Sequence[Sequence[object]]],
    order: int | None = None,
) -> bool:
    """``u ∘ μ_t = μ'_t ∘ (u ⊗ u)`` modulo ``t^{N+1}`` with ``u ≡ Id mod t``."""
    n = jet1.base.dim
    if jet2.base.dim != n:
        raise DeformationError("jets of different dimensions")
    top = min(jet1.order, jet2.order) if order is None else order
    us = _as_matrix_series(u, n, top)
    if us[0] != linalg.identity(n):
        raise DeformationError("u must reduce to the identity modulo t")
    for i in range(n):
        for j in range(i + 1, n):
            lhs_in = [jet1.term(p).value((i, j)) if p <= jet1.order else [ZERO] * n for p in range(top + 1)]
            lhs = _series_apply(us, lhs_in, top)
            ei = [[row[i] for row in m] for m in us]
            ej = [[row[j] for row in m] for m in us]
            rhs = _jet_eval(jet2, ei, ej, top)
            if lhs != rhs:
                return False
    return True


def order_one_difference_is_coboundary(base: LieAlgebra, phi1: Cochain, psi1: Cochain) -> bool:
    """Necessary condition for equivalence: ``φ_1 - ψ_1 ∈ B^2``."""
    diff = phi1 - psi1
    if diff.is_zero():
        return True
    return solve_coboundary(base, diff) is not None


def _series_inverse(us: MatrixSeries) -> MatrixSeries:
    """Inverse of ``Id + t U_1 + …`` modulo the series length."""
    n = len(us[0])
    order = len(us) - 1
    inv = [linalg.identity(n)] + [linalg.zeros(n, n) for _ in range(order)]
    for k in range(1, order + 1):
        acc = linalg.zeros(n, n)
        for a in range(1, k + 1):
            prod = linalg.matmul(us[a], inv[k - a])
            acc = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, prod)]
        inv[k] = acc
    return inv


def _series_matmul(a: MatrixSeries, b: MatrixSeries) -> MatrixSeries:
    n = len(a[0])
    order = min(len(a), len(b)) - 1
    out = [linalg.zeros(n, n) for _ in range(order + 1)]
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if linalg.is_zero_matrix(a[i]) or linalg.is_zero_matrix(b[j]):
                continue
            prod = linalg.matmul(a[i], b[j])
            out[i + j] = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(out[i + j], prod)]
    return out


def transport_jet(jet: DeformationJet, u: Mapping[int, Sequence[Sequence[object]]] | Sequence[Sequence[Sequence[object]]]) -> DeformationJet:
    """The jet ``μ'_t(X, Y) = u μ_t(u⁻¹X, u⁻¹Y)``, equivalent to ``jet`` through u."""
    n = jet.base.dim
    top = jet.order
    us = _as_matrix_series(u, n, top)
    if us[0] != linalg.identity(n):
        raise DeformationError("u must reduce to the identity modulo t")
    inv = _series_inverse(us)
    coeffs: dict[int, dict[tuple[tuple[int, ...], int], Scalar]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            ei = [[row[i] for row in m] for m in inv]
            ej = [[row[j] for row in m] for m in inv]
            inner = _jet_eval(jet, ei, ej, top)
            val = _series_apply(us, inner, top)
            for p in range(1, top + 1):
                for k, x in enumerate(val[p]):
                    if x:
                        coeffs.setdefault(p, {})[((i, j), k)] = x
            if any(x != y for x, y in zip(val[0], jet.term(0).value((i, j)))):
                raise DeformationError("transport changed the base law")
    return DeformationJet(jet.base, {p: Cochain(n, 2, c) for p, c in coeffs.items()}, top)


def trivialize_jet(jet: DeformationJet) -> list[Matrix] | None:
    """A unipotent ``u`` with ``u ∘ μ_t = μ_0 ∘ (u ⊗ u)``, or None if some term is not a coboundary.

    Kills the lowest nonzero term by ``Id + t^p Φ`` with ``δΦ = φ_p`` and repeats.
    """
    n = jet.base.dim
    top = jet.order
    total = [linalg.identity(n)] + [linalg.zeros(n, n) for _ in range(top)]
    cur = jet
    for _ in range(top + 1):
        low = min(cur.terms) if cur.terms else None
        if low is None:
            return total
        phi = cur.terms[low]
        if not delta(jet.base, phi).is_zero():
            raise DeformationError("jet is not a Lie law to its truncation order")
        big_phi = solve_coboundary(jet.base, phi)
        if big_phi is None:
            return None
        step = [linalg.identity(n)] + [linalg.zeros(n, n) for _ in range(top)]
        step[low] = big_phi.to_matrix()
        cur = transport_jet(cur, step)
        total = _series_matmul(step, total)
    raise DeformationError("trivialization did not terminate")


# -- flag decomposition ----------------------------------------------------------


@dataclass(frozen=True)
class FlagDecomposition:
    """``a = b_1 V_1 + b_1 b_2 V_2 + … + b_1⋯b_h V_h`` with independent constant vectors V_i."""

    scalars: tuple[TruncatedSeries, ...]
    vectors: tuple[tuple[Scalar, ...], ...]
    pivots: tuple[int, ...]
    residual_order: int
    dim: int

    @property
    def length(self) -> int:
        return len(self.vectors)

    def reconstruct(self, order: int) -> list[TruncatedSeries]:
        k = self.dim
        out = [TruncatedSeries([], order) for _ in range(k)]
        prod = TruncatedSeries.const(1, order)
        for b, v in zip(self.scalars, self.vectors):
            prod = prod * b
            out = [o + prod.scale(x) for o, x in zip(out, v)]
        return out

    def flag(self) -> list[list[list[Scalar]]]:
        """Echelon bases of ``span(V_1..V_i)`` for each i."""
        k = self.dim
        return [linalg.row_basis([list(v) for v in self.vectors[: i + 1]], k) for i in range(self.length)]


def flag_decompose(vec: Sequence[TruncatedSeries]) -> FlagDecomposition:
    """Canonical decomposition of a vector of series with positive valuation.

    At each step the pivot is the last coordinate of minimal valuation; the
    quotient by it splits into its constant vector and a remainder in the
    maximal ideal, which is decomposed in turn.
    """
    for x in vec:
        if not x.in_maximal_ideal():
            raise DeformationError("every entry must have positive valuation")
    cur = list(vec)
    scalars: list[TruncatedSeries] = []
    vectors: list[tuple[Scalar, ...]] = []
    pivots: list[int] = []
    residual = min((x.order for x in cur), default=0)
    while True:
        vals = [x.valuation() for x in cur]
        known = [v for v in vals if v is not None]
        if not known:
            residual = min(x.order for x in cur) if cur else residual
            break
        vmin = min(known)
        p = max(i for i, v in enumerate(vals) if v == vmin)
        b = cur[p]
        quot = [x / b for x in cur]
        for i, q in enumerate(quot):
            if q.order < 0:
                raise TruncationError(f"coordinate {i} is not known far enough to divide", vmin)
        v = tuple(q.constant() for q in quot)
        scalars.append(b)
        vectors.append(v)
        pivots.append(p)
        cur = [q - TruncatedSeries.const(c, q.order) for q, c in zip(quot, v)]
        if len(vectors) > len(vec):
            raise DeformationError("flag longer than the ambient dimension")
    return FlagDecomposition(tuple(scalars), tuple(vectors), tuple(pivots), residual, len(vec))


@dataclass(frozen=True)
class ValuedDecomposition:
    base: LieAlgebra
    eps: tuple[TruncatedSeries, ...]
    phis: tuple[Cochain, ...]
    residual_order: int

    @property
    def length(self) -> int:
        return len(self.phis)


def decompose_deformation(jet: DeformationJet, check_first: bool = True) -> ValuedDecomposition:
    """``μ_t - μ_0 = ε_1 φ_1 + ε_1 ε_2 φ_2 + …`` from the flag of the coefficient vector."""
    fd = flag_decompose(jet.coefficient_series())
    n = jet.base.dim
    phis = tuple(Cochain.from_vector(n, 2, list(v)) for v in fd.vectors)
    if check_first and phis and not delta(jet.base, phis[0]).is_zero():
        raise DeformationError("first term of the decomposition is not a 2-cocycle")
    return ValuedDecomposition(jet.base, fd.scalars, phis, fd.residual_order)


@dataclass(frozen=True)
class SystemRow:
    """``lhs = Σ coeff[(i, j)] [φ_i, φ_j]`` (indices 1-based), coeff None when not solvable."""

    lhs: str
    coefficients: dict[tuple[int, int], Scalar] | None


@dataclass(frozen=True)
class FiniteSystemReport:
    length: int
    rows: tuple[SystemRow, ...]
    dim_v: int
    bound: int

    @property
    def holds(self) -> bool:
        return all(r.coefficients is not None for r in self.rows)


def finite_system_check(dec: ValuedDecomposition) -> FiniteSystemReport:
    """Relations of a valued deformation of length k among ``δφ_i`` and ``[φ_i, φ_j]``."""
    g = dec.base
    k = dec.length
    phis = dec.phis
    br: dict[tuple[int, int], Cochain] = {}
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            br[(i, j)] = graded_bracket(phis[i - 1], phis[j - 1])
    deltas = [delta(g, phi) for phi in phis]

    def express(target: Cochain, upto: int) -> dict[tuple[int, int], Scalar] | None:
        keys = [(i, j) for i in range(1, upto + 1) for j in range(i, upto + 1)]
        if target.is_zero():
            return {key: ZERO for key in keys}
        if not keys:
            return None
        cols = [br[key].to_vector() for key in keys]
        sol = linalg.solve(linalg.transpose(cols), target.to_vector(), len(keys))
        return None if sol is None else dict(zip(keys, sol))

    rows: list[SystemRow] = []
    for m in range(1, k + 1):
        rows.append(SystemRow(f"delta phi_{m}", express(deltas[m - 1], m - 1)))
    for l in range(1, k):
        rows.append(SystemRow(f"[phi_{l}, phi_{k}]", express(br[(l, k)], k - 1)))
    span = [br[(i, j)].to_vector() for i in range(1, k) for j in range(i, k)]
    span += [deltas[i].to_vector() for i in range(0, k - 1)]
    dim_v = linalg.rank(span) if span else 0
    return FiniteSystemReport(k, tuple(rows), dim_v, k * (k - 1) // 2)
