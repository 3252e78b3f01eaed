"""Exact univariate polynomials and rational functions in a parameter ε."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import Scalar, simplify, to_scalar

ZERO = Fraction(0)
ONE = Fraction(1)


class Poly:
    """Polynomial in ε with coefficients listed from degree 0 upward."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[object] = ()) -> None:
        c = [simplify(to_scalar(x)) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c: tuple[Scalar, ...] = tuple(c)

    @classmethod
    def monomial(cls, k: int, coeff: object = 1) -> "Poly":
        return cls([0] * k + [coeff])

    @classmethod
    def const(cls, x: object) -> "Poly":
        return cls([x])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Scalar:
        return self.c[-1]

    def valuation(self) -> int:
        """Order of vanishing at ε = 0; zero polynomial raises."""
        for k, x in enumerate(self.c):
            if x:
                return k
        raise ZeroDivisionError("valuation of the zero polynomial")

    def at(self, x: object) -> Scalar:
        v = to_scalar(x)
        acc: Scalar = ZERO
        for coeff in reversed(self.c):
            acc = acc * v + coeff
        return simplify(acc)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[k] if k < len(b) else ZERO) for k, x in enumerate(a)])

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.c])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.c or not other.c:
            return Poly()
        out: list[Scalar] = [ZERO] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] += x * y
        return Poly(out)

    def scale(self, s: object) -> "Poly":
        v = to_scalar(s)
        return Poly([x * v for x in self.c])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q: list[Scalar] = [ZERO] * max(len(rem) - len(other.c) + 1, 0)
        lead = other.lead()
        dv = other.degree
        for k in range(len(rem) - 1, dv - 1, -1):
            coeff = rem[k] / lead
            if coeff:
                q[k - dv] = coeff
                for j, y in enumerate(other.c):
                    rem[k - dv + j] -= coeff * y
        return Poly(q), Poly(rem[:dv] if dv > 0 else [])

    def monic(self) -> "Poly":
        return self.scale(1 / self.lead()) if self.c else self

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"Poly({[str(x) for x in self.c]})"

    def __str__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            coef = str(x)
            if k == 0:
                terms.append(coef)
            else:
                mon = "eps" if k == 1 else f"eps^{k}"
                terms.append(mon if x == 1 else f"({coef})*{mon}")
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


class RatFunc:
    """Canonical ``P/Q`` with coprime P, Q and Q monic; zero is ``0/1``."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None) -> None:
        den = den if den is not None else Poly([1])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.lead()
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    @classmethod
    def const(cls, x: object) -> "RatFunc":
        return cls(Poly([x]))

    @classmethod
    def eps_power(cls, k: int, coeff: object = 1) -> "RatFunc":
        """``coeff · ε^k`` for any integer k."""
        if k >= 0:
            return cls(Poly.monomial(k, coeff))
        return cls(Poly([coeff]), Poly.monomial(-k))

    @classmethod
    def laurent(cls, terms: Mapping[int, object]) -> "RatFunc":
        """Laurent polynomial ``Σ c_k ε^k`` from an exponent map."""
        terms = {k: to_scalar(v) for k, v in terms.items() if to_scalar(v)}
        if not terms:
            return cls(Poly())
        low = min(min(terms), 0)
        top = max(terms) - low
        coeffs: list[Scalar] = [ZERO] * (top + 1)
        for k, v in terms.items():
            coeffs[k - low] = v
        return cls(Poly(coeffs), Poly.monomial(-low))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def order(self) -> int | None:
        """Order at ε = 0 (None for the zero function)."""
        if self.is_zero():
            return None
        return self.num.valuation() - self.den.valuation()

    def value_at_zero(self) -> Scalar:
        """Value at ε = 0; requires order >= 0."""
        if self.is_zero():
            return ZERO
        o = self.order()
        if o is None or o < 0:
            raise ZeroDivisionError("pole at eps = 0")
        if o > 0:
            return ZERO
        return simplify(self.num.c[0] / self.den.c[0])

    def at(self, x: object) -> Scalar:
        d = self.den.at(x)
        if not d:
            raise ZeroDivisionError("pole")
        return simplify(self.num.at(x) / d)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        out = RatFunc.__new__(RatFunc)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.is_zero() or other.is_zero():
            return RatFunc(Poly())
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def scale(self, s: object) -> "RatFunc":
        return RatFunc(self.num.scale(s), self.den)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den == Poly([1]):
            return str(self.num)
        return f"({self.num})/({self.den})"


RZERO = RatFunc(Poly())
RONE = RatFunc.const(1)

ParamMatrix = list[list[RatFunc]]


def as_param_matrix(m: Sequence[Sequence[object]]) -> ParamMatrix:
    """Coerce entries (RatFunc, Poly, scalars, or ``{exponent: coeff}`` maps)."""
    out = []
    for row in m:
        r = []
        for x in row:
            if isinstance(x, RatFunc):
                r.append(x)
            elif isinstance(x, Poly):
                r.append(RatFunc(x))
            elif isinstance(x, Mapping):
                r.append(RatFunc.laurent(x))
            else:
                r.append(RatFunc.const(x))
        out.append(r)
    return out


def param_det(m: ParamMatrix) -> RatFunc:
    """Determinant by elimination over the field of rational functions."""
    a = [list(r) for r in m]
    n = len(a)
    d = RONE
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return RZERO
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = -d
        p = a[col][col]
        d = d * p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return d


def param_inverse(m: ParamMatrix) -> ParamMatrix:
    """Gauss-Jordan inverse over the field of rational functions in ε."""
    n = len(m)
    a = [list(r) + [RONE if i == j else RZERO for j in range(n)] for i, r in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("family is identically singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]
