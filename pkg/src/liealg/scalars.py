"""Exact scalars: rationals (``Fraction``) and Gaussian rationals ``a + b i``.

Every value in the package is either a :class:`fractions.Fraction` or a
:class:`GaussianRational`.  Mixed arithmetic promotes to the Gaussian type.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union


class GaussianRational:
    """Element ``re + im*i`` of Q(i) with both parts stored as ``Fraction``."""

    __slots__ = ("re", "im")

    def __init__(self, re: object = 0, im: object = 0) -> None:
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other: object) -> "GaussianRational | None":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other: object) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        d = self.norm()
        if d == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / d, -self.im / d)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        return format_scalar(self)


Scalar = Union[Fraction, GaussianRational]

I = GaussianRational(0, 1)


def is_gaussian(x: object) -> bool:
    return isinstance(x, GaussianRational)


def to_scalar(x: object) -> Scalar:
    """Coerce ints, Fractions, strings or Gaussian rationals to an exact scalar."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def simplify(x: Scalar) -> Scalar:
    """Drop a vanishing imaginary part."""
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    return x


_GAUSS = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?\s*$"
)
_PURE_IM = re.compile(r"^\s*(?P<sign>[+-]?)\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i\s*$")


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"``, ``"p/q+r/s i"``, ``"r/s i"`` or ``"-i"``.

    Raises ``ValueError`` on anything else.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty scalar string")
    if "i" not in s:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {text!r}") from exc
    m = _PURE_IM.match(s)
    if m:
        im = Fraction(m.group("im") or 1)
        return GaussianRational(0, -im if m.group("sign") == "-" else im)
    m = _GAUSS.match(s)
    if not m or m.group("re") is None or m.group("sign") is None:
        raise ValueError(f"bad Gaussian rational {text!r}")
    try:
        re_part = Fraction(m.group("re"))
        im = Fraction(m.group("im") or 1)
    except ZeroDivisionError as exc:
        raise ValueError(f"bad Gaussian rational {text!r}") from exc
    return GaussianRational(re_part, -im if m.group("sign") == "-" else im)


def _format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Canonical string: ``"p/q"`` for rationals, ``"p/q+r/s i"`` otherwise."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _format_fraction(x.re)
        sign = "-" if x.im < 0 else "+"
        return f"{_format_fraction(x.re)}{sign}{_format_fraction(abs(x.im))} i"
    return _format_fraction(Fraction(x))


def field_of(values) -> str:
    """``"Q(i)"`` if any value has a nonzero imaginary part, else ``"Q"``."""
    for v in values:
        if isinstance(v, GaussianRational) and v.im != 0:
            return "Q(i)"
    return "Q"
