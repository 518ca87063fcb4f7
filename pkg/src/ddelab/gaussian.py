"""Exact arithmetic in Q(i), the field of Gaussian rationals.

A GaussianRational is a pair of arbitrary-precision rationals (re, im)
representing re + im*i.  It is the coefficient domain for every symbolic
computation in this package: no floats enter until a value is explicitly
converted with complex().

Instances are immutable and hashable, so they can key dictionaries (shift
offsets in delay polynomials, for example).  Components are kept in lowest
terms with a positive denominator, which makes the representation canonical
and equality structural.  gmpy2's mpq is used as the rational backend when
installed (it is hash- and equality-compatible with Fraction); plain
Fraction otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

_RATIONAL_TYPES = (int, Fraction) if _Q is Fraction else (int, Fraction, type(_Q()))
_Q0 = _Q(0)

Rationalish = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re: Fraction = _Q0, im: Fraction = _Q0):
        self.re = re
        self.im = im

    @staticmethod
    def coerce(x: Rationalish) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Fraction):
            # via ints: a Fraction built from gmp integers trips mpq()
            return GaussianRational(_Q(int(x.numerator), int(x.denominator)))
        if isinstance(x, _RATIONAL_TYPES):
            return GaussianRational(_Q(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Field norm re^2 + im^2 (a nonnegative rational)."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("inverse of zero Gaussian rational")
            return GaussianRational(1 / self.re)
        n = self.norm()
        return GaussianRational(self.re / n, -self.im / n)

    def __add__(self, other: Rationalish) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Rationalish) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Rationalish) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: Rationalish) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        # real operands are by far the common case; skip the complex formula
        if not self.im:
            if not self.re:
                return ZERO
            return GaussianRational(self.re * o.re, self.re * o.im)
        if not o.im:
            return GaussianRational(self.re * o.re, self.im * o.re)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Rationalish) -> "GaussianRational":
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other: Rationalish) -> "GaussianRational":
        return GaussianRational.coerce(other) * self.inverse()

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int) -> "GaussianRational":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, _RATIONAL_TYPES):
            other = GaussianRational.coerce(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.re:
            parts.append(str(self.re))
        if self.im:
            if self.im == 1:
                s = "i"
            elif self.im == -1:
                s = "-i"
            else:
                s = f"{self.im}*i"
            if parts and not s.startswith("-"):
                parts.append("+" + s)
            else:
                parts.append(s)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational()
ONE = GaussianRational(_Q(1))
I = GaussianRational(_Q(0), _Q(1))


def gauss(re: Rationalish = 0, im: Rationalish = 0) -> GaussianRational:
    """Convenience constructor from ints, Fractions, or strings like '2/3'."""
    def frac(x):
        if isinstance(x, str):
            return _Q(Fraction(x))
        if isinstance(x, GaussianRational):
            if not x.is_real:
                raise ValueError("component must be real")
            return x.re
        return _Q(x)

    return GaussianRational(frac(re), frac(im))


def gaussian_sqrt(g: GaussianRational) -> "GaussianRational | None":
    """Exact square root in Q(i) if one exists, else None.

    Solves (x + y*i)^2 = re + im*i over the rationals.  Used by the
    discriminant-is-a-square convenience for quadratic denominators.
    """
    if g.is_zero:
        return ZERO
    n = g.norm()
    s = _fraction_sqrt(n)
    if s is None:
        return None
    # x^2 = (re + |g|) / 2, y = im / (2x); handle re + s == 0 (pure imaginary root).
    half = (g.re + s) / 2
    x2 = _fraction_sqrt(half)
    if x2 is not None and x2 != 0:
        y = g.im / (2 * x2)
        cand = GaussianRational(x2, y)
        if cand * cand == g:
            return cand
    # fall back: root may be purely imaginary (re + s == 0 case).
    half2 = (s - g.re) / 2
    y2 = _fraction_sqrt(half2)
    if y2 is not None:
        for ycand in (y2, -y2):
            xden = 2 * ycand
            if xden != 0:
                x = g.im / xden
                cand = GaussianRational(x, ycand)
                if cand * cand == g:
                    return cand
            elif g.im == 0:
                cand = GaussianRational(Fraction(0), ycand)
                if cand * cand == g:
                    return cand
    return None


def _fraction_sqrt(f) -> "Fraction | None":
    if f < 0:
        return None
    from math import isqrt

    pn, pd = isqrt(f.numerator), isqrt(f.denominator)
    if pn * pn == f.numerator and pd * pd == f.denominator:
        return _Q(int(pn), int(pd))
    return None
