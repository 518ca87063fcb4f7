"""Delay-differential equation classes and delay-differential polynomials.

Three equation shapes are supported, all written with the difference
w(z+1) - w(z-1) on the left:

  log-deriv        w(z+1) - w(z-1) + a(z) w'(z)/w(z) = P(z,w)/Q(z,w)
  pure-log-deriv   w(z+1) - w(z-1) + a(z) w'(z)/w(z) = b(z)
  inverse-square   w(z+1) - w(z-1) = (a(z) w'(z) + b(z) w(z)) / w(z)^2 + c(z)

Every equation also carries the derived normal form

  w(z+1) = w(z-1) + N(z, w(z), w'(z))

which is what the cascade engine consumes.  Both views are exact.

The module also provides general delay-differential polynomials with exact
substitution of rational candidates, degree reports for the right-hand side
as a rational map of w, and resultants in w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .exprparse import parse_expression
from .fieldelem import FieldElem, rf_derivative, rf_shift
from .gaussian import GaussianRational, gauss, gaussian_sqrt
from .laurent import (
    DEFAULT_TRUNCATION,
    LaurentSeries,
    compose_rational,
    series_of_ratfunc,
)
from .mpoly import MPoly

_ZERO = FieldElem.const(0)
_ONE = FieldElem.const(1)


class EquationError(ValueError):
    """Raised when an equation fails structural validation."""


class EqKind(str, Enum):
    LOG_DERIV = "log-deriv"
    PURE_LOG_DERIV = "pure-log-deriv"
    INVERSE_SQUARE = "inverse-square"


# ---------------------------------------------------------------------------
# polynomials in w with rational-function coefficients


class WPoly:
    """Polynomial in w over the field of rational functions of z.

    Coefficients are stored by ascending power of w; the leading coefficient
    is never identically zero (the zero polynomial stores an empty tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[FieldElem]):
        cs = [FieldElem.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs: Tuple[FieldElem, ...] = tuple(cs)

    @staticmethod
    def const(c) -> "WPoly":
        return WPoly([FieldElem.coerce(c)])

    @staticmethod
    def w() -> "WPoly":
        return WPoly([_ZERO, _ONE])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> FieldElem:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.leading == _ONE

    def coefficient(self, k: int) -> FieldElem:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def evaluate(self, x: FieldElem) -> FieldElem:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def scale(self, c: FieldElem) -> "WPoly":
        return WPoly([c * a for a in self.coeffs])

    def map_coeffs(self, fn) -> "WPoly":
        return WPoly([fn(a) for a in self.coeffs])

    def __add__(self, other: "WPoly") -> "WPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return WPoly(
            [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    def __sub__(self, other: "WPoly") -> "WPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return WPoly(
            [self.coefficient(k) - other.coefficient(k) for k in range(n)]
        )

    def __mul__(self, other: "WPoly") -> "WPoly":
        if self.is_zero or other.is_zero:
            return WPoly([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return WPoly(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WPoly):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        raise TypeError("WPoly is not hashable")

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                head = "" if c == _ONE else f"({c})*"
                parts.append(f"{head}w" + (f"^{k}" if k > 1 else ""))
        return " + ".join(reversed(parts))


@dataclass(frozen=True)
class FactoredDenominator:
    """Denominator supplied in factored form: product of (w - root)^mult.

    An optional residual factor covers a part the supplier asserts has no
    roots rational in z; expansion must reproduce the stored denominator.
    """

    factors: Tuple[Tuple[FieldElem, int], ...]
    residual: Optional[WPoly] = None

    def __post_init__(self):
        roots = [r for r, _ in self.factors]
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if roots[i] == roots[j]:
                    raise EquationError("duplicate denominator factor roots")
        for _, m in self.factors:
            if m < 1:
                raise EquationError("factor multiplicity must be positive")

    def expand(self) -> WPoly:
        acc = WPoly.const(1)
        for root, mult in self.factors:
            lin = WPoly([_ZERO - root, _ONE])
            for _ in range(mult):
                acc = acc * lin
        if self.residual is not None:
            acc = acc * self.residual
        return acc

    def roots(self) -> Tuple[FieldElem, ...]:
        return tuple(r for r, _ in self.factors)


@dataclass(frozen=True)
class DegreeReport:
    """Degrees in w of the rational right-hand side P/Q."""

    deg_num: int
    deg_den: int
    deg_map: int  # max of the two: the degree of P/Q as a map of w


# ---------------------------------------------------------------------------
# the equation object


@dataclass(frozen=True)
class DelayDiffEq:
    kind: EqKind
    a: FieldElem = _ZERO
    b: FieldElem = _ZERO
    c: FieldElem = _ZERO
    p_poly: Optional[WPoly] = None
    q_poly: Optional[WPoly] = None
    q_factors: Optional[FactoredDenominator] = None
    name: str = ""
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind in (EqKind.PURE_LOG_DERIV, EqKind.INVERSE_SQUARE):
            if self.a.is_zero:
                raise EquationError(
                    f"a(z) identically zero is outside the {self.kind.value} class"
                )
        if self.kind == EqKind.LOG_DERIV:
            if self.p_poly is None or self.q_poly is None:
                raise EquationError("log-deriv equations need both P and Q")
            if self.q_poly.is_zero:
                raise EquationError("denominator Q is identically zero")
            if self.q_poly.coefficient(0).is_zero:
                raise EquationError("Q(z, 0) must not vanish identically")
            if self.q_factors is not None:
                if self.q_factors.expand() != self.q_poly:
                    raise EquationError(
                        "factored denominator does not expand to Q"
                    )

    def with_name(self, name: str) -> "DelayDiffEq":
        return DelayDiffEq(
            self.kind, self.a, self.b, self.c, self.p_poly, self.q_poly,
            self.q_factors, name, self.notes,
        )


def make_log_deriv(
    a: FieldElem,
    p_poly: WPoly,
    q_factors: FactoredDenominator,
    name: str = "",
) -> DelayDiffEq:
    """Build a log-deriv equation, normalizing the denominator to monic."""
    q = q_factors.expand()
    notes: Tuple[str, ...] = ()
    if not q.is_monic:
        lc = q.leading
        q = q.scale(lc.inverse())
        p_poly = p_poly.scale(lc.inverse())
        scaled = tuple(
            (r, m) for r, m in q_factors.factors
        )
        res = q_factors.residual.scale(lc.inverse()) if q_factors.residual else None
        q_factors = FactoredDenominator(scaled, res)
        notes = ("denominator normalized to monic",)
    return DelayDiffEq(
        EqKind.LOG_DERIV, a=a, p_poly=p_poly, q_poly=q, q_factors=q_factors,
        name=name, notes=notes,
    )


def make_pure_log_deriv(a: FieldElem, b: FieldElem, name: str = "") -> DelayDiffEq:
    return DelayDiffEq(EqKind.PURE_LOG_DERIV, a=a, b=b, name=name)


def make_inverse_square(
    a: FieldElem, b: FieldElem, c: FieldElem = _ZERO, name: str = ""
) -> DelayDiffEq:
    return DelayDiffEq(EqKind.INVERSE_SQUARE, a=a, b=b, c=c, name=name)


# ---------------------------------------------------------------------------
# degree data and resultants


def rational_degree(eq: DelayDiffEq) -> DegreeReport:
    """Degrees in w of the right-hand side, driving pole-order growth."""
    if eq.kind != EqKind.LOG_DERIV:
        raise ValueError("degree report applies to the log-deriv class")
    dp = eq.p_poly.degree
    dq = eq.q_poly.degree
    return DegreeReport(dp, dq, max(dp, dq))


def resultant_in_w(p: WPoly, q: WPoly) -> FieldElem:
    """Resultant with the convention lc(P)^deg(Q) * prod Q(root_i(P)).

    Zero exactly when P and Q share a root over the algebraic closure of
    the coefficient field.  Computed as a Sylvester determinant with exact
    fraction arithmetic.
    """
    if p.is_zero or q.is_zero:
        raise ValueError("resultant of a zero polynomial")
    m, n = p.degree, q.degree
    if m == 0:
        return p.coeffs[0] ** n
    if n == 0:
        return q.coeffs[0] ** m
    size = m + n
    pd = list(reversed(p.coeffs))
    qd = list(reversed(q.coeffs))
    rows = []
    for i in range(n):
        rows.append([_ZERO] * i + pd + [_ZERO] * (size - m - 1 - i))
    for j in range(m):
        rows.append([_ZERO] * j + qd + [_ZERO] * (size - n - 1 - j))
    return _det(rows)


def _det(rows) -> FieldElem:
    n = len(rows)
    sign = 1
    det = _ONE
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if not rows[r][col].is_zero), None
        )
        if pivot is None:
            return _ZERO
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        pv = rows[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor.is_zero:
                continue
            rows[r] = [
                rows[r][k] - factor * rows[col][k] for k in range(n)
            ]
    return det if sign == 1 else _ZERO - det


# ---------------------------------------------------------------------------
# the normal form w(z+1) = w(z-1) + N(z, w, w')


def normal_form_series(
    eq: DelayDiffEq,
    offset,
    w: LaurentSeries,
    width: int = DEFAULT_TRUNCATION,
) -> LaurentSeries:
    """Evaluate N at z = zhat + offset + t with w given as a series in t."""
    wp = w.derivative()
    if eq.kind == EqKind.PURE_LOG_DERIV:
        a_s = series_of_ratfunc(eq.a, offset, width)
        return series_of_ratfunc(eq.b, offset, width) - a_s * wp.div(w, width)
    if eq.kind == EqKind.LOG_DERIV:
        rhs = compose_rational(
            eq.p_poly.coeffs, eq.q_poly.coeffs, w, offset, width
        )
        a_s = series_of_ratfunc(eq.a, offset, width)
        return rhs - a_s * wp.div(w, width)
    # inverse-square
    a_s = series_of_ratfunc(eq.a, offset, width)
    b_s = series_of_ratfunc(eq.b, offset, width)
    c_s = series_of_ratfunc(eq.c, offset, width)
    winv = w.inverse(width)
    return a_s * wp * winv * winv + b_s * winv + c_s


def exact_residual(eq: DelayDiffEq, w: FieldElem) -> FieldElem:
    """w(z+1) - w(z-1) - N for a rational candidate; zero iff it solves."""
    if w.is_zero:
        raise ZeroDivisionError("candidate w identically zero")
    wp = rf_derivative(w)
    if eq.kind == EqKind.PURE_LOG_DERIV:
        n = eq.b - eq.a * wp / w
    elif eq.kind == EqKind.LOG_DERIV:
        n = eq.p_poly.evaluate(w) / eq.q_poly.evaluate(w) - eq.a * wp / w
    else:
        n = (eq.a * wp + eq.b * w) / (w * w) + eq.c
    return rf_shift(w, 1) - rf_shift(w, -1) - n


# ---------------------------------------------------------------------------
# general delay-differential polynomials

# a monomial maps (shift, derivative order) -> exponent; stored sorted
Monomial = Tuple[Tuple[Tuple[GaussianRational, int], int], ...]


def _mono(factors: Mapping[Tuple[object, int], int]) -> Monomial:
    items = []
    for (shift, order), e in factors.items():
        if e == 0:
            continue
        items.append(((GaussianRational.coerce(shift), order), e))
    items.sort(key=lambda it: (it[0][0].re, it[0][0].im, it[0][1]))
    return tuple(items)


@dataclass(frozen=True)
class DDPolynomial:
    """Sum of coefficient * product of w^(m)(z + c)^e factors."""

    terms: Tuple[Tuple[FieldElem, Monomial], ...]

    @staticmethod
    def build(terms) -> "DDPolynomial":
        out = []
        for coeff, factors in terms:
            c = FieldElem.coerce(coeff)
            if c.is_zero:
                continue
            out.append((c, _mono(factors)))
        return DDPolynomial(tuple(out))

    def substitute_rational(self, candidate: FieldElem) -> FieldElem:
        """Replace w^(m)(z+c) by the shifted m-th derivative of candidate."""
        derivs = {0: candidate}

        def deriv(m: int) -> FieldElem:
            while m not in derivs:
                k = max(derivs)
                derivs[k + 1] = rf_derivative(derivs[k])
            return derivs[m]

        total = _ZERO
        for coeff, mono in self.terms:
            prod = coeff
            for (shift, order), e in mono:
                prod = prod * rf_shift(deriv(order), shift) ** e
            total = total + prod
        return total

    def __add__(self, other: "DDPolynomial") -> "DDPolynomial":
        return DDPolynomial(self.terms + other.terms)


def cleared_polynomial(eq: DelayDiffEq) -> DDPolynomial:
    """The equation with denominators cleared, as residual = 0.

    Multiplies through by w for pure-log-deriv, w^2 for inverse-square and
    w * Q(z, w) for log-deriv, so substituting an exact solution gives zero.
    """
    W = (gauss(0), 0)  # w(z)
    WP = (gauss(0), 1)  # w'(z)
    WPLUS = (gauss(1), 0)
    WMINUS = (gauss(-1), 0)
    if eq.kind == EqKind.PURE_LOG_DERIV:
        return DDPolynomial.build([
            (_ONE, {WPLUS: 1, W: 1}),
            (_ZERO - _ONE, {WMINUS: 1, W: 1}),
            (eq.a, {WP: 1}),
            (_ZERO - eq.b, {W: 1}),
        ])
    if eq.kind == EqKind.INVERSE_SQUARE:
        return DDPolynomial.build([
            (_ONE, {WPLUS: 1, W: 2}),
            (_ZERO - _ONE, {WMINUS: 1, W: 2}),
            (_ZERO - eq.a, {WP: 1}),
            (_ZERO - eq.b, {W: 1}),
            (_ZERO - eq.c, {W: 2}),
        ])
    terms = []
    for k, qk in enumerate(eq.q_poly.coeffs):
        if qk.is_zero:
            continue
        terms.append((qk, {WPLUS: 1, W: k + 1}))
        terms.append((_ZERO - qk, {WMINUS: 1, W: k + 1}))
        terms.append((eq.a * qk, {WP: 1, W: k}))
    for k, pk in enumerate(eq.p_poly.coeffs):
        if pk.is_zero:
            continue
        terms.append((_ZERO - pk, {W: k + 1}))
    return DDPolynomial.build(terms)


# ---------------------------------------------------------------------------
# the z -> -z mirror, used to run cascades backward


def _flip_z(r: FieldElem) -> FieldElem:
    return r.compose_var("z", MPoly.const(-1) * MPoly.var("z"))


def mirror(eq: DelayDiffEq) -> DelayDiffEq:
    """Transform v(z) = w(-z); backward steps of eq are forward steps here."""
    neg = _ZERO - _ONE
    if eq.kind == EqKind.PURE_LOG_DERIV:
        return make_pure_log_deriv(
            _flip_z(eq.a), neg * _flip_z(eq.b), name=eq.name + "~mirror"
        )
    if eq.kind == EqKind.INVERSE_SQUARE:
        return make_inverse_square(
            _flip_z(eq.a), neg * _flip_z(eq.b), neg * _flip_z(eq.c),
            name=eq.name + "~mirror",
        )
    p_m = eq.p_poly.map_coeffs(lambda c: neg * _flip_z(c))
    factors = tuple((_flip_z(r), m) for r, m in eq.q_factors.factors) \
        if eq.q_factors else None
    q_f = FactoredDenominator(
        factors,
        eq.q_factors.residual.map_coeffs(_flip_z) if eq.q_factors and eq.q_factors.residual else None,
    ) if factors is not None else None
    if q_f is None:
        q_m = eq.q_poly.map_coeffs(_flip_z)
        return DelayDiffEq(
            EqKind.LOG_DERIV, a=_flip_z(eq.a), p_poly=p_m, q_poly=q_m,
            name=eq.name + "~mirror",
        )
    return make_log_deriv(_flip_z(eq.a), p_m, q_f, name=eq.name + "~mirror")


# ---------------------------------------------------------------------------
# quadratic factorization convenience


def _poly_sqrt(p: MPoly, var: str = "z") -> Optional[MPoly]:
    """Exact square root of a univariate polynomial, or None."""
    used = p.used_vars()
    if any(v != var for v in used):
        return None
    if p.is_zero:
        return MPoly.zero()
    deg = p.degree(var)
    if deg % 2:
        return None
    lc = p.leading_coefficient()
    s = gaussian_sqrt(lc)
    if s is None:
        return None
    d = deg // 2
    r = MPoly.const(s) * MPoly.var(var) ** d
    two_s = MPoly.const(s * 2)
    diff = p - r * r
    while not diff.is_zero:
        k = diff.degree(var)
        if k < d:
            return None
        idx = diff.vars.index(var)
        t = next(c for e, c in diff.terms.items() if e[idx] == k)
        r = r + MPoly.const(t / (s * 2)) * MPoly.var(var) ** (k - d)
        diff = p - r * r
    return r


def quadratic_roots(q: WPoly) -> Optional[Tuple[FieldElem, FieldElem]]:
    """Roots of a degree-2 denominator when rational in z, else None.

    Convenience check for suppliers of factored denominators: decides
    whether the discriminant is a square of a rational function.
    """
    if q.degree != 2:
        raise ValueError("quadratic root check needs degree exactly 2")
    lc = q.leading
    beta = q.coefficient(1) / lc
    gamma = q.coefficient(0) / lc
    disc = beta * beta - FieldElem.const(4) * gamma
    if disc.is_zero:
        half = FieldElem.const(Fraction(1, 2))
        r = _ZERO - beta * half
        return (r, r)
    prod = disc.num * disc.den
    root = _poly_sqrt(prod)
    if root is None:
        return None
    sqrt_disc = FieldElem(root, disc.den)
    half = FieldElem.const(Fraction(1, 2))
    return (
        (_ZERO - beta + sqrt_disc) * half,
        (_ZERO - beta - sqrt_disc) * half,
    )


# ---------------------------------------------------------------------------
# corpus entry parsing


def parse_equation(entry: Mapping) -> DelayDiffEq:
    """Build an equation from a corpus entry dict (see the corpus module)."""
    kind_raw = entry.get("class")
    try:
        kind = EqKind(kind_raw)
    except ValueError:
        raise EquationError(f"unknown equation class {kind_raw!r}")
    name = str(entry.get("id", ""))

    def coeff(key: str, required: bool) -> FieldElem:
        if key not in entry:
            if required:
                raise EquationError(f"entry {name!r} is missing {key!r}")
            return _ZERO
        return parse_expression(str(entry[key]), ("z",))

    if kind == EqKind.PURE_LOG_DERIV:
        return make_pure_log_deriv(coeff("a", True), coeff("b", True), name)
    if kind == EqKind.INVERSE_SQUARE:
        return make_inverse_square(
            coeff("a", True), coeff("b", True), coeff("c", False), name
        )
    if "p_coeffs" not in entry or "q_factors" not in entry:
        raise EquationError(
            f"entry {name!r} needs p_coeffs and q_factors for log-deriv"
        )
    p = WPoly([parse_expression(str(s), ("z",)) for s in entry["p_coeffs"]])
    factors = []
    for f in entry["q_factors"]:
        root = parse_expression(str(f["root"]), ("z",))
        factors.append((root, int(f.get("mult", 1))))
    residual = None
    if "q_residual" in entry:
        residual = WPoly(
            [parse_expression(str(s), ("z",)) for s in entry["q_residual"]]
        )
    return make_log_deriv(
        coeff("a", True), p, FactoredDenominator(tuple(factors), residual), name
    )
