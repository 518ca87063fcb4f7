"""Truncated Laurent series with certified windows.

A series represents a germ in the local variable t around a point.  The
stored data is a window of exactly known coefficients:

* every exponent below ``lo`` has coefficient exactly zero,
* exponents ``lo .. lo+width-1`` have the stored coefficients,
* exponents at or above the window end are unknown, unless ``exact`` is set,
  in which case they are exactly zero (the series is a Laurent polynomial).

Construction strips leading zero coefficients (an exact operation, since the
coefficient domain has a decidable zero test), so the first stored
coefficient is nonzero whenever the window contains a nonzero coefficient.
The reported ``order`` is therefore always the exact local order, never a
truncation artifact.  A window that contains only zeros means "vanishes to
the end of the window"; asking such a series for its order raises rather
than guessing.

Every arithmetic operation propagates the smallest surviving window, so any
coefficient you can read out is certified.

Internally the window is held as polynomial numerators over one shared
denominator: coefficient k is nums[k]/den.  Convolution, inversion, and
differentiation then run entirely in the polynomial ring, and fraction
reduction happens once per coefficient that is actually read out, not once
per intermediate product.  Inversion uses the denominator-free recursion
M_0 = 1, M_k = -sum_{j=1..k} N_j * M_{k-j} * N_0^(j-1), under which
coefficient k of the inverse of sum N_k/D t^k is D*M_k / N_0^(k+1).
"""

from __future__ import annotations

from fractions import Fraction
from math import inf
from typing import Callable, Dict, List, Sequence, Tuple, Union

from .fieldelem import FieldElem, _as_univariate, _from_univariate, _reduce_many, _ulist_divmod
from .gaussian import ONE, GaussianRational
from .mpoly import MPoly

DEFAULT_TRUNCATION = 16
MAX_TRUNCATION = 128
_MAX_EXACT_WIDTH = 96

Coeffish = Union[int, Fraction, GaussianRational, FieldElem]


class SeriesWindowError(Exception):
    """A coefficient outside the certified window was requested."""


class UncertifiedOrderError(Exception):
    """The window shows only zeros, so the local order cannot be certified."""


class CompositionIndeterminateError(Exception):
    """A denominator series vanished to the end of its window."""


_ZERO_FE = FieldElem.const(0)
_ZERO_MP = MPoly()
_ONE_MP = MPoly.const(1)


class LaurentSeries:
    __slots__ = ("lo", "den", "nums", "exact", "_fe")

    def __init__(self, lo: int, coeffs: Sequence[Coeffish], exact: bool = False):
        cs = [FieldElem.coerce(c) for c in coeffs]
        den, nums = _common_denominator(cs)
        self._setup(lo, den, nums, exact)

    @classmethod
    def _raw(cls, lo: int, den: MPoly, nums: List[MPoly], exact: bool) -> "LaurentSeries":
        out = object.__new__(cls)
        out._setup(lo, den, nums, exact)
        return out

    def _setup(self, lo: int, den: MPoly, nums: List[MPoly], exact: bool) -> None:
        nums = list(nums)
        while nums and nums[0].is_zero:
            nums.pop(0)
            lo += 1
        if exact:
            while nums and nums[-1].is_zero:
                nums.pop()
        if exact and len(nums) > _MAX_EXACT_WIDTH:
            nums = nums[:_MAX_EXACT_WIDTH]
            exact = False
        if not nums:
            den = _ONE_MP
            if exact:
                lo = 0  # the exact zero series has one canonical form
        else:
            den, nums = _tighten(den, nums)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "nums", tuple(nums))
        object.__setattr__(self, "exact", bool(exact))
        object.__setattr__(self, "_fe", None)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(known_below: int = 0, exact: bool = False) -> "LaurentSeries":
        return LaurentSeries._raw(known_below, _ONE_MP, [], exact)

    @staticmethod
    def monomial(c: Coeffish, exponent: int = 0) -> "LaurentSeries":
        fe = FieldElem.coerce(c)
        return LaurentSeries._raw(exponent, fe.den, [fe.num], True)

    @staticmethod
    def one() -> "LaurentSeries":
        return LaurentSeries.monomial(1, 0)

    # -- window bookkeeping ---------------------------------------------------

    @property
    def coeffs(self) -> Tuple[FieldElem, ...]:
        cached = self._fe
        if cached is None:
            cached = tuple(FieldElem(n, self.den) for n in self.nums)
            object.__setattr__(self, "_fe", cached)
        return cached

    @property
    def hi(self) -> "int | float":
        """First unknown exponent (inf for exact Laurent polynomials)."""
        return inf if self.exact else self.lo + len(self.nums)

    @property
    def stored_hi(self) -> int:
        return self.lo + len(self.nums)

    @property
    def order(self) -> "int | None":
        """Exact local order, or None if the window contains only zeros."""
        return self.lo if self.nums else None

    @property
    def leading(self) -> FieldElem:
        if not self.nums:
            raise UncertifiedOrderError("series vanishes to the end of its window")
        return self.coefficient(self.lo)

    @property
    def is_zero_to_window(self) -> bool:
        return not self.nums

    def coefficient(self, e: int) -> FieldElem:
        if e < self.lo:
            return _ZERO_FE
        if e < self.stored_hi:
            return FieldElem(self.nums[e - self.lo], self.den)
        if self.exact:
            return _ZERO_FE
        raise SeriesWindowError(f"coefficient at exponent {e} is outside the certified window")

    def _num_at(self, e: int) -> MPoly:
        if self.lo <= e < self.stored_hi:
            return self.nums[e - self.lo]
        return _ZERO_MP

    def _min_order_bound(self) -> int:
        # every exponent below this is known to be zero
        return self.lo if self.nums else self.stored_hi

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "LaurentSeries":
        if isinstance(x, LaurentSeries):
            return x
        return LaurentSeries.monomial(FieldElem.coerce(x), 0)

    def __add__(self, other) -> "LaurentSeries":
        o = LaurentSeries._coerce(other)
        if self.exact and o.exact:
            if not self.nums and not o.nums:
                return LaurentSeries.zero(0, exact=True)
            lo = min(self._min_order_bound(), o._min_order_bound())
            hi = max(self.stored_hi, o.stored_hi)
            exact = True
        else:
            hi = int(min(self.hi, o.hi))
            lo = min(self.lo if self.nums else hi, o.lo if o.nums else hi)
            lo = min(lo, hi)
            exact = False
        d1, d2 = self.den, o.den
        if d1 is d2 or d1 == d2:
            vals = [self._num_at(e) + o._num_at(e) for e in range(lo, hi)]
            return LaurentSeries._raw(lo, d1, vals, exact)
        vals = []
        for e in range(lo, hi):
            n1, n2 = self._num_at(e), o._num_at(e)
            if n1.is_zero:
                vals.append(n2 * d1)
            elif n2.is_zero:
                vals.append(n1 * d2)
            else:
                vals.append(n1 * d2 + n2 * d1)
        return LaurentSeries._raw(lo, d1 * d2, vals, exact)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries._raw(self.lo, self.den, [-n for n in self.nums], self.exact)

    def __sub__(self, other) -> "LaurentSeries":
        return self + (-LaurentSeries._coerce(other))

    def __rsub__(self, other) -> "LaurentSeries":
        return LaurentSeries._coerce(other) + (-self)

    def __mul__(self, other) -> "LaurentSeries":
        o = LaurentSeries._coerce(other)
        a, b = self, o
        if not a.nums or not b.nums:
            if (a.exact and not a.nums) or (b.exact and not b.nums):
                return LaurentSeries.zero(0, exact=True)
            bound = a._min_order_bound() + b._min_order_bound()
            return LaurentSeries.zero(bound, exact=False)
        width_a = inf if a.exact else len(a.nums)
        width_b = inf if b.exact else len(b.nums)
        width = min(width_a, width_b)
        if width is inf:
            width = len(a.nums) + len(b.nums) - 1
            exact = True
        else:
            width = int(width)
            exact = False
        lo = a.lo + b.lo
        vals = MPoly.convolve(a.nums, b.nums, width)
        return LaurentSeries._raw(lo, a.den * b.den, vals, exact)

    __rmul__ = __mul__

    def scale(self, c: Coeffish) -> "LaurentSeries":
        fe = FieldElem.coerce(c)
        if fe.is_zero:
            return LaurentSeries.zero(0, exact=True)
        return LaurentSeries._raw(
            self.lo, self.den * fe.den, [n * fe.num for n in self.nums], self.exact
        )

    def shift_exponent(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries._raw(self.lo + k, self.den, list(self.nums), self.exact)

    def __pow__(self, n: int) -> "LaurentSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("series exponent must be a nonnegative integer")
        out = LaurentSeries.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self, width: "int | None" = None) -> "LaurentSeries":
        if not self.nums:
            if self.exact:
                raise ZeroDivisionError("inverse of the zero series")
            raise UncertifiedOrderError("cannot invert: order not certified within the window")
        if self.exact and len(self.nums) == 1:
            return LaurentSeries._raw(-self.lo, self.nums[0], [self.den], True)
        if self.exact:
            w = width if width is not None else DEFAULT_TRUNCATION
        else:
            w = len(self.nums)
            if width is not None:
                w = min(w, width)
        d = self.den
        n0 = self.nums[0]
        pows = [_ONE_MP]
        for _ in range(w):
            pows.append(pows[-1] * n0)
        nums = list(self.nums) + [_ZERO_MP] * (w - len(self.nums))
        # N_j * N_0^(j-1) is reused by every later step of the recursion
        nps: List[MPoly] = [_ZERO_MP]
        for j in range(1, w):
            nj = nums[j]
            nps.append(_ZERO_MP if nj.is_zero else nj * pows[j - 1])
        ms: List[MPoly] = [_ONE_MP]
        for k in range(1, w):
            ms.append(-MPoly.dot([(nps[j], ms[k - j]) for j in range(1, k + 1)]))
        dconst = d.is_constant() and d.constant_value() == ONE
        out: List[MPoly] = []
        for k in range(w):
            m = ms[k]
            if m.is_zero:
                out.append(_ZERO_MP)
                continue
            num = m * pows[w - 1 - k]
            if not dconst:
                num = num * d
            out.append(num)
        return LaurentSeries._raw(-self.lo, pows[w], out, False)

    def div(self, other, width: "int | None" = None) -> "LaurentSeries":
        o = LaurentSeries._coerce(other)
        if not o.nums:
            if o.exact:
                raise ZeroDivisionError("division by the zero series")
            raise CompositionIndeterminateError(
                "denominator series vanishes to the end of its window"
            )
        if width is None and not self.exact and self.nums:
            width = len(self.nums)
        return self * o.inverse(width=width)

    def __truediv__(self, other) -> "LaurentSeries":
        return self.div(other)

    def derivative(self) -> "LaurentSeries":
        vals = [n.scale(self.lo + k) for k, n in enumerate(self.nums)]
        return LaurentSeries._raw(self.lo - 1, self.den, vals, self.exact)

    def map_coeffs(self, fn: Callable[[FieldElem], FieldElem]) -> "LaurentSeries":
        return LaurentSeries(self.lo, [fn(c) for c in self.coeffs], self.exact)

    def canonical(self) -> "LaurentSeries":
        """Cancel den factors shared by the whole window.

        Worth calling once per produced window: unreduced denominators fatten
        every later convolution that consumes the series.  Joint reduction is
        as far as the shared form shrinks; finer per-coefficient cancellation
        would regrow when coefficients are put back over one denominator.
        """
        if not self.nums:
            return self
        den, nums = _reduce_many(self.den, list(self.nums))
        return LaurentSeries._raw(self.lo, den, nums, self.exact)

    def truncate(self, width: int) -> "LaurentSeries":
        if len(self.nums) <= width:
            return self
        return LaurentSeries._raw(self.lo, self.den, list(self.nums[:width]), False)

    # -- comparison and display -----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.exact != other.exact or self.lo != other.lo:
            return False
        if len(self.nums) != len(other.nums):
            return False
        return all(
            (a * other.den) == (b * self.den)
            for a, b in zip(self.nums, other.nums)
        )

    def __hash__(self):
        raise TypeError("LaurentSeries is not hashable")

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            e = self.lo + i
            cs = str(c)
            if any(ch in cs[1:] for ch in "+-") or "/" in cs:
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            else:
                te = "t" if e == 1 else f"t^{e}"
                parts.append(te if cs == "1" else f"{cs}*{te}")
        body = " + ".join(parts) if parts else "0"
        if self.exact:
            return body
        return f"{body} + O(t^{self.stored_hi})"

    def __repr__(self) -> str:
        return f"LaurentSeries({self})"


# -- shared-denominator plumbing ----------------------------------------------


def _tighten(den: MPoly, nums: List[MPoly]) -> tuple[MPoly, List[MPoly]]:
    """Cheap normalization: pull out common monomial content, fold constants."""
    if not den.is_constant():
        common: Dict[str, int] = {
            v: e for v, e in zip(den.vars, den.min_exponents()) if e
        }
        for n in nums:
            if not common:
                break
            if n.is_zero:
                continue
            mins = dict(zip(n.vars, n.min_exponents()))
            common = {
                v: min(e, mins.get(v, 0))
                for v, e in common.items()
                if mins.get(v, 0)
            }
        if common:
            den = den.shift_exponents(tuple(common.get(v, 0) for v in den.vars))
            nums = [
                n if n.is_zero
                else n.shift_exponents(tuple(common.get(v, 0) for v in n.vars))
                for n in nums
            ]
    if den.is_constant():
        c = den.constant_value()
        if c != ONE:
            inv = c.inverse()
            nums = [n.scale(inv) for n in nums]
        return _ONE_MP, nums
    return den, nums


def _common_denominator(cs: Sequence[FieldElem]) -> tuple[MPoly, List[MPoly]]:
    """Shared denominator for reduced fractions, tracking repeated factors.

    Denominators from the reduction pipeline are products of a monomial and a
    few recurring core polynomials (powers of the window's leading numerators,
    shifted coefficient denominators).  Factoring against the cores already
    seen keeps the common denominator at the true least common multiple in
    all the structured cases; an unrecognized multivariate core is treated as
    atomic, which can only overshoot, never miss.
    """
    if not cs:
        return _ONE_MP, []
    if all(c.den.is_constant() for c in cs):
        nums = []
        for c in cs:
            k = c.den.constant_value()
            nums.append(c.num if k == ONE else c.num.scale(k.inverse()))
        return _ONE_MP, nums

    cores: List[MPoly] = []  # monic, registered in order of first sight
    core_lists: List["list | None"] = []  # univariate coefficient lists
    core_vars: List["str | None"] = []
    core_max: List[int] = []
    mono_max: Dict[str, int] = {}
    parsed = []  # per coefficient: (scaled num, mono exps, {core index: exponent})

    for c in cs:
        d = c.den
        num = c.num
        mono: Dict[str, int] = {}
        mins = d.min_exponents()
        if any(mins):
            mono = {v: e for v, e in zip(d.vars, mins) if e}
            d = d.shift_exponents(mins)
        mults: Dict[int, int] = {}
        if not d.is_constant():
            uv = d.used_vars()
            if len(uv) == 1:
                v = uv[0]
                lst = _as_univariate(d, v)
                for idx, flst in enumerate(core_lists):
                    if core_vars[idx] != v or flst is None:
                        continue
                    e = 0
                    while len(lst) >= len(flst) and len(lst) > 1:
                        q, r = _ulist_divmod(lst, flst)
                        if r:
                            break
                        lst = q
                        e += 1
                    if e:
                        mults[idx] = e
                if len(lst) > 1:
                    lead = lst[-1]
                    if lead != ONE:
                        inv = lead.inverse()
                        lst = [x * inv for x in lst]
                        num = num.scale(inv)
                    idx = len(cores)
                    cores.append(_from_univariate(lst, v))
                    core_lists.append(lst)
                    core_vars.append(v)
                    core_max.append(0)
                    mults[idx] = 1
                    lst = lst[-1:]
                # residual constant folds into the numerator
                c0 = lst[0] if lst else ONE
                if c0 != ONE:
                    num = num.scale(c0.inverse())
            else:
                for idx, f in enumerate(cores):
                    if core_vars[idx] is None and f == d:
                        mults[idx] = mults.get(idx, 0) + 1
                        break
                else:
                    idx = len(cores)
                    cores.append(d)
                    core_lists.append(None)
                    core_vars.append(None)
                    core_max.append(0)
                    mults[idx] = 1
        elif d.constant_value() != ONE:
            num = num.scale(d.constant_value().inverse())
        for v, e in mono.items():
            if e > mono_max.get(v, 0):
                mono_max[v] = e
        for idx, e in mults.items():
            if e > core_max[idx]:
                core_max[idx] = e
        parsed.append((num, mono, mults))

    den = _ONE_MP
    for v, e in sorted(mono_max.items()):
        den = den * MPoly.var(v, e)
    core_pows: List[List[MPoly]] = []
    for f, top in zip(cores, core_max):
        tab = [_ONE_MP]
        for _ in range(top):
            tab.append(tab[-1] * f)
        core_pows.append(tab)
        den = den * tab[top]

    nums = []
    for num, mono, mults in parsed:
        if num.is_zero:
            nums.append(_ZERO_MP)
            continue
        for v, top in mono_max.items():
            gap = top - mono.get(v, 0)
            if gap:
                num = num * MPoly.var(v, gap)
        for idx, top in enumerate(core_max):
            gap = top - mults.get(idx, 0)
            if gap:
                num = num * core_pows[idx][gap]
        nums.append(num)
    return den, nums


def ls_log_derivative(s: LaurentSeries) -> LaurentSeries:
    """S'/S.  The leading coefficient is the exact local order."""
    if not s.nums:
        if s.exact:
            raise ZeroDivisionError("log-derivative of the zero series")
        raise UncertifiedOrderError("log-derivative needs a certified leading term")
    return s.derivative().div(s)


def series_of_ratfunc(
    r: FieldElem,
    offset: Coeffish = 0,
    width: int = DEFAULT_TRUNCATION,
    var: str = "z",
    center_var: str = "zhat",
) -> LaurentSeries:
    """Expand a rational function of ``var`` around ``center_var + offset``.

    The result is a series in the local variable t with coefficients that are
    exact field elements in ``center_var`` and any parameter symbols.  When
    both numerator and denominator are polynomials the expansion terminates
    and the series is exact.
    """
    num = _taylor_poly(r.num, offset, width, var, center_var)
    den = _taylor_poly(r.den, offset, width, var, center_var)
    return num.div(den, width=width)


def _taylor_poly(p: MPoly, offset: Coeffish, width: int, var: str, center_var: str) -> LaurentSeries:
    center = MPoly.var(center_var) + MPoly.const(offset)
    coeffs: list[FieldElem] = []
    cur = p
    fact = Fraction(1)
    m = 0
    while m < width and not cur.is_zero:
        val = cur.compose(var, center)
        coeffs.append(FieldElem(val) * FieldElem.const(Fraction(1) / fact))
        cur = cur.derivative(var)
        m += 1
        fact *= m
    exact = cur.is_zero
    return LaurentSeries(0, coeffs, exact=exact)


def compose_rational(
    num_coeffs: Sequence[FieldElem],
    den_coeffs: Sequence[FieldElem],
    s: LaurentSeries,
    offset: Coeffish = 0,
    width: int = DEFAULT_TRUNCATION,
) -> LaurentSeries:
    """Evaluate a rational function of w at w = S(t), z = center + offset + t.

    ``num_coeffs`` and ``den_coeffs`` list the w-power coefficients (rational
    functions of z) of numerator and denominator.
    """
    num = _poly_in_w_at_series(num_coeffs, s, offset, width)
    den = _poly_in_w_at_series(den_coeffs, s, offset, width)
    return num.div(den, width=width)


def _poly_in_w_at_series(
    coeffs: Sequence[FieldElem], s: LaurentSeries, offset: Coeffish, width: int
) -> LaurentSeries:
    acc = LaurentSeries.zero(0, exact=True)
    for c in reversed(list(coeffs)):
        acc = acc * s + series_of_ratfunc(c, offset, width)
    return acc
