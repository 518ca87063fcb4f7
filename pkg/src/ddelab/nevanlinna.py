"""Value-distribution measurements over exactly known singularity inventories.

The models measured here (elliptic solution, exponential, rational, and
powers of these) come with closed-form pole and zero sets, so the counting
side of the characteristic is integer-exact and the only numeric error
lives in the proximity integral.  That integral is taken over each circle
by locating the crossings of log|f| = 0 first and then applying iterated
trapezoid refinement with Richardson extrapolation on every smooth arc in
between; a radius is nudged by one part in a million when a pole sits
within a thousandth of it.

Order and hyper-order estimates are least-squares slopes over the sampled
grid, reported with confidence widths and never as asymptotic claims.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .model import DelayDiffEq, EqKind, rational_degree
from .wp import PoleSignal, WeierstrassP

_JITTER = 1e-6
_POLE_PROXIMITY = 1e-3
_QUAD_TOL = 1e-9
_SCAN_NODES = 1024


# ---------------------------------------------------------------------------
# models over the bare p-function, for the degree identity spot check


class WpModel:
    """The p-function itself as a measurable model."""

    tag = "wp"

    __slots__ = ("engine", "_zero_rep")

    def __init__(self, engine: WeierstrassP):
        self.engine = engine
        self._zero_rep = engine.value_preimage(0j)

    def evaluate(self, z: complex) -> complex:
        return self.engine.eval(z)[0]

    def log_abs(self, z: complex) -> float:
        return math.log(abs(self.evaluate(z)))

    def poles_upto(self, radius: float) -> List[Tuple[complex, int]]:
        return [(p, 2) for p in self.engine.lattice_points_in_disk(radius)]

    def zeros_upto(self, radius: float) -> List[Tuple[complex, int]]:
        return self.value_points(0j, radius)

    def value_points(self, v: complex, radius: float) -> List[Tuple[complex, int]]:
        u = self._zero_rep if v == 0 else self.engine.value_preimage(complex(v))
        eng = self.engine
        scale = min(abs(eng.omega1), abs(eng.omega2))
        if abs(eng.reduce(2.0 * u)) <= 1e-6 * scale:
            # u and -u coincide mod the lattice: one double point per cell
            return [(p, 2) for p in eng.lattice_points_in_disk(radius, u)]
        out = [(p, 1) for p in eng.lattice_points_in_disk(radius, u)]
        out += [(p, 1) for p in eng.lattice_points_in_disk(radius, -u)]
        out.sort(key=lambda t: (abs(t[0]), t[0].real, t[0].imag))
        return out

    def describe(self) -> dict:
        return {"tag": self.tag, "g2": str(self.engine.g2), "g3": str(self.engine.g3)}


class PowerModel:
    """An integer power of a base model; inventories scale by the exponent."""

    tag = "power"

    __slots__ = ("base", "k")

    def __init__(self, base, k: int):
        if k < 1:
            raise ValueError("exponent must be a positive integer")
        self.base = base
        self.k = int(k)

    def evaluate(self, z: complex) -> complex:
        return self.base.evaluate(z) ** self.k

    def log_abs(self, z: complex) -> float:
        return self.k * self.base.log_abs(z)

    def poles_upto(self, radius: float) -> List[Tuple[complex, int]]:
        return [(p, m * self.k) for p, m in self.base.poles_upto(radius)]

    def zeros_upto(self, radius: float) -> List[Tuple[complex, int]]:
        return [(p, m * self.k) for p, m in self.base.zeros_upto(radius)]

    def describe(self) -> dict:
        return {"tag": self.tag, "k": str(self.k), "base": self.base.describe()}


class ShiftedReciprocalModel:
    """1/(f - a): poles where f hits a, zeros where f has poles.

    Needs the base model to expose value_points for nonzero a; used for the
    first-main-theorem sanity measurement.
    """

    tag = "shifted-reciprocal"

    __slots__ = ("base", "a")

    def __init__(self, base, a: complex):
        self.base = base
        self.a = complex(a)

    def evaluate(self, z: complex) -> complex:
        return 1.0 / (self.base.evaluate(z) - self.a)

    def log_abs(self, z: complex) -> float:
        return -math.log(abs(self.base.evaluate(z) - self.a))

    def poles_upto(self, radius: float) -> List[Tuple[complex, int]]:
        if self.a == 0:
            return self.base.zeros_upto(radius)
        return self.base.value_points(self.a, radius)

    def zeros_upto(self, radius: float) -> List[Tuple[complex, int]]:
        return self.base.poles_upto(radius)

    def describe(self) -> dict:
        return {"tag": self.tag, "a": str(self.a), "base": self.base.describe()}


# ---------------------------------------------------------------------------
# counting side: exact inventories to integrated counts


def counting_data(points: Sequence[Tuple[complex, int]], r: float) -> Tuple[int, int, float, float]:
    """(n, n_bar, N, N_bar) at radius r from an inventory of (point, mult).

    The integrated counts use the closed form sum of log(r/|p|) plus the
    origin term n(0) log r, which equals the standard logarithmic integral
    of n exactly.
    """
    n = 0
    n_bar = 0
    acc = 0.0
    acc_bar = 0.0
    logr = math.log(r)
    for p, mult in points:
        ap = abs(p)
        if ap > r:
            continue
        n += mult
        n_bar += 1
        if ap == 0.0:
            acc += mult * logr
            acc_bar += logr
        else:
            acc += mult * math.log(r / ap)
            acc_bar += math.log(r / ap)
    return n, n_bar, acc, acc_bar


# ---------------------------------------------------------------------------
# proximity side: crossing-split circle quadrature


class QuadratureError(ArithmeticError):
    """Raised when the proximity integral fails to settle at a radius."""


def _safe_log_abs(model, r: float, theta: float) -> float:
    try:
        return model.log_abs(r * cmath.exp(1j * theta))
    except (PoleSignal, ZeroDivisionError, OverflowError):
        pass
    except ValueError:
        # log(0): an exact zero on the circle contributes nothing to log+
        return -1e300
    try:
        return model.log_abs(r * cmath.exp(1j * (theta + 1e-9)))
    except (PoleSignal, ValueError, ZeroDivisionError, OverflowError):
        return -1e300


def _romberg(fn: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Iterated trapezoid with Richardson extrapolation on [a, b]."""
    h = b - a
    rows: List[List[float]] = [[h * (fn(a) + fn(b)) / 2.0]]
    for level in range(1, 14):
        h /= 2.0
        count = 1 << (level - 1)
        s = sum(fn(a + (2 * i + 1) * h) for i in range(count))
        first = rows[-1][0] / 2.0 + h * s
        row = [first]
        for j, prev in enumerate(rows[-1]):
            factor = 4.0 ** (j + 1)
            row.append((factor * row[j] - prev) / (factor - 1.0))
        rows.append(row)
        settled = abs(row[-1] - rows[-2][-1]) <= tol * (1.0 + abs(row[-1]))
        if level >= 3 and settled:
            return row[-1]
    return rows[-1][-1]


def proximity(model, r: float, tol: float = _QUAD_TOL) -> float:
    """m(r, f): mean of log+|f| over the circle of radius r.

    The circle is scanned for sign changes of log|f|, each crossing is
    bisected to machine precision, and every positive arc is integrated
    separately; the kinks of log+ then never sit inside an integration
    interval.  The radius is jittered away from any pole modulus within
    the proximity window so the scan sees finite values.
    """
    r_used = _jittered_radius(model, r)

    def g(theta: float) -> float:
        return _safe_log_abs(model, r_used, theta)

    step = 2.0 * math.pi / _SCAN_NODES
    vals = [g(i * step) for i in range(_SCAN_NODES)]
    vals.append(vals[0])
    crossings: List[float] = []
    for i in range(_SCAN_NODES):
        va, vb = vals[i], vals[i + 1]
        if (va > 0.0) == (vb > 0.0):
            continue
        lo, hi = i * step, (i + 1) * step
        flo = va
        for _ in range(60):
            mid = (lo + hi) / 2.0
            fm = g(mid)
            if (flo > 0.0) == (fm > 0.0):
                lo, flo = mid, fm
            else:
                hi = mid
        crossings.append((lo + hi) / 2.0)

    if not crossings:
        if all(v <= 0.0 for v in vals):
            return 0.0
        total = _romberg(g, 0.0, 2.0 * math.pi, tol * 2.0 * math.pi)
        return total / (2.0 * math.pi)

    bounds = crossings + [crossings[0] + 2.0 * math.pi]
    total = 0.0
    for a, b in zip(bounds, bounds[1:]):
        if g((a + b) / 2.0) <= 0.0:
            continue
        seg_tol = tol * max(b - a, 1e-3)
        total += _romberg(g, a, b, seg_tol)
    return total / (2.0 * math.pi)


def _jittered_radius(model, r: float) -> float:
    poles = model.poles_upto(r * (1.0 + 2.0 * _POLE_PROXIMITY))
    offend = [abs(p) for p, _ in poles if abs(abs(p) - r) <= _POLE_PROXIMITY * r]
    if not offend:
        return r
    nearest = min(offend, key=lambda ap: abs(ap - r))
    direction = 1.0 if nearest <= r else -1.0
    return r * (1.0 + direction * _JITTER)


# ---------------------------------------------------------------------------
# the characteristic table


@dataclass(frozen=True)
class NevRow:
    r: float
    n: int
    n_bar: int
    N: float
    N_bar: float
    m: float
    T: float
    n_zero: int
    nbar_zero: int
    N_zero: float
    Nbar_zero: float

    def export(self) -> dict:
        return {
            "r": self.r, "n": self.n, "n_bar": self.n_bar,
            "N": self.N, "N_bar": self.N_bar, "m": self.m, "T": self.T,
            "n_zero": self.n_zero, "nbar_zero": self.nbar_zero,
            "N_zero": self.N_zero, "Nbar_zero": self.Nbar_zero,
        }


@dataclass(frozen=True)
class NevTable:
    model: dict
    rows: Tuple[NevRow, ...]

    def to_csv(self) -> str:
        lines = ["r,n,n_bar,N,N_bar,m,T"]
        for row in self.rows:
            lines.append(
                f"{row.r!r},{row.n},{row.n_bar},{row.N!r},{row.N_bar!r},"
                f"{row.m!r},{row.T!r}"
            )
        return "\n".join(lines) + "\n"

    def export(self) -> dict:
        return {"model": self.model, "rows": [row.export() for row in self.rows]}


def log_grid(r_min: float, r_max: float, count: int = 24) -> List[float]:
    """Logarithmically spaced radii, endpoints included."""
    if not (0 < r_min < r_max) or count < 2:
        raise ValueError("need 0 < r_min < r_max and at least two radii")
    ratio = (r_max / r_min) ** (1.0 / (count - 1))
    return [r_min * ratio**i for i in range(count)]


def characteristic_table(
    model, r_grid: Sequence[float], tol: float = _QUAD_TOL, parallel: bool = True
) -> NevTable:
    """Counting and proximity data for each radius of an increasing grid."""
    grid = list(r_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("radius grid must be strictly increasing")
    r_max = grid[-1]
    poles = model.poles_upto(r_max)
    zeros = model.zeros_upto(r_max)

    def build_row(r: float) -> NevRow:
        n, n_bar, N, N_bar = counting_data(poles, r)
        nz, nbz, Nz, Nbz = counting_data(zeros, r)
        m = proximity(model, r, tol)
        return NevRow(r, n, n_bar, N, N_bar, m, m + N, nz, nbz, Nz, Nbz)

    if parallel and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(grid))) as pool:
            rows = tuple(pool.map(build_row, grid))
    else:
        rows = tuple(build_row(r) for r in grid)
    return NevTable(model=model.describe(), rows=rows)


# ---------------------------------------------------------------------------
# growth estimates


@dataclass(frozen=True)
class GrowthEstimate:
    order: float
    order_width: float
    hyper_order: Optional[float]
    hyper_order_width: Optional[float]
    pole_hyper: Optional[float]
    pole_hyper_width: Optional[float]
    low_confidence: bool
    note: str

    def export(self) -> dict:
        return {
            "order": self.order,
            "order_width": self.order_width,
            "hyper_order": self.hyper_order,
            "hyper_order_width": self.hyper_order_width,
            "pole_hyper": self.pole_hyper,
            "pole_hyper_width": self.pole_hyper_width,
            "low_confidence": self.low_confidence,
            "note": self.note,
        }


def _slope_with_width(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """Least-squares slope and a two-sigma width from the fit residuals."""
    x = np.asarray(xs)
    y = np.asarray(ys)
    n = len(x)
    xm = x - x.mean()
    denom = float(np.dot(xm, xm))
    slope = float(np.dot(xm, y) / denom)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    if n > 2:
        se = math.sqrt(float(np.dot(resid, resid)) / (n - 2) / denom)
    else:
        se = float("inf")
    return slope, 2.0 * se


def growth_estimates(table: NevTable) -> GrowthEstimate:
    """Order, hyper-order, and pole hyper-exponent slopes from a table.

    The order is the slope of log T against log r, the hyper-order the
    slope of log log T, and the pole exponent the analogue built from the
    raw pole counts.  Rows without enough growth for the log-log transform
    are dropped from that fit; shortage of usable rows is flagged rather
    than hidden.
    """
    usable = [row for row in table.rows if row.T > math.e]
    if len(usable) < 8:
        raise ValueError(
            f"need at least 8 rows with T > e for a fit; have {len(usable)}"
        )
    logr = [math.log(row.r) for row in usable]
    logT = [math.log(row.T) for row in usable]
    order, order_w = _slope_with_width(logr, logT)
    hyper = hyper_w = None
    notes = []
    hy = [(lr, math.log(lt)) for lr, lt in zip(logr, logT) if lt > 0]
    if len(hy) >= 8:
        hyper, hyper_w = _slope_with_width([p[0] for p in hy], [p[1] for p in hy])
    else:
        notes.append("too few rows with log T > 0 for a hyper-order fit")
    pole = pole_w = None
    pn = [
        (math.log(row.r), math.log(math.log(row.n)))
        for row in usable
        if row.n >= 3
    ]
    if len(pn) >= 8:
        pole, pole_w = _slope_with_width([p[0] for p in pn], [p[1] for p in pn])
    else:
        notes.append("too few rows with n >= 3 for a pole-exponent fit")
    low = order_w > 0.25 or (hyper is not None and hyper_w > 0.25)
    if low:
        notes.append("fit widths exceed 0.25; treat estimates as indicative")
    return GrowthEstimate(
        order=order, order_width=order_w,
        hyper_order=hyper, hyper_order_width=hyper_w,
        pole_hyper=pole, pole_hyper_width=pole_w,
        low_confidence=low, note="; ".join(notes),
    )


# ---------------------------------------------------------------------------
# ratio reports


@dataclass(frozen=True)
class RatioRow:
    r: float
    zero_ratio: Optional[float]
    degree_gap_lhs: Optional[float]
    zero_count_rhs: Optional[float]
    power_ratio: Optional[float]
    note: str = ""

    def export(self) -> dict:
        return {
            "r": self.r,
            "zero_ratio": self.zero_ratio,
            "degree_gap_lhs": self.degree_gap_lhs,
            "zero_count_rhs": self.zero_count_rhs,
            "power_ratio": self.power_ratio,
            "note": self.note,
        }


@dataclass(frozen=True)
class RatioReport:
    rows: Tuple[RatioRow, ...]
    threshold: float = 0.75

    def export(self) -> dict:
        return {"threshold": self.threshold, "rows": [r.export() for r in self.rows]}


def ratio_checks(
    model,
    eq: Optional[DelayDiffEq],
    r_grid: Sequence[float],
    power_table: Optional[Tuple[NevTable, NevTable]] = None,
    tol: float = _QUAD_TOL,
) -> RatioReport:
    """Per-radius ratios against the zero-density threshold of 3/4.

    Reports the distinct-zero share of the characteristic, the two sides
    of the degree-gap bound for the rational-in-w class, and the observed
    characteristic ratio of a power pair when one is supplied.
    """
    table = characteristic_table(model, r_grid, tol)
    deg_gap = None
    if eq is not None and eq.kind == EqKind.LOG_DERIV:
        deg_gap = rational_degree(eq).deg_map - 3
    power_rows: Dict[float, float] = {}
    if power_table is not None:
        base_tab, pow_tab = power_table
        for rb, rp in zip(base_tab.rows, pow_tab.rows):
            if rb.T > 0:
                power_rows[rb.r] = rp.T / rb.T
    rows = []
    for row in table.rows:
        note = ""
        if row.T < 1e-9:
            zero_ratio = None
            note = "T too small; row skipped"
        else:
            zero_ratio = row.Nbar_zero / row.T
        lhs = rhs = None
        if deg_gap is not None and zero_ratio is not None:
            lhs = deg_gap * row.T
            rhs = row.Nbar_zero
        rows.append(
            RatioRow(row.r, zero_ratio, lhs, rhs, power_rows.get(row.r), note)
        )
    return RatioReport(tuple(rows))
