"""Checks for the characteristic tables built on exact singularity data.

The counting oracle below integrates the step function n(t)/t on a dense
grid instead of using the closed-form sum, and the proximity checks lean
on instances whose circle means are known in closed form, so both halves
of the characteristic are confirmed against independent routes.
"""

import json
import math

import numpy as np
import pytest

from ddelab.analytic import (
    EllipticSolutionModel,
    ExponentialModel,
    RationalNumericModel,
    elliptic_params,
)
from ddelab.fieldelem import FieldElem
from ddelab.model import FactoredDenominator, WPoly, make_log_deriv
from ddelab.nevanlinna import (
    PowerModel,
    ShiftedReciprocalModel,
    WpModel,
    characteristic_table,
    counting_data,
    growth_estimates,
    log_grid,
    proximity,
    ratio_checks,
)
from ddelab.wp import WeierstrassP


@pytest.fixture(scope="module")
def elliptic_model():
    params = elliptic_params(g2=4.0, g3=1.0, omega=1.0 + 0.3j, lam=1.0)
    return EllipticSolutionModel(params)


@pytest.fixture(scope="module")
def elliptic_table(elliptic_model):
    return characteristic_table(elliptic_model, log_grid(1.0, 16.0, 24))


class TestLogGrid:
    def test_endpoints_and_spacing(self):
        grid = log_grid(2.0, 32.0, 5)
        assert grid[0] == pytest.approx(2.0)
        assert grid[-1] == pytest.approx(32.0)
        ratios = [b / a for a, b in zip(grid, grid[1:])]
        assert all(r == pytest.approx(2.0) for r in ratios)

    def test_bad_arguments_rejected(self):
        with pytest.raises(ValueError):
            log_grid(0.0, 10.0)
        with pytest.raises(ValueError):
            log_grid(10.0, 5.0)
        with pytest.raises(ValueError):
            log_grid(1.0, 10.0, 1)


class TestCountingData:
    def test_origin_point_contributes_log_r(self):
        n, n_bar, N, N_bar = counting_data([(0j, 2)], 4.0)
        assert (n, n_bar) == (2, 1)
        assert N == pytest.approx(2 * math.log(4.0))
        assert N_bar == pytest.approx(math.log(4.0))
        # below radius one the origin term goes negative, by convention
        assert counting_data([(0j, 2)], 0.5)[2] < 0

    def test_points_outside_radius_ignored(self):
        pts = [(3.0 + 0j, 1), (10.0 + 0j, 5)]
        n, n_bar, N, N_bar = counting_data(pts, 5.0)
        assert (n, n_bar) == (1, 1)
        assert N == pytest.approx(math.log(5.0 / 3.0))

    def test_closed_form_matches_dense_integral(self, elliptic_model):
        """Independent oracle: trapezoid integral of n(t)/t on 4e6 nodes."""
        r = 16.0
        pts = elliptic_model.poles_upto(r)
        _, _, N_closed, _ = counting_data(pts, r)
        mods = sorted(abs(p) for p, m in pts for _ in range(m))
        n0 = sum(1 for ap in mods if ap == 0.0)
        ts = np.linspace(1e-9, r, 4_000_001)
        nvals = np.zeros_like(ts)
        for i in np.searchsorted(ts, [ap for ap in mods if ap > 0], side="left"):
            nvals[i:] += 1
        integral = float(np.trapezoid(nvals / ts, ts)) + n0 * math.log(r)
        assert abs(N_closed - integral) <= 1e-6 * abs(N_closed)


class TestProximity:
    def test_exponential_closed_form(self):
        # mean of log+ |exp(p pi i z)| over |z| = r is exactly p*r
        for p in (1, 2):
            model = ExponentialModel(C=1.0, p=p)
            for r in (3.0, 50.0, 1e6):
                assert proximity(model, r) == pytest.approx(p * r, rel=1e-8)

    def test_modulus_below_one_gives_zero(self):
        model = RationalNumericModel([1.0], [-2.0, 1.0])  # 1/(z - 2)
        assert proximity(model, 1.0) == 0.0

    def test_pole_on_the_circle_is_jittered_not_fatal(self):
        model = RationalNumericModel([1.0], [-2.0, 1.0])
        value = proximity(model, 2.0)
        assert math.isfinite(value)
        # hand value of the arc integral for 1/(z-2) on |z| = 2
        assert value == pytest.approx(0.1597, abs=2e-3)

    def test_refinement_stability(self, elliptic_model):
        r = 5.5
        coarse = proximity(elliptic_model, r, tol=1e-9)
        fine = proximity(elliptic_model, r, tol=1e-12)
        assert abs(coarse - fine) <= 1e-8 * (1.0 + abs(fine))


class TestCharacteristicTable:
    def test_rational_characteristic_is_degree_log_r(self):
        # (z^3 + 2)/(z - 5): degree 3, so T(r) = 3 log r + O(1)
        model = RationalNumericModel([2.0, 0.0, 0.0, 1.0], [-5.0, 1.0])
        table = characteristic_table(model, log_grid(10.0, 1e6, 12))
        for row in table.rows:
            assert abs(row.T - 3 * math.log(row.r)) <= 3.0

    def test_exponential_table(self):
        model = ExponentialModel(C=1.0, p=1)
        table = characteristic_table(model, log_grid(10.0, 1e12, 16))
        for row in table.rows:
            assert row.n == 0 and row.N == 0.0
            assert row.T == pytest.approx(row.r, rel=1e-6)

    def test_elliptic_counts_track_cell_density(self, elliptic_model, elliptic_table):
        area = elliptic_model.cell_area()
        for row in elliptic_table.rows[-8:]:
            expected = 2.0 * math.pi * row.r**2 / area
            assert abs(row.n - expected) <= 0.15 * expected

    def test_characteristic_is_monotone(self, elliptic_table):
        ts = [row.T for row in elliptic_table.rows]
        assert all(b >= a - 1e-9 for a, b in zip(ts, ts[1:]))

    def test_grid_must_increase(self, elliptic_model):
        with pytest.raises(ValueError):
            characteristic_table(elliptic_model, [2.0, 1.0])

    def test_serialization_is_deterministic(self, elliptic_model, elliptic_table):
        again = characteristic_table(elliptic_model, log_grid(1.0, 16.0, 24))
        assert elliptic_table.to_csv() == again.to_csv()
        a = json.dumps(elliptic_table.export(), sort_keys=True)
        b = json.dumps(again.export(), sort_keys=True)
        assert a == b

    def test_csv_layout(self, elliptic_table):
        lines = elliptic_table.to_csv().splitlines()
        assert lines[0] == "r,n,n_bar,N,N_bar,m,T"
        assert len(lines) == 1 + len(elliptic_table.rows)
        first = lines[1].split(",")
        assert float(first[0]) == pytest.approx(1.0)


class TestGrowthEstimates:
    def test_exponential_first_order_growth(self):
        model = ExponentialModel(C=1.0, p=1)
        table = characteristic_table(model, log_grid(10.0, 1e12, 24))
        est = growth_estimates(table)
        assert abs(est.order - 1.0) <= 0.1
        assert est.hyper_order is not None
        assert abs(est.hyper_order) <= 0.15
        assert not est.low_confidence

    def test_elliptic_second_order_growth(self, elliptic_table):
        est = growth_estimates(elliptic_table)
        assert abs(est.order - 2.0) <= 0.15
        assert est.order_width <= 0.1

    def test_too_few_usable_rows_rejected(self):
        model = ExponentialModel(C=1.0, p=1)
        table = characteristic_table(model, log_grid(10.0, 100.0, 4))
        with pytest.raises(ValueError):
            growth_estimates(table)


class TestRatioChecks:
    def test_zero_share_near_one_for_the_confined_solution(self, elliptic_model):
        report = ratio_checks(elliptic_model, None, log_grid(1.0, 16.0, 24))
        top = report.rows[len(report.rows) // 2 :]
        assert report.threshold == 0.75
        for row in top:
            assert 0.8 <= row.zero_ratio <= 1.1
            assert row.degree_gap_lhs is None

    def test_degree_gap_columns_for_the_rational_class(self):
        engine = WeierstrassP(4.0, 1.0)
        model = WpModel(engine)
        # quartic over monic linear: degree of the w-map is 4, gap is 1
        fe = FieldElem.coerce
        quartic = WPoly([fe(0), fe(0), fe(0), fe(0), fe(1)])
        den = FactoredDenominator(((fe(1), 1),), None)
        eq = make_log_deriv(a=fe(1), p_poly=quartic, q_factors=den)
        report = ratio_checks(model, eq, log_grid(2.0, 8.0, 8))
        for row in report.rows:
            assert row.degree_gap_lhs is not None
            base_T = row.degree_gap_lhs / 1.0  # gap is 1
            assert row.zero_count_rhs is not None
            assert row.zero_ratio == pytest.approx(row.zero_count_rhs / base_T)

    def test_power_pair_ratio(self):
        engine = WeierstrassP(4.0, 1.0)
        base = WpModel(engine)
        grid = log_grid(1.0, 9.0, 12)
        base_tab = characteristic_table(base, grid)
        pow_tab = characteristic_table(PowerModel(base, 2), grid)
        report = ratio_checks(
            base, None, grid, power_table=(base_tab, pow_tab)
        )
        usable = [r.power_ratio for r in report.rows if r.power_ratio is not None]
        for value in usable[-6:]:
            assert 1.8 <= value <= 2.2


class TestFirstMainTheoremSanity:
    @pytest.mark.parametrize("a", [0.0, 1.0])
    def test_shifted_reciprocal_tracks_the_characteristic(
        self, a, elliptic_model, elliptic_table
    ):
        grid = [row.r for row in elliptic_table.rows[-8:]]
        shifted = ShiftedReciprocalModel(elliptic_model, a)
        stab = characteristic_table(shifted, grid)
        for srow, brow in zip(stab.rows, elliptic_table.rows[-8:]):
            assert abs(srow.T - brow.T) <= 2.0 + 0.05 * brow.T


class TestPowerModel:
    def test_inventories_scale_with_exponent(self):
        engine = WeierstrassP(4.0, 1.0)
        cube = PowerModel(WpModel(engine), 3)
        for p, m in cube.poles_upto(4.0):
            assert m == 6
        z = 0.3 + 0.2j
        assert cube.evaluate(z) == pytest.approx(engine.eval(z)[0] ** 3)
        assert cube.log_abs(z) == pytest.approx(3 * math.log(abs(engine.eval(z)[0])))

    def test_bad_exponent_rejected(self):
        engine = WeierstrassP(4.0, 1.0)
        with pytest.raises(ValueError):
            PowerModel(WpModel(engine), 0)
