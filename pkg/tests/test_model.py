"""Equation objects, degrees, resultants, exact substitution."""

import random
from fractions import Fraction

import pytest

from ddelab.exprparse import parse_expression
from ddelab.fieldelem import FieldElem, frac_is_zero, rf_shift
from ddelab.gaussian import gauss
from ddelab.laurent import LaurentSeries
from ddelab.model import (
    DDPolynomial,
    DelayDiffEq,
    EqKind,
    EquationError,
    FactoredDenominator,
    WPoly,
    cleared_polynomial,
    exact_residual,
    make_inverse_square,
    make_log_deriv,
    make_pure_log_deriv,
    mirror,
    normal_form_series,
    parse_equation,
    quadratic_roots,
    rational_degree,
    resultant_in_w,
)

Z = FieldElem.var("z")
ONE = FieldElem.const(1)
ZERO = FieldElem.const(0)


def std_log_deriv():
    # Q = (w - z)(w - 2z), P = w^3 + 1, a = 1
    p = WPoly([ONE, ZERO, ZERO, ONE])
    q = FactoredDenominator(((Z, 1), (FieldElem.const(2) * Z, 1)))
    return make_log_deriv(ONE, p, q)


# -- WPoly and FactoredDenominator ------------------------------------------


def test_wpoly_basics():
    p = WPoly([ONE, ZERO, ZERO, ONE])  # 1 + w^3
    assert p.degree == 3
    assert p.is_monic
    assert p.coefficient(0) == ONE
    assert p.coefficient(2).is_zero
    assert p.evaluate(FieldElem.const(2)) == FieldElem.const(9)
    assert WPoly([ZERO]).is_zero
    assert WPoly([ZERO]).degree == -1


def test_wpoly_trailing_zero_strip():
    p = WPoly([ONE, ONE, ZERO, ZERO])
    assert p.degree == 1


def test_wpoly_arithmetic():
    w = WPoly.w()
    p = (w * w) + WPoly.const(1)
    q = p * p
    assert q.degree == 4
    assert q.coefficient(2) == FieldElem.const(2)
    assert (p - p).is_zero


def test_factored_expand():
    f = FactoredDenominator(((Z, 1), (FieldElem.const(2) * Z, 1)))
    q = f.expand()
    # (w - z)(w - 2z) = w^2 - 3z w + 2z^2
    assert q.degree == 2
    assert q.coefficient(1) == FieldElem.const(-3) * Z
    assert q.coefficient(0) == FieldElem.const(2) * Z * Z
    assert q.is_monic


def test_factored_multiplicity_and_duplicates():
    f = FactoredDenominator(((Z, 2),))
    assert f.expand().degree == 2
    with pytest.raises(EquationError):
        FactoredDenominator(((Z, 1), (Z, 1)))
    with pytest.raises(EquationError):
        FactoredDenominator(((Z, 0),))


# -- equation construction ---------------------------------------------------


def test_kind_hypotheses():
    with pytest.raises(EquationError):
        make_pure_log_deriv(ZERO, Z)
    with pytest.raises(EquationError):
        make_inverse_square(ZERO, ONE)
    # a == 0 is fine for log-deriv at construction time
    eq = make_log_deriv(
        ZERO, WPoly([ONE]), FactoredDenominator(((Z, 1),))
    )
    assert eq.a.is_zero


def test_q_at_zero_must_not_vanish():
    # Q = w has Q(z, 0) = 0
    with pytest.raises(EquationError):
        make_log_deriv(ONE, WPoly([ONE]), FactoredDenominator(((ZERO, 1),)))


def test_monic_normalization():
    # residual factor 2 makes Q non-monic; normalization divides through
    f = FactoredDenominator(((Z, 1),), residual=WPoly.const(2))
    eq = make_log_deriv(ONE, WPoly([FieldElem.const(2)]), f)
    assert eq.q_poly.is_monic
    assert eq.p_poly.coefficient(0) == ONE
    assert "denominator normalized to monic" in eq.notes


def test_factored_mismatch_rejected():
    q_factors = FactoredDenominator(((Z, 1),))
    wrong_q = WPoly([ONE, ONE])  # expands to w - z, not w + 1
    with pytest.raises(EquationError):
        DelayDiffEq(
            EqKind.LOG_DERIV, a=ONE, p_poly=WPoly([ONE]),
            q_poly=wrong_q, q_factors=q_factors,
        )


# -- degree report ------------------------------------------------------------


def test_rational_degree_examples():
    eq = std_log_deriv()
    rep = rational_degree(eq)
    assert (rep.deg_num, rep.deg_den, rep.deg_map) == (3, 2, 3)

    quartic = make_log_deriv(
        ONE, WPoly([ZERO, ZERO, ZERO, ZERO, ONE]),
        FactoredDenominator(((Z, 1), (FieldElem.const(2) * Z, 1))),
    )
    rep = rational_degree(quartic)
    assert (rep.deg_num, rep.deg_den, rep.deg_map) == (4, 2, 4)

    const_rhs = make_log_deriv(
        ONE, WPoly([Z]), FactoredDenominator(((ONE, 1),)),
    )
    # Q = w - 1, P = z: degrees (0, 1, 1)
    rep = rational_degree(const_rhs)
    assert (rep.deg_num, rep.deg_den, rep.deg_map) == (0, 1, 1)


def test_rational_degree_scaling_invariance():
    # multiplying P and Q by the same z-function then renormalizing to monic
    # leaves every degree unchanged
    eq = std_log_deriv()
    s = (Z * Z + 1) / FieldElem.const(3)
    f = FactoredDenominator(
        ((Z, 1), (FieldElem.const(2) * Z, 1)), residual=WPoly([s])
    )
    eq2 = make_log_deriv(ONE, eq.p_poly.scale(s), f)
    assert rational_degree(eq2) == rational_degree(eq)
    assert eq2.q_poly == eq.q_poly
    assert eq2.p_poly == eq.p_poly


# -- resultants ---------------------------------------------------------------


def test_resultant_frozen_values():
    w = WPoly.w()
    # Res(w, w - 1) = -1
    assert resultant_in_w(w, w - WPoly.const(1)) == FieldElem.const(-1)
    # shared root w = z
    shared = resultant_in_w(
        w - WPoly([Z]), (w - WPoly([Z])) * (w + WPoly.const(1))
    )
    assert shared.is_zero
    # Res(w^3 + 1, (w - z)(w - 2z)) = (1 + z^3)(1 + 8z^3)
    p = WPoly([ONE, ZERO, ZERO, ONE])
    q = FactoredDenominator(((Z, 1), (FieldElem.const(2) * Z, 1))).expand()
    expected = (ONE + Z ** 3) * (ONE + FieldElem.const(8) * Z ** 3)
    assert resultant_in_w(p, q) == expected


def test_resultant_numeric_sylvester_oracle():
    # compare against an exact numeric Sylvester determinant at random
    # rational points
    rng = random.Random(321)
    p = WPoly([ONE, ZERO, ZERO, ONE])
    q = FactoredDenominator(((Z, 1), (FieldElem.const(2) * Z, 1))).expand()
    res = resultant_in_w(p, q)

    def num_sylvester(pc, qc):
        m, n = len(pc) - 1, len(qc) - 1
        size = m + n
        rows = []
        for i in range(n):
            rows.append([Fraction(0)] * i + pc[::-1] + [Fraction(0)] * (size - m - 1 - i))
        for j in range(m):
            rows.append([Fraction(0)] * j + qc[::-1] + [Fraction(0)] * (size - n - 1 - j))
        det = Fraction(1)
        sign = 1
        for col in range(size):
            piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                sign = -sign
            pv = rows[col][col]
            det *= pv
            for r in range(col + 1, size):
                f = rows[r][col] / pv
                rows[r] = [rows[r][k] - f * rows[col][k] for k in range(size)]
        return det * sign

    for _ in range(5):
        z0 = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        val = res.subs_values({"z": z0})
        pc = [c.subs_values({"z": z0}).constant_value().re for c in p.coeffs]
        qc = [c.subs_values({"z": z0}).constant_value().re for c in q.coeffs]
        assert val.constant_value().re == num_sylvester(pc, qc)


def test_resultant_zero_iff_root_shared():
    # both decision paths agree: determinant and factored-root evaluation
    p = WPoly([ONE, ZERO, ZERO, ONE])
    for factors in [((Z, 1), (FieldElem.const(2) * Z, 1)),
                    ((FieldElem.const(-1), 1), (Z, 1))]:
        fd = FactoredDenominator(factors)
        q = fd.expand()
        det_zero = resultant_in_w(p, q).is_zero
        root_shared = any(p.evaluate(r).is_zero for r in fd.roots())
        assert det_zero == root_shared


# -- exact substitution -------------------------------------------------------


def test_substitute_difference_term():
    # w(z+1) - w(z-1) at z^2 gives 4z
    ddp = DDPolynomial.build([
        (ONE, {(1, 0): 1}),
        (FieldElem.const(-1), {(-1, 0): 1}),
    ])
    assert ddp.substitute_rational(Z * Z) == FieldElem.const(4) * Z


def test_cleared_pure_log_deriv_at_constant():
    # constants kill the difference and the log-derivative; -b c0 remains
    b = Z + 1
    eq = make_pure_log_deriv(ONE, b)
    ddp = cleared_polynomial(eq)
    c0 = FieldElem.const(Fraction(5, 3))
    out = ddp.substitute_rational(c0)
    assert out == FieldElem.const(-1) * b * c0


def test_cleared_log_deriv_at_denominator_root():
    # at w = z every Q-term dies and -w P(w) remains: -z (z^3 + 1)
    eq = std_log_deriv()
    out = cleared_polynomial(eq).substitute_rational(Z)
    assert out == FieldElem.const(-1) * Z * (Z ** 3 + 1)
    assert not frac_is_zero(out)


def test_cleared_matches_normal_form_residual():
    # clearing multiplier: w for pure-log-deriv, w^2 for inverse-square,
    # w Q(w) for log-deriv
    cand = (Z + 2) / (Z - 1)

    eq1 = make_pure_log_deriv(Z, Z + 1)
    lhs = cleared_polynomial(eq1).substitute_rational(cand)
    assert lhs == exact_residual(eq1, cand) * cand

    eq2 = make_inverse_square(ONE, Z, Z * Z)
    lhs = cleared_polynomial(eq2).substitute_rational(cand)
    assert lhs == exact_residual(eq2, cand) * cand * cand

    eq3 = std_log_deriv()
    lhs = cleared_polynomial(eq3).substitute_rational(cand)
    mult = cand * eq3.q_poly.evaluate(cand)
    assert lhs == exact_residual(eq3, cand) * mult


def test_substitution_linearity():
    rng = random.Random(7)
    cand = (Z * Z + 3) / (Z + 5)
    t1 = (Z, {(1, 0): 1, (0, 1): 1})
    t2 = (ONE / (Z + 1), {(-1, 0): 2})
    a = DDPolynomial.build([t1])
    b = DDPolynomial.build([t2])
    ab = DDPolynomial.build([t1, t2])
    assert ab.substitute_rational(cand) == (
        a.substitute_rational(cand) + b.substitute_rational(cand)
    )


def test_substitution_multiplicativity():
    cand = Z + 2
    # single-factor monomials multiply: w(z+1) * w'(z) as one term equals
    # the product of the separate substitutions
    prod_term = DDPolynomial.build([(ONE, {(1, 0): 1, (0, 1): 1})])
    f1 = DDPolynomial.build([(ONE, {(1, 0): 1})])
    f2 = DDPolynomial.build([(ONE, {(0, 1): 1})])
    assert prod_term.substitute_rational(cand) == (
        f1.substitute_rational(cand) * f2.substitute_rational(cand)
    )


def test_gaussian_shift():
    # shifts may be Gaussian integers
    ddp = DDPolynomial.build([(ONE, {(gauss(0, 1), 0): 1})])
    out = ddp.substitute_rational(Z * Z)
    # (z + i)^2 = z^2 + 2i z - 1
    expected = Z * Z + FieldElem.const(gauss(0, 2)) * Z - 1
    assert out == expected


# -- normal form as series ----------------------------------------------------


def test_normal_form_series_pure_log_deriv():
    # w = alpha t^p near zhat: N = b - a p/t + O(1) terms from b
    alpha = FieldElem.var("alpha")
    eq = make_pure_log_deriv(ONE, Z)
    w = LaurentSeries.monomial(alpha, 2)
    n = normal_form_series(eq, 0, w, width=6)
    assert n.coefficient(-1) == FieldElem.const(-2)
    # b(zhat + t) contributes zhat at order 0 and 1 at order 1
    zh = FieldElem.var("zhat")
    assert n.coefficient(0) == zh
    assert n.coefficient(1) == ONE


def test_normal_form_series_inverse_square():
    # w = alpha/t: a w'/w^2 + b/w + c with a=1, b=0, c=0 gives
    # w' = -alpha/t^2, w^2 = alpha^2/t^2 so N = -1/alpha + 0 t + ...
    alpha = FieldElem.var("alpha")
    eq = make_inverse_square(ONE, ZERO, ZERO)
    w = LaurentSeries.monomial(alpha, -1)
    n = normal_form_series(eq, 0, w, width=6)
    assert n.coefficient(0) == FieldElem.const(-1) / alpha
    assert n.coefficient(1).is_zero


def test_normal_form_series_log_deriv_matches_exact():
    # for a rational candidate the series of the normal form must agree with
    # the exact rational computation expanded at the same point
    eq = std_log_deriv()
    cand = Z + 3
    from ddelab.laurent import series_of_ratfunc

    w_series = series_of_ratfunc(cand, 0, 6)
    n_series = normal_form_series(eq, 0, w_series, width=6)
    wp = cand.derivative()
    exact_n = (
        eq.p_poly.evaluate(cand) / eq.q_poly.evaluate(cand)
        - eq.a * wp / cand
    )
    expected = series_of_ratfunc(exact_n, 0, 6)
    for k in range(4):
        assert n_series.coefficient(k) == expected.coefficient(k)


# -- mirror -------------------------------------------------------------------


def test_mirror_pure_log_deriv():
    eq = make_pure_log_deriv(Z + 1, Z * Z)
    m = mirror(eq)
    # a(-z) = 1 - z, b -> -b(-z) = -z^2
    assert m.a == ONE - Z
    assert m.b == FieldElem.const(-1) * Z * Z


def test_mirror_is_involution_on_coefficients():
    eq = make_inverse_square(Z + 2, Z ** 3, ONE / (Z - 5))
    mm = mirror(mirror(eq))
    assert mm.a == eq.a and mm.b == eq.b and mm.c == eq.c


def test_mirror_log_deriv_solution_transport():
    # if v(z) = w(-z) and w solves eq, v solves mirror(eq): check through the
    # exact residual with a rational non-solution (residuals transport too)
    from ddelab.mpoly import MPoly

    neg_z = MPoly.const(-1) * MPoly.var("z")
    eq = std_log_deriv()
    m = mirror(eq)
    w = (Z + 2) / (Z * Z + 1)
    v = w.compose_var("z", neg_z)
    r_eq = exact_residual(eq, w)
    r_m = exact_residual(m, v)
    # residual of mirror at v equals -(residual of eq at w) composed z -> -z
    flipped = r_eq.compose_var("z", neg_z)
    assert r_m == FieldElem.const(-1) * flipped


# -- quadratic roots ----------------------------------------------------------


def test_quadratic_roots_rational_case():
    # (w - z)(w - 2z): discriminant 9z^2 - 8z^2 = z^2 is a square
    q = FactoredDenominator(((Z, 1), (FieldElem.const(2) * Z, 1))).expand()
    roots = quadratic_roots(q)
    assert roots is not None
    assert set_eq(roots, (Z, FieldElem.const(2) * Z))


def test_quadratic_roots_irrational_case():
    # w^2 - z: discriminant 4z is not a square
    q = WPoly([FieldElem.const(-1) * Z, ZERO, ONE])
    assert quadratic_roots(q) is None


def test_quadratic_roots_double():
    q = WPoly([Z * Z, FieldElem.const(-2) * Z, ONE])  # (w - z)^2
    roots = quadratic_roots(q)
    assert roots == (Z, Z)


def set_eq(got, want):
    a, b = got
    c, d = want
    return (a == c and b == d) or (a == d and b == c)


# -- parsing ------------------------------------------------------------------


def test_parse_pure_log_deriv_entry():
    entry = {"id": "x", "class": "pure-log-deriv", "a": "2", "b": "3"}
    eq = parse_equation(entry)
    assert eq.kind == EqKind.PURE_LOG_DERIV
    assert eq.a == FieldElem.const(2)
    assert eq.b == FieldElem.const(3)
    assert eq.name == "x"


def test_parse_log_deriv_entry():
    entry = {
        "id": "y",
        "class": "log-deriv",
        "a": "1",
        "p_coeffs": ["1", "0", "0", "1"],
        "q_factors": [{"root": "z", "mult": 1}, {"root": "2*z", "mult": 1}],
    }
    eq = parse_equation(entry)
    assert eq.kind == EqKind.LOG_DERIV
    assert eq.p_poly.degree == 3
    assert eq.q_poly.degree == 2
    assert eq.q_factors.roots() == (Z, FieldElem.const(2) * Z)


def test_parse_inverse_square_zero_a_rejected():
    entry = {"id": "bad", "class": "inverse-square", "a": "0", "b": "1"}
    with pytest.raises(EquationError):
        parse_equation(entry)


def test_parse_unknown_class():
    with pytest.raises(EquationError):
        parse_equation({"id": "q", "class": "nope"})


def test_parse_missing_fields():
    with pytest.raises(EquationError):
        parse_equation({"id": "q", "class": "pure-log-deriv", "a": "1"})
    with pytest.raises(EquationError):
        parse_equation({"id": "q", "class": "log-deriv", "a": "1"})
