"""Necessary-condition classifiers for the three delay equation classes.

Each classifier checks whether an equation passes the degree and coefficient
conditions that any non-rational meromorphic solution of slow growth forces
on the equation.  The verdicts are contrapositive by nature: a pass never
asserts that solutions exist, and a violation means every such solution is
ruled out.  When the inverse-square class passes, the witnessing parameter
triple is extracted and reconstructs the equation exactly.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from .cascade import second_difference
from .fieldelem import FieldElem
from .gaussian import GaussianRational
from .model import (
    DelayDiffEq,
    EqKind,
    make_inverse_square,
    rational_degree,
    resultant_in_w,
)

_ZERO = FieldElem.const(0)
_Z = FieldElem.var("z")


class Outcome(str, Enum):
    CONSISTENT_BRANCH_A = "consistent-branch-a"
    CONSISTENT_BRANCH_B = "consistent-branch-b"
    VIOLATES_NECESSARY_CONDITION = "violates-necessary-condition"
    HYPOTHESIS_VIOLATION = "hypothesis-violation"


@dataclass(frozen=True)
class NormalFormParams:
    """Parameter triple of the confined inverse-square family.

    The family has a = lam + mu*z and b = nu*a - mu with c = 0; the triple
    rebuilds the equation exactly, so extraction is a round trip.
    """

    lam: GaussianRational
    mu: GaussianRational
    nu: GaussianRational

    def build(self) -> DelayDiffEq:
        a = FieldElem.const(self.lam) + FieldElem.const(self.mu) * _Z
        b = FieldElem.const(self.nu) * a - FieldElem.const(self.mu)
        return make_inverse_square(a=a, b=b, name="confined-family")

    def export(self) -> dict:
        return {"lam": str(self.lam), "mu": str(self.mu), "nu": str(self.nu)}


def build_normal_form(lam, mu, nu) -> DelayDiffEq:
    """Equation of the confined family from its parameter triple."""
    return NormalFormParams(
        GaussianRational.coerce(lam),
        GaussianRational.coerce(mu),
        GaussianRational.coerce(nu),
    ).build()


@dataclass(frozen=True)
class Verdict:
    eq_kind: EqKind
    outcome: Outcome
    details: Tuple[str, ...] = ()
    params: Optional[NormalFormParams] = None
    also_branch_b: bool = False

    def export(self) -> dict:
        out = {
            "eq_kind": self.eq_kind.value,
            "outcome": self.outcome.value,
            "details": list(self.details),
        }
        if self.params is not None:
            out["params"] = self.params.export()
        if self.also_branch_b:
            out["also_branch_b"] = True
        return out


def classify_log_deriv(eq: DelayDiffEq) -> Verdict:
    """Degree test for the rational-in-w class.

    Branch A needs the numerator degree to exceed the denominator degree by
    exactly one and stay at most three; branch B needs total degree zero or
    one.  Both can hold at once; the verdict then reports branch A and keeps
    a flag for branch B.  Checkability requires a monic denominator with
    nonzero constant term, a supplied factorization, and no common roots.
    """
    if eq.kind != EqKind.LOG_DERIV:
        raise ValueError("classifier expects the rational-in-w class")
    failed = []
    q = eq.q_poly
    if q.is_zero:
        failed.append("denominator is identically zero")
    else:
        if not q.is_monic:
            failed.append("denominator is not monic")
        if q.degree > 0 and (not q.coeffs or q.coeffs[0].is_zero):
            failed.append("denominator vanishes at w = 0")
        if q.degree > 0 and eq.q_factors is None:
            failed.append("denominator factorization not supplied")
        if not eq.p_poly.is_zero and resultant_in_w(eq.p_poly, q).is_zero:
            failed.append("numerator and denominator share a root")
    if eq.p_poly.is_zero:
        failed.append("numerator is identically zero")
    if failed:
        return Verdict(eq.kind, Outcome.HYPOTHESIS_VIOLATION, tuple(failed))

    rep = rational_degree(eq)
    dp, dq, dr = rep.deg_num, rep.deg_den, rep.deg_map
    branch_a = dp == dq + 1 and dp <= 3
    branch_b = dr in (0, 1)
    if branch_a:
        details = [f"numerator degree {dp} = denominator degree {dq} + 1 <= 3"]
        if branch_b:
            details.append(f"total degree {dr} also fits the linear branch")
        return Verdict(eq.kind, Outcome.CONSISTENT_BRANCH_A, tuple(details), also_branch_b=branch_b)
    if branch_b:
        return Verdict(
            eq.kind, Outcome.CONSISTENT_BRANCH_B,
            (f"total degree {dr} is at most one",),
        )
    return Verdict(
        eq.kind, Outcome.VIOLATES_NECESSARY_CONDITION,
        (
            f"degrees (num {dp}, den {dq}, total {dr}) fit neither branch; "
            "any non-rational meromorphic solution must have hyper-order at least one",
        ),
    )


_PI_FLAG_REL_TOL = 1e-12
_PI_FLAG_MAX_P = 64


def _exponential_family_flag(a: FieldElem, b: FieldElem) -> Optional[str]:
    """Courtesy note when b/a sits numerically at a nonzero integer times pi*i.

    Numeric by necessity (pi is not rational); tolerance 1e-12 relative, with
    integer multiples searched up to 64.  Never feeds the verdict.
    """
    ratio = b / a
    if not ratio.is_constant():
        return None
    val = complex(ratio.constant_value())
    if val == 0:
        return None
    q = val / complex(0.0, cmath.pi)
    p = round(q.real)
    if p == 0 or abs(p) > _PI_FLAG_MAX_P or abs(q.imag) > _PI_FLAG_REL_TOL * abs(p):
        return None
    if abs(q.real - p) > _PI_FLAG_REL_TOL * abs(p):
        return None
    return (
        f"forcing ratio sits at {p}*pi*i: zero-free exponential solutions "
        f"C*exp({p}*pi*i*z) exist, and the zero-density hypothesis is vacuous for them"
    )


def classify_pure_log_deriv(eq: DelayDiffEq) -> Verdict:
    """Constancy test for the pure logarithmic-derivative class."""
    if eq.kind != EqKind.PURE_LOG_DERIV:
        raise ValueError("classifier expects the pure log-derivative class")
    if eq.a.is_zero:
        return Verdict(
            eq.kind, Outcome.HYPOTHESIS_VIOLATION,
            ("coefficient of the logarithmic derivative is identically zero",),
        )
    details = []
    flag = _exponential_family_flag(eq.a, eq.b)
    if flag:
        details.append(flag)
    if eq.a.is_constant() and eq.b.is_constant():
        return Verdict(eq.kind, Outcome.CONSISTENT_BRANCH_A, tuple(details))
    which = "a" if not eq.a.is_constant() else "b"
    details.insert(
        0,
        f"coefficient {which} is not constant; no non-rational solution of "
        "hyper-order below one can keep zeros dense enough",
    )
    return Verdict(eq.kind, Outcome.VIOLATES_NECESSARY_CONDITION, tuple(details))


def _affine_parts(a: FieldElem) -> Optional[Tuple[GaussianRational, GaussianRational]]:
    """(constant, slope) when a = constant + slope*z, else None."""
    if not a.den.is_constant():
        return None
    num = a.num
    dc = a.den.constant_value()
    if num.degree("z") > 1:
        return None
    if any(v != "z" for v in num.used_vars()):
        return None
    lam = GaussianRational.coerce(0)
    mu = GaussianRational.coerce(0)
    zi = num.vars.index("z") if "z" in num.vars else None
    for exps, c in num.terms.items():
        e = exps[zi] if zi is not None else 0
        if e == 0:
            lam = c
        elif e == 1:
            mu = c
    inv = dc.inverse()
    return lam * inv, mu * inv


def classify_inverse_square(eq: DelayDiffEq) -> Verdict:
    """Parameter extraction for the inverse-square class.

    Passes exactly when c vanishes, a is affine, and the forcing term is
    nu*a - mu for a single constant nu; the triple is returned and rebuilding
    from it reproduces the equation.
    """
    if eq.kind != EqKind.INVERSE_SQUARE:
        raise ValueError("classifier expects the inverse-square class")
    if eq.a.is_zero:
        return Verdict(
            eq.kind, Outcome.HYPOTHESIS_VIOLATION,
            ("coefficient of the derivative term is identically zero",),
        )
    if not eq.c.is_zero:
        return Verdict(
            eq.kind, Outcome.VIOLATES_NECESSARY_CONDITION,
            ("additive coefficient c is not identically zero",),
        )
    parts = _affine_parts(eq.a)
    if parts is None:
        witness = second_difference(eq.a)
        return Verdict(
            eq.kind, Outcome.VIOLATES_NECESSARY_CONDITION,
            (
                "coefficient a is not affine in z; its second difference is "
                f"{witness} rather than zero",
            ),
        )
    lam, mu = parts
    nu_fn = (eq.b + FieldElem.const(mu)) / eq.a
    if not nu_fn.is_constant():
        return Verdict(
            eq.kind, Outcome.VIOLATES_NECESSARY_CONDITION,
            (
                "no constant matches the forcing term: (b + slope)/a is not "
                "constant",
            ),
        )
    nu = nu_fn.constant_value()
    params = NormalFormParams(lam, mu, nu)
    return Verdict(
        eq.kind, Outcome.CONSISTENT_BRANCH_A,
        (f"a = {lam} + {mu}*z and b = {nu}*a - {mu}",),
        params=params,
    )


def classify(eq: DelayDiffEq) -> Verdict:
    """Dispatch on the equation class."""
    if eq.kind == EqKind.LOG_DERIV:
        return classify_log_deriv(eq)
    if eq.kind == EqKind.PURE_LOG_DERIV:
        return classify_pure_log_deriv(eq)
    return classify_inverse_square(eq)
