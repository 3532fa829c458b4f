"""Mechanical verification of the generating-function and pointwise identities.

Every verifier recomputes both sides of one identity with exact arithmetic at
a requested truncation order (or over a requested index range) and reports the
smallest differing index when the sides disagree.  Identity ids are stable
strings, usable from the CLI with ``verify --only``.

Dual-route discipline: the two sides of each check are built along different
computation routes (e.g. backend values vs. pure series algebra), so a defect
planted in one shared table surfaces as a localized first difference.

Identities covered, by id
-------------------------
* ``egf-definition``        f_p(z) = sum_k C(k+p,k)^{-1} (e^z-1)^k / k!
* ``egf-closed-form``       (e^z-1)^p f_p = p! exp(e^z-1)
                            - sum_{k=1}^p p!/(p-k)! (e^z-1)^{p-k},
                            plus the displayed low-p quotient forms
* ``egf-step-recurrence``   (e^z-1) f_p = p (f_{p-1} - 1)
* ``egf-three-term``        f_p = (1 + w/(p+1)) f_{p+1} - (w/(p+2)) f_{p+2}
* ``double-egf-pbell``      (e^z-1-y) sum B_{n,p} z^n/n! y^p/p!
                            = (e^z-1) exp(e^z-1) - y e^y
                            (the -y e^y term makes the finite geometric
                            telescoping honest at n = 0)
* ``double-egf-polybell``   sum B_n^(-p) z^n/n! y^p/p! = exp((y+1)(e^z-1))
* ``egf-derivative-operator`` f_p = (-1)^{p-1} p exp(e^z-1)
                            (e^{-z} d/dz)^{p-1} [(1-exp(1-e^z))/(e^z-1)]
* ``incomplete-gamma-form`` (e^z-1)^p f_p = p exp(e^z-1) (p-1)!
                            (1 - e^{-(e^z-1)} sum_{j<p} (e^z-1)^j/j!),
                            plus a floating-point spot check of
                            f_p(z0) = p e^w w^{-p} gamma(p, w), w = e^{z0}-1
* ``cross-column-recurrence`` B_{n+1,p+1} = B_{n+1,p}
                            - sum_{k=0}^n C(n+1,k) (B_{k,p+1}/(p+1)
                                                     - B_{k,p+2}/(p+2))
                            (the convolution the three-term relation actually
                            implies; the coefficient-free two-term shortcut
                            fails already at n = 1, p = 0)
* ``stirling-transform``    sum_{k<=m} s(m,k) B_{n+k,p}
                            = sum_{k<=n} {n+m,k+m}_m C(m+k+p,p)^{-1}
* ``poly-recurrence``       B_{n+1,p}(x) = x B_{n,p}(x)
                            - sum_k C(n,k) ((p/(p+1)) B_{k,p+1}(x) - B_{k,p}(x))
* ``ramanujan-p1``          B_{n,1} = sum_k C(n,k) phi_{k+1} B_{n-k}/(k+1)
* ``iterated-integral``     B_{n,p} = p! (p-fold antiderivative of phi_n)(1)
* ``polybell-row-sum``      sum_{p<=n} B_n^(-p)/p! = phi_n(2)
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, exp, expm1, factorial
from typing import Callable, Iterable, Sequence

from .exact_core import (
    EgfSeries,
    Polynomial,
    egf_constant,
    egf_compose_em1,
    egf_derivative,
    egf_div,
    egf_em1,
    egf_exp,
    egf_exp_rz,
    egf_mul,
    egf_pow,
    format_rational,
    poly_eval,
)
from .pbell import DEFAULT_BACKEND, PBellBackend, pbell_column, pbell_egf, pbell_number, pbell_poly, pbell_ramanujan_p1
from .polybell import iterated_integral_pbell, polybell_neg
from .special_numbers import bell_poly, r_stirling2, stirling1

__all__ = [
    "CheckReport",
    "IDENTITY_IDS",
    "run_all",
    "thread_count",
    "verify_egf_definition",
    "verify_closed_forms",
    "verify_step_recurrence",
    "verify_three_term_contiguous",
    "verify_double_egf_pbell",
    "verify_double_egf_polybell",
    "verify_derivative_operator_form",
    "verify_incomplete_gamma_form",
    "verify_column_recurrence",
    "verify_stirling_transform",
    "verify_poly_recurrence",
    "verify_ramanujan_form",
    "verify_iterated_integral",
    "verify_row_sum",
]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one identity check.

    ``detail`` is empty exactly when ``status`` is "pass"; on failure it names
    the smallest differing coefficient index and both values.
    """

    identity_id: str
    params: dict = field(default_factory=dict)
    status: str = "pass"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.identity_id,
                "params": self.params,
                "status": self.status,
                "detail": self.detail,
            }
        )


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def _series_report(identity_id: str, params: dict, lhs: EgfSeries, rhs: EgfSeries) -> CheckReport:
    idx = lhs.first_difference(rhs)
    if idx is None:
        return CheckReport(identity_id, params)
    detail = (
        f"first difference at n={idx}: lhs={_fmt(lhs.coeffs[idx])}, rhs={_fmt(rhs.coeffs[idx])}"
    )
    return CheckReport(identity_id, params, "fail", detail)


def _bivariate_report(
    identity_id: str,
    params: dict,
    lhs_slices: Sequence[EgfSeries],
    rhs_slices: Sequence[EgfSeries],
) -> CheckReport:
    for q, (ls, rs) in enumerate(zip(lhs_slices, rhs_slices)):
        idx = ls.first_difference(rs)
        if idx is not None:
            detail = (
                f"first difference at (n={idx}, p={q}): "
                f"lhs={_fmt(ls.coeffs[idx])}, rhs={_fmt(rs.coeffs[idx])}"
            )
            return CheckReport(identity_id, params, "fail", detail)
    return CheckReport(identity_id, params)


def _pointwise_report(identity_id: str, params: dict, cases: Iterable[tuple[str, object, object]]) -> CheckReport:
    for label, lhs, rhs in cases:
        if lhs != rhs:
            detail = f"first failing case at ({label}): lhs={_fmt(lhs)}, rhs={_fmt(rhs)}"
            return CheckReport(identity_id, params, "fail", detail)
    return CheckReport(identity_id, params)


def verify_egf_definition(
    p: int, order: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """Compare the (e^z-1)-composition route against backend values."""
    outer = [Fraction(1, comb(k + p, p) * factorial(k)) for k in range(order + 1)]
    lhs = egf_compose_em1(outer, order)
    rhs = pbell_egf(p, order, backend)
    return _series_report("egf-definition", {"p": p, "order": order}, lhs, rhs)


def verify_closed_forms(
    p: int, order: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """Denominator-cleared closed form, plus the displayed quotients for p <= 3."""
    if p < 1:
        raise ValueError("the closed form needs p >= 1")
    params = {"p": p, "order": order}
    w = egf_em1(order)
    exp_w = egf_exp(w)
    f = pbell_egf(p, order, backend)
    lhs = egf_mul(egf_pow(w, p), f)
    rhs = exp_w.scale(factorial(p))
    for k in range(1, p + 1):
        falling = factorial(p) // factorial(p - k)
        rhs = rhs - egf_pow(w, p - k).scale(falling)
    report = _series_report("egf-closed-form", params, lhs, rhs)
    if not report.passed or p > 3:
        return report
    if p == 1:
        quotient = egf_div(exp_w - 1, w)
    elif p == 2:
        quotient = egf_div((exp_w - egf_exp_rz(1, order)).scale(2), egf_pow(w, 2))
    else:
        numerator = (exp_w.scale(2) - egf_exp_rz(2, order) - 1).scale(3)
        quotient = egf_div(numerator, egf_pow(w, 3))
    report2 = _series_report("egf-closed-form", params, quotient, f.truncate(quotient.order))
    if not report2.passed:
        detail = f"displayed quotient form: {report2.detail}"
        return CheckReport("egf-closed-form", params, "fail", detail)
    return report


def verify_step_recurrence(
    p: int, order: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """(e^z - 1) f_p = p (f_{p-1} - 1)."""
    if p < 1:
        raise ValueError("the step recurrence needs p >= 1")
    w = egf_em1(order)
    lhs = egf_mul(w, pbell_egf(p, order, backend))
    rhs = (pbell_egf(p - 1, order, backend) - 1).scale(p)
    return _series_report("egf-step-recurrence", {"p": p, "order": order}, lhs, rhs)


def verify_three_term_contiguous(
    p: int, order: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """f_p = (1 + w/(p+1)) f_{p+1} - (w/(p+2)) f_{p+2} with w = e^z - 1."""
    w = egf_em1(order)
    f1 = pbell_egf(p + 1, order, backend)
    f2 = pbell_egf(p + 2, order, backend)
    lhs = pbell_egf(p, order, backend)
    rhs = f1 + egf_mul(w, f1).scale(Fraction(1, p + 1)) - egf_mul(w, f2).scale(Fraction(1, p + 2))
    return _series_report("egf-three-term", {"p": p, "order": order}, lhs, rhs)


def verify_double_egf_pbell(
    z_order: int, y_order: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """Cleared double EGF: (e^z-1-y) S(z,y) = (e^z-1) exp(e^z-1) - y e^y.

    S(z,y) = sum_{n,p} B_{n,p} z^n/n! y^p/p!; slices are indexed by the
    y-power with 1/p! normalization, so multiplying by y sends slice q-1 to
    q times itself at q.
    """
    params = {"z_order": z_order, "y_order": y_order}
    w = egf_em1(z_order)
    slices = [pbell_egf(q, z_order, backend) for q in range(y_order + 1)]
    lhs, rhs = [], []
    for q in range(y_order + 1):
        left = egf_mul(w, slices[q])
        if q >= 1:
            left = left - slices[q - 1].scale(q)
        lhs.append(left)
        if q == 0:
            rhs.append(egf_mul(w, egf_exp(w)))
        else:
            rhs.append(egf_constant(-q, z_order))
    return _bivariate_report("double-egf-pbell", params, lhs, rhs)


def verify_double_egf_polybell(z_order: int, y_order: int) -> CheckReport:
    """sum_{n,p} B_n^(-p) z^n/n! y^p/p! = exp((y+1)(e^z-1)): slice p of the
    right side is (e^z-1)^p exp(e^z-1)."""
    params = {"z_order": z_order, "y_order": y_order}
    w = egf_em1(z_order)
    exp_w = egf_exp(w)
    lhs = [
        EgfSeries([polybell_neg(n, q) for n in range(z_order + 1)]) for q in range(y_order + 1)
    ]
    rhs = [egf_mul(egf_pow(w, q), exp_w) for q in range(y_order + 1)]
    return _bivariate_report("double-egf-polybell", params, lhs, rhs)


def verify_derivative_operator_form(
    p: int, order: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """f_p = (-1)^{p-1} p exp(e^z-1) (e^{-z} d/dz)^{p-1} [(1-exp(1-e^z))/(e^z-1)].

    Each application of e^{-z} d/dz costs one order of truncation, so the
    comparison runs to order - (p-1), which must stay >= 1.
    """
    if p < 1:
        raise ValueError("the operator form needs p >= 1")
    if order - (p - 1) < 1:
        raise ValueError(f"order {order} leaves no coefficients after {p - 1} derivatives")
    params = {"p": p, "order": order, "compare_order": order - (p - 1)}
    # One guard order for the enclosed division by w, so the final comparison
    # still reaches order - (p - 1).
    big = order + 1
    w = egf_em1(big)
    numerator = egf_constant(1, big) - egf_exp(w.scale(-1))
    g = egf_div(numerator, w)
    e_minus_z = egf_exp_rz(-1, big)
    for _ in range(p - 1):
        g = egf_mul(e_minus_z, egf_derivative(g))
    operator_side = egf_mul(egf_exp(w), g).scale(Fraction((-1) ** (p - 1) * p))
    f = pbell_egf(p, operator_side.order, backend)
    return _series_report("egf-derivative-operator", params, f, operator_side)


def verify_incomplete_gamma_form(
    p: int,
    order: int,
    z0: Fraction = Fraction(1, 2),
    backend: PBellBackend = DEFAULT_BACKEND,
) -> CheckReport:
    """Lower-incomplete-gamma representation of f_p, in two layers.

    Symbolic layer: substitute the closed form
    gamma(p, w) = (p-1)! (1 - e^{-w} sum_{j<p} w^j/j!) (integer p) into
    f_p = p e^w w^{-p} gamma(p, w) and compare the cleared identity exactly.
    Numeric layer: evaluate both sides as floats at z = z0.
    """
    if p < 1:
        raise ValueError("the incomplete-gamma form needs p >= 1")
    params = {"p": p, "order": order, "z0": _fmt(z0)}
    w = egf_em1(order)
    exp_w = egf_exp(w)
    f = pbell_egf(p, order, backend)
    lhs = egf_mul(egf_pow(w, p), f)
    partial_sum = egf_constant(0, order)
    for j in range(p):
        partial_sum = partial_sum + egf_pow(w, j).scale(Fraction(1, factorial(j)))
    gamma_series = (egf_constant(1, order) - egf_mul(egf_exp(w.scale(-1)), partial_sum)).scale(
        factorial(p - 1)
    )
    rhs = egf_mul(exp_w, gamma_series).scale(p)
    report = _series_report("incomplete-gamma-form", params, lhs, rhs)
    if not report.passed:
        return report
    from .numeric_bridge import hyp1f1, lower_inc_gamma

    w0 = expm1(float(z0))
    series_side = hyp1f1(1.0, p + 1.0, w0)
    gamma_side = p * exp(w0) / w0**p * lower_inc_gamma(p, w0)
    if abs(series_side - gamma_side) > 1e-10:
        detail = (
            f"float spot check at z0={_fmt(z0)}: series form {series_side!r} vs "
            f"gamma form {gamma_side!r}"
        )
        return CheckReport("incomplete-gamma-form", params, "fail", detail)
    return report


def verify_column_recurrence(
    n_max: int, p_max: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """The cross-column convolution implied by the three-term relation:

    B_{n+1,p+1} = B_{n+1,p} - sum_{k=0}^{n} C(n+1,k)
                  (B_{k,p+1}/(p+1) - B_{k,p+2}/(p+2)).

    (A two-term shortcut replacing the convolution by single binomial-weighted
    terms is tempting but already false at n = 1, p = 0.)
    """
    params = {"n_max": n_max, "p_max": p_max}
    cols = {q: pbell_column(n_max + 1, q, backend) for q in range(p_max + 3)}

    def cases():
        for p in range(p_max + 1):
            for n in range(n_max):
                lhs = cols[p + 1][n + 1]
                rhs = cols[p][n + 1] - sum(
                    comb(n + 1, k)
                    * (cols[p + 1][k] / (p + 1) - cols[p + 2][k] / (p + 2))
                    for k in range(n + 1)
                )
                yield f"n={n + 1}, p={p + 1}", lhs, rhs

    return _pointwise_report("cross-column-recurrence", params, cases())


def verify_stirling_transform(
    n_max: int, m_max: int, p_max: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """sum_{k<=m} s(m,k) B_{n+k,p} = sum_{k<=n} {n+m,k+m}_m C(m+k+p,p)^{-1}."""
    params = {"n_max": n_max, "m_max": m_max, "p_max": p_max}
    cols = {q: pbell_column(n_max + m_max, q, backend) for q in range(p_max + 1)}

    def cases():
        for p in range(p_max + 1):
            for m in range(m_max + 1):
                for n in range(n_max + 1):
                    lhs = sum(stirling1(m, k) * cols[p][n + k] for k in range(m + 1))
                    rhs = sum(
                        r_stirling2(n, k, m) * Fraction(1, comb(m + k + p, p))
                        for k in range(n + 1)
                    )
                    yield f"n={n}, m={m}, p={p}", lhs, rhs

    return _pointwise_report("stirling-transform", params, cases())


def verify_poly_recurrence(
    n_max: int, p_max: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """B_{n+1,p}(x) = x B_{n,p}(x) - sum_k C(n,k) ((p/(p+1)) B_{k,p+1}(x)
    - B_{k,p}(x)), compared coefficient-by-coefficient."""
    params = {"n_max": n_max, "p_max": p_max}
    x = Polynomial.x()

    def cases():
        for p in range(p_max + 1):
            polys_p = [pbell_poly(n, p, backend) for n in range(n_max + 2)]
            polys_p1 = [pbell_poly(n, p + 1, backend) for n in range(n_max + 1)]
            for n in range(n_max + 1):
                lhs = polys_p[n + 1]
                acc = x * polys_p[n]
                for k in range(n + 1):
                    correction = polys_p1[k] * Fraction(p, p + 1) - polys_p[k]
                    acc = acc - comb(n, k) * correction
                yield f"n={n + 1}, p={p}", lhs, acc

    return _pointwise_report("poly-recurrence", params, cases())


def verify_ramanujan_form(n_max: int, backend: PBellBackend = DEFAULT_BACKEND) -> CheckReport:
    """Ramanujan's Bernoulli form of the p = 1 column against the backend."""
    params = {"n_max": n_max}
    col = pbell_column(n_max, 1, backend)
    cases = ((f"n={n}", pbell_ramanujan_p1(n), col[n]) for n in range(n_max + 1))
    return _pointwise_report("ramanujan-p1", params, cases)


def verify_iterated_integral(
    n_max: int, p_max: int, backend: PBellBackend = DEFAULT_BACKEND
) -> CheckReport:
    """B_{n,p} as p! times the p-fold antiderivative of phi_n at 1."""
    params = {"n_max": n_max, "p_max": p_max}
    cols = {q: pbell_column(n_max, q, backend) for q in range(p_max + 1)}
    cases = (
        (f"n={n}, p={p}", iterated_integral_pbell(n, p), cols[p][n])
        for p in range(p_max + 1)
        for n in range(n_max + 1)
    )
    return _pointwise_report("iterated-integral", params, cases)


def verify_row_sum(n_max: int) -> CheckReport:
    """sum_{p<=n} B_n^(-p)/p! = phi_n(2)."""
    params = {"n_max": n_max}
    cases = (
        (
            f"n={n}",
            sum((polybell_neg(n, p) / factorial(p) for p in range(n + 1)), Fraction(0)),
            poly_eval(bell_poly(n), 2),
        )
        for n in range(n_max + 1)
    )
    return _pointwise_report("polybell-row-sum", params, cases)


IDENTITY_IDS: tuple[str, ...] = (
    "egf-definition",
    "egf-closed-form",
    "egf-step-recurrence",
    "egf-three-term",
    "double-egf-pbell",
    "double-egf-polybell",
    "egf-derivative-operator",
    "incomplete-gamma-form",
    "cross-column-recurrence",
    "stirling-transform",
    "poly-recurrence",
    "ramanujan-p1",
    "iterated-integral",
    "polybell-row-sum",
)


def thread_count() -> int:
    """Worker cap for embarrassingly parallel sections.

    POLYBELL_THREADS overrides the default of min(4, cpu count); values <= 1
    mean serial execution.
    """
    raw = os.environ.get("POLYBELL_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"POLYBELL_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(4, os.cpu_count() or 1))


def _jobs(n_max: int, p_max: int, order: int) -> list[tuple[str, Callable[[], CheckReport]]]:
    jobs: list[tuple[str, Callable[[], CheckReport]]] = []
    for p in range(p_max + 1):
        jobs.append(("egf-definition", lambda p=p: verify_egf_definition(p, order)))
    for p in range(1, p_max + 1):
        jobs.append(("egf-closed-form", lambda p=p: verify_closed_forms(p, order)))
    for p in range(1, p_max + 1):
        jobs.append(("egf-step-recurrence", lambda p=p: verify_step_recurrence(p, order)))
    for p in range(p_max + 1):
        jobs.append(("egf-three-term", lambda p=p: verify_three_term_contiguous(p, order)))
    jobs.append(("double-egf-pbell", lambda: verify_double_egf_pbell(order, p_max)))
    jobs.append(("double-egf-polybell", lambda: verify_double_egf_polybell(order, p_max)))
    for p in range(1, min(p_max, order) + 1):
        jobs.append(
            ("egf-derivative-operator", lambda p=p: verify_derivative_operator_form(p, order))
        )
    for p in range(1, p_max + 1):
        jobs.append(("incomplete-gamma-form", lambda p=p: verify_incomplete_gamma_form(p, order)))
    jobs.append(("cross-column-recurrence", lambda: verify_column_recurrence(n_max, p_max)))
    jobs.append(
        (
            "stirling-transform",
            lambda: verify_stirling_transform(min(n_max, 8), min(n_max, 8), min(p_max, 4)),
        )
    )
    jobs.append(("poly-recurrence", lambda: verify_poly_recurrence(min(n_max, 10), min(p_max, 4))))
    jobs.append(("ramanujan-p1", lambda: verify_ramanujan_form(n_max)))
    jobs.append(("iterated-integral", lambda: verify_iterated_integral(min(n_max, 10), p_max)))
    jobs.append(("polybell-row-sum", lambda: verify_row_sum(n_max)))
    return jobs


def run_all(
    n_max: int = 12,
    p_max: int = 5,
    order: int = 12,
    only: Sequence[str] | None = None,
) -> list[CheckReport]:
    """Run every identity check (or the named subset) and return the reports
    in a deterministic order."""
    if only is not None:
        unknown = sorted(set(only) - set(IDENTITY_IDS))
        if unknown:
            raise KeyError(f"unknown identity ids: {', '.join(unknown)}")
    jobs = [job for name, job in _jobs(n_max, p_max, order) if only is None or name in only]
    workers = thread_count()
    if workers <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))
