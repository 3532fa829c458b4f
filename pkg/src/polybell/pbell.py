"""p-Bell numbers and polynomials.

The p-Bell number B_{n,p} is defined by the EGF

    f_p(z) = sum_n B_{n,p} z^n/n! = 1F1(1; p+1; e^z - 1)
           = sum_k C(k+p,k)^{-1} (e^z - 1)^k / k!,

so B_{n,0} is the Bell number and B_{n,p} = sum_k C(k+p,k)^{-1} {n,k}.

Four independent computation routes are provided and cross-checked:

* ``explicit``     -- the C(k+p,k)^{-1} {n,k} sum above;
* ``recurrence``   -- a derivative recurrence coupling columns p and p+1:
                      B_{n+1,p} = (n+1) B_{n,p}
                                  - sum_{k=0}^{n-2} C(n,k) (-1)^{n-k} B_{k+1,p}
                                  - p/(p+1) B_{n,p+1};
* ``ztriangle``    -- the triangle Z_{n+1,m} = (m+1)/(m+p+1) Z_{n,m+1} + m Z_{n,m}
                      with Z_{0,m} = 1 and B_{n,p} = Z_{n,0} (the fast route);
* ``genbernoulli`` -- a closed form through Bell numbers and higher-order
                      Bernoulli numbers.

The p-Bell polynomial is the binomial transform
B_{n,p}(x) = sum_k C(n,k) B_{k,p} x^{n-k}; it is monic of degree n with
constant term B_{n,p}, and equals sum_k C(k+p,k)^{-1} S_n^k(x) in terms of the
weighted Stirling polynomials.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable

from .exact_core import EgfSeries, Polynomial, RationalLike, poly_eval, rational
from .special_numbers import bell_number, bernoulli, gen_bernoulli, stirling2, weighted_stirling_poly

__all__ = [
    "PBellBackend",
    "BackendMismatch",
    "pbell_explicit",
    "pbell_recurrence",
    "pbell_z_triangle",
    "pbell_gen_bernoulli",
    "pbell_number",
    "pbell_column",
    "pbell_egf",
    "pbell_ramanujan_p1",
    "pbell_poly",
    "pbell_poly_weighted",
    "zpoly_triangle",
]


class PBellBackend(Enum):
    EXPLICIT_STIRLING = "explicit"
    DERIVATIVE_RECURRENCE = "recurrence"
    Z_TRIANGLE = "ztriangle"
    GEN_BERNOULLI = "genbernoulli"


DEFAULT_BACKEND = PBellBackend.Z_TRIANGLE


class BackendMismatch(Exception):
    """Raised when cross-checked backends disagree on a value."""

    def __init__(self, n: int, p: int, values: dict[str, Fraction]):
        self.n, self.p, self.values = n, p, values
        body = ", ".join(f"{name}={value}" for name, value in sorted(values.items()))
        super().__init__(f"backends disagree at (n={n}, p={p}): {body}")


def _check_np(n: int, p: int) -> None:
    if n < 0 or p < 0:
        raise ValueError(f"indices must be nonnegative, got n={n}, p={p}")


def pbell_explicit(n: int, p: int) -> Fraction:
    """B_{n,p} = sum_k C(k+p,k)^{-1} {n,k}."""
    _check_np(n, p)
    return sum(
        (Fraction(1, comb(k + p, k)) * stirling2(n, k) for k in range(n + 1)),
        Fraction(0),
    )


def _recurrence_table(n_max: int, p: int) -> dict[tuple[int, int], Fraction]:
    """Rows 0..n_max of the derivative recurrence, columns p..p+n_max.

    Row r+1 at column c needs row r at columns c and c+1 plus rows below r at
    column c, so the table is filled one full row at a time over a shrinking
    column window.
    """
    memo: dict[tuple[int, int], Fraction] = {}
    for c in range(p, p + n_max + 1):
        memo[(0, c)] = Fraction(1)
    for r in range(n_max):
        for c in range(p, p + n_max - r):
            acc = (r + 1) * memo[(r, c)]
            acc -= sum(comb(r, k) * (-1) ** (r - k) * memo[(k + 1, c)] for k in range(r - 1))
            acc -= Fraction(c, c + 1) * memo[(r, c + 1)]
            memo[(r + 1, c)] = acc
    return memo


def pbell_recurrence(n: int, p: int) -> Fraction:
    _check_np(n, p)
    return _recurrence_table(n, p)[(n, p)]


def _z_rows(n_max: int, p: int) -> list[Fraction]:
    """[Z_{0,0}, ..., Z_{n_max,0}] for the triangle at order p, i.e. the
    whole p-column of B in one O(n_max^2) sweep."""
    row = [Fraction(1)] * (n_max + 1)
    out = [row[0]]
    for _ in range(n_max):
        row = [
            Fraction(m + 1, m + p + 1) * row[m + 1] + m * row[m] for m in range(len(row) - 1)
        ]
        out.append(row[0])
    return out


def pbell_z_triangle(n: int, p: int) -> Fraction:
    _check_np(n, p)
    return _z_rows(n, p)[n]


def pbell_gen_bernoulli(n: int, p: int) -> Fraction:
    """B_{n,p} = C(n+p,p)^{-1} sum_{k=0}^{n+p} C(n+p,k) phi_{n+p-k} B_k^(p)
                 - sum_{k=1}^{p} C(n+k,k)^{-1} C(p,k) B_{n+k}^(k)."""
    _check_np(n, p)
    head = sum(
        comb(n + p, k) * bell_number(n + p - k) * gen_bernoulli(k, p) for k in range(n + p + 1)
    ) / comb(n + p, p)
    tail = sum(
        Fraction(comb(p, k), comb(n + k, k)) * gen_bernoulli(n + k, k) for k in range(1, p + 1)
    )
    return head - tail


_BACKEND_FN: dict[PBellBackend, Callable[[int, int], Fraction]] = {
    PBellBackend.EXPLICIT_STIRLING: pbell_explicit,
    PBellBackend.DERIVATIVE_RECURRENCE: pbell_recurrence,
    PBellBackend.Z_TRIANGLE: pbell_z_triangle,
    PBellBackend.GEN_BERNOULLI: pbell_gen_bernoulli,
}


def pbell_number(
    n: int,
    p: int,
    backend: PBellBackend = DEFAULT_BACKEND,
    cross_check: bool = False,
) -> Fraction:
    """B_{n,p} via the chosen backend.

    With ``cross_check`` every backend is evaluated and any disagreement
    raises :class:`BackendMismatch` carrying all computed values.
    """
    _check_np(n, p)
    if not cross_check:
        return _BACKEND_FN[backend](n, p)
    values = {b.value: fn(n, p) for b, fn in _BACKEND_FN.items()}
    if len(set(values.values())) != 1:
        raise BackendMismatch(n, p, values)
    return values[backend.value]


def pbell_column(n_max: int, p: int, backend: PBellBackend = DEFAULT_BACKEND) -> list[Fraction]:
    """[B_{0,p}, ..., B_{n_max,p}], using a single sweep where the backend
    naturally produces whole columns."""
    _check_np(n_max, p)
    if backend is PBellBackend.Z_TRIANGLE:
        return _z_rows(n_max, p)
    if backend is PBellBackend.DERIVATIVE_RECURRENCE:
        table = _recurrence_table(n_max, p)
        return [table[(r, p)] for r in range(n_max + 1)]
    fn = _BACKEND_FN[backend]
    return [fn(r, p) for r in range(n_max + 1)]


def pbell_egf(p: int, order: int, backend: PBellBackend = DEFAULT_BACKEND) -> EgfSeries:
    """The truncated EGF f_p(z) with exact coefficients B_{n,p}."""
    return EgfSeries(pbell_column(order, p, backend))


def pbell_ramanujan_p1(n: int) -> Fraction:
    """Ramanujan's Bernoulli-number form of the p = 1 column:
    B_{n,1} = sum_k C(n,k) phi_{k+1} B_{n-k} / (k+1)."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got n={n}")
    return sum(
        (
            Fraction(comb(n, k), k + 1) * bell_number(k + 1) * bernoulli(n - k)
            for k in range(n + 1)
        ),
        Fraction(0),
    )


def pbell_poly(n: int, p: int, backend: PBellBackend = DEFAULT_BACKEND) -> Polynomial:
    """B_{n,p}(x) = sum_k C(n,k) B_{k,p} x^{n-k} (monic, constant term B_{n,p})."""
    _check_np(n, p)
    column = pbell_column(n, p, backend)
    return Polynomial([comb(n, d) * column[n - d] for d in range(n + 1)])


def pbell_poly_weighted(n: int, p: int, x: RationalLike) -> Fraction:
    """B_{n,p}(x) summed through weighted Stirling polynomials:
    sum_k C(k+p,k)^{-1} S_n^k(x)."""
    _check_np(n, p)
    xv = rational(x)
    return sum(
        (
            Fraction(1, comb(k + p, k)) * poly_eval(weighted_stirling_poly(n, k), xv)
            for k in range(n + 1)
        ),
        Fraction(0),
    )


def zpoly_triangle(n: int, p: int, x: RationalLike) -> Fraction:
    """B_{n,p}(x) by the polynomial triangle
    Z_{n+1,m}(x) = (m+1)/(m+p+1) Z_{n,m+1}(x) + (m+x) Z_{n,m}(x), Z_{0,m} = 1."""
    _check_np(n, p)
    xv = rational(x)
    row = [Fraction(1)] * (n + 1)
    for _ in range(n):
        row = [
            Fraction(m + 1, m + p + 1) * row[m + 1] + (m + xv) * row[m]
            for m in range(len(row) - 1)
        ]
    return row[0]
