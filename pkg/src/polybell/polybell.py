"""Poly-Bell numbers: the factorial-normalized companions of the p-Bell family.

For p >= 0 the poly-Bell number is B_n^(p) = B_{n,p}/p!.  The negative-index
values are the integers

    B_n^(-p) = sum_{k=p}^{n} k!/(k-p)! {n,k},

zero whenever p > n except B_0^(0) = 1.  They satisfy

    sum_{p=0}^{n} B_n^(-p) y^p/p! = phi_n(1 + y),

and, unlike poly-Bernoulli numbers, they are NOT symmetric in (n, p):
``duality_counterexample`` exhibits the smallest witness.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, perm

from .exact_core import Polynomial, poly_eval
from .pbell import DEFAULT_BACKEND, PBellBackend, pbell_number, pbell_poly
from .special_numbers import bell_number, bell_poly, stirling2

__all__ = [
    "polybell_pos",
    "polybell_neg",
    "polybell_neg_int",
    "polybell_neg_derivative",
    "polybell_neg_row_poly",
    "polybell_poly",
    "duality_counterexample",
    "iterated_integral_pbell",
]


def _check_np(n: int, p: int) -> None:
    if n < 0 or p < 0:
        raise ValueError(f"indices must be nonnegative, got n={n}, p={p}")


def polybell_pos(n: int, p: int, backend: PBellBackend = DEFAULT_BACKEND) -> Fraction:
    """B_n^(p) = B_{n,p}/p! for p >= 0."""
    _check_np(n, p)
    return pbell_number(n, p, backend) / factorial(p)


def polybell_neg(n: int, p: int) -> Fraction:
    """B_n^(-p) = sum_{k >= p} k!/(k-p)! {n,k}; an integer-valued Rational."""
    _check_np(n, p)
    return sum((perm(k, p) * stirling2(n, k) for k in range(p, n + 1)), Fraction(0))


def polybell_neg_int(n: int, p: int) -> int:
    """B_n^(-p) as a Python int (raises if a non-integer ever appeared)."""
    value = polybell_neg(n, p)
    if value.denominator != 1:
        raise ArithmeticError(f"B_{n}^(-{p}) = {value} is not an integer")
    return value.numerator


def polybell_neg_derivative(n: int, p: int) -> Fraction:
    """The derivative form B_n^(-p) = p! sum_j C(n,j) {j,p} phi_{n-j}."""
    _check_np(n, p)
    return factorial(p) * sum(
        (comb(n, j) * stirling2(j, p) * bell_number(n - j) for j in range(p, n + 1)),
        Fraction(0),
    )


def polybell_neg_row_poly(n: int) -> Polynomial:
    """The row polynomial sum_p B_n^(-p) y^p/p!, which equals phi_n(1 + y)."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got n={n}")
    return Polynomial([polybell_neg(n, p) / factorial(p) for p in range(n + 1)])


def polybell_poly(n: int, p: int, backend: PBellBackend = DEFAULT_BACKEND) -> Polynomial:
    """The poly-Bell polynomial B_n^(p)(x) = B_{n,p}(x)/p!."""
    _check_np(n, p)
    return pbell_poly(n, p, backend) * Fraction(1, factorial(p))


def duality_counterexample() -> tuple[int, int, Fraction, Fraction]:
    """Smallest (n, p) with n > p >= 1 and B_n^(-p) != B_p^(-n).

    Poly-Bernoulli numbers satisfy B_n^(-p) = B_p^(-n); poly-Bell numbers do
    not, and the first witness is (2, 1) with 3 on the left and 0 on the
    right.  Diagonal cells agree trivially and are skipped.
    """
    for n in range(2, 50):
        for p in range(1, n):
            lhs, rhs = polybell_neg(n, p), polybell_neg(p, n)
            if lhs != rhs:
                return n, p, lhs, rhs
    raise AssertionError("no witness found below n = 50; the asymmetry should appear at (2, 1)")


def iterated_integral_pbell(n: int, p: int) -> Fraction:
    """B_{n,p} as p! times the p-fold antiderivative of phi_n evaluated at 1
    (all integration constants zero)."""
    _check_np(n, p)
    poly = bell_poly(n)
    for _ in range(p):
        poly = poly.antiderivative()
    return factorial(p) * poly_eval(poly, 1)
