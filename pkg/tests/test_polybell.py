from fractions import Fraction
from math import factorial

import pytest

from polybell.exact_core import Polynomial, poly_eval
from polybell.pbell import pbell_number, pbell_poly
from polybell.polybell import (
    duality_counterexample,
    iterated_integral_pbell,
    polybell_neg,
    polybell_neg_derivative,
    polybell_neg_int,
    polybell_neg_row_poly,
    polybell_poly,
    polybell_pos,
)
from polybell.special_numbers import bell_number, bell_poly

# rows n = 0..9 of the negative-order table, columns p = 1..4
NEG_TABLE = [
    (0, 0, 0, 0),
    (1, 0, 0, 0),
    (3, 2, 0, 0),
    (10, 12, 6, 0),
    (37, 62, 60, 24),
    (151, 320, 450, 360),
    (674, 1712, 3120, 3720),
    (3263, 9604, 21336, 33600),
    (17007, 56674, 147756, 287784),
    (94828, 351792, 1048830, 2424744),
]


def test_negative_order_reference_table():
    for n, row in enumerate(NEG_TABLE):
        for p, expected in enumerate(row, start=1):
            assert polybell_neg(n, p) == expected, (n, p)


def test_negative_order_int_view():
    assert polybell_neg_int(9, 4) == 2424744
    assert isinstance(polybell_neg_int(9, 4), int)
    assert polybell_neg_int(0, 1) == 0


def test_negative_order_derivative_route():
    for n in range(13):
        for p in range(1, 6):
            assert polybell_neg(n, p) == polybell_neg_derivative(n, p), (n, p)


def test_row_polynomial_is_shifted_bell_polynomial():
    # sum_p B_n^(-p) y^p / p! as a polynomial in y equals phi_n(1 + y)
    shift = Polynomial([1, 1])
    for n in range(13):
        assert polybell_neg_row_poly(n) == bell_poly(n).compose(shift)


def test_row_sum_is_bell_at_two():
    # p = 0 contributes phi_n itself; the whole row sums to phi_n(2)
    for n in range(16):
        total = bell_number(n) + sum(
            polybell_neg(n, p) / factorial(p) for p in range(1, n + 1)
        )
        assert total == poly_eval(bell_poly(n), 2)


def test_duality_fails_with_recorded_witness():
    n, p, lhs, rhs = duality_counterexample()
    assert (n, p) == (2, 1)
    assert lhs == 3 and rhs == 0
    assert polybell_neg(2, 1) == 3
    assert polybell_neg(1, 2) == 0


def test_positive_order_scaling():
    for n in range(10):
        assert polybell_pos(n, 0) == bell_number(n)
        for p in range(5):
            assert polybell_pos(n, p) * factorial(p) == pbell_number(n, p)


def test_positive_order_polynomial_scaling():
    for n in range(7):
        for p in range(4):
            scaled = pbell_poly(n, p) * Fraction(1, factorial(p))
            assert polybell_poly(n, p) == scaled


def test_iterated_integral_route():
    for n in range(11):
        for p in range(6):
            assert iterated_integral_pbell(n, p) == pbell_number(n, p), (n, p)


def test_degenerate_and_error_cases():
    assert polybell_neg(0, 3) == 0
    assert polybell_neg(3, 3) == 6  # 3! {3,3}
    with pytest.raises(ValueError):
        polybell_neg(-1, 1)
    with pytest.raises(ValueError):
        polybell_pos(2, -1)
