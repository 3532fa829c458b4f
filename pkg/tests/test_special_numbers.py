import threading
from fractions import Fraction
from math import comb, factorial

import pytest

from polybell.exact_core import (
    EgfSeries,
    Polynomial,
    egf_div,
    egf_em1,
    egf_mul,
    egf_z,
    poly_eval,
)
from polybell.special_numbers import (
    CACHE,
    TriangleCache,
    bell_number,
    bell_poly,
    bernoulli,
    gen_bernoulli,
    r_stirling2,
    stirling1,
    stirling2,
    weighted_stirling_poly,
    whitney2,
)


def _partition_counts(n: int) -> dict[int, int]:
    """Block-count histogram of all set partitions of {0..n-1}, enumerated as
    restricted growth strings.  Independent brute-force oracle."""
    counts: dict[int, int] = {}

    def extend(prefix: list[int], used: int):
        if len(prefix) == n:
            counts[used] = counts.get(used, 0) + 1
            return
        for block in range(used + 1):
            extend(prefix + [block], max(used, block + 1))

    if n == 0:
        return {0: 1}
    extend([], 0)
    return counts


@pytest.mark.parametrize("n", range(0, 9))
def test_stirling2_counts_partitions(n):
    oracle = _partition_counts(n)
    for k in range(n + 2):
        assert stirling2(n, k) == oracle.get(k, 0)


def test_stirling2_out_of_range():
    assert stirling2(3, 5) == 0
    assert stirling2(0, 0) == 1
    assert stirling2(5, 0) == 0
    with pytest.raises(ValueError):
        stirling2(-1, 0)


def test_stirling1_expands_falling_factorial():
    # x(x-1)...(x-n+1) = sum_k s(n,k) x^k, checked as exact polynomials
    x = Polynomial.x()
    for n in range(13):
        falling = Polynomial([1])
        for i in range(n):
            falling = falling * (x - Polynomial([i]))
        expected = Polynomial([stirling1(n, k) for k in range(n + 1)])
        assert falling == expected


@pytest.mark.parametrize("n", range(0, 21, 4))
def test_stirling_orthogonality(n):
    for m in range(n + 1):
        total = sum(stirling1(n, k) * stirling2(k, m) for k in range(n + 1))
        assert total == (1 if n == m else 0)


def test_r_stirling2_reduces_to_plain():
    for n in range(10):
        for k in range(n + 2):
            assert r_stirling2(n, k, 0) == stirling2(n, k)


def test_r_stirling2_binomial_expansion():
    # T_r(n,k) = sum_j C(n,j) r^{n-j} {j,k}: distribute the elements that sit
    # with the r special blocks
    for r in (1, 2, 3):
        for n in range(9):
            for k in range(n + 1):
                expected = sum(
                    comb(n, j) * r ** (n - j) * stirling2(j, k) for j in range(k, n + 1)
                )
                assert r_stirling2(n, k, r) == expected


def test_weighted_stirling_poly_values():
    for n in range(9):
        for k in range(n + 1):
            poly = weighted_stirling_poly(n, k)
            # at x = 0 it collapses to a plain Stirling number
            assert poly_eval(poly, 0) == stirling2(n, k)
            # at x = 1 it shifts both indices up by one
            assert poly_eval(poly, 1) == stirling2(n + 1, k + 1)
            # at integer x = r it matches the r-shifted triangle
            for r in (1, 2, 3):
                assert poly_eval(poly, r) == r_stirling2(n, k, r)


def test_weighted_stirling_poly_above_diagonal_is_zero():
    assert weighted_stirling_poly(3, 5).is_zero


def test_whitney2_chain():
    for n in range(7):
        for k in range(n + 1):
            assert whitney2(n, k, 1, 0) == stirling2(n, k)
            assert whitney2(n, k, 1, 1) == r_stirling2(n, k, 1)
            # W_{2,1}(n,k) = 2^{n-k} S_n^k(1/2)
            expected = 2 ** (n - k) * poly_eval(weighted_stirling_poly(n, k), Fraction(1, 2))
            assert whitney2(n, k, 2, 1) == expected


def test_bernoulli_against_series_quotient():
    # dual route: z/(e^z - 1) coefficient extraction vs the recurrence
    q = egf_div(egf_z(21), egf_em1(21))
    for n in range(21):
        assert bernoulli(n) == q.coeff(n)


def test_bernoulli_known_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(12) == Fraction(-691, 2730)
    for n in range(3, 20, 2):
        assert bernoulli(n) == 0


def test_gen_bernoulli_level_one():
    for n in range(15):
        assert gen_bernoulli(n, 1) == bernoulli(n)


def test_gen_bernoulli_level_zero_and_small():
    assert gen_bernoulli(0, 0) == 1
    assert gen_bernoulli(3, 0) == 0
    for alpha in (1, 2, 3, 4):
        assert gen_bernoulli(0, alpha) == 1
        assert gen_bernoulli(1, alpha) == Fraction(-alpha, 2)
        assert gen_bernoulli(2, alpha) == Fraction(alpha * (3 * alpha - 1), 12)


def test_gen_bernoulli_convolution():
    # (z/(e^z-1))^alpha (z/(e^z-1))^beta = (z/(e^z-1))^{alpha+beta}
    order = 12
    for alpha in (1, 2, 3):
        for beta in (1, 2, 4):
            sa = EgfSeries([gen_bernoulli(n, alpha) for n in range(order + 1)])
            sb = EgfSeries([gen_bernoulli(n, beta) for n in range(order + 1)])
            sab = EgfSeries([gen_bernoulli(n, alpha + beta) for n in range(order + 1)])
            assert egf_mul(sa, sb).coeffs == sab.coeffs


def test_bell_numbers_and_polynomials():
    known = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
    for n, value in enumerate(known):
        assert bell_number(n) == value
        assert poly_eval(bell_poly(n), 1) == value
    # row polynomial coefficients are the partition-count triangle
    assert bell_poly(4).coeffs == (0, 1, 7, 6, 1)
    assert bell_poly(0).coeffs == (1,)


def test_bell_poly_touchard_recurrence():
    x = Polynomial.x()
    for n in range(12):
        rhs = Polynomial([0])
        for k in range(n + 1):
            rhs = rhs + comb(n, k) * bell_poly(k)
        assert bell_poly(n + 1) == x * rhs


# ---------------------------------------------------------------------------
# the memo cache


def test_cache_put_is_write_once():
    cache = TriangleCache()
    cache.put(("t", 1, 1), Fraction(5))
    cache.put(("t", 1, 1), Fraction(9))
    assert cache.get(("t", 1, 1)) == 5
    assert ("t", 1, 1) in cache
    assert len(cache) == 1


def test_cache_force_overrides_for_tests():
    cache = TriangleCache()
    cache.put(("t", 1, 1), Fraction(5))
    cache.force(("t", 1, 1), Fraction(9))
    assert cache.get(("t", 1, 1)) == 9
    cache.clear()
    assert len(cache) == 0
    assert cache.get(("t", 1, 1)) is None


def test_global_cache_resets_between_tests():
    # conftest's autouse fixture must have cleared anything earlier tests left
    assert ("s2", 6, 3) not in CACHE or CACHE.get(("s2", 6, 3)) == 90


def test_cache_concurrent_fill_is_consistent():
    results = []
    errors = []

    def worker():
        try:
            results.append(stirling2(60, 30))
        except Exception as exc:  # pragma: no cover - only on a real race
            errors.append(exc)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert len(set(results)) == 1
    # spot value against the explicit alternating-sum formula
    expected = sum((-1) ** (30 - j) * comb(30, j) * j**60 for j in range(31)) // factorial(30)
    assert results[0] == expected
