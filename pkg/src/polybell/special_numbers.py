"""Classical exact sequences used throughout the package.

Stirling numbers of both kinds, their r-shifted and weighted-polynomial
relatives, Whitney numbers, Bernoulli and higher-order Bernoulli numbers, and
Bell numbers/polynomials.  Every value is an exact Rational memoized in one
shared write-once triangle cache.

Conventions
-----------
* ``stirling2(n, k)``: partitions of an n-set into k blocks,
  {n+1,k} = k{n,k} + {n,k-1}.
* ``stirling1(n, k)``: signed, s(n+1,k) = s(n,k-1) - n s(n,k), so that
  x(x-1)...(x-n+1) = sum_k s(n,k) x^k.
* ``r_stirling2(n, k, r)``: the shifted r-Stirling value {n+r, k+r}_r, i.e.
  partitions of an (n+r)-set into k+r blocks where the first r elements live
  in distinct blocks.  Recurrence T(n+1,k) = (k+r) T(n,k) + T(n,k-1),
  T(0,k) = [k = 0].
* ``weighted_stirling_poly(n, k)``: S_n^k(x) = sum_i C(n,i) {i,k} x^{n-i}, the
  polynomial with S_n^k(r) = {n+r, k+r}_r for every nonnegative integer r.
* ``bernoulli(n)``: coefficient of z^n/n! in z/(e^z - 1), so B_1 = -1/2.
* ``gen_bernoulli(n, alpha)``: coefficient of z^n/n! in (z/(e^z - 1))^alpha
  for integer alpha >= 0.
* ``bell_poly(n)``: phi_n(x) = sum_k {n,k} x^k; ``bell_number(n)`` = phi_n(1).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .exact_core import Polynomial, RationalLike, poly_eval, rational

__all__ = [
    "TriangleCache",
    "CACHE",
    "reset_cache",
    "stirling1",
    "stirling2",
    "r_stirling2",
    "weighted_stirling_poly",
    "whitney2",
    "bernoulli",
    "gen_bernoulli",
    "bell_poly",
    "bell_number",
]

Key = tuple  # (family tag, row, col)


class TriangleCache:
    """Write-once memo for triangular families, keyed by (tag, row, col).

    Reads are lock-free (CPython dict reads are atomic); inserts go through
    ``put``, which keeps the first value stored so two threads racing on the
    same cell always observe the same rational.  ``force`` exists for fault
    injection in tests and is the only way to overwrite an entry.
    """

    def __init__(self) -> None:
        self._store: dict[Key, object] = {}
        self._lock = threading.Lock()

    def get(self, key: Key):
        return self._store.get(key)

    def put(self, key: Key, value):
        with self._lock:
            return self._store.setdefault(key, value)

    def force(self, key: Key, value) -> None:
        """Test hook: overwrite one cell, bypassing write-once semantics."""
        with self._lock:
            self._store[key] = value

    def clear(self) -> None:
        with self._lock:
            self._store.clear()

    def __len__(self) -> int:
        return len(self._store)

    def __contains__(self, key: Key) -> bool:
        return key in self._store


CACHE = TriangleCache()

_S1 = "s1"
_S2 = "s2"
_BERN = "bernoulli"
_GENBERN = "genbernoulli"
_BELL = "bell"


def reset_cache() -> None:
    CACHE.clear()


def _check_indices(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise ValueError(f"indices must be nonnegative, got n={n}, k={k}")


def _fill_rows(tag: str, n_max: int, step) -> None:
    # Rows are filled in increasing order so every read of row r-1 hits the
    # cache, including entries planted by TriangleCache.force.
    for r in range(n_max + 1):
        for c in range(r + 1):
            key = (tag, r, c)
            if key in CACHE:
                continue
            CACHE.put(key, step(tag, r, c))


def _cached(tag: str, r: int, c: int) -> Fraction:
    val = CACHE.get((tag, r, c))
    return Fraction(0) if val is None else val


def stirling2(n: int, k: int) -> Fraction:
    """Stirling number of the second kind {n, k}, as an exact Rational."""
    _check_indices(n, k)
    if k > n:
        return Fraction(0)
    hit = CACHE.get((_S2, n, k))
    if hit is not None:
        return hit

    def step(tag: str, r: int, c: int) -> Fraction:
        if r == 0:
            return Fraction(1) if c == 0 else Fraction(0)
        if c == 0:
            return Fraction(0)
        return c * _cached(tag, r - 1, c) + _cached(tag, r - 1, c - 1)

    _fill_rows(_S2, n, step)
    return CACHE.get((_S2, n, k))


def stirling1(n: int, k: int) -> Fraction:
    """Signed Stirling number of the first kind s(n, k)."""
    _check_indices(n, k)
    if k > n:
        return Fraction(0)
    hit = CACHE.get((_S1, n, k))
    if hit is not None:
        return hit

    def step(tag: str, r: int, c: int) -> Fraction:
        if r == 0:
            return Fraction(1) if c == 0 else Fraction(0)
        if c == 0:
            return Fraction(0)
        return _cached(tag, r - 1, c - 1) - (r - 1) * _cached(tag, r - 1, c)

    _fill_rows(_S1, n, step)
    return CACHE.get((_S1, n, k))


def r_stirling2(n: int, k: int, r: int) -> Fraction:
    """The shifted r-Stirling number {n+r, k+r}_r."""
    _check_indices(n, k)
    if r < 0:
        raise ValueError(f"shift must be nonnegative, got r={r}")
    if k > n:
        return Fraction(0)
    tag = f"s2r:{r}"
    hit = CACHE.get((tag, n, k))
    if hit is not None:
        return hit

    def step(t: str, row: int, c: int) -> Fraction:
        if row == 0:
            return Fraction(1) if c == 0 else Fraction(0)
        return (c + r) * _cached(t, row - 1, c) + _cached(t, row - 1, c - 1)

    _fill_rows(tag, n, step)
    return CACHE.get((tag, n, k))


def weighted_stirling_poly(n: int, k: int) -> Polynomial:
    """S_n^k(x) = sum_{i} C(n,i) {i,k} x^{n-i}; the zero polynomial if k > n."""
    _check_indices(n, k)
    if k > n:
        return Polynomial()
    coeffs = [Fraction(0)] * (n - k + 1)
    for i in range(k, n + 1):
        coeffs[n - i] = comb(n, i) * stirling2(i, k)
    return Polynomial(coeffs)


def whitney2(n: int, k: int, m: int, r: int) -> Fraction:
    """Whitney number of the second kind W_{m,r}(n,k) = m^{n-k} S_n^k(r/m)."""
    _check_indices(n, k)
    if m <= 0:
        raise ValueError(f"modulus must be positive, got m={m}")
    if k > n:
        return Fraction(0)
    return Fraction(m) ** (n - k) * poly_eval(weighted_stirling_poly(n, k), Fraction(r, m))


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got n={n}")
    hit = CACHE.get((_BERN, n, 0))
    if hit is not None:
        return hit
    for m in range(n + 1):
        key = (_BERN, m, 0)
        if key in CACHE:
            continue
        if m == 0:
            CACHE.put(key, Fraction(1))
            continue
        acc = sum(comb(m + 1, j) * _cached(_BERN, j, 0) for j in range(m))
        CACHE.put(key, -acc / (m + 1))
    return CACHE.get((_BERN, n, 0))


def gen_bernoulli(n: int, alpha: int) -> Fraction:
    """Higher-order Bernoulli number B_n^(alpha), coefficient of z^n/n! in
    (z/(e^z - 1))^alpha, built by repeated binomial convolution."""
    if n < 0 or alpha < 0:
        raise ValueError(f"indices must be nonnegative, got n={n}, alpha={alpha}")
    if alpha == 0:
        return Fraction(1) if n == 0 else Fraction(0)
    if alpha == 1:
        return bernoulli(n)
    hit = CACHE.get((_GENBERN, n, alpha))
    if hit is not None:
        return hit
    bernoulli(n)
    for a in range(2, alpha + 1):
        for m in range(n + 1):
            key = (_GENBERN, m, a)
            if key in CACHE:
                continue
            if a == 2:
                acc = sum(
                    comb(m, j) * _cached(_BERN, j, 0) * _cached(_BERN, m - j, 0)
                    for j in range(m + 1)
                )
            else:
                acc = sum(
                    comb(m, j) * _cached(_BERN, j, 0) * _cached(_GENBERN, m - j, a - 1)
                    for j in range(m + 1)
                )
            CACHE.put(key, acc)
    return CACHE.get((_GENBERN, n, alpha))


def bell_poly(n: int) -> Polynomial:
    """Bell polynomial phi_n(x) = sum_k {n,k} x^k."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got n={n}")
    return Polynomial([stirling2(n, k) for k in range(n + 1)])


def bell_number(n: int) -> Fraction:
    """Bell number phi_n = number of partitions of an n-set."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got n={n}")
    hit = CACHE.get((_BELL, n, 0))
    if hit is not None:
        return hit
    value = sum(stirling2(n, k) for k in range(n + 1))
    CACHE.put((_BELL, n, 0), value)
    return CACHE.get((_BELL, n, 0))
