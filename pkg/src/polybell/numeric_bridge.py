"""Floating-point and Monte Carlo cross-checks of the exact results.

Every routine here estimates a quantity whose exact value the rest of the
package computes rationally, and returns a :class:`NumericCheck` pairing the
estimate with that exact target.

Randomness contract
-------------------
:class:`RngStream` is SplitMix64 run in counter mode: output ``i`` (1-based)
is ``mix64(seed + i * 0x9E3779B97F4A7C15)`` with the standard SplitMix64
finalizer, mapped to [0, 1) doubles by taking the top 53 bits.  The same seed
always yields the same sequence.  ``split(j)`` derives the disjoint child
stream ``mix64(seed XOR mix64((j+1) * 0xC2B2AE3D27D4EB4F))``; Monte Carlo
loops draw chunk ``j`` from ``split(j)``, which makes the reduction layout a
pure function of the sample count (chunk sums use NumPy's pairwise summation,
the cross-chunk total is ``math.fsum``), independent of any parallelism.

The beta-Poisson sampler draws lambda ~ Beta(1, p) by inverse CDF
(lambda = 1 - u^{1/p}, always in [0, 1]) and then Z ~ Poisson(lambda) by
inversion, which needs one uniform per draw since lambda <= 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Union

import numpy as np

from .exact_core import RationalLike, format_rational, poly_eval, rational
from .pbell import pbell_number, pbell_poly

__all__ = [
    "NumericCheck",
    "RngStream",
    "hyp1f1",
    "lower_inc_gamma",
    "dobinski_pbell",
    "dobinski_pbell_poly",
    "cesaro_pbell",
    "beta_poisson_sample",
    "beta_poisson_batch",
    "mc_moment_check",
    "mgf_check",
    "pmf_check",
]

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_GOLDEN_SPLIT = 0xC2B2AE3D27D4EB4F
_CHUNK = 1 << 19


@dataclass(frozen=True)
class NumericCheck:
    """A numeric estimate against its exact (or closed-form) target.

    ``target`` is a Rational whenever the exact side is rational; the MGF and
    pmf checks compare against transcendental closed forms and store a float.
    ``extra`` carries secondary comparisons (e.g. an alternate printed form)
    and is merged into the JSON serialization.
    """

    estimate: float
    target: Union[Fraction, float]
    abs_error: float
    tolerance: float
    samples_or_terms: int
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.abs_error <= self.tolerance

    def to_json_dict(self) -> dict:
        target = (
            format_rational(self.target) if isinstance(self.target, Fraction) else self.target
        )
        out = {
            "estimate": self.estimate,
            "target": target,
            "abs_error": self.abs_error,
            "tolerance": self.tolerance,
            "samples_or_terms": self.samples_or_terms,
        }
        out.update(self.extra)
        return out


def _mix64_int(x: int) -> int:
    x &= _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


_NP_M1 = np.uint64(0xBF58476D1CE4E5B9)
_NP_M2 = np.uint64(0x94D049BB133111EB)


def _mix64_np(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * _NP_M1
    x = (x ^ (x >> np.uint64(27))) * _NP_M2
    return x ^ (x >> np.uint64(31))


class RngStream:
    """Deterministic, splittable uniform stream (see module docstring)."""

    __slots__ = ("seed", "_pos")

    algorithm = "splitmix64-counter"

    def __init__(self, seed: int):
        self.seed = seed & _M64
        self._pos = 0

    def uniforms(self, count: int) -> np.ndarray:
        """The next ``count`` doubles in [0, 1), advancing the stream."""
        if count < 0:
            raise ValueError(f"count must be nonnegative, got {count}")
        idx = np.arange(self._pos + 1, self._pos + count + 1, dtype=np.uint64)
        self._pos += count
        ctr = np.uint64(self.seed) + idx * np.uint64(_GOLDEN)
        bits = _mix64_np(ctr)
        return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def split(self, index: int) -> "RngStream":
        """Child stream ``index``, disjoint from this stream and its siblings."""
        if index < 0:
            raise ValueError(f"split index must be nonnegative, got {index}")
        return RngStream(self.seed ^ _mix64_int((index + 1) * _GOLDEN_SPLIT))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, algorithm={self.algorithm!r}, pos={self._pos})"


def hyp1f1(a: float, b: float, z: float, tol: float = 1e-15) -> float:
    """Kummer's confluent hypergeometric 1F1(a; b; z) by direct summation.

    All uses in this package have |z| <= e - 1, where the series converges in
    well under the 10^4-term cap; hitting the cap raises with the partial sum.
    """
    if b <= 0 and float(b).is_integer():
        raise ValueError(f"1F1 undefined at nonpositive integer b={b}")
    total = term = 1.0
    for k in range(10_000):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        if abs(term) <= tol * max(1.0, abs(total)):
            return total
    raise RuntimeError(f"1F1({a}; {b}; {z}) did not converge in 10^4 terms; partial={total!r}")


def lower_inc_gamma(s: float, x: float) -> float:
    """Lower incomplete gamma gamma(s, x) for s > 0, x >= 0, by the series
    gamma(s,x) = x^s e^{-x} sum_k x^k / (s (s+1) ... (s+k))."""
    if s <= 0:
        raise ValueError(f"shape must be positive, got s={s}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got x={x}")
    if x == 0:
        return 0.0
    total = term = 1.0 / s
    k = 0
    while True:
        k += 1
        term *= x / (s + k)
        total += term
        if term <= 1e-17 * total or k > 10_000:
            break
    return x**s * math.exp(-x) * total


def dobinski_pbell(n: int, p: int, tol: float = 1e-9) -> NumericCheck:
    """Dobinski-type series for B_{n,p}:

    B_{n,p} = sum_{k>=0} C(p+k,k)^{-1} 1F1(k+1; p+k+1; -1) k^n/k!.

    The hypergeometric factor lies in (0, 1], so the tail is dominated by the
    classical Dobinski tail and the loop stops once the weight drops three
    orders below ``tol``.
    """
    if n < 0 or p < 1:
        raise ValueError(f"need n >= 0 and p >= 1, got n={n}, p={p}")
    total = 0.0
    terms = 0
    for k in range(500):
        weight = float(Fraction(k**n, factorial(k) * comb(p + k, k)))
        total += weight * hyp1f1(k + 1, p + k + 1, -1.0)
        terms = k + 1
        if k >= max(n, 1) and weight < tol * 1e-3:
            break
    else:
        raise RuntimeError(f"Dobinski series for ({n}, {p}) did not settle in 500 terms")
    target = pbell_number(n, p)
    return NumericCheck(total, target, abs(total - float(target)), tol, terms)


def dobinski_pbell_poly(n: int, p: int, x: RationalLike | float, tol: float = 1e-9) -> NumericCheck:
    """Dobinski-type series for the p-Bell polynomial:

    B_{n,p}(x) = sum_{k>=0} C(p+k,k)^{-1} 1F1(k+1; p+k+1; -1) (x+k)^n/k!.

    This is the term-by-term expansion of the binomial-transform definition
    through the number-level series; the weight C(p+k,k)^{-1}/k! (equivalently
    p!/(p+k)!) is what the beta integral int_0^1 e^{-t} t^k (1-t)^{p-1} dt
    actually carries.
    """
    if n < 0 or p < 1:
        raise ValueError(f"need n >= 0 and p >= 1, got n={n}, p={p}")
    x_exact = x if isinstance(x, Fraction) else Fraction(x) if isinstance(x, float) else rational(x)
    xf = float(x_exact)
    total = 0.0
    terms = 0
    settle_after = n + 4 + int(abs(xf))
    for k in range(1000):
        weight = float(Fraction(1, factorial(k) * comb(p + k, k)))
        term = weight * (xf + k) ** n * hyp1f1(k + 1, p + k + 1, -1.0)
        total += term
        terms = k + 1
        if k >= settle_after and abs(term) < tol * 1e-3:
            break
    else:
        raise RuntimeError(f"Dobinski series for ({n}, {p}, {xf}) did not settle in 1000 terms")
    target = poly_eval(pbell_poly(n, p), x_exact)
    return NumericCheck(total, target, abs(total - float(target)), tol, terms)


def cesaro_pbell(n: int, p: int, quad_points: int = 16, tol: float = 1e-6) -> NumericCheck:
    """Cesaro-type integral for B_{n,p} (n, p >= 1):

    B_{n,p} = (2 n! p! / (pi e)) int_0^pi Im[ exp(exp(e^{i t})) W^{-p}
              - e sum_{l<p} W^{l-p}/l! ] sin(n t) dt,   W = exp(e^{i t}) - 1.

    Composite Gauss-Legendre with the panel count doubled until two successive
    estimates differ by less than tol/4.
    """
    if n < 1 or p < 1:
        raise ValueError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    if quad_points < 2:
        raise ValueError(f"need at least 2 nodes per panel, got {quad_points}")
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)

    def integrand(theta: float) -> float:
        ez = cmath.exp(complex(0.0, theta))
        big = cmath.exp(ez)
        w = big - 1.0
        value = cmath.exp(big) / w**p
        value -= math.e * sum(w ** (l - p) / factorial(l) for l in range(p))
        return value.imag * math.sin(n * theta)

    def composite(panels: int) -> float:
        total = 0.0
        width = math.pi / panels
        for i in range(panels):
            mid = (i + 0.5) * width
            half = 0.5 * width
            total += half * sum(
                float(wt) * integrand(mid + half * float(xi))
                for xi, wt in zip(nodes, weights)
            )
        return total

    prefactor = 2.0 * factorial(n) * factorial(p) / (math.pi * math.e)
    previous = None
    panels = 1
    estimate = None
    evaluations = 0
    while panels <= 4096:
        estimate = prefactor * composite(panels)
        evaluations += panels * quad_points
        if previous is not None and abs(estimate - previous) < tol / 4:
            break
        previous = estimate
        panels *= 2
    else:
        raise RuntimeError(f"quadrature for ({n}, {p}) did not settle by 4096 panels")
    target = pbell_number(n, p)
    return NumericCheck(estimate, target, abs(estimate - float(target)), tol, evaluations)


def _beta_poisson_vector(p: int, count: int, stream: RngStream) -> np.ndarray:
    """``count`` beta-Poisson draws: first ``count`` uniforms feed the
    Beta(1,p) inverse CDF, the next ``count`` drive Poisson inversion."""
    u_lambda = stream.uniforms(count)
    u_z = stream.uniforms(count)
    lam = 1.0 - u_lambda ** (1.0 / p)
    pmf = np.exp(-lam)
    cdf = pmf.copy()
    z = np.zeros(count, dtype=np.int64)
    k = 0
    while True:
        active = u_z >= cdf
        if not active.any():
            return z
        k += 1
        pmf *= lam / k
        cdf += np.where(active, pmf, 0.0)
        z += active
        if k > 200:
            raise RuntimeError("Poisson inversion runaway; lambda should be <= 1")


def beta_poisson_sample(p: int, rng: RngStream) -> int:
    """One beta-Poisson draw, consuming two uniforms from ``rng``."""
    if p < 1:
        raise ValueError(f"need p >= 1, got p={p}")
    u = rng.uniforms(2)
    lam = 1.0 - float(u[0]) ** (1.0 / p)
    pmf = math.exp(-lam)
    cdf = pmf
    k = 0
    while u[1] >= cdf:
        k += 1
        pmf *= lam / k
        cdf += pmf
    return k


def beta_poisson_batch(p: int, count: int, rng: RngStream) -> np.ndarray:
    """``count`` draws consumed directly from ``rng`` (one vectorized block)."""
    if p < 1:
        raise ValueError(f"need p >= 1, got p={p}")
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    return _beta_poisson_vector(p, count, rng)


def _chunked_moments(p: int, samples: int, rng: RngStream, transform) -> tuple[float, float]:
    """(mean, sample std of the transformed draws), chunked over split streams."""
    sums: list[float] = []
    squares: list[float] = []
    done = 0
    chunk_index = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        z = _beta_poisson_vector(p, m, rng.split(chunk_index))
        vals = transform(z)
        sums.append(float(np.sum(vals)))
        squares.append(float(np.sum(vals * vals)))
        done += m
        chunk_index += 1
    total = math.fsum(sums)
    total_sq = math.fsum(squares)
    mean = total / samples
    if samples < 2:
        return mean, 0.0
    variance = max(0.0, (total_sq - samples * mean * mean) / (samples - 1))
    return mean, math.sqrt(variance)


def mc_moment_check(
    n: int, p: int, x: RationalLike | float, samples: int, rng: RngStream
) -> NumericCheck:
    """Monte Carlo check of B_{n,p}(x) = E[(x + Z)^n] for beta-Poisson Z.

    The tolerance reported is the 4-sigma confidence half-width
    4 * std / sqrt(samples).
    """
    if n < 0 or p < 1 or samples < 1:
        raise ValueError(f"need n >= 0, p >= 1, samples >= 1; got {n}, {p}, {samples}")
    x_exact = x if isinstance(x, Fraction) else Fraction(x) if isinstance(x, float) else rational(x)
    xf = float(x_exact)
    mean, std = _chunked_moments(p, samples, rng, lambda z: (xf + z.astype(np.float64)) ** n)
    tolerance = 4.0 * std / math.sqrt(samples)
    target = poly_eval(pbell_poly(n, p), x_exact)
    return NumericCheck(mean, target, abs(mean - float(target)), tolerance, samples)


def mgf_check(p: int, t: float, samples: int, rng: RngStream) -> NumericCheck:
    """Monte Carlo check of E[e^{tZ}] against the closed form f_p(t) =
    1F1(1; p+1; e^t - 1).

    The one-parameter-shifted variant 1F1(p; p+1; e^t - 1) is recorded
    alongside (keys ``shifted_form`` / ``shifted_form_abs_error``); it
    coincides with f_p(t) only at p = 1.
    """
    if p < 1 or samples < 1:
        raise ValueError(f"need p >= 1 and samples >= 1; got {p}, {samples}")
    mean, std = _chunked_moments(p, samples, rng, lambda z: np.exp(t * z.astype(np.float64)))
    tolerance = 4.0 * std / math.sqrt(samples)
    w = math.expm1(t)
    target = hyp1f1(1.0, p + 1.0, w)
    shifted = hyp1f1(float(p), p + 1.0, w)
    extra = {"shifted_form": shifted, "shifted_form_abs_error": abs(mean - shifted)}
    return NumericCheck(mean, target, abs(mean - target), tolerance, samples, extra)


def pmf_check(p: int, k: int, samples: int, rng: RngStream) -> NumericCheck:
    """Monte Carlo check of P(Z = k) against the closed form

        P(Z = k) = p!/(p+k)! 1F1(k+1; p+k+1; -1)
                 = p!/(e (p+k)!) 1F1(p; p+k+1; 1),

    i.e. the beta-mixture integral p int_0^1 (1-t)^{p-1} t^k e^{-t}/k! dt done
    exactly.  The tolerance is the 3-sigma binomial half-width.  A variant
    without the beta normalization, p/(e k! (p+k)) 1F1(1; p+k+1; 1), is
    recorded alongside (keys ``unnormalized_form`` / ..._abs_error); it
    coincides with the true pmf only at p = 1.
    """
    if p < 1 or k < 0 or samples < 1:
        raise ValueError(f"need p >= 1, k >= 0, samples >= 1; got {p}, {k}, {samples}")
    hits: list[float] = []
    done = 0
    chunk_index = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        z = _beta_poisson_vector(p, m, rng.split(chunk_index))
        hits.append(float(np.sum(z == k)))
        done += m
        chunk_index += 1
    empirical = math.fsum(hits) / samples
    sigma = math.sqrt(max(empirical * (1.0 - empirical), 1e-300) / samples)
    target = factorial(p) / factorial(p + k) * hyp1f1(k + 1.0, p + k + 1.0, -1.0)
    unnormalized = p / (math.e * factorial(k) * (p + k)) * hyp1f1(1.0, p + k + 1.0, 1.0)
    extra = {
        "unnormalized_form": unnormalized,
        "unnormalized_form_abs_error": abs(empirical - unnormalized),
    }
    return NumericCheck(empirical, target, abs(empirical - target), 3.0 * sigma, samples, extra)
