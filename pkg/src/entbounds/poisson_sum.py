"""Lattice sums of densities over the integers, directly and by Poisson summation.

Four Fourier pairs are provided (``t`` is the frequency variable):

============================  ===============================================  =====================================
kind                          f(x)                                             f^(t)
============================  ===============================================  =====================================
``gauss``                     exp(-((x-mu)/sigma)^2 / 2) / sqrt(2 pi sigma^2)  exp(-2i pi mu t) exp(-2 (pi sigma t)^2)
``two_sided_exponential``     exp(-|x|/sigma) / sigma                          2 / (1 + (2 pi sigma t)^2)
``cauchy_half``               1 / (pi sigma (1 + z^2)),  z = (x-mu)/sigma      exp(-2i pi mu t) exp(-2 pi sigma |t|)
``sq_cauchy_two_thirds``      2 / (pi sigma (1 + z^2)^2)                       exp(-2i pi mu t) (1 + 2 pi sigma |t|) exp(-2 pi sigma |t|)
============================  ===============================================  =====================================

The two-sided exponential has total mass 2 (it is twice the symmetrised
one-sided exponential); the others have total mass 1.

Sums with algebraic decay are evaluated exactly up to a cutoff and the tail is
added through a convergent expansion in Hurwitz zeta values, so every sum is
accurate to a few ulps rather than merely to a truncation tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from .errors import AccuracyError, ParameterError

PAIR_KINDS = ("gauss", "two_sided_exponential", "cauchy_half", "sq_cauchy_two_thirds")
ZPRIME_KINDS = ("gaussian", "exponential", "half_escort", "two_thirds_escort")

DEFAULT_TOL = 1e-13
TERM_BUDGET = 1_000_000
GAUSS_CROSSOVER = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class FourierPair:
    """One density / Fourier-transform pair; ``sigma`` is the scale of every kind."""

    kind: str
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in PAIR_KINDS:
            raise ParameterError(f"unknown Fourier pair {self.kind!r}; expected one of {', '.join(PAIR_KINDS)}")
        if not self.sigma > 0:
            raise ParameterError(f"scale must be positive, got {self.sigma}")
        if self.kind == "two_sided_exponential" and self.mu != 0.0:
            raise ParameterError("the two-sided exponential pair is centred at 0")

    @property
    def total_mass(self):
        """``f^(0)``, the integral of ``f`` over the real line."""
        return 2.0 if self.kind == "two_sided_exponential" else 1.0

    def f(self, x):
        x = np.asarray(x, dtype=float)
        s = self.sigma
        if self.kind == "gauss":
            z = (x - self.mu) / s
            return np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi * s * s)
        if self.kind == "two_sided_exponential":
            return np.exp(-np.abs(x) / s) / s
        z = (x - self.mu) / s
        if self.kind == "cauchy_half":
            return 1.0 / (math.pi * s * (1.0 + z * z))
        return 2.0 / (math.pi * s * (1.0 + z * z) ** 2)

    def fhat(self, t):
        """Fourier transform ``integral f(x) exp(-2i pi t x) dx`` (complex)."""
        t = np.asarray(t, dtype=float)
        s = self.sigma
        phase = np.exp(-2j * math.pi * self.mu * t)
        if self.kind == "gauss":
            return phase * np.exp(-2.0 * (math.pi * s * t) ** 2)
        if self.kind == "two_sided_exponential":
            return 2.0 / (1.0 + (2.0 * math.pi * s * t) ** 2) + 0j
        a = 2.0 * math.pi * s * np.abs(t)
        if self.kind == "cauchy_half":
            return phase * np.exp(-a)
        return phase * (1.0 + a) * np.exp(-a)

    def shifted(self, by):
        return FourierPair(self.kind, self.mu + by, self.sigma)


@dataclass(frozen=True)
class LatticeSumResult:
    direct: float
    transformed: float
    discrepancy: float
    terms_used: int


# -- algebraic tails ---------------------------------------------------------

def _fsum(values):
    return math.fsum(np.asarray(values, dtype=float).tolist())


def algebraic_tail(s, beta, mu, sigma, n0):
    """``sum_{x >= n0} (1 + beta ((x - mu)/sigma)^2)^(-s)`` for integer ``n0`` with ``beta ((n0-mu)/sigma)^2 >= 4``.

    Uses the binomial series in ``1/(beta z^2)``; each power sum is a Hurwitz
    zeta value.
    """
    a = n0 - mu
    ratio = sigma * sigma / (beta * a * a)
    if not (a > 0 and ratio <= 0.25):
        raise ValueError("tail start too close to the centre for the binomial expansion")
    total = []
    coef = 1.0
    lead = math.exp(-s * math.log(beta) + 2.0 * s * math.log(sigma))
    scale = sigma * sigma / beta
    k = 0
    while True:
        term = coef * lead * scale ** k * sps.zeta(2.0 * s + 2.0 * k, a)
        total.append(term)
        if abs(term) <= 1e-18 * abs(total[0]) or k > 400:
            break
        coef *= -(s + k) / (k + 1.0)
        k += 1
    return _fsum(total)


def algebraic_lattice_sum(s, beta, mu, sigma, lo=-math.inf, hi=math.inf):
    """``sum_{lo <= x <= hi} (1 + beta ((x - mu)/sigma)^2)^(-s)`` over integers ``x``.

    ``beta > 0`` and ``s > 1/2`` when an end is infinite. Terms near ``mu`` are
    summed directly; infinite tails use :func:`algebraic_tail`.
    """
    if not (beta > 0 and sigma > 0):
        raise ParameterError("algebraic lattice sum needs beta > 0 and sigma > 0")
    if (math.isinf(lo) or math.isinf(hi)) and not 2.0 * s > 1.0:
        raise ParameterError(f"lattice sum diverges for exponent 2s = {2 * s} <= 1")
    reach = 2.0 * sigma / math.sqrt(beta)
    left = math.floor(mu - reach) - 1 if math.isinf(lo) else int(lo)
    right = math.ceil(mu + reach) + 1 if math.isinf(hi) else int(hi)
    if right - left > TERM_BUDGET:
        raise AccuracyError(f"lattice sum needs {right - left} explicit terms, over the budget {TERM_BUDGET}")
    parts = []
    if left <= right:
        x = np.arange(left, right + 1, dtype=float)
        z = (x - mu) / sigma
        parts.append(_fsum(np.exp(-s * np.log1p(beta * z * z))))
    if math.isinf(hi):
        parts.append(algebraic_tail(s, beta, mu, sigma, right + 1))
    if math.isinf(lo):
        parts.append(algebraic_tail(s, beta, -mu, sigma, -(left - 1)))
    return math.fsum(parts)


# -- direct and transformed sums ---------------------------------------------

def _frac(mu):
    return mu - math.floor(mu)


def _gauss_direct(mu, s, tol):
    """Outward summation with the geometric bound on each Gaussian tail."""
    mu = _frac(mu)
    norm = 1.0 / math.sqrt(2.0 * math.pi * s * s)
    terms = []
    for direction, start in ((1, 1), (-1, 0)):
        x = start
        while True:
            d = abs(x - mu)
            v = norm * math.exp(-0.5 * (d / s) ** 2)
            terms.append(v)
            # next terms shrink at least by exp(-d / s^2) each step
            r = math.exp(-d / (s * s))
            if d > 0.5 and r < 1.0 and v * r / (1.0 - r) < tol / 4:
                break
            x += direction
            if len(terms) > TERM_BUDGET:
                raise AccuracyError("Gaussian lattice sum exceeded the term budget")
    return _fsum(terms), len(terms)


def _exp_direct(s, tol):
    """``(1/s) sum_{x in Z} exp(-|x|/s)`` with the exact geometric tail bound."""
    q = math.exp(-1.0 / s)
    terms = [1.0 / s]
    x = 1
    while True:
        terms.append(2.0 * q ** x / s)
        tail = 2.0 * q ** (x + 1) / (s * (1.0 - q))
        if tail < tol:
            break
        x += 1
        if x > TERM_BUDGET:
            raise AccuracyError("exponential lattice sum exceeded the term budget")
    return _fsum(terms), len(terms)


def _cosine_series(coeff, r_tail_bound, mu, tol):
    """``1 + 2 sum_{x>=1} c(x) cos(2 pi mu x)`` until the supplied tail bound drops below tol."""
    mu = _frac(mu)
    terms = [1.0]
    x = 1
    while True:
        terms.append(2.0 * coeff(x) * math.cos(2.0 * math.pi * mu * x))
        if r_tail_bound(x) < tol:
            break
        x += 1
        if x > TERM_BUDGET:
            raise AccuracyError("transformed lattice sum exceeded the term budget")
    return _fsum(terms), len(terms)


def _direct(pair: FourierPair, tol):
    s = pair.sigma
    if pair.kind == "gauss":
        return _gauss_direct(pair.mu, s, tol)
    if pair.kind == "two_sided_exponential":
        return _exp_direct(s, tol)
    mu = _frac(pair.mu)
    if pair.kind == "cauchy_half":
        v = algebraic_lattice_sum(1.0, 1.0, mu, s) / (math.pi * s)
    else:
        v = 2.0 * algebraic_lattice_sum(2.0, 1.0, mu, s) / (math.pi * s)
    return v, int(2 * math.ceil(2 * s) + 4)


def _transformed(pair: FourierPair, tol):
    s = pair.sigma
    if pair.kind == "gauss":
        c = 2.0 * (math.pi * s) ** 2
        # sum_{y > x} exp(-c y^2) <= exp(-c (x+1)^2) / (1 - exp(-c (2x+3)))
        return _cosine_series(
            lambda x: math.exp(-c * x * x),
            lambda x: 2.0 * math.exp(-c * (x + 1) ** 2) / -math.expm1(-c * (2 * x + 3)),
            pair.mu,
            tol,
        )
    if pair.kind == "two_sided_exponential":
        w = 1.0 / (2.0 * math.pi * s)
        total = 2.0 + 4.0 * algebraic_lattice_sum(1.0, 1.0, 0.0, w, lo=1)
        return total, int(2 * math.ceil(2 * w) + 4)
    a = 2.0 * math.pi * s
    r = math.exp(-a)
    if pair.kind == "cauchy_half":
        return _cosine_series(
            lambda x: math.exp(-a * x),
            lambda x: 2.0 * math.exp(-a * (x + 1)) / -math.expm1(-a),
            pair.mu,
            tol,
        )

    def tail(x):
        # sum_{y > x} (1 + a y) r^y = r^(x+1) [ (1 + a (x+1)) / (1-r) + a r / (1-r)^2 ]
        one_minus_r = -math.expm1(-a)
        return 2.0 * math.exp(-a * (x + 1)) * ((1.0 + a * (x + 1)) / one_minus_r + a * r / one_minus_r ** 2)

    return _cosine_series(lambda x: (1.0 + a * x) * math.exp(-a * x), tail, pair.mu, tol)


def _check_tol(tol):
    if not tol >= 1e-14:
        raise ParameterError(f"tolerance must be at least 1e-14, got {tol}")


def direct_sum(pair: FourierPair, tol=DEFAULT_TOL) -> float:
    """``sum_{x in Z} f(x)``."""
    _check_tol(tol)
    return _direct(pair, tol)[0]


def transformed_sum(pair: FourierPair, tol=DEFAULT_TOL) -> float:
    """``sum_{x in Z} f^(x)`` (real, since every ``f`` here is real and the phases pair up)."""
    _check_tol(tol)
    return _transformed(pair, tol)[0]


def lattice_sum(pair: FourierPair, tol=DEFAULT_TOL) -> LatticeSumResult:
    """Both sides of the Poisson summation identity for ``pair``."""
    _check_tol(tol)
    d, nd = _direct(pair, tol)
    t, nt = _transformed(pair, tol)
    return LatticeSumResult(direct=d, transformed=t, discrepancy=abs(d - t), terms_used=nd + nt)


def zprime(kind, mu, scale, tol=DEFAULT_TOL) -> float:
    """Lattice sum of an extremal density (or its escort) over the integers.

    ``gaussian``
        ``sum_Z N(mu, scale^2)(x)``; summed in space below ``scale = 1/sqrt(2 pi)``
        and in frequency above, so that both decay geometrically.
    ``exponential``
        ``(1/mu) sum_{x in N} exp(-x/mu)`` with ``mu = scale`` (``mu`` ignored);
        equals ``1 + 1/(2 mu) + 2 sum_{x>=1} 1/(1 + (2 pi mu x)^2)``.
    ``half_escort``
        Escort of order 1/2 of the 1/2-Gaussian: the Cauchy density of scale ``scale``.
    ``two_thirds_escort``
        Escort of order 2/3 of the 2/3-Gaussian with standard deviation ``scale``:
        a squared-Cauchy density whose scale is ``sqrt(3) * scale``.
    """
    if kind not in ZPRIME_KINDS:
        raise ParameterError(f"unknown lattice sum {kind!r}; expected one of {', '.join(ZPRIME_KINDS)}")
    if not scale > 0:
        raise ParameterError(f"scale must be positive, got {scale}")
    _check_tol(tol)
    if kind == "gaussian":
        pair = FourierPair("gauss", mu, scale)
        return direct_sum(pair, tol) if scale < GAUSS_CROSSOVER else transformed_sum(pair, tol)
    if kind == "exponential":
        return 0.5 * (direct_sum(FourierPair("two_sided_exponential", 0.0, scale), tol) + 1.0 / scale)
    # algebraic decay in space, geometric in frequency: always sum the transform
    if kind == "half_escort":
        return transformed_sum(FourierPair("cauchy_half", mu, scale), tol)
    return transformed_sum(FourierPair("sq_cauchy_two_thirds", mu, math.sqrt(3.0) * scale), tol)
