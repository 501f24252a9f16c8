"""Upper bounds on the discrete (Rényi) entropy of integer-valued variables.

Each bound returns a :class:`BoundReport`; call :meth:`BoundReport.against`
with an exact entropy to fill in the gap and the verdict.

Two families are provided. The dither bounds (``massey_variance``,
``mean_bound``, ``support_bound``) apply a continuous maximum-entropy bound to
``X + U`` with ``U`` uniform on (0, 1). The lattice bounds (``mixed_variance``,
``mixed_mean``, ``improved_variance``) compare the pmf directly with the
extremal density sampled on the integers.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy import special as sps

from .dist import DiscretePmf, support_length
from .entropy import LOG2E, EntropyOrder, discrete_entropy
from .errors import ParameterError, UnsupportedVariantError, ValidityError
from .maxent import Mean, Variance, maxent_bound
from .poisson_sum import algebraic_lattice_sum, zprime

VARIANCE_ALPHA_MIN = 1.0 / 3.0
MEAN_ALPHA_MIN = 0.5


@dataclass(frozen=True)
class BoundReport:
    """An evaluated entropy bound.

    Attributes
    ----------
    name : str
        Catalog identifier.
    formula : str
        Human-readable right-hand side.
    bound_bits : float
        Value of the bound: bits for entropy bounds, a number of guesses
        (or a guessing moment) for guessing bounds.
    subject_bits, holds, gap_bits
        Filled in by :meth:`against`; ``gap_bits = bound_bits - subject_bits``.
    validity : mapping
        Admissibility conditions that were checked, by name.
    strict : bool
        Whether the bound is a strict inequality.
    asserted : bool
        False when the bound is only reported, not claimed (its sufficient
        condition fails); ``holds`` then stays None.
    direction : str
        ``"upper"`` for entropy bounds, ``"lower"`` for guessing bounds.
    """

    name: str
    formula: str
    bound_bits: float
    subject_bits: float | None = None
    holds: bool | None = None
    gap_bits: float | None = None
    validity: Mapping = field(default_factory=dict)
    strict: bool = True
    asserted: bool = True
    direction: str = "upper"

    def __post_init__(self):
        object.__setattr__(self, "bound_bits", float(self.bound_bits))
        if self.direction not in ("upper", "lower"):
            raise ParameterError(f"direction must be 'upper' or 'lower', got {self.direction!r}")

    def against(self, subject):
        """Copy with ``subject`` recorded and the inequality evaluated."""
        subject = float(subject)
        if self.direction == "upper":
            gap = self.bound_bits - subject
        else:
            gap = subject - self.bound_bits
        holds = None
        if self.asserted:
            holds = gap > 0 if self.strict else gap >= 0
        return dataclasses.replace(self, subject_bits=subject, gap_bits=gap, holds=holds)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["validity"] = dict(self.validity)
        return d


def _check_order(order, minimum, name):
    order = EntropyOrder.coerce(order)
    if not order.is_shannon and not order.alpha > minimum:
        raise ValidityError(
            f"{name} requires alpha > {minimum:.12g}; no such bound exists for alpha = {order.alpha}",
            threshold=minimum,
        )
    return order


def _order_tag(order):
    return "shannon" if order.is_shannon else f"alpha={order.alpha:g}"


# -- dither (Massey-type) bounds ---------------------------------------------

def massey_variance(sigma2, order=None) -> BoundReport:
    """``H_alpha(X) < h_alpha-maximum at variance sigma^2 + 1/12``; Shannon: ``1/2 log2(2 pi e (sigma^2 + 1/12))``."""
    sigma2 = float(sigma2)
    if not sigma2 >= 0:
        raise ParameterError(f"variance must be nonnegative, got {sigma2}")
    order = _check_order(order, VARIANCE_ALPHA_MIN, "massey_variance")
    value = maxent_bound(Variance(sigma2 + 1.0 / 12.0), order)
    formula = (
        "1/2 log2(2 pi e (sigma2 + 1/12))"
        if order.is_shannon
        else "alpha-Gaussian entropy bound at variance sigma2 + 1/12"
    )
    return BoundReport("massey_variance", formula, value, validity={"order": _order_tag(order), "alpha > 1/3": True})


def mean_bound(mu, order=None) -> BoundReport:
    """Bound for ``X >= 0`` with mean ``mu``: ``log2(e (mu + 1/2))`` or ``log2(mu + 1/2) + alpha/(1-alpha) log2(alpha/(2 alpha - 1))``."""
    mu = float(mu)
    if not mu >= 0:
        raise ParameterError(f"mean must be nonnegative, got {mu}")
    order = _check_order(order, MEAN_ALPHA_MIN, "mean_bound")
    if order.is_shannon:
        value = math.log2(math.e * (mu + 0.5))
        formula = "log2(e (mu + 1/2))"
    else:
        value = maxent_bound(Mean(mu + 0.5), order)
        formula = "log2(mu + 1/2) + alpha/(1-alpha) log2(alpha/(2 alpha - 1))"
    return BoundReport("mean_bound", formula, value, validity={"order": _order_tag(order), "alpha > 1/2": True})


def support_bound(ell) -> BoundReport:
    """``H_alpha(X) <= log2(ell + 1)`` for support length ``ell``; tight for equiprobable laws."""
    if int(ell) != ell or ell < 0:
        raise ParameterError(f"support length must be a nonnegative integer, got {ell}")
    return BoundReport("support_bound", "log2(ell + 1)", math.log2(int(ell) + 1), strict=False)


# -- lattice (Poisson-summation) bounds --------------------------------------

def _exp_ratio(rate):
    """``1 / (e^rate - 1)`` without overflow."""
    if rate > 700:
        return 0.0
    return 1.0 / math.expm1(rate)


def improved_variance(sigma2, order=None) -> BoundReport:
    """Variance bound with an exponentially small correction, for Shannon and orders 1/2, 2/3.

    Shannon: ``1/2 log2(2 pi e sigma^2) + 2 log2(e) / (e^(2 pi^2 sigma^2) - 1)``.
    Order 1/2: ``log2(2 pi sigma) + 2 log2(e) / (e^(2 pi sigma) - 1)``.
    Order 2/3: ``log2(8 pi sigma / (3 sqrt 3)) + 4 (1 + pi sigma) log2(e) / (e^(2 pi sigma) - 1)``.
    """
    sigma2 = float(sigma2)
    if not sigma2 > 0:
        raise ParameterError(f"variance must be positive, got {sigma2}")
    order = EntropyOrder.coerce(order)
    sigma = math.sqrt(sigma2)
    if order.is_shannon:
        value = 0.5 * math.log2(2 * math.pi * math.e * sigma2) + 2 * LOG2E * _exp_ratio(2 * math.pi ** 2 * sigma2)
        formula = "1/2 log2(2 pi e sigma2) + 2 log2(e) / (exp(2 pi^2 sigma2) - 1)"
    elif order.alpha == 0.5:
        value = math.log2(2 * math.pi * sigma) + 2 * LOG2E * _exp_ratio(2 * math.pi * sigma)
        formula = "log2(2 pi sigma) + 2 log2(e) / (exp(2 pi sigma) - 1)"
    elif abs(order.alpha - 2.0 / 3.0) < 1e-12:
        value = math.log2(8 * math.pi * sigma / (3 * math.sqrt(3))) + 4 * (1 + math.pi * sigma) * LOG2E * _exp_ratio(
            2 * math.pi * sigma
        )
        formula = "log2(8 pi sigma / (3 sqrt 3)) + 4 (1 + pi sigma) log2(e) / (exp(2 pi sigma) - 1)"
    else:
        raise UnsupportedVariantError(f"improved_variance is available for shannon, 1/2 and 2/3 only, not {order}")
    return BoundReport("improved_variance", formula, value, validity={"order": _order_tag(order)})


def c_k_exact(k):
    """``c_k = sqrt(2k+1) * r_k`` with rational ``r_k = 4 C(2k,k) ((k+1)/(2(2k+1)))^(k+1)``."""
    if int(k) != k or k < 0:
        raise ParameterError(f"k must be a nonnegative integer, got {k}")
    k = int(k)
    r = 4 * math.comb(2 * k, k) * Fraction(k + 1, 2 * (2 * k + 1)) ** (k + 1)
    return 2 * k + 1, r


def c_k(k) -> float:
    """Leading constant of the order-(k+1)/(k+2) variance bound ``log2(c_k pi sigma) + ...``.

    Examples
    --------
    >>> c_k(0)
    2.0
    """
    radicand, r = c_k_exact(k)
    return math.sqrt(radicand) * float(r)


def moustache(p) -> float:
    """Two-point lattice bound on the binary entropy: ``log2(e^((1/2-p)/(1-p)) + e^((p-1/2)/p))``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    if p in (0.0, 1.0):
        return 0.5 * LOG2E
    a, b = (0.5 - p) / (1.0 - p), (p - 0.5) / p
    top = max(a, b)
    return (top + math.log(math.exp(a - top) + math.exp(b - top))) * LOG2E


def _logsumexp_bits(logs):
    logs = np.asarray(logs, dtype=float)
    top = logs.max()
    return (top + math.log(math.fsum(np.exp(logs - top).tolist()))) * LOG2E


def _as_support(support):
    if support is None:
        return None
    s = np.unique(np.asarray(support, dtype=np.int64))
    if s.size == 0:
        raise ParameterError("empty support")
    return s


def mixed_variance(support, mu, sigma2, order=None) -> BoundReport:
    """Lattice variance bound summed over ``support`` (``None`` for all integers).

    Shannon: ``log2(e)/2 + log2 sum_x exp(-((x-mu)/sigma)^2 / 2)``. Order alpha:
    ``alpha/(1-alpha) log2(2 alpha/(3 alpha - 1)) + log2 sum_x (1 + beta ((x-mu)/sigma)^2)_+^(alpha/(alpha-1))``
    with ``beta = (1-alpha)/(3 alpha - 1)``; for alpha > 1 only ``|x - mu| < sigma sqrt((3 alpha - 1)/(alpha - 1))``
    contributes.
    """
    sigma2, mu = float(sigma2), float(mu)
    if not sigma2 > 0:
        raise ParameterError(f"variance must be positive, got {sigma2}")
    order = _check_order(order, VARIANCE_ALPHA_MIN, "mixed_variance")
    sigma = math.sqrt(sigma2)
    pts = _as_support(support)
    where = "Z" if pts is None else "support"
    if pts is None:
        # only the fractional part of the mean matters over the full lattice
        mu = mu - math.floor(mu)
    if order.is_shannon:
        if pts is None:
            value = 0.5 * LOG2E + math.log2(math.sqrt(2 * math.pi) * sigma) + math.log2(zprime("gaussian", mu, sigma))
        else:
            value = 0.5 * LOG2E + _logsumexp_bits(-0.5 * ((pts - mu) / sigma) ** 2)
        return BoundReport(
            "mixed_variance",
            f"log2(e)/2 + log2 sum_{{x in {where}}} exp(-((x-mu)/sigma)^2/2)",
            value,
            validity={"order": "shannon", "sum over": where},
            strict=False,
        )
    a = order.alpha
    beta = (1.0 - a) / (3.0 * a - 1.0)
    head = a / (1.0 - a) * math.log2(2.0 * a / (3.0 * a - 1.0))
    if a < 1:
        s = a / (1.0 - a)
        if pts is None:
            total = algebraic_lattice_sum(s, beta, mu, sigma)
            body = math.log2(total)
        else:
            body = _logsumexp_bits(-s * np.log1p(beta * ((pts - mu) / sigma) ** 2))
    else:
        half_width = sigma * math.sqrt((3.0 * a - 1.0) / (a - 1.0))
        if pts is None:
            pts = np.arange(math.floor(mu - half_width), math.ceil(mu + half_width) + 1, dtype=np.int64)
        base = 1.0 + beta * ((pts - mu) / sigma) ** 2
        inside = (np.abs(pts - mu) < half_width) & (base > 0)
        if not inside.any():
            raise ValidityError("no support point lies inside the alpha-Gaussian window")
        body = _logsumexp_bits(a / (a - 1.0) * np.log(base[inside]))
    return BoundReport(
        "mixed_variance",
        f"alpha/(1-alpha) log2(2 alpha/(3 alpha-1)) + log2 sum_{{x in {where}}} (1 + beta z^2)_+^(alpha/(alpha-1))",
        head + body,
        validity={"order": _order_tag(order), "alpha > 1/3": True, "sum over": where},
        strict=False,
    )


def mixed_mean(mu, order=None, support=None) -> BoundReport:
    """Lattice mean bound for ``X >= 0`` summed over ``support`` (``None`` for all of N).

    Shannon over N: ``log2(e) - log2(1 - e^(-1/mu))``. Order alpha:
    ``alpha/(1-alpha) log2(alpha/(2 alpha - 1)) + log2 sum_x (1 + beta x/mu)_+^(alpha/(alpha-1))``
    with ``beta = (1-alpha)/(2 alpha - 1)``; for alpha > 1 only ``x < mu (2 alpha - 1)/(alpha - 1)`` contributes.
    """
    mu = float(mu)
    if not mu > 0:
        raise ParameterError(f"mean must be positive, got {mu}")
    order = _check_order(order, MEAN_ALPHA_MIN, "mixed_mean")
    pts = _as_support(support)
    if pts is not None and pts[0] < 0:
        raise ParameterError("mixed_mean needs a nonnegative support")
    where = "N" if pts is None else "support"
    if order.is_shannon:
        if pts is None:
            value = LOG2E - math.log2(-math.expm1(-1.0 / mu))
        else:
            value = LOG2E + _logsumexp_bits(-pts / mu)
        return BoundReport(
            "mixed_mean",
            f"log2(e) + log2 sum_{{x in {where}}} exp(-x/mu)",
            value,
            validity={"order": "shannon", "sum over": where},
            strict=False,
        )
    a = order.alpha
    beta = (1.0 - a) / (2.0 * a - 1.0)
    head = a / (1.0 - a) * math.log2(a / (2.0 * a - 1.0))
    if a < 1:
        s = a / (1.0 - a)
        if pts is None:
            # sum_{x>=0} (1 + x beta/mu)^(-s) = (mu/beta)^s zeta(s, mu/beta)
            q = mu / beta
            body = (s * math.log(q) + math.log(sps.zeta(s, q))) * LOG2E
        else:
            body = _logsumexp_bits(-s * np.log1p(beta * pts / mu))
    else:
        edge = mu * (2.0 * a - 1.0) / (a - 1.0)
        if pts is None:
            pts = np.arange(0, math.ceil(edge) + 1, dtype=np.int64)
        base = 1.0 + beta * pts / mu
        inside = (pts < edge) & (base > 0)
        body = _logsumexp_bits(a / (a - 1.0) * np.log(base[inside]))
    return BoundReport(
        "mixed_mean",
        f"alpha/(1-alpha) log2(alpha/(2 alpha-1)) + log2 sum_{{x in {where}}} (1 + beta x/mu)_+^(alpha/(alpha-1))",
        head + body,
        validity={"order": _order_tag(order), "alpha > 1/2": True, "sum over": where},
        strict=False,
    )


def gaussian_condition(mu, sigma2) -> BoundReport:
    """``H(X) < 1/2 log2(2 pi e sigma^2)`` for ``X >= 0``, claimed only under a sufficient condition.

    The condition is ``2 pi sigma^2 > 1`` and
    ``(2 pi sigma)^2 > ((mu + 1)/sigma)^2 + ln(8 pi sigma^2)``.
    """
    mu, sigma2 = float(mu), float(sigma2)
    if not sigma2 > 0:
        raise ParameterError(f"variance must be positive, got {sigma2}")
    if not mu >= 0:
        raise ParameterError(f"mean must be nonnegative, got {mu}")
    first = 2 * math.pi * sigma2 > 1
    second = 4 * math.pi ** 2 * sigma2 > (mu + 1) ** 2 / sigma2 + math.log(8 * math.pi * sigma2)
    ok = first and second
    return BoundReport(
        "gaussian_condition",
        "1/2 log2(2 pi e sigma2)",
        0.5 * math.log2(2 * math.pi * math.e * sigma2),
        validity={"2 pi sigma2 > 1": first, "(2 pi sigma)^2 > ((mu+1)/sigma)^2 + ln(8 pi sigma2)": second, "sufficient": ok},
        asserted=ok,
    )


CATALOG = (
    "massey_variance",
    "mean_bound",
    "support_bound",
    "improved_variance",
    "mixed_variance",
    "mixed_mean",
    "gaussian_condition",
)


def evaluate_bound(name, pmf: DiscretePmf, order=None) -> BoundReport:
    """Evaluate catalog bound ``name`` with parameters read off ``pmf`` and compare with ``H_order(pmf)``.

    The mean-type bounds need ``X >= 0`` and are applied to ``X - min X``;
    entropies are shift invariant. Raises the underlying error when the bound
    is inadmissible for this order or this pmf.
    """
    order = EntropyOrder.coerce(order)
    base = pmf.shifted(-int(pmf.support[0]))
    var = pmf.variance
    if name == "massey_variance":
        rep = massey_variance(var, order)
    elif name == "mean_bound":
        rep = mean_bound(base.mean, order)
    elif name == "support_bound":
        rep = support_bound(support_length(pmf))
    elif name == "improved_variance":
        rep = improved_variance(var, order)
    elif name == "mixed_variance":
        rep = mixed_variance(pmf.support, pmf.mean, var, order)
    elif name == "mixed_mean":
        rep = mixed_mean(base.mean, order, support=base.support)
    elif name == "gaussian_condition":
        if not order.is_shannon:
            raise UnsupportedVariantError("gaussian_condition is a Shannon-entropy bound")
        rep = gaussian_condition(base.mean, var)
    else:
        raise ParameterError(f"unknown bound {name!r}; choose from {', '.join(CATALOG)}")
    return rep.against(discrete_entropy(pmf, order))
