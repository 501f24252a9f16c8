"""Guessing entropy, guessing moments, and their lower bounds from (Rényi) entropies.

The optimal guesser tries values in order of decreasing probability, so the
number of guesses ``G(X)`` has law ``P(G = k) = p_(k)``, the k-th largest
probability. All entropy arguments are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport
from .dist import DiscretePmf, JointPmf
from .entropy import EntropyOrder, conditional_entropy, discrete_entropy
from .errors import ParameterError, ValidationError, ValidityError
from .special import lgamma

LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class GuessingProfile:
    """Law of the number of guesses under the optimal strategy.

    ``rank_pmf`` lives on ranks ``1..M`` with nonincreasing probabilities.
    """

    rank_pmf: DiscretePmf

    @property
    def G(self):
        return guessing_moment(self, 1.0)

    @property
    def M(self):
        return len(self.rank_pmf)

    def moment(self, rho):
        return guessing_moment(self, rho)


def guessing_profile(pmf: DiscretePmf) -> GuessingProfile:
    """Rank the atoms by decreasing probability (ties by ascending support value)."""
    order = np.lexsort((pmf.support, -pmf.probs))
    probs = pmf.probs[order]
    return GuessingProfile(DiscretePmf(np.arange(1, probs.size + 1), probs))


def guessing_moment(profile: GuessingProfile, rho: float) -> float:
    """``G_rho = sum_k k^rho p_(k)``."""
    if not rho > 0:
        raise ParameterError(f"rho must be positive, got {rho}")
    r = profile.rank_pmf
    if rho == 1.0:
        return math.fsum((r.support * r.probs).tolist())
    return math.fsum((r.support.astype(float) ** rho * r.probs).tolist())


def conditional_guessing(joint: JointPmf, rho: float = 1.0) -> float:
    """``G_rho(X|Y) = sum_y P(y) G_rho(X | Y = y)``, each slice ranked on its own."""
    parts = [w * guessing_moment(guessing_profile(c), rho) for _, c, w in joint.slices()]
    if not parts:
        raise ValidationError("joint has no observation with positive probability")
    return math.fsum(parts)


# -- lower bounds --------------------------------------------------------------

def _exp(logv):
    return math.exp(logv) if logv < 709.0 else math.inf


def lb_massey_original(H_bits):
    """``2^(H-2) + 1``, stated only when ``H >= 2`` bits; None otherwise."""
    if H_bits < 2.0:
        return None
    return 2.0 ** (H_bits - 2.0) + 1.0


def lb_improved(H_bits):
    """``G > 2^H / e + 1/2``."""
    return _exp(H_bits * LN2 - 1.0) + 0.5


def renyi_factor(alpha):
    """Coefficient ``(1 - (1-alpha)/alpha)^(alpha/(1-alpha))`` of ``2^H_alpha`` in :func:`lb_renyi`."""
    return math.exp(alpha / (1.0 - alpha) * math.log((2.0 * alpha - 1.0) / alpha))


def lb_renyi(H_alpha_bits, alpha):
    """``G > (1 - (1-alpha)/alpha)^(alpha/(1-alpha)) 2^H_alpha + 1/2`` for alpha > 1/2.

    The coefficient tends to 1/e as alpha -> 1; use :func:`lb_improved` there.
    """
    alpha = EntropyOrder.renyi(alpha).alpha
    if not alpha > 0.5:
        raise ValidityError(f"lb_renyi requires alpha > 1/2, got {alpha}", threshold=0.5)
    return _exp(H_alpha_bits * LN2 + alpha / (1.0 - alpha) * math.log((2.0 * alpha - 1.0) / alpha)) + 0.5


def lb_arikan(H_half_bits, M, variant="improved"):
    """``2^H_(1/2) / (1 + ln M)`` (``original``) or ``2^H_(1/2) / ln(2M + 1)`` (``improved``)."""
    if int(M) != M or M < 1:
        raise ParameterError(f"alphabet size must be a positive integer, got {M}")
    if variant == "original":
        den = 1.0 + math.log(M)
    elif variant == "improved":
        den = math.log(2.0 * M + 1.0)
    else:
        raise ParameterError(f"unknown Arikan variant {variant!r}")
    return _exp(H_half_bits * LN2) / den


def lb_small_alpha(H_alpha_bits, alpha, M):
    """Bound for ``0 < alpha < 1/2`` and an ``M``-ary alphabet.

    ``(1 - alpha/(1-alpha))^((1-alpha)/alpha) 2^(((1-alpha)/alpha) H + (1-2 alpha)/alpha) / (2M+1)^((1-2 alpha)/alpha)``.
    """
    if not 0.0 < alpha < 0.5:
        raise ValidityError(f"lb_small_alpha requires 0 < alpha < 1/2, got {alpha}", threshold=0.5)
    if int(M) != M or M < 1:
        raise ParameterError(f"alphabet size must be a positive integer, got {M}")
    e = (1.0 - alpha) / alpha
    d = (1.0 - 2.0 * alpha) / alpha
    logv = e * math.log((1.0 - 2.0 * alpha) / (1.0 - alpha)) + (e * H_alpha_bits + d) * LN2 - d * math.log(2.0 * M + 1.0)
    return _exp(logv)


def lb_mid_alpha(H_alpha_bits, alpha):
    """Bound for ``1/2 < alpha < 1``: ``(alpha/(1-alpha) - 1)^((1-alpha)/alpha) 2^(((1-alpha)/alpha) H - (2 alpha - 1)/alpha)``.

    Always weaker than :func:`lb_renyi` at the same order.
    """
    if not 0.5 < alpha < 1.0:
        raise ValidityError(f"lb_mid_alpha requires 1/2 < alpha < 1, got {alpha}", threshold=0.5)
    e = (1.0 - alpha) / alpha
    logv = e * math.log((2.0 * alpha - 1.0) / (1.0 - alpha)) + (e * H_alpha_bits - (2.0 * alpha - 1.0) / alpha) * LN2
    return _exp(logv)


def moment_log_denominator(rho, alpha=None):
    """Natural log of the denominator ``D`` in ``G_rho > 2^(rho H) / D``.

    Shannon: ``D = rho Gamma(1 + 1/rho)^rho e``. Order alpha (> 1/(1+rho)):
    ``D = k/|1-alpha| * (rho alpha / k)^(rho/(1-alpha)) * (Gamma-ratio)^rho`` with ``k = (1+rho) alpha - 1``.
    """
    if not rho > 0:
        raise ParameterError(f"rho must be positive, got {rho}")
    if alpha is None:
        return math.log(rho) + rho * lgamma(1.0 + 1.0 / rho) + 1.0
    k = (1.0 + rho) * alpha - 1.0
    g1 = lgamma(1.0 / rho + 1.0)
    if alpha < 1.0:
        q = 1.0 / (1.0 - alpha)
        return math.log(k / (1.0 - alpha)) + rho / (1.0 - alpha) * math.log(rho * alpha / k) + rho * (
            g1 + lgamma(q - 1.0 / rho) - lgamma(q)
        )
    s = alpha / (alpha - 1.0)
    return math.log(k / (alpha - 1.0)) + rho / (alpha - 1.0) * math.log(k / (rho * alpha)) + rho * (
        g1 + lgamma(s) - lgamma(s + 1.0 / rho)
    )


def lb_moment(H_bits, rho):
    """``G_rho > 2^(rho H) / (rho Gamma(1 + 1/rho)^rho e)``."""
    return _exp(rho * H_bits * LN2 - moment_log_denominator(rho))


def lb_moment_renyi(H_alpha_bits, alpha, rho):
    """``G_rho > 2^(rho H_alpha) / D(alpha, rho)`` for ``alpha > 1/(1+rho)``, ``alpha != 1``."""
    alpha = EntropyOrder.renyi(alpha).alpha
    thr = 1.0 / (1.0 + rho)
    if not alpha > thr:
        raise ValidityError(f"lb_moment_renyi requires alpha > 1/(1+rho) = {thr:.12g}, got {alpha}", threshold=thr)
    return _exp(rho * H_alpha_bits * LN2 - moment_log_denominator(rho, alpha))


# -- batch evaluation ------------------------------------------------------------

DEFAULT_ALPHAS = (0.25, 1.0 / 3.0, 0.4, 0.5, 0.6, 2.0 / 3.0, 0.75, 2.0, 3.0, 4.0)
DEFAULT_RHOS = (1.0, 2.0, 3.0, 4.0)


def _report(name, formula, value, subject, strict=True):
    return BoundReport(name, formula, value, strict=strict, direction="lower").against(subject)


def lower_bound_reports(source, rhos=DEFAULT_RHOS, alphas=DEFAULT_ALPHAS, skipped=None):
    """Evaluate every applicable guessing lower bound against the exact quantity.

    ``source`` is a :class:`DiscretePmf` (unconditional bounds) or a
    :class:`JointPmf` (conditional bounds, with Arimoto entropies and
    ``G_rho(X|Y)``). Each order in ``alphas`` is routed to the bounds that admit
    it; an order of 1 is ignored since the Shannon bounds are always included.
    Inadmissible (bound, order) pairs are appended to ``skipped`` when given.

    Returns a list of lower-direction :class:`BoundReport`.
    """
    if isinstance(source, JointPmf):
        cond = True
        M = len(source.x_support)

        def entropy_of(order):
            return conditional_entropy(source, order)

        def moment_of(rho):
            return conditional_guessing(source, rho)
    else:
        cond = False
        prof = guessing_profile(source)
        M = prof.M

        def entropy_of(order):
            return discrete_entropy(source, order)

        def moment_of(rho):
            return guessing_moment(prof, rho)

    cache = {}

    def H(order=None):
        if order not in cache:
            cache[order] = entropy_of(order)
        return cache[order]

    def skip(name):
        if skipped is not None:
            skipped.append(name)

    alphas = [float(a) for a in alphas if float(a) != 1.0]
    G = moment_of(1.0)
    h = H()
    out = []
    if not cond:
        v = lb_massey_original(h)
        if v is None:
            skip("lb_massey_original")
        else:
            out.append(_report("lb_massey_original", "2^(H-2) + 1", v, G, strict=False))
    out.append(_report("lb_improved", "2^H / e + 1/2", lb_improved(h), G))
    h_half = H(0.5)
    out.append(_report("lb_arikan[original]", "2^H_(1/2) / (1 + ln M)", lb_arikan(h_half, M, "original"), G, strict=False))
    out.append(_report("lb_arikan[improved]", "2^H_(1/2) / ln(2M + 1)", lb_arikan(h_half, M, "improved"), G))
    for a in alphas:
        tag = f"alpha={a:.6g}"
        if a > 0.5:
            out.append(_report(f"lb_renyi[{tag}]", "(1 - (1-alpha)/alpha)^(alpha/(1-alpha)) 2^H_alpha + 1/2",
                               lb_renyi(H(a), a), G))
        else:
            skip(f"lb_renyi[{tag}]")
        if a < 0.5:
            out.append(_report(f"lb_small_alpha[{tag}]", "small-order bound with (2M+1) penalty",
                               lb_small_alpha(H(a), a, M), G))
        if 0.5 < a < 1.0:
            out.append(_report(f"lb_mid_alpha[{tag}]", "mid-order bound without alphabet penalty",
                               lb_mid_alpha(H(a), a), G))
    for rho in rhos:
        rho = float(rho)
        g_rho = moment_of(rho)
        out.append(_report(f"lb_moment[rho={rho:g}]", "2^(rho H) / (rho Gamma(1+1/rho)^rho e)", lb_moment(h, rho), g_rho))
        for a in alphas:
            name = f"lb_moment_renyi[rho={rho:g},alpha={a:.6g}]"
            if a > 1.0 / (1.0 + rho):
                out.append(_report(name, "2^(rho H_alpha) / D(alpha, rho)", lb_moment_renyi(H(a), a, rho), g_rho))
            else:
                skip(name)
    return out
