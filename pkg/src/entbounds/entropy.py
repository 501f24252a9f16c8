"""Shannon and Rényi entropies of discrete laws, escort laws, Arimoto conditional entropy.

Everything is returned in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import DiscretePmf, JointPmf
from .errors import OrderError, ParameterError

ALPHA_GUARD = 1e-6
LOG2E = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class EntropyOrder:
    """Entropy order: Shannon (``alpha is None``) or Rényi of order ``alpha``."""

    alpha: float | None = None

    def __post_init__(self):
        if self.alpha is None:
            return
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0:
            raise OrderError(f"Rényi order must be positive and finite, got {self.alpha!r}")
        if abs(a - 1.0) < ALPHA_GUARD:
            raise OrderError(
                f"Rényi order {a!r} lies within {ALPHA_GUARD:g} of 1; request the Shannon order instead"
            )
        object.__setattr__(self, "alpha", a)

    @classmethod
    def shannon(cls):
        return cls(None)

    @classmethod
    def renyi(cls, alpha):
        return cls(float(alpha))

    @classmethod
    def coerce(cls, order):
        """Accept an :class:`EntropyOrder`, ``None``/``"shannon"``, or a number.

        The number 1 maps to Shannon; any other number is a Rényi order.
        """
        if isinstance(order, cls):
            return order
        if order is None or (isinstance(order, str) and order.strip().lower() in ("shannon", "1")):
            return cls(None)
        if isinstance(order, str):
            try:
                order = float(order)
            except ValueError as exc:
                raise OrderError(f"cannot parse entropy order {order!r}") from exc
        if float(order) == 1.0:
            return cls(None)
        return cls(float(order))

    @property
    def is_shannon(self):
        return self.alpha is None

    def __str__(self):
        return "shannon" if self.alpha is None else f"renyi({self.alpha:g})"


def _fsum(a):
    return math.fsum(np.asarray(a, dtype=float).ravel().tolist())


def _entropy_of_probs(p, order: EntropyOrder):
    p = p[p > 0]
    if np.all(p == p[0]):
        # equiprobable: every order gives log2 M, returned exactly
        return math.log2(p.size)
    if order.is_shannon:
        h = -_fsum(p * np.log2(p))
    else:
        a = order.alpha
        # log-sum-exp keeps extreme orders from under/overflowing
        logs = a * np.log(p)
        top = logs.max()
        s = _fsum(np.exp(logs - top))
        h = (top + math.log(s)) * LOG2E / (1.0 - a)
    return max(float(h), 0.0)


def discrete_entropy(pmf: DiscretePmf, order=None) -> float:
    """Shannon entropy ``-sum p log2 p`` or Rényi entropy ``log2(sum p^a) / (1 - a)``."""
    return _entropy_of_probs(pmf.probs, EntropyOrder.coerce(order))


def binary_entropy(p: float) -> float:
    """``H_b(p) = p log2(1/p) + (1-p) log2(1/(1-p))``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"binary entropy requires 0 <= p <= 1, got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def escort(pmf: DiscretePmf, alpha: float) -> DiscretePmf:
    """Escort law ``p^alpha / sum p^alpha`` on the same support."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ParameterError(f"escort exponent must be positive, got {alpha}")
    logs = alpha * np.log(pmf.probs)
    w = np.exp(logs - logs.max())
    return DiscretePmf(pmf.support, w / _fsum(w))


def conditional_entropy(joint: JointPmf, order=None) -> float:
    """Conditional entropy of ``X`` given ``Y``.

    Shannon: ``sum_y P(y) H(X|Y=y)``. Rényi (Arimoto):
    ``(alpha/(1-alpha)) log2 sum_y P(y) 2^{((1-alpha)/alpha) H_alpha(X|Y=y)}``,
    equivalently ``(alpha/(1-alpha)) log2 sum_y (sum_x P(x,y)^alpha)^(1/alpha)``.
    """
    order = EntropyOrder.coerce(order)
    if order.is_shannon:
        return max(math.fsum(w * _entropy_of_probs(c.probs, order) for _, c, w in joint.slices()), 0.0)
    a = order.alpha
    # log of (sum_x P(x,y)^a)^(1/a) per column, then a log-sum-exp over y
    terms = []
    for j in range(joint.y_support.size):
        col = joint.probs[:, j]
        col = col[col > 0]
        if col.size == 0:
            continue
        logs = a * np.log(col)
        top = logs.max()
        terms.append((top + math.log(_fsum(np.exp(logs - top)))) / a)
    terms = np.array(terms)
    top = terms.max()
    total = top + math.log(_fsum(np.exp(terms - top)))
    return max(float(total * LOG2E * a / (1.0 - a)), 0.0)
