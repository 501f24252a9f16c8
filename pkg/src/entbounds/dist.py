"""Integer-supported distributions: construction, moments, conditioning, I/O.

Infinite families (Poisson, geometric) are truncated at the first point where
the retained mass reaches ``1 - 1e-14`` and then renormalized; the excluded
mass is kept on the pmf as ``tail_mass_bound``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy import stats

from .errors import DegenerateConditionError, ParameterError, ValidationError

TRUNCATION_MASS = 1e-14
NORMALIZATION_SLACK = 1e-9

FAMILIES = ("bernoulli", "binomial", "poisson", "geometric", "zipf_log_power", "uniform", "custom")


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscretePmf:
    """A finite probability mass function on strictly increasing integers.

    Zero-probability atoms are dropped on construction, so every stored
    probability is strictly positive.
    """

    support: np.ndarray
    probs: np.ndarray
    tail_mass_bound: float = 0.0

    def __post_init__(self):
        support = np.asarray(self.support)
        probs = np.asarray(self.probs, dtype=float)
        if support.ndim != 1 or probs.ndim != 1 or support.shape != probs.shape:
            raise ValidationError("support and probs must be 1-D sequences of equal length")
        if support.size == 0:
            raise ValidationError("empty pmf")
        if not np.all(np.isfinite(probs)):
            raise ValidationError("probabilities must be finite")
        if np.any(probs < 0):
            raise ValidationError("negative probability mass")
        if support.dtype.kind == "f":
            if not np.all(support == np.round(support)):
                raise ValidationError("support must consist of integers")
        support = support.astype(np.int64)
        order = np.argsort(support, kind="stable")
        support, probs = support[order], probs[order]
        if np.any(np.diff(support) == 0):
            raise ValidationError("duplicate support points")
        keep = probs > 0
        support, probs = support[keep], probs[keep]
        if support.size == 0:
            raise ValidationError("pmf has no positive mass")
        total = math.fsum(probs.tolist())
        probs = probs / total
        if self.tail_mass_bound < 0:
            raise ValidationError("tail_mass_bound must be nonnegative")
        object.__setattr__(self, "support", _readonly(support))
        object.__setattr__(self, "probs", _readonly(probs))

    @classmethod
    def from_pairs(cls, pairs, *, normalize=False):
        """Build from ``(value, probability)`` pairs.

        Unless ``normalize`` is set, the masses must already sum to one within
        1e-9; they are then renormalized exactly.
        """
        pairs = list(pairs)
        if not pairs:
            raise ValidationError("empty pmf")
        values = [v for v, _ in pairs]
        masses = [float(p) for _, p in pairs]
        if any(p < 0 for p in masses):
            raise ValidationError("negative probability mass")
        if not normalize and abs(math.fsum(masses) - 1.0) > NORMALIZATION_SLACK:
            raise ValidationError(f"probabilities sum to {math.fsum(masses)!r}, not 1")
        return cls(np.asarray(values), np.asarray(masses))

    def __len__(self):
        return int(self.support.size)

    def __eq__(self, other):
        if not isinstance(other, DiscretePmf):
            return NotImplemented
        return (
            np.array_equal(self.support, other.support)
            and np.array_equal(self.probs, other.probs)
            and self.tail_mass_bound == other.tail_mass_bound
        )

    __hash__ = None

    @property
    def mean(self):
        return math.fsum((self.support * self.probs).tolist())

    @property
    def variance(self):
        return moment(self, 2.0, centered=True)

    def shifted(self, offset):
        """The law of ``X + offset``."""
        return DiscretePmf(self.support + int(offset), self.probs, self.tail_mass_bound)

    def pairs(self):
        return list(zip(self.support.tolist(), self.probs.tolist()))


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Joint law of a secret ``X`` (rows) and an observation ``Y`` (columns)."""

    x_support: np.ndarray
    y_support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.x_support).astype(np.int64)
        ys = np.asarray(self.y_support).astype(np.int64)
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (xs.size, ys.size):
            raise ValidationError(f"probs shape {p.shape} does not match supports ({xs.size}, {ys.size})")
        if len(set(xs.tolist())) != xs.size or len(set(ys.tolist())) != ys.size:
            raise ValidationError("duplicate support points")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValidationError("joint entries must be finite and nonnegative")
        total = math.fsum(p.ravel().tolist())
        if abs(total - 1.0) > NORMALIZATION_SLACK:
            raise ValidationError(f"joint probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "x_support", _readonly(xs))
        object.__setattr__(self, "y_support", _readonly(ys))
        object.__setattr__(self, "probs", _readonly(p / total))

    @classmethod
    def product(cls, px: DiscretePmf, py: DiscretePmf):
        """Joint law of independent ``X ~ px`` and ``Y ~ py``."""
        return cls(px.support, py.support, np.outer(px.probs, py.probs))

    @classmethod
    def diagonal(cls, px: DiscretePmf):
        """Joint law of ``(X, Y)`` with ``Y = X``."""
        return cls(px.support, px.support, np.diag(px.probs))

    def marginal_x(self):
        return DiscretePmf(self.x_support, self.probs.sum(axis=1))

    def marginal_y(self):
        return DiscretePmf(self.y_support, self.probs.sum(axis=0))

    def slices(self):
        """Yield ``(y, conditional pmf of X given y, P(Y=y))`` for every y with positive mass."""
        for j, y in enumerate(self.y_support.tolist()):
            col = self.probs[:, j]
            w = math.fsum(col.tolist())
            if w > 0:
                yield y, DiscretePmf(self.x_support, col / w), w


@dataclass(frozen=True)
class FamilySpec:
    """A parametric family tag plus its parameters.

    Recognised parameters: ``p`` (bernoulli, binomial), ``n`` (binomial),
    ``lam`` (poisson), ``mu`` (geometric mean), ``s`` and ``K`` (zipf_log_power),
    ``M`` and ``start`` (uniform), ``pairs`` (custom).
    """

    family: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")

    @classmethod
    def parse(cls, text):
        """Parse the ``family:key=value,...`` mini-language.

        ``custom:0:0.5,1:0.25,2:0.25`` lists ``value:probability`` pairs.
        ``lambda`` is accepted as an alias of ``lam``.
        """
        text = text.strip().strip('"').strip("'")
        family, _, rest = text.partition(":")
        family = family.strip().lower()
        rest = rest.strip().strip('"').strip("'")
        if family == "custom":
            pairs = []
            for item in filter(None, (s.strip() for s in rest.split(","))):
                v, sep, p = item.partition(":")
                if not sep:
                    raise ParameterError(f"custom pmf entry {item!r} is not of the form value:prob")
                try:
                    pairs.append((int(v), float(p)))
                except ValueError as exc:
                    raise ParameterError(f"cannot parse custom pmf entry {item!r}") from exc
            return cls("custom", {"pairs": pairs})
        params = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ParameterError(f"parameter {item!r} is not of the form key=value")
            key = {"lambda": "lam"}.get(key.strip(), key.strip())
            try:
                params[key] = int(value) if key in ("n", "M", "K", "start") else float(value)
            except ValueError as exc:
                raise ParameterError(f"cannot parse value of {key!r}: {value!r}") from exc
        return cls(family, params)


def _need(params, key):
    if key not in params:
        raise ParameterError(f"missing parameter {key!r}")
    return params[key]


def _truncate_at(sf, k0=0):
    """Smallest K >= k0 with P(X > K) <= TRUNCATION_MASS, and that tail mass."""
    k = k0
    step = 1
    while sf(k) > TRUNCATION_MASS:
        k += step
        step *= 2
    lo, hi = k0, k
    while lo < hi:
        mid = (lo + hi) // 2
        if sf(mid) > TRUNCATION_MASS:
            lo = mid + 1
        else:
            hi = mid
    return lo, float(sf(lo))


def build(spec: FamilySpec) -> DiscretePmf:
    """Materialise a :class:`FamilySpec` as a :class:`DiscretePmf`."""
    fam, prm = spec.family, dict(spec.params)
    if fam == "bernoulli":
        p = float(_need(prm, "p"))
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"bernoulli requires 0 <= p <= 1, got {p}")
        return DiscretePmf(np.array([0, 1]), np.array([1.0 - p, p]))
    if fam == "binomial":
        n, p = _need(prm, "n"), float(_need(prm, "p"))
        if int(n) != n or n < 0:
            raise ParameterError(f"binomial requires integer n >= 0, got {n}")
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"binomial requires 0 <= p <= 1, got {p}")
        k = np.arange(int(n) + 1)
        return DiscretePmf(k, stats.binom.pmf(k, int(n), p))
    if fam == "poisson":
        lam = float(_need(prm, "lam"))
        if not lam > 0:
            raise ParameterError(f"poisson requires lam > 0, got {lam}")
        kmax, tail = _truncate_at(lambda k: stats.poisson.sf(k, lam))
        k = np.arange(kmax + 1)
        return DiscretePmf(k, stats.poisson.pmf(k, lam), tail_mass_bound=tail)
    if fam == "geometric":
        mu = float(_need(prm, "mu"))
        if not mu > 0:
            raise ParameterError(f"geometric requires mean mu > 0, got {mu}")
        r = mu / (1.0 + mu)
        # P(X > K) = r^(K+1) on {0, 1, 2, ...}
        kmax = max(0, math.ceil(math.log(TRUNCATION_MASS) / math.log(r)) - 1)
        while r ** (kmax + 1) > TRUNCATION_MASS:
            kmax += 1
        k = np.arange(kmax + 1)
        return DiscretePmf(k, (1.0 - r) * r ** k, tail_mass_bound=r ** (kmax + 1))
    if fam == "zipf_log_power":
        s, kcut = float(_need(prm, "s")), int(_need(prm, "K"))
        if not s > 0 or kcut < 2:
            raise ParameterError("zipf_log_power requires s > 0 and cutoff K >= 2")
        k = np.arange(2, kcut + 1)
        return DiscretePmf(k, (k * np.log(k)) ** (-s))
    if fam == "uniform":
        m = _need(prm, "M")
        if int(m) != m or m < 1:
            raise ParameterError(f"uniform requires integer M >= 1, got {m}")
        start = int(prm.get("start", 0))
        return DiscretePmf(np.arange(start, start + int(m)), np.full(int(m), 1.0 / int(m)))
    # custom
    return DiscretePmf.from_pairs(_need(prm, "pairs"))


def moment(pmf: DiscretePmf, rho: float, centered: bool = False, one_sided: bool = False) -> float:
    """``E|X - c|^rho`` with ``c`` the mean when ``centered``, else 0."""
    if not rho > 0:
        raise ParameterError(f"moment order must be positive, got {rho}")
    if one_sided and pmf.support[0] < 0:
        raise ParameterError("one-sided moment requires a nonnegative support")
    c = pmf.mean if centered else 0.0
    return math.fsum((np.abs(pmf.support - c) ** rho * pmf.probs).tolist())


def support_length(pmf: DiscretePmf) -> int:
    """Distance between the largest and smallest support points."""
    return int(pmf.support[-1] - pmf.support[0])


def conditional_slice(joint: JointPmf, y: int):
    """Conditional law of ``X`` given ``Y = y`` together with ``P(Y = y)``."""
    hits = np.flatnonzero(joint.y_support == y)
    if hits.size == 0:
        raise DegenerateConditionError(f"y = {y} is not in the observation alphabet")
    col = joint.probs[:, hits[0]]
    w = math.fsum(col.tolist())
    if w <= 0:
        raise DegenerateConditionError(f"P(Y = {y}) = 0")
    return DiscretePmf(joint.x_support, col / w), w


# -- file formats ----------------------------------------------------------

def parse_pmf_text(text: str) -> DiscretePmf:
    """Parse ``value probability`` lines (``#`` starts a comment) or a JSON array of pairs."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON pmf: {exc}") from exc
        try:
            return DiscretePmf.from_pairs((int(v), float(p)) for v, p in data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError("JSON pmf must be an array of [value, probability] pairs") from exc
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 2:
            raise ValidationError(f"line {lineno}: expected 'value probability', got {line!r}")
        try:
            pairs.append((int(fields[0]), float(fields[1])))
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: cannot parse {line!r}") from exc
    return DiscretePmf.from_pairs(pairs)


def load_pmf(path) -> DiscretePmf:
    return parse_pmf_text(Path(path).read_text())


def parse_joint_csv(text: str) -> JointPmf:
    """Parse a joint table: header ``x,y1,y2,...``; each row ``x,p(x,y1),...``."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
    if len(rows) < 2:
        raise ValidationError("joint CSV needs a header row and at least one data row")
    try:
        ys = [int(v) for v in rows[0][1:]]
        xs, table = [], []
        for r in rows[1:]:
            if len(r) != len(ys) + 1:
                raise ValidationError(f"row {r!r} has {len(r) - 1} entries, expected {len(ys)}")
            xs.append(int(r[0]))
            table.append([float(v) for v in r[1:]])
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"cannot parse joint CSV: {exc}") from exc
    return JointPmf(np.array(xs), np.array(ys), np.array(table))


def load_joint(path) -> JointPmf:
    return parse_joint_csv(Path(path).read_text())
