"""Independent numerical checks and the global inequality sweep.

Every check here computes the same quantity along a second route (quadrature
against a closed form, direct against transformed sums, exact guessing
moments against their bounds) and records the discrepancy.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize, stats

from .bounds import CATALOG, evaluate_bound, improved_variance, massey_variance, mean_bound, mixed_mean
from .dist import DiscretePmf, FamilySpec, JointPmf, build
from .entropy import EntropyOrder, discrete_entropy
from .errors import AccuracyError, EntBoundsError, ParameterError, SearchError, ValidationError
from .guessing import lb_improved, lb_massey_original, lower_bound_reports
from .maxent import MaxEntDensity, quadrature_renyi
from .poisson_sum import PAIR_KINDS, FourierPair, lattice_sum

LOG2_2PIE = math.log2(2.0 * math.pi * math.e)
THRESHOLD_XTOL = 1e-10
BINOMIAL_N_MAX = 2000


# -- dither identity -----------------------------------------------------------

def staircase_density(pmf: DiscretePmf):
    """Density of ``X + U`` with ``U`` uniform on (0, 1): ``p(x)`` on ``[x, x + 1)``."""
    lo = int(pmf.support[0])
    table = np.zeros(int(pmf.support[-1]) - lo + 1)
    table[pmf.support - lo] = pmf.probs

    def f(x):
        k = math.floor(x) - lo
        return float(table[k]) if 0 <= k < table.size else 0.0

    return f, (float(lo), float(pmf.support[-1] + 1))


def dither_identity(pmf: DiscretePmf, order=None) -> float:
    """``|h_alpha(X + U) - H_alpha(X)|`` in bits, with the left side computed by quadrature.

    Raises
    ------
    AccuracyError
        If the quadrature cannot reach its error target.
    """
    f, (lo, hi) = staircase_density(pmf)
    pts = np.arange(lo + 1, hi).tolist()
    h = quadrature_renyi(f, (lo, hi), order, points=pts, scale=1.0)
    return abs(h - discrete_entropy(pmf, order))


# -- Reza convergence ----------------------------------------------------------

def _quantization_edges(d: MaxEntDensity, delta):
    lo, hi = d.support()
    if d.kind == "uniform":
        n = round((hi - lo) / delta)
        return lo + delta * np.arange(n + 1)
    if d.kind == "gaussian":
        lo, hi = d.loc - 40.0 * d.sigma, d.loc + 40.0 * d.sigma
    elif d.kind == "exponential":
        hi = 750.0 * d.theta
    elif math.isinf(lo) or math.isinf(hi):
        raise ValidationError("quantization needs a compact support or an exponentially decaying tail")
    k0, k1 = math.floor(lo / delta), math.ceil(hi / delta)
    return delta * np.arange(k0, k1 + 1)


def quantize(d: MaxEntDensity, delta) -> DiscretePmf:
    """Law of the bin index of a draw from ``d`` on the grid ``delta * Z``."""
    if not delta > 0:
        raise ParameterError(f"bin width must be positive, got {delta}")
    e = _quantization_edges(d, float(delta))
    a, b = e[:-1], e[1:]
    left = d.cdf(a)
    # take differences on the side of the median where they are small
    masses = np.where(left < 0.5, d.cdf(b) - left, d.sf(a) - d.sf(b))
    return DiscretePmf(np.arange(masses.size), np.maximum(masses, 0.0))


def reza_convergence(density: MaxEntDensity, order=None, deltas=None):
    """Rows ``(delta, H_alpha(X_delta) + log2 delta - h_alpha(X))`` for each bin width."""
    order = EntropyOrder.coerce(order)
    if deltas is None:
        deltas = [2.0 ** -k for k in range(9)]
    h = density.renyi_entropy(order)
    return [(float(dl), float(discrete_entropy(quantize(density, dl), order) + math.log2(dl) - h)) for dl in deltas]


# -- trapezoid lemma -----------------------------------------------------------

def lemma_margin(f, integral, n_terms, tail_lower=0.0):
    """Certified lower bound of ``sum_N f - (f(0)/2 + integral)``.

    ``f`` is summed over ``0..n_terms-1`` and ``tail_lower`` is a lower bound
    on the remaining terms.
    """
    head = math.fsum(f(np.arange(n_terms, dtype=float)).tolist())
    return head + tail_lower - (0.5 * float(f(np.zeros(1))[0]) + integral)


def trapezoid_margin(alpha, mu, n_terms=200_000):
    """Certified lower bound of ``sum_N (1 + ((1-alpha)/(2 alpha-1)) x/mu)_+^(alpha/(alpha-1)) - (mu + 1/2)``."""
    alpha, mu = float(alpha), float(mu)
    if not alpha > 0.5 or alpha == 1.0:
        raise ParameterError(f"need alpha > 1/2 and alpha != 1, got {alpha}")
    if not mu > 0:
        raise ParameterError(f"mean must be positive, got {mu}")
    s = alpha / abs(alpha - 1.0)
    a = (2.0 * alpha - 1.0) / abs(1.0 - alpha) * mu
    if alpha > 1:
        x = np.arange(0, math.ceil(a) + 1, dtype=float)
        total = math.fsum((np.maximum(1.0 - x / a, 0.0) ** s).tolist())
        return total - (mu + 0.5)
    x = np.arange(n_terms, dtype=float)
    head = math.fsum(((1.0 + x / a) ** -s).tolist())
    # decreasing terms: the tail sum exceeds the integral from n_terms
    tail = a / (s - 1.0) * (1.0 + n_terms / a) ** (1.0 - s)
    return head + tail - (mu + 0.5)


def trapezoid_check(alpha, mu) -> bool:
    """Confirm the escort-sum inequality and the underlying lemma for both kernels at ``(alpha, mu)``."""
    if not trapezoid_margin(alpha, mu) > 0:
        return False
    s = alpha / abs(alpha - 1.0)
    a = (2.0 * alpha - 1.0) / abs(1.0 - alpha) * mu
    if alpha > 1:
        def f(x):
            return np.maximum(1.0 - x / a, 0.0) ** s

        m = lemma_margin(f, a / (s + 1.0), math.ceil(a) + 1)
    else:
        def f(x):
            return (1.0 + x / a) ** -s

        n = 200_000
        m = lemma_margin(f, a / (s - 1.0), n, a / (s - 1.0) * (1.0 + n / a) ** (1.0 - s))
    return m > 0


# -- thresholds ----------------------------------------------------------------

def _poisson_gap(lam):
    pmf = build(FamilySpec("poisson", {"lam": lam}))
    return 0.5 * (LOG2_2PIE + math.log2(lam)) - discrete_entropy(pmf)


def _binomial_entropy(n, p):
    k = np.arange(n + 1)
    return float(stats.entropy(stats.binom.pmf(k, n, p), base=2))


def _binomial_holds(p, n_max):
    q = 1.0 - p
    for n in range(1, n_max + 1):
        if not _binomial_entropy(n, p) < 0.5 * (LOG2_2PIE + math.log2(n * p * q)):
            return False
    return True


def _massey_crossover_gap(h):
    return lb_improved(h) - lb_massey_original(h)


def find_threshold(target, n_max=BINOMIAL_N_MAX, xtol=THRESHOLD_XTOL) -> float:
    """Locate a threshold by bracketing root search.

    ``poisson_lambda_star``
        Smallest ``lambda`` with ``H(Poisson(lambda)) < 1/2 log2(2 pi e lambda)``.
    ``binomial_p_star``
        Largest ``|p - 1/2|`` with ``H(B(n, p)) < 1/2 log2(2 pi e n p q)`` for every ``n <= n_max``.
    ``massey_crossover``
        Entropy at which ``2^H/e + 1/2`` and ``2^(H-2) + 1`` cross.

    Raises
    ------
    SearchError
        If the initial bracket does not straddle a sign change.
    """
    try:
        if target == "poisson_lambda_star":
            return optimize.brentq(_poisson_gap, 0.02, 1.0, xtol=xtol)
        if target == "massey_crossover":
            return optimize.brentq(_massey_crossover_gap, 2.0, 3.0, xtol=xtol)
        if target == "binomial_p_star":
            def g(d):
                return 1.0 if _binomial_holds(0.5 - d, n_max) else -1.0

            return optimize.bisect(g, 0.1, 0.45, xtol=xtol)
    except ValueError as exc:
        raise SearchError(f"{target}: {exc}") from exc
    raise ParameterError(f"unknown threshold {target!r}")


THRESHOLD_TARGETS = ("poisson_lambda_star", "binomial_p_star", "massey_crossover")


# -- divergent counterexamples -------------------------------------------------

def divergence_demo(exponent, cutoff):
    """Partial sums for the weights ``w(k) = (k ln k)^(-exponent)``, ``k >= 2``, left unnormalized.

    Exponent 2: ``sum k w(k)`` converges while ``sum w(k)^(1/2)`` grows like
    ``ln ln K``. Exponent 3: ``sum k^2 w(k)`` converges while ``sum w(k)^(1/3)``
    grows the same way. Rows are reported at ``K = 10, 100, ...`` up to the
    cutoff, each with an integral upper bound on the remaining moment tail.
    """
    if exponent not in (2, 3):
        raise ParameterError(f"exponent must be 2 or 3, got {exponent}")
    cutoff = int(cutoff)
    if cutoff < 10:
        raise ParameterError(f"cutoff must be at least 10, got {cutoff}")
    k = np.arange(2, cutoff + 1, dtype=float)
    lk = np.log(k)
    w = (k * lk) ** -float(exponent)
    mom = k ** (exponent - 1) * w
    root = w ** (1.0 / exponent)
    cw, cm, cr = np.cumsum(w), np.cumsum(mom), np.cumsum(root)
    rows = []
    K = 10
    while K <= cutoff:
        i = K - 2
        rows.append({
            "K": K,
            "mass": float(cw[i]),
            "moment": float(cm[i]),
            # sum_{k>K} 1/(k ln^m k) <= integral from K = 1/((m-1) ln^(m-1) K)
            "moment_tail_bound": 1.0 / ((exponent - 1) * math.log(K) ** (exponent - 1)),
            "root_sum": float(cr[i]),
        })
        K *= 10
    return rows


# -- global sweep --------------------------------------------------------------

DEFAULT_FAMILIES = (
    "bernoulli:p=0.05", "bernoulli:p=0.11", "bernoulli:p=0.3", "bernoulli:p=0.5",
    "binomial:n=10,p=0.5", "binomial:n=20,p=0.1", "binomial:n=50,p=0.3", "binomial:n=200,p=0.7",
    "poisson:lam=0.1", "poisson:lam=0.5", "poisson:lam=1", "poisson:lam=2", "poisson:lam=4",
    "poisson:lam=10", "poisson:lam=30",
    "geometric:mu=0.5", "geometric:mu=1", "geometric:mu=2", "geometric:mu=5",
    "uniform:M=1", "uniform:M=2", "uniform:M=7", "uniform:M=16", "uniform:M=64",
)
DEFAULT_SWEEP_ALPHAS = (0.34, 0.4, 0.5, 0.6, 2.0 / 3.0, 0.75, 1.0, 2.0, 3.0, 4.0)
DITHER_ORDERS = (None, 0.5, 2.0, 3.0)


@dataclass(frozen=True)
class SweepConfig:
    """Grids and tolerances for :func:`full_sweep`. An order of 1 means Shannon."""

    families: tuple = DEFAULT_FAMILIES
    alphas: tuple = DEFAULT_SWEEP_ALPHAS
    rhos: tuple = (1.0, 2.0, 3.0, 4.0)
    random_pmfs: int = 1000
    random_atoms: int = 64
    random_joints: int = 200
    joint_shape: tuple = (8, 5)
    heavy_tail_exponents: tuple = (1.2, 1.5, 2.0, 3.0)
    heavy_tail_cutoffs: tuple = (100, 1000)
    dither_pmfs: int = 20
    seed: int = 0
    violation_tol: float = 1e-10
    dither_tol: float = 1e-8
    poisson_tol: float = 1e-10

    def __post_init__(self):
        for name in ("alphas", "rhos"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
            if not getattr(self, name):
                raise ParameterError(f"{name} grid is empty")
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "joint_shape", tuple(int(v) for v in self.joint_shape))
        object.__setattr__(self, "heavy_tail_exponents", tuple(float(v) for v in self.heavy_tail_exponents))
        object.__setattr__(self, "heavy_tail_cutoffs", tuple(int(v) for v in self.heavy_tail_cutoffs))
        if not (self.families or self.random_pmfs or self.random_joints):
            raise ParameterError("sweep has no inputs")
        for name in ("violation_tol", "dither_tol", "poisson_tol"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if any(a <= 0 for a in self.alphas) or any(r <= 0 for r in self.rhos):
            raise ParameterError("orders and moment exponents must be positive")
        for name in ("random_pmfs", "random_atoms", "random_joints", "dither_pmfs"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be nonnegative")

    @classmethod
    def from_mapping(cls, data):
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ParameterError(f"unknown sweep settings: {', '.join(sorted(extra))}")
        return cls(**data)

    def to_dict(self):
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


@dataclass
class VerificationReport:
    """Outcome of a sweep. ``violations`` is empty on a passing run."""

    checks_run: int = 0
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    inadmissible: int = 0
    not_asserted: int = 0
    accuracy_errors: list = field(default_factory=list)
    thresholds: dict = field(default_factory=dict)
    max_discrepancies: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def summary(self):
        lines = [
            f"checks run        {self.checks_run}",
            f"violations        {len(self.violations)}",
            f"boundary warnings {len(self.warnings)}",
            f"inadmissible      {self.inadmissible}",
            f"not asserted      {self.not_asserted}",
            f"accuracy errors   {len(self.accuracy_errors)}",
        ]
        lines += [f"max {k:<22}{v:.3e}" for k, v in sorted(self.max_discrepancies.items())]
        lines += [f"{k:<26}{v:.10f}" for k, v in sorted(self.thresholds.items())]
        for v in self.violations:
            lines.append(f"VIOLATION {v['bound']} on {v['input']}: subject {v['subject']!r}, bound {v['bound_value']!r}")
        return "\n".join(lines)


class _Recorder:
    def __init__(self, report: VerificationReport, tol):
        self.r = report
        self.tol = tol

    def bound(self, rep, label):
        self.r.checks_run += 1
        if rep.holds is None:
            self.r.not_asserted += 1
            return
        if rep.holds:
            return
        item = {"bound": rep.name, "input": label, "subject": rep.subject_bits,
                "bound_value": rep.bound_bits, "gap": rep.gap_bits}
        if rep.gap_bits < -self.tol:
            self.r.violations.append(item)
        else:
            self.r.warnings.append(item)

    def ordering(self, name, label, smaller, larger, strict=True):
        """Record the claim ``smaller < larger`` (or ``<=``)."""
        self.r.checks_run += 1
        gap = larger - smaller
        if gap > 0 or (not strict and gap >= 0):
            return
        item = {"bound": name, "input": label, "subject": smaller, "bound_value": larger, "gap": gap}
        (self.r.violations if gap < -self.tol else self.r.warnings).append(item)

    def discrepancy(self, key, name, label, value, tol):
        self.r.checks_run += 1
        cur = self.r.max_discrepancies.get(key, 0.0)
        self.r.max_discrepancies[key] = max(cur, value)
        if not value <= tol:
            self.r.violations.append({"bound": name, "input": label, "subject": value, "bound_value": tol, "gap": tol - value})

    def error(self, name, label, exc):
        self.r.checks_run += 1
        self.r.accuracy_errors.append({"check": name, "input": label, "error": str(exc)})


def _random_pmfs(cfg: SweepConfig, rng):
    for i in range(cfg.random_pmfs):
        w = rng.standard_exponential(cfg.random_atoms)
        yield f"random[{i}]", DiscretePmf(np.arange(cfg.random_atoms), w / w.sum())


def _random_joints(cfg: SweepConfig, rng):
    nx, ny = cfg.joint_shape
    for i in range(cfg.random_joints):
        w = rng.standard_exponential((nx, ny))
        yield f"joint[{i}]", JointPmf(np.arange(nx), np.arange(ny), w / w.sum())


def _heavy_tail_pmfs(cfg: SweepConfig):
    for s in cfg.heavy_tail_exponents:
        for K in cfg.heavy_tail_cutoffs:
            k = np.arange(K, dtype=float)
            yield f"heavy[s={s:g},K={K}]", DiscretePmf(np.arange(K), (k + 1.0) ** -s)


def poisson_grid(n=50):
    """``n`` deterministic ``(mu, sigma)`` points with ``sigma`` in [0.3, 6]."""
    sig = np.geomspace(0.3, 6.0, n)
    mu = np.linspace(-2.5, 2.5, n)[np.argsort(np.arange(n) * 7 % n)]
    return list(zip(mu.tolist(), sig.tolist()))


def _sweep_upper(rec: _Recorder, cfg: SweepConfig, label, pmf):
    for a in cfg.alphas:
        order = EntropyOrder.coerce(a)
        for name in CATALOG:
            try:
                rep = evaluate_bound(name, pmf, order)
            except AccuracyError as exc:
                rec.error(name, label, exc)
                continue
            except EntBoundsError:
                rec.r.inadmissible += 1
                continue
            rec.bound(rep, f"{label} [{order}]")


def _sweep_lower(rec: _Recorder, cfg: SweepConfig, label, source):
    skipped = []
    try:
        reps = lower_bound_reports(source, rhos=cfg.rhos, alphas=cfg.alphas, skipped=skipped)
    except AccuracyError as exc:
        rec.error("guessing", label, exc)
        return
    rec.r.inadmissible += len(skipped)
    for rep in reps:
        rec.bound(rep, label)


def _sweep_identities(rec: _Recorder, cfg: SweepConfig, dither_inputs):
    for label, pmf in dither_inputs:
        for order in DITHER_ORDERS:
            try:
                d = dither_identity(pmf, order)
            except AccuracyError as exc:
                rec.error("dither_identity", label, exc)
                continue
            rec.discrepancy("dither_identity", "dither_identity", f"{label} [{EntropyOrder.coerce(order)}]", d, cfg.dither_tol)
    for kind in PAIR_KINDS:
        for mu, sigma in poisson_grid():
            pair = FourierPair(kind, 0.0 if kind == "two_sided_exponential" else mu, sigma)
            res = lattice_sum(pair)
            rec.discrepancy("poisson_summation", "poisson_summation", f"{kind}(mu={pair.mu:.6g}, sigma={sigma:.6g})",
                            res.discrepancy, cfg.poisson_tol)
    for a in (0.6, 0.75, 0.9, 1.5, 2.0, 3.0):
        for mu in (0.1, 0.5, 1.0, 3.0, 10.0):
            rec.r.checks_run += 1
            if not trapezoid_check(a, mu):
                rec.r.violations.append({"bound": "trapezoid", "input": f"alpha={a:g}, mu={mu:g}",
                                         "subject": None, "bound_value": None, "gap": None})


def _sweep_orderings(rec: _Recorder):
    for s2 in np.geomspace(0.5, 1000.0, 40).tolist():
        rec.ordering("improved_variance < massey_variance", f"sigma2={s2:.6g}",
                     improved_variance(s2).bound_bits, massey_variance(s2).bound_bits)
    for mu in np.geomspace(0.1, 100.0, 40).tolist():
        rec.ordering("mean_bound < mixed_mean", f"mu={mu:.6g}", mean_bound(mu).bound_bits, mixed_mean(mu).bound_bits)
    for M in np.unique(np.geomspace(2, 1e6, 60).astype(int)).tolist():
        rec.ordering("ln(2M+1) < 1 + ln M", f"M={M}", math.log(2 * M + 1), 1.0 + math.log(M))


def full_sweep(config: SweepConfig | None = None, find_thresholds=False) -> VerificationReport:
    """Run every admissible (bound, input) pair and every identity check.

    Accuracy failures are recorded per check and never abort the sweep.
    Identical configurations produce identical reports.
    """
    cfg = config or SweepConfig()
    report = VerificationReport(config=cfg.to_dict())
    rec = _Recorder(report, cfg.violation_tol)
    rng = np.random.default_rng(cfg.seed)

    family = [(s, build(FamilySpec.parse(s))) for s in cfg.families]
    randoms = list(_random_pmfs(cfg, rng))
    joints = list(_random_joints(cfg, rng))
    pmfs = family + randoms + list(_heavy_tail_pmfs(cfg))

    for label, pmf in pmfs:
        _sweep_upper(rec, cfg, label, pmf)
        _sweep_lower(rec, cfg, label, pmf)
    for label, joint in joints:
        _sweep_lower(rec, cfg, label, joint)

    small = [(lab, p) for lab, p in family if len(p) <= 256]
    dither_inputs = (small + randoms)[: cfg.dither_pmfs]
    _sweep_identities(rec, cfg, dither_inputs)
    _sweep_orderings(rec)

    if find_thresholds:
        for t in THRESHOLD_TARGETS:
            report.thresholds[t] = find_threshold(t)
    return report
