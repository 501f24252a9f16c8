"""Entropy bounds for integer-valued random variables and guessing.

Upper bounds on Shannon and Rényi entropies from variance, mean and support
constraints; lower bounds on guessing entropy and guessing moments; the
maximum-entropy densities and lattice sums they rest on; and a numerical
harness that checks all of them.
"""

from .bounds import (
    CATALOG,
    BoundReport,
    c_k,
    c_k_exact,
    evaluate_bound,
    gaussian_condition,
    improved_variance,
    massey_variance,
    mean_bound,
    mixed_mean,
    mixed_variance,
    moustache,
    support_bound,
)
from .dist import DiscretePmf, FamilySpec, JointPmf, build, load_joint, load_pmf, moment, support_length
from .entropy import EntropyOrder, binary_entropy, conditional_entropy, discrete_entropy, escort
from .errors import (
    AccuracyError,
    DegenerateConditionError,
    DomainError,
    EntBoundsError,
    NormalizationError,
    OrderError,
    ParameterError,
    SearchError,
    UnsupportedVariantError,
    ValidationError,
    ValidityError,
)
from .guessing import (
    GuessingProfile,
    conditional_guessing,
    guessing_moment,
    guessing_profile,
    lb_arikan,
    lb_improved,
    lb_massey_original,
    lb_mid_alpha,
    lb_moment,
    lb_moment_renyi,
    lb_renyi,
    lb_small_alpha,
    lower_bound_reports,
)
from .maxent import MaxEntDensity, Mean, RhoMoment, SupportLength, Variance, maxent_bound, partition_constants
from .poisson_sum import FourierPair, lattice_sum, zprime
from .special import gauss_constant, lgamma
from .verify import SweepConfig, VerificationReport, full_sweep

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "binary_entropy", "BoundReport", "build", "c_k", "c_k_exact", "CATALOG",
    "conditional_entropy", "conditional_guessing", "DegenerateConditionError", "discrete_entropy",
    "DiscretePmf", "DomainError", "EntBoundsError", "EntropyOrder", "escort", "evaluate_bound", "FamilySpec",
    "FourierPair", "full_sweep", "gauss_constant", "gaussian_condition", "guessing_moment",
    "guessing_profile", "GuessingProfile", "improved_variance", "JointPmf", "lattice_sum", "lb_arikan",
    "lb_improved", "lb_massey_original", "lb_mid_alpha", "lb_moment", "lb_moment_renyi", "lb_renyi",
    "lb_small_alpha", "lgamma", "load_joint", "load_pmf", "lower_bound_reports", "massey_variance",
    "maxent_bound", "MaxEntDensity", "Mean", "mean_bound", "mixed_mean", "mixed_variance", "moment",
    "moustache", "NormalizationError", "OrderError", "ParameterError", "partition_constants", "RhoMoment",
    "SearchError", "support_bound", "support_length", "SupportLength", "SweepConfig",
    "UnsupportedVariantError", "ValidationError", "ValidityError", "Variance", "VerificationReport", "zprime",
]
