import math

import mpmath
import numpy as np
import pytest

from entbounds.dist import DiscretePmf, FamilySpec, JointPmf, build
from entbounds.entropy import conditional_entropy, discrete_entropy
from entbounds.errors import ParameterError, ValidityError
from entbounds.guessing import (
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
    moment_log_denominator,
    renyi_factor,
)
from entbounds.maxent import RhoMoment, maxent_bound
from entbounds.special import gauss_constant

PI = math.pi
G_GAUSS = 0.834626841674073186


class TestProfile:
    def test_ranks_by_decreasing_probability(self):
        p = DiscretePmf(np.array([10, 20, 30]), np.array([0.2, 0.5, 0.3]))
        prof = guessing_profile(p)
        assert prof.rank_pmf.support.tolist() == [1, 2, 3]
        assert prof.rank_pmf.probs.tolist() == [0.5, 0.3, 0.2]
        assert prof.G == pytest.approx(0.5 + 0.6 + 0.6)

    def test_ties_do_not_change_moments(self):
        p = DiscretePmf(np.array([0, 1, 2, 3]), np.array([0.3, 0.2, 0.3, 0.2]))
        q = DiscretePmf(np.array([0, 1, 2, 3]), np.array([0.2, 0.3, 0.2, 0.3]))
        assert guessing_profile(p).G == guessing_profile(q).G

    @pytest.mark.parametrize("M", [1, 2, 7, 256])
    def test_uniform_moments(self, M):
        prof = guessing_profile(build(FamilySpec("uniform", {"M": M})))
        assert prof.G == pytest.approx((M + 1) / 2, rel=1e-14)
        assert prof.moment(2) == pytest.approx((M + 1) * (2 * M + 1) / 6, rel=1e-14)

    def test_rho_checked(self):
        prof = guessing_profile(build(FamilySpec("uniform", {"M": 3})))
        with pytest.raises(ParameterError):
            guessing_moment(prof, 0.0)


class TestConditional:
    def test_independent_observation_changes_nothing(self):
        px = build(FamilySpec.parse("geometric:mu=2.5"))
        py = build(FamilySpec.parse("uniform:M=3"))
        joint = JointPmf.product(px, py)
        assert conditional_guessing(joint, 2) == pytest.approx(guessing_moment(guessing_profile(px), 2), rel=1e-13)

    def test_full_observation_gives_one(self):
        joint = JointPmf.diagonal(build(FamilySpec.parse("binomial:n=4,p=0.3")))
        assert conditional_guessing(joint) == pytest.approx(1.0, rel=1e-14)

    def test_hand_example(self):
        # y=0: X in {0,1} w.p. (0.1, 0.3)/0.4 -> G = 1*0.75 + 2*0.25; y=1: X = 0 w.p. 0.6 -> G = 1
        joint = JointPmf(np.array([0, 1]), np.array([0, 1]), np.array([[0.1, 0.6], [0.3, 0.0]]))
        assert conditional_guessing(joint) == pytest.approx(0.4 * 1.25 + 0.6 * 1.0, rel=1e-15)


class TestShannonBounds:
    def test_massey_original(self):
        assert lb_massey_original(8.0) == 65.0
        assert lb_massey_original(2.0) == 2.0
        assert lb_massey_original(1.99) is None

    def test_improved_value(self):
        # 2^8/e + 1/2
        assert lb_improved(8.0) == pytest.approx(256 / math.e + 0.5, rel=1e-15)
        assert lb_improved(1e4) == math.inf

    def test_improved_beats_original_above_crossover(self):
        cross = math.log2(2 * math.e / (4 - math.e))
        assert lb_improved(cross + 0.01) > lb_massey_original(cross + 0.01)
        assert lb_improved(cross - 0.01) < lb_massey_original(cross - 0.01)

    def test_uniform_256(self):
        p = build(FamilySpec("uniform", {"M": 256}))
        G = guessing_profile(p).G
        assert G == 128.5
        assert lb_massey_original(8.0) < lb_improved(8.0) < G
        assert lb_arikan(discrete_entropy(p, 0.5), 256) == pytest.approx(256 / math.log(513), rel=1e-14)
        assert lb_arikan(8.0, 256) == pytest.approx(41.02, abs=0.005)

    def test_arikan(self):
        assert lb_arikan(3.0, 10, "original") == pytest.approx(8 / (1 + math.log(10)), rel=1e-15)
        assert lb_arikan(3.0, 10) == pytest.approx(8 / math.log(21), rel=1e-15)
        with pytest.raises(ParameterError):
            lb_arikan(3.0, 10, "other")
        with pytest.raises(ParameterError):
            lb_arikan(3.0, 2.5)

    @pytest.mark.parametrize("M", [2, 3, 10, 1000, 10**6])
    def test_arikan_improved_denominator_smaller(self, M):
        assert math.log(2 * M + 1) < 1 + math.log(M)

    def test_moment_examples(self):
        H = 1.7
        assert lb_moment(H, 2) == pytest.approx(2 * 2 ** (2 * H) / (PI * math.e), rel=1e-14)
        assert lb_moment(H, 4) == pytest.approx(8 * 2 ** (4 * H) / (G_GAUSS**2 * PI**3 * math.e), rel=1e-13)
        assert lb_moment(H, 1) == pytest.approx(2**H / math.e, rel=1e-14)


class TestRenyiBounds:
    @pytest.mark.parametrize("alpha, coef", [(2 / 3, 1 / 4), (0.75, 8 / 27), (2.0, 4 / 9)])
    def test_renyi_coefficients(self, alpha, coef):
        assert renyi_factor(alpha) == pytest.approx(coef, rel=1e-14)
        assert lb_renyi(3.0, alpha) == pytest.approx(coef * 8 + 0.5, rel=1e-14)

    def test_renyi_factor_tends_to_inverse_e(self):
        assert renyi_factor(1 - 1e-7) == pytest.approx(1 / math.e, rel=1e-6)
        assert renyi_factor(1 + 1e-7) == pytest.approx(1 / math.e, rel=1e-6)

    def test_renyi_threshold(self):
        with pytest.raises(ValidityError) as info:
            lb_renyi(1.0, 0.5)
        assert info.value.threshold == 0.5

    def test_small_alpha_examples(self):
        H, M = 2.5, 9
        assert lb_small_alpha(H, 1 / 3, M) == pytest.approx(2 ** (2 * H) / (2 * (2 * M + 1)), rel=1e-13)
        assert lb_small_alpha(H, 0.25, M) == pytest.approx(32 / 27 * 2 ** (3 * H) / (2 * M + 1) ** 2, rel=1e-13)
        with pytest.raises(ValidityError):
            lb_small_alpha(H, 0.5, M)

    @pytest.mark.parametrize("alpha", [0.55, 2 / 3, 0.75, 0.9])
    def test_mid_alpha_weaker_than_renyi(self, alpha):
        for H in (0.5, 2.0, 6.0):
            assert lb_mid_alpha(H, alpha) < lb_renyi(H, alpha)

    @pytest.mark.parametrize(
        "rho, alpha, coef",
        [
            (2, 0.5, 1 / PI**2),
            (2, 2 / 3, 27 / (16 * PI**2)),
            (2, 2.0, 36 / 125),
            (2, 3.0, 3 / PI**2),
            (3, 0.5, 9 / (2 * math.sqrt(3) * PI**3)),
            (3, 2.0, 512 / 2401),
            (4, 1 / 3, 1 / (G_GAUSS**4 * PI**4)),
            (4, 0.5, 27 / (4 * PI**4)),
            (4, 2 / 3, 823543 / (82944 * PI**4)),
            (4, 2.0, 10000 / 59049),
            (4, 5.0, 80 / (9 * G_GAUSS**4 * PI**4)),
        ],
    )
    def test_moment_renyi_coefficients(self, rho, alpha, coef):
        assert math.exp(-moment_log_denominator(rho, alpha)) == pytest.approx(coef, rel=1e-13)
        assert lb_moment_renyi(1.25, alpha, rho) == pytest.approx(coef * 2 ** (rho * 1.25), rel=1e-13)

    def test_gauss_constant_matches(self):
        assert gauss_constant() == pytest.approx(G_GAUSS, rel=1e-15)

    def test_moment_renyi_threshold(self):
        with pytest.raises(ValidityError) as info:
            lb_moment_renyi(1.0, 0.25, 3)
        assert info.value.threshold == 0.25


class TestDenominatorRoutes:
    """``ln D`` equals ``rho`` times the one-sided maximum entropy (nats) at unit moment."""

    @pytest.mark.parametrize("rho", [0.5, 1, 2, 3, 4, 7.5])
    @pytest.mark.parametrize("alpha", [None, 0.45, 0.6, 0.8, 1.5, 2, 5])
    def test_agreement(self, rho, alpha):
        if alpha is not None and alpha <= 1 / (1 + rho):
            pytest.skip("inadmissible")
        h_nats = maxent_bound(RhoMoment(rho, 1.0, one_sided=True), alpha) * math.log(2)
        assert moment_log_denominator(rho, alpha) == pytest.approx(rho * h_nats, rel=1e-13, abs=1e-13)

    @pytest.mark.parametrize("rho", [1, 2, 4])
    def test_against_mpmath_gamma(self, rho):
        D = rho * mpmath.gamma(1 + mpmath.mpf(1) / rho) ** rho * mpmath.e
        assert moment_log_denominator(rho) == pytest.approx(float(mpmath.log(D)), rel=1e-14)


class TestReports:
    def test_unconditional_reports_hold(self):
        p = build(FamilySpec.parse("poisson:lam=6"))
        skipped = []
        reps = lower_bound_reports(p, skipped=skipped)
        assert reps and all(r.holds for r in reps)
        assert all(r.direction == "lower" for r in reps)
        names = {r.name for r in reps}
        assert "lb_renyi[alpha=0.25]" in skipped
        assert "lb_moment_renyi[rho=1,alpha=0.25]" in skipped
        assert "lb_moment_renyi[rho=4,alpha=0.25]" in names
        assert "lb_small_alpha[alpha=0.4]" in names and "lb_mid_alpha[alpha=0.6]" in names

    def test_massey_original_skipped_below_two_bits(self):
        skipped = []
        lower_bound_reports(build(FamilySpec.parse("bernoulli:p=0.3")), skipped=skipped)
        assert "lb_massey_original" in skipped

    def test_conditional_reports_hold(self):
        rng = np.random.default_rng(5)
        joint = JointPmf(np.arange(6), np.arange(4), rng.dirichlet(np.ones(24)).reshape(6, 4))
        reps = lower_bound_reports(joint)
        assert all(r.holds for r in reps)
        assert not any(r.name == "lb_massey_original" for r in reps)
        imp = next(r for r in reps if r.name == "lb_improved")
        assert imp.bound_bits == pytest.approx(lb_improved(conditional_entropy(joint)))

    def test_subject_is_guessing_moment(self):
        p = build(FamilySpec.parse("geometric:mu=4"))
        reps = {r.name: r for r in lower_bound_reports(p, rhos=(2,), alphas=())}
        assert reps["lb_moment[rho=2]"].subject_bits == guessing_profile(p).moment(2)
        assert reps["lb_improved"].bound_bits == lb_improved(discrete_entropy(p))
