import math

import mpmath
import numpy as np
import pytest

from entbounds.dist import DiscretePmf, FamilySpec, JointPmf, build
from entbounds.entropy import EntropyOrder, binary_entropy, conditional_entropy, discrete_entropy, escort
from entbounds.errors import OrderError, ParameterError

mpmath.mp.dps = 40


def mp_renyi(probs, alpha=None):
    """High-precision oracle: Shannon or Rényi entropy in bits."""
    ps = [mpmath.mpf(float(p)) for p in probs]
    if alpha is None:
        return float(-mpmath.fsum(p * mpmath.log(p, 2) for p in ps))
    a = mpmath.mpf(alpha)
    return float(mpmath.log(mpmath.fsum(p**a for p in ps), 2) / (1 - a))


class TestEntropyOrder:
    @pytest.mark.parametrize("value", [None, "shannon", "1", 1, 1.0])
    def test_shannon_spellings(self, value):
        assert EntropyOrder.coerce(value).is_shannon

    @pytest.mark.parametrize("value", [0, -1, float("inf"), float("nan"), 1 + 1e-7, "abc"])
    def test_rejected(self, value):
        with pytest.raises(OrderError):
            EntropyOrder.coerce(value)

    def test_str(self):
        assert str(EntropyOrder.coerce("0.5")) == "renyi(0.5)"
        assert str(EntropyOrder.shannon()) == "shannon"


class TestDiscreteEntropy:
    @pytest.mark.parametrize("M", [1, 2, 7, 8, 256])
    @pytest.mark.parametrize("alpha", [None, 0.25, 0.5, 2.0, 3.0, 50.0])
    def test_uniform_exact(self, M, alpha):
        assert discrete_entropy(build(FamilySpec("uniform", {"M": M})), alpha) == math.log2(M)

    def test_bernoulli_011(self):
        # the formula value; 0.49993 would be wrong in the fourth decimal
        h = discrete_entropy(build(FamilySpec.parse("bernoulli:p=0.11")))
        assert h == pytest.approx(mp_renyi([0.89, 0.11]), rel=1e-14)
        assert h == pytest.approx(0.4999159581647, abs=1e-12)

    @pytest.mark.parametrize("alpha", [None, 0.1, 0.5, 0.75, 2.0, 3.0, 10.0])
    def test_matches_oracle(self, alpha):
        p = build(FamilySpec.parse("poisson:lam=3.7"))
        assert discrete_entropy(p, alpha) == pytest.approx(mp_renyi(p.probs, alpha), rel=1e-12)

    def test_extreme_orders_stay_finite(self):
        p = DiscretePmf(np.arange(3), np.array([1e-300, 0.5, 0.5 - 1e-300]))
        assert discrete_entropy(p, 500.0) == pytest.approx(mp_renyi(p.probs, 500), rel=1e-12)
        assert math.isfinite(discrete_entropy(p, 0.01))

    def test_point_mass(self):
        p = DiscretePmf(np.array([5]), np.array([1.0]))
        for a in (None, 0.5, 2.0):
            assert discrete_entropy(p, a) == 0.0

    def test_binary_entropy(self):
        assert binary_entropy(0.5) == 1.0
        assert binary_entropy(0.0) == 0.0 == binary_entropy(1.0)
        with pytest.raises(ParameterError):
            binary_entropy(1.1)


def test_escort():
    p = build(FamilySpec.parse("custom:0:0.8,1:0.2"))
    e = escort(p, 2.0)
    assert e.probs[0] == pytest.approx(16 / 17, rel=1e-15)
    assert escort(p, 1.0) == p


class TestConditional:
    def test_hand_example(self):
        j = JointPmf(np.arange(2), np.arange(2), np.array([[0.4, 0.1], [0.1, 0.4]]))
        # Shannon: each slice is Bernoulli(0.2), so H(X|Y) = H_b(0.2)
        assert conditional_entropy(j) == pytest.approx(binary_entropy(0.2), rel=1e-15)
        # Arimoto of order 2: -2 log2 sum_y sqrt(sum_x P^2)
        s = 2 * math.sqrt(0.4**2 + 0.1**2)
        assert conditional_entropy(j, 2.0) == pytest.approx(-2 * math.log2(s), rel=1e-14)

    @pytest.mark.parametrize("alpha", [None, 0.5, 2.0, 3.0])
    def test_independent_reduces_to_marginal(self, alpha):
        px = build(FamilySpec.parse("poisson:lam=1.5"))
        py = build(FamilySpec.parse("binomial:n=3,p=0.4"))
        j = JointPmf.product(px, py)
        assert conditional_entropy(j, alpha) == pytest.approx(discrete_entropy(px, alpha), rel=1e-12)

    @pytest.mark.parametrize("alpha", [None, 0.5, 2.0])
    def test_fully_revealing_observation(self, alpha):
        j = JointPmf.diagonal(build(FamilySpec.parse("uniform:M=5")))
        assert conditional_entropy(j, alpha) == 0.0
