import json
import math

import numpy as np
import pytest
from scipy import stats

from entbounds.dist import (
    DiscretePmf,
    FamilySpec,
    JointPmf,
    build,
    conditional_slice,
    load_joint,
    load_pmf,
    moment,
    parse_joint_csv,
    parse_pmf_text,
    support_length,
)
from entbounds.errors import DegenerateConditionError, ParameterError, ValidationError


class TestDiscretePmf:
    def test_sorts_and_drops_zeros(self):
        p = DiscretePmf(np.array([3, 1, 2]), np.array([0.5, 0.5, 0.0]))
        assert p.support.tolist() == [1, 3]
        assert p.probs.tolist() == [0.5, 0.5]

    def test_arrays_are_read_only(self):
        p = DiscretePmf(np.arange(2), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            p.probs[0] = 1.0

    @pytest.mark.parametrize(
        "support, probs",
        [
            ([0, 0], [0.5, 0.5]),
            ([0, 1], [1.5, -0.5]),
            ([], []),
            ([0.5, 1], [0.5, 0.5]),
            ([0, 1], [0.0, 0.0]),
            ([0, 1], [float("nan"), 1.0]),
        ],
    )
    def test_rejects_invalid(self, support, probs):
        with pytest.raises(ValidationError):
            DiscretePmf(np.array(support), np.array(probs))

    def test_from_pairs_checks_normalization(self):
        with pytest.raises(ValidationError):
            DiscretePmf.from_pairs([(0, 0.5), (1, 0.4)])
        p = DiscretePmf.from_pairs([(0, 1.0), (1, 1.0)], normalize=True)
        assert p.probs.tolist() == [0.5, 0.5]

    def test_mean_variance_shift(self):
        p = build(FamilySpec.parse("custom:0:0.5,1:0.25,2:0.25"))
        assert p.mean == 0.75
        assert p.variance == pytest.approx(0.6875, abs=1e-15)
        q = p.shifted(10)
        assert q.mean == pytest.approx(10.75)
        assert q.variance == pytest.approx(p.variance, abs=1e-14)
        assert support_length(q) == 2


class TestFamilies:
    def test_parse_alias_and_types(self):
        s = FamilySpec.parse("poisson:lambda=4")
        assert s.family == "poisson" and s.params == {"lam": 4.0}
        assert FamilySpec.parse("uniform:M=8,start=-3").params == {"M": 8, "start": -3}

    def test_parse_quoted_custom(self):
        s = FamilySpec.parse('custom:"0:0.5,1:0.25,2:0.25"')
        assert s.params["pairs"] == [(0, 0.5), (1, 0.25), (2, 0.25)]

    @pytest.mark.parametrize("text", ["nosuch:p=1", "poisson:lam", "poisson:lam=abc", "custom:0-0.5"])
    def test_parse_errors(self, text):
        with pytest.raises(ParameterError):
            FamilySpec.parse(text)

    def test_poisson_truncation(self):
        p = build(FamilySpec.parse("poisson:lam=2"))
        assert p.tail_mass_bound <= 1e-14
        # the last kept atom is the first point where the tail is at most 1e-14
        assert stats.poisson.sf(p.support[-1] - 1, 2.0) > 1e-14
        assert p.probs[0] == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_geometric(self):
        p = build(FamilySpec.parse("geometric:mu=2"))
        assert p.probs[0] == pytest.approx(1 / 3, rel=1e-12)
        assert p.mean == pytest.approx(2.0, abs=1e-10)
        assert p.tail_mass_bound <= 1e-14

    def test_binomial_matches_scipy(self):
        p = build(FamilySpec.parse("binomial:n=10,p=0.3"))
        np.testing.assert_allclose(p.probs, stats.binom.pmf(np.arange(11), 10, 0.3), rtol=1e-12)

    def test_uniform_and_bernoulli(self):
        u = build(FamilySpec.parse("uniform:M=4"))
        assert u.support.tolist() == [0, 1, 2, 3]
        b = build(FamilySpec.parse("bernoulli:p=0.25"))
        assert b.probs.tolist() == [0.75, 0.25]

    def test_zipf_log_power(self):
        p = build(FamilySpec.parse("zipf_log_power:s=2,K=100"))
        assert p.support[0] == 2 and p.support[-1] == 100
        w = (np.arange(2, 101) * np.log(np.arange(2, 101))) ** -2.0
        np.testing.assert_allclose(p.probs, w / w.sum(), rtol=1e-12)

    @pytest.mark.parametrize("text", ["bernoulli:p=1.5", "poisson:lam=0", "geometric:mu=-1", "uniform:M=0", "binomial:n=3"])
    def test_bad_parameters(self, text):
        with pytest.raises(ParameterError):
            build(FamilySpec.parse(text))


def test_moment():
    p = build(FamilySpec.parse("custom:-1:0.5,1:0.5"))
    assert moment(p, 2.0) == 1.0
    assert moment(p, 3.0, centered=True) == 1.0
    with pytest.raises(ParameterError):
        moment(p, 1.0, one_sided=True)


class TestJoint:
    def test_product_and_slices(self):
        px = build(FamilySpec.parse("custom:0:0.25,1:0.75"))
        py = build(FamilySpec.parse("uniform:M=3"))
        j = JointPmf.product(px, py)
        for _, c, w in j.slices():
            assert c == px
            assert w == pytest.approx(1 / 3)
        assert j.marginal_x().probs.tolist() == pytest.approx([0.25, 0.75])

    def test_conditional_slice_errors(self):
        j = JointPmf(np.arange(2), np.arange(2), np.array([[0.5, 0.0], [0.5, 0.0]]))
        with pytest.raises(DegenerateConditionError):
            conditional_slice(j, 1)
        with pytest.raises(DegenerateConditionError):
            conditional_slice(j, 7)
        c, w = conditional_slice(j, 0)
        assert w == 1.0 and c.probs.tolist() == [0.5, 0.5]

    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError):
            JointPmf(np.arange(2), np.arange(1), np.array([[0.5], [0.4]]))


class TestFiles:
    def test_text_and_json(self, tmp_path):
        a = parse_pmf_text("# comment\n0 0.5\n1 0.25  # inline\n2,0.25\n")
        b = parse_pmf_text(json.dumps([[0, 0.5], [1, 0.25], [2, 0.25]]))
        assert a == b
        f = tmp_path / "x.txt"
        f.write_text("3 1.0\n")
        assert load_pmf(f).support.tolist() == [3]

    @pytest.mark.parametrize("text", ["0 0.5 1\n", "a 1\n", "[[0]]", "[1, 2", "0 0.3\n1 0.3\n"])
    def test_text_errors(self, text):
        with pytest.raises(ValidationError):
            parse_pmf_text(text)

    def test_joint_csv(self, tmp_path):
        text = "x,0,1\n0,0.2,0.1\n1,0.3,0.05\n2,0.1,0.25\n"
        j = parse_joint_csv(text)
        assert j.x_support.tolist() == [0, 1, 2]
        assert j.y_support.tolist() == [0, 1]
        f = tmp_path / "j.csv"
        f.write_text(text)
        np.testing.assert_array_equal(load_joint(f).probs, j.probs)

    @pytest.mark.parametrize("text", ["x,0\n", "x,0,1\n0,0.5\n", "x,a\n0,1\n"])
    def test_joint_csv_errors(self, text):
        with pytest.raises(ValidationError):
            parse_joint_csv(text)
