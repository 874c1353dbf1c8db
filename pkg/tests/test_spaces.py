from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhilbert.errors import DomainError
from genhilbert.spaces import (
    INF,
    ExtremalInf,
    ExtremalLp,
    PowerWeight,
    Unit,
    UnitBasis,
    W1,
    W1Bar,
    W2,
    W2Bar,
    WeightedSequence,
    dirichlet_norm,
    extremal_norm_interval,
    extremal_sequence_inf,
    extremal_sequence_lp,
    lemma26_sequence,
    make_generator,
    p_norm,
    parse_p,
    power_sum_interval,
    weight_equivalence_check,
    weight_value,
)
from genhilbert.special_fn import OperatorParams, pochhammer_shifted

mp.mp.dps = 40

CONFIGS = [OperatorParams(0, 0), OperatorParams(0, 1), OperatorParams(0.5, 1), OperatorParams(-0.3, 0.2)]


def params_st():
    return (
        st.tuples(st.floats(-0.9, 2.0), st.floats(-0.9, 2.0))
        .filter(lambda ab: ab[1] - ab[0] > -0.9)
        .map(lambda ab: OperatorParams(*ab))
    )


class TestParseP:
    def test_values(self):
        assert parse_p("inf") == INF
        assert parse_p(" INF ") == INF
        assert parse_p("2.5") == 2.5
        assert parse_p(1) == 1.0

    @pytest.mark.parametrize("bad", [0.5, "0.99", float("inf"), float("nan"), "abc"])
    def test_rejects(self, bad):
        with pytest.raises((DomainError, ValueError)):
            parse_p(bad)


class TestWeights:
    def test_examples(self):
        assert weight_value(W1(OperatorParams(0, 0), 2), 7) == 1.0
        assert weight_value(W2Bar(OperatorParams(0, 3)), 0) == 1.0
        expected = pochhammer_shifted(3, 0.5) ** -2 * pochhammer_shifted(3, 1)
        assert weight_value(W1(OperatorParams(0.5, 1), 2), 3) == pytest.approx(expected, rel=1e-13)

    def test_against_mpmath(self):
        P = OperatorParams(0.5, 1.0)
        m = 11
        rf = lambda x, s: mp.gamma(x + s) / mp.gamma(x)
        w1 = rf(m + 1, 0.5) ** -3 * rf(m + 1, 1)
        w2 = rf(m + 1.5, 0.5) ** -3 * rf(m + 1, 1)
        assert weight_value(W1(P, 3), m) == pytest.approx(float(w1), rel=1e-13)
        assert weight_value(W2(P, 3), m) == pytest.approx(float(w2), rel=1e-13)
        assert weight_value(W1Bar(P), m) == pytest.approx(float(1 / rf(m + 1, 0.5)), rel=1e-13)
        assert weight_value(W2Bar(P), m) == pytest.approx(float(1 / rf(m + 1.5, 0.5)), rel=1e-13)

    @given(params_st(), st.floats(1.0, 8.0))
    @settings(max_examples=50, deadline=None)
    def test_strictly_positive(self, params, p):
        m = np.arange(10**4 + 1)
        for spec in (W1(params, p), W2(params, p), W1Bar(params), W2Bar(params), Unit(), PowerWeight(-0.7)):
            vals = np.exp(spec.log_value(m))
            assert np.all(vals > 0) and np.all(np.isfinite(vals))

    def test_bad_p(self):
        with pytest.raises(DomainError):
            W1(OperatorParams(0, 0), 0.5)


class TestNorms:
    def test_examples(self):
        assert p_norm(WeightedSequence([3, 4], Unit(), 2)) == 5.0
        assert p_norm(WeightedSequence([1, 1, 1], Unit(), INF)) == 1.0
        assert p_norm(WeightedSequence([1, 2], PowerWeight(1), 1)) == pytest.approx(5.0, rel=1e-15)

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_unit_p2_is_euclidean(self, values):
        got = p_norm(WeightedSequence(values, Unit(), 2))
        assert got == pytest.approx(float(np.linalg.norm(values)), rel=1e-12, abs=1e-300)

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            WeightedSequence([], Unit(), 2)

    def test_dirichlet(self):
        assert dirichlet_norm([1, 1], 1) == pytest.approx(math.sqrt(2), rel=1e-15)
        for lam in (-1.0, 0.0, 0.5, 2.0):
            assert dirichlet_norm([1, 0, 0], lam) == 1.0
        assert dirichlet_norm([0, 1], 0) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_weight_equivalence(self):
        assert weight_equivalence_check(0, 10) == (1.0, 1.0)
        # (n+1)_1 = n+1 exactly, so s = 1 gives ratio 1; s = 2 gives (n+2)/(n+1)
        lo, hi = weight_equivalence_check(1, 1000)
        assert lo == pytest.approx(1.0, rel=1e-13) and hi == pytest.approx(1.0, rel=1e-13)
        lo, hi = weight_equivalence_check(2, 1000)
        assert hi == pytest.approx(2.0, rel=1e-13) and lo == pytest.approx(1002 / 1001, rel=1e-12)
        lo, hi = weight_equivalence_check(0.5, 1000)
        assert 0 < lo <= hi < math.inf and hi / lo < 2


class TestExtremal:
    def test_lp_examples(self):
        P = OperatorParams(0, 0)
        a = extremal_sequence_lp(P, 2, 0.1, 4)
        assert a[0] == 1.0
        assert a[3] == pytest.approx(4**-0.6, rel=1e-14)
        Q = OperatorParams(0.5, 1)
        expected = pochhammer_shifted(5, 0.5) * pochhammer_shifted(5, 1) ** -0.5 * (5 + 1 + 1) ** -(0.5 + 0.2)
        assert extremal_sequence_lp(Q, 2, 0.2, 6)[5] == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("eps", [0.0, 0.5, 0.7])
    def test_lp_epsilon_range(self, eps):
        with pytest.raises(DomainError):
            extremal_sequence_lp(OperatorParams(0, 0), 2, eps, 3)

    def test_inf_examples(self):
        assert np.all(extremal_sequence_inf(OperatorParams(0, 0), 10) == 1.0)
        assert extremal_sequence_inf(OperatorParams(1, 1), 5)[4] == pytest.approx(5.0, rel=1e-14)
        assert extremal_sequence_inf(OperatorParams(0.5, 1), 3)[2] == pytest.approx(pochhammer_shifted(2, 0.5), rel=1e-14)

    def test_lemma26_examples(self):
        assert lemma26_sequence(0, 1, 0.5, 0) == 1.0
        assert lemma26_sequence(0, 2, 0.25, 1) == pytest.approx(2**-1.5, rel=1e-15)
        assert lemma26_sequence(1, 2, 0.1, 3) == pytest.approx(5**-1.2, rel=1e-15)
        with pytest.raises(DomainError):
            lemma26_sequence(0, 2, 0.5, 1)

    @given(params_st(), st.floats(1.0, 6.0), st.floats(0.01, 0.99))
    @settings(max_examples=100, deadline=None)
    def test_weighted_power_telescopes(self, params, p, frac):
        eps = frac * (params.beta + 1) / p
        M = 500
        a = extremal_sequence_lp(params, p, eps, M)
        w1 = np.exp(W1(params, p).log_value(np.arange(M)))
        target = lemma26_sequence(params.beta, p, eps, np.arange(M))
        np.testing.assert_allclose(w1 * a**p, target, rtol=1e-11)


class TestCertifiedSums:
    @pytest.mark.parametrize("c, s", [(1.0, 2.0), (1.0, 1.2), (2.0, 1.01), (0.3, 3.5)])
    def test_power_sum_contains_hurwitz_zeta(self, c, s):
        iv = power_sum_interval(c, s)
        assert float(mp.zeta(s, c)) in iv
        assert iv.radius <= 1e-3 * iv.mid

    def test_extremal_norm(self):
        iv = extremal_norm_interval(OperatorParams(0, 0), 2, 0.1)
        assert math.sqrt(float(mp.zeta(1.2))) in iv

    def test_bad_input(self):
        with pytest.raises(DomainError):
            power_sum_interval(1.0, 1.0)


class TestGenerators:
    def test_ratio_sup_bounds_ratios(self):
        for P in CONFIGS:
            for p in (1.0, 2.0, 4.0):
                g = ExtremalLp(P, p, 0.5 * (P.beta + 1) / p)
                for K in (1, 10, 100, 1000):
                    m = np.arange(K, K + 2000, dtype=float)
                    ratios = np.exp(np.diff(g.log_terms(m)))
                    assert np.all(ratios <= g.ratio_sup(K) * (1 + 1e-14))
                h = ExtremalInf(P)
                m = np.arange(5, 500, dtype=float)
                assert np.all(np.exp(np.diff(h.log_terms(m))) <= h.ratio_sup(5) * (1 + 1e-14))

    def test_terms_match_functions(self):
        P = OperatorParams(0.5, 1)
        np.testing.assert_allclose(ExtremalLp(P, 2, 0.2).terms(20), extremal_sequence_lp(P, 2, 0.2, 20), rtol=1e-15)
        np.testing.assert_allclose(ExtremalInf(P).terms(20), extremal_sequence_inf(P, 20), rtol=1e-15)

    def test_unit_basis(self):
        g = make_generator("unit_basis:2", OperatorParams(0, 0))
        assert list(g.terms(4)) == [0.0, 0.0, 1.0, 0.0]
        assert g.support == 3 and g.ratio_sup(0) == 0.0
        assert isinstance(g, UnitBasis)

    @pytest.mark.parametrize("spec", ["bogus", "unit_basis:x", "extremal_lp"])
    def test_make_generator_errors(self, spec):
        with pytest.raises(DomainError):
            make_generator(spec, OperatorParams(0, 0), 2.0, None)
