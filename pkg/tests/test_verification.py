from __future__ import annotations

import math

import mpmath as mp
import pytest

from genhilbert.errors import BudgetExhaustedError, ConvergenceError, DomainError
from genhilbert.special_fn import OperatorParams
from genhilbert.verification import (
    CHECK_NAMES,
    DEFAULT_CONFIGS,
    CheckResult,
    check_classical_hilbert,
    check_lemma21,
    check_lemma22_col,
    check_lemma22_row,
    check_lemma23,
    check_lemma24,
    check_lemma25,
    check_lemma26,
    check_operator_row_identity,
    run_suite,
)

mp.mp.dps = 40

T_GRID = [round(0.05 * i, 2) for i in range(1, 20)]


class TestKernelForms:
    def test_hilbert_small(self):
        r = check_lemma21(OperatorParams(0, 0), 40, 40)
        assert r.passed and r.samples == 41 * 41
        assert r.worst_residual <= 1e-11

    @pytest.mark.parametrize("ab", DEFAULT_CONFIGS)
    def test_default_configs(self, ab):
        assert check_lemma21(OperatorParams(*ab)).passed

    def test_accepts_tuple(self):
        assert check_lemma21((0.5, 1.0), 10, 10).passed


class TestRowColumnIdentities:
    def test_geometric_examples(self):
        r = check_lemma22_row(OperatorParams(0, 0), 0.5, 0)
        assert r.passed and r.worst_residual < 1e-14
        c = check_lemma22_col(OperatorParams(0, 0), 0.5, 0)
        assert c.passed and c.worst_residual < 1e-14

    @pytest.mark.parametrize("ab", DEFAULT_CONFIGS)
    def test_default_grid(self, ab):
        P = OperatorParams(*ab)
        assert check_lemma22_row(P, T_GRID, [0, 1, 5, 20]).worst_residual <= 1e-8
        assert check_lemma22_col(P, T_GRID, [0, 1, 5, 20]).worst_residual <= 1e-8

    def test_column_form_has_no_extra_power(self):
        # independent high-precision column sum; the closed form carries no t**m factor
        al, be, t, m = mp.mpf(0.5), mp.mpf(1), mp.mpf(0.3), 4

        def term(n):
            k = mp.gamma(n + m + be + 1) / (mp.gamma(m + al + 1) * mp.gamma(n + be - al + 1))
            return k * (1 - t) ** n * mp.rf(n + 1, be - al)

        total = mp.nsum(term, [0, mp.inf])
        closed = t ** (-m - be - 1) * mp.rf(m + al + 1, be - al)
        assert abs(total / closed - 1) < 1e-25
        assert abs(total / (closed * t**m) - 1) > 0.5

    def test_endpoint_budget(self):
        with pytest.raises(BudgetExhaustedError):
            check_lemma22_row(OperatorParams(0, 0), 0.9999, 5, max_terms=2048)

    def test_bad_t(self):
        with pytest.raises(DomainError):
            check_lemma22_col(OperatorParams(0, 0), 1.0, 0)


class TestInequalities:
    def test_lemma23_default(self):
        r = check_lemma23()
        assert r.passed and r.samples == 101 * 100

    def test_lemma23_equality_at_zero(self):
        r = check_lemma23([0.0], [0.0, 0.3, 0.9])
        assert r.passed and r.worst_residual == 0.0

    def test_lemma24_default(self):
        r = check_lemma24()
        assert r.passed and r.worst_residual <= 1e-8 and r.samples == 16

    def test_lemma24_exponential(self):
        assert check_lemma24([1.0], [1.0]).worst_residual < 1e-12

    def test_lemma24_domain(self):
        with pytest.raises(DomainError):
            check_lemma24([0.0], [1.0])

    def test_lemma25_default(self):
        r = check_lemma25()
        assert r.passed and r.samples == 5 * (10**4 + 1)

    def test_lemma25_equality_at_zero(self):
        assert check_lemma25(100, [0.0]).worst_residual == 0.0

    def test_lemma25_domain(self):
        with pytest.raises(DomainError):
            check_lemma25(10, [-1.0])


class TestTailMass:
    def test_example(self):
        eps, r = check_lemma26(0.0, 2.0, 0.5, 1)
        assert 0 < eps < 0.5 and r.passed

    @pytest.mark.parametrize("rho", [0.1, 0.25, 0.4])
    @pytest.mark.parametrize("N", [5, 20, 100])
    def test_grid(self, rho, N):
        eps, r = check_lemma26(0.0, 2.0, rho, N)
        assert r.passed
        # independent check at the returned eps: head <= rho * zeta(s, beta+1)
        s = 1 + 2 * eps
        head = mp.fsum(mp.mpf(n + 1) ** -s for n in range(N + 1))
        assert head <= rho * mp.zeta(s, 1)

    def test_other_parameters(self):
        eps, r = check_lemma26(1.0, 1.0, 0.1, 100)
        assert r.passed and eps < 0.05
        eps_easy, _ = check_lemma26(0.0, 2.0, 0.99, 1)
        assert eps_easy >= 0.25

    def test_smaller_rho_needs_smaller_eps(self):
        e1, _ = check_lemma26(0.0, 2.0, 0.4, 20)
        e2, _ = check_lemma26(0.0, 2.0, 0.1, 20)
        assert e2 <= e1

    def test_domain(self):
        with pytest.raises(DomainError):
            check_lemma26(0.0, 2.0, 1.0, 5)
        with pytest.raises(DomainError):
            check_lemma26(0.0, 2.0, 0.5, 0)


class TestOperatorChecks:
    def test_classical_hilbert(self):
        r = check_classical_hilbert()
        assert r.passed and r.worst_residual <= 1e-10

    @pytest.mark.parametrize("ab", DEFAULT_CONFIGS)
    def test_row_identity(self, ab):
        r = check_operator_row_identity(OperatorParams(*ab))
        assert r.passed and r.samples == 2 * 51


class TestSuite:
    def test_full_suite_passes(self):
        results = run_suite()
        assert [r.name for r in results] == list(CHECK_NAMES)
        failed = [r for r in results if not r.passed]
        assert not failed, failed

    def test_only(self):
        results = run_suite(only=["lemma23", "lemma25"])
        assert [r.name for r in results] == ["lemma23", "lemma25"]

    def test_tolerance_override_can_fail(self):
        (r,) = run_suite(only=["lemma21"], tol=1e-20)
        assert isinstance(r, CheckResult)
        assert not r.passed and r.tolerance == 1e-20 and r.worst_residual > 1e-20

    def test_impossible_tolerance_reports_instead_of_raising(self):
        (r,) = run_suite(only=["lemma24"], tol=1e-30)
        assert not r.passed
        assert math.isfinite(r.worst_residual) or r.worst_residual == math.inf

    def test_unknown_name(self):
        with pytest.raises(DomainError):
            run_suite(only=["lemma99"])

    def test_row_identity_tight_tolerance_reports(self):
        (r,) = run_suite(only=["operator_row_identity"], tol=1e-20)
        assert not r.passed

    def test_search_exhaustion_is_an_error(self):
        # the head alone exceeds a vanishing fraction of the total for every eps tried
        with pytest.raises(ConvergenceError):
            check_lemma26(0.0, 2.0, 1e-300, 10)
