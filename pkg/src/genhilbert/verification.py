"""Numerical checks of the identities and inequalities behind the operator.

Each check scans a grid, records the worst residual and where it occurred,
and passes exactly when that residual is within the check's tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhaustedError, ConvergenceError, DomainError
from .measure import atom_measure, c_constant, lebesgue
from .operator import inf_norm_check, rayleigh_ratio, two_norm_section
from .quadrature import gauss_kronrod
from .spaces import ExtremalLp, power_sum_interval
from .special_fn import OperatorParams, log_kernel, log_pochhammer

__all__ = [
    "CheckResult",
    "check_lemma21",
    "check_lemma22_row",
    "check_lemma22_col",
    "check_lemma23",
    "check_lemma24",
    "check_lemma25",
    "check_lemma26",
    "check_classical_hilbert",
    "check_operator_row_identity",
    "DEFAULT_CONFIGS",
    "CHECK_NAMES",
    "run_suite",
]

DEFAULT_CONFIGS = ((0.0, 0.0), (0.0, 1.0), (0.5, 1.0), (-0.3, 0.2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_residual: float
    worst_input: str
    samples: int
    tolerance: float


class _Worst:
    """Running maximum of residuals with the input that produced it."""

    def __init__(self, name: str, tol: float):
        self.name, self.tol = name, tol
        self.residual = 0.0
        self.where = "none"
        self.samples = 0

    def add(self, residual: float, where: str, count: int = 1):
        self.samples += count
        if not residual <= self.residual:  # also catches nan
            self.residual = residual if residual == residual else math.inf
            self.where = where

    def result(self) -> CheckResult:
        return CheckResult(
            self.name, bool(self.residual <= self.tol), float(self.residual), self.where, self.samples, self.tol
        )


def _as_params(params) -> OperatorParams:
    return params if isinstance(params, OperatorParams) else OperatorParams(*params)


def _grid(values) -> list[float]:
    return [float(v) for v in np.atleast_1d(values)]


# ---------------------------------------------------------------- kernel forms


def _binomial_table(gammas: np.ndarray, k_max: int) -> np.ndarray:
    """binom(gamma, k) for k = 0..k_max, one row per gamma, by the running product."""
    i = np.arange(k_max, dtype=float)
    factors = (gammas[:, None] - i[None, :]) / (i[None, :] + 1.0)
    return np.concatenate([np.ones((gammas.size, 1)), np.cumprod(factors, axis=1)], axis=1)


def check_lemma21(params, m_max: int = 100, n_max: int = 100, tol: float = 1e-11) -> CheckResult:
    """kernel() against both binomial rewrites for all m <= m_max, n <= n_max.

    The rewrites are tabulated with the same running products as
    ``kernel_alt_forms``; the Gamma-ratio kernel is the independent side.
    """
    params = _as_params(params)
    al, be = params.alpha, params.beta
    m = np.arange(m_max + 1, dtype=float)
    n = np.arange(n_max + 1, dtype=float)
    k = np.exp(log_kernel(m[None, :], n[:, None], params))
    sign_m = (-1.0) ** m
    sign_n = (-1.0) ** n
    # rows indexed by n, columns by m
    m_form = (
        sign_m[None, :]
        * _binomial_table(-n - be - 1.0, m_max)
        / np.exp(log_pochhammer(m, al))[None, :]
        * np.exp(log_pochhammer(n + be - al, al))[:, None]
    )
    n_form = (
        sign_n[:, None]
        * _binomial_table(-m - be - 1.0, n_max).T
        / np.exp(log_pochhammer(n, be - al))[:, None]
        * np.exp(log_pochhammer(m + al, be - al))[None, :]
    )
    res = np.maximum(np.abs(m_form - k), np.abs(n_form - k)) / k
    ni, mi = np.unravel_index(int(np.argmax(res)), res.shape)
    worst = _Worst("lemma21", tol)
    worst.add(float(res[ni, mi]), f"alpha={al} beta={be} m={mi} n={ni}", res.size)
    return worst.result()


# ---------------------------------------------------------------- series identities


def _geometric_series(log_term, ratio_sup, rel: float, max_terms: int, block: int = 1024):
    """Enclose sum_{j>=0} exp(log_term(j)) given sup ratios of consecutive terms.

    ``ratio_sup(K)`` bounds term(j+1)/term(j) for all j >= K.
    """
    total = 0.0
    K = 0
    while True:
        j = np.arange(K, K + block, dtype=float)
        total += math.fsum(np.exp(log_term(j)))
        K += block
        R = ratio_sup(K)
        if R < 1.0:
            first = math.exp(log_term(np.array([float(K)]))[0])
            tail_hi = first / (1.0 - R)
            if tail_hi <= rel * total:
                return total + first, total + tail_hi
        if K >= max_terms:
            raise BudgetExhaustedError(f"series did not settle within {max_terms} terms")


def _lemma22_row_series(params, t, n, rel, max_terms):
    al, be = params.alpha, params.beta
    lt = math.log(t)

    def log_term(m):
        return log_kernel(m, n, params) + m * lt + log_pochhammer(m, al)

    # term(m+1)/term(m) = t (m+n+beta+1)/(m+1), monotone in m
    def ratio_sup(K):
        return t * max((K + n + be + 1.0) / (K + 1.0), 1.0)

    lo, hi = _geometric_series(log_term, ratio_sup, rel, max_terms)
    closed = math.exp((-n - be - 1.0) * math.log1p(-t) + log_pochhammer(n + be - al, al))
    return lo, hi, closed


def _lemma22_col_series(params, t, m, rel, max_terms):
    al, be = params.alpha, params.beta
    l1t = math.log1p(-t)

    def log_term(n):
        return log_kernel(m, n, params) + n * l1t + log_pochhammer(n, be - al)

    # term(n+1)/term(n) = (1-t) (n+m+beta+1)/(n+1)
    def ratio_sup(K):
        return (1.0 - t) * max((K + m + be + 1.0) / (K + 1.0), 1.0)

    lo, hi = _geometric_series(log_term, ratio_sup, rel, max_terms)
    closed = math.exp((-m - be - 1.0) * math.log(t) + log_pochhammer(m + al, be - al))
    return lo, hi, closed


def _lemma22(name, series, params, t, idx, tol, max_terms, label):
    params = _as_params(params)
    worst = _Worst(name, tol)
    for tv, iv in itertools.product(_grid(t), _grid(idx)):
        if not 0 < tv < 1:
            raise DomainError(f"t must lie in (0, 1), got {tv!r}")
        lo, hi, closed = series(params, tv, iv, max(1e-4 * min(tol, 1e-10), 1e-18), max_terms)
        res = max(abs(lo - closed), abs(hi - closed)) / closed
        worst.add(res, f"alpha={params.alpha} beta={params.beta} t={tv:g} {label}={iv:g}")
    return worst.result()


def check_lemma22_row(params, t, n, tol: float = 1e-8, max_terms: int = 10**6) -> CheckResult:
    """sum_m k(m,n) t**m (m+1)_alpha against (1-t)**(-n-beta-1) (n+beta-alpha+1)_alpha.

    ``t`` and ``n`` may be scalars or grids (all combinations are checked).
    """
    return _lemma22("lemma22_row", _lemma22_row_series, params, t, n, tol, max_terms, "n")


def check_lemma22_col(params, t, m, tol: float = 1e-8, max_terms: int = 10**6) -> CheckResult:
    """sum_n k(m,n) (1-t)**n (n+1)_{beta-alpha} against t**(-m-beta-1) (m+alpha+1)_{beta-alpha}."""
    return _lemma22("lemma22_col", _lemma22_col_series, params, t, m, tol, max_terms, "m")


# ---------------------------------------------------------------- inequalities


def check_lemma23(x_grid=None, t_grid=None, tol: float = 1e-14) -> CheckResult:
    """(1-t)/(1 - t e**-x) >= exp(-t x/(1-t)) on the grid; residual is the negative slack."""
    x = np.arange(0.0, 50.0 + 1e-9, 0.5) if x_grid is None else np.asarray(x_grid, dtype=float)
    t = np.round(np.arange(0.0, 0.99 + 1e-9, 0.01), 12) if t_grid is None else np.asarray(t_grid, dtype=float)
    X, T = np.meshgrid(x, t, indexing="ij")
    lhs = (1.0 - T) / (1.0 - T * np.exp(-X))
    rhs = np.exp(-T * X / (1.0 - T))
    slack = lhs - rhs
    i = np.unravel_index(int(np.argmin(slack)), slack.shape)
    worst = _Worst("lemma23", tol)
    worst.add(max(0.0, -float(slack[i])), f"x={X[i]:g} t={T[i]:g}", slack.size)
    return worst.result()


def _gamma_integral(y: float, z: float, rtol: float):
    """int_0^inf e**(-y x) x**(z-1) dx as (value, error bound incl. truncation)."""
    # Truncate at X where the tail bound is negligible; X >= 2(z-1)/y keeps it valid.
    target = 1e-3 * rtol * math.gamma(z) * y ** (-z)
    X = max(1.0, 2.0 * max(z - 1.0, 0.0) / y)
    while (2.0 / y) * X ** (z - 1.0) * math.exp(-y * X) > target:
        X *= 1.5
    tail = (2.0 / y) * X ** (z - 1.0) * math.exp(-y * X)
    k = 1.0 / z if z < 1 else 1.0

    def integrand(s):
        return k * s ** (k * z - 1.0) * np.exp(-y * s**k)

    val, err = gauss_kronrod(integrand, 0.0, X ** (1.0 / k), rtol=min(1e-13, max(rtol, 1e-14)))
    return val, err + tail


def check_lemma24(y_grid=(0.5, 1.0, 2.0, 2.5), z_grid=(0.5, 1.0, 2.0, 2.5), quad_tol: float = 1e-8) -> CheckResult:
    """y**-z against the Laplace-type integral divided by Gamma(z)."""
    worst = _Worst("lemma24", quad_tol)
    for y, z in itertools.product(_grid(y_grid), _grid(z_grid)):
        if not (y > 0 and z > 0):
            raise DomainError("lemma24 needs y, z > 0")
        val, err = _gamma_integral(y, z, quad_tol)
        exact = y ** (-z)
        res = (abs(val / math.gamma(z) - exact) + err / math.gamma(z)) / exact
        worst.add(res, f"y={y:g} z={z:g}")
    return worst.result()


def check_lemma25(n_max: int = 10**4, s_grid=(-0.9, -0.5, 0.5, 2.0, 3.7), tol: float = 1e-12) -> CheckResult:
    """(n+1)_s <= (n+s+1)**s for s >= 0 and <= (n+1)**(s+1)/(n+s+1) for -1 < s < 0.

    Compared in logs, so the slack is relative.
    """
    n = np.arange(n_max + 1, dtype=float)
    worst = _Worst("lemma25", tol)
    for s in _grid(s_grid):
        if not s > -1:
            raise DomainError(f"lemma25 needs s > -1, got {s!r}")
        lhs = log_pochhammer(n, s)
        if s >= 0:
            rhs = s * np.log(n + s + 1.0)
        else:
            rhs = (s + 1.0) * np.log1p(n) - np.log(n + s + 1.0)
        slack = rhs - lhs
        i = int(np.argmin(slack))
        worst.add(max(0.0, -float(slack[i])), f"s={s:g} n={i}", n.size)
    return worst.result()


def check_lemma26(beta: float = 0.0, p: float = 2.0, rho: float = 0.5, N: int = 1) -> tuple[float, CheckResult]:
    """Search eps = 2**-k for the tail-mass inequality of (n+beta+1)**(-1-p eps).

    Success at eps means sum_{n<=N} a_n <= rho * (certified lower end of the
    full sum).  Returns the largest succeeding eps; every smaller eps tried
    must also succeed.  The residual is the worst excess of the head fraction
    over rho among those smaller eps.
    """
    if not (0 < rho < 1 and N >= 1 and beta > -1 and p >= 1):
        raise DomainError("lemma26 needs 0 < rho < 1, N >= 1, beta > -1, p >= 1")
    name = f"lemma26[beta={beta:g},p={p:g},rho={rho:g},N={N}]"
    worst = _Worst(name, 0.0)
    found = None
    cap = (beta + 1.0) / p
    for k in range(1, 41):
        eps = 2.0**-k
        if eps >= cap:
            continue
        s = 1.0 + p * eps
        head = math.fsum(np.power(np.arange(N + 1, dtype=float) + beta + 1.0, -s))
        total = power_sum_interval(beta + 1.0, s).lo
        excess = head / total - rho
        if found is None:
            if excess <= 0:
                found = eps
                worst.add(0.0, f"eps=2^-{k}")
        else:
            worst.add(max(0.0, excess), f"eps=2^-{k}")
    if found is None:
        raise ConvergenceError(f"{name}: no eps = 2^-k, k <= 40, satisfies the inequality")
    return found, worst.result()


# ---------------------------------------------------------------- operator level


def check_classical_hilbert(p_grid=(1.25, 1.5, 2.0, 3.0, 4.0), N: int = 64, M_truncation: int = 256, tol: float = 1e-10) -> CheckResult:
    """Lebesgue constant at beta = 0 against pi csc(pi/p), and the data below it.

    The residual combines the relative error of the constant and the relative
    excess of a section norm (p = 2) or extremal Rayleigh ratio over it.
    """
    params = OperatorParams(0.0, 0.0)
    mu = lebesgue()
    worst = _Worst("classical_hilbert", tol)
    for p in _grid(p_grid):
        if not 1 < p < math.inf:
            raise DomainError(f"p must lie in (1, inf), got {p!r}")
        exact = math.pi / math.sin(math.pi / p)
        c = c_constant(mu, 0.0, p)
        worst.add(abs(c.value - exact) / exact, f"constant p={p:g}")
        eps = min(0.05, 0.5 / p)
        r = rayleigh_ratio(params, mu, p, ExtremalLp(params, p, eps), rows=M_truncation)
        worst.add(max(0.0, r / exact - 1.0), f"rayleigh p={p:g} eps={eps:g}")
        if p == 2.0:
            s = two_norm_section(params, mu, None, N)
            worst.add(max(0.0, s / exact - 1.0), f"section N={N}")
    return worst.result()


def check_operator_row_identity(params, atoms=((0.5, 1.0), (0.25, 2.0)), n_max: int = 50, tol: float = 1e-10) -> CheckResult:
    """Operator rows on a_m = (m+1)_alpha against the sup-norm constant, per atom."""
    params = _as_params(params)
    worst = _Worst("operator_row_identity", tol)
    for t, w in atoms:
        check = inf_norm_check(params, atom_measure(t, w), n_max, tol=min(tol, 1e-11))
        c = check.constant.value
        dev = np.maximum(np.abs(check.rows.lo - c), np.abs(check.rows.hi - c)) / c
        i = int(np.argmax(dev))
        worst.add(float(dev[i]), f"alpha={params.alpha} beta={params.beta} atom=({t:g},{w:g}) n={i}", dev.size)
    return worst.result()


# ---------------------------------------------------------------- suite

CHECK_NAMES = (
    "lemma21",
    "lemma22_row",
    "lemma22_col",
    "lemma23",
    "lemma24",
    "lemma25",
    "lemma26",
    "classical_hilbert",
    "operator_row_identity",
)

_T_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
_IDX_GRID = (0, 1, 5, 20)
_LEMMA26_GRID = tuple(itertools.product((0.1, 0.25, 0.4), (5, 20, 100)))


def _merge(name: str, results: list[CheckResult]) -> CheckResult:
    worst = max(results, key=lambda r: (not r.passed, r.worst_residual))
    return CheckResult(
        name,
        all(r.passed for r in results),
        worst.worst_residual,
        worst.worst_input,
        sum(r.samples for r in results),
        worst.tolerance,
    )


def _run(name: str, tol: float | None) -> CheckResult:
    kw = {} if tol is None else {"tol": tol}
    if name == "lemma21":
        return _merge(name, [check_lemma21(c, **kw) for c in DEFAULT_CONFIGS])
    if name == "lemma22_row":
        return _merge(name, [check_lemma22_row(c, _T_GRID, _IDX_GRID, **kw) for c in DEFAULT_CONFIGS])
    if name == "lemma22_col":
        return _merge(name, [check_lemma22_col(c, _T_GRID, _IDX_GRID, **kw) for c in DEFAULT_CONFIGS])
    if name == "lemma23":
        return check_lemma23(**kw)
    if name == "lemma24":
        return check_lemma24(**({} if tol is None else {"quad_tol": tol}))
    if name == "lemma25":
        return check_lemma25(**kw)
    if name == "lemma26":
        results = []
        for rho, N in _LEMMA26_GRID:
            try:
                results.append(check_lemma26(0.0, 2.0, rho, N)[1])
            except ConvergenceError as exc:
                results.append(CheckResult(name, False, math.inf, str(exc), 40, 0.0))
        return _merge(name, results)
    if name == "classical_hilbert":
        return check_classical_hilbert(**kw)
    if name == "operator_row_identity":
        return _merge(name, [check_operator_row_identity(c, **kw) for c in DEFAULT_CONFIGS])
    raise DomainError(f"unknown check {name!r}; expected one of {', '.join(CHECK_NAMES)}")


def run_suite(only=None, tol: float | None = None) -> list[CheckResult]:
    """Run the default grids, optionally restricted to ``only`` and with a
    tolerance override applied to every check."""
    names = CHECK_NAMES if not only else list(only)
    out = []
    for name in names:
        try:
            out.append(_run(name, tol))
        except ConvergenceError as exc:
            out.append(CheckResult(name, False, math.inf, str(exc), 0, math.nan if tol is None else tol))
    return out
