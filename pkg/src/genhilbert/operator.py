"""The measure-induced generalized Hilbert operator on weighted sequence spaces.

Matrix entries are ``k(m, n) * int t**m (1-t)**n dmu(t)`` with row index n
(output) and column index m (input).  Finite inputs are applied exactly;
infinite generator inputs are summed with certified tail enclosures:

* atoms decay geometrically in m, and the ratio of consecutive terms is a
  product of monotone rational factors, so its supremum beyond the
  truncation point K is explicit and the tail is bounded by a geometric
  series;
* Beta densities decay like a power of m, and once the summand is convex
  and decreasing (checked on sample abscissae beyond K) the tail is
  enclosed by ``int_K f + f(K)/2 <= sum_{m>=K} f(m) <= int_{K-1/2} f``.

Norms for p = 2 come from finite sections by power iteration; for other p
the report brackets the norm between Rayleigh-type lower bounds and the
closed-form constant.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import BudgetExhaustedError, ConvergenceError, DomainError
from .measure import Atom, BetaComponent, Divergent, Finite, IntegralResult, Measure
from .measure import c_constant, c_constant_inf, log_moment
from .quadrature import gauss_kronrod
from .spaces import (
    INF,
    ExtremalInf,
    ExtremalLp,
    FiniteSequence,
    Interval,
    SequenceGenerator,
    W1,
    W1Bar,
    W2,
    W2Bar,
    WeightSpec,
    parse_p,
)
from .special_fn import OperatorParams, log_beta, log_kernel, log_pochhammer, safe_exp

logger = logging.getLogger(__name__)

__all__ = [
    "SectionMatrix",
    "IntervalVector",
    "DivergentSeriesError",
    "build_section",
    "apply",
    "apply_tail_bounded",
    "output_norm_interval",
    "output_norm_intervals",
    "two_norm_section",
    "rayleigh_ratio",
    "LowerBound",
    "lower_bound_sweep",
    "InfNormCheck",
    "inf_norm_check",
    "Verdict",
    "ReportConfig",
    "NormReport",
    "norm_report",
]

DEFAULT_MAX_TERMS = 10**6
# Upper end of the log-substituted tail quadrature; beyond it the power law
# asymptote is integrated in closed form.
_FAR_LOG = math.log(1e250)
_EPS = float(np.finfo(float).eps)


class DivergentSeriesError(BudgetExhaustedError):
    """The input series of some output row does not converge at all."""


# ---------------------------------------------------------------- sections


@dataclass(frozen=True)
class SectionMatrix:
    params: OperatorParams
    measure: Measure
    rows: int
    cols: int
    entries: np.ndarray = field(repr=False)

    def weighted(self, w1: WeightSpec, w2: WeightSpec) -> np.ndarray:
        """B[n][m] = w2(n)**(1/2) entries[n][m] w1(m)**(-1/2), the p = 2 form."""
        return _weighted_section(self, w1, w2)


def _log_entries(params: OperatorParams, measure: Measure, n, m):
    return log_kernel(m, n, params) + log_moment(measure, m, n)


def build_section(params: OperatorParams, measure: Measure, N: int, M: int) -> SectionMatrix:
    """The N x M leading block, entries[n][m] = k(m, n) * moment(m, n)."""
    if N < 1 or M < 1:
        raise DomainError("section sizes must be >= 1")
    n = np.arange(N, dtype=float)[:, None]
    m = np.arange(M, dtype=float)[None, :]
    entries = safe_exp(_log_entries(params, measure, n, m))
    return SectionMatrix(params, measure, N, M, entries)


def _weighted_section(section: SectionMatrix, w1: WeightSpec, w2: WeightSpec) -> np.ndarray:
    n = np.arange(section.rows, dtype=float)[:, None]
    m = np.arange(section.cols, dtype=float)[None, :]
    log_b = (
        0.5 * w2.log_value(n)
        + _log_entries(section.params, section.measure, n, m)
        - 0.5 * w1.log_value(m)
    )
    return safe_exp(log_b)


def _row_fsum(products: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(row) for row in products])


def apply(params: OperatorParams, measure: Measure, a, n_max: int) -> np.ndarray:
    """(H a)(n) for n = 0..n_max and a finitely supported ``a``.

    Rows are accumulated with exactly rounded summation, so the result is
    independent of evaluation order.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise DomainError("input sequence must be a nonempty vector")
    section = build_section(params, measure, n_max + 1, a.size)
    return _row_fsum(section.entries * a[None, :])


# ---------------------------------------------------------------- certified sums


@dataclass(frozen=True)
class IntervalVector:
    lo: np.ndarray
    hi: np.ndarray

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, i) -> Interval:
        return Interval(float(self.lo[i]), float(self.hi[i]))

    def __iter__(self):
        return (Interval(float(a), float(b)) for a, b in zip(self.lo, self.hi))


def _component_log(params, comp, generator):
    """log of the (n, m) summand for one measure component, real m and n."""
    if isinstance(comp, Atom):
        lt, l1t, lw = math.log(comp.t), math.log1p(-comp.t), math.log(comp.mass)

        def f(n, m):
            return log_kernel(m, n, params) + lw + m * lt + n * l1t + generator.log_terms(m)

    else:
        lc = math.log(comp.coef)

        def f(n, m):
            return (
                log_kernel(m, n, params)
                + lc
                + log_beta(m + comp.a, n + comp.b)
                + generator.log_terms(m)
            )

    return f


def _component_scale(params, comp, generator):
    """Rough magnitude of the log pieces that cancel in ``_component_log``.

    Rounding in a log-domain term is proportional to this scale, so it sets
    the per-term floating point pad.
    """
    b = abs(params.beta) + 2.0

    def core(n, m):
        small = np.minimum(m, n)
        return np.abs(log_kernel(m, n, params)) + 2.0 * gammaln(small + b) + np.abs(generator.log_terms(m))

    if isinstance(comp, Atom):
        lt, l1t, lw = math.log(comp.t), math.log1p(-comp.t), math.log(comp.mass)
        return lambda n, m: core(n, m) + abs(lw) + m * abs(lt) + n * abs(l1t)
    lc = math.log(comp.coef)
    return lambda n, m: (
        core(n, m) + abs(lc) + np.abs(log_beta(m + comp.a, n + comp.b)) + gammaln(np.minimum(m + comp.a, n + comp.b) + 1.0)
    )


def _decay_exponent(log_f, x: float) -> np.ndarray:
    """-d log f / d log x estimated between x and 2x."""
    return -(log_f(np.array([2.0 * x])) - log_f(np.array([x])))[0] / math.log(2.0)


def _power_tail_integral(log_f, K: float, rtol: float):
    """int_K^inf exp(log_f(x)) dx for each column of ``log_f``.

    ``log_f`` maps abscissae of shape (q,) to an array of shape (q, c).  The
    range [K, 1e250] is integrated in s = ln x; the remainder uses the power
    law asymptote with the decay exponent measured there.  Columns whose
    decay exponent is <= 1 are reported as infinite.
    """
    x_far = math.exp(_FAR_LOG)
    kappa = _decay_exponent(log_f, x_far)
    diverge = ~(kappa > 1.0 + 1e-12)
    value = np.full(kappa.shape, np.inf)
    err = np.zeros(kappa.shape)
    ok = ~diverge
    if not np.any(ok):
        return value, err
    cols = np.flatnonzero(ok)

    def integrand(s):
        return np.exp(log_f(np.exp(s))[:, cols] + s[:, None])

    main, main_err = gauss_kronrod(integrand, math.log(K), _FAR_LOG, rtol=rtol, max_intervals=20000)
    log_far = log_f(np.array([x_far]))[0, cols] + _FAR_LOG
    far = np.exp(log_far) / (kappa[cols] - 1.0)
    value[cols] = main + far
    # The far piece rests on the asymptote; charge it a generous relative slack.
    err[cols] = main_err + 1e-6 * far
    return value, err


def _is_convex_decreasing_beyond(log_f, x0: float) -> np.ndarray:
    """Check the summand decreasing and convex on sample points from x0 to ~1e30.

    A dense start (step 1/2) is followed by a geometric grid; both first and
    second divided differences are checked.  This is a sampled check, not a
    proof.
    """
    grid = np.concatenate([x0 + 0.5 * np.arange(9), (x0 + 4.0) * 1.25 ** np.arange(1, 320)])
    grid = grid[grid <= max(1e30, 8 * x0)]
    logs = log_f(grid)
    vals = np.exp(logs - logs[0])
    slopes = np.diff(vals, axis=0) / np.diff(grid)[:, None]
    decreasing = np.all(np.diff(logs, axis=0) < 0, axis=0)
    convex = np.all(np.diff(slopes, axis=0) >= -1e-12 * np.abs(slopes[:-1]), axis=0)
    return decreasing & convex


def _kernel_ratio_sup(params: OperatorParams, K: float, n: np.ndarray) -> np.ndarray:
    # k(m+1, n) / k(m, n) = (m+n+beta+1)/(m+alpha+1), monotone in m.
    at_k = (K + n + params.beta + 1.0) / (K + params.alpha + 1.0)
    return np.maximum(at_k, 1.0)


def _round_pad(total: np.ndarray, terms: int) -> np.ndarray:
    return total * 4e-16 * (math.log2(max(terms, 1)) + 4.0)


def _block_sum(f, g, n, m):
    """Row sums of exp(f) over a block plus the per-term rounding pad."""
    with np.errstate(divide="ignore"):
        terms = safe_exp(f(n[:, None], m))
    scale = np.where(terms > 0, g(n[:, None], m), 0.0)
    return _row_sum(terms), 2 * _EPS * _row_sum(terms * (1.0 + scale))


def _certify_rows(params, measure, generator, n, tol, max_terms, start_terms=64):
    comps = [*measure.atoms, *measure.densities]
    logs = [_component_log(params, c, generator) for c in comps]
    scales = [_component_scale(params, c, generator) for c in comps]
    rows = n.size
    if generator.support is not None:
        m = np.arange(generator.support, dtype=float)[None, :]
        total = np.zeros(rows)
        term_pad = np.zeros(rows)
        for f, g in zip(logs, scales):
            s, e = _block_sum(f, g, n, m)
            total += s
            term_pad += e
        pad = _round_pad(total, generator.support) + term_pad
        return total - pad, total + pad

    partial = np.zeros(rows)
    term_pad = np.zeros(rows)
    K = 0
    K_new = min(start_terms, max_terms)
    while True:
        m = np.arange(K, K_new, dtype=float)[None, :]
        for f, g in zip(logs, scales):
            s, e = _block_sum(f, g, n, m)
            partial += s
            term_pad += e
        K = K_new
        tail_lo = np.zeros(rows)
        tail_hi = np.zeros(rows)
        ok = np.ones(rows, dtype=bool)
        for comp, f in zip(comps, logs):
            log_at_k = f(n, np.full(rows, float(K)))
            at_k = np.exp(log_at_k)
            if isinstance(comp, Atom):
                ratio = comp.t * _kernel_ratio_sup(params, K, n) * generator.ratio_sup(K)
                good = ratio < 1.0
                ok &= good
                tail_lo += at_k
                tail_hi += np.where(good, at_k / np.where(good, 1.0 - ratio, 1.0), np.inf)
            else:
                # Convex decreasing summand: trapezoid and midpoint comparison give
                # int_K f + f(K)/2 <= sum_{m>=K} f(m) <= int_{K-1/2} f, width ~ f(K)/K.
                if np.any(~ok) or np.any(at_k > 10.0 * K * tol * partial):
                    ok[:] = False
                    continue

                def log_cols(x, f=f):
                    return f(n[None, :], np.asarray(x, dtype=float)[:, None])

                integral, err = _power_tail_integral(log_cols, float(K), rtol=min(1e-10, tol / 20))
                if np.any(~np.isfinite(integral)):
                    bad = int(n[np.flatnonzero(~np.isfinite(integral))[0]])
                    raise DivergentSeriesError(
                        f"input series for row n={bad} diverges (summand decays no faster than 1/m)"
                    )
                half, half_err = gauss_kronrod(
                    lambda x, la=log_at_k: np.exp(log_cols(x) - la), K - 0.5, float(K), rtol=1e-12
                )
                half, half_err = half * at_k, half_err * at_k
                ok &= _is_convex_decreasing_beyond(log_cols, K - 0.5)
                tail_lo += np.maximum(integral - err + 0.5 * at_k, 0.0)
                tail_hi += half + half_err + integral + err
        pad = _round_pad(partial, K) + term_pad
        lo = partial - pad + tail_lo
        hi = partial + pad + tail_hi
        if np.any(2.0 * pad > tol * hi):
            worst = int(n[np.argmax(pad / hi)])
            raise BudgetExhaustedError(
                f"certified row sum for n={worst}: rounding alone exceeds relative width {tol:g}"
            )
        if np.all(ok & (hi - lo <= tol * hi)):
            return lo, hi
        if K >= max_terms:
            worst = int(n[np.argmax(np.where(ok, (hi - lo) / hi, np.inf))])
            raise BudgetExhaustedError(
                f"certified row sum for n={worst} did not reach relative width {tol:g} "
                f"within {max_terms} terms"
            )
        K_new = min(2 * K, max_terms)


def _row_sum(block: np.ndarray) -> np.ndarray:
    return np.sum(block, axis=1)


def apply_tail_bounded(
    params: OperatorParams,
    measure: Measure,
    generator: SequenceGenerator,
    n_max: int,
    tol: float = 1e-10,
    max_terms: int = DEFAULT_MAX_TERMS,
    row_chunk: int = 64,
) -> IntervalVector:
    """Enclosures [lo, hi] of (H a)(n), n = 0..n_max, for an infinite input.

    Every interval satisfies ``hi - lo <= tol * hi``.  Raises
    BudgetExhaustedError when some row needs more than ``max_terms`` terms.
    """
    if not tol > 0:
        raise DomainError("tol must be > 0")
    n_all = np.arange(n_max + 1, dtype=float)
    lo = np.empty_like(n_all)
    hi = np.empty_like(n_all)
    for start in range(0, n_all.size, row_chunk):
        sl = slice(start, start + row_chunk)
        lo[sl], hi[sl] = _certify_rows(params, measure, generator, n_all[sl], tol, max_terms)
    return IntervalVector(lo, hi)


def output_norm_interval(
    params: OperatorParams,
    measure: Measure,
    a,
    p: float,
    n_rows: int | None = None,
    weight: WeightSpec | None = None,
) -> Interval:
    """Enclosure of ||H a||_{p,w2} for a finite input vector.

    Rows below ``n_rows`` are summed exactly; the remaining rows are enclosed
    by integral comparison of the (real-index) summand, assumed convex and
    decreasing beyond ``n_rows`` and checked on a geometric grid.  For inputs
    with mixed signs only the upper end uses the tail (|H a| <= H|a|).
    """
    a = np.asarray(a, dtype=float)
    return output_norm_intervals(params, measure, a[None, :], p, n_rows, weight)[0]


def output_norm_intervals(
    params: OperatorParams,
    measure: Measure,
    A,
    p: float,
    n_rows: int | None = None,
    weight: WeightSpec | None = None,
) -> IntervalVector:
    """``output_norm_interval`` for every row of ``A``, sharing one tail quadrature."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        raise DomainError("input vectors must be nonempty")
    p = float(p)
    if weight is None:
        weight = W2(params, p)
    if n_rows is None:
        n_rows = max(64, 4 * A.shape[1])
    S = build_section(params, measure, n_rows, A.shape[1])
    log_w = weight.log_value(np.arange(n_rows, dtype=float))
    rows = np.abs(A @ S.entries.T)
    # each row is a dot product of length L: |error| <= (L+2) eps (|H||a|)(n)
    slack = (A.shape[1] + 2) * _EPS * (np.abs(A) @ S.entries.T)
    w = np.exp(log_w)[None, :]
    with np.errstate(divide="ignore"):
        lo = np.sum(w * np.maximum(rows - slack, 0.0) ** p, axis=1) * (1.0 - 4 * n_rows * _EPS)
        hi = np.sum(w * (rows + slack) ** p, axis=1) * (1.0 + 4 * n_rows * _EPS)

    live = np.flatnonzero(np.any(A != 0, axis=1))
    if live.size:
        m = np.arange(A.shape[1], dtype=float)
        with np.errstate(divide="ignore"):
            log_a = np.log(np.abs(A[live]))

        def log_g(x):
            x = np.asarray(x, dtype=float)
            ent = _log_entries(params, measure, x[:, None], m[None, :])
            row = logsumexp(ent[:, None, :] + log_a[None, :, :], axis=2)
            return weight.log_value(x)[:, None] + p * row

        integral, err = _power_tail_integral(log_g, float(n_rows), rtol=1e-10)
        finite = np.isfinite(integral)
        if not np.all(_is_convex_decreasing_beyond(log_g, n_rows - 0.5)[finite]):
            raise ConvergenceError("output tail is not convex decreasing beyond the explicit rows; raise n_rows")
        g_n = np.exp(log_g(np.array([float(n_rows)]))[0])
        half, half_err = gauss_kronrod(lambda x: np.exp(log_g(x)), n_rows - 0.5, float(n_rows), rtol=1e-13)
        signed = np.any(A[live] < 0, axis=1)
        tail_lo = np.where(finite & ~signed, np.maximum(integral - err + 0.5 * g_n, 0.0), 0.0)
        tail_hi = np.where(finite, half + half_err + integral + err, np.inf)
        lo[live] += tail_lo
        hi[live] += tail_hi
    return IntervalVector(lo ** (1 / p), hi ** (1 / p))


# ---------------------------------------------------------------- p = 2 sections


def _power_iteration(B: np.ndarray, x0: np.ndarray, rtol: float, max_iter: int) -> float:
    x = x0 / np.linalg.norm(x0)
    q_old = None
    for _ in range(max_iter):
        y = B @ x
        q = float(y @ y)
        z = B.T @ y
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return 0.0
        if q_old is not None and abs(q - q_old) < rtol * q:
            return math.sqrt(q)
        q_old = q
        x = z / nz
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps",
        bracket=(math.sqrt(min(q, q_old)), math.sqrt(max(q, q_old))),
    )


def two_norm_section(
    params: OperatorParams,
    measure: Measure,
    p2_weights: tuple[WeightSpec, WeightSpec] | None = None,
    N: int = 64,
    rtol: float = 1e-12,
    max_iter: int = 10**5,
) -> float:
    """Largest singular value of the weighted N x N section (p = 2).

    Power iteration on B^T B from the all-ones start and from an alternating
    start; the larger Rayleigh value is returned.
    """
    if p2_weights is None:
        p2_weights = (W1(params, 2.0), W2(params, 2.0))
    w1, w2 = p2_weights
    for w in (w1, w2):
        if getattr(w, "p", 2.0) != 2.0:
            raise DomainError("two_norm_section needs p = 2 weights")
    B = build_section(params, measure, N, N).weighted(w1, w2)
    starts = [np.ones(N), (-1.0) ** np.arange(N)]
    return max(_power_iteration(B, x0, rtol, max_iter) for x0 in starts)


# ---------------------------------------------------------------- lower bounds


def _psi(measure: Measure, beta: float, b: float, shift: float) -> float:
    """int (1-t)**(b-beta-1) (t + shift)**(-b) dmu(t); inf if not integrable at 1."""
    terms = [
        a.mass * (1.0 - a.t) ** (b - beta - 1.0) * (a.t + shift) ** (-b) for a in measure.atoms
    ]
    for d in measure.densities:
        e1 = d.b + b - beta - 1.0
        if e1 <= 0:
            return math.inf
        terms.append(_density_integral(d.coef, d.a, e1, lambda t: (t + shift) ** (-b), shift))
    return math.fsum(terms)


def _density_integral(coef: float, a: float, e1: float, g, knee: float) -> float:
    """Lower end of int_0^1 coef t**(a-1) (1-t)**(e1-1) g(t) dt by quadrature."""
    pieces = []
    k0 = 1.0 / a if a < 1 else 1.0
    k1 = 1.0 / e1 if e1 < 1 else 1.0

    def near0(s):
        sk = s**k0
        return coef * k0 * s ** (k0 * a - 1.0) * (1.0 - sk) ** (e1 - 1.0) * g(sk)

    def near1(s):
        sk = s**k1
        return coef * k1 * s ** (k1 * e1 - 1.0) * (1.0 - sk) ** (a - 1.0) * g(1.0 - sk)

    up0 = 0.5**(1.0 / k0)
    knees = [knee ** (1.0 / k0) * f for f in (0.1, 1.0, 10.0)]
    val, err = gauss_kronrod(near0, 0.0, up0, rtol=1e-10, breakpoints=knees, max_intervals=20000)
    pieces.append(val - err)
    val, err = gauss_kronrod(near1, 0.0, 0.5 ** (1.0 / k1), rtol=1e-10, max_intervals=20000)
    pieces.append(val - err)
    return math.fsum(pieces)


def _extremal_output_tail_lower(
    params: OperatorParams,
    measure: Measure,
    p: float,
    epsilon: float,
    n_start: int,
    block_ratio: float = 1e-3,
    n_far: float = 1e300,
) -> float:
    """Lower bound of sum_{n >= n_start} w2(n) (H a)(n)**p for the extremal input.

    For every row, (H a)(n) >= (n+beta-alpha+1)_alpha * Phi(n) with
    Phi(n) = int (1-t)**(b-beta-1) (c + (n+d) t)**(-b) dmu, b = (beta+1)/p + eps
    (c = beta+1, d = 0 for beta >= 0; c = 1, d = beta otherwise); this
    follows from bounding a_m below by a power of m, writing that power as
    a Laplace integral, summing the generating series of the kernel in closed
    form and bounding (1-t)/(1-t e^-x) below by exp(-t x/(1-t)).  Then
    (n+d)**b Phi(n) is nondecreasing in n, so one evaluation at the start
    of each dyadic range bounds all later rows, and the sum over n is
    bounded below blockwise with monotone factors.
    """
    be = params.beta
    b = (be + 1.0) / p + epsilon
    c, d = (be + 1.0, 0.0) if be >= 0 else (1.0, be)
    if n_start + d <= 0:
        n_start = 1
    # Psi(P) = (P+d)**b Phi(P) = int (1-t)**(b-beta-1) (t + c/(P+d))**(-b) dmu
    grid = [float(n_start)]
    while grid[-1] * 2 <= 1e15:
        grid.append(grid[-1] * 2)
    psi = np.array([_psi(measure, be, b, c / (P + d)) for P in grid])
    if np.any(~np.isfinite(psi)):
        return math.inf

    count = int(math.ceil(math.log(n_far / n_start) / math.log1p(block_ratio)))
    edges = np.unique(np.floor(n_start * (1.0 + block_ratio) ** np.arange(count + 1)))
    lo_e, hi_e = edges[:-1], edges[1:]
    # rows lo_e .. hi_e - 1 in each block
    log_poch = np.minimum(log_pochhammer(lo_e, be), log_pochhammer(hi_e - 1.0, be))
    log_pow = -b * p * np.log(hi_e - 1.0 + d)
    which = np.searchsorted(np.array(grid), lo_e, side="right") - 1
    log_psi = p * np.log(psi[which])
    log_blocks = np.log(hi_e - lo_e) + log_poch + log_pow + log_psi
    return math.fsum(np.exp(log_blocks))


def rayleigh_ratio(
    params: OperatorParams,
    measure: Measure,
    p,
    a,
    rows: int = 1024,
    tol: float = 1e-4,
    output_tail: bool = True,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> float:
    """Certified lower estimate of ||H a||_{p,w2} / ||a||_{p,w1}.

    ``a`` is a finite vector or a SequenceGenerator.  The numerator uses the
    lower ends of the certified row enclosures for the first ``rows`` rows;
    for the extremal family and ``output_tail`` the remaining rows contribute
    an analytic lower bound.  The denominator uses the upper end of the
    certified norm.  For p = inf the sup-weights are used.
    """
    p = parse_p(p)
    if isinstance(a, SequenceGenerator) and a.support is None:
        return _generator_ratio(params, measure, p, a, rows, tol, output_tail, max_terms)
    vec = a.terms(a.support) if isinstance(a, SequenceGenerator) else np.asarray(a, dtype=float)
    vec = np.abs(vec)
    if p == INF:
        w1, w2 = W1Bar(params), W2Bar(params)
        den = float(np.max(vec * np.exp(w1.log_value(np.arange(vec.size)))))
        out = apply(params, measure, vec, rows - 1)
        num = float(np.max(out * np.exp(w2.log_value(np.arange(rows)))))
    else:
        log_w1 = W1(params, p).log_value(np.arange(vec.size))
        nz = vec > 0
        den = math.fsum(np.exp(log_w1[nz] + p * np.log(vec[nz]))) ** (1 / p)
        out = apply(params, measure, vec, rows - 1)
        log_w2 = W2(params, p).log_value(np.arange(rows))
        pos = out > 0
        num = math.fsum(np.exp(log_w2[pos] + p * np.log(out[pos]))) ** (1 / p)
    if not den > 1e-300:
        raise DomainError("input norm underflows; ratio undefined")
    return num / den


def _generator_ratio(params, measure, p, gen, rows, tol, output_tail, max_terms):
    try:
        enc = apply_tail_bounded(params, measure, gen, rows - 1, tol=tol, max_terms=max_terms)
    except DivergentSeriesError:
        return math.inf
    n = np.arange(rows, dtype=float)
    if p == INF:
        if not isinstance(gen, ExtremalInf):
            raise DomainError("p = inf ratios need the extremal_inf generator or a finite vector")
        # ||a||_{inf, w1bar} = sup (m+1)_alpha**-1 (m+1)_alpha = 1
        return float(np.max(enc.lo * np.exp(W2Bar(params).log_value(n))))
    if not isinstance(gen, ExtremalLp):
        raise DomainError("finite-p ratios need the extremal_lp generator or a finite vector")
    log_w2 = W2(params, p).log_value(n)
    pos = enc.lo > 0
    num_p = math.fsum(np.exp(log_w2[pos] + p * np.log(enc.lo[pos])))
    if output_tail:
        num_p += _extremal_output_tail_lower(params, measure, p, gen.epsilon, rows)
    den = gen.norm_interval().hi
    return num_p ** (1 / p) / den


@dataclass(frozen=True)
class LowerBound:
    epsilon: float | None
    truncation: int
    ratio: float


def lower_bound_sweep(
    params: OperatorParams,
    measure: Measure,
    p: float,
    epsilon_schedule,
    truncation_schedule,
    tol: float = 1e-4,
    output_tail: bool = True,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> list[LowerBound]:
    """Rayleigh ratios of the extremal sequences over an (epsilon, rows) grid.

    Sorted by epsilon descending, then truncation ascending.
    """
    eps_list = sorted({float(e) for e in epsilon_schedule}, reverse=True)
    trunc_list = sorted({int(M) for M in truncation_schedule})
    if not eps_list or not trunc_list:
        raise DomainError("schedules must be nonempty")
    out = []
    for eps in eps_list:
        gen = ExtremalLp(params, float(p), eps)
        for M in trunc_list:
            ratio = rayleigh_ratio(
                params, measure, p, gen, rows=M, tol=tol, output_tail=output_tail, max_terms=max_terms
            )
            logger.debug("sweep eps=%g M=%d ratio=%.12g", eps, M, ratio)
            out.append(LowerBound(eps, M, ratio))
    return out


# ---------------------------------------------------------------- sup-norm case


@dataclass(frozen=True)
class InfNormCheck:
    computed_sup: Interval
    constant: IntegralResult
    rows: IntervalVector

    def __iter__(self):
        # unpacks as (computed_sup, constant)
        return iter((self.computed_sup, self.constant))


def inf_norm_check(
    params: OperatorParams,
    measure: Measure,
    n_cap: int = 50,
    tol: float = 1e-12,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> InfNormCheck:
    """sup_n w2bar(n) (H a)(n) for a_m = (m+1)_alpha, against the constant.

    Each weighted row should equal the constant individually, so the rows
    are returned alongside the supremum.
    """
    constant = c_constant_inf(measure, params.beta)
    if not constant.is_finite:
        raise DomainError(f"sup-norm constant diverges ({constant.endpoint.value})")
    enc = apply_tail_bounded(params, measure, ExtremalInf(params), n_cap, tol=tol, max_terms=max_terms)
    w = np.exp(W2Bar(params).log_value(np.arange(n_cap + 1, dtype=float)))
    rows = IntervalVector(enc.lo * w, enc.hi * w)
    sup = Interval(float(np.max(rows.lo)), float(np.max(rows.hi)))
    return InfNormCheck(sup, constant, rows)


# ---------------------------------------------------------------- report


class Verdict(str, enum.Enum):
    BOUNDED = "bounded_with_norm"
    UNBOUNDED = "unbounded_detected"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ReportConfig:
    epsilons: tuple[float, ...] = (0.2, 0.1, 0.05, 0.02, 0.005, 0.002)
    truncations: tuple[int, ...] = (256,)
    section_sizes: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128)
    tol: float = 1e-4
    growth_factor: float = 10.0
    inf_rows: int = 50
    max_terms: int = DEFAULT_MAX_TERMS


@dataclass(frozen=True)
class NormReport:
    constant: IntegralResult
    lower_bounds: list[LowerBound]
    section_curve: list[tuple[int, float]]
    verdict: Verdict

    @property
    def best_lower_bound(self) -> float | None:
        vals = [lb.ratio for lb in self.lower_bounds]
        return max(vals) if vals else None


def _usable_epsilons(beta: float, p: float, eps_list) -> list[float]:
    cap = (beta + 1.0) / p
    eps = [e for e in eps_list if 0 < e < cap]
    if not eps:
        eps = [cap * f for f in (0.5, 0.25, 0.1)]
    return eps


def _grew(ratios: list[float], factor: float) -> bool:
    finite = [r for r in ratios if math.isfinite(r)]
    if any(math.isinf(r) for r in ratios):
        return True
    return len(finite) >= 2 and finite[0] > 0 and max(finite) > factor * finite[0]


def norm_report(
    params: OperatorParams, measure: Measure, p, config: ReportConfig | None = None
) -> NormReport:
    """Constant (upper bound), lower bounds and, for p = 2, the section curve."""
    config = config or ReportConfig()
    p = parse_p(p)
    if p == INF:
        return _inf_report(params, measure, config)
    constant = c_constant(measure, params.beta, p)
    eps = _usable_epsilons(params.beta, p, config.epsilons)
    lower = lower_bound_sweep(
        params, measure, p, eps, config.truncations, tol=config.tol, max_terms=config.max_terms
    )
    curve = []
    if p == 2.0:
        curve = [(N, two_norm_section(params, measure, None, N)) for N in config.section_sizes]
    if constant.is_finite:
        verdict = Verdict.BOUNDED
    else:
        ratios = [lb.ratio for lb in lower]
        if _grew(ratios, config.growth_factor):
            verdict = Verdict.UNBOUNDED
        else:
            verdict = Verdict.INCONCLUSIVE
    return NormReport(constant, lower, curve, verdict)


def _inf_report(params, measure, config) -> NormReport:
    constant = c_constant_inf(measure, params.beta)
    if constant.is_finite:
        check = inf_norm_check(params, measure, config.inf_rows, tol=1e-10, max_terms=config.max_terms)
        lower = [LowerBound(None, config.inf_rows, check.computed_sup.lo)]
        return NormReport(constant, lower, [], Verdict.BOUNDED)
    # Truncations of (m+1)_alpha have unit sup-norm; watch the output grow.
    lower = []
    for M in sorted(set(config.truncations) | {M * 8 for M in config.truncations}):
        a = np.exp(log_pochhammer(np.arange(M, dtype=float), params.alpha))
        lower.append(LowerBound(None, M, rayleigh_ratio(params, measure, INF, a, rows=config.inf_rows)))
    ratios = [lb.ratio for lb in lower]
    verdict = Verdict.UNBOUNDED if _grew(ratios, config.growth_factor) else Verdict.INCONCLUSIVE
    return NormReport(constant, lower, [], verdict)
