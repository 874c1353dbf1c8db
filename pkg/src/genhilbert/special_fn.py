"""Log-domain Gamma-family evaluators behind the generalized Hilbert kernel.

Everything here works on scalars and, where noted, on numpy arrays.  Values
that can overflow (the kernel itself, Beta moments at large indices) are
produced as logarithms and only exponentiated at the last moment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaln, zeta

from .errors import DomainError, KernelOverflowError

__all__ = [
    "OperatorParams",
    "log_gamma",
    "log_gamma_ratio",
    "log_pochhammer",
    "pochhammer_shifted",
    "real_binomial",
    "binomial_sequence",
    "log_kernel",
    "kernel",
    "kernel_alt_forms",
    "log_beta",
    "safe_exp",
]

EULER_GAMMA = 0.57721566490153286061
# Largest x with exp(x) finite in IEEE double.
LOG_DBL_MAX = 709.782712893384

# Taylor coefficients of lnGamma(1+z) and lnGamma(2+z) about z = 0.
_K = np.arange(2, 80, dtype=float)
_SERIES_AT_1 = (-1.0) ** _K * zeta(_K) / _K
_SERIES_AT_2 = (-1.0) ** _K * (zeta(_K) - 1.0) / _K
# B_{2k} / (2k (2k-1)) for the Stirling tail.
_STIRLING = np.array(
    [1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156, -3617 / 122400]
)


@dataclass(frozen=True)
class OperatorParams:
    """The pair (alpha, beta) fixing the kernel and the weights."""

    alpha: float
    beta: float

    def __post_init__(self):
        problems = []
        if not self.alpha > -1:
            problems.append(f"alpha > -1 violated (alpha={self.alpha!r})")
        if not self.beta > -1:
            problems.append(f"beta > -1 violated (beta={self.beta!r})")
        if not self.beta - self.alpha > -1:
            problems.append(f"beta - alpha > -1 violated (beta - alpha={self.beta - self.alpha!r})")
        if problems:
            raise DomainError("; ".join(problems))


def _series(z: np.ndarray, coeffs: np.ndarray, linear: float) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = (acc + c) * z
    return (acc + linear) * z


def _log_gamma_array(x: np.ndarray) -> np.ndarray:
    out = gammaln(x)
    # gammaln loses relative accuracy near its zeros at 1 and 2.
    near1 = (x >= 0.5) & (x < 1.5)
    out[near1] = _series(x[near1] - 1.0, _SERIES_AT_1, -EULER_GAMMA)
    near2 = (x >= 1.5) & (x < 2.5)
    out[near2] = _series(x[near2] - 2.0, _SERIES_AT_2, 1.0 - EULER_GAMMA)
    small = x < 0.5
    z = x[small]
    out[small] = _series(z, _SERIES_AT_1, -EULER_GAMMA) - np.log(z)
    return out


def log_gamma(x):
    """ln Gamma(x) for x > 0, scalar or array.

    Accurate to a few ulps in relative terms on (0, 1e6], including near the
    zeros at x = 1 and x = 2.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    out = _log_gamma_array(np.atleast_1d(arr).copy())
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def log_gamma_ratio(x, a, b):
    """ln Gamma(x + a) - ln Gamma(x + b), broadcasting over arrays.

    For x large against |a| and |b| the difference is formed from the Stirling
    expansion with ``log1p`` so that no digits are lost to cancellation.
    """
    x, a, b = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    )
    za, zb = x + a, x + b
    if np.any(~(za > 0)) or np.any(~(zb > 0)):
        raise DomainError("log_gamma_ratio requires x + a > 0 and x + b > 0")
    out = np.empty(x.shape, dtype=float)
    big = (x >= 8.0 * np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)) & (np.minimum(za, zb) >= 16.0)
    small = ~big
    if np.any(small):
        out[small] = _log_gamma_array(za[small]) - _log_gamma_array(zb[small])
    if np.any(big):
        xb, ab, bb = x[big], a[big], b[big]
        z1, z2 = za[big], zb[big]
        val = (
            (xb + ab - 0.5) * np.log1p(ab / xb)
            - (xb + bb - 0.5) * np.log1p(bb / xb)
            + (ab - bb) * (np.log(xb) - 1.0)
        )
        inv1, inv2 = 1.0 / z1, 1.0 / z2
        p1, p2 = inv1.copy(), inv2.copy()
        sq1, sq2 = inv1 * inv1, inv2 * inv2
        for c in _STIRLING:
            val += c * (p1 - p2)
            p1 *= sq1
            p2 *= sq2
        out[big] = val
    if out.ndim == 0:
        return float(out)
    return out


def log_pochhammer(gamma, s):
    """ln of (gamma + 1)_s = Gamma(gamma + s + 1) / Gamma(gamma + 1)."""
    g = np.asarray(gamma, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(~(g > -1)) or np.any(~(g + s > -1)):
        raise DomainError(
            f"pochhammer requires gamma > -1 and gamma + s > -1 (gamma={gamma!r}, s={s!r})"
        )
    return log_gamma_ratio(g + 1.0, s, 0.0)


def pochhammer_shifted(gamma: float, s: float) -> float:
    """(gamma + 1)_s, the real-index rising factorial starting at gamma + 1.

    >>> pochhammer_shifted(0, 2)
    2.0
    """
    if s == 0:
        if not gamma > -1:
            raise DomainError(f"pochhammer requires gamma > -1 (gamma={gamma!r})")
        return 1.0
    return safe_exp(log_pochhammer(gamma, s))


def real_binomial(gamma: float, m: int) -> float:
    """binom(gamma, m) from the falling-factorial product; gamma may be any real."""
    if m < 0 or int(m) != m:
        raise DomainError(f"real_binomial requires a nonnegative integer m, got {m!r}")
    value = 1.0
    for i in range(int(m)):
        value *= (gamma - i) / (i + 1)
    return value


def binomial_sequence(gamma: float, m_max: int) -> np.ndarray:
    """binom(gamma, m) for m = 0..m_max by the same product, accumulated once."""
    out = np.empty(m_max + 1)
    value = 1.0
    out[0] = value
    for i in range(m_max):
        value *= (gamma - i) / (i + 1)
        out[i + 1] = value
    return out


def log_kernel(m, n, params: OperatorParams):
    """ln k(m, n) = lnG(n+m+beta+1) - lnG(m+alpha+1) - lnG(n+beta-alpha+1).

    Accepts integer or real, scalar or array ``m`` and ``n``.  The larger of
    the two indices is used as the expansion variable of the Gamma ratio.
    """
    al, be = params.alpha, params.beta
    m_arr, n_arr = np.broadcast_arrays(np.asarray(m, dtype=float), np.asarray(n, dtype=float))
    if np.any(m_arr < 0) or np.any(n_arr < 0):
        raise DomainError("kernel indices must be nonnegative")
    m_big = m_arr >= n_arr
    out = np.empty(m_arr.shape, dtype=float)
    if np.any(m_big):
        mm, nn = m_arr[m_big], n_arr[m_big]
        out[m_big] = log_gamma_ratio(mm, nn + be + 1.0, al + 1.0) - _log_gamma_array(nn + be - al + 1.0)
    if np.any(~m_big):
        mm, nn = m_arr[~m_big], n_arr[~m_big]
        out[~m_big] = log_gamma_ratio(nn, mm + be + 1.0, be - al + 1.0) - _log_gamma_array(mm + al + 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def safe_exp(log_value, where: tuple[int, int] | None = None):
    """exp that raises instead of returning inf."""
    arr = np.asarray(log_value, dtype=float)
    if np.any(arr > LOG_DBL_MAX):
        if where is None and arr.ndim > 0:
            idx = np.unravel_index(int(np.argmax(arr)), arr.shape)
            where = tuple(int(i) for i in idx)
        raise KernelOverflowError(
            f"value exp({float(np.max(arr)):.6g}) exceeds double range"
            + (f" at index {where}" if where is not None else ""),
            index=where,
        )
    out = np.exp(arr)
    if out.ndim == 0:
        return float(out)
    return out


def kernel(m: int, n: int, params: OperatorParams) -> float:
    """k(m, n) in linear scale; raises KernelOverflowError if unrepresentable.

    Moderate arguments use the Gamma ratio directly (exact for small integer
    cases); larger ones go through the log domain.
    """
    al, be = params.alpha, params.beta
    top = n + m + be + 1.0
    if 0 <= m and 0 <= n and top < 150.0:
        return float(gamma(top) / (gamma(m + al + 1.0) * gamma(n + be - al + 1.0)))
    return safe_exp(log_kernel(m, n, params), where=(int(m), int(n)))


def kernel_alt_forms(m: int, n: int, params: OperatorParams) -> tuple[float, float]:
    """The two binomial rewrites of k(m, n), for cross-checking ``kernel``.

    The m-form expands Gamma(n+m+beta+1) over m factors, the n-form over n.
    """
    al, be = params.alpha, params.beta
    m_form = (
        (-1) ** m
        * real_binomial(-n - be - 1.0, m)
        / pochhammer_shifted(m, al)
        * pochhammer_shifted(n + be - al, al)
    )
    n_form = (
        (-1) ** n
        * real_binomial(-m - be - 1.0, n)
        / pochhammer_shifted(n, be - al)
        * pochhammer_shifted(m + al, be - al)
    )
    return float(m_form), float(n_form)


def log_beta(x, y):
    """ln B(x, y) for x, y > 0 (arrays broadcast)."""
    x_arr, y_arr = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(~(x_arr > 0)) or np.any(~(y_arr > 0)):
        raise DomainError(f"log_beta requires positive arguments, got ({x!r}, {y!r})")
    big = x_arr >= y_arr
    out = np.empty(x_arr.shape, dtype=float)
    # ln B = lnG(small) - [lnG(large + small) - lnG(large)]
    if np.any(big):
        out[big] = _log_gamma_array(y_arr[big]) - log_gamma_ratio(x_arr[big], y_arr[big], 0.0)
    if np.any(~big):
        out[~big] = _log_gamma_array(x_arr[~big]) - log_gamma_ratio(y_arr[~big], x_arr[~big], 0.0)
    if out.ndim == 0:
        return float(out)
    return out

