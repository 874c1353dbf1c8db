"""Weighted sequence spaces and the test sequences that probe them.

Weights are evaluated in log domain so that ``(m+1)_alpha ** -p`` and friends
stay finite for large m and p.  The exponent ``p = inf`` is the string tag
:data:`INF`, never a large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import DomainError
from .special_fn import OperatorParams, log_pochhammer

__all__ = [
    "INF",
    "parse_p",
    "Interval",
    "WeightSpec",
    "W1",
    "W2",
    "W1Bar",
    "W2Bar",
    "Unit",
    "PowerWeight",
    "weight_value",
    "WeightedSequence",
    "p_norm",
    "extremal_sequence_lp",
    "extremal_sequence_inf",
    "lemma26_sequence",
    "dirichlet_norm",
    "weight_equivalence_check",
    "power_sum_interval",
    "extremal_norm_interval",
    "SequenceGenerator",
    "ExtremalLp",
    "ExtremalInf",
    "UnitBasis",
    "FiniteSequence",
    "make_generator",
]

INF: Literal["inf"] = "inf"
Exponent = Union[float, Literal["inf"]]


def parse_p(value) -> Exponent:
    """Accept a number >= 1 or the literal ``inf``."""
    if isinstance(value, str):
        if value.strip().lower() == INF:
            return INF
        value = float(value)
    value = float(value)
    if not value >= 1 or math.isinf(value):
        raise DomainError(f"p must be a real >= 1 or 'inf', got {value!r}")
    return value


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def radius(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


# ---------------------------------------------------------------- weights


def _check_p(p):
    if not (isinstance(p, (int, float)) and p >= 1 and math.isfinite(p)):
        raise DomainError(f"weight exponent p must be a finite real >= 1, got {p!r}")


class WeightSpec:
    def log_value(self, m):
        raise NotImplementedError


@dataclass(frozen=True)
class W1(WeightSpec):
    """(m+1)_alpha ** -p * (m+1)_beta."""

    params: OperatorParams
    p: float

    def __post_init__(self):
        _check_p(self.p)

    def log_value(self, m):
        m = np.asarray(m, dtype=float)
        return -self.p * log_pochhammer(m, self.params.alpha) + log_pochhammer(m, self.params.beta)


@dataclass(frozen=True)
class W2(WeightSpec):
    """(m+beta-alpha+1)_alpha ** -p * (m+1)_beta."""

    params: OperatorParams
    p: float

    def __post_init__(self):
        _check_p(self.p)

    def log_value(self, m):
        al, be = self.params.alpha, self.params.beta
        m = np.asarray(m, dtype=float)
        return -self.p * log_pochhammer(m + be - al, al) + log_pochhammer(m, be)


@dataclass(frozen=True)
class W1Bar(WeightSpec):
    params: OperatorParams

    def log_value(self, m):
        return -log_pochhammer(np.asarray(m, dtype=float), self.params.alpha)


@dataclass(frozen=True)
class W2Bar(WeightSpec):
    params: OperatorParams

    def log_value(self, m):
        al, be = self.params.alpha, self.params.beta
        return -log_pochhammer(np.asarray(m, dtype=float) + be - al, al)


@dataclass(frozen=True)
class Unit(WeightSpec):
    def log_value(self, m):
        return np.zeros_like(np.asarray(m, dtype=float))


@dataclass(frozen=True)
class PowerWeight(WeightSpec):
    """(m+1) ** exponent."""

    exponent: float

    def log_value(self, m):
        return self.exponent * np.log1p(np.asarray(m, dtype=float))


def weight_value(spec: WeightSpec, m: int) -> float:
    return float(np.exp(spec.log_value(m)))


# ---------------------------------------------------------------- norms


@dataclass(frozen=True)
class WeightedSequence:
    values: np.ndarray
    weight: WeightSpec
    p: Exponent

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise DomainError("a weighted sequence needs at least one value")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "p", parse_p(self.p))


def p_norm(seq: WeightedSequence) -> float:
    """||a||_{p,w}; the sup-norm ``max w(n)|a_n|`` when p is INF."""
    a = np.abs(seq.values)
    log_w = seq.weight.log_value(np.arange(a.size))
    nz = a > 0
    if not np.any(nz):
        return 0.0
    if seq.p == INF:
        return float(np.max(np.exp(log_w[nz] + np.log(a[nz]))))
    p = seq.p
    terms = np.exp(log_w[nz] + p * np.log(a[nz]))
    return math.fsum(terms) ** (1.0 / p)


def dirichlet_norm(coeffs, lam: float) -> float:
    """Coefficient norm of the Dirichlet-type space: weight (n+1)**(1-lam), p = 2."""
    return p_norm(WeightedSequence(np.asarray(coeffs, dtype=float), PowerWeight(1.0 - lam), 2.0))


def weight_equivalence_check(s: float, N: int) -> tuple[float, float]:
    """(min, max) over n in [0, N] of (n+1)_s / (n+1)**s."""
    if not s > -1:
        raise DomainError(f"s > -1 required, got {s!r}")
    if N < 1:
        raise DomainError("N >= 1 required")
    n = np.arange(N + 1, dtype=float)
    ratio = np.exp(log_pochhammer(n, s) - s * np.log1p(n))
    return float(ratio.min()), float(ratio.max())


# ---------------------------------------------------------------- test sequences


def _check_eps(beta: float, p: float, epsilon: float):
    if not 0 < epsilon < (beta + 1.0) / p:
        raise DomainError(
            f"epsilon must lie in (0, (beta+1)/p) = (0, {(beta + 1.0) / p!r}), got {epsilon!r}"
        )


def _log_extremal_lp(params: OperatorParams, p: float, epsilon: float, m):
    m = np.asarray(m, dtype=float)
    be = params.beta
    return (
        log_pochhammer(m, params.alpha)
        - log_pochhammer(m, be) / p
        - (1.0 / p + epsilon) * np.log(m + be + 1.0)
    )


def extremal_sequence_lp(params: OperatorParams, p: float, epsilon: float, M: int) -> np.ndarray:
    """a_m = (m+1)_alpha (m+1)_beta**(-1/p) (m+beta+1)**-(1/p+eps), m < M."""
    _check_p(p)
    _check_eps(params.beta, p, epsilon)
    return np.exp(_log_extremal_lp(params, p, epsilon, np.arange(M)))


def extremal_sequence_inf(params: OperatorParams, M: int) -> np.ndarray:
    """a_m = (m+1)_alpha, m < M."""
    return np.exp(log_pochhammer(np.arange(M, dtype=float), params.alpha))


def lemma26_sequence(beta: float, p: float, epsilon: float, n) -> float:
    """(n+beta+1)**(-1-p*eps)."""
    _check_eps(beta, p, epsilon)
    out = np.power(np.asarray(n, dtype=float) + beta + 1.0, -1.0 - p * epsilon)
    return float(out) if out.ndim == 0 else out


def power_sum_interval(c: float, s: float, K: int = 4096) -> Interval:
    """Certified enclosure of sum_{m>=0} (m+c)**-s for c > 0, s > 1.

    Exact partial sum below K, then the integral comparison
    int_K^inf <= tail <= int_{K-1}^inf for the decreasing summand.
    """
    if not (c > 0 and s > 1 and K >= 1):
        raise DomainError("power_sum_interval requires c > 0, s > 1, K >= 1")
    if K - 1 + c <= 0:
        K = int(math.ceil(1 - c)) + 1
    head = math.fsum(np.power(np.arange(K, dtype=float) + c, -s))
    lo = math.exp(-(s - 1.0) * math.log(K + c)) / (s - 1.0)
    hi = math.exp(-(s - 1.0) * math.log(K - 1 + c)) / (s - 1.0)
    return Interval(head + lo, head + hi)


def extremal_norm_interval(params: OperatorParams, p: float, epsilon: float, K: int = 4096) -> Interval:
    """Certified ||a||_{p,w1} of the infinite extremal sequence.

    Uses w1(m) a_m**p = (m+beta+1)**(-1-p eps), an exact identity.
    """
    _check_eps(params.beta, p, epsilon)
    iv = power_sum_interval(params.beta + 1.0, 1.0 + p * epsilon, K)
    return Interval(iv.lo ** (1.0 / p), iv.hi ** (1.0 / p))


class SequenceGenerator:
    """A named nonnegative input sequence, possibly infinite.

    ``log_terms`` must accept real m so that tails can be compared with
    integrals.  ``ratio_sup(K)`` bounds a_{m+1}/a_m from above over m >= K.
    """

    name = "sequence"
    support: int | None = None  # number of nonzero leading terms, None if infinite

    def log_terms(self, m):
        raise NotImplementedError

    def terms(self, M: int) -> np.ndarray:
        return np.exp(self.log_terms(np.arange(M, dtype=float)))

    def ratio_sup(self, K: int) -> float:
        raise NotImplementedError


def _sup_factor(num_shift: float, den_shift: float, power: float, K: float) -> float:
    """sup over m >= K of ((m+num_shift)/(m+den_shift))**power (monotone in m)."""
    at_k = ((K + num_shift) / (K + den_shift)) ** power
    return max(at_k, 1.0)


@dataclass(frozen=True)
class ExtremalLp(SequenceGenerator):
    params: OperatorParams
    p: float
    epsilon: float

    name = "extremal_lp"

    def __post_init__(self):
        _check_p(self.p)
        _check_eps(self.params.beta, self.p, self.epsilon)

    def log_terms(self, m):
        return _log_extremal_lp(self.params, self.p, self.epsilon, m)

    def ratio_sup(self, K):
        al, be, p = self.params.alpha, self.params.beta, self.p
        return (
            _sup_factor(1 + al, 1, 1.0, K)
            * _sup_factor(1 + be, 1, -1.0 / p, K)
            * _sup_factor(be + 2, be + 1, -(1.0 / p + self.epsilon), K)
        )

    def norm_interval(self, K: int = 4096) -> Interval:
        return extremal_norm_interval(self.params, self.p, self.epsilon, K)


@dataclass(frozen=True)
class ExtremalInf(SequenceGenerator):
    params: OperatorParams

    name = "extremal_inf"

    def log_terms(self, m):
        return log_pochhammer(np.asarray(m, dtype=float), self.params.alpha)

    def ratio_sup(self, K):
        return _sup_factor(1 + self.params.alpha, 1, 1.0, K)


class FiniteSequence(SequenceGenerator):
    """A finitely supported sequence given by its leading values."""

    name = "finite"

    def __init__(self, values):
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise DomainError("a finite sequence needs at least one value")
        self.values = vals
        self.support = int(vals.size)

    def terms(self, M: int) -> np.ndarray:
        out = np.zeros(M)
        k = min(M, self.support)
        out[:k] = self.values[:k]
        return out

    def log_terms(self, m):
        m = np.asarray(m)
        out = np.full(m.shape, -np.inf)
        idx = m.astype(int)
        ok = (idx == m) & (idx >= 0) & (idx < self.support)
        with np.errstate(divide="ignore"):
            out[ok] = np.log(np.abs(self.values[idx[ok]]))
        return out

    def ratio_sup(self, K):
        return 0.0


class UnitBasis(FiniteSequence):
    name = "unit_basis"

    def __init__(self, k: int):
        if k < 0:
            raise DomainError("unit_basis index must be >= 0")
        values = np.zeros(k + 1)
        values[k] = 1.0
        super().__init__(values)
        self.k = k


def make_generator(
    spec: str, params: OperatorParams, p: float | None = None, epsilon: float | None = None
) -> SequenceGenerator:
    """Build a generator from ``extremal_lp``, ``extremal_inf`` or ``unit_basis:<k>``."""
    if spec == "extremal_lp":
        if p is None or epsilon is None or p == INF:
            raise DomainError("extremal_lp needs a finite p and an epsilon")
        return ExtremalLp(params, float(p), float(epsilon))
    if spec == "extremal_inf":
        return ExtremalInf(params)
    if spec.startswith("unit_basis:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad unit_basis index in {spec!r}") from None
        return UnitBasis(k)
    raise DomainError(f"unknown generator {spec!r}")
