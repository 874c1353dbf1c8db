"""Finite positive measures on (0, 1) built from interior atoms and Beta densities.

A measure is a list of point masses ``mass * delta_t`` plus densities
``coef * t**(a-1) * (1-t)**(b-1) dt``.  Every integral the operator needs,
``int t**m (1-t)**n dmu`` and ``int t**-u (1-t)**-v dmu``, then has a closed
form in terms of the Beta function, and divergence is read off from the
exponents rather than guessed from a quadrature.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import ConvergenceError, DomainError, MeasureParseError, MeasureValidationError
from .quadrature import gauss_kronrod
from .special_fn import log_beta

__all__ = [
    "Atom",
    "BetaComponent",
    "Measure",
    "Endpoint",
    "Finite",
    "Divergent",
    "IntegralResult",
    "lebesgue",
    "atom_measure",
    "total_mass",
    "moment",
    "log_moment",
    "power_integral",
    "c_constant",
    "c_constant_inf",
    "quad_check",
    "truncated_power_integral",
    "parse_measure",
    "serialize_measure",
]


@dataclass(frozen=True)
class Atom:
    t: float
    mass: float

    def violations(self, path: str = "atom") -> list[str]:
        out = []
        if not (0.0 < self.t < 1.0):
            out.append(f"{path}.t must lie strictly inside (0, 1), got {self.t!r}")
        if not self.mass > 0:
            out.append(f"{path}.mass must be > 0, got {self.mass!r}")
        return out


@dataclass(frozen=True)
class BetaComponent:
    """Density ``coef * t**(a-1) * (1-t)**(b-1)``; Lebesgue is (1, 1, 1)."""

    coef: float
    a: float
    b: float

    def violations(self, path: str = "density") -> list[str]:
        out = []
        for name in ("coef", "a", "b"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                out.append(f"{path}.{name} must be finite and > 0, got {value!r}")
        return out


@dataclass(frozen=True)
class Measure:
    atoms: tuple[Atom, ...] = field(default_factory=tuple)
    densities: tuple[BetaComponent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "densities", tuple(self.densities))
        problems = []
        for i, atom in enumerate(self.atoms):
            problems += atom.violations(f"atoms[{i}]")
        for j, dens in enumerate(self.densities):
            problems += dens.violations(f"densities[{j}]")
        if not self.atoms and not self.densities:
            problems.append("measure must contain at least one atom or density")
        if problems:
            raise MeasureValidationError(problems)

    def scaled(self, c: float) -> Measure:
        """The measure ``c * mu`` for c > 0."""
        if not c > 0:
            raise DomainError(f"scale factor must be > 0, got {c!r}")
        return Measure(
            [Atom(a.t, c * a.mass) for a in self.atoms],
            [BetaComponent(c * d.coef, d.a, d.b) for d in self.densities],
        )


class Endpoint(str, enum.Enum):
    AT_ZERO = "at_zero"
    AT_ONE = "at_one"
    BOTH = "both"


@dataclass(frozen=True)
class Finite:
    value: float

    is_finite = True

    def __str__(self):
        return f"Finite {self.value!r}"


@dataclass(frozen=True)
class Divergent:
    endpoint: Endpoint

    is_finite = False

    def __str__(self):
        return f"Divergent {self.endpoint.value}"


IntegralResult = Finite | Divergent


def lebesgue() -> Measure:
    return Measure(densities=[BetaComponent(1.0, 1.0, 1.0)])


def atom_measure(t: float, mass: float = 1.0) -> Measure:
    return Measure(atoms=[Atom(t, mass)])


def total_mass(measure: Measure) -> float:
    terms = [a.mass for a in measure.atoms]
    terms += [d.coef * math.exp(log_beta(d.a, d.b)) for d in measure.densities]
    return math.fsum(terms)


def log_moment(measure: Measure, m, n):
    """ln of int t**m (1-t)**n dmu, for real m, n >= 0 (arrays broadcast)."""
    m_arr, n_arr = np.broadcast_arrays(np.asarray(m, dtype=float), np.asarray(n, dtype=float))
    parts = [
        math.log(a.mass) + m_arr * math.log(a.t) + n_arr * math.log1p(-a.t) for a in measure.atoms
    ]
    parts += [math.log(d.coef) + log_beta(m_arr + d.a, n_arr + d.b) for d in measure.densities]
    out = logsumexp(np.stack(parts), axis=0)
    if out.ndim == 0:
        return float(out)
    return out


def moment(measure: Measure, m: int, n: int) -> float:
    """int t**m (1-t)**n dmu(t)."""
    if m < 0 or n < 0:
        raise DomainError("moment indices must be nonnegative")
    terms = [a.mass * a.t**m * (1.0 - a.t) ** n for a in measure.atoms]
    terms += [d.coef * math.exp(log_beta(m + d.a, n + d.b)) for d in measure.densities]
    return math.fsum(terms)


def _classify(at_zero: bool, at_one: bool) -> Endpoint:
    if at_zero and at_one:
        return Endpoint.BOTH
    return Endpoint.AT_ZERO if at_zero else Endpoint.AT_ONE


def power_integral(measure: Measure, u: float, v: float) -> IntegralResult:
    """int t**-u (1-t)**-v dmu, or the endpoint(s) where it diverges.

    A density diverges at 0 iff a - u <= 0 and at 1 iff b - v <= 0; the
    threshold itself is divergent (logarithmically).
    """
    at_zero = any(d.a - u <= 0 for d in measure.densities)
    at_one = any(d.b - v <= 0 for d in measure.densities)
    if at_zero or at_one:
        return Divergent(_classify(at_zero, at_one))
    terms = [a.mass * a.t ** (-u) * (1.0 - a.t) ** (-v) for a in measure.atoms]
    terms += [d.coef * math.exp(log_beta(d.a - u, d.b - v)) for d in measure.densities]
    return Finite(math.fsum(terms))


def _check_beta(beta: float):
    if not beta > -1:
        raise DomainError(f"beta > -1 required, got {beta!r}")


def c_constant(measure: Measure, beta: float, p: float) -> IntegralResult:
    """The boundedness constant for exponent p: u = (beta+1)/p, v = (1-1/p)(beta+1)."""
    _check_beta(beta)
    if not p >= 1:
        raise DomainError(f"p >= 1 required, got {p!r}")
    u = (beta + 1.0) / p
    v = 0.0 if p == 1 else (1.0 - 1.0 / p) * (beta + 1.0)
    return power_integral(measure, u, v)


def c_constant_inf(measure: Measure, beta: float) -> IntegralResult:
    """The sup-norm constant int (1-t)**(-beta-1) dmu."""
    _check_beta(beta)
    return power_integral(measure, 0.0, beta + 1.0)


def _atom_part(measure: Measure, u: float, v: float, lo: float = 0.0, hi: float = 1.0) -> float:
    return math.fsum(
        a.mass * a.t ** (-u) * (1.0 - a.t) ** (-v) for a in measure.atoms if lo <= a.t <= hi
    )


def quad_check(measure: Measure, u: float, v: float, tol: float = 1e-10) -> float:
    """Quadrature value of int t**-u (1-t)**-v dmu, independent of the Beta path.

    Each density is split at 1/2.  Near 0 the substitution t = s**k with
    k = 1/(a-u) (when a-u < 1) turns the integrand into a bounded, smooth
    function of s; near 1 the same is done with 1 - t = s**k.  Atoms are
    added exactly.
    """
    result = power_integral(measure, u, v)
    if not result.is_finite:
        raise DomainError(f"integral diverges ({result.endpoint.value}); nothing to check")
    pieces = []
    share = tol / (4 * max(1, len(measure.densities)))
    for d in measure.densities:
        e0, e1 = d.a - u, d.b - v
        for expo_near, expo_far in ((e0, e1), (e1, e0)):
            k = 1.0 / expo_near if expo_near < 1 else 1.0

            def f(s, k=k, en=expo_near, ef=expo_far):
                sk = s**k
                return d.coef * k * s ** (k * en - 1.0) * (1.0 - sk) ** (ef - 1.0)

            upper = 0.5 ** (1.0 / k)
            value, err = gauss_kronrod(f, 0.0, upper, atol=share, rtol=0.0, max_intervals=20000)
            pieces.append(value)
    return math.fsum(pieces) + _atom_part(measure, u, v)


def truncated_power_integral(
    measure: Measure, u: float, v: float, delta: float, rtol: float = 1e-10
) -> float:
    """int over [delta, 1-delta] of t**-u (1-t)**-v dmu, by quadrature.

    Well defined whether or not the full integral converges; used to watch a
    divergent integral grow as delta shrinks.  Each half is integrated in the
    logarithm of the distance to its endpoint.
    """
    if not 0 < delta < 0.5:
        raise DomainError(f"delta must lie in (0, 1/2), got {delta!r}")
    pieces = []
    for d in measure.densities:
        e0, e1 = d.a - u, d.b - v

        def near_zero(y, e0=e0, e1=e1):
            t = np.exp(y)
            return d.coef * t**e0 * (1.0 - t) ** (e1 - 1.0)

        def near_one(y, e0=e0, e1=e1):
            s = np.exp(y)
            return d.coef * s**e1 * (1.0 - s) ** (e0 - 1.0)

        for g in (near_zero, near_one):
            try:
                value, _ = gauss_kronrod(g, math.log(delta), math.log(0.5), rtol=rtol)
            except ConvergenceError as exc:
                raise ConvergenceError(f"truncated integral did not converge: {exc}") from exc
            pieces.append(value)
    return math.fsum(pieces) + _atom_part(measure, u, v, delta, 1.0 - delta)


# ---------------------------------------------------------------- JSON schema

_ATOM_FIELDS = ("t", "mass")
_DENSITY_FIELDS = ("coef", "a", "b")


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MeasureParseError(f"expected a number, got {json.dumps(value)}", path)
    value = float(value)
    if not math.isfinite(value):
        raise MeasureParseError("number must be finite", path)
    return value


def _records(doc: dict, key: str, fields: tuple[str, ...]) -> list[dict]:
    items = doc.get(key, [])
    if not isinstance(items, list):
        raise MeasureParseError("expected a list", f"$.{key}")
    out = []
    for i, item in enumerate(items):
        path = f"$.{key}[{i}]"
        if not isinstance(item, dict):
            raise MeasureParseError("expected an object", path)
        extra = sorted(set(item) - set(fields))
        if extra:
            raise MeasureParseError(f"unknown field {extra[0]!r}", f"{path}.{extra[0]}")
        rec = {}
        for name in fields:
            if name not in item:
                raise MeasureParseError("missing field", f"{path}.{name}")
            rec[name] = _number(item[name], f"{path}.{name}")
        out.append(rec)
    return out


def parse_measure(text: bytes | str) -> Measure:
    """Parse the measure-spec JSON document; errors name the offending path."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})")
    if not isinstance(doc, dict):
        raise MeasureParseError("top level must be an object")
    extra = sorted(set(doc) - {"atoms", "densities"})
    if extra:
        raise MeasureParseError(f"unknown field {extra[0]!r}", f"$.{extra[0]}")
    atoms = _records(doc, "atoms", _ATOM_FIELDS)
    densities = _records(doc, "densities", _DENSITY_FIELDS)
    problems = []
    for i, rec in enumerate(atoms):
        problems += Atom(**rec).violations(f"$.atoms[{i}]")
    for j, rec in enumerate(densities):
        problems += BetaComponent(**rec).violations(f"$.densities[{j}]")
    if not atoms and not densities:
        problems.append("$: measure must contain at least one atom or density")
    if problems:
        raise MeasureValidationError(problems)
    return Measure([Atom(**r) for r in atoms], [BetaComponent(**r) for r in densities])


def serialize_measure(measure: Measure) -> bytes:
    """Canonical JSON: atoms by t, densities by (a, b, coef), shortest float repr."""
    atoms = sorted(measure.atoms, key=lambda a: (a.t, a.mass))
    dens = sorted(measure.densities, key=lambda d: (d.a, d.b, d.coef))
    doc = {
        "atoms": [{"t": a.t, "mass": a.mass} for a in atoms],
        "densities": [{"coef": d.coef, "a": d.a, "b": d.b} for d in dens],
    }
    return json.dumps(doc, separators=(", ", ": ")).encode("utf-8")
