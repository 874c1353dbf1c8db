"""Measures, their norm constants and what divergence looks like.

For a finite combination of atoms and Beta densities the constant
C(beta, p) is an integral of t^(-u) (1-t)^(-v) against mu.  Atoms never make
it diverge; a density t^(a-1) (1-t)^(b-1) does once u >= a or v >= b.  The
report then looks for growth in the lower bounds instead of a norm.

Run with ``python3 notebooks/02_measures_and_divergence.py``.
"""

from __future__ import annotations

from genhilbert import Atom, BetaComponent, Measure, OperatorParams, c_constant, lebesgue, norm_report
from genhilbert.measure import truncated_power_integral
from genhilbert.operator import ReportConfig

mixed = Measure([Atom(0.3, 0.5)], [BetaComponent(2.0, 2.0, 3.0)])
print("mixed measure: atom at 0.3 plus 2 t (1-t)^2 dt")
for beta in (0.0, 1.0, 2.0, 3.0):
    print(f"  beta={beta}: C(beta, 2) = {c_constant(mixed, beta, 2.0)}")

print("\nLebesgue, beta = 1, p = 2: the constant diverges at both ends")
print(" ", c_constant(lebesgue(), 1.0, 2.0))
for delta in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
    print(f"  integral over [{delta:g}, 1-{delta:g}] = {truncated_power_integral(lebesgue(), 1.0, 1.0, delta):.4g}")

print("\nthe report sees the divergence as growing lower bounds")
rep = norm_report(OperatorParams(0.0, 1.0), lebesgue(), 2.0, ReportConfig(section_sizes=(1, 2, 4)))
for lb in rep.lower_bounds:
    print(f"  eps={lb.epsilon:<6} M={lb.truncation} ratio={lb.ratio:.4g}")
print("  verdict:", rep.verdict.value)
