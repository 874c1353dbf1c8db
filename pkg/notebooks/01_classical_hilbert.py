"""Classical Hilbert matrix: the constant, finite sections and test vectors.

The Lebesgue measure with alpha = beta = 0 gives the matrix 1/(m+n+1), whose
l^p norm is pi / sin(pi/p).  Finite sections approach it slowly from below;
the extremal test vectors (m+1)^(-1/p - eps) get much closer with a
certified output tail.

Run with ``python3 notebooks/01_classical_hilbert.py``.
"""

from __future__ import annotations

import math

from genhilbert import OperatorParams, c_constant, lebesgue, lower_bound_sweep, two_norm_section

params = OperatorParams(0.0, 0.0)
mu = lebesgue()

print("constant C(0, p) against pi csc(pi/p)")
for p in (1.25, 1.5, 2.0, 3.0, 4.0):
    c = c_constant(mu, 0.0, p).value
    print(f"  p={p:<5} C={c:.15f}  pi csc(pi/p)={math.pi / math.sin(math.pi / p):.15f}")

print("\np = 2 section norms (largest singular value of the N x N block)")
for N in (1, 4, 16, 64, 256, 512):
    s = two_norm_section(params, mu, None, N)
    print(f"  N={N:<4} {s:.6f}  = {s / math.pi:.4f} pi")

print("\ncertified Rayleigh ratios of the extremal vectors, 256 explicit rows")
for lb in lower_bound_sweep(params, mu, 2.0, [0.2, 0.1, 0.05, 0.02, 0.01], [256]):
    print(f"  eps={lb.epsilon:<5} ratio={lb.ratio:.6f}  = {lb.ratio / math.pi:.4f} pi")
