"""The sup-norm case: an exact equality you can watch row by row.

With a_m = (m+1)_alpha, every weighted output row equals the constant
int (1-t)^(-beta-1) dmu.  For a single atom at t with mass w that is
w (1-t)^(-beta-1).  The certified row sums below show it for n up to 50.

Run with ``python3 notebooks/03_sup_norm_case.py``.
"""

from __future__ import annotations

from genhilbert import OperatorParams, atom_measure, inf_norm_check

for (t, w), (alpha, beta) in [((0.5, 1.0), (0.0, 0.0)), ((0.25, 2.0), (0.0, 1.0)), ((0.5, 1.0), (0.5, 1.0))]:
    check = inf_norm_check(OperatorParams(alpha, beta), atom_measure(t, w), 50)
    c = check.constant.value
    spread = max(abs(check.rows.hi - c).max(), abs(check.rows.lo - c).max()) / c
    print(
        f"atom ({t}, {w}), alpha={alpha}, beta={beta}: constant {c:.12f}, "
        f"sup over rows in [{check.computed_sup.lo:.12f}, {check.computed_sup.hi:.12f}], "
        f"max row deviation {spread:.1e}"
    )
