"""Closed-form Mellin transform of 1F1 * Psi_1 against direct quadrature along a line in s.

Usage: python3 scripts/mellin_check.py
"""

from mpmath import mp, mpf

from fkasym.core import PrecisionContext
from fkasym.mellin import PsiFSpec, mellin_psiF_closed, mellin_psiF_direct

ctx = PrecisionContext(16)
spec = PsiFSpec.of(0.6, 1.4, 0.8, 1.1, 2.3, 1.9, -1, -0.5, 0.2)

if __name__ == "__main__":
    print("s, closed, direct, rel_diff")
    for k in range(1, 12):
        s = mpf(k) / 8
        with mp.workdps(ctx.dps):
            c = mellin_psiF_closed(spec, s, ctx)
            d = mellin_psiF_direct(spec, s, ctx).value
            print(f"{mp.nstr(s, 4)}, {mp.nstr(c, 12)}, {mp.nstr(d, 12)}, {mp.nstr(abs(c - d) / abs(d), 3)}")
