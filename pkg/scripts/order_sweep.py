"""Empirical order of the F_K large-y expansion for several y/z ratios.

The Laplace integral is the oracle (slow: about half a minute per point).
Usage: python3 scripts/order_sweep.py [--n-terms 2] [--alpha2 1.3]
"""

import argparse

from mpmath import mpf

from fkasym import cli
from fkasym.core import PrecisionContext
from fkasym.fk import FkParams

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-terms", type=int, default=2)
    ap.add_argument("--alpha2", type=float, default=1.3)
    ap.add_argument("--ratios", default="0.8,1.0,1.4")
    args = ap.parse_args()
    p = FkParams.of(0.7, args.alpha2, 0.6, 0.9, 2.1, 2.4, 1.8)
    ys = [mpf(-100), mpf(-200), mpf(-400), mpf(-800)]
    ctx = PrecisionContext(16)
    for r in args.ratios.split(","):
        rows, verdict = cli.order_report(p, mpf("0.2"), ys, mpf(r), args.n_terms, ctx)
        print(f"y/z = {r}")
        for row in rows:
            print("  ", ", ".join(str(v) for v in row))
        print("  verdict:", {k: (str(v) if not isinstance(v, bool) else v) for k, v in verdict.items()})
