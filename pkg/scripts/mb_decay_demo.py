"""Measured decay of the Psi_1 Mellin-Barnes integrand against the predicted rates.

Prints log|f(sigma + it)| / |t| for growing t on both halves of the line, next to
chi_+ and chi_-. Usage: python3 scripts/mb_decay_demo.py
"""

from mpmath import mp, mpc

from fkasym.hyp import hyp2f1
from fkasym.core import PrecisionContext
from fkasym.psi1 import mb_contour_condition, mb_decay_rates

ctx = PrecisionContext(16)
a, b, c, cp = mpc(0.8), mpc(0.9), mpc(1.8), mpc(1.4)
x = mpc(-0.151, -0.523)
y = -2 * mp.expj(-1.059)  # arg(-y) = -1.059


def integrand(s):
    return (mp.gamma(a + s) * mp.gamma(-s) / mp.gamma(cp + s)
            * hyp2f1(a + s, b, c, x, ctx) * (-y) ** s)


if __name__ == "__main__":
    mp.dps = 25
    chp, chm = mb_decay_rates(x, y)
    print(f"arg(1-x) = {mp.nstr(mp.arg(1 - x), 4)}  arg(-y) = {mp.nstr(mp.arg(-y), 4)}")
    print(f"chi_+ = {mp.nstr(mp.mpf(chp), 4)}  chi_- = {mp.nstr(mp.mpf(chm), 4)}  contour ok: {mb_contour_condition(x, y).member}")
    print("measured -log|f|/|t| (should approach chi_- for t > 0 and chi_+ for t < 0)")
    print("t, rate(+t), rate(-t)")
    sigma = -0.4
    for t in (10, 20, 40, 60):
        up = mp.log(abs(integrand(mpc(sigma, t)))) / t
        dn = mp.log(abs(integrand(mpc(sigma, -t)))) / t
        print(f"{t}, {mp.nstr(-up, 4)}, {mp.nstr(-dn, 4)}")
