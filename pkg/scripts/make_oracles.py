"""Reference values for the frozen test oracles, from mpmath's own routines.

Nothing here calls fkasym: 2F1/1F1/3F2 come from mpmath.hyp*, Psi_1 and the
Kampe de Feriet function from mpmath.hyper2d, F_2 from mpmath.appellf2 and
F_K from a plain triple sum. Run with ``python3 scripts/make_oracles.py``.
"""

from mpmath import mp, mpc, mpf

DIGITS = 40


def fk_triple(a1, a2, b1, b2, g1, g2, g3, x, y, z, terms=120):
    s = mpf(0)
    for m in range(terms):
        tm = mp.rf(a1, m) / mp.rf(g1, m) * x**m / mp.factorial(m)
        if abs(tm) < mpf(10) ** (-DIGITS - 5):
            break
        for n in range(terms):
            tn = tm * mp.rf(b2, n) / mp.rf(g2, n) * y**n / mp.factorial(n)
            if abs(tn) < mpf(10) ** (-DIGITS - 5):
                break
            for p in range(terms):
                t = tn * mp.rf(a2, n + p) * mp.rf(b1, m + p) / (mp.rf(g3, p) * mp.factorial(p)) * z**p
                s += t
                if abs(t) < mpf(10) ** (-DIGITS - 5):
                    break
    return s


def main():
    mp.dps = DIGITS
    out = {}
    out["2f1"] = [
        ((0.3, 0.7, 1.6, 0.5), mp.hyp2f1(0.3, 0.7, 1.6, 0.5)),
        ((0.3, 0.7, 1.6, -3.0), mp.hyp2f1(0.3, 0.7, 1.6, -3.0)),
        ((1.2, -0.4, 2.3, mpc(0.5, 0.8)), mp.hyp2f1(1.2, -0.4, 2.3, mpc(0.5, 0.8))),
        ((0.5, 1.5, 2.5, 0.95), mp.hyp2f1(0.5, 1.5, 2.5, 0.95)),
        ((0.25, 0.75, 1.1, mpc(-7, 2)), mp.hyp2f1(0.25, 0.75, 1.1, mpc(-7, 2))),
    ]
    out["1f1"] = [((0.6, 1.7, -12.5), mp.hyp1f1(0.6, 1.7, -12.5)), ((1.3, 0.4, 3.0), mp.hyp1f1(1.3, 0.4, 3.0))]
    out["3f2"] = [(((0.5, 1.1, 0.7), (1.9, 2.2), -0.6), mp.hyp3f2(0.5, 1.1, 0.7, 1.9, 2.2, -0.6))]
    psi = []
    for a, b, c, cp, x, y in ((0.6, 0.8, 1.9, 1.3, 0.2, -2.0), (1.2, 0.8, 2.1, 1.6, -0.5, 1.5),
                              (0.4, 1.1, 2.0, 0.9, mpc(0.3, 0.2), mpc(-3, 1))):
        v = mp.hyper2d({"m+n": [a], "m": [b]}, {"m": [c], "n": [cp]}, x, y)
        psi.append(((a, b, c, cp, x, y), v))
    out["psi1"] = psi
    kd = []
    for prm, x, y in (((0.6, 0.8, 1.9, 0.5, 1.1, 1.7, 2.2), 0.3, -0.4),
                      ((1.1, 0.4, 1.5, 0.9, 0.3, 2.1, 1.4), -0.5, 0.4)):
        a1, b1, c1, d1, d2, e1, e2 = prm
        v = mp.hyper2d({"m+n": [a1], "m": [b1], "n": [d1, d2]}, {"m": [c1], "n": [e1, e2]}, x, y)
        kd.append(((prm, x, y), v))
    out["kdf"] = kd
    out["f2"] = [((0.7, 0.6, 1.3, 2.1, 2.4, 0.3, -0.2), mp.appellf2(0.7, 0.6, 1.3, 2.1, 2.4, 0.3, -0.2))]
    prm = (0.7, 1.3, 0.6, 0.9, 2.1, 2.4, 1.8)
    out["fk"] = [((prm, 0.2, 0.3, 0.1), fk_triple(*prm, 0.2, 0.3, 0.1)),
                 ((prm, -0.3, 0.25, -0.2), fk_triple(*prm, -0.3, 0.25, -0.2))]
    for key, rows in out.items():
        print(key)
        for args, v in rows:
            print(f"  {args}: {mp.nstr(mpc(v), 25)}")


if __name__ == "__main__":
    main()
