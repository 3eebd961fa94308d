"""Humbert Psi_1[a, b; c, c'; x, y]: series, Euler integral, Kummer map, Mellin-Barnes line.

Psi_1 = sum_{m,n} (a)_{m+n} (b)_m / ((c)_m (c')_n m! n!) x**m y**n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .core import (
    ConvergenceError,
    DomainError,
    EvalOutcome,
    PoleError,
    PrecisionContext,
    arg,
    cnum,
    complex_pow,
    gamma_ratio,
    get_ctx,
    nonpositive_int,
)
from .hyp import hyp1f1, hyp2f1
from .quadrature import integrate_01_singular, integrate_mb_line


@dataclass(frozen=True)
class Psi1Params:
    a: mpc
    b: mpc
    c: mpc
    cp: mpc

    def __post_init__(self):
        for name in ("a", "b", "c", "cp"):
            object.__setattr__(self, name, cnum(getattr(self, name)))
        for name in ("c", "cp"):
            v = getattr(self, name)
            if nonpositive_int(v, 1e-12) is not None:
                raise PoleError(f"{name} is a non-positive integer", location=v)

    @classmethod
    def of(cls, a, b, c, cp) -> "Psi1Params":
        return cls(cnum(a), cnum(b), cnum(c), cnum(cp))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.cp)


@dataclass(frozen=True)
class DomainVerdict:
    member: bool
    witness: str = ""

    def __post_init__(self):
        if self.member == bool(self.witness):
            raise ValueError("witness must be nonempty exactly when member is False")

    def __bool__(self):
        return self.member

    def require(self, what: str = ""):
        if not self.member:
            raise DomainError(f"{what}: {self.witness}" if what else self.witness, witness=self.witness)
        return self


YES = DomainVerdict(True)


def _on_cut(w) -> bool:
    """True if 1 - w lies on (-inf, 0], i.e. w in [1, inf)."""
    w = cnum(w)
    return w.imag == 0 and w.real >= 1


def in_domain_psi1_series(x, y) -> DomainVerdict:
    x = cnum(x)
    if x == 1:
        return DomainVerdict(False, "x = 1")
    if _on_cut(x):
        return DomainVerdict(False, "|arg(1-x)| < pi violated (x on [1, inf))")
    cnum(y)
    return YES


def in_domain_V_psi1(x, y) -> DomainVerdict:
    x, y = cnum(x), cnum(y)
    if x == 1:
        return DomainVerdict(False, "x = 1")
    if y == 0:
        return DomainVerdict(False, "y = 0")
    if _on_cut(x):
        return DomainVerdict(False, "|arg(1-x)| < pi violated")
    ay = arg(-y)
    if not abs(ay) < mp.pi / 2:
        return DomainVerdict(False, "|arg(-y)| < pi/2 violated")
    if not abs(arg(1 - x) + ay) < mp.pi / 2:
        return DomainVerdict(False, "|arg(1-x) + arg(-y)| < pi/2 violated")
    return YES


def mb_decay_rates(x, y):
    """(chi_minus, chi_plus): exponential decay rates of the MB integrand for t -> -inf, +inf.

    On s = sigma + it the factor (1 - ux)^(-a-s) of the inner 2F1 has modulus
    growing like exp(t arg(1 - ux)), so the 2F1 grows at rate max(0, arg(1-x))
    as t -> +inf and max(0, -arg(1-x)) as t -> -inf.
    """
    x, y = cnum(x), cnum(y)
    ay, ax = arg(-y), arg(1 - x)
    chi_p = mp.pi / 2 + ay - max(0, ax)
    chi_m = mp.pi / 2 - ay - max(0, -ax)
    return float(chi_m), float(chi_p)


def mb_contour_condition(x, y) -> DomainVerdict:
    """V membership plus positive decay on both ends of the vertical line.

    For complex x the two differ: V bounds |arg(1-x) + arg(-y)|, the decay
    needs |arg(1-x) - arg(-y)| < pi/2 (together with |arg(-y)| < pi/2).
    """
    v = in_domain_V_psi1(x, y)
    if not v:
        return v
    chi_m, chi_p = mb_decay_rates(x, y)
    if not (chi_m > 0 and chi_p > 0):
        return DomainVerdict(False, "|arg(1-x) - arg(-y)| < pi/2 violated (MB integrand does not decay)")
    return YES


# --------------------------------------------------------------------------
# series in n with the inner 2F1 advanced by its contiguous relation


def _f_ladder(a, b, c, x, count, ctx):
    """[2F1(a+n, b; c; x) for n < count] by the forward three-term recurrence in a.

    (c-a) F(a-1) + (2a - c + (b-a) x) F(a) + a (x-1) F(a+1) = 0.
    Re-seeded directly whenever a+n is (near) zero.
    """
    F = [hyp2f1(a, b, c, x, ctx)]
    if count == 1:
        return F
    F.append(hyp2f1(a + 1, b, c, x, ctx))
    return _ladder_extend(F, a, b, c, x, count, ctx)


def _ladder_extend(F, a, b, c, x, count, ctx):
    """Continue the a-ladder in place until len(F) == count."""
    for n in range(len(F) - 1, count - 1):
        an = a + n
        if abs(an) < 1e-8:
            F.append(hyp2f1(an + 1, b, c, x, ctx))
            continue
        nxt = -((c - an) * F[n - 1] + (2 * an - c + (b - an) * x) * F[n]) / (an * (x - 1))
        F.append(nxt)
    return F


def _psi1_series_once(p, x, y, ctx, max_terms):
    a, b, c, cp = p.as_tuple()
    tol = mpf(ctx.tol)
    if y == 0:
        v = hyp2f1(a, b, c, x, ctx)
        return v, mpf(0), 1, abs(v)
    # blocks of the ladder, extended on demand
    block = max(32, int(3 * abs(y)) + 16)
    F = _f_ladder(a, b, c, x, block, ctx)
    coef = mpc(1)
    s = mpc(0)
    max_abs = mpf(0)
    small = 0
    n = 0
    while True:
        if n >= len(F):
            if n >= max_terms:
                raise ConvergenceError("psi1_series: term budget exhausted")
            _ladder_extend(F, a, b, c, x, n + block, ctx)
        t = coef * F[n]
        s += t
        at = abs(t)
        if at > max_abs:
            max_abs = at
        if at <= tol * abs(s) and n > abs(y):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        coef = coef * (a + n) / (cp + n) * y / (n + 1)
        n += 1
        if coef == 0:
            break
    ratio = abs(y) / (n + 1)
    tail = abs(t) * max(10, 1 / max(1 - ratio, mpf(0.1)))
    return s, tail, n + 1, max_abs


def psi1_series(p: Psi1Params, x, y, ctx: PrecisionContext | None = None, max_terms: int | None = None) -> EvalOutcome:
    """Sum over n of (a)_n/(c')_n 2F1[a+n, b; c; x] y^n/n! on the domain x off [1, inf)."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    in_domain_psi1_series(x, y).require("psi1_series")
    max_terms = ctx.max_terms if max_terms is None else max_terms
    work = ctx
    extra = 0
    for _ in range(5):
        with mp.workdps(work.dps):
            s, tail, n, max_abs = _psi1_series_once(p, x, y, work, max_terms)
        loss = float(mp.log10(max_abs / abs(s))) if s != 0 and max_abs > abs(s) else 0.0
        if loss <= extra + 4:
            break
        extra = int(math.ceil(loss)) + 2
        work = ctx.with_digits(ctx.digits + extra)
    else:
        raise ConvergenceError("psi1_series: cancellation not controlled")
    err = tail + max_abs * mpf(10) ** (-work.digits)
    return EvalOutcome(s, float(err), "series", {"terms": n, "extra_digits": extra})


def psi1_double_series(p: Psi1Params, x, y, digits: int = 50) -> mpc:
    """Raw double sum (oracle only; needs |x| < 1). Working precision grows until cancellation is covered."""
    x, y = cnum(x), cnum(y)
    if abs(x) >= 1:
        raise DomainError("double series needs |x| < 1")
    extra = 10
    for _ in range(6):
        with mp.workdps(digits + extra):
            # inner sums must be accurate relative to the final (cancelled) total
            total, biggest = _double_sum(p, x, y, mpf(10) ** (-digits - extra))
            loss = float(mp.log10(biggest / abs(total))) if total != 0 and biggest > abs(total) else 0.0
            if loss + 8 <= extra:
                return +total
        extra = int(loss) + 15
    raise ConvergenceError("double series oracle: cancellation not controlled")


def _double_sum(p, x, y, eps):
    a, b, c, cp = p.as_tuple()
    total = mpc(0)
    biggest = mpf(0)
    row = mpc(1)  # (a)_n / ((c')_n n!) y^n
    n = 0
    quiet = 0
    while True:
        # inner sum over m: (a+n)_m (b)_m / ((c)_m m!) x^m
        inner = mpc(0)
        t = mpc(1)
        m = 0
        while True:
            inner += t
            t = t * (a + n + m) * (b + m) / ((c + m) * (m + 1)) * x
            m += 1
            if abs(t) < eps * abs(inner) * (1 - abs(x)) and m > 5 or t == 0:
                break
        term = row * inner
        total += term
        biggest = max(biggest, abs(term))
        if abs(term) < eps * abs(total) and n > abs(y):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        row = row * (a + n) / (cp + n) * y / (n + 1)
        n += 1
        if row == 0:
            break
    return total, biggest


# --------------------------------------------------------------------------
# integral representations


def psi1_euler_integral(p: Psi1Params, x, y, ctx: PrecisionContext | None = None) -> EvalOutcome:
    """Euler integral over u in (0, 1) with a 1F1 kernel; needs Re c > Re b > 0."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    a, b, c, cp = p.as_tuple()
    if not (c.real > b.real > 0):
        raise DomainError("Euler integral needs Re(c) > Re(b) > 0", witness="Re(c) > Re(b) > 0")
    in_domain_psi1_series(x, y).require("psi1_euler_integral")
    with mp.workdps(ctx.dps):
        bm1, cbm1 = b - 1, c - b - 1

        def f(u, um):
            w = 1 - u * x
            return complex_pow(u, bm1) * complex_pow(um, cbm1) * complex_pow(w, -a) * hyp1f1(a, cp, y / w, ctx)

        r = integrate_01_singular(f, float(bm1.real), float(cbm1.real), ctx)
        pref = gamma_ratio([c], [b, c - b], ctx)
        v = pref * r.value
        return EvalOutcome(v, float(abs(pref) * r.abs_err_est), "euler", {"nodes": r.nodes_used})


def psi1_kummer(p: Psi1Params, x, y, ctx: PrecisionContext | None = None) -> EvalOutcome:
    """(1-x)^(-a) Psi_1[a, c-b; c, c'; x/(x-1), y/(1-x)] through psi1_series."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    if x == 1:
        raise DomainError("Kummer map undefined at x = 1", witness="x = 1")
    with mp.workdps(ctx.dps):
        xp = x / (x - 1)
        yp = y / (1 - x)
        v = in_domain_psi1_series(xp, yp)
        if not v:
            raise DomainError(f"transformed point outside domain: {v.witness}", witness=v.witness)
        inner = psi1_series(Psi1Params(p.a, p.c - p.b, p.c, p.cp), xp, yp, ctx)
        pref = complex_pow(1 - x, -p.a)
        out = EvalOutcome(pref * inner.value, float(abs(pref)) * inner.err_est, "kummer", dict(inner.diagnostics))
        out.diagnostics["transformed"] = {"x": xp, "y": yp}
        return out


def _mb_sigma(a):
    """Line abscissa and the Gamma(-s) poles s = 0..K-1 lying left of it."""
    ra = float(mpc(a).real)
    if ra > 0:
        return -min(ra, 1.0) / 2, 0
    lo = -ra
    hi = lo + 1.5
    pts = sorted({lo, hi} | {float(k) for k in range(math.ceil(lo), math.floor(hi) + 1) if lo <= k <= hi})
    gaps = [(q - p_, (p_ + q) / 2) for p_, q in zip(pts[:-1], pts[1:])]
    width, sigma = max(gaps)
    crossed = int(math.floor(sigma)) + 1 if sigma > 0 else 0
    return sigma, crossed


def psi1_mellin_barnes(p: Psi1Params, x, y, ctx: PrecisionContext | None = None) -> EvalOutcome:
    """Vertical-line Mellin-Barnes integral in s of 2F1[a+s,b;c;x] Gamma(a+s)Gamma(-s)/Gamma(c'+s) (-y)^s."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    a, b, c, cp = p.as_tuple()
    mb_contour_condition(x, y).require("psi1_mellin_barnes")
    if nonpositive_int(a, ctx.pole_tol) is not None:
        raise PoleError("Mellin-Barnes form needs a not in Z<=0", location=a)
    chi_m, chi_p = mb_decay_rates(x, y)
    sigma, crossed = _mb_sigma(a)
    with mp.workdps(ctx.dps):
        lmy = mp.log(-y)
        lg_pref = mp.loggamma(cp) - mp.loggamma(a)

        def f(s):
            g = mp.exp(lg_pref + mp.loggamma(a + s) + mp.loggamma(-s) - mp.loggamma(cp + s) + s * lmy)
            if x == 0:
                return g
            return g * hyp2f1(a + s, b, c, x, ctx)

        rows = (0.0, float(-a.imag))
        dist = min(abs(sigma - math.floor(sigma + 0.5)) if crossed else abs(sigma), abs(sigma + float(a.real)))
        growth = max(0.0, float((a - cp).real) - sigma)
        r = integrate_mb_line(f, sigma, (chi_m, chi_p), ctx, rows=rows, pole_distance=dist, growth_power=growth)
        v = r.value / (2 * mp.pi * 1j)
        # residues at s = k < sigma crossed by the straight line
        coef = mpc(1)
        for k in range(crossed):
            v += coef * hyp2f1(a + k, b, c, x, ctx)
            coef = coef * (a + k) / (cp + k) * y / (k + 1)
        err = r.abs_err_est / (2 * math.pi)
        return EvalOutcome(v, float(err), "mellin_barnes",
                           {"nodes": r.nodes_used, "sigma": sigma, "crossed_residues": crossed,
                            "chi": [chi_m, chi_p]})


# --------------------------------------------------------------------------
# router

METHODS = ("series", "euler", "kummer", "mellin_barnes")


def _series_loss_estimate(x, y):
    """Rough digits lost to cancellation in the nested series."""
    x, y = cnum(x), cnum(y)
    rho = max(1.0, float(1 / abs(1 - x)) if x != 1 else 1.0)
    return float(abs(y)) * rho / math.log(10)


def psi1(p: Psi1Params, x, y, ctx: PrecisionContext | None = None, method: str = "auto") -> EvalOutcome:
    """Psi_1 by a named method or automatic choice (series, then Euler, then MB)."""
    ctx = get_ctx(ctx)
    if method != "auto":
        fn = {"series": psi1_series, "euler": psi1_euler_integral, "kummer": psi1_kummer,
              "mellin_barnes": psi1_mellin_barnes}.get(method)
        if fn is None:
            raise ValueError(f"unknown method {method!r}")
        return fn(p, x, y, ctx)
    x, y = cnum(x), cnum(y)
    if _series_loss_estimate(x, y) < 60:
        return psi1_series(p, x, y, ctx)
    if p.c.real > p.b.real > 0:
        try:
            return psi1_euler_integral(p, x, y, ctx)
        except ConvergenceError:
            pass
    if mb_contour_condition(x, y):
        return psi1_mellin_barnes(p, x, y, ctx)
    return psi1_series(p, x, y, ctx)
