"""Generalized hypergeometric building blocks: pFq series, 2F1, 1F1, 3F2.

The ``hyp*`` functions return bare ``mpc`` values for internal use; the
public operations (:func:`pfq_series`, :func:`gauss_2f1`) wrap them in
:class:`~fkasym.core.EvalOutcome`.
"""

from __future__ import annotations

import math

import gmpy2

from mpmath import mp, mpc, mpf

from .core import (
    ConvergenceError,
    DomainError,
    EvalOutcome,
    PoleError,
    PrecisionContext,
    cnum,
    complex_pow,
    gamma_ratio,
    get_ctx,
    near_integer,
    nonpositive_int,
    rgamma,
)
from .expansion import Expansion

MAX_EXTRA_DIGITS = 4000


def _terminating_degree(upper, tol):
    degs = [nonpositive_int(a, tol) for a in upper]
    degs = [d for d in degs if d is not None]
    return min(degs) if degs else None


def _lean(v):
    """mpf when the imaginary part vanishes (cheaper arithmetic)."""
    return v.real if isinstance(v, mpc) and v.imag == 0 else v


def _stop_tol(tol, upper, lower, z):
    """Per-term stopping threshold: two digits below tol, scaled by the geometric tail factor."""
    t = mpf(tol) / 100
    if len(upper) == len(lower) + 1:
        t *= 1 - min(abs(mpc(z)), mpf("0.999"))
    return t


def _to_gmp(v):
    v = mpc(v)
    return gmpy2.mpc(_mpf_to_gmp(v.real), _mpf_to_gmp(v.imag))


def _mpf_to_gmp(x):
    sign, man, exp, _ = x._mpf_
    if not man and exp:
        raise ConvergenceError("non-finite value in series kernel")
    r = gmpy2.mul_2exp(gmpy2.mpfr(man), exp) if man else gmpy2.mpfr(0)
    return -r if sign else r


def _gmp_to_mpf(r):
    if gmpy2.is_zero(r):
        return mpf(0)
    if not gmpy2.is_finite(r):
        return mpf("nan")
    m, e = r.as_mantissa_exp()
    return mpf((int(m), int(e)))


def _from_gmp(w):
    return mpc(_gmp_to_mpf(w.real), _gmp_to_mpf(w.imag))


def _series_once_gmp(upper, lower, z, tol, max_terms, poly_deg):
    """Same contract as :func:`_series_once`, with the loop in gmpy2 arithmetic."""
    with gmpy2.context(precision=mp.prec):
        up = [_to_gmp(a) for a in upper]
        lo = [_to_gmp(b) for b in lower]
        zz = _to_gmp(z)
        tol2 = _mpf_to_gmp(_stop_tol(tol, upper, lower, z)) ** 2
        s = gmpy2.mpc(1)
        t = gmpy2.mpc(1)
        max2 = gmpy2.mpfr(1)
        small = 0
        n = 0
        last2 = gmpy2.mpfr(0)
        done = False
        while True:
            if poly_deg is not None and n >= poly_deg:
                done = True
                break
            num = up[0] + n
            for a in up[1:]:
                num *= a + n
            den = gmpy2.mpc(n + 1)
            for b in lo:
                den *= b + n
            t = t * (num * zz) / den
            s += t
            n += 1
            at2 = gmpy2.norm(t)
            if not gmpy2.is_finite(at2):
                raise ConvergenceError("overflow in pFq series")
            if at2 > max2:
                max2 = at2
            if poly_deg is None and at2 <= tol2 * gmpy2.norm(s):
                small += 1
                if small >= 3:
                    last2 = at2
                    break
            else:
                small = 0
            if at2 == 0:
                done = True
                break
            if n >= max_terms:
                raise ConvergenceError(f"pFq series did not converge in {max_terms} terms")
        s_out = _from_gmp(s)
        max_abs = _gmp_to_mpf(gmpy2.sqrt(max2))
        last = _gmp_to_mpf(gmpy2.sqrt(last2))
    if done:
        return s_out, mpf(0), n + 1, max_abs
    ratio = abs(z) if len(upper) == len(lower) + 1 else mpf(0)
    tail = last * max(10, 1 / (1 - min(ratio, mpf("0.999"))))
    return s_out, tail, n + 1, max_abs


def _series_once(upper, lower, z, tol, max_terms, poly_deg):
    upper = [_lean(a) for a in upper]
    lower = [_lean(b) for b in lower]
    z = _lean(z)
    s = mpc(1)
    t = mpc(1)
    max2 = mpf(1)
    tol2 = _stop_tol(tol, upper, lower, z) ** 2
    small = 0
    n = 0
    last2 = mpf(0)
    while True:
        if poly_deg is not None and n >= poly_deg:
            return s, mpf(0), n + 1, mp.sqrt(max2)
        num = upper[0] + n
        for a in upper[1:]:
            num *= a + n
        den = mpf(n + 1)
        for b in lower:
            den *= b + n
        t = t * (num * z) / den
        s += t
        n += 1
        at2 = t.real * t.real + t.imag * t.imag
        if at2 > max2:
            max2 = at2
        if poly_deg is None and at2 <= tol2 * (s.real * s.real + s.imag * s.imag):
            small += 1
            if small >= 3:
                last2 = at2
                break
        else:
            small = 0
        if at2 == 0:
            return s, mpf(0), n + 1, mp.sqrt(max2)
        if n >= max_terms:
            raise ConvergenceError(f"pFq series did not converge in {max_terms} terms")
    # first omitted term magnitude; account for geometric tail when p = q + 1
    ratio = abs(z) if len(upper) == len(lower) + 1 else mpf(0)
    tail = mp.sqrt(last2) * max(10, 1 / (1 - min(ratio, mpf("0.999"))))
    return s, tail, n + 1, mp.sqrt(max2)


def hyp_series(upper, lower, z, ctx: PrecisionContext | None = None, return_info=False):
    """Sum of a pFq series at working precision with a cancellation guard.

    If the largest term exceeds the sum by more digits than the guard
    covers, the sum is recomputed with enough extra digits.
    """
    ctx = get_ctx(ctx)
    upper = [cnum(a) for a in upper]
    lower = [cnum(b) for b in lower]
    z = cnum(z)
    tol = mpf(ctx.tol)
    poly_deg = _terminating_degree(upper, ctx.pole_tol)
    for b in lower:
        nb = nonpositive_int(b, ctx.pole_tol)
        if nb is not None and (poly_deg is None or poly_deg > nb):
            raise PoleError(f"lower parameter {mp.nstr(b, 8)} is a non-positive integer", location=b)
    if poly_deg is None and len(upper) > len(lower) + 1:
        raise DomainError("divergent pFq with p > q + 1")
    if poly_deg is None and len(upper) == len(lower) + 1 and abs(z) >= 1:
        raise DomainError("pFq series needs |z| < 1", witness="|z| >= 1")
    if poly_deg is not None:
        # use exact integer zero for the terminating parameter
        upper = [mpc(-poly_deg) if nonpositive_int(a, ctx.pole_tol) == poly_deg else a for a in upper]
    dps = ctx.dps
    for _ in range(4):
        with mp.workdps(dps):
            s, tail, nterms, max_abs = _series_once_gmp(upper, lower, z, tol, ctx.max_terms, poly_deg)
        if s == 0:
            loss = 0 if max_abs == 0 else mp.inf
        else:
            loss = float(mp.log10(max_abs / abs(s))) if max_abs > abs(s) else 0.0
        if loss <= dps - ctx.digits - 2:
            break
        if loss == mp.inf or dps - ctx.dps > MAX_EXTRA_DIGITS:
            if poly_deg is not None:
                break
            raise ConvergenceError("catastrophic cancellation in pFq series")
        dps = ctx.dps + int(math.ceil(loss)) + 4
    err = tail + max_abs * mpf(10) ** (-(dps - 2)) if s != 0 else tail
    if return_info:
        return mpc(s), err, nterms
    return mpc(s)


def pfq_series(upper, lower, z, ctx: PrecisionContext | None = None) -> EvalOutcome:
    """Generalized hypergeometric series with error estimate (first omitted term x 10)."""
    s, err, n = hyp_series(upper, lower, z, ctx, return_info=True)
    return EvalOutcome(s, float(err), f"{len(upper)}F{len(lower)}-series", {"terms": n})


# --------------------------------------------------------------------------
# Gauss 2F1


def _f_gamma(gam, a, b, ctx):
    # Gamma(gam) Gamma(a-b) / (Gamma(a) Gamma(gam-b))
    return gamma_ratio([gam, a - b], [a, gam - b], ctx)


def _direct(a, b, c, z, ctx):
    return hyp_series([a, b], [c], z, ctx)


def _connection_raw(a, b, c, z, ctx):
    w = 1 / z
    t1 = _f_gamma(c, b, a, ctx) * complex_pow(-z, -a) * _direct(a, 1 - c + a, 1 - b + a, w, ctx)
    t2 = _f_gamma(c, a, b, ctx) * complex_pow(-z, -b) * _direct(b, 1 - c + b, 1 - a + b, w, ctx)
    return t1 + t2


def _one_minus_raw(a, b, c, z, ctx):
    w = 1 - z
    t1 = gamma_ratio([c, c - a - b], [c - a, c - b], ctx) * _direct(a, b, a + b - c + 1, w, ctx)
    t2 = gamma_ratio([c, a + b - c], [a, b], ctx) * complex_pow(w, c - a - b) * _direct(c - a, c - b, c - a - b + 1, w, ctx)
    return t1 + t2


def _perturbed(raw, a, b, c, z, ctx, degenerate):
    """Evaluate ``raw`` directly, or average two b-perturbed evaluations if degenerate."""
    if not degenerate:
        return raw(a, b, c, z, ctx)
    half = max(ctx.digits // 2, 5)
    eps = mpf(10) ** (-half)
    hi = ctx.with_digits(ctx.digits + half + 4)
    with mp.workdps(hi.dps):
        v = (raw(a, b + eps, c, z, hi) + raw(a, b - eps, c, z, hi)) / 2
    return v


def _connection(a, b, c, z, ctx):
    return _perturbed(_connection_raw, a, b, c, z, ctx, near_integer(a - b, ctx.pole_tol) is not None)


def _one_minus(a, b, c, z, ctx):
    return _perturbed(_one_minus_raw, a, b, c, z, ctx, near_integer(c - a - b, ctx.pole_tol) is not None)


def _taylor_step(a, b, c, z0, f0, df0, z1, ctx):
    """Continue (F, F') from z0 to z1 with the Taylor series of the Gauss ODE."""
    w = z1 - z0
    p0 = z0 * (1 - z0)
    p1 = 1 - 2 * z0
    q0 = c - (a + b + 1) * z0
    q1 = -(a + b + 1)
    ab = a * b
    f = [f0, df0]
    s = f0 + df0 * w
    ds = df0
    wn = w
    tol = mpf(ctx.tol) * mpf("1e-2")
    small = 0
    n = 0
    while True:
        fn2 = -((p1 * n * (n + 1) + q0 * (n + 1)) * f[n + 1] + (-n * (n - 1) + q1 * n - ab) * f[n]) / (p0 * (n + 1) * (n + 2))
        f.append(fn2)
        ds += (n + 2) * fn2 * wn
        wn *= w
        t = fn2 * wn
        s += t
        n += 1
        if abs(t) <= tol * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if n > 5000:
            raise ConvergenceError("Taylor continuation of 2F1 did not converge")
    return s, ds


def _recentered(a, b, c, z, ctx):
    u = z / abs(z)
    z0 = u / 2
    f = _direct(a, b, c, z0, ctx)
    df = a * b / c * _direct(a + 1, b + 1, c + 1, z0, ctx)
    r0 = abs(z0)
    steps = max(1, int(math.ceil(float(abs(z) - r0) / 0.25)))
    h = (z - z0) / steps
    zk = z0
    for _ in range(steps):
        f, df = _taylor_step(a, b, c, zk, f, df, zk + h, ctx)
        zk = zk + h
    return f


DIRECT_RADIUS = 0.8
TRANSFORM_RADIUS = 0.87


def hyp2f1(a, b, c, z, ctx: PrecisionContext | None = None, return_route=False):
    """Principal-branch 2F1 for z off [1, inf)."""
    ctx = get_ctx(ctx)
    a, b, c, z = cnum(a), cnum(b), cnum(c), cnum(z)
    route = "series"
    with mp.workdps(ctx.dps):
        poly = _terminating_degree([a, b], ctx.pole_tol)
        nc = nonpositive_int(c, ctx.pole_tol)
        if nc is not None and (poly is None or poly > nc):
            raise PoleError(f"2F1 lower parameter c = {mp.nstr(c, 8)} is a non-positive integer", location=c)
        if z == 0:
            v = mpc(1)
        elif poly is not None or abs(z) <= DIRECT_RADIUS:
            v = _direct(a, b, c, z, ctx)
        else:
            if z.imag == 0 and z.real >= 1:
                raise DomainError("2F1 argument on the branch cut [1, inf)", witness="z in [1, inf)")
            cands = {
                "pfaff": abs(z / (z - 1)),
                "one_minus": abs(1 - z),
                "pfaff_one_minus": abs(1 / (1 - z)),
            }
            if abs(z) > 1:
                cands["connection"] = 1 / abs(z)
                cands["pfaff_connection"] = abs((z - 1) / z)
            route = min(cands, key=cands.get)
            if cands[route] > TRANSFORM_RADIUS:
                route = "taylor"
            if route == "pfaff":
                v = complex_pow(1 - z, -a) * _direct(a, c - b, c, z / (z - 1), ctx)
            elif route == "one_minus":
                v = _one_minus(a, b, c, z, ctx)
            elif route == "pfaff_one_minus":
                v = complex_pow(1 - z, -a) * _one_minus(a, c - b, c, z / (z - 1), ctx)
            elif route == "connection":
                v = _connection(a, b, c, z, ctx)
            elif route == "pfaff_connection":
                v = complex_pow(1 - z, -a) * _connection(a, c - b, c, z / (z - 1), ctx)
            else:
                v = _recentered(a, b, c, z, ctx)
    v = mpc(v)
    if return_route:
        return v, route
    return v


def gauss_2f1(a, b, c, z, ctx: PrecisionContext | None = None) -> EvalOutcome:
    ctx = get_ctx(ctx)
    v, route = hyp2f1(a, b, c, z, ctx, return_route=True)
    return EvalOutcome(v, float(abs(v)) * ctx.tol, "2F1-" + route, {"route": route})


def connection_2f1(a, b, c, z, ctx: PrecisionContext | None = None) -> mpc:
    """2F1 through the 1/z connection formula regardless of |z| (|z| > 1 needed)."""
    ctx = get_ctx(ctx)
    a, b, c, z = cnum(a), cnum(b), cnum(c), cnum(z)
    if abs(z) <= 1:
        raise DomainError("connection formula needs |z| > 1")
    with mp.workdps(ctx.dps):
        return mpc(_connection(a, b, c, z, ctx))


def pfaff_2f1(a, b, c, z, ctx: PrecisionContext | None = None) -> mpc:
    """2F1 through the z/(z-1) transformation followed by the standard router."""
    ctx = get_ctx(ctx)
    a, b, c, z = cnum(a), cnum(b), cnum(c), cnum(z)
    with mp.workdps(ctx.dps):
        return mpc(complex_pow(1 - z, -a) * hyp2f1(a, c - b, c, z / (z - 1), ctx))


# --------------------------------------------------------------------------
# Kummer 1F1


def _asym_sum(p, q, w, tol, max_terms=400):
    """sum_n (p)_n (q)_n / n! * w**n up to the smallest term; returns (sum, smallest)."""
    s = mpc(1)
    t = mpc(1)
    best = mpf(1)
    for n in range(max_terms):
        t = t * (p + n) * (q + n) / (n + 1) * w
        at = abs(t)
        if at > best and n > 2:
            break
        best = at
        s += t
        if at <= tol * abs(s):
            break
        if t == 0:
            best = mpf(0)
            break
    return s, best


def _hyp1f1_asym(a, c, z, ctx):
    tol = mpf(10) ** (-ctx.dps)
    left = mpc(0)
    err = mpf(0)
    rg = rgamma(c - a)
    if rg != 0:
        s, e = _asym_sum(a, 1 + a - c, -1 / z, tol)
        pref = mp.gamma(c) * rg * complex_pow(-z, -a)
        left = pref * s
        err += abs(pref) * e
    right = mpc(0)
    rga = rgamma(a)
    if rga != 0:
        s, e = _asym_sum(1 - a, c - a, 1 / z, tol)
        pref = mp.gamma(c) * rga * mp.exp(z) * complex_pow(z, a - c)
        right = pref * s
        err += abs(pref) * e
    return left + right, err


def hyp1f1(a, c, z, ctx: PrecisionContext | None = None) -> mpc:
    """Kummer's 1F1: series for moderate |z| (guarded), compound asymptotics for large |z|."""
    ctx = get_ctx(ctx)
    a, c, z = cnum(a), cnum(c), cnum(z)
    poly = nonpositive_int(a, ctx.pole_tol)
    if poly is None and abs(z) > 2.4 * ctx.dps + 10:
        with mp.workdps(ctx.dps):
            v, err = _hyp1f1_asym(a, c, z, ctx)
        if err <= mpf(ctx.tol) * 1e-2 * abs(v):
            return mpc(v)
    return hyp_series([a], [c], z, ctx)


def hyp3f2(upper, lower, z, ctx: PrecisionContext | None = None) -> mpc:
    """3F2: own series inside |z| <= 0.9, mpmath continuation outside."""
    ctx = get_ctx(ctx)
    z = cnum(z)
    upper = [cnum(a) for a in upper]
    lower = [cnum(b) for b in lower]
    if _terminating_degree(upper, ctx.pole_tol) is not None or abs(z) <= 0.9:
        return hyp_series(upper, lower, z, ctx)
    if z.imag == 0 and z.real >= 1:
        raise DomainError("3F2 argument on the branch cut [1, inf)", witness="z in [1, inf)")
    with mp.workdps(ctx.dps):
        return mpc(mp.hyp3f2(*upper, *lower, z))


def kummer_1f1_asym(a, c, z, N: int, ctx: PrecisionContext | None = None) -> Expansion:
    """One-sided large-|z| expansion of 1F1[a; c; z] with N+1 coefficients.

    Re z < 0 gives the algebraic form in (-z)**(-a-n); Re z > 0 the
    exponential form e**z z**(a-c-n).
    """
    ctx = get_ctx(ctx)
    a, c, z = cnum(a), cnum(c), cnum(z)
    if z == 0 or z.real == 0:
        raise DomainError("kummer_1f1_asym needs Re(z) != 0", witness="Re(z) = 0")
    with mp.workdps(ctx.dps):
        if z.real < 0:
            if nonpositive_int(c - a, ctx.pole_tol) is not None:
                raise PoleError("Gamma(c-a) pole: left expansion degenerate", location=c - a)
            p, q = a, 1 + a - c
            pref = gamma_ratio([c], [c - a], ctx)
            base, offset, expf = -z, -a, None
        else:
            if nonpositive_int(a, ctx.pole_tol) is not None:
                raise PoleError("Gamma(a) pole: right expansion degenerate", location=a)
            p, q = 1 - a, c - a
            pref = gamma_ratio([c], [a], ctx)
            base, offset, expf = z, a - c, mp.exp(z)
        coeffs = [mpc(1)]
        for n in range(N + 1):
            coeffs.append(coeffs[-1] * (p + n) * (q + n) / (n + 1))
        nxt = coeffs.pop()
        return Expansion(
            prefactor=pref,
            exponent_base=base,
            power_offset=offset,
            coeffs=coeffs,
            exp_factor=expf,
            remainder_order=float(offset.real) - N - 1,
            next_coeff=nxt,
            label="1F1-left" if z.real < 0 else "1F1-right",
        )
