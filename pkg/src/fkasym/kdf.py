"""Kampe de Feriet F^{1:1;2}_{0:1;2}: single-sum series and Euler integral.

F[a1 : b1; d1, d2 / - : c1; e1, e2; x, y]
  = sum_{m,n} (a1)_{m+n} (b1)_m (d1)_n (d2)_n / ((c1)_m (e1)_n (e2)_n m! n!) x**m y**n.
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
    cnum,
    complex_pow,
    gamma_ratio,
    get_ctx,
    nonpositive_int,
)
from .hyp import hyp2f1, hyp3f2
from .psi1 import YES, DomainVerdict, _f_ladder, _ladder_extend, _on_cut
from .quadrature import integrate_01_singular

GRID_POINTS = 64


@dataclass(frozen=True)
class KdfParams:
    a1: mpc
    b1: mpc
    c1: mpc
    d1: mpc
    d2: mpc
    e1: mpc
    e2: mpc

    def __post_init__(self):
        for name in ("a1", "b1", "c1", "d1", "d2", "e1", "e2"):
            object.__setattr__(self, name, cnum(getattr(self, name)))
        for name, guard in (("c1", ("a1", "b1")), ("e1", ("a1", "d1", "d2")), ("e2", ("a1", "d1", "d2"))):
            v = getattr(self, name)
            k = nonpositive_int(v, 1e-12)
            if k is None:
                continue
            # a non-positive integer lower parameter is harmless if an upper one truncates first
            trunc = [nonpositive_int(getattr(self, g), 1e-12) for g in guard]
            if not any(t is not None and t <= k for t in trunc):
                raise PoleError(f"{name} is a non-positive integer", location=v)

    @classmethod
    def of(cls, a1, b1, c1, d1, d2, e1, e2) -> "KdfParams":
        return cls(*(cnum(v) for v in (a1, b1, c1, d1, d2, e1, e2)))

    def as_tuple(self):
        return (self.a1, self.b1, self.c1, self.d1, self.d2, self.e1, self.e2)


def in_domain_F(x, y, ctx: PrecisionContext | None = None) -> DomainVerdict:
    """(x, y) in D_F: x != 1, |arg(1-x)| < pi, |y| < min(1, |1-x|), strict by a relative margin."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    margin = mpf(10) ** (-ctx.digits + 6)
    if abs(1 - x) <= margin:
        return DomainVerdict(False, "x = 1")
    if _on_cut(x):
        return DomainVerdict(False, "|arg(1-x)| < pi violated (x on [1, inf))")
    bound = min(mpf(1), abs(1 - x))
    if not abs(y) < bound * (1 - margin):
        return DomainVerdict(False, "|y| < min(1, |1-x|) violated")
    return YES


def _series_rate(x, y):
    return abs(y) / min(mpf(1), abs(1 - x))


def _kdf_series_once(p, x, y, ctx, max_terms):
    a1, b1, c1, d1, d2, e1, e2 = p.as_tuple()
    tol = mpf(ctx.tol)
    if y == 0:
        v = hyp2f1(a1, b1, c1, x, ctx)
        return v, mpf(0), 1, abs(v)
    r = _series_rate(x, y)
    stop = tol / 100 * (1 - r)
    block = 64
    F = _f_ladder(a1, b1, c1, x, block, ctx)
    coef = mpc(1)
    s = mpc(0)
    max_abs = mpf(0)
    small = 0
    n = 0
    while True:
        if n >= len(F):
            if n >= max_terms:
                raise ConvergenceError("kdf_series: term budget exhausted")
            _ladder_extend(F, a1, b1, c1, x, n + block, ctx)
        t = coef * F[n]
        s += t
        at = abs(t)
        if at > max_abs:
            max_abs = at
        if at <= stop * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        coef = coef * (a1 + n) * (d1 + n) * (d2 + n) / ((e1 + n) * (e2 + n) * (n + 1)) * y
        n += 1
        if coef == 0:
            break
    tail = abs(t) * r / (1 - r)
    return s, tail, n + 1, max_abs


def kdf_series(p: KdfParams, x, y, ctx: PrecisionContext | None = None, max_terms: int | None = None) -> EvalOutcome:
    """Sum over n of (a1)_n (d1)_n (d2)_n / ((e1)_n (e2)_n) 2F1[a1+n, b1; c1; x] y^n / n! on D_F."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    in_domain_F(x, y, ctx).require("kdf_series")
    max_terms = ctx.max_terms if max_terms is None else max_terms
    work = ctx
    extra = 0
    for _ in range(5):
        with mp.workdps(work.dps):
            s, tail, n, max_abs = _kdf_series_once(p, x, y, work, max_terms)
        loss = float(mp.log10(max_abs / abs(s))) if s != 0 and max_abs > abs(s) else 0.0
        if loss <= extra + 4:
            break
        extra = int(math.ceil(loss)) + 2
        work = ctx.with_digits(ctx.digits + extra)
    else:
        raise ConvergenceError("kdf_series: cancellation not controlled")
    err = tail + max_abs * mpf(10) ** (-work.digits)
    return EvalOutcome(+s, float(err), "series", {"terms": n, "extra_digits": extra})


def integral_condition(x, y) -> DomainVerdict:
    """Simpler condition: x real < 1, |arg(1-y)| < pi, |arg(1 - y/(1-x))| < pi."""
    x, y = cnum(x), cnum(y)
    if x.imag != 0 or not x.real < 1:
        return DomainVerdict(False, "x real and < 1 violated")
    if _on_cut(y):
        return DomainVerdict(False, "|arg(1-y)| < pi violated")
    if _on_cut(y / (1 - x)):
        return DomainVerdict(False, "|arg(1 - y/(1-x))| < pi violated")
    return YES


def integral_condition_grid(x, y, points: int = GRID_POINTS) -> DomainVerdict:
    """u-uniform argument condition sampled on a uniform grid of [0, 1]."""
    x, y = cnum(x), cnum(y)
    for j in range(points):
        u = mpf(j) / (points - 1)
        w = 1 - u * x
        if w.imag == 0 and w.real <= 0:
            return DomainVerdict(False, f"1 - ux on (-inf, 0] at u = {float(u):.4g}")
        if _on_cut(y / w):
            return DomainVerdict(False, f"y/(1-ux) on [1, inf) at u = {float(u):.4g}")
    return YES


def kdf_euler_integral(p: KdfParams, x, y, ctx: PrecisionContext | None = None) -> EvalOutcome:
    """Euler integral in u with a 3F2[d1, d2, a1; e1, e2; y/(1-ux)] kernel; needs Re c1 > Re b1 > 0."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    a1, b1, c1, d1, d2, e1, e2 = p.as_tuple()
    if not (c1.real > b1.real > 0):
        raise DomainError("Euler integral needs Re(c1) > Re(b1) > 0", witness="Re(c1) > Re(b1) > 0")
    diag = {}
    if not integral_condition(x, y):
        integral_condition_grid(x, y).require("kdf_euler_integral")
        diag["condition"] = "verified on grid only"
    with mp.workdps(ctx.dps):
        bm1, cbm1 = b1 - 1, c1 - b1 - 1
        upper, lower = (d1, d2, a1), (e1, e2)

        def f(u, um):
            w = 1 - u * x
            k = hyp3f2(upper, lower, y / w, ctx) if y != 0 else 1
            return complex_pow(u, bm1) * complex_pow(um, cbm1) * complex_pow(w, -a1) * k

        r = integrate_01_singular(f, float(bm1.real), float(cbm1.real), ctx)
        pref = gamma_ratio([c1], [b1, c1 - b1], ctx)
        diag["nodes"] = r.nodes_used
        return EvalOutcome(pref * r.value, float(abs(pref) * r.abs_err_est), "euler", diag)


METHODS = ("series", "euler")


def kdf(p: KdfParams, x, y, ctx: PrecisionContext | None = None, method: str = "auto") -> EvalOutcome:
    """Series on D_F, Euler integral elsewhere."""
    if method == "series":
        return kdf_series(p, x, y, ctx)
    if method == "euler":
        return kdf_euler_integral(p, x, y, ctx)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    ctx = get_ctx(ctx)
    if in_domain_F(x, y, ctx) and _series_rate(cnum(x), cnum(y)) < 0.9:
        return kdf_series(p, x, y, ctx)
    if p.c1.real > p.b1.real > 0:
        return kdf_euler_integral(p, x, y, ctx)
    return kdf_series(p, x, y, ctx)
