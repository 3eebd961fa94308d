"""Asymptotic expansions of Psi_1: large y (left half-plane, x < 0, 0 < x < 1) and large x."""

from __future__ import annotations

import math

from mpmath import mp, mpc, mpf

from .core import (
    DomainError,
    PoleError,
    PrecisionContext,
    arg,
    cnum,
    complex_pow,
    gamma_ratio,
    get_ctx,
    near_integer,
    nonpositive_int,
    pochhammer,
)
from .expansion import Expansion, SeriesPoly
from .hyp import hyp1f1, hyp2f1
from .psi1 import Psi1Params, mb_contour_condition

SECTOR_DELTA = 0.1


def _require_sector(y, delta):
    y = cnum(y)
    if y == 0 or abs(arg(y)) > mp.pi / 2 - delta:
        raise DomainError(f"y outside the sector |arg y| <= pi/2 - {delta}", witness="|arg y| <= pi/2 - delta")


def _require_real(x, lo, hi, what):
    x = cnum(x)
    if x.imag != 0 or not (lo < x.real < hi):
        raise DomainError(f"{what} requires x real in ({lo}, {hi})", witness=f"x in ({lo}, {hi})")
    return x.real


def psi1_large_y_left(p: Psi1Params, x, y, N: int, ctx: PrecisionContext | None = None) -> Expansion:
    """Algebraic expansion in (-y)**(-a-n) for y -> infinity inside the left-plane region."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    mb_contour_condition(x, y).require("psi1_large_y_left")
    a, b, c, cp = p.as_tuple()
    if nonpositive_int(cp - a, ctx.pole_tol) is not None:
        raise PoleError("Gamma(c'-a) pole: expansion prefactor degenerates", location=cp - a)
    with mp.workdps(ctx.dps):
        pref = gamma_ratio([cp], [cp - a], ctx)
        coeffs = []
        w = mpc(1)
        for n in range(N + 2):
            coeffs.append(hyp2f1(-n, b, c, x, ctx) * w)
            w = w * (a + n) * (1 + a - cp + n) / (n + 1)
        nxt = coeffs.pop()
        return Expansion(
            prefactor=pref,
            exponent_base=-y,
            power_offset=-a,
            coeffs=coeffs,
            remainder_order=float((-a).real) - N - 0.5,
            next_coeff=nxt,
            label="psi1-left",
        )


def lambda_coeffs(alpha, beta, gam, x, N: int, dps: int | None = None) -> list:
    """Laplace-method coefficients lambda_0..lambda_N for the kernel u^(alpha-1)(1-u)^(beta-1)(1-ux)^gam.

    With p(u) + 1 = ux/(ux - 1) the residue reduces to
    (-x)^(-alpha-n) [u^n] (1-u)^(beta-1) (1-ux)^(gam+alpha+n).
    """
    alpha, beta, gam = cnum(alpha), cnum(beta), cnum(gam)
    xr = _require_real(x, -mp.inf, 0, "lambda_coeffs")
    with mp.workdps(dps or mp.dps):
        x = mpf(xr)
        left = SeriesPoly.binomial(-1, beta - 1, N)
        out = []
        for n in range(N + 1):
            right = SeriesPoly.binomial(-x, gam + alpha + n, N)
            out.append(complex_pow(-x, -alpha - n) * (left * right).coefficient(n))
        return out


def lambda_cauchy_oracle(alpha, beta, gam, x, n: int, radius=0.1, nodes=512) -> mpc:
    """Residue by the trapezoid rule on |u| = radius applied to q(u) (p(u)+1)^(-alpha-n).

    The branch-carrying factors are grouped as (x/(ux-1))^(-alpha-n), analytic near u = 0.
    """
    alpha, beta, gam, x = cnum(alpha), cnum(beta), cnum(gam), cnum(x)
    s = mpc(0)
    for j in range(nodes):
        u = radius * mp.expjpi(mpf(2 * j) / nodes)
        f = (1 - u) ** (beta - 1) * (1 - u * x) ** gam * (x / (u * x - 1)) ** (-alpha - n)
        s += f / u**n
    return s / nodes


def psi_coeffs(p: Psi1Params, x, N: int, gamma_mode: str = "derived", dps: int | None = None) -> list:
    """psi_0..psi_N of the x < 0 complete expansion.

    ``gamma_mode="derived"`` (default) lets the third slot of the lambda
    family follow the index k of the 1F1 factor, c'-2a+k, as the
    term-by-term Laplace step produces. ``"theorem"`` takes every lambda from
    the single family (b, c-b, c'-2a); the two agree through psi_1 and the
    fixed family stops improving from psi_2 on.
    """
    a, b, c, cp = p.as_tuple()
    with mp.workdps(dps or mp.dps):
        w = [mpc(1)]
        for k in range(N):
            w.append(w[-1] * (1 - a + k) * (cp - a + k) / (k + 1))
        if gamma_mode == "theorem":
            lam_fixed = lambda_coeffs(b, c - b, cp - 2 * a, x, N)
            fam = [lam_fixed] * (N + 1)
        elif gamma_mode == "derived":
            fam = [lambda_coeffs(b, c - b, cp - 2 * a + k, x, N - k) for k in range(N + 1)]
        else:
            raise ValueError("gamma_mode must be 'theorem' or 'derived'")
        out = []
        for n in range(N + 1):
            s = mpc(0)
            for k in range(n + 1):
                s += w[k] * pochhammer(b, n - k) * fam[k][n - k]
            out.append(s)
        return out


def psi1_large_y_caseii(p: Psi1Params, x, y, N: int, ctx: PrecisionContext | None = None,
                        delta: float = SECTOR_DELTA, gamma_mode: str = "derived") -> Expansion:
    """Exponential expansion e^y y^(a-b-c') sum psi_n y^(-n) for real x < 0, y in the right sector."""
    ctx = get_ctx(ctx)
    a, b, c, cp = p.as_tuple()
    if not (c.real > b.real > 0):
        raise DomainError("Case (ii) needs Re(c) > Re(b) > 0", witness="Re(c) > Re(b) > 0")
    xr = _require_real(x, -mp.inf, 0, "Case (ii)")
    y = cnum(y)
    _require_sector(y, delta)
    if nonpositive_int(a, ctx.pole_tol) is not None:
        raise PoleError("Gamma(a) pole: Case (ii) expansion degenerates", location=a)
    with mp.workdps(ctx.dps):
        pref = gamma_ratio([c, cp], [a, c - b], ctx)
        psi = psi_coeffs(p, mpf(xr), N + 1, gamma_mode)
        nxt = psi.pop()
        return Expansion(
            prefactor=pref,
            exponent_base=y,
            power_offset=a - b - cp,
            coeffs=psi,
            exp_factor=mp.exp(y),
            remainder_order=float((a - b - cp).real) - N - 1,
            next_coeff=nxt,
            label=f"psi1-caseii-{gamma_mode}",
        )


def psi1_large_y_caseiii(p: Psi1Params, x, y, ctx: PrecisionContext | None = None, N: int = 0,
                         delta: float = SECTOR_DELTA, gamma_mode: str = "derived") -> Expansion:
    """0 < x < 1: N = 0 gives the closed leading term; N > 0 composes Case (ii) with the Kummer map."""
    ctx = get_ctx(ctx)
    a, b, c, cp = p.as_tuple()
    if not (c.real > b.real > 0):
        raise DomainError("Case (iii) needs Re(c) > Re(b) > 0", witness="Re(c) > Re(b) > 0")
    xr = _require_real(x, 0, 1, "Case (iii)")
    y = cnum(y)
    _require_sector(y, delta)
    with mp.workdps(ctx.dps):
        x = mpf(xr)
        yp = y / (1 - x)
        if N == 0:
            pref = gamma_ratio([c, cp], [a, b], ctx) * x ** (b - c) * (1 - x) ** (cp + 2 * (c - a - b))
            # first correction, read off the Kummer-mapped Case (ii) series: psi'_1 / psi'_0 * (1 - x) / y
            psi_t = psi_coeffs(Psi1Params(a, c - b, c, cp), x / (x - 1), 1, gamma_mode)
            return Expansion(
                prefactor=pref,
                exponent_base=y,
                power_offset=a + b - c - cp,
                coeffs=[mpc(1)],
                exp_factor=mp.exp(yp),
                remainder_order=float((a + b - c - cp).real) - 1,
                next_coeff=psi_t[1] / psi_t[0] * (1 - x),
                label="psi1-caseiii-leading",
            )
        inner = psi1_large_y_caseii(Psi1Params(a, c - b, c, cp), x / (x - 1), yp, N, ctx, delta, gamma_mode)
        inner.prefactor = inner.prefactor * complex_pow(1 - x, -a)
        inner.composed = True
        inner.label = f"psi1-caseiii-composed-{gamma_mode}"
        return inner


def psi1_large_x(p: Psi1Params, x, y, N: int, ctx: PrecisionContext | None = None) -> Expansion:
    """Two-sided large-x expansion from the 2F1 connection formula (U_1 and U_2 truncated at N)."""
    ctx = get_ctx(ctx)
    x, y = cnum(x), cnum(y)
    a, b, c, cp = p.as_tuple()
    if x.imag == 0 and x.real >= 0:
        raise DomainError("|arg(-x)| < pi violated", witness="|arg(-x)| < pi")
    if abs(x) <= 1:
        raise DomainError("large-x expansion needs |x| > 1", witness="|x| > 1")
    if near_integer(a - b, ctx.pole_tol) is not None:
        raise DomainError("a - b is an integer: connection coefficients degenerate", witness="a - b not in Z")
    with mp.workdps(ctx.dps):
        f_ba = gamma_ratio([c, b - a], [b, c - a], ctx)
        f_ab = gamma_ratio([c, a - b], [a, c - b], ctx)
        c1, c2 = [], []
        w1, w2 = mpc(1), mpc(1)
        for k in range(N + 2):
            c1.append(hyp1f1(-k, cp, y, ctx) * w1)
            c2.append(hyp1f1(a - b - k, cp, y, ctx) * w2)
            w1 = w1 * (a + k) * (1 - c + a + k) / ((1 - b + a + k) * (k + 1))
            w2 = w2 * (1 - c + b + k) * (b + k) / ((1 - a + b + k) * (k + 1))
        n1, n2 = c1.pop(), c2.pop()
        second = Expansion(
            prefactor=f_ab * complex_pow(-x, -b),
            exponent_base=x,
            power_offset=mpc(0),
            coeffs=c2,
            remainder_order=-float(b.real) - N - 1,
            next_coeff=n2,
            label="psi1-large-x-U2",
        )
        return Expansion(
            prefactor=f_ba * complex_pow(-x, -a),
            exponent_base=x,
            power_offset=mpc(0),
            coeffs=c1,
            remainder_order=-float(min(a.real, b.real)) - N - 1,
            next_coeff=n1,
            companion=[second],
            label="psi1-large-x-U1",
        )
