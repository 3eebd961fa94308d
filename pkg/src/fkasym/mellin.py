"""Mellin transform of Psi_F(t) = 1F1[xi; eta; lambda t] Psi_1[a, b; c, c'; x, mu t]."""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .core import (
    DomainError,
    PrecisionContext,
    cnum,
    complex_pow,
    gamma_ratio,
    get_ctx,
    near_integer,
    symmetric_limit,
)
from .hyp import hyp1f1, hyp3f2
from .kdf import KdfParams, in_domain_F, kdf
from .psi1 import Psi1Params, mb_contour_condition, psi1
from .quadrature import QuadResult, integrate_01_singular, integrate_interval


@dataclass(frozen=True)
class PsiFSpec:
    xi: mpc
    eta: mpc
    p: Psi1Params
    lam: mpc
    mu: mpc
    x: mpc

    def __post_init__(self):
        for name in ("xi", "eta", "lam", "mu", "x"):
            object.__setattr__(self, name, cnum(getattr(self, name)))
        if not self.lam.real < 0:
            raise DomainError("Re(lambda) < 0 required", witness="Re(lambda) < 0")
        mb_contour_condition(self.x, self.mu).require("PsiFSpec")

    @classmethod
    def of(cls, xi, eta, a, b, c, cp, lam, mu, x) -> "PsiFSpec":
        return cls(cnum(xi), cnum(eta), Psi1Params.of(a, b, c, cp), cnum(lam), cnum(mu), cnum(x))


def mellin_1f1_product(a, b, c, d, omega, sigma, s, ctx: PrecisionContext | None = None) -> mpc:
    """Mellin transform of 1F1[a; b; -omega t] 1F1[c; d; -sigma t].

    The second term carries Gamma(c) in its denominator (the table entry this
    follows prints Gamma(d) there, which fails the a = b check).
    """
    ctx = get_ctx(ctx)
    a, b, c, d, omega, sigma, s = (cnum(v) for v in (a, b, c, d, omega, sigma, s))
    if not (omega.real > 0 and sigma.real > 0):
        raise DomainError("Re(omega) > 0 and Re(sigma) > 0 required", witness="Re(omega), Re(sigma) > 0")
    if not (0 < s.real < (a + c).real):
        raise DomainError("0 < Re(s) < Re(a + c) required", witness="0 < Re(s) < Re(a+c)")
    with mp.workdps(ctx.dps):
        z = -sigma / omega
        t1 = complex_pow(omega, -s) * gamma_ratio([b, s, a - s], [a, b - s], ctx)
        if t1 != 0:
            t1 *= hyp3f2((c, s, s - b + 1), (d, s - a + 1), z, ctx)
        t2 = complex_pow(sigma, a - s) * complex_pow(omega, -a) * gamma_ratio([b, d, s - a, a + c - s],
                                                                              [c, b - a, a + d - s], ctx)
        if t2 != 0:
            t2 *= hyp3f2((a, a - b + 1, a + c - s), (a - s + 1, a + d - s), z, ctx)
        return t1 + t2


def _closed_terms(spec: PsiFSpec, s, ctx):
    xi, eta, lam, mu, x = spec.xi, spec.eta, spec.lam, spec.mu, spec.x
    a, b, c, cp = spec.p.as_tuple()
    y = -mu / lam
    C1 = gamma_ratio([eta, cp, s - xi, a + xi - s], [a, eta - xi, xi + cp - s], ctx)
    C2 = gamma_ratio([eta, s, xi - s], [xi, eta - s], ctx)
    out = mpc(0)
    if C1 != 0:
        F1 = kdf(KdfParams(a + xi - s, b, c, xi, xi - eta + 1, xi + 1 - s, xi + cp - s), x, y, ctx).value
        out += C1 * complex_pow(-mu, -s) * complex_pow(mu / lam, xi) * F1
    if C2 != 0:
        F2 = kdf(KdfParams(a, b, c, s, s - eta + 1, cp, s - xi + 1), x, y, ctx).value
        out += C2 * complex_pow(-lam, -s) * F2
    return out


def mellin_psiF_closed(spec: PsiFSpec, s, ctx: PrecisionContext | None = None) -> mpc:
    """Two Kampe de Feriet terms with Gamma prefactors C1(s), C2(s).

    At s - xi within 10^(-digits/3) of an integer the individual terms blow up
    and cancel; the value there comes from symmetric samples at raised precision.
    """
    ctx = get_ctx(ctx)
    s = cnum(s)
    x, y = spec.x, -spec.mu / spec.lam
    in_domain_F(x, y, ctx).require("mellin_psiF_closed")
    if not (0 < s.real < (spec.xi + spec.p.a).real):
        raise DomainError("0 < Re(s) < Re(xi + a) required", witness="0 < Re(s) < Re(xi+a)")
    eps = mpf(10) ** (-(ctx.digits // 3))
    k = near_integer(s - spec.xi, float(eps))
    if k is None:
        with mp.workdps(ctx.dps):
            return _closed_terms(spec, s, ctx)
    work = ctx.with_digits(ctx.digits + ctx.digits // 3 + 4)
    with mp.workdps(work.dps):
        d = s - (spec.xi + k)
        # s +- h and s +- 2h all stay at least eps/2 off the removable point
        h = eps if abs(d) < eps / 2 else 2 * eps
        return +symmetric_limit(lambda t: _closed_terms(spec, t, work), s, h)


def mellin_psiF_direct(spec: PsiFSpec, s, ctx: PrecisionContext | None = None, decay_order=None,
                       split=None) -> QuadResult:
    """Quadrature of the Mellin integral with Psi_1 from the method router.

    [0, T] by tanh-sinh; [T, inf) through t = T/u, which turns the algebraic
    decay t^(s-1-decay_order) into an integrable power of u at u = 0.
    ``decay_order`` defaults to Re(xi + a).
    """
    ctx = get_ctx(ctx)
    s = cnum(s)
    xi, eta, lam, mu, x = spec.xi, spec.eta, spec.lam, spec.mu, spec.x
    p = spec.p
    order = float((xi + p.a).real) if decay_order is None else float(decay_order)
    if not (0 < s.real < order):
        raise DomainError("0 < Re(s) < decay order required", witness="0 < Re(s) < decay order")
    with mp.workdps(ctx.dps):
        T = mpf(split) if split is not None else mpf(4) / max(abs(lam), abs(mu))

        def f(t):
            return complex_pow(t, s - 1) * hyp1f1(xi, eta, lam * t, ctx) * psi1(p, x, mu * t, ctx).value

        def g(u, um):
            return f(T / u) * T / u**2

        head = integrate_interval(f, 0, T, ctx, p_left=float(s.real) - 1)
        tail = integrate_01_singular(g, order - float(s.real) - 1, 0.0, ctx)
        return QuadResult(head.value + tail.value, head.abs_err_est + tail.abs_err_est,
                          head.nodes_used + tail.nodes_used)


def mellin_1f1_direct(a, b, c, d, omega, sigma, s, ctx: PrecisionContext | None = None) -> QuadResult:
    """Quadrature oracle for mellin_1f1_product, same head/tail split."""
    ctx = get_ctx(ctx)
    a, b, c, d, omega, sigma, s = (cnum(v) for v in (a, b, c, d, omega, sigma, s))
    order = float((a + c).real)
    with mp.workdps(ctx.dps):
        T = mpf(4) / max(abs(omega), abs(sigma))

        def f(t):
            return complex_pow(t, s - 1) * hyp1f1(a, b, -omega * t, ctx) * hyp1f1(c, d, -sigma * t, ctx)

        def g(u, um):
            return f(T / u) * T / u**2

        head = integrate_interval(f, 0, T, ctx, p_left=float(s.real) - 1)
        tail = integrate_01_singular(g, order - float(s.real) - 1, 0.0, ctx)
        return QuadResult(head.value + tail.value, head.abs_err_est + tail.abs_err_est,
                          head.nodes_used + tail.nodes_used)


def residue_at_zero(spec: PsiFSpec, ctx: PrecisionContext | None = None, radius=1e-3, nodes=64) -> mpc:
    """Contour average of s * M[Psi_F; s] on a small circle about s = 0; equals Psi_F(0) = 2F1[a, b; c; x]."""
    ctx = get_ctx(ctx)
    acc = mpc(0)
    with mp.workdps(ctx.dps):
        for j in range(nodes):
            s = radius * mp.expjpi(mpf(2 * j) / nodes)
            acc += s * _closed_terms(spec, s, ctx)
        return acc / nodes

