"""Saran's F_K: series forms, Laplace integral, and large-(y, z) expansions.

F_K = sum_{m,n,p} (alpha1)_m (alpha2)_{n+p} (beta1)_{m+p} (beta2)_n
                  / ((gamma1)_m (gamma2)_n (gamma3)_p) x^m y^n z^p / (m! n! p!).

Expansion coefficients are returned as multipliers of (-y)^(-e): the
(-1)^(-e) y^(-e) split is recombined on the principal branch, and the
logarithm that accompanies the log cases is log(-y) (= log|y| for y < 0).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

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
    digamma,
    gamma_ratio,
    get_ctx,
    near_integer,
    nonpositive_int,
    pochhammer,
    symmetric_limit,
)
from .hyp import hyp1f1, hyp2f1
from .kdf import KdfParams, in_domain_F, integral_condition, kdf
from .psi1 import YES, DomainVerdict, Psi1Params, _f_ladder, _ladder_extend, _on_cut, mb_contour_condition, psi1
from .quadrature import integrate_laplace

CROSSOVER_Y = 80.0
RATIO_MAX = 1e3


@dataclass(frozen=True)
class FkParams:
    alpha1: mpc
    alpha2: mpc
    beta1: mpc
    beta2: mpc
    gamma1: mpc
    gamma2: mpc
    gamma3: mpc

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2", "gamma3"):
            object.__setattr__(self, name, cnum(getattr(self, name)))
        for name in ("gamma1", "gamma2", "gamma3"):
            v = getattr(self, name)
            if nonpositive_int(v, 1e-12) is not None:
                raise PoleError(f"{name} is a non-positive integer", location=v)

    @classmethod
    def of(cls, alpha1, alpha2, beta1, beta2, gamma1, gamma2, gamma3) -> "FkParams":
        return cls(*(cnum(v) for v in (alpha1, alpha2, beta1, beta2, gamma1, gamma2, gamma3)))

    def as_tuple(self):
        return (self.alpha1, self.alpha2, self.beta1, self.beta2, self.gamma1, self.gamma2, self.gamma3)

    def swap(self) -> "FkParams":
        """Parameters of the (x <-> y) mirror: F_K(..; x, y, z) = F_K(swap; y, x, z)."""
        return FkParams(self.beta2, self.beta1, self.alpha2, self.alpha1, self.gamma2, self.gamma1, self.gamma3)


def rho(x) -> mpf:
    x = cnum(x)
    return max(mpf(1), 1 / abs(1 - x))


def in_domain_K(x, y, z) -> DomainVerdict:
    x, y, z = cnum(x), cnum(y), cnum(z)
    if not abs(x) < 1:
        return DomainVerdict(False, "|x| < 1 violated")
    if not abs(y) < 1:
        return DomainVerdict(False, "|y| < 1 violated")
    if not abs(z) < (1 - abs(x)) * (1 - abs(y)):
        return DomainVerdict(False, "|z| < (1-|x|)(1-|y|) violated")
    return YES


# --------------------------------------------------------------------------
# series


def fk_triple_series(p: FkParams, x, y, z, ctx: PrecisionContext | None = None, max_shells: int = 4000) -> EvalOutcome:
    """Shell-by-shell (m + n + p = N) summation of the defining triple series; oracle grade."""
    ctx = get_ctx(ctx)
    x, y, z = cnum(x), cnum(y), cnum(z)
    in_domain_K(x, y, z).require("fk_triple_series")
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    with mp.workdps(ctx.dps):
        tol = mpf(ctx.tol) / 100
        U, V, W = [mpc(1)], [mpc(1)], [mpc(1)]
        Pa2, Pb1 = [mpc(1)], [mpc(1)]
        s = mpc(0)
        small = 0
        for N in range(max_shells):
            if N > 0:
                k = N - 1
                U.append(U[-1] * (a1 + k) / ((g1 + k) * (k + 1)) * x)
                V.append(V[-1] * (b2 + k) / ((g2 + k) * (k + 1)) * y)
                W.append(W[-1] / ((g3 + k) * (k + 1)) * z)
                Pa2.append(Pa2[-1] * (a2 + k))
                Pb1.append(Pb1[-1] * (b1 + k))
            shell = mpc(0)
            for m in range(N + 1):
                for n in range(N - m + 1):
                    q = N - m - n
                    shell += U[m] * V[n] * W[q] * Pa2[n + q] * Pb1[m + q]
            s += shell
            if abs(shell) <= tol * abs(s):
                small += 1
                if small >= 3:
                    return EvalOutcome(+s, float(abs(shell) * 10), "triple_series", {"shells": N + 1})
            else:
                small = 0
    raise ConvergenceError("fk_triple_series: shell budget exhausted")


def _single_rate(x, y, z):
    return abs(z) * rho(x) * rho(y)


def _fk_single_once(p, x, y, z, ctx, max_terms):
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    r = _single_rate(x, y, z)
    stop = mpf(ctx.tol) / 100 * (1 - r)
    block = 64
    FX = _f_ladder(b1, a1, g1, x, block, ctx)
    FY = _f_ladder(a2, b2, g2, y, block, ctx)
    coef = mpc(1)
    s = mpc(0)
    max_abs = mpf(0)
    small = 0
    n = 0
    while True:
        if n >= len(FX):
            if n >= max_terms:
                raise ConvergenceError("fk_single_series: term budget exhausted")
            _ladder_extend(FX, b1, a1, g1, x, n + block, ctx)
            _ladder_extend(FY, a2, b2, g2, y, n + block, ctx)
        t = coef * FX[n] * FY[n]
        s += t
        at = abs(t)
        max_abs = max(max_abs, at)
        if at <= stop * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        coef = coef * (a2 + n) * (b1 + n) / ((g3 + n) * (n + 1)) * z
        n += 1
        if coef == 0 or z == 0:
            break
    tail = abs(t) * r / (1 - r)
    return s, tail, n + 1, max_abs


def fk_single_series(p: FkParams, x, y, z, ctx: PrecisionContext | None = None,
                     max_terms: int | None = None) -> EvalOutcome:
    """Sum over p of (alpha2)_p (beta1)_p / (p! (gamma3)_p) 2F1[beta1+p, alpha1; gamma1; x] 2F1[alpha2+p, beta2; gamma2; y] z^p.

    Converges for |z| rho_x rho_y < 1 with x, y off [1, inf).
    """
    ctx = get_ctx(ctx)
    x, y, z = cnum(x), cnum(y), cnum(z)
    for name, v in (("x", x), ("y", y)):
        if _on_cut(v):
            raise DomainError(f"{name} on the cut [1, inf)", witness=f"|arg(1-{name})| < pi")
    if not _single_rate(x, y, z) < 1:
        raise DomainError("|z| rho_x rho_y < 1 violated", witness="|z| rho_x rho_y < 1")
    max_terms = ctx.max_terms if max_terms is None else max_terms
    work = ctx
    extra = 0
    for _ in range(5):
        with mp.workdps(work.dps):
            s, tail, n, max_abs = _fk_single_once(p, x, y, z, work, max_terms)
        loss = float(mp.log10(max_abs / abs(s))) if s != 0 and max_abs > abs(s) else 0.0
        if loss <= extra + 4:
            break
        extra = int(math.ceil(loss)) + 2
        work = ctx.with_digits(ctx.digits + extra)
    else:
        raise ConvergenceError("fk_single_series: cancellation not controlled")
    err = tail + max_abs * mpf(10) ** (-work.digits)
    return EvalOutcome(+s, float(err), "single_series", {"terms": n, "extra_digits": extra})


def appell_f2_double_series(a, b1, b2, c1, c2, x, y, digits: int = 30) -> mpc:
    """F2[a, b1, b2; c1, c2; x, y] by its double series, |x| + |y| < 1; oracle grade."""
    with mp.workdps(digits + 10):
        a, b1, b2, c1, c2, x, y = (cnum(v) for v in (a, b1, b2, c1, c2, x, y))
        eps = mpf(10) ** (-digits - 5)
        total = mpc(0)
        row = mpc(1)  # (a)_m (b1)_m / ((c1)_m m!) x^m
        m = 0
        while True:
            t = row
            inner = mpc(0)
            n = 0
            while True:
                inner += t
                if abs(t) <= eps * abs(inner) and n > 2:
                    break
                t = t * (a + m + n) * (b2 + n) / ((c2 + n) * (n + 1)) * y
                n += 1
            total += inner
            if abs(inner) <= eps * abs(total) and m > 2:
                break
            row = row * (a + m) * (b1 + m) / ((c1 + m) * (m + 1)) * x
            m += 1
        return +total


# --------------------------------------------------------------------------
# Laplace integral


def laplace_condition(p: FkParams, x, y, z) -> DomainVerdict:
    """Re(alpha2) > 0, |arg(-y)| < pi/2 (or y = 0), (x, z) in V_Psi1 (or z = 0)."""
    x, y, z = cnum(x), cnum(y), cnum(z)
    if not p.alpha2.real > 0:
        return DomainVerdict(False, "Re(alpha2) > 0 violated")
    if y != 0 and not abs(arg(-y)) < mp.pi / 2:
        return DomainVerdict(False, "|arg(-y)| < pi/2 violated")
    if z == 0:
        if _on_cut(x):
            return DomainVerdict(False, "|arg(1-x)| < pi violated")
        return YES
    v = mb_contour_condition(x, z)
    if not v:
        return DomainVerdict(False, f"(x, z) not in V_Psi1: {v.witness}")
    return YES


def fk_laplace(p: FkParams, x, y, z, ctx: PrecisionContext | None = None) -> EvalOutcome:
    """(1/Gamma(alpha2)) int_0^inf e^-s s^(alpha2-1) 1F1[beta2; gamma2; y s] Psi_1[beta1, alpha1; gamma1, gamma3; x, z s] ds."""
    ctx = get_ctx(ctx)
    x, y, z = cnum(x), cnum(y), cnum(z)
    laplace_condition(p, x, y, z).require("fk_laplace")
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    pp = Psi1Params(b1, a1, g1, g3)
    with mp.workdps(ctx.dps):
        am1 = a2 - 1

        def f(s):
            v = mp.exp(-s) * complex_pow(s, am1)
            if y != 0:
                v *= hyp1f1(b2, g2, y * s, ctx)
            return v * psi1(pp, x, z * s, ctx).value

        # the factors vary on the scale 1/max(|y|, |z|); grade the mesh towards s = 0
        big = float(max(abs(y), abs(z), 1))
        bps = []
        b = 1.0 / big
        while b < 1.0:
            bps.append(b)
            b *= 4
        r = integrate_laplace(f, 1.0, ctx, power=float(am1.real), breakpoints=bps)
        g = mp.rgamma(a2)
        return EvalOutcome(r.value * g, float(r.abs_err_est * abs(g)), "laplace", {"nodes": r.nodes_used})


# --------------------------------------------------------------------------
# coefficients of the large-(y, z) expansion

_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _cached(kind, p, x, ratio, k, ctx, compute):
    key = (kind, p.as_tuple(), cnum(x), cnum(ratio), k, ctx.digits)
    with _CACHE_LOCK:
        if key in _CACHE:
            return _CACHE[key]
    v = compute()
    with _CACHE_LOCK:
        _CACHE.setdefault(key, v)
    return v


def clear_cache():
    with _CACHE_LOCK:
        _CACHE.clear()


def _A(j: int) -> mpf:
    return mpf(-1) ** j / mp.factorial(j)


def fk_coeff_Bk_tilde(p: FkParams, x, y_over_z, k: int, ctx: PrecisionContext | None = None) -> mpc:
    """t^(-k-beta1-beta2) coefficient of f(t), stripped of its (-y/|y|) power."""
    ctx = get_ctx(ctx)
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    x, w = cnum(x), cnum(y_over_z)

    def compute():
        with mp.workdps(ctx.dps):
            pref = gamma_ratio([g2, g3], [g2 - b2, g3 - b1], ctx) * complex_pow(w, b1)
            s = mpc(0)
            for j in range(k + 1):
                t = pochhammer(b2, j) * pochhammer(1 + b2 - g2, j) * pochhammer(b1, k - j) \
                    * pochhammer(1 + b1 - g3, k - j) / (mp.factorial(j) * mp.factorial(k - j))
                s += t * hyp2f1(j - k, a1, g1, x, ctx) * w ** (k - j)
            return pref * s

    return _cached("Btilde", p, x, w, k, ctx, compute)


def fk_coeff_Bhat(p: FkParams, x, y_over_z, k: int, ctx: PrecisionContext | None = None) -> mpc:
    """Coefficient of (-y)^(-k-beta1-beta2): Gamma(alpha2-beta1-beta2-k)/Gamma(alpha2) Btilde_k."""
    ctx = get_ctx(ctx)
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    arg_ = a2 - b1 - b2 - k
    if nonpositive_int(arg_, ctx.pole_tol) is not None:
        raise PoleError("Gamma(alpha2-beta1-beta2-k) pole: logarithmic case", location=arg_)
    with mp.workdps(ctx.dps):
        return gamma_ratio([arg_], [a2], ctx) * fk_coeff_Bk_tilde(p, x, y_over_z, k, ctx)


def _G_raw(p: FkParams, x, w, s, ctx):
    """Braced factor of M[f; s]: C1*(s) (y/z)^(s-beta2) F[..] + C2*(s) F[..], second argument -z/y."""
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    v = -1 / w
    out = mpc(0)
    C1 = gamma_ratio([g2, g3, s - b2, b1 + b2 - s], [b1, g2 - b2, b2 + g3 - s], ctx)
    if C1 != 0:
        F1 = kdf(KdfParams(b1 + b2 - s, a1, g1, b2, b2 - g2 + 1, b2 + 1 - s, b2 + g3 - s), x, v, ctx).value
        out += C1 * complex_pow(w, s - b2) * F1
    C2 = gamma_ratio([g2, s, b2 - s], [b2, g2 - s], ctx)
    if C2 != 0:
        F2 = kdf(KdfParams(b1, a1, g1, s, s - g2 + 1, g3, s - b2 + 1), x, v, ctx).value
        out += C2 * F2
    return out


def _raised(ctx):
    return ctx.with_digits(ctx.digits + ctx.digits // 3 + 4), mpf(10) ** (-(ctx.digits // 3))


def mellin_f_braced(p: FkParams, x, y_over_z, s, ctx: PrecisionContext | None = None) -> mpc:
    """G(s) with M[f; s] = (-y/|y|)^(-s) G(s); symmetric samples where s - beta2 is an integer."""
    ctx = get_ctx(ctx)
    s, w, x = cnum(s), cnum(y_over_z), cnum(x)
    work, eps = _raised(ctx)
    if near_integer(s - p.beta2, float(eps)) is None:
        with mp.workdps(ctx.dps):
            return _G_raw(p, x, w, s, ctx)
    d = s - p.beta2 - near_integer(s - p.beta2, float(eps))
    h = eps if abs(d) < eps / 2 else 2 * eps
    with mp.workdps(work.dps):
        return +symmetric_limit(lambda t: _G_raw(p, x, w, t, work), s, h)


def fk_coeff_Ahat(p: FkParams, x, y_over_z, k: int, ctx: PrecisionContext | None = None) -> mpc:
    """Coefficient of (-y)^(-k-alpha2): A_k G(k + alpha2) / Gamma(alpha2)."""
    ctx = get_ctx(ctx)
    a2 = p.alpha2
    q = a2 - p.beta1 - p.beta2 + k
    if nonpositive_int(-q, ctx.pole_tol) is not None:
        raise PoleError("Gamma(beta1+beta2-alpha2-k) pole: logarithmic case", location=-q)

    def compute():
        with mp.workdps(ctx.dps):
            return _A(k) * mp.rgamma(a2) * mellin_f_braced(p, x, y_over_z, k + a2, ctx)

    return _cached("Ahat", p, x, y_over_z, k, ctx, compute)


def _ell(p: FkParams, k: int, ctx) -> int:
    d = p.beta1 + p.beta2 - p.alpha2 + k
    l = near_integer(d, ctx.pole_tol)
    if l is None or l < 0:
        raise DomainError("k + beta1 + beta2 - alpha2 must be a non-negative integer",
                          witness="k + beta1 + beta2 - alpha2 in Z>=0")
    return l


def fk_coeff_Bcross(p: FkParams, x, y_over_z, k: int, ctx: PrecisionContext | None = None) -> mpc:
    """log(-y) (-y)^(-k-beta1-beta2) coefficient: Btilde_k A_l / Gamma(alpha2), l = k + beta1 + beta2 - alpha2."""
    ctx = get_ctx(ctx)
    l = _ell(p, k, ctx)
    with mp.workdps(ctx.dps):
        return fk_coeff_Bk_tilde(p, x, y_over_z, k, ctx) * _A(l) * mp.rgamma(p.alpha2)


def _chat_displayed(p: FkParams, x, w, k: int, l: int, ctx) -> mpc:
    a1, a2, b1, b2, g1, g2, g3 = p.as_tuple()
    v = -1 / w
    bt = fk_coeff_Bk_tilde(p, x, w, k, ctx)
    first = bt * mpf(-1) ** l * digamma(l + 1, ctx) / mp.factorial(l)
    c1 = complex_pow(w, k + b1) * mpf(-1) ** k * digamma(k + 1, ctx) \
        * gamma_ratio([g3, k + b1], [b1, g2 - b2, g3 - b1 - k], ctx) / mp.factorial(k)
    if c1 != 0:
        c1 *= kdf(KdfParams(-k, a1, g1, b2, b2 - g2 + 1, 1 - b1 - k, g3 - b1 - k), x, v, ctx).value
    c2 = gamma_ratio([-b1 - k, k + b1 + b2], [b2, g2 - b1 - b2 - k], ctx)
    if c2 != 0:
        c2 *= kdf(KdfParams(b1, a1, g1, k + b1 + b2, k + b1 + b2 - g2 + 1, g3, k + b1 + 1), x, v, ctx).value
    return mp.rgamma(a2) * (first + _A(l) * gamma_ratio([g2], [], ctx) * (c1 + c2))


def _chat_limit(p: FkParams, x, w, k: int, l: int, ctx) -> mpc:
    """lim_{s->0} [Btilde_k Gamma(s - l) + A_l G(q + s)] / Gamma(alpha2), q = k + beta1 + beta2."""
    work, eps = _raised(ctx)
    q = k + p.beta1 + p.beta2
    with mp.workdps(work.dps):
        bt = fk_coeff_Bk_tilde(p, x, w, k, work)
        v = symmetric_limit(lambda e: bt * mp.gamma(e - l) + _A(l) * _G_raw(p, x, w, q + e, work), mpf(0), eps)
        return +(v * mp.rgamma(p.alpha2))


CHAT_FORMS = ("limit", "displayed")


def fk_coeff_Chat(p: FkParams, x, y_over_z, k: int, ctx: PrecisionContext | None = None,
                  form: str = "limit") -> mpc:
    """Non-log (-y)^(-k-beta1-beta2) coefficient of the log cases.

    ``form="displayed"`` is the closed digamma expression; ``"limit"`` takes the
    defining s -> 0 limit numerically (symmetric samples, raised precision), which
    also keeps the s-derivative of the regular factor multiplying the pole.
    """
    ctx = get_ctx(ctx)
    if form not in CHAT_FORMS:
        raise ValueError(f"form must be one of {CHAT_FORMS}")
    if near_integer(p.beta1, ctx.pole_tol) is not None:
        raise PoleError("beta1 is an integer: Gamma(-beta1-k) pole, double-log sub-case not covered",
                        location=p.beta1)
    l = _ell(p, k, ctx)
    x, w = cnum(x), cnum(y_over_z)
    fn = _chat_limit if form == "limit" else _chat_displayed

    def compute():
        with mp.workdps(ctx.dps):
            return fn(p, x, w, k, l, ctx)

    return _cached("Chat-" + form, p, x, w, k, ctx, compute)


# --------------------------------------------------------------------------
# expansion


@dataclass
class FkExpansion:
    """Terms c (-y)^(-e) and c log(-y) (-y)^(-e), e increasing within each list."""

    inverse_power_terms: list = field(default_factory=list)
    log_terms: list = field(default_factory=list)
    remainder_order: float = 0.0
    case_tag: str = "nonlog"
    y: mpc = mpc(0)

    def __post_init__(self):
        if (self.case_tag == "nonlog") != (not self.log_terms):
            raise ValueError("log_terms must be empty exactly in the nonlog case")
        self.inverse_power_terms.sort(key=lambda t: float(cnum(t[0]).real))
        self.log_terms.sort(key=lambda t: float(cnum(t[0]).real))

    def evaluate(self, y=None) -> mpc:
        y = self.y if y is None else cnum(y)
        my = -y
        lg = mp.log(my)
        s = mpc(0)
        for e, c in self.inverse_power_terms:
            s += c * complex_pow(my, -e)
        for e, c in self.log_terms:
            s += c * lg * complex_pow(my, -e)
        return s


def case_of(p: FkParams, ctx: PrecisionContext | None = None):
    """('nonlog', None) | ('logI', L) with L = beta1+beta2-alpha2 >= 0 | ('logII', L) with L = alpha2-beta1-beta2 > 0."""
    ctx = get_ctx(ctx)
    d = p.beta1 + p.beta2 - p.alpha2
    L = near_integer(d, ctx.pole_tol)
    if L is None:
        return "nonlog", None
    return ("logI", L) if L >= 0 else ("logII", -L)


def asymptotic_condition(p: FkParams, x, y, z, ratio_max: float = RATIO_MAX) -> DomainVerdict:
    """alpha2 > 0, beta1 + beta2 > 0, |arg(-y)| < pi/2, (x, z) in V_Psi1, rho_x < |y|/|z| < ratio_max,
    with the x < 1 alternative set when the ratio falls below rho_x."""
    x, y, z = cnum(x), cnum(y), cnum(z)
    a2, bb = p.alpha2, p.beta1 + p.beta2
    if a2.imag != 0 or not a2.real > 0:
        return DomainVerdict(False, "alpha2 > 0 violated")
    if bb.imag != 0 or not bb.real > 0:
        return DomainVerdict(False, "beta1 + beta2 > 0 violated")
    if y == 0 or not abs(arg(-y)) < mp.pi / 2:
        return DomainVerdict(False, "|arg(-y)| < pi/2 violated")
    if z == 0:
        return DomainVerdict(False, "z = 0")
    v = mb_contour_condition(x, z)
    if not v:
        return DomainVerdict(False, f"(x, z) not in V_Psi1: {v.witness}")
    ratio = abs(y) / abs(z)
    if not ratio < ratio_max:
        return DomainVerdict(False, f"|y|/|z| < {ratio_max:g} violated")
    if ratio > rho(x):
        return YES
    # x < 1 alternative: the kdf factors go through their Euler integral
    if not abs(arg(-z)) < mp.pi / 2:
        return DomainVerdict(False, "rho_x < |y|/|z| violated and |arg(-z)| < pi/2 fails")
    if not (p.gamma1.real > p.alpha1.real > 0):
        return DomainVerdict(False, "rho_x < |y|/|z| violated and Re(gamma1) > Re(alpha1) > 0 fails")
    ic = integral_condition(x, -z / y)
    if not ic:
        return DomainVerdict(False, f"rho_x < |y|/|z| violated and {ic.witness}")
    return YES


def fk_expansion(p: FkParams, x, y, z, n_terms: int, ctx: PrecisionContext | None = None,
                 chat_form: str = "limit") -> FkExpansion:
    """Structured large-(y, z) expansion with n_terms of the beta-series (m set per case)."""
    ctx = get_ctx(ctx)
    x, y, z = cnum(x), cnum(y), cnum(z)
    asymptotic_condition(p, x, y, z).require("fk_asymptotic")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    w = y / z
    a2, bb = p.alpha2, p.beta1 + p.beta2
    case, L = case_of(p, ctx)
    n = n_terms
    pw, lg = [], []
    with mp.workdps(ctx.dps):
        if case == "nonlog":
            m = n + int(math.floor(float((1 - a2 + bb).real)))
            for k in range(n):
                pw.append((k + bb, fk_coeff_Bhat(p, x, w, k, ctx)))
            for k in range(m):
                pw.append((k + a2, fk_coeff_Ahat(p, x, w, k, ctx)))
            rem = float((n + bb).real)
        elif case == "logI":
            for k in range(L):
                pw.append((k + a2, fk_coeff_Ahat(p, x, w, k, ctx)))
            for k in range(n):
                pw.append((k + bb, fk_coeff_Chat(p, x, w, k, ctx, chat_form)))
                lg.append((k + bb, fk_coeff_Bcross(p, x, w, k, ctx)))
            rem = float((n + bb).real)
        else:
            m = n - L
            if m < 1:
                raise ValueError(f"n_terms must exceed alpha2 - beta1 - beta2 = {L}")
            for k in range(L):
                pw.append((k + bb, fk_coeff_Bhat(p, x, w, k, ctx)))
            for k in range(m):
                pw.append((k + a2, fk_coeff_Chat(p, x, w, k + L, ctx, chat_form)))
                lg.append((k + a2, fk_coeff_Bcross(p, x, w, k + L, ctx)))
            rem = float((m + a2).real)
    return FkExpansion(pw, lg, rem, case, y)


def fk_asymptotic(p: FkParams, x, y, z, n_terms: int = 2, ctx: PrecisionContext | None = None,
                  chat_form: str = "limit"):
    """(FkExpansion, EvalOutcome) for |y|, |z| large with y/z bounded."""
    ctx = get_ctx(ctx)
    exp = fk_expansion(p, x, y, z, n_terms, ctx, chat_form)
    y = cnum(y)
    with mp.workdps(ctx.dps):
        v = exp.evaluate(y)
        # size of the first omitted beta-series term as the error scale
        k = n_terms
        bt = fk_coeff_Bk_tilde(p, x, y / cnum(z), k, ctx)
        scale = abs(bt * mp.rgamma(p.alpha2)) * (1 + abs(mp.log(-y))) * abs(complex_pow(-y, -(k + p.beta1 + p.beta2)))
        if exp.case_tag == "nonlog":
            scale *= abs(mp.gamma(p.alpha2 - p.beta1 - p.beta2 - k))
    out = EvalOutcome(v, float(scale), "asymptotic",
                      {"case": exp.case_tag, "n_terms": n_terms, "remainder_order": exp.remainder_order,
                       "chat_form": chat_form})
    return exp, out


# --------------------------------------------------------------------------
# router


def fk_auto(p: FkParams, x, y, z, ctx: PrecisionContext | None = None, crossover_y: float = CROSSOVER_Y,
            n_terms: int = 3) -> EvalOutcome:
    """Series near the origin, asymptotics for |y| >= crossover_y, Laplace integral otherwise."""
    ctx = get_ctx(ctx)
    x, y, z = cnum(x), cnum(y), cnum(z)
    verdicts = {}
    series_ok = not _on_cut(x) and not _on_cut(y) and _single_rate(x, y, z) < 0.9
    verdicts["series"] = "ok" if series_ok else "|z| rho_x rho_y < 0.9 or cut condition violated"
    asym = asymptotic_condition(p, x, y, z)
    verdicts["asymptotic"] = "ok" if asym else asym.witness
    lap = laplace_condition(p, x, y, z)
    verdicts["laplace"] = "ok" if lap else lap.witness
    if series_ok:
        out, route = fk_single_series(p, x, y, z, ctx), "series"
    elif asym and abs(y) >= crossover_y:
        out, route = fk_asymptotic(p, x, y, z, n_terms, ctx)[1], "asymptotic"
    elif lap:
        out, route = fk_laplace(p, x, y, z, ctx), "laplace"
    else:
        raise DomainError("no applicable method: " + "; ".join(f"{k}: {v}" for k, v in verdicts.items()),
                          witness="; ".join(f"{k}: {v}" for k, v in verdicts.items()))
    out.diagnostics["routing"] = route
    out.diagnostics["domain_verdicts"] = verdicts
    return out
