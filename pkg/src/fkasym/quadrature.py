"""Quadrature for Euler-type [0,1] integrals, Laplace integrals and vertical contours.

* :func:`integrate_01_singular` -- tanh-sinh with level doubling; integrands
  receive both ``u`` and ``1 - u`` so endpoint powers keep full relative
  accuracy.
* :func:`integrate_laplace` -- [0, T] split at caller breakpoints plus an
  estimated exponential tail.
* :func:`integrate_halfline` -- exp-sinh for algebraically decaying
  integrands on (0, inf).
* :func:`integrate_mb_line` -- composite Gauss-Legendre on Re s = sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp, mpc, mpf

from .core import ConvergenceError, DomainError, PrecisionContext, get_ctx

MAX_LEVEL = 12


@dataclass
class QuadResult:
    value: mpc
    abs_err_est: float
    nodes_used: int

    def __post_init__(self):
        if self.abs_err_est < 0 or self.nodes_used < 1:
            raise ValueError("invalid QuadResult")


def _tau_max(p_left, p_right, dps):
    pmin = min(p_left, p_right) + 1
    if pmin <= 0:
        raise DomainError("endpoint power must exceed -1", witness="p <= -1")
    target = (dps + 5) * math.log(10) / (math.pi * min(pmin, 1.0))
    return math.asinh(target) + 0.5


@lru_cache(maxsize=64)
def _ts_level(level: int, tau_max: float, dps: int):
    """Nodes (u, 1-u, weight) added at ``level`` (h = 2**-level)."""
    with mp.workdps(dps):
        h = mpf(2) ** (-level)
        if level == 0:
            js = range(-int(tau_max), int(tau_max) + 1)
        else:
            m = int(tau_max * 2**level)
            js = [j for j in range(-m, m + 1) if j % 2]
        out = []
        pi = mp.pi
        for j in js:
            tau = j * h
            g = pi * mp.sinh(tau)
            if g >= 0:
                e = mp.exp(-g)
                u = 1 / (1 + e)
                um = e / (1 + e)
            else:
                e = mp.exp(g)
                u = e / (1 + e)
                um = 1 / (1 + e)
            w = pi * mp.cosh(tau) * u * um
            out.append((u, um, w))
        return out


def integrate_01_singular(f, p_left=0.0, p_right=0.0, ctx: PrecisionContext | None = None,
                          tol: float | None = None, min_level: int = 3) -> QuadResult:
    """Integrate f(u, 1-u) over (0, 1) by tanh-sinh with level doubling.

    ``p_left``/``p_right`` are the real parts of the endpoint powers the
    integrand carries (both > -1); they set how far the node ladder extends.
    """
    ctx = get_ctx(ctx)
    tol = ctx.tol if tol is None else tol
    tmax = _tau_max(float(p_left), float(p_right), ctx.dps)
    total = mpc(0)
    nodes = 0
    prev = None
    history = []
    with mp.workdps(ctx.dps):
        for level in range(MAX_LEVEL + 1):
            acc = mpc(0)
            for u, um, w in _ts_level(level, round(tmax, 3), ctx.dps):
                if u == 0 or um == 0:
                    continue
                acc += f(u, um) * w
                nodes += 1
            total += acc
            est = total * mpf(2) ** (-level)
            if not (mp.isfinite(est.real) and mp.isfinite(est.imag)):
                raise ConvergenceError("integrand overflow in tanh-sinh quadrature")
            if prev is not None:
                diff = abs(est - prev)
                history.append(diff)
                if level >= min_level and diff <= tol * abs(est):
                    return QuadResult(mpc(est), float(diff), max(nodes, 1))
            prev = est
    raise ConvergenceError(f"tanh-sinh did not converge by level {MAX_LEVEL} (last diff {float(history[-1]):.3g})")


def integrate_interval(g, a, b, ctx: PrecisionContext | None = None, p_left=0.0, p_right=0.0,
                       tol: float | None = None) -> QuadResult:
    """Integrate g(t) over [a, b] via the [0, 1] tanh-sinh rule."""
    a, b = mpf(a), mpf(b)
    span = b - a

    def f(u, um):
        t = a + span * u if u < 0.5 else b - span * um
        return g(t)

    r = integrate_01_singular(f, p_left, p_right, ctx, tol)
    return QuadResult(r.value * span, r.abs_err_est * float(span), r.nodes_used)


def integrate_laplace(f, decay_scale, ctx: PrecisionContext | None = None, power=0.0,
                      breakpoints=(), tol: float | None = None) -> QuadResult:
    """Integrate f over (0, inf) given |f(t)| <= C exp(-decay_scale t) t**power.

    [0, T] is split at ``breakpoints`` (useful when f varies on a scale much
    shorter than 1/decay_scale); the tail constant C is estimated from three
    samples beyond T/2 and T grows until the tail bound is below tolerance.
    """
    ctx = get_ctx(ctx)
    tol = ctx.tol if tol is None else tol
    sigma = float(decay_scale)
    if sigma <= 0:
        raise DomainError("decay_scale must be positive")
    if power <= -1:
        raise DomainError("endpoint power must exceed -1")
    T = (ctx.digits + 4) * math.log(10) / sigma + max(power, 0) * math.log(ctx.digits + 10) / sigma
    pts = sorted(float(b) for b in breakpoints if 0 < float(b) < T)
    edges = [0.0] + pts + [T]
    total = mpc(0)
    err = 0.0
    nodes = 0
    with mp.workdps(ctx.dps):
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            r = integrate_interval(f, lo, hi, ctx, p_left=power if i == 0 else 0.0, tol=tol)
            total += r.value
            err += r.abs_err_est
            nodes += r.nodes_used
        for _ in range(8):
            samples = [T / 2, 0.75 * T, T]
            env = max(float(abs(f(mpf(t)))) * math.exp(sigma * t) / max(t, 1e-300) ** power for t in samples)
            tail = env * math.exp(-sigma * T) * T**power / sigma
            if tail <= tol * float(abs(total)) or tail == 0:
                return QuadResult(total, err + tail, nodes + 3)
            T_new = T * 1.5
            r = integrate_interval(f, T, T_new, ctx, tol=tol)
            total += r.value
            err += r.abs_err_est
            nodes += r.nodes_used + 3
            T = T_new
    raise ConvergenceError("Laplace tail truncation failed; decay estimate violated")


def integrate_halfline(f, ctx: PrecisionContext | None = None, tol: float | None = None,
                       scale=1.0) -> QuadResult:
    """exp-sinh rule for f over (0, inf) with algebraic decay at both ends.

    t = scale * exp(pi/2 sinh tau); trapezoid in tau with level doubling.
    """
    ctx = get_ctx(ctx)
    tol = ctx.tol if tol is None else tol
    with mp.workdps(ctx.dps):
        scale = mpf(scale)
        half_pi = mp.pi / 2

        def g(tau):
            e = half_pi * mp.sinh(tau)
            t = scale * mp.exp(e)
            return f(t) * t * half_pi * mp.cosh(tau)

        # base level: march outward until terms are negligible
        h = mpf(1) / 2
        vals = {0: g(mpf(0))}
        nodes = 1
        s = vals[0]
        for sign in (1, -1):
            small = 0
            j = sign
            while abs(j) < 80:
                v = g(j * h)
                vals[j] = v
                nodes += 1
                s += v
                if abs(v) <= mpf(10) ** (-ctx.dps) * abs(s):
                    small += 1
                    if small >= 2:
                        break
                else:
                    small = 0
                j += sign
        jmin, jmax = min(vals), max(vals)
        tau_lo, tau_hi = jmin * h, jmax * h
        est = s * h
        prev = est
        total = s
        for level in range(1, MAX_LEVEL):
            hl = h / 2**level
            m_lo = int(mp.floor(tau_lo / hl))
            m_hi = int(mp.ceil(tau_hi / hl))
            acc = mpc(0)
            for m in range(m_lo, m_hi + 1):
                if m % 2:
                    acc += g(m * hl)
                    nodes += 1
            total += acc
            est = total * hl
            diff = abs(est - prev)
            if level >= 2 and diff <= tol * abs(est):
                return QuadResult(mpc(est), float(diff), nodes)
            prev = est
    raise ConvergenceError("exp-sinh quadrature did not converge")


@lru_cache(maxsize=32)
def gauss_legendre_nodes(n: int, dps: int):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    with mp.workdps(dps + 10):
        xs, ws = [], []
        for i in range(1, n + 1):
            x = mp.cos(mp.pi * (i - mpf(0.25)) / (n + mpf(0.5)))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpf(10) ** (-dps - 8):
                    break
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            xs.append(+x)
            ws.append(2 / ((1 - x * x) * dp * dp))
        with mp.workdps(dps):
            return tuple(+x for x in xs), tuple(+w for w in ws)


def _gl_panel(g, a, b, n, dps):
    """n-point Gauss-Legendre on [a, b]; returns (value, L1 mass)."""
    xs, ws = gauss_legendre_nodes(n, dps)
    c = (a + b) / 2
    r = (b - a) / 2
    vals = [g(c + r * x) for x in xs]
    return r * mp.fsum(w * v for w, v in zip(ws, vals)), abs(r) * mp.fsum(w * abs(v) for w, v in zip(ws, vals))


def _adaptive_gl(g, a, b, abstol, dps, depth=0):
    q_hi, mass = _gl_panel(g, a, b, 24, dps)
    q_lo, _ = _gl_panel(g, a, b, 12, dps)
    d = abs(q_hi - q_lo)
    # GL error ~ rho**(-2n): the 24-point error is about d**2 / mass (x100 for safety)
    err = min(d, 100 * d * d / mass) if mass > 0 else d
    if err <= abstol or depth > 14:
        return q_hi, float(err), 36
    m = (a + b) / 2
    v1, e1, n1 = _adaptive_gl(g, a, m, abstol / 2, dps, depth + 1)
    v2, e2, n2 = _adaptive_gl(g, m, b, abstol / 2, dps, depth + 1)
    return v1 + v2, e1 + e2, n1 + n2 + 36


def mb_mesh(T_minus, T_plus, rows=(0.0,), min_width=0.25, max_width=2.0, growth=1.6):
    """Panel edges on [-T_minus, T_plus] graded geometrically away from ``rows``, uniform beyond."""
    pts = {-T_minus, T_plus, 0.0}
    for r0 in rows:
        r0 = float(r0)
        if not -T_minus < r0 < T_plus:
            continue
        pts.add(r0)
        for sgn in (1, -1):
            w = min_width
            t = r0
            while w < max_width:
                t += sgn * w
                if not -T_minus < t < T_plus:
                    break
                pts.add(t)
                w *= growth
    edges = []
    for e in sorted(pts):
        if edges and e - edges[-1] < min_width / 2 and e not in (T_plus,):
            continue
        edges.append(e)
    out = [edges[0]]
    for e in edges[1:]:
        gap = e - out[-1]
        k = max(1, math.ceil(gap / max_width - 1e-9))
        for q in range(1, k):
            out.append(out[-1] + gap / k if q == 1 else out[-1] + gap / k)
        out.append(e)
    return out


def integrate_mb_line(f, sigma, decay_rate, ctx: PrecisionContext | None = None, rows=(0.0,),
                      pole_distance=0.5, tol: float | None = None, growth_power=0.0,
                      panel_width=3.0) -> QuadResult:
    """Contour integral of f(s) ds along Re s = sigma, upward.

    ``decay_rate`` is chi (or a pair (chi_minus, chi_plus)) with
    |f(sigma + i t)| <= C |t|**growth_power exp(-chi |t|). Poles of f lying
    within ``pole_distance`` of the line sit on the horizontal ``rows``;
    the panel mesh is refined there.
    """
    ctx = get_ctx(ctx)
    tol = ctx.tol if tol is None else tol
    if isinstance(decay_rate, (tuple, list)):
        chi_m, chi_p = (float(v) for v in decay_rate)
    else:
        chi_m = chi_p = float(decay_rate)
    if chi_m <= 0 or chi_p <= 0:
        raise DomainError("insufficient decay on the contour (chi <= 0)", witness="chi <= 0")
    with mp.workdps(ctx.dps):
        sigma = mpf(sigma)

        def g(t):
            return f(mpc(sigma, t))

        def horizon(chi):
            L = math.log(100 / tol)
            T = L / chi
            for _ in range(5):
                T = (L + max(growth_power, 0) * math.log(max(T, 2.0))) / chi
            return T + 2.0

        Tm, Tp = horizon(chi_m), horizon(chi_p)
        # scale estimate for absolute tolerance
        scale = max(abs(g(mpf(0))), abs(g(mpf(1))), abs(g(mpf(-1))), mpf(10) ** (-ctx.dps))
        edges = mb_mesh(Tm, Tp, rows, min_width=max(min(float(pole_distance), 1.0), 0.05), max_width=panel_width)
        # the Q24 - Q12 difference overstates the Q24 error by many digits
        abstol = tol * float(scale) / 20
        nodes = 3
        centre = min(range(len(edges)), key=lambda k: abs(edges[k]))
        total = mpc(0)
        err = 0.0
        # remaining tail after a panel of width >= 1 is at most panel / (1 - exp(-chi))
        quiet_tol = {1: mpf(tol) * 1e-2 * (1 - math.exp(-chi_p)), -1: mpf(tol) * 1e-2 * (1 - math.exp(-chi_m))}
        for side in (1, -1):
            chi = chi_p if side > 0 else chi_m
            if side > 0:
                seq = edges[centre:]
            else:
                seq = edges[: centre + 1][::-1]
            limit = 4 * (Tp if side > 0 else Tm)
            quiet = 0
            k = 0
            while True:
                if k + 1 < len(seq):
                    a, b = seq[k], seq[k + 1]
                else:
                    a = seq[-1]
                    b = a + side * panel_width
                    if abs(b) > limit:
                        raise ConvergenceError("contour truncation failed: integrand not decayed")
                    seq.append(b)
                k += 1
                v, e, n = _adaptive_gl(g, mpf(min(a, b)), mpf(max(a, b)), abstol, ctx.dps)
                total += v
                err += e
                nodes += n
                # stop once the integrand has decayed: two negligible panels in a row
                if abs(v) <= quiet_tol[side] * max(abs(total), scale) and abs(b - a) >= 1:
                    quiet += 1
                    if quiet >= 2:
                        err += float(abs(v)) / (1 - math.exp(-chi))
                        break
                else:
                    quiet = 0
        return QuadResult(mpc(0, 1) * total, err, nodes)
