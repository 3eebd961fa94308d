"""Complex arithmetic kernels shared by every evaluator.

All numbers are ``mpmath.mpc``/``mpf`` values. Precision is carried by an
immutable :class:`PrecisionContext`; evaluators enter ``mp.workdps`` with the
context's working digits plus a small guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from mpmath import mp, mpc, mpf

GUARD_DIGITS = 6


class HypergeometricError(Exception):
    """Base class for evaluation failures."""


class DomainError(HypergeometricError, ValueError):
    """Input lies outside the region where the method is valid.

    ``witness`` names the violated inequality.
    """

    def __init__(self, message: str, witness: str = ""):
        super().__init__(message)
        self.witness = witness or message


class PoleError(DomainError):
    def __init__(self, message: str, location: Any = None):
        super().__init__(message, witness=message)
        self.location = location


class ConvergenceError(HypergeometricError, ArithmeticError):
    """Series or quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 16
    series_rel_tol: float | None = None
    max_terms: int = 10**6

    def __post_init__(self):
        if self.digits < 10:
            raise ValueError("digits must be >= 10")
        if self.series_rel_tol is None:
            object.__setattr__(self, "series_rel_tol", 10.0 ** (-self.digits + 4))
        if not self.series_rel_tol > 0:
            raise ValueError("series_rel_tol must be positive")

    @property
    def tol(self) -> float:
        return self.series_rel_tol

    @property
    def dps(self) -> int:
        """Working decimal digits including guard digits."""
        return self.digits + GUARD_DIGITS

    @property
    def pole_tol(self) -> float:
        return 10.0 ** (-self.digits + 6)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits=digits, max_terms=self.max_terms)

    def oracle(self, digits: int = 50) -> "PrecisionContext":
        return PrecisionContext(digits=max(digits, self.digits))


DEFAULT_CTX = PrecisionContext()


def get_ctx(ctx: PrecisionContext | None) -> PrecisionContext:
    return DEFAULT_CTX if ctx is None else ctx


@dataclass
class EvalOutcome:
    """Value plus a posteriori error estimate and bookkeeping."""

    value: mpc
    err_est: float
    method: str
    diagnostics: dict = field(default_factory=dict)
    status: str = "ok"

    def __post_init__(self):
        self.value = mpc(self.value)
        if not (mp.isfinite(self.value.real) and mp.isfinite(self.value.imag)):
            self.status = "error: non-finite value"
        if not math.isfinite(float(self.err_est)):
            self.status = "error: non-finite error estimate"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self, digits: int = 17) -> dict:
        return {
            "value": {
                "re": mp.nstr(self.value.real, digits),
                "im": mp.nstr(self.value.imag, digits),
            },
            "err_est": mp.nstr(mpf(self.err_est), 6),
            "method": self.method,
            "status": self.status,
            "diagnostics": _jsonable(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalOutcome":
        v = mpc(mpf(d["value"]["re"]), mpf(d["value"]["im"]))
        out = cls(v, float(d["err_est"]), d["method"], dict(d.get("diagnostics", {})))
        out.status = d.get("status", "ok")
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, mpc):
        return {"re": mp.nstr(obj.real, 17), "im": mp.nstr(obj.imag, 17)}
    if isinstance(obj, mpf):
        return mp.nstr(obj, 17)
    if isinstance(obj, float):
        return repr(obj)
    return obj


def cnum(z) -> mpc:
    """Coerce python numbers, strings or ``"re,im"`` pairs to ``mpc``."""
    if isinstance(z, mpc):
        return z
    if isinstance(z, str):
        parts = [p.strip() for p in z.split(",")]
        if len(parts) == 2:
            return mpc(mpf(parts[0]), mpf(parts[1]))
        return mpc(mp.mpmathify(parts[0]))
    if isinstance(z, (tuple, list)) and len(z) == 2:
        return mpc(mpf(z[0]), mpf(z[1]))
    return mpc(mp.mpmathify(z))


def is_finite(z) -> bool:
    z = mpc(z)
    return bool(mp.isfinite(z.real) and mp.isfinite(z.imag))


def nonpositive_int(z, tol: float) -> int | None:
    """Return ``n`` if ``z`` lies within ``tol`` of ``-n`` (n >= 0), else None."""
    z = mpc(z)
    if abs(z.imag) >= tol:
        return None
    r = z.real
    n = int(mp.nint(r))
    if n <= 0 and abs(r - n) < tol:
        return -n
    return None


def near_integer(z, tol: float) -> int | None:
    z = mpc(z)
    if abs(z.imag) >= tol:
        return None
    n = int(mp.nint(z.real))
    return n if abs(z.real - n) < tol else None


def symmetric_limit(f, s, h):
    """Value at s of a function with a removable singularity nearby.

    Richardson step on the symmetric means m(h) = (f(s+h) + f(s-h))/2:
    (4 m(h) - m(2h)) / 3, error O(h^4). Callers keep s +- h, s +- 2h off the
    singular point.
    """
    m1 = (f(s + h) + f(s - h)) / 2
    m2 = (f(s + 2 * h) + f(s - 2 * h)) / 2
    return (4 * m1 - m2) / 3


def complex_pow(z, s) -> mpc:
    """Principal power ``exp(s log z)`` with ``arg z`` in (-pi, pi]."""
    z, s = cnum(z), cnum(s)
    if z == 0:
        if s.imag == 0 and s.real > 0:
            return mpc(0)
        raise DomainError("0 ** s with Re(s) <= 0", witness="z = 0")
    return mp.exp(s * mp.log(z))


def gamma(z, ctx: PrecisionContext | None = None) -> mpc:
    """Complex gamma function at working precision."""
    ctx = get_ctx(ctx)
    z = cnum(z)
    n = nonpositive_int(z, ctx.pole_tol)
    if n is not None:
        raise PoleError(f"gamma pole at z = {-n}", location=-n)
    with mp.workdps(ctx.dps):
        return mpc(mp.gamma(z))


def rgamma(z) -> mpc:
    """Reciprocal gamma; zero at the poles."""
    return mpc(mp.rgamma(cnum(z)))


def _stirling_loggamma(z, dps: int) -> mpc:
    # log Gamma(z) for Re z large, truncated at the smallest Bernoulli term
    s = (z - mpf(0.5)) * mp.log(z) - z + mp.log(2 * mp.pi) / 2
    zp = z
    z2 = z * z
    eps = mpf(10) ** (-dps - 2)
    prev = None
    for k in range(1, 400):
        t = mp.bernoulli(2 * k) / (2 * k * (2 * k - 1) * zp)
        if prev is not None and abs(t) > abs(prev):
            break
        s += t
        if abs(t) < eps * abs(s):
            break
        prev = t
        zp *= z2
    return s


def gamma_reference(z, digits: int = 50) -> mpc:
    """Independent Gamma: argument shift + Stirling series, reflection for Re z < 1/2.

    Used as the high-precision reference path in oracle checks.
    """
    with mp.workdps(digits + 10):
        z = cnum(z)
        if z.real < 0.5:
            return mp.pi / (mp.sin(mp.pi * z) * gamma_reference(1 - z, digits))
        shift = max(0, int(math.ceil(digits * 1.2 - float(abs(z)))))
        prod = mpc(1)
        w = z
        for _ in range(shift):
            prod *= w
            w += 1
        return mp.exp(_stirling_loggamma(w, digits + 10)) / prod


def digamma(z, ctx: PrecisionContext | None = None) -> mpc:
    """psi(z) by upward recurrence and an asymptotic tail; reflection for Re z < 1/2."""
    ctx = get_ctx(ctx)
    z = cnum(z)
    n = nonpositive_int(z, ctx.pole_tol)
    if n is not None:
        raise PoleError(f"digamma pole at z = {-n}", location=-n)
    with mp.workdps(ctx.dps + 4):
        return mpc(_digamma(z, ctx.dps + 4))


def _digamma(z, dps):
    if z.real < 0.5:
        return _digamma(1 - z, dps) - mp.pi / mp.tan(mp.pi * z)
    acc = mpc(0)
    target = dps * 1.1 + 5
    while abs(z) < target:
        acc -= 1 / z
        z += 1
    s = mp.log(z) - 1 / (2 * z)
    z2 = z * z
    zp = z2
    eps = mpf(10) ** (-dps - 2)
    for k in range(1, 200):
        t = mp.bernoulli(2 * k) / (2 * k * zp)
        s -= t
        if abs(t) < eps * abs(s):
            break
        zp *= z2
    return s + acc


def pochhammer(a, n: int) -> mpc:
    """Rising factorial by direct product; exact zero when a is a non-positive integer >= -n+1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a = cnum(a)
    p = mpc(1)
    for k in range(n):
        p *= a + k
    return p


def gamma_ratio(num: Sequence, den: Sequence, ctx: PrecisionContext | None = None) -> mpc:
    """prod Gamma(num) / prod Gamma(den) via summed log-gamma.

    A denominator argument at a pole makes the ratio vanish; a numerator
    argument at a pole raises :class:`PoleError`.
    """
    ctx = get_ctx(ctx)
    num = [cnum(v) for v in num]
    den = [cnum(v) for v in den]
    bad = [v for v in num if nonpositive_int(v, ctx.pole_tol) is not None]
    if bad:
        raise PoleError("gamma_ratio numerator at pole: " + ", ".join(mp.nstr(v, 8) for v in bad), location=bad)
    if any(nonpositive_int(v, ctx.pole_tol) is not None for v in den):
        return mpc(0)
    with mp.workdps(ctx.dps + 4):
        s = mpc(0)
        for v in num:
            s += mp.loggamma(v)
        for v in den:
            s -= mp.loggamma(v)
        return mpc(mp.exp(s))


def arg(z) -> mpf:
    z = cnum(z)
    return mp.arg(z) if z != 0 else mpf(0)
