"""Containers for asymptotic expansions and truncated power series."""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpc, mpf

from .core import cnum, complex_pow


@dataclass
class Expansion:
    """prefactor * exp_factor * sum_n coeffs[n] * base**(power_offset - n).

    ``companion`` expansions are added on evaluation (two-sided forms such as
    the large-x connection result). ``next_coeff`` is the first omitted
    coefficient and drives the remainder estimate. ``composed`` marks an
    expansion whose coefficients were produced numerically by composition
    rather than by re-expansion.
    """

    prefactor: mpc
    exponent_base: mpc
    power_offset: mpc
    coeffs: list
    exp_factor: mpc | None = None
    log_coeffs: list | None = None
    remainder_order: float = 0.0
    next_coeff: mpc | None = None
    companion: list = field(default_factory=list)
    composed: bool = False
    label: str = ""

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("Expansion needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def terms(self) -> list:
        base = cnum(self.exponent_base)
        scale = cnum(self.prefactor) * (cnum(self.exp_factor) if self.exp_factor is not None else 1)
        lead = complex_pow(base, self.power_offset)
        out = []
        p = mpc(1)
        logb = mp.log(base) if self.log_coeffs else None
        for n, c in enumerate(self.coeffs):
            t = c
            if self.log_coeffs:
                t = t + self.log_coeffs[n] * logb
            out.append(scale * lead * t * p)
            p /= base
        return out

    def evaluate(self) -> mpc:
        s = mp.fsum(self.terms())
        for comp in self.companion:
            s += comp.evaluate()
        return mpc(s)

    def remainder_estimate(self) -> mpf:
        """Modulus of the first omitted term (0 if unknown)."""
        est = mpf(0)
        if self.next_coeff is not None:
            base = cnum(self.exponent_base)
            scale = cnum(self.prefactor) * (cnum(self.exp_factor) if self.exp_factor is not None else 1)
            est = abs(scale * self.next_coeff * complex_pow(base, self.power_offset - len(self.coeffs)))
        for comp in self.companion:
            est += comp.remainder_estimate()
        return est


class SeriesPoly:
    """Power series in one variable truncated at a fixed degree."""

    __slots__ = ("coeffs", "truncation_degree")

    def __init__(self, coeffs, truncation_degree: int):
        c = [mpc(v) for v in coeffs][: truncation_degree + 1]
        c += [mpc(0)] * (truncation_degree + 1 - len(c))
        self.coeffs = c
        self.truncation_degree = truncation_degree

    @classmethod
    def constant(cls, value, degree: int) -> "SeriesPoly":
        return cls([value], degree)

    @classmethod
    def binomial(cls, scale, exponent, degree: int) -> "SeriesPoly":
        """(1 + scale*u)**exponent expanded with exact binomial recursion."""
        scale, exponent = cnum(scale), cnum(exponent)
        c = [mpc(1)]
        for k in range(1, degree + 1):
            c.append(c[-1] * (exponent - k + 1) / k * scale)
        return cls(c, degree)

    def _check(self, other):
        if self.truncation_degree != other.truncation_degree:
            raise ValueError("truncation degrees differ")

    def __add__(self, other):
        if not isinstance(other, SeriesPoly):
            c = list(self.coeffs)
            c[0] += cnum(other)
            return SeriesPoly(c, self.truncation_degree)
        self._check(other)
        return SeriesPoly([a + b for a, b in zip(self.coeffs, other.coeffs)], self.truncation_degree)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, SeriesPoly):
            o = cnum(other)
            return SeriesPoly([a * o for a in self.coeffs], self.truncation_degree)
        self._check(other)
        n = self.truncation_degree
        out = [mpc(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return SeriesPoly(out, n)

    __rmul__ = __mul__

    def log(self) -> "SeriesPoly":
        """log of a series with nonzero constant term (principal log of c0)."""
        n = self.truncation_degree
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ValueError("log of series with zero constant term")
        a = [c / c0 for c in self.coeffs]
        # L' = a'/a  ->  k L_k = k a_k - sum_{j=1}^{k-1} j L_j a_{k-j}
        L = [mp.log(c0)] + [mpc(0)] * n
        for k in range(1, n + 1):
            s = k * a[k]
            for j in range(1, k):
                s -= j * L[j] * a[k - j]
            L[k] = s / k
        return SeriesPoly(L, n)

    def exp(self) -> "SeriesPoly":
        n = self.truncation_degree
        E = [mp.exp(self.coeffs[0])] + [mpc(0)] * n
        # E' = L' E  ->  k E_k = sum_{j=1}^{k} j L_j E_{k-j}
        for k in range(1, n + 1):
            s = mpc(0)
            for j in range(1, k + 1):
                s += j * self.coeffs[j] * E[k - j]
            E[k] = s / k
        return SeriesPoly(E, n)

    def __pow__(self, exponent) -> "SeriesPoly":
        return (self.log() * cnum(exponent)).exp()

    def coefficient(self, n: int) -> mpc:
        return self.coeffs[n]

    def __repr__(self):
        return f"SeriesPoly({[mp.nstr(c, 6) for c in self.coeffs]}, {self.truncation_degree})"
