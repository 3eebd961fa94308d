import pytest
from mpmath import mp, mpc

from fkasym.core import DomainError, PrecisionContext
from fkasym.mellin import (
    PsiFSpec,
    mellin_1f1_direct,
    mellin_1f1_product,
    mellin_psiF_closed,
    mellin_psiF_direct,
    residue_at_zero,
)

from conftest import rel

SPEC = dict(xi=0.6, eta=1.4, a=0.8, b=1.1, c=2.3, cp=1.9, lam=-1, mu=-0.5, x=0.2)


def spec(**kw):
    d = dict(SPEC, **kw)
    return PsiFSpec.of(d["xi"], d["eta"], d["a"], d["b"], d["c"], d["cp"], d["lam"], d["mu"], d["x"])


def test_1f1_product_a_equals_b(ctx):
    # a = b: 1F1[a; a; -w t] = e^{-w t}, so the transform is Gamma(s) w^-s 2F1-type; check against quadrature
    args = (0.7, 0.7, 0.9, 1.6, 1.3, 0.4, 0.8)
    with mp.workdps(ctx.dps):
        c = mellin_1f1_product(*args, ctx)
        d = mellin_1f1_direct(*args, ctx).value
    assert rel(c, d) < 1e-12


def test_1f1_product_general(ctx):
    args = (0.9, 1.7, 0.8, 2.2, 1.0, 0.6, 0.7)
    with mp.workdps(ctx.dps):
        assert rel(mellin_1f1_product(*args, ctx), mellin_1f1_direct(*args, ctx).value) < 1e-12


def test_closed_frozen(ctx):
    # direct quadrature of the defining integral agreed to 5e-16 when this value was recorded
    with mp.workdps(ctx.dps):
        assert rel(mellin_psiF_closed(spec(), 0.9, ctx), mpc("3.14517640788106")) < 1e-13


@pytest.mark.slow
def test_closed_vs_direct(ctx):
    with mp.workdps(ctx.dps):
        c = mellin_psiF_closed(spec(), 0.9, ctx)
        d = mellin_psiF_direct(spec(), 0.9, ctx).value
    assert rel(c, d) < 1e-12


def test_removable_point_is_smooth(ctx):
    s0 = 0.6  # s - xi = 0
    with mp.workdps(ctx.dps):
        v = [mellin_psiF_closed(spec(), s0 + h, ctx) for h in (-1e-3, 0, 1e-3)]
    assert abs(v[1] - (v[0] + v[2]) / 2) < 1e-5 * abs(v[1])


def test_residue_at_zero_is_2f1(ctx):
    with mp.workdps(30):
        ref = mp.hyp2f1(0.8, 1.1, 2.3, 0.2)
    assert rel(residue_at_zero(spec(), ctx), ref) < 1e-10


def test_strip_and_spec_checks(ctx):
    with pytest.raises(DomainError):
        mellin_psiF_closed(spec(), 1.5, ctx)
    with pytest.raises(DomainError):
        spec(lam=1)
    with pytest.raises(DomainError):
        spec(mu=0.5)
