import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from fkasym.core import DomainError, PoleError, PrecisionContext
from fkasym.fk import (
    FkParams,
    appell_f2_double_series,
    asymptotic_condition,
    case_of,
    clear_cache,
    fk_asymptotic,
    fk_auto,
    fk_coeff_Ahat,
    fk_coeff_Bcross,
    fk_coeff_Bhat,
    fk_coeff_Bk_tilde,
    fk_coeff_Chat,
    fk_laplace,
    fk_single_series,
    fk_triple_series,
    mellin_f_braced,
)
from fkasym.hyp import hyp1f1
from fkasym.mellin import PsiFSpec, mellin_psiF_closed
from fkasym.psi1 import Psi1Params, psi1

from conftest import rel

P = FkParams.of(0.7, 1.3, 0.6, 0.9, 2.1, 2.4, 1.8)

# plain triple sum at 40 digits (scripts/make_oracles.py)
FROZEN = [
    ((0.2, 0.3, 0.1), "1.306735892570485574082261"),
    ((-0.3, 0.25, -0.2), "0.9998925401844919842959622"),
]


@pytest.mark.parametrize("xyz,ref", FROZEN)
def test_series_frozen(xyz, ref, ctx):
    with mp.workdps(ctx.dps):
        assert rel(fk_triple_series(P, *xyz, ctx).value, mpc(ref)) < 1e-13
        assert rel(fk_single_series(P, *xyz, ctx).value, mpc(ref)) < 1e-13


def test_origin_is_one(ctx):
    for f in (fk_triple_series, fk_single_series, fk_laplace):
        assert f(P, 0, 0, 0, ctx).value == 1 or rel(f(P, 0, 0, 0, ctx).value, 1) < 1e-14


def test_x_zero_is_appell_f2(ctx):
    # mpmath.appellf2(0.7, 0.6, 1.3, 2.1, 2.4, 0.3, -0.2)
    q = FkParams.of(0.4, 0.7, 1.3, 0.6, 1.7, 2.1, 2.4)
    ref = mpc("0.9897224047258910727298669")
    with mp.workdps(ctx.dps):
        assert rel(fk_single_series(q, 0, 0.3, -0.2, ctx).value, ref) < 1e-13
        assert rel(appell_f2_double_series(0.7, 0.6, 1.3, 2.1, 2.4, 0.3, -0.2, digits=30), ref) < 1e-13


def test_z_zero_product(ctx):
    with mp.workdps(30):
        ref = mp.hyp2f1(0.6, 0.7, 2.1, -2.0) * mp.hyp2f1(1.3, 0.9, 2.4, 0.4)
    assert rel(fk_single_series(P, -2.0, 0.4, 0, ctx).value, ref) < 1e-13


def test_laplace_y_z_zero_is_2f1(ctx):
    with mp.workdps(30):
        ref = mp.hyp2f1(0.6, 0.7, 2.1, 0.3)
    assert rel(fk_laplace(P, 0.3, 0, 0, ctx).value, ref) < 1e-12


def test_laplace_matches_series(ctx):
    # values recorded when the two paths agreed to 1e-15
    assert rel(fk_laplace(P, 0.2, -0.3, -0.1, ctx).value, mpc("0.879022230942803")) < 1e-12
    assert rel(fk_single_series(P, 0.2, -0.3, -0.1, ctx).value, mpc("0.879022230942803")) < 1e-13
    assert rel(fk_laplace(P, 0.2, -3, -0.5, ctx).value, mpc("0.425572081352772")) < 1e-12


def test_continuation_outside_unit_disk(ctx):
    s = fk_single_series(P, -3, -0.2, -0.05, ctx).value
    l = fk_laplace(P, -3, -0.2, -0.05, ctx).value
    assert rel(s, l) < 1e-11


@given(st.floats(min_value=-0.5, max_value=0.5), st.floats(min_value=-0.5, max_value=0.5),
       st.floats(min_value=-0.2, max_value=0.2))
def test_swap_symmetry(x, y, z):
    ctx = PrecisionContext(16)
    a = fk_single_series(P, x, y, z, ctx).value
    b = fk_single_series(P.swap(), y, x, z, ctx).value
    assert rel(a, b) < 1e-12


def test_swap_involution():
    assert P.swap().swap() == P


def test_btilde_k0_closed_form(ctx):
    with mp.workdps(ctx.dps):
        ref = mp.gamma(2.4) * mp.gamma(1.8) / (mp.gamma(2.4 - 0.9) * mp.gamma(1.8 - 0.6)) * mpf(1.3) ** mpf(0.6)
        assert rel(fk_coeff_Bk_tilde(P, 0.2, 1.3, 0, ctx), ref) < 1e-14


def test_btilde_richardson():
    # f(t) = 1F1[b2; g2; -t] Psi_1[b1, a1; g1, g3; x, -t/1.3] for y, z < 0, y/z = 1.3;
    # t^{b1+b2} f(t) interpolated in 1/t at t = 200 * 2^j, j < 5
    c = PrecisionContext(32)
    x, w = mpf("0.2"), mpf("1.3")
    q = FkParams.of(mpf("0.7"), mpf("1.3"), mpf("0.6"), mpf("0.9"), mpf("2.1"), mpf("2.4"), mpf("1.8"))
    with mp.workdps(c.dps):
        ts = [mpf(200) * 2**j for j in range(5)]
        inner = Psi1Params.of(q.beta1, q.alpha1, q.gamma1, q.gamma3)
        vals = [(hyp1f1(q.beta2, q.gamma2, -t, c) * psi1(inner, x, -t / w, c).value * t ** mpf("1.5")).real
                for t in ts]
        coef = mp.lu_solve(mp.matrix([[1 / t**j for j in range(5)] for t in ts]), mp.matrix(vals))
        for k, tol in ((0, 1e-12), (1, 1e-8), (2, 1e-5)):
            assert rel(coef[k], fk_coeff_Bk_tilde(q, x, w, k, c)) < tol


def test_btilde_x_zero_termwise(ctx):
    # at x = 0 every 2F1[j-k, a1; g1; 0] is 1
    q = FkParams.of(0.0, 1.3, 0.6, 0.9, 2.1, 2.4, 1.8)
    for k in range(3):
        assert rel(fk_coeff_Bk_tilde(q, 0.0, 1.3, k, ctx), fk_coeff_Bk_tilde(P, 0.0, 1.3, k, ctx)) < 1e-14


def test_ahat_independent_of_x_when_alpha1_zero(ctx):
    q = FkParams.of(0.0, 1.3, 0.6, 0.9, 2.1, 2.4, 1.8)
    assert rel(fk_coeff_Ahat(q, 0.2, 1.4, 1, ctx), fk_coeff_Ahat(q, -0.4, 1.4, 1, ctx)) < 1e-13


def test_g_matches_mellin_module(ctx):
    spec = PsiFSpec.of(0.9, 2.4, 0.6, 0.7, 2.1, 1.8, -1, -1 / mpf(1.4), 0.2)
    with mp.workdps(ctx.dps):
        assert rel(mellin_f_braced(P, 0.2, 1.4, 1.3, ctx), mellin_psiF_closed(spec, 1.3, ctx)) < 1e-13


def test_coefficients_frozen(ctx):
    # recorded values; the A6 fit (expansion vs Laplace oracle) confirms them at order y^-3.5
    with mp.workdps(ctx.dps):
        assert rel(fk_coeff_Ahat(P, 0.2, 1.4, 0, ctx), mpc("9.137190565037042")) < 1e-12
        assert rel(fk_coeff_Bhat(P, 0.2, 1.4, 0, ctx), mpc("-11.28514793849546")) < 1e-12


def test_case_dispatch(ctx):
    assert case_of(P, ctx) == ("nonlog", None)
    assert case_of(FkParams.of(0.7, 0.5, 0.6, 0.9, 2.1, 2.4, 1.8), ctx) == ("logI", 1)
    assert case_of(FkParams.of(0.7, 2.5, 0.6, 0.9, 2.1, 2.4, 1.8), ctx) == ("logII", 1)
    with pytest.raises(PoleError):
        fk_coeff_Bhat(FkParams.of(0.7, 0.5, 0.6, 0.9, 2.1, 2.4, 1.8), 0.2, 1.4, 0, ctx)


def test_log_coefficients_frozen(ctx):
    # the limit form of the constant term against oracle fits (see the acceptance suite)
    q = FkParams.of(0.7, 0.5, 0.6, 0.9, 2.1, 2.4, 1.8)
    assert rel(fk_coeff_Bcross(q, 0.2, 1.4, 0, ctx), mpc("-0.981621165297")) < 1e-10
    assert abs(fk_coeff_Chat(q, 0.2, 1.4, 0, ctx, "limit") - mpc("0.0333309155255")) < 1e-10
    assert abs(fk_coeff_Chat(q, 0.2, 1.4, 0, ctx, "displayed") - mpc("2.20898124806")) < 1e-9


def test_chat_refuses_integer_beta1(ctx):
    q = FkParams.of(0.7, 1.0, 1.0, 1.0, 2.1, 2.4, 1.8)
    with pytest.raises(PoleError):
        fk_coeff_Chat(q, 0.2, 1.4, 0, ctx)


def test_log_case_continuity(ctx):
    y = -200
    vals = []
    for a2 in (0.5 - 1e-3, 0.5, 0.5 + 1e-3):
        q = FkParams.of(0.7, a2, 0.6, 0.9, 2.1, 2.4, 1.8)
        vals.append(fk_asymptotic(q, 0.2, y, y / 1.4, 2, ctx)[1].value)
    assert rel(vals[0], vals[1]) < 1e-2 and rel(vals[2], vals[1]) < 1e-2


def test_asymptotic_condition_witnesses():
    assert asymptotic_condition(P, 0.2, -200, -150)
    assert not asymptotic_condition(P, 0.2, 200, -150)
    assert not asymptotic_condition(P, 0.2, -200, -1e-3)
    assert not asymptotic_condition(FkParams.of(0.7, -0.3, 0.6, 0.9, 2.1, 2.4, 1.8), 0.2, -200, -150)


def test_expansion_structure(ctx):
    e, o = fk_asymptotic(P, 0.2, -400, -400 / 1.4, 2, ctx)
    assert e.case_tag == "nonlog" and not e.log_terms
    re = [float(mpc(x).real) for x, _ in e.inverse_power_terms]
    assert re == sorted(re)
    assert e.remainder_order == pytest.approx(3.5)
    assert rel(o.value, mpc("0.00238196982027462")) < 1e-6


def test_cache_reuse(ctx):
    clear_cache()
    a = fk_coeff_Bk_tilde(P, 0.2, 1.4, 3, ctx)
    assert fk_coeff_Bk_tilde(P, 0.2, 1.4, 3, ctx) == a


def test_auto_routing(ctx):
    assert fk_auto(P, 0.1, 0.1, 0.1, ctx).diagnostics["routing"] == "series"
    with pytest.raises(DomainError) as e:
        fk_auto(P, 0.5, 0.8, 0.9, ctx)
    assert "no applicable method" in str(e.value)


@pytest.mark.slow
def test_auto_asymptotic_vs_laplace(ctx):
    o = fk_auto(P, 0.2, -120, -150, ctx)
    assert o.diagnostics["routing"] == "asymptotic"
    l = fk_laplace(P, 0.2, -120, -150, ctx)
    assert abs(o.value - l.value) < 1e-3 * abs(l.value)
