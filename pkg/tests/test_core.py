import json

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from fkasym.core import (
    DomainError,
    EvalOutcome,
    PoleError,
    PrecisionContext,
    cnum,
    complex_pow,
    digamma,
    gamma,
    gamma_ratio,
    gamma_reference,
    near_integer,
    nonpositive_int,
    pochhammer,
)

from conftest import rel

finite = st.floats(min_value=-8, max_value=8, allow_nan=False)


def test_precision_context_defaults():
    c = PrecisionContext()
    assert c.digits == 16 and c.dps == 22
    assert c.tol == pytest.approx(1e-12)
    assert c.pole_tol == pytest.approx(1e-10)
    assert c.with_digits(30).dps == 36
    assert c.oracle().digits == 50
    with pytest.raises(ValueError):
        PrecisionContext(5)


def test_cnum_forms():
    assert cnum("1.5,-2") == mpc(1.5, -2)
    assert cnum("0.25") == mpc(0.25)
    assert cnum(3) == mpc(3)


def test_gamma_known_values(ctx):
    with mp.workdps(30):
        assert rel(gamma(mpf(0.5), ctx), mp.sqrt(mp.pi)) < 1e-15
        assert rel(gamma(5, ctx), 24) < 1e-15
        assert rel(digamma(1, ctx), -mp.euler) < 1e-15
        assert rel(digamma(mpf(0.5), ctx), -mp.euler - 2 * mp.log(2)) < 1e-15


@given(finite, st.floats(min_value=-6, max_value=6))
def test_gamma_matches_stirling_reference(re, im):
    z = mpc(re, im)
    if nonpositive_int(z, 1e-6) is not None:
        return
    with mp.workdps(30):
        assert rel(gamma(z, PrecisionContext(20)), gamma_reference(z, 40)) < 1e-17


@given(finite, st.floats(min_value=-5, max_value=5))
def test_digamma_recurrence(re, im):
    z = mpc(re, im)
    if nonpositive_int(z, 1e-3) is not None or nonpositive_int(z + 1, 1e-3) is not None:
        return
    with mp.workdps(30):
        c = PrecisionContext(20)
        lhs = digamma(z + 1, c) - digamma(z, c)
        assert abs(lhs - 1 / z) < 1e-15 * max(1, abs(1 / z), abs(digamma(z, c)))


def test_pochhammer_and_ratio(ctx):
    assert pochhammer(mpf(0.5), 3) == mpf(0.5) * 1.5 * 2.5
    assert pochhammer(-2, 3) == 0
    with mp.workdps(25):
        assert rel(gamma_ratio([mpf(2.5)], [mpf(1.5)], ctx), 1.5) < 1e-20
        # a pole in the denominator gives an exact zero
        assert gamma_ratio([1], [-2], ctx) == 0


def test_nonpositive_and_near_integer():
    assert nonpositive_int(mpc(-3), 1e-12) == 3
    assert nonpositive_int(mpc(2), 1e-12) is None
    assert near_integer(mpc(2.0000001), 1e-3) == 2
    assert near_integer(mpc(2.4), 1e-3) is None


def test_complex_pow_principal():
    with mp.workdps(20):
        assert rel(complex_pow(mpc(-1), mpf(0.5)), mpc(0, 1)) < 1e-18


def test_error_hierarchy():
    assert issubclass(PoleError, DomainError)
    e = DomainError("msg", witness="x = 1")
    assert e.witness == "x = 1"


@given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=-1e6, max_value=1e6),
       st.floats(min_value=0, max_value=1))
def test_outcome_json_roundtrip(re, im, err):
    o = EvalOutcome(mpc(re, im), err, "series", {"terms": 7, "nodes": [1, 2]})
    d = json.loads(json.dumps(o.to_dict(17)))
    back = EvalOutcome.from_dict(d)
    assert back.value == o.value
    assert back.method == o.method and back.status == "ok"
    assert back.to_dict(17) == o.to_dict(17)


def test_outcome_flags_nonfinite():
    o = EvalOutcome(mpc(mp.inf), 0.0, "x")
    assert not o.ok
