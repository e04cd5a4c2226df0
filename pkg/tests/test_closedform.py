import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kuostab import closedform as cf
from kuostab import specfun as sf
from kuostab.errors import BetaOutOfRange, GammaOutOfRange, UnsupportedIndex
from kuostab.profiles import sinus_profile
from kuostab.slsolver import Finite, SLProblem, dlambda_dc, eigenfunction, eigenvalues

PI = math.pi
PI2 = PI * PI

# mpmath at 40 digits, see oracles.py
LAMBDA_MINUS_0_QUARTER = 3.409864456697486      # -lambda_1(pi^2/4, 0)
DLAMBDA_DC_0_QUARTER = 4.413821270373381        # one-sided c-derivative at 0, beta = pi^2/4


def test_regular_and_infinity():
    assert cf.lambda_regular(1) == pytest.approx(-0.75 * PI2, rel=1e-15)
    assert cf.lambda_regular(1) == pytest.approx(-7.4022033, abs=1e-7)
    assert cf.lambda_regular(2) == 0.0
    assert cf.lambda_regular(4) == pytest.approx(3 * PI2, rel=1e-15)
    assert cf.lambda_infinity(1) == pytest.approx(PI2 / 4, rel=1e-15)
    assert cf.lambda_infinity(2) == pytest.approx(PI2, rel=1e-15)
    assert cf.lambda_infinity(3) == pytest.approx(9 * PI2 / 4, rel=1e-15)
    with pytest.raises(ValueError):
        cf.lambda_regular(0)


def test_lambda_c0_examples():
    assert cf.gamma_of_beta(PI2 / 2) == pytest.approx(0.5)
    assert cf.lambda_c0(PI2 / 2, 1) == pytest.approx(-0.75 * PI2, rel=1e-14)
    assert cf.gamma_of_beta(0.0) == 1.0
    assert cf.lambda_c0(0.0, 1) == pytest.approx(0.0, abs=1e-15)
    assert cf.gamma_of_beta(5 * PI2 / 16) == pytest.approx(0.75)
    assert cf.lambda_c0(5 * PI2 / 16, 1) == pytest.approx(-7 * PI2 / 16, rel=1e-14)
    assert cf.lambda_c0(5 * PI2 / 16, 1) == pytest.approx(-4.3180, abs=1e-4)
    with pytest.raises(BetaOutOfRange):
        cf.lambda_c0(9 * PI2 / 16, 1)


def test_lambda_c1_examples():
    assert cf.gamma_tilde_of_beta(0.0) == 1.0
    assert cf.lambda_c1(0.0, 1) == pytest.approx(1.25 * PI2, rel=1e-14)
    assert cf.lambda_c1(0.0, 2) == cf.lambda_c1(0.0, 1)
    with pytest.raises(BetaOutOfRange):
        cf.lambda_c1(-9 * PI2 / 16, 1)


def test_lambda_c1_against_solver():
    beta = -0.3 * PI2
    gt = 0.25 + math.sqrt(9 / 16 - 0.3)
    target = cf.lambda_c1(beta, 1)
    assert target == pytest.approx(((gt + 0.5) ** 2 - 1) * PI2, rel=1e-14)
    s = sinus_profile()
    d4 = abs(eigenvalues(SLProblem(s, beta, Finite(1 + 1e-4)), 1)[0] - target)
    d5 = abs(eigenvalues(SLProblem(s, beta, Finite(1 + 1e-5)), 1)[0] - target)
    assert d5 < d4 < 1e-2 * abs(target)


@given(st.floats(-5.5, 8.0), st.integers(1, 6))
def test_pairing(beta, k):
    assert cf.lambda_c1(beta, 2 * k - 1) == cf.lambda_c1(beta, 2 * k)


@given(st.floats(-5.5, 5.5))
def test_gamma_exponents_exceed_quarter(beta):
    g = cf.exponents(beta)
    assert g.gamma > 0.25 and g.gamma_tilde > 0.25


@given(st.floats(0.5 + 1e-6, 1 - 1e-6))
def test_snm_roundtrip(gamma):
    c, alpha, beta = cf.snm_curve(gamma)
    assert c == 0.0
    assert cf.gamma_of_beta(beta) == pytest.approx(gamma, abs=1e-12)
    assert alpha == pytest.approx(cf.snm_alpha(beta), abs=1e-12)


@pytest.mark.parametrize("gamma", [0.55, 0.7, 0.9])
def test_snm_consistency(gamma):
    _, alpha, beta = cf.snm_curve(gamma)
    assert cf.lambda_c0(beta, 1) == pytest.approx(-PI2 * (1 - gamma ** 2), abs=1e-12)
    assert cf.lambda_c0(beta, 1) == pytest.approx(-alpha ** 2, abs=1e-12)


def test_snm_examples():
    c, a, b = cf.snm_curve(math.sqrt(3) / 2)
    assert (c, a) == (0.0, pytest.approx(PI / 2, abs=1e-15))
    assert b == pytest.approx(cf.BETA_PLUS, abs=1e-14)
    assert b == pytest.approx(1.80626, abs=1e-5)
    _, a, b = cf.snm_curve(0.5 + 1e-12)
    assert a == pytest.approx(math.sqrt(3) * PI / 2, abs=1e-9) and b == pytest.approx(PI2 / 2, abs=1e-9)
    _, a, b = cf.snm_curve(1 - 1e-12)
    assert a == pytest.approx(0.0, abs=1e-5) and b == pytest.approx(0.0, abs=1e-9)
    for bad in (0.5, 1.0, 0.3):
        with pytest.raises(GammaOutOfRange):
            cf.snm_curve(bad)


def test_endpoint_values():
    assert cf.lambda_minus_at_endpoints(PI2 / 2).at0 == pytest.approx(0.75 * PI2, rel=1e-14)
    e = cf.lambda_minus_at_endpoints(-0.2 * PI2)
    assert (e.at0, e.at1) == (0.0, 0.0)
    e = cf.lambda_minus_at_endpoints(0.25 * PI2)
    assert e.at0 == pytest.approx(LAMBDA_MINUS_0_QUARTER, rel=1e-14)
    gamma = 0.25 + math.sqrt(5 / 16)
    assert gamma == pytest.approx(0.809017, abs=1e-6)
    assert e.at0 == pytest.approx(PI2 * (1 - gamma ** 2), rel=1e-14)
    # solver just left of the wall
    lam = eigenvalues(SLProblem(sinus_profile(), 0.25 * PI2, Finite(-1e-5)), 1)[0]
    assert -lam == pytest.approx(e.at0, abs=1e-3)
    with pytest.raises(BetaOutOfRange):
        cf.lambda_minus_at_endpoints(PI2)


def test_derivative_at_zero_examples():
    assert cf.dlambda1_dc_at_zero(cf.BETA_PLUS) == pytest.approx(0.0, abs=1e-12)
    assert cf.dlambda1_dc_at_zero(0.4 * PI2) is sf.PLUS_INFINITY
    assert cf.dlambda1_dc_at_zero(cf.BETA_CUSP) is sf.PLUS_INFINITY
    v = cf.dlambda1_dc_at_zero(0.25 * PI2)
    assert v == pytest.approx(DLAMBDA_DC_0_QUARTER, rel=1e-13)
    with pytest.raises(BetaOutOfRange):
        cf.dlambda1_dc_at_zero(0.0)


def test_derivative_at_zero_trend():
    # the solver's c-derivative climbs toward the positive one-sided value
    s = sinus_profile()
    beta = 0.25 * PI2
    vals = []
    for d in (1e-3, 1e-4, 1e-5):
        pr = SLProblem(s, beta, Finite(-d))
        vals.append(dlambda_dc(eigenfunction(pr, 1), pr))
    assert vals[0] < vals[1] < vals[2] < DLAMBDA_DC_0_QUARTER
    assert vals[2] > 0


@pytest.mark.parametrize("frac,branch", [(0.1, "nonpos"), (0.19, "pos"), (0.25, "pos"),
                                         (0.35, "inf"), (0.45, "inf")])
def test_derivative_sign_pattern(frac, branch):
    beta = frac * PI2
    # branch membership is plain arithmetic against beta_+ and 5 pi^2/16
    expected = "nonpos" if beta <= cf.BETA_PLUS else ("pos" if beta < 5 * PI2 / 16 else "inf")
    assert branch == expected
    v = cf.dlambda1_dc_at_zero(beta)
    if branch == "inf":
        assert sf.is_infinite(v)
    elif branch == "pos":
        assert not sf.is_infinite(v) and v > 0
    else:
        assert not sf.is_infinite(v) and v <= 0


def test_eigfun_c0():
    beta = 0.2 * PI2
    g = cf.gamma_of_beta(beta)
    assert cf.eigfun_c0(beta, 1, 0.0) == 1.0
    assert cf.eigfun_c0(beta, 1, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert cf.eigfun_c0(beta, 1, -1.0) == pytest.approx(0.0, abs=1e-15)
    assert cf.eigfun_c0(beta, 1, 0.5) == pytest.approx(math.cos(PI / 4) ** (2 * g), rel=1e-15)
    with pytest.raises(UnsupportedIndex):
        cf.eigfun_c0(beta, 3, 0.1)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("frac", [0.05, 0.2, 0.45])
def test_eigfun_c0_solves_equation(n, frac):
    # analytic second derivative of cos^{2g}(pi y/2) P(sin(pi y/2))
    beta = frac * PI2
    g = cf.gamma_of_beta(beta)
    lam = cf.lambda_c0(beta, n)
    s = sinus_profile()
    ys = np.linspace(-0.99, 0.99, 101)
    k = PI / 2
    co, si = np.cos(k * ys), np.sin(k * ys)
    a = 2 * g
    f = co ** a
    f2 = k * k * a * ((a - 1) * co ** (a - 2) * si ** 2 - co ** a)
    if n == 2:
        f1 = -k * a * co ** (a - 1) * si
        phi = f * si
        d2 = f2 * si + 2 * f1 * k * co - f * k * k * si
    else:
        phi, d2 = f, f2
    phi_check = np.array([cf.eigfun_c0(beta, n, y) for y in ys])
    assert np.allclose(phi_check, phi, rtol=1e-13, atol=1e-15)
    q = (beta - s.d2U(ys)) / s.U(ys)
    res = np.max(np.abs(-d2 - q * phi - lam * phi)) / np.max(np.abs(phi)) / max(1.0, abs(lam))
    assert res < 1e-8


@pytest.mark.parametrize("frac", [0.1, 0.25, 0.45])
def test_solver_approaches_lambda_c0(frac):
    beta = frac * PI2
    target = cf.lambda_c0(beta, 1)
    s = sinus_profile()
    d4 = abs(eigenvalues(SLProblem(s, beta, Finite(-1e-4)), 1)[0] - target)
    d5 = abs(eigenvalues(SLProblem(s, beta, Finite(-1e-5)), 1)[0] - target)
    assert d5 < d4
    assert d5 < 1e-3 * max(1.0, abs(target)) * 10
