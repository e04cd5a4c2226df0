import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kuostab import closedform as cf
from kuostab.errors import InvalidSpeed, NoConvergence
from kuostab.profiles import sinus_profile, tanh_profile
from kuostab.slsolver import (INFINITY, Compactified, Finite, SLProblem, count_nodes,
                              dlambda_dbeta, dlambda_dc, eigenfunction, eigenvalues,
                              lambda1, solve, speed_from_ctilde)

PI = math.pi
PI2 = PI * PI
S = sinus_profile()

# dense LAPACK finite differences with two Romberg levels, see oracles.py
FD_BETA0_C2 = [4.618995608082399, 10.058394173245397, 23.014686194693418]
FD_B04_CM05_LAMBDA1 = -2.481153284753509
FD_B04_CM05_PHI = [0.6651547675718813, 1.0563128151027819, 0.6651547675520093]   # y = -0.5, 0, 0.5


def test_dense_fd_golden_values():
    lam = eigenvalues(SLProblem(S, 0.0, Finite(2.0)), 3, 1e-8)
    assert lam == pytest.approx(FD_BETA0_C2, rel=1e-8)


@pytest.mark.parametrize("beta", [-0.5 * PI2, -1.0, 0.0, 2.0, 0.5 * PI2])
def test_regular_curve(beta):
    lam = eigenvalues(SLProblem(S, beta, Finite(S.u_beta(beta))), 3, 1e-9)
    assert lam == pytest.approx([-0.75 * PI2, 0.0, 1.25 * PI2], rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("speed", [INFINITY, Compactified(0.0), Finite(math.inf)])
def test_infinity(speed):
    lam = eigenvalues(SLProblem(S, 1.3, speed), 2, 1e-9)
    assert lam == pytest.approx([PI2 / 4, PI2], rel=1e-9)


def test_compactified_maps_to_finite():
    # ctilde = -2, 2 are the walls c = 0, 1; they resolve where c = U_beta
    assert SLProblem(S, PI2 / 2, Compactified(-2.0)).c == 0.0
    assert SLProblem(S, -PI2 / 2, Compactified(2.0)).c == 1.0
    assert SLProblem(S, 0.0, Compactified(1.0)).c == 1.5
    with pytest.raises(InvalidSpeed):
        SLProblem(S, 0.0, Compactified(-2.0)).resolve()
    assert speed_from_ctilde(0) is INFINITY
    a = eigenvalues(SLProblem(S, 0.3, Compactified(-1.0)), 2)
    b = eigenvalues(SLProblem(S, 0.3, Finite(-0.5)), 2)
    assert a == b


def test_invalid_speeds():
    for c in (0.3, 0.0, 1.0):
        with pytest.raises(InvalidSpeed):
            eigenvalues(SLProblem(S, 0.2, Finite(c)))
    with pytest.raises(ValueError):
        eigenvalues(SLProblem(S, 0.0, Finite(2.0)), 0)


def test_no_convergence_when_grid_capped():
    with pytest.raises(NoConvergence):
        solve(SLProblem(S, 0.3 * PI2, Finite(-1e-6)), 1, 1e-12, n_cap=8192)
    sol = solve(SLProblem(S, 0.3 * PI2, Finite(-1e-6)), 1, 1e-12, n_cap=8192, strict=False)
    assert not sol.converged and sol.n_grid == 8192


def test_eigenfunction_regular_cosine():
    pr = SLProblem(S, 0.7, Finite(S.u_beta(0.7)))
    p1 = eigenfunction(pr, 1, 1e-8)
    ref = np.cos(PI * p1.grid / 2)
    ref /= math.sqrt(np.trapezoid(ref ** 2, p1.grid))
    assert np.max(np.abs(p1.phi - ref)) < 1e-6
    assert p1.nodes == 0
    p2 = eigenfunction(pr, 2, 1e-8)
    ref = np.sin(PI * (p2.grid + 1))        # sin(n pi (y+1)/2), rising at y = -1
    ref /= math.sqrt(np.trapezoid(ref ** 2, p2.grid))
    assert np.max(np.abs(p2.phi - ref)) < 1e-6
    assert p2.nodes == 1


def test_eigenfunction_against_dense_fd():
    pr = SLProblem(S, 0.4 * PI2, Finite(-0.5))
    pair = eigenfunction(pr, 1, 1e-8)
    assert pair.lam == pytest.approx(FD_B04_CM05_LAMBDA1, rel=1e-8)
    assert pair.lambda_ == pair.lam
    assert np.all(pair.phi[1:-1] > 0)
    vals = np.interp([-0.5, 0.0, 0.5], pair.grid, pair.phi)
    assert vals == pytest.approx(FD_B04_CM05_PHI, abs=1e-6)
    assert np.trapezoid(pair.phi ** 2, pair.grid) == pytest.approx(1.0, abs=1e-8)
    assert pair.converged and pair.est_error < 1e-8


def test_count_nodes():
    y = np.linspace(-1, 1, 1001)
    assert count_nodes(np.sin(3 * PI * (y + 1) / 2)) == 2
    assert count_nodes(np.cos(PI * y / 2)) == 0


@settings(max_examples=25)
@given(st.floats(-0.5 * PI2, 0.5 * PI2),
       st.one_of(st.floats(-6.0, -0.02), st.floats(1.02, 7.0)))
def test_ordering_and_lower_bound(beta, c):
    lam = eigenvalues(SLProblem(S, beta, Finite(c)), 4, 1e-8)
    assert all(a < b for a, b in zip(lam, lam[1:]))
    assert all(v > cf.lambda_regular(n) for n, v in enumerate(lam, 1))


@settings(max_examples=10)
@given(st.floats(-0.5 * PI2, 0.5 * PI2), st.one_of(st.floats(-3.0, -0.05), st.floats(1.05, 4.0)),
       st.integers(1, 3))
def test_node_law(beta, c, n):
    assert eigenfunction(SLProblem(S, beta, Finite(c)), n, 1e-8).nodes == n - 1


@pytest.mark.parametrize("c", [-2.0, -0.7, -0.2, -0.05, -0.01])
def test_decreasing_in_beta_left(c):
    betas = np.linspace(-0.45, 0.45, 5) * PI2
    for n in (1, 2):
        v = [eigenvalues(SLProblem(S, b, Finite(c)), n)[n - 1] for b in betas]
        assert all(a > b for a, b in zip(v, v[1:]))


@pytest.mark.parametrize("c", [1.01, 1.05, 1.2, 1.7, 3.0])
def test_increasing_in_beta_right(c):
    betas = np.linspace(-0.45, 0.45, 5) * PI2
    for n in (1, 2):
        v = [eigenvalues(SLProblem(S, b, Finite(c)), n)[n - 1] for b in betas]
        assert all(a < b for a, b in zip(v, v[1:]))


@pytest.mark.parametrize("beta", np.linspace(-0.5, 0.5, 5) * PI2)
@pytest.mark.parametrize("c", [-5.0, -0.3, 1.2, 4.0])
def test_lower_bound_grid(beta, c):
    lam = eigenvalues(SLProblem(S, beta, Finite(c)), 3)
    assert all(v > cf.lambda_regular(n) for n, v in enumerate(lam, 1))


def _fd_beta(beta, c, n, h=1e-5):
    f = lambda b: eigenvalues(SLProblem(S, b, Finite(c)), n, 1e-10)[n - 1]
    return (f(beta + h) - f(beta - h)) / (2 * h)


def _fd_c(beta, c, n):
    h = 1e-5 * max(1e-2, abs(c - (0.0 if c < 0 else 1.0)))
    f = lambda x: eigenvalues(SLProblem(S, beta, Finite(x)), n, 1e-10)[n - 1]
    return (f(c + h) - f(c - h)) / (2 * h)


DERIV_POINTS = [(0.3 * PI2, -0.4, 1), (0.25 * PI2, -0.2, 1), (-0.3 * PI2, 1.3, 1),
                (0.1 * PI2, 2.0, 2), (-0.45 * PI2, 1.05, 1), (0.45 * PI2, -0.05, 1),
                (0.0, -1.0, 3), (0.2 * PI2, 3.5, 2)]


@pytest.mark.parametrize("beta,c,n", DERIV_POINTS)
def test_derivative_formulas_match_differences(beta, c, n):
    pr = SLProblem(S, beta, Finite(c))
    pair = eigenfunction(pr, n, 1e-10)
    assert dlambda_dbeta(pair, pr) == pytest.approx(_fd_beta(beta, c, n), rel=1e-4)
    assert dlambda_dc(pair, pr) == pytest.approx(_fd_c(beta, c, n), rel=1e-4)


def test_derivative_signs():
    for beta, c in ((0.2, 1.5), (-2.0, 3.0)):
        pr = SLProblem(S, beta, Finite(c))
        assert dlambda_dbeta(eigenfunction(pr, 1), pr) > 0
    for beta, c in ((0.2, -0.5), (2.0, -3.0)):
        pr = SLProblem(S, beta, Finite(c))
        assert dlambda_dbeta(eigenfunction(pr, 1), pr) < 0
    # beta at the top of Ran(U''): decreasing in c on both sides
    for c in (-0.5, 1.5):
        pr = SLProblem(S, PI2 / 2, Finite(c))
        assert dlambda_dc(eigenfunction(pr, 1), pr) < 0
    # beta at the bottom: increasing on both sides
    for c in (-0.5, 1.5):
        pr = SLProblem(S, -PI2 / 2, Finite(c))
        assert dlambda_dc(eigenfunction(pr, 1), pr) > 0


def test_derivatives_at_special_speeds():
    pr = SLProblem(S, 0.0, INFINITY)
    pair = eigenfunction(pr, 1)
    assert dlambda_dbeta(pair, pr) == 0.0 and dlambda_dc(pair, pr) == 0.0
    pr = SLProblem(S, 0.0, Finite(0.5))
    pair = eigenfunction(pr, 1)
    with pytest.raises(InvalidSpeed):
        dlambda_dc(pair, pr)


def test_singular_limit_monotone():
    beta = 0.2 * PI2
    target = cf.lambda_c0(beta, 1)
    d3 = abs(lambda1(S, beta, -1e-3) - target)
    d4 = abs(lambda1(S, beta, -1e-4) - target)
    assert d4 < d3


@pytest.mark.parametrize("ct", [1e-3, -1e-3])
def test_continuity_at_infinity(ct):
    # lambda_1 - pi^2/4 = ct pi^2/4 (1 + O(ct)) to first order, about 2.47e-3 here
    lam = eigenvalues(SLProblem(S, 0.0, Compactified(ct)), 1)[0]
    assert abs(lam - PI2 / 4) < 1e-3


@pytest.mark.parametrize("ct", [1e-3, -1e-3, 1e-4])
def test_first_order_shift_at_infinity(ct):
    lam = eigenvalues(SLProblem(S, 0.0, Compactified(ct)), 1, 1e-10)[0]
    assert (lam - PI2 / 4) / (ct * PI2 / 4) == pytest.approx(1.0, abs=2 * abs(ct))


def test_tanh_profile_solves():
    t = tanh_profile()
    ub = t.u_beta(0.2)
    lam = eigenvalues(SLProblem(t, 0.2, Finite(ub)), 2)
    assert lam[0] < lam[1]
    lam_far = eigenvalues(SLProblem(t, 0.2, Finite(t.u_max + 50.0)), 1)[0]
    # channel of length 1: the potential fades as c grows and lambda_1 -> pi^2
    assert lam_far == pytest.approx(PI2, rel=1e-2)


def test_results_are_deterministic():
    a = eigenvalues(SLProblem(S, 0.9, Finite(-0.3)), 3)
    b = eigenvalues(SLProblem(S, 0.9, Finite(-0.3)), 3)
    assert a == b
