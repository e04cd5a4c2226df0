"""Compiled inner loops: Sturm counts, inverse iteration, RK4 shooting.

Profile functions arrive as numba dispatchers, so these kernels are
compiled per profile on first use (a second or so) and cannot be cached
on disk.
"""
import math

import numpy as np
from numba import njit

# potential modes
Q_FINITE = 0
Q_REGULAR = 1
Q_ZERO = 2


@njit(nogil=True)
def potential_grid(u, d2u, kfun, y1, h, n_int, beta, c, mode, ub):
    """q(y_i) = (beta - U'')/(U - c) at the n_int interior nodes y1 + i h."""
    q = np.empty(n_int)
    for i in range(n_int):
        y = y1 + (i + 1) * h
        if mode == Q_ZERO:
            q[i] = 0.0
        elif mode == Q_REGULAR:
            q[i] = kfun(y, beta, ub)
        else:
            q[i] = (beta - d2u(y)) / (u(y) - c)
    return q


@njit(nogil=True, cache=True)
def count_below(q, h2, x):
    """Number of eigenvalues below x of h^-2 tridiag(-1, 2, -1) - diag(q).

    Works with the scaled pivots 1 + s_i of tridiag(-1, 2 + a_i, -1),
    a_i = -h^2 (q_i + x), which keeps full precision when h is tiny.
    """
    cnt = 0
    s = 1.0 - h2 * (q[0] + x)
    if s < -1.0:
        cnt += 1
    for i in range(1, q.size):
        den = 1.0 + s
        if den == 0.0:
            den = 1e-300
        s = -h2 * (q[i] + x) + s / den
        if s < -1.0:
            cnt += 1
    return cnt


@njit(nogil=True, cache=True)
def bisect_eigenvalue(q, h2, k, lo, hi, rtol):
    """k-th eigenvalue (1-based) by Sturm bisection inside [lo, hi]."""
    while hi - lo > rtol * max(1.0, abs(lo) + abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if count_below(q, h2, mid) >= k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(nogil=True, cache=True)
def inverse_iteration(q, h2, shift, iters):
    """Eigenvector of the scaled tridiagonal matrix nearest to shift."""
    n = q.size
    x = np.ones(n)
    diag = np.empty(n)
    for i in range(n):
        diag[i] = 2.0 - h2 * (q[i] + shift)
    piv = np.empty(n)
    for _ in range(iters):
        # Thomas elimination of tridiag(-1, diag, -1) x_new = x
        piv[0] = diag[0]
        if piv[0] == 0.0:
            piv[0] = 1e-300
        rhs = x.copy()
        for i in range(1, n):
            m = -1.0 / piv[i - 1]
            piv[i] = diag[i] + m
            if piv[i] == 0.0:
                piv[i] = 1e-300
            rhs[i] -= m * rhs[i - 1]
        x[n - 1] = rhs[n - 1] / piv[n - 1]
        for i in range(n - 2, -1, -1):
            x[i] = (rhs[i] + x[i + 1]) / piv[i]
        nrm = 0.0
        for i in range(n):
            nrm = max(nrm, abs(x[i]))
        for i in range(n):
            x[i] /= nrm
    return x


@njit(nogil=True)
def _rhs(u, d2u, kfun, y, a2, beta, c, regular, ub, p):
    if regular:
        qv = kfun(y, beta, ub) + 0j
    else:
        qv = (beta - d2u(y)) / (u(y) - c)
    return (a2 - qv) * p


@njit(nogil=True)
def _rk4(u, d2u, kfun, y, h, a2, beta, c, regular, ub, p, dp):
    k1p = dp
    k1d = _rhs(u, d2u, kfun, y, a2, beta, c, regular, ub, p)
    k2p = dp + 0.5 * h * k1d
    k2d = _rhs(u, d2u, kfun, y + 0.5 * h, a2, beta, c, regular, ub, p + 0.5 * h * k1p)
    k3p = dp + 0.5 * h * k2d
    k3d = _rhs(u, d2u, kfun, y + 0.5 * h, a2, beta, c, regular, ub, p + 0.5 * h * k2p)
    k4p = dp + h * k3d
    k4d = _rhs(u, d2u, kfun, y + h, a2, beta, c, regular, ub, p + h * k3p)
    return (p + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0,
            dp + h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0)


@njit(nogil=True)
def shoot_adaptive(u, d2u, kfun, ya, yb, p0, dp0, a2, beta, c, regular, ub,
                   tol, hmin, max_steps):
    """Adaptive RK4 with step doubling from ya to yb (either direction).

    Returns (phi, phi', status); status 0 ok, 1 step floor, 2 non-finite,
    3 step budget exhausted.
    """
    span = yb - ya
    sgn = 1.0 if span > 0 else -1.0
    length = abs(span)
    p = p0
    dp = dp0
    t = 0.0
    h = length / 64.0
    steps = 0
    while t < length:
        if steps >= max_steps:
            return p, dp, 3
        if t + h > length:
            h = length - t
        y = ya + sgn * t
        hs = sgn * h
        fp, fd = _rk4(u, d2u, kfun, y, hs, a2, beta, c, regular, ub, p, dp)
        mp, md = _rk4(u, d2u, kfun, y, 0.5 * hs, a2, beta, c, regular, ub, p, dp)
        mp, md = _rk4(u, d2u, kfun, y + 0.5 * hs, 0.5 * hs, a2, beta, c, regular, ub, mp, md)
        err = max(abs(mp - fp), h * abs(md - fd)) / 15.0
        sc = max(abs(mp), h * abs(md), 1e-300)
        if not (err == err) or not (sc < math.inf):
            return p, dp, 2
        if err <= tol * sc:
            t += h
            p = mp + (mp - fp) / 15.0
            dp = md + (md - fd) / 15.0
            steps += 1
            h *= min(4.0, max(0.2, 0.9 * (tol * sc / max(err, 1e-300)) ** 0.2))
        else:
            if h <= hmin:
                return p, dp, 1
            h = max(hmin, h * max(0.2, 0.9 * (tol * sc / err) ** 0.25))
    return p, dp, 0


@njit(nogil=True)
def shoot_fixed(u, d2u, kfun, ya, yb, nsteps, p0, dp0, a2, beta, c, regular, ub):
    """Classical RK4 on a uniform grid; returns samples of phi and phi'."""
    h = (yb - ya) / nsteps
    ps = np.empty(nsteps + 1, dtype=np.complex128)
    ds = np.empty(nsteps + 1, dtype=np.complex128)
    p = p0
    dp = dp0
    ps[0] = p
    ds[0] = dp
    for k in range(nsteps):
        p, dp = _rk4(u, d2u, kfun, ya + k * h, h, a2, beta, c, regular, ub, p, dp)
        ps[k + 1] = p
        ds[k + 1] = dp
    return ps, ds


@njit(nogil=True)
def apply1(fn, y):
    out = np.empty(y.size)
    for i in range(y.size):
        out[i] = fn(y[i])
    return out


@njit(nogil=True)
def apply_k(fn, y, beta, ub):
    out = np.empty(y.size)
    for i in range(y.size):
        out[i] = fn(y[i], beta, ub)
    return out
