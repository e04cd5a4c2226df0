"""Sturm-Liouville eigenvalues of -phi'' - (beta - U'')/(U - c) phi = lambda phi.

Second-order finite differences on a uniform grid, Sturm-sequence bisection
on the symmetric tridiagonal matrix, and Richardson extrapolation over grid
doublings.  Dirichlet conditions at both walls.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import math

import numpy as np

from . import _kernels as K
from .errors import InvalidSpeed, NoConvergence, NodeCountMismatch

N_START = 4096
N_MAX = 2 ** 22
BISECT_RTOL = 2e-16


@dataclass(frozen=True)
class Finite:
    c: float


@dataclass(frozen=True)
class Compactified:
    """Speed given by ct = 1/(c - m), m the midpoint of Ran(U); ct = 0 is c = inf."""
    ct: float


@dataclass(frozen=True)
class Infinity:
    pass


INFINITY = Infinity()


def speed_from_ctilde(ct):
    return INFINITY if ct == 0 else Compactified(float(ct))


@dataclass(frozen=True)
class SLProblem:
    profile: object
    beta: float
    speed: object

    def resolve(self):
        """Return (mode, c, u_beta) with mode one of the kernel potential codes."""
        p = self.profile
        sp = self.speed
        if isinstance(sp, Infinity):
            return K.Q_ZERO, math.inf, math.nan
        if isinstance(sp, Compactified):
            if sp.ct == 0:
                return K.Q_ZERO, math.inf, math.nan
            c = p.midpoint + 1.0 / sp.ct
        elif isinstance(sp, Finite):
            c = float(sp.c)
            if math.isinf(c):
                return K.Q_ZERO, math.inf, math.nan
        else:
            raise TypeError(f"unknown speed {sp!r}")
        return _classify(p, float(self.beta), c)

    @property
    def c(self):
        return self.resolve()[1]


def _classify(profile, beta, c):
    if profile.upp_min <= beta <= profile.upp_max:
        ub = profile.u_beta(beta)
        if abs(c - ub) <= 1e-13 * max(1.0, abs(c)):
            return K.Q_REGULAR, ub, ub
    else:
        ub = math.nan
    if profile.u_min <= c <= profile.u_max:
        raise InvalidSpeed(
            f"c={c!r} lies in Ran(U)=[{profile.u_min}, {profile.u_max}]"
            " and is not the removable value U_beta")
    return K.Q_FINITE, c, ub


@dataclass
class SLSolution:
    lambdas: list
    est_errors: list
    n_grid: int
    converged: bool


@dataclass
class EigenPair:
    n: int
    lam: float
    grid: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    nodes: int
    converged: bool
    est_error: float
    n_grid: int

    # `lambda` is a keyword; keep `lam` and offer `lambda_` as an alias
    @property
    def lambda_(self):
        return self.lam


def _grid_potential(problem, N):
    mode, c, ub = problem.resolve()
    p = problem.profile
    h = p.length / N
    cc = 0.0 if mode != K.Q_FINITE else c
    ubb = 0.0 if mode != K.Q_REGULAR else ub
    q = K.potential_grid(p.u, p.d2u, p.kfun, p.y1, h, N - 1, float(problem.beta),
                         cc, mode, ubb)
    return q, h


def _grid_eigenvalues(q, h, n_max, length):
    h2 = h * h
    lo = -float(np.max(q)) - 1.0
    top = (n_max * math.pi / length) ** 2 - float(np.min(q)) + 1.0
    hi = top
    while K.count_below(q, h2, hi) < n_max:
        hi = 2.0 * abs(hi) + 1.0
    out = []
    for k in range(1, n_max + 1):
        lam = K.bisect_eigenvalue(q, h2, k, lo, hi, BISECT_RTOL)
        out.append(lam)
        lo = lam
    return out


def _speed_key(problem):
    mode, c, ub = problem.resolve()
    return (mode, c if mode == K.Q_FINITE else 0.0)


@lru_cache(maxsize=4096)
def _solve_cached(profile, beta, key, n_max, tol, n_start, n_cap):
    mode, c = key
    speed = INFINITY if mode == K.Q_ZERO else Finite(profile.u_beta(beta) if mode == K.Q_REGULAR else c)
    prob = SLProblem(profile, beta, speed)
    N = n_start
    q, h = _grid_potential(prob, N)
    prev = _grid_eigenvalues(q, h, n_max, profile.length)
    prev_r = None
    while True:
        N2 = 2 * N
        q, h = _grid_potential(prob, N2)
        cur = _grid_eigenvalues(q, h, n_max, profile.length)
        rich = [(4.0 * b - a) / 3.0 for a, b in zip(prev, cur)]
        if prev_r is not None:
            errs = [abs(r - s) for r, s in zip(rich, prev_r)]
            if all(e < tol * max(1.0, abs(r)) for e, r in zip(errs, rich)):
                return SLSolution(rich, errs, N2, True)
        if N2 >= n_cap:
            errs = ([abs(r - s) for r, s in zip(rich, prev_r)] if prev_r is not None
                    else [math.inf] * n_max)
            return SLSolution(rich, errs, N2, False)
        prev, prev_r, N = cur, rich, N2


def solve(problem, n_max=1, tol=1e-9, n_start=N_START, n_cap=N_MAX, strict=True):
    """Eigenvalues with error estimates; raises NoConvergence when strict."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    sol = _solve_cached(problem.profile, float(problem.beta), _speed_key(problem),
                        int(n_max), float(tol), int(n_start), int(n_cap))
    if strict and not sol.converged:
        raise NoConvergence(
            f"eigenvalues not converged to {tol} at N={sol.n_grid}: est {sol.est_errors}")
    return sol


def eigenvalues(problem, n_max=1, tol=1e-9):
    """First n_max eigenvalues, increasing."""
    return list(solve(problem, n_max, tol).lambdas)


def lambda1(profile, beta, c, tol=1e-9):
    """Principal eigenvalue at a real speed (c may be +-inf)."""
    speed = INFINITY if math.isinf(c) else Finite(float(c))
    return solve(SLProblem(profile, beta, speed), 1, tol).lambdas[0]


def count_nodes(phi, rel=1e-10):
    big = np.abs(phi) > rel * np.max(np.abs(phi))
    s = np.sign(phi[big])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def eigenfunction(problem, n=1, tol=1e-9):
    """Eigenpair n on the converged grid, normalized in L2 with phi'(y1) > 0."""
    sol = solve(problem, n, tol)
    N = sol.n_grid
    q, h = _grid_potential(problem, N)
    lam_grid = _grid_eigenvalues(q, h, n, problem.profile.length)[n - 1]
    v = K.inverse_iteration(q, h * h, lam_grid, 3)
    phi = np.concatenate(([0.0], v, [0.0]))
    if phi[1] < 0:
        phi = -phi
    y = problem.profile.y1 + h * np.arange(N + 1)
    phi /= math.sqrt(np.trapezoid(phi * phi, dx=h))
    nodes = count_nodes(phi)
    if nodes != n - 1:
        raise NodeCountMismatch(f"eigenfunction {n} has {nodes} nodes")
    return EigenPair(n=n, lam=sol.lambdas[n - 1], grid=y, phi=phi, nodes=nodes,
                     converged=sol.converged, est_error=sol.est_errors[n - 1],
                     n_grid=N)


def dlambda_dbeta(pair, problem):
    """-int phi^2/(U - c) dy (trapezoid on the eigenfunction grid)."""
    mode, c, ub = problem.resolve()
    if mode == K.Q_ZERO:
        return 0.0
    if mode == K.Q_REGULAR:
        raise InvalidSpeed("d lambda/d beta at fixed c = U_beta is a principal-value integral")
    y = pair.grid
    w = pair.phi ** 2 / (problem.profile.U(y) - c)
    return -float(np.trapezoid(w, y))


def dlambda_dc(pair, problem):
    """-int (beta - U'') phi^2/(U - c)^2 dy."""
    mode, c, ub = problem.resolve()
    if mode == K.Q_ZERO:
        return 0.0
    if mode == K.Q_REGULAR:
        raise InvalidSpeed("d lambda/d c at c = U_beta involves a non-integrable weight")
    y = pair.grid
    p = problem.profile
    w = (problem.beta - p.d2U(y)) * pair.phi ** 2 / (p.U(y) - c) ** 2
    return -float(np.trapezoid(w, y))
