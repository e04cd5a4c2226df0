"""Shear-flow profiles U(y) with analytic derivatives.

A profile carries numba-compiled scalar functions so that the Sturm
sequence and shooting kernels can call them without leaving machine code.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import math

import numpy as np
from numba import njit
from scipy.optimize import brentq

from . import _kernels
from .errors import BetaOutOfRange

PI = math.pi
# |U - U_beta| below this switches K_beta to the derivative-ratio limit
REMOVABLE_WINDOW = 1e-10


@dataclass(frozen=True)
class FlowProfile:
    name: str
    y1: float
    y2: float
    u: Callable
    du: Callable
    d2u: Callable
    d3u: Callable
    u_min: float
    u_max: float
    upp_min: float
    upp_max: float
    # beta -> U_beta (plain Python), kfun(y, beta, u_beta) -> K_beta (njit)
    u_beta_fn: Callable
    kfun: Callable

    @property
    def midpoint(self):
        return 0.5 * (self.u_min + self.u_max)

    @property
    def length(self):
        return self.y2 - self.y1

    def check_beta(self, beta):
        if not (self.upp_min <= beta <= self.upp_max):
            raise BetaOutOfRange(
                f"beta={beta!r} outside Ran(U'')=[{self.upp_min}, {self.upp_max}]"
                f" for profile {self.name}")

    def u_beta(self, beta):
        self.check_beta(beta)
        return float(self.u_beta_fn(beta))

    def U(self, y):
        return _vec(self.u, y)

    def dU(self, y):
        return _vec(self.du, y)

    def d2U(self, y):
        return _vec(self.d2u, y)

    def d3U(self, y):
        return _vec(self.d3u, y)

    def k_beta(self, beta, y):
        """K_beta = (beta - U'')/(U - U_beta) with the removable limit handled."""
        ub = self.u_beta(beta)
        if np.ndim(y) == 0:
            return float(self.kfun(float(y), float(beta), ub))
        y = np.asarray(y, dtype=float)
        out = _kernels.apply_k(self.kfun, np.ascontiguousarray(y.ravel()), float(beta), ub)
        return out.reshape(y.shape)

    def potential(self, beta, c, y):
        """(beta - U'')/(U - c) sampled at y (real or complex c)."""
        y = np.asarray(y, dtype=float)
        return (beta - self.d2U(y)) / (self.U(y) - c)


def _vec(fn, y):
    if np.ndim(y) == 0:
        return float(fn(float(y)))
    y = np.asarray(y, dtype=float)
    return _kernels.apply1(fn, np.ascontiguousarray(y.ravel())).reshape(y.shape)


@njit(cache=True)
def _sin_u(y):
    # cos^2 form keeps relative accuracy near the walls where U -> 0
    t = math.cos(0.5 * PI * y)
    return t * t


@njit(cache=True)
def _sin_du(y):
    return -0.5 * PI * math.sin(PI * y)


@njit(cache=True)
def _sin_d2u(y):
    return -0.5 * PI * PI * math.cos(PI * y)


@njit(cache=True)
def _sin_d3u(y):
    return 0.5 * PI ** 3 * math.sin(PI * y)


@njit(cache=True)
def _sin_k(y, beta, ub):
    return PI * PI


@lru_cache(maxsize=None)
def sinus_profile():
    """U(y) = (1 + cos(pi y))/2 on [-1, 1]."""
    return FlowProfile(
        name="sinus", y1=-1.0, y2=1.0,
        u=_sin_u, du=_sin_du, d2u=_sin_d2u, d3u=_sin_d3u,
        u_min=0.0, u_max=1.0, upp_min=-0.5 * PI * PI, upp_max=0.5 * PI * PI,
        u_beta_fn=lambda beta: 0.5 - beta / (PI * PI),
        kfun=_sin_k,
    )


@njit(cache=True)
def _tanh_u(y):
    return math.tanh(y)


@njit(cache=True)
def _tanh_du(y):
    s = 1.0 / math.cosh(y)
    return s * s


@njit(cache=True)
def _tanh_d2u(y):
    t = math.tanh(y)
    return -2.0 * t * (1.0 - t * t)


@njit(cache=True)
def _tanh_d3u(y):
    t = math.tanh(y)
    s2 = 1.0 - t * t
    return -2.0 * s2 * s2 + 4.0 * t * t * s2


@njit(cache=True)
def _tanh_k(y, beta, ub):
    # beta - U'' = 2(U - ub)(1 - U^2 - U ub - ub^2) exactly, since beta = -2ub + 2ub^3
    t = math.tanh(y)
    return 2.0 * (1.0 - t * t - t * ub - ub * ub)


@lru_cache(maxsize=None)
def tanh_profile(half_width=0.5):
    """U(y) = tanh(y) on [-L, L]; needs L < atanh(1/sqrt 3) so U'' is monotone."""
    lim = math.atanh(1.0 / math.sqrt(3.0))
    if not 0.0 < half_width < lim:
        raise ValueError(f"half_width must lie in (0, {lim:.6f})")
    L = float(half_width)
    umax = math.tanh(L)
    pmax = _tanh_d2u(-L)

    def u_beta(beta):
        # U'' = -2U + 2U^3 is decreasing in U on |U| < 1/sqrt 3
        return brentq(lambda v: beta + 2.0 * v - 2.0 * v**3, -umax, umax,
                      xtol=1e-15, rtol=1e-15)

    return FlowProfile(
        name="tanh", y1=-L, y2=L,
        u=_tanh_u, du=_tanh_du, d2u=_tanh_d2u, d3u=_tanh_d3u,
        u_min=-umax, u_max=umax, upp_min=-pmax, upp_max=pmax,
        u_beta_fn=u_beta, kfun=_tanh_k,
    )


PROFILES = {"sinus": sinus_profile, "tanh": tanh_profile}


def get_profile(name):
    try:
        return PROFILES[name]()
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")


@dataclass(frozen=True)
class KPlusReport:
    u_beta: float
    k_min: float
    k_max: float
    ok: bool


def k_beta_generic(profile, beta, y):
    """K_beta from U and its derivatives only, ignoring the profile's closed form."""
    ub = profile.u_beta(beta)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    du = profile.U(y) - ub
    num = beta - profile.d2U(y)
    out = np.empty_like(y)
    near = np.abs(du) < REMOVABLE_WINDOW
    out[~near] = num[~near] / du[~near]
    if near.any():
        # (beta - U'')' / U' = -U''' / U'
        yn = y[near]
        out[near] = -profile.d3U(yn) / profile.dU(yn)
    return out


def check_class_k_plus(profile, beta, n_samples=1024):
    """Sample K_beta on a uniform grid and check it is positive and finite."""
    if n_samples < 16:
        raise ValueError("n_samples must be at least 16")
    profile.check_beta(beta)
    y = np.linspace(profile.y1, profile.y2, n_samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = k_beta_generic(profile, beta, y)
    finite = np.isfinite(k)
    # the ratio rule is undefined where U_beta sits on a critical point of U
    # (U' = 0 there too); fall back to the profile's closed form at those samples
    if not finite.all():
        ub = profile.u_beta(beta)
        for i in np.nonzero(~finite)[0]:
            k[i] = profile.kfun(y[i], beta, ub)
    ok = bool(np.all(np.isfinite(k)) and np.all(k > 0))
    return KPlusReport(u_beta=profile.u_beta(beta), k_min=float(np.min(k)),
                       k_max=float(np.max(k)), ok=ok)
