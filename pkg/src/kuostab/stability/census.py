"""Non-resonant neutral modes, their energy signatures, and index counts."""
from dataclasses import dataclass

import math

from scipy.optimize import brentq

from .. import closedform as cf
from ..profiles import sinus_profile
from ..slsolver import Finite, SLProblem, eigenfunction, dlambda_dc, solve
from .boundary import DEFAULT_TOL, LADDER_FLOOR, side_scan
from .dispersion import Mode, count_unstable


@dataclass(frozen=True)
class NMinus:
    n_minus: int
    n_zero: int


def n_minus_L_alpha(alpha, beta, profile=None, tol=DEFAULT_TOL):
    """Negative and zero directions of the energy operator at wave number alpha.

    For the Sinus flow the spectrum is explicit:
    count k with k^2 pi^2/4 + alpha^2 below (or equal to) pi^2.
    """
    profile = profile or sinus_profile()
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    a2 = alpha * alpha
    if profile.name == "sinus":
        neg = zero = 0
        k = 1
        while k * k * cf.PI2 / 4.0 + a2 <= cf.PI2 * (1 + 1e-12):
            v = k * k * cf.PI2 / 4.0 + a2 - cf.PI2
            if abs(v) <= 1e-12 * cf.PI2:
                zero += 1
            elif v < 0:
                neg += 1
            k += 1
        return NMinus(neg, zero)
    # generic class K+ profile: negative directions are the negative eigenvalues
    # of -d^2/dy^2 + alpha^2 - K_beta, i.e. lambda_k(beta, U_beta) + alpha^2 < 0
    ub = profile.u_beta(beta)
    neg = zero = 0
    k = 1
    while True:
        lam = solve(SLProblem(profile, beta, Finite(ub)), k, tol).lambdas[k - 1]
        v = lam + a2
        if abs(v) <= 1e-9 * max(1.0, abs(lam)):
            zero += 1
        elif v < 0:
            neg += 1
        else:
            break
        k += 1
    return NMinus(neg, zero)


@dataclass(frozen=True)
class CensusEntry:
    c: float
    n: int
    signature: int
    dlambda_dc: float
    form: float          # -(c - U_beta) d lambda/dc


def _endpoint_trusted(profile, beta, side):
    # limits of lambda_1 as c approaches a singular endpoint match the closed
    # form on these ranges; elsewhere the endpoint value is left out
    if profile.name != "sinus":
        return False
    if side == "left":
        return 0 < beta < cf.BETA_HALF
    return -cf.BETA_HALF < beta <= 0


def _roots_on_side(profile, beta, side, n, a2, tol):
    c_end = profile.u_min if side == "left" else profile.u_max
    sgn = -1.0 if side == "left" else 1.0

    def lam(d):
        return solve(SLProblem(profile, beta, Finite(c_end + sgn * d)), n, tol).lambdas[n - 1]

    if n == 1:
        scan = side_scan(profile, float(beta), side, tol)
        pts = [(d, v) for d, _, v in scan.samples]
        if scan.end_value is not None and _endpoint_trusted(profile, beta, side):
            pts.insert(0, (0.0, scan.end_value))
    else:
        from .boundary import _coarse_distances, LADDER_EXPONENTS
        ds = sorted(set(_coarse_distances(profile, side, 128)
                        + [10.0 ** -e for e in LADDER_EXPONENTS]))
        pts = [(d, lam(d)) for d in ds]
    roots = []
    for (da, va), (db, vb) in zip(pts[:-1], pts[1:]):
        fa, fb = va + a2, vb + a2
        if fa == 0.0 and da > 0:
            roots.append(da)
            continue
        if fa * fb < 0:
            if da == 0.0:
                # bracket touches the singular endpoint: search in log distance
                # down to the ladder floor
                lo = math.log(1e-12)
                if lam(1e-12) + a2 == 0 or (lam(1e-12) + a2) * fb > 0:
                    continue
            else:
                lo = math.log(da)
            t = brentq(lambda t: lam(math.exp(t)) + a2, lo, math.log(db), xtol=1e-12)
            roots.append(math.exp(t))
    # a root within the ladder floor of the wall is the singular mode at the
    # endpoint itself, not a non-resonant one
    return [c_end + sgn * d for d in roots if d > LADDER_FLOOR]


def neutral_nonresonant_census(alpha, beta, profile=None, tol=DEFAULT_TOL):
    """Real speeds outside Ran(U) where lambda_n(beta, c) = -alpha^2, with signatures."""
    profile = profile or sinus_profile()
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    a2 = alpha * alpha
    ub = profile.u_beta(beta) if profile.upp_min <= beta <= profile.upp_max else math.nan
    wide = abs(beta) > max(abs(profile.upp_min), abs(profile.upp_max))
    out = []
    n = 1
    while True:
        found_negative = False
        for side in ("left", "right"):
            for c in _roots_on_side(profile, beta, side, n, a2, tol):
                prob = SLProblem(profile, beta, Finite(c))
                pair = eigenfunction(prob, n, tol)
                dl = dlambda_dc(pair, prob)
                ref = c if math.isnan(ub) else ub
                form = -(c - ref) * dl
                sig = 0 if abs(form) <= 1e-12 * max(1.0, abs(c - ref) * abs(dl)) else (1 if form > 0 else -1)
                out.append(CensusEntry(c, n, sig, dl, form))
                found_negative = True
        if not wide or n >= 8:
            break
        # higher branches only matter while lambda_n still dips below zero somewhere
        n += 1
        if not found_negative and not _dips_negative(profile, beta, n, tol):
            break
    out.sort(key=lambda e: (e.n, e.c))
    return out


def _dips_negative(profile, beta, n, tol):
    for side, c in (("left", profile.u_min - 1e-3), ("right", profile.u_max + 1e-3)):
        if solve(SLProblem(profile, beta, Finite(c)), n, tol).lambdas[n - 1] < 0:
            return True
    return False


def census_mode(entry, alpha, beta, profile=None, tol=DEFAULT_TOL):
    """Wrap a census entry as a Mode with a real eigenfunction."""
    import numpy as np
    profile = profile or sinus_profile()
    pair = eigenfunction(SLProblem(profile, beta, Finite(entry.c)), entry.n, tol)
    dphi = np.gradient(pair.phi, pair.grid)
    return Mode(entry.c, alpha, beta, pair.grid, pair.phi, dphi,
                "nonresonant_neutral", profile)


@dataclass(frozen=True)
class IndexCount:
    alpha: float
    beta: float
    n_minus: int
    k_unstable: int
    k_i_nonpos: int
    holds: bool


def singular_mode_signature(alpha, beta, rtol=1e-9):
    """Signature of the c = 0 singular neutral mode, or None off the SNM curve."""
    if not 0 < beta < cf.BETA_HALF:
        return None
    if abs(alpha - cf.snm_alpha(beta)) > rtol * max(1.0, alpha):
        return None
    d = cf.dlambda1_dc_at_zero(beta)
    ub = 0.5 - beta / cf.PI2
    if d is cf.PLUS_INFINITY:
        return 1
    v = ub * d
    return 0 if v == 0 else (1 if v > 0 else -1)


def index_counts(alpha, beta, profile=None, tol=DEFAULT_TOL):
    """k_unstable + k_i_nonpos against n_minus for one (alpha, beta)."""
    profile = profile or sinus_profile()
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    nm = n_minus_L_alpha(alpha, beta, profile, tol).n_minus
    ku = count_unstable(alpha, beta, profile)
    census = neutral_nonresonant_census(alpha, beta, profile, tol)
    ki = sum(1 for e in census if e.signature <= 0)
    if profile.name == "sinus":
        s = singular_mode_signature(alpha, beta)
        if s is not None and s <= 0:
            ki += 1
    return IndexCount(float(alpha), float(beta), nm, ku, ki, ku + ki == nm)
