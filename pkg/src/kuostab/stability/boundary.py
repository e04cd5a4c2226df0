"""Stability boundary: the supremum of the negative part of lambda_1 over c."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import math

from .. import closedform as cf
from ..profiles import sinus_profile
from ..errors import NoConvergence
from ..slsolver import Finite, SLProblem, solve

# beta values of the published comparison table
TABLE1_BETAS = (1.80626, 2.60650, 2.85444, 3.05645, 3.24603, 3.44449, 3.69853,
                4.18261, 4.37126, 4.49531, 4.59739, 4.69034, 4.78396, 4.93480)

GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))
LADDER_EXPONENTS = tuple(k / 2.0 for k in range(4, 13))   # 1e-2 ... 1e-6, half decades
LADDER_FLOOR = 1e-10
DEFAULT_TOL = 1e-9


@dataclass
class SideScan:
    beta: float
    side: str
    c_end: float
    end_value: object                       # closed-form lambda_1 at c_end, or None
    samples: list = field(repr=False)       # (d, c, lambda_1) sorted by d = |c - c_end|
    c_min: float = math.nan
    lam_min: float = math.inf               # smallest interior lambda_1 found
    interior: bool = False                  # minimum strictly away from the endpoint
    truncated: bool = False                 # ladder stopped early: solver could not resolve


def _lam(profile, beta, c, tol):
    return solve(SLProblem(profile, beta, Finite(c)), 1, tol).lambdas[0]


def endpoint_value(profile, beta, side):
    """Closed-form lambda_1 at the finite endpoint (Sinus only)."""
    if profile.name != "sinus":
        return None
    if side == "left":
        if beta >= 9 * cf.PI2 / 16:
            return None
        if beta == cf.BETA_HALF:
            return cf.lambda_regular(1)
        return cf.lambda_c0(beta, 1)
    if beta <= -9 * cf.PI2 / 16:
        return None
    return cf.lambda_c1(beta, 1)


def _c_of(profile, side, d):
    return profile.u_min - d if side == "left" else profile.u_max + d


def _coarse_distances(profile, side, grid):
    # uniform in ct = 1/(c - m) strictly between the endpoint and infinity
    m = profile.midpoint
    c_end = profile.u_min if side == "left" else profile.u_max
    ct_end = 1.0 / (c_end - m)
    out = []
    for k in range(1, grid):
        ct = ct_end * (1.0 - k / grid)
        out.append(abs(m + 1.0 / ct - c_end))
    return out


def _golden(f, a, b, xtol):
    """Minimize a unimodal f on [a, b]; returns (x, f(x))."""
    x1 = a + GOLDEN * (b - a)
    x2 = b - GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = a + GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = b - GOLDEN * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


@lru_cache(maxsize=256)
def side_scan(profile, beta, side, tol=DEFAULT_TOL, grid=128, threads=1):
    """Sample lambda_1 on one side of Ran(U) and locate its minimum.

    Coarse compactified grid, a half-decade ladder towards the endpoint
    (extended while the minimum keeps sitting at the innermost rung), then
    golden section in log-distance around the best sample.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    beta = float(beta)
    c_end = profile.u_min if side == "left" else profile.u_max
    ds = sorted(set(_coarse_distances(profile, side, grid)
                    + [10.0 ** -e for e in LADDER_EXPONENTS]))
    lams = _map(lambda d: _lam(profile, beta, _c_of(profile, side, d), tol), ds, threads)
    samples = [(d, _c_of(profile, side, d), v) for d, v in zip(ds, lams)]
    end = endpoint_value(profile, beta, side)

    # push the ladder inwards while the innermost rung is the minimum
    truncated = False
    while True:
        i = min(range(len(samples)), key=lambda k: samples[k][2])
        if i != 0 or samples[0][0] <= LADDER_FLOOR * 1.0001:
            break
        d = samples[0][0] / math.sqrt(10.0)
        try:
            v = _lam(profile, beta, _c_of(profile, side, d), tol)
        except NoConvergence:
            # lambda_1 can dive without bound at a wall (beta outside Ran(U''));
            # keep the rungs the solver resolved
            truncated = True
            break
        samples.insert(0, (d, _c_of(profile, side, d), v))

    i = min(range(len(samples)), key=lambda k: samples[k][2])
    scan = SideScan(beta, side, c_end, end, samples, truncated=truncated)
    if 0 < i < len(samples) - 1:
        lo = math.log(samples[i - 1][0])
        hi = math.log(samples[i + 1][0])
        f = lambda t: _lam(profile, beta, _c_of(profile, side, math.exp(t)), tol)
        t, v = _golden(f, lo, hi, 1e-4)
        if v > samples[i][2]:
            t, v = math.log(samples[i][0]), samples[i][2]
        d = math.exp(t)
        if all(abs(d - s[0]) > 1e-15 * d for s in samples):
            samples.append((d, _c_of(profile, side, d), v))
            samples.sort()
        scan.c_min, scan.lam_min = _c_of(profile, side, d), v
    else:
        scan.c_min, scan.lam_min = samples[i][1], samples[i][2]
    thresh = 10.0 * tol * max(1.0, abs(scan.lam_min))
    scan.interior = end is None or scan.lam_min < end - thresh
    if i == 0 and end is not None:
        # innermost rung at the floor: treat as the endpoint limit
        scan.interior = scan.interior and samples[0][0] > LADDER_FLOOR * 1.0001
    return scan


@dataclass(frozen=True)
class BoundaryPoint:
    beta: float
    capital_lambda: float
    c_star: float
    alpha_lower: float
    snm_alpha: float
    case: str

    @property
    def difference(self):
        return self.alpha_lower - self.snm_alpha


@dataclass(frozen=True)
class ProfilePoint:
    c: float
    ctilde: float
    lam: float


def lambda_beta_profile(beta, side, grid=128, tol=DEFAULT_TOL, profile=None):
    """lambda_1(beta, c) along one side, ordered by c, endpoint value included."""
    if grid < 64:
        raise ValueError("grid must be at least 64")
    profile = profile or sinus_profile()
    scan = side_scan(profile, float(beta), side, tol, grid)
    m = profile.midpoint
    pts = [ProfilePoint(c, 1.0 / (c - m), v) for _, c, v in scan.samples]
    if scan.end_value is not None:
        pts.append(ProfilePoint(scan.c_end, 1.0 / (scan.c_end - m), scan.end_value))
    pts.sort(key=lambda p: p.c)
    return pts


def _side_for(beta):
    return "left" if beta > 0 else "right"


def capital_lambda(beta, tol=DEFAULT_TOL, profile=None, grid=128, threads=1):
    """Lower edge Lambda_beta of the unstable band alpha^2 in (Lambda_beta, 3 pi^2/4)."""
    profile = profile or sinus_profile()
    beta = float(beta)
    if profile.name == "sinus" and not -cf.BETA_HALF < beta < cf.BETA_HALF:
        raise ValueError("capital_lambda needs beta in (-pi^2/2, pi^2/2)")
    scan = side_scan(profile, beta, _side_for(beta), tol, grid, threads)
    candidates = [(scan.lam_min, scan.c_min)]
    if scan.end_value is not None:
        candidates.append((scan.end_value, scan.c_end))
    lam, c = min(candidates)
    if scan.interior:
        lam, c = scan.lam_min, scan.c_min
    big = max(0.0, -lam)
    snm = cf.snm_alpha(beta) if (profile.name == "sinus" and 0 < beta < cf.BETA_HALF) else math.nan
    if big == 0.0:
        return BoundaryPoint(beta, 0.0, math.nan, 0.0, snm, "zero")
    case = "interior_hump" if scan.interior else "endpoint_monotone"
    if not scan.interior:
        c = scan.c_end
    return BoundaryPoint(beta, big, c, math.sqrt(big), snm, case)


def side_minimum(beta, side, tol=DEFAULT_TOL, profile=None, grid=128):
    """inf over c on one side of lambda_1(beta, c), endpoint value included."""
    profile = profile or sinus_profile()
    scan = side_scan(profile, float(beta), side, tol, grid)
    vals = [scan.lam_min]
    if scan.end_value is not None:
        vals.append(scan.end_value)
    return min(vals)


def find_beta_minus(tol=1e-6, width=1e-4, profile=None):
    """Largest beta < 0 where inf_{c >= 1} lambda_1 changes sign (bisection in beta)."""
    profile = profile or sinus_profile()
    lo, hi = profile.upp_min, 0.0
    g = lambda b: side_minimum(b, "right", DEFAULT_TOL, profile, grid=64)
    glo, ghi = g(lo), g(hi)
    if not (glo < 0 < ghi):
        raise ArithmeticError(f"no sign change: g({lo})={glo}, g({hi})={ghi}")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) < tol:
            return mid
        if gm < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def boundary_sweep(beta_grid, tol=DEFAULT_TOL, profile=None, threads=1):
    return _map(lambda b: capital_lambda(b, tol, profile), list(beta_grid), threads)
