"""Unstable modes of the Rayleigh-Kuo equation by shooting in complex c."""
from dataclasses import dataclass, field

import cmath
import math

import numpy as np
from scipy.integrate import simpson

from .. import _kernels as K
from ..errors import ContourAmbiguous, InvalidSpeed, NoConvergence, StepFailure
from ..profiles import sinus_profile

SHOOT_TOL = 1e-10
WALL_OFFSET = 1e-7          # start distance (relative to channel width) at a singular wall
MAX_STEPS = 2_000_000
EPS_CONTOUR = 1e-4
MAX_CONTOUR_POINTS = 40000


def _semicircle_radius(profile, alpha, beta):
    if alpha == 0:
        return math.inf
    return 0.5 * (profile.u_max - profile.u_min) + abs(beta) / (2.0 * alpha * alpha)


def _is_regular(profile, beta, c):
    if c.imag != 0 or not (profile.upp_min <= beta <= profile.upp_max):
        return False, 0.0
    ub = profile.u_beta(beta)
    return abs(c.real - ub) <= 1e-13 * max(1.0, abs(ub)), ub


def _wall_exponent(profile, beta, y):
    """Leading Frobenius exponent of the solution vanishing at a singular wall."""
    if abs(float(profile.du(y))) > 1e-8:
        return 1.0
    a = 0.5 * float(profile.d2u(y))
    k = (beta - float(profile.d2u(y))) / a
    disc = 1.0 - 4.0 * k
    if disc < 0:
        raise InvalidSpeed("oscillatory singular wall: complex Frobenius exponents")
    return 0.5 * (1.0 + math.sqrt(disc))


def _wall_data(profile, beta, c, left):
    """(y, phi, phi') of the solution vanishing at a wall, taken slightly inside.

    At a regular wall this is (y_wall, 0, +-1).  When c equals U at the wall
    the equation is singular there and we start from the recessive power
    s^r / r at distance WALL_OFFSET.
    """
    y = profile.y1 if left else profile.y2
    sgn = 1.0 if left else -1.0
    if c.imag == 0 and abs(float(profile.u(y)) - c.real) <= 1e-14:
        r = _wall_exponent(profile, beta, y)
        s = WALL_OFFSET * profile.length
        # d/dy of s^r / r is sgn * s^(r-1)
        return y + sgn * s, complex(s ** r / r), complex(sgn * s ** (r - 1.0))
    return y, 0j, complex(sgn)


def _check_speed(profile, beta, c):
    regular, ub = _is_regular(profile, beta, c)
    if c.imag == 0 and not regular and profile.u_min < c.real < profile.u_max:
        raise InvalidSpeed(f"real c={c.real} inside Ran(U) is a critical-layer speed")
    return regular, ub


def dispersion(alpha, beta, c, profile=None, tol=SHOOT_TOL):
    """D(c) = phi(y2) for phi(y1) = 0, phi'(y1) = 1.

    Singular walls (c real and equal to U there) use the Wronskian of the
    shot solution with the recessive wall solution instead; it reduces to
    phi(y2) when both walls are regular.
    """
    profile = profile or sinus_profile()
    c = complex(c)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    regular, ub = _check_speed(profile, beta, c)
    ya, p0, d0 = _wall_data(profile, beta, c, True)
    yb, pr, dr = _wall_data(profile, beta, c, False)
    p, dp, status = K.shoot_adaptive(
        profile.u, profile.d2u, profile.kfun, ya, yb, p0, d0,
        float(alpha) ** 2, float(beta), c, regular, ub,
        tol, 1e-15 * profile.length, MAX_STEPS)
    if status != 0:
        raise StepFailure(f"shooting failed (status {status}) at alpha={alpha}, beta={beta}, c={c}")
    # W(phi, psi) with psi the right-wall solution, psi'(y2) = 1 at a regular wall
    return p * (-dr) - dp * (-pr)


# ----------------------------------------------------------------------------- contour


def _rect(profile, alpha, beta, eps, margin):
    m = profile.midpoint
    R = _semicircle_radius(profile, alpha, beta) + margin
    return m - R, m + R, eps, R


def _edges(xl, xr, yb, yt):
    return [(complex(xl, yb), complex(xr, yb)), (complex(xr, yb), complex(xr, yt)),
            (complex(xr, yt), complex(xl, yt)), (complex(xl, yt), complex(xl, yb))]


def _dist_to_rect(z, xl, xr, yb, yt):
    inside = xl <= z.real <= xr and yb <= z.imag <= yt
    if inside:
        return min(z.real - xl, xr - z.real, z.imag - yb, yt - z.imag)
    dx = max(xl - z.real, 0.0, z.real - xr)
    dy = max(yb - z.imag, 0.0, z.imag - yt)
    return math.hypot(dx, dy)


@dataclass
class ContourResult:
    winding: int
    raw: float
    points: list = field(repr=False)
    values: list = field(repr=False)
    near_roots: list


def _seg_dist(za, zb, p):
    d = zb - za
    t = 0.0 if d == 0 else max(0.0, min(1.0, ((p - za) * d.conjugate()).real / abs(d) ** 2))
    return abs(za + t * d - p)


def winding_number(f, xl, xr, yb, yt, eps, n0=48, max_points=MAX_CONTOUR_POINTS,
                   branch_points=()):
    """Argument principle on a rectangle with adaptive refinement.

    Segments are bisected until the argument of f changes by at most pi/4
    across each of them, and until no segment is longer than half its
    distance to any listed branch point (where f may spin arbitrarily fast).
    Also returns Newton estimates of roots that lie close to the path.
    """
    pts = []
    for a, b in _edges(xl, xr, yb, yt):
        pts.extend(a + (b - a) * k / n0 for k in range(n0))
    pts.append(pts[0])
    vals = [f(z) for z in pts[:-1]]
    vals.append(vals[0])
    min_len = eps * 1e-3
    while True:
        new_pts, new_vals = [pts[0]], [vals[0]]
        changed = False
        for i in range(len(pts) - 1):
            za, zb = pts[i], pts[i + 1]
            fa, fb = vals[i], vals[i + 1]
            seg = abs(zb - za)
            near_bp = any(seg > 0.5 * _seg_dist(za, zb, bp) for bp in branch_points)
            if (fa == 0 or fb == 0 or near_bp or abs(cmath.phase(fb / fa)) > math.pi / 4) and seg > min_len:
                zm = 0.5 * (za + zb)
                new_pts.append(zm)
                new_vals.append(f(zm))
                changed = True
            new_pts.append(zb)
            new_vals.append(fb)
        pts, vals = new_pts, new_vals
        if not changed:
            break
        if len(pts) > max_points:
            raise ContourAmbiguous(f"contour refinement exceeded {max_points} points")
    total = 0.0
    for i in range(len(pts) - 1):
        total += cmath.phase(vals[i + 1] / vals[i])
    raw = total / (2.0 * math.pi)
    near = []
    n = len(pts) - 1
    for i in range(n):
        zp, zn = pts[i - 1] if i > 0 else pts[n - 1], pts[i + 1]
        fp, fn = vals[i - 1] if i > 0 else vals[n - 1], vals[i + 1]
        df = (fn - fp) / (zn - zp) if zn != zp else 0
        if df == 0:
            continue
        step = vals[i] / df
        if abs(step) < 20.0 * eps:
            near.append(pts[i] - step)
    return ContourResult(int(round(raw)), raw, pts, vals, near)


def branch_points(profile):
    """Real speeds where D(c + i0) is not smooth: U at the walls and range ends."""
    vals = sorted([float(profile.u(profile.y1)), float(profile.u(profile.y2)),
                   profile.u_min, profile.u_max])
    scale = profile.u_max - profile.u_min
    pts = [vals[0]]
    for v in vals[1:]:
        if v - pts[-1] > 1e-12 * scale:
            pts.append(v)
    return tuple(complex(v) for v in pts)


def count_unstable(alpha, beta, profile=None, eps=EPS_CONTOUR, margin=0.1):
    """Number of roots of D with Im c > eps inside the semicircle box."""
    profile = profile or sinus_profile()
    if not alpha > 0:
        raise ValueError("count_unstable needs alpha > 0")
    xl, xr, yb, yt = _rect(profile, alpha, beta, eps, margin)
    res = winding_number(lambda z: dispersion(alpha, beta, z, profile), xl, xr, yb, yt, eps,
                         branch_points=branch_points(profile))
    if abs(res.raw - res.winding) > 0.1:
        raise ContourAmbiguous(f"winding {res.raw} is not near an integer")
    f = lambda z: dispersion(alpha, beta, z, profile)
    close = []
    for z in res.near_roots:
        if not (z.imag > 0.5 * eps and _dist_to_rect(z, xl, xr, yb, yt) < 10.0 * eps):
            continue
        # confirm the estimate is a genuine root before declaring ambiguity
        try:
            r, ok = _secant(f, z, z + 0.1 * eps * (1 + 1j), max_iter=30)
        except (StepFailure, InvalidSpeed, ZeroDivisionError):
            continue
        if ok and r.imag > 0.5 * eps and _dist_to_rect(r, xl, xr, yb, yt) < 10.0 * eps:
            close.append(r)
    if close:
        raise ContourAmbiguous(f"root near the contour at {close[0]}", close)
    if res.winding < 0:
        raise ContourAmbiguous(f"negative winding {res.winding}")
    return res.winding


# ----------------------------------------------------------------------------- modes


@dataclass
class Residuals:
    ode: float
    identity2: float
    identity1: float
    h1_slack: float
    h2_slack: float
    lform: float
    semicircle_slack: float


@dataclass
class Mode:
    c: complex
    alpha: float
    beta: float
    grid: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    dphi: np.ndarray = field(repr=False)
    kind: str
    profile: object = field(repr=False, default=None)
    residuals: object = None


def _secant(f, c0, c1, max_iter=100, xtol=1e-13):
    f0, f1 = f(c0), f(c1)
    for _ in range(max_iter):
        if f1 == f0:
            break
        c2 = c1 - f1 * (c1 - c0) / (f1 - f0)
        c0, f0 = c1, f1
        c1 = c2
        f1 = f(c1)
        if abs(c1 - c0) < xtol * max(1.0, abs(c1)) or f1 == 0:
            return c1, True
    return c1, False


def _box(profile, alpha, beta, eps):
    if alpha > 0:
        xl, xr, yb, yt = _rect(profile, alpha, beta, eps, 0.1)
    else:
        # no semicircle bound at alpha = 0; search a box around Ran(U)
        w = profile.u_max - profile.u_min
        xl, xr, yb, yt = profile.u_min - w, profile.u_max + w, 1e-3, w
    return xl, xr, yb, yt


def _grid_seeds(f, xl, xr, yb, yt, nx, ny):
    xs = np.linspace(xl, xr, nx)
    ys = np.geomspace(yb, yt, ny)
    A = np.empty((ny, nx))
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            try:
                A[j, i] = abs(f(complex(x, y)))
            except StepFailure:
                A[j, i] = math.inf
    seeds = []
    for j in range(ny):
        for i in range(nx):
            v = A[j, i]
            nb = A[max(0, j - 1):j + 2, max(0, i - 1):i + 2]
            if v <= nb.min():
                seeds.append((v, complex(xs[i], ys[j])))
    seeds.sort(key=lambda s: s[0])
    dx = (xs[1] - xs[0])
    return [s[1] for s in seeds], dx


def find_unstable_mode(alpha, beta, profile=None, eps=EPS_CONTOUR, nx=48, ny=24):
    """Locate an unstable root of D and return the Mode, or None."""
    profile = profile or sinus_profile()
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha > 0:
        try:
            if count_unstable(alpha, beta, profile, eps) == 0:
                return None
        except ContourAmbiguous:
            pass
    f = lambda z: dispersion(alpha, beta, z, profile)
    xl, xr, yb, yt = _box(profile, alpha, beta, eps)
    seeds, dx = _grid_seeds(f, xl, xr, yb, yt, nx, ny)
    tried = 0
    for s in seeds[:12]:
        tried += 1
        try:
            root, ok = _secant(f, s, s + 0.1 * dx * (1 + 0.5j))
        except (StepFailure, InvalidSpeed, ZeroDivisionError):
            continue
        if ok and root.imag > 0.5 * eps and xl <= root.real <= xr and root.imag <= 2 * yt:
            mode = build_mode(alpha, beta, root, profile)
            mode.residuals = verify_mode_identities(mode)
            return mode
    if alpha == 0 or tried == 0:
        return None
    raise NoConvergence("secant iteration failed from every seed")


def _sample(profile, alpha, beta, c, n):
    regular, ub = _is_regular(profile, beta, c)
    ps, ds = K.shoot_fixed(profile.u, profile.d2u, profile.kfun, profile.y1, profile.y2, n,
                           0j, 1 + 0j, float(alpha) ** 2, float(beta), complex(c), regular, ub)
    return ps, ds


def build_mode(alpha, beta, c, profile=None, kind="unstable", rtol=1e-10):
    """Eigenfunction of an unstable root on a uniform grid, L2-normalized."""
    profile = profile or sinus_profile()
    n = 4096
    ps, ds = _sample(profile, alpha, beta, c, n)
    while True:
        ps2, ds2 = _sample(profile, alpha, beta, c, 2 * n)
        err = np.max(np.abs(ps2[::2] - ps)) / np.max(np.abs(ps2))
        ps, ds, n = ps2, ds2, 2 * n
        if err < rtol or n >= 2 ** 20:
            break
    y = np.linspace(profile.y1, profile.y2, n + 1)
    nrm = math.sqrt(simpson(np.abs(ps) ** 2, x=y))
    return Mode(complex(c), float(alpha), float(beta), y, ps / nrm, ds / nrm, kind, profile)


def _parts(mode):
    p = mode.profile or sinus_profile()
    y = mode.grid
    U, Upp = p.U(y), p.d2U(y)
    bq = mode.beta - Upp
    den = np.abs(U - mode.c) ** 2
    w = np.abs(mode.phi) ** 2
    wp = np.abs(mode.dphi) ** 2
    Kb = p.k_beta(mode.beta, y)
    regular, _ = _is_regular(p, mode.beta, complex(mode.c))
    # at c = U_beta the potential is K_beta itself; avoid the 0/0
    q = Kb if regular else bq / (U - mode.c)
    ddphi = (mode.alpha ** 2 - q) * mode.phi
    ub = p.u_beta(mode.beta)
    integ = lambda f: simpson(f, x=y)
    return p, y, U, bq, den, w, wp, q, ddphi, Kb, ub, integ


def quadratic_form(mode):
    """Energy form <L_a w, w> from the closed identity and from its definition."""
    p, y, U, bq, den, w, wp, q, ddphi, Kb, ub, integ = _parts(mode)
    a2 = mode.alpha ** 2
    c = mode.c
    via_identity = (c - ub) * integ(bq / den * w)
    omega = q * mode.phi              # -phi'' + a^2 phi
    via_definition = integ(np.abs(omega) ** 2 / Kb - wp - a2 * w)
    if mode.kind != "unstable":
        via_identity = via_identity.real
    return {"via_identity": via_identity, "via_definition": via_definition}


def verify_mode_identities(mode):
    """Integral identities and bounds an unstable mode must satisfy, normalized."""
    p, y, U, bq, den, w, wp, q, ddphi, Kb, ub, integ = _parts(mode)
    a2 = mode.alpha ** 2
    c = mode.c
    i2 = integ(bq / den * w) / integ(np.abs(bq) / den * w)
    t = bq * (U - ub) / den * w
    i1 = integ(wp + a2 * w - t) / integ(wp + a2 * w + np.abs(t))
    kw = integ(Kb * w)
    h1 = (kw - integ(wp + a2 * w)) / kw
    kmax = float(np.max(Kb))
    h2 = (kmax * kw - integ(np.abs(ddphi) ** 2 + 2 * a2 * wp + a2 * a2 * w)) / (kmax * kw)
    omega2 = np.abs(q * mode.phi) ** 2 / Kb
    lf = integ(omega2 - wp - a2 * w) / integ(omega2 + wp + a2 * w)
    # ODE: boundary miss plus a fourth-order interior check of phi''
    h = y[1] - y[0]
    f = mode.phi
    fd = (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h * h)
    ode_int = np.max(np.abs(fd - ddphi[2:-2])) / np.max(np.abs(ddphi))
    ode_bc = abs(f[-1]) / np.max(np.abs(f))
    R = _semicircle_radius(p, mode.alpha, mode.beta)
    slack = R - abs(c - p.midpoint) if math.isfinite(R) else math.inf
    return Residuals(ode=float(max(ode_int, ode_bc)), identity2=float(i2), identity1=float(i1),
                     h1_slack=float(h1), h2_slack=float(h2), lform=float(lf),
                     semicircle_slack=float(slack))
