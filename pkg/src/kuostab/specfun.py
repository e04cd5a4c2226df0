"""Log-Gamma, Gauss 2F1 on [0, 1] and the cosine-power integral C_s."""
from dataclasses import dataclass

import math

from .errors import DivergesAtOne, NoConvergence, PoleError


class _PlusInfinity:
    """Tagged +infinity; kept distinct from float('inf') so callers must branch."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "PLUS_INFINITY"

    def __str__(self):
        return "+inf"

    def __gt__(self, other):
        return not isinstance(other, _PlusInfinity)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _PlusInfinity)


PLUS_INFINITY = _PlusInfinity()


def is_infinite(x):
    return x is PLUS_INFINITY


# Lanczos g = 7, n = 9 (Godfrey's coefficients)
_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpos_int(x):
    return x <= 0 and x == math.floor(x)


def _lanczos_ln(x):
    # ln Gamma(x) for x >= 0.5
    z = x - 1.0
    s = _LANCZOS[0]
    for k in range(1, 9):
        s += _LANCZOS[k] / (z + k)
    t = z + _G + 0.5
    return _LN_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(s)


_EULER_GAMMA = 0.57721566490153286


def _zeta_minus_one(k, n=200):
    # sum_{m >= 2} m^-k with an Euler-Maclaurin tail after n terms
    head = math.fsum(m ** -float(k) for m in range(2, n + 1))
    tail = (n ** (1.0 - k) / (k - 1.0) - 0.5 * n ** -float(k)
            + k * n ** (-k - 1.0) / 12.0
            - k * (k + 1.0) * (k + 2.0) * n ** (-k - 3.0) / 720.0)
    return head + tail


_ZM1 = tuple(_zeta_minus_one(k) for k in range(2, 40))


def _ln_gamma_1p(e):
    # ln Gamma(1+e) = -ln(1+e) + e(1-gamma) + sum (-1)^k (zeta(k)-1) e^k / k,
    # valid for |e| < 2; used on |e| <= 1/2 where it keeps relative accuracy near e = 0
    s = 0.0
    p = -e
    for k, z in enumerate(_ZM1, start=2):
        p *= -e
        s += z * p / k
    return -math.log1p(e) + e * (1.0 - _EULER_GAMMA) + s


def ln_gamma(x):
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x <= 0:
        raise ValueError("ln_gamma needs x > 0; use gamma_signed for negative x")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - _lanczos_ln(1.0 - x)
    # ln Gamma vanishes at 1 and 2; a Taylor series keeps relative accuracy there
    if x < 1.5:
        return _ln_gamma_1p(x - 1.0)
    if x < 2.5:
        return math.log1p(x - 2.0) + _ln_gamma_1p(x - 2.0)
    return _lanczos_ln(x)


def gamma_signed(x):
    """Gamma(x) for any real x that is not a pole."""
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return math.exp(ln_gamma(x))
    return math.pi / (math.sin(math.pi * x) * gamma_signed(1.0 - x))


@dataclass(frozen=True)
class HypArgs:
    a: float
    b: float
    c: float
    z: float


MAX_TERMS = 10**6


def _series(a, b, c, z, tol):
    """Direct Pochhammer summation; stops on a geometric tail bound."""
    if _is_nonpos_int(c):
        # allowed only when the numerator terminates first
        cut = min([-int(v) for v in (a, b) if _is_nonpos_int(v)] or [None],
                  key=lambda v: math.inf if v is None else v)
        if cut is None or cut >= -int(c):
            raise PoleError(f"2F1 denominator parameter c={c} is a pole")
    s = 1.0
    t = 1.0
    if z == 0.0:
        return s
    for n in range(MAX_TERMS):
        num = (a + n) * (b + n)
        if num == 0.0:
            return s
        t *= num / ((c + n) * (n + 1.0)) * z
        s += t
        # the coefficient ratio tends to 1 monotonically, so later term ratios
        # stay below rho = z max(ratio, 1) and the tail is at most t rho/(1-rho)
        ratio = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)))
        rho = z * max(ratio, 1.0)
        if n > abs(a) + abs(b) + abs(c) and rho < 1.0 and abs(t) * rho / (1.0 - rho) <= tol * abs(s):
            return s
    raise NoConvergence(f"2F1({a},{b};{c};{z}) did not converge in {MAX_TERMS} terms")


def hyp2f1_direct(a, b, c, z, tol=1e-14):
    return _series(a, b, c, z, tol)


def hyp2f1_euler(a, b, c, z, tol=1e-14):
    """2F1 via (1-z)^(c-a-b) 2F1(c-a, c-b; c; z)."""
    return (1.0 - z) ** (c - a - b) * _series(c - a, c - b, c, z, tol)


def hyp2f1(args, tol=1e-14):
    """Gauss hypergeometric function for real parameters and z in [0, 1).

    Direct summation on [0, 1/2].  Above 1/2 the Euler transform is used,
    unless the direct series terminates or has the faster-decaying tail
    (c - a - b > 0), in which case summing directly is the better choice.
    """
    if not isinstance(args, HypArgs):
        args = HypArgs(*args)
    a, b, c, z = float(args.a), float(args.b), float(args.c), float(args.z)
    if not 0.0 <= z < 1.0:
        raise ValueError("hyp2f1 needs z in [0, 1)")
    if _is_nonpos_int(c) and not any(_is_nonpos_int(v) for v in (a, b)):
        raise PoleError(f"2F1 denominator parameter c={c} is a pole")
    if z <= 0.5:
        return _series(a, b, c, z, tol)
    terminating = _is_nonpos_int(a) or _is_nonpos_int(b)
    euler_terminates = _is_nonpos_int(c - a) or _is_nonpos_int(c - b)
    if terminating or (c - a - b > 0 and not euler_terminates):
        return _series(a, b, c, z, tol)
    return hyp2f1_euler(a, b, c, z, tol)


def gauss_at_one(a, b, c):
    """2F1(a, b; c; 1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))."""
    s = c - a - b
    if s <= 0:
        raise DivergesAtOne(f"c-a-b={s} <= 0: series diverges at z=1")
    if _is_nonpos_int(c):
        raise PoleError(f"c={c} is a pole")
    # 1/Gamma vanishes at the poles of c-a or c-b
    for v in (c - a, c - b):
        if _is_nonpos_int(v):
            return 0.0
    return (gamma_signed(c) * gamma_signed(s)
            / (gamma_signed(c - a) * gamma_signed(c - b)))


def cos_power_integral(s):
    """C_s = integral over [-1, 1] of cos^s(pi y/2); PLUS_INFINITY for s <= -1."""
    s = float(s)
    if s <= -1.0:
        return PLUS_INFINITY
    return 2.0 / math.sqrt(math.pi) * math.exp(ln_gamma(0.5 * (s + 1.0)) - ln_gamma(0.5 * s + 1.0))
