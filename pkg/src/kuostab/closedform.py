"""Explicit eigenvalue formulas for the Sinus flow U = (1 + cos pi y)/2."""
from dataclasses import dataclass

import math

from .errors import BetaOutOfRange, GammaOutOfRange, UnsupportedIndex
from .specfun import PLUS_INFINITY

PI = math.pi
PI2 = PI * PI
BETA_PLUS = (math.sqrt(3.0) - 1.0) * PI2 / 4.0
BETA_CUSP = 5.0 * PI2 / 16.0       # gamma = 3/4: one-sided c-derivative at 0 blows up
BETA_HALF = 0.5 * PI2              # edge of Ran(U'')
ALPHA2_MAX = 0.75 * PI2            # 3 pi^2/4: top of the unstable band


@dataclass(frozen=True)
class GammaExponents:
    gamma: float        # nan when beta >= 9 pi^2/16
    gamma_tilde: float  # nan when beta <= -9 pi^2/16


def gamma_of_beta(beta):
    d = 9.0 / 16.0 - beta / PI2
    if d < 0:
        raise BetaOutOfRange(f"beta={beta} >= 9 pi^2/16 has no real gamma")
    return 0.25 + math.sqrt(d)


def gamma_tilde_of_beta(beta):
    d = 9.0 / 16.0 + beta / PI2
    if d < 0:
        raise BetaOutOfRange(f"beta={beta} <= -9 pi^2/16 has no real gamma_tilde")
    return 0.25 + math.sqrt(d)


def exponents(beta):
    g = gamma_of_beta(beta) if beta <= 9 * PI2 / 16 else math.nan
    gt = gamma_tilde_of_beta(beta) if beta >= -9 * PI2 / 16 else math.nan
    return GammaExponents(g, gt)


def lambda_regular(n):
    """lambda_n at c = U_beta: the potential is the constant pi^2."""
    _check_n(n)
    return (n * n / 4.0 - 1.0) * PI2


def lambda_infinity(n):
    _check_n(n)
    return n * n * PI2 / 4.0


def lambda_c0(beta, n):
    """lambda_n(beta, 0); at beta = pi^2/2 this is also the regular value."""
    _check_n(n)
    if not beta < 9 * PI2 / 16:
        raise BetaOutOfRange(f"lambda_c0 needs beta < 9 pi^2/16, got {beta}")
    g = gamma_of_beta(beta)
    return ((g + 0.5 * (n - 1)) ** 2 - 1.0) * PI2


def lambda_c1(beta, n):
    """lambda_n(beta, 1); eigenvalues pair up, lambda_{2k-1} = lambda_{2k}.

    At beta = -pi^2/2 the speed c = 1 equals U_beta and the regular value wins.
    """
    _check_n(n)
    if not beta > -9 * PI2 / 16:
        raise BetaOutOfRange(f"lambda_c1 needs beta > -9 pi^2/16, got {beta}")
    if beta == -BETA_HALF:
        return lambda_regular(n)
    gt = gamma_tilde_of_beta(beta)
    return ((gt - 0.5 + math.ceil(n / 2)) ** 2 - 1.0) * PI2


def snm_curve(gamma):
    """(c, alpha, beta) of the singular neutral mode with exponent gamma."""
    if not 0.5 < gamma < 1.0:
        raise GammaOutOfRange(f"gamma={gamma} outside (1/2, 1)")
    return (0.0, PI * math.sqrt(1.0 - gamma * gamma),
            PI2 * (-gamma * gamma + 0.5 * gamma + 0.5))


def snm_alpha(beta):
    """Wave number of the singular neutral mode at c = 0 for beta in (0, pi^2/2)."""
    g = gamma_of_beta(beta)
    return PI * math.sqrt(max(0.0, 1.0 - g * g))


@dataclass(frozen=True)
class EndpointValues:
    at0: float
    at1: float


def lambda_minus_at_endpoints(beta):
    """Negative part of lambda_1 at c = 0 and c = 1."""
    if not -BETA_HALF <= beta <= BETA_HALF:
        raise BetaOutOfRange(f"beta={beta} outside [-pi^2/2, pi^2/2]")
    at0 = PI2 * (1.0 - gamma_of_beta(beta) ** 2) if beta > 0 else 0.0
    at1 = max(0.0, -lambda_c1(beta, 1))
    return EndpointValues(at0, at1)


def dlambda1_dc_at_zero(beta):
    """One-sided derivative of lambda_1(beta, c) at c = 0 from the left.

    Returns a float, or PLUS_INFINITY on the branch gamma <= 3/4.
    """
    if not 0.0 < beta < BETA_HALF:
        raise BetaOutOfRange(f"beta={beta} outside (0, pi^2/2)")
    g = gamma_of_beta(beta)
    if g <= 0.75:
        return PLUS_INFINITY
    return PI2 * g * (g - 1.0) * (g * g - 0.75) / ((g - 0.25) * (g - 0.75))


def eigfun_c0(beta, n, y):
    """Unnormalized eigenfunction at c = 0 for n = 1, 2."""
    if n not in (1, 2):
        raise UnsupportedIndex("closed-form eigenfunctions at c = 0 cover n = 1, 2 only")
    if not beta < 9 * PI2 / 16:
        raise BetaOutOfRange(f"beta={beta} >= 9 pi^2/16")
    g = gamma_of_beta(beta)
    cs = abs(math.cos(0.5 * PI * y))
    val = cs ** (2.0 * g)
    if n == 2:
        val *= math.sin(0.5 * PI * y)
    return val


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"eigenvalue index must be a positive integer, got {n}")
