"""Linear stability of beta-plane shear flows via the Rayleigh-Kuo equation."""
from .errors import (BetaOutOfRange, ContourAmbiguous, DivergesAtOne, GammaOutOfRange,
                     InvalidSpeed, KuoStabError, NoConvergence, NodeCountMismatch,
                     PoleError, StepFailure, UnsupportedIndex)
from .profiles import FlowProfile, check_class_k_plus, get_profile, sinus_profile, tanh_profile
from .slsolver import (INFINITY, Compactified, EigenPair, Finite, Infinity, SLProblem,
                       dlambda_dbeta, dlambda_dc, eigenfunction, eigenvalues)

__version__ = "0.1.0"
