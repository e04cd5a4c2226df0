"""Exception hierarchy shared by every module."""


class KuoStabError(Exception):
    """Base class for all library errors."""


class BetaOutOfRange(KuoStabError, ValueError):
    pass


class GammaOutOfRange(KuoStabError, ValueError):
    pass


class PoleError(KuoStabError, ValueError):
    pass


class DivergesAtOne(KuoStabError, ValueError):
    pass


class UnsupportedIndex(KuoStabError, ValueError):
    pass


class InvalidSpeed(KuoStabError, ValueError):
    """Phase speed inside the range of U (singular Sturm-Liouville problem)."""


class NoConvergence(KuoStabError, ArithmeticError):
    pass


class NodeCountMismatch(KuoStabError, ArithmeticError):
    pass


class StepFailure(KuoStabError, ArithmeticError):
    """Adaptive integrator hit its step floor or produced a non-finite value."""


class ContourAmbiguous(KuoStabError, ArithmeticError):
    """A dispersion root sits too close to the counting contour."""

    def __init__(self, msg, roots=()):
        super().__init__(msg)
        self.roots = tuple(roots)
