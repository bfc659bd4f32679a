"""Exception and warning types shared across the package."""


class KramersError(Exception):
    """Base class for all solver errors."""


class NonConvergence(KramersError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""


class PoleOutsideDomain(KramersError, ValueError):
    """Principal-value pole does not lie strictly inside the integration window."""


class DomainError(KramersError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class GridTooCoarse(KramersError):
    """Spectral grid failed its self-convergence requirement."""


class DegenerateSeries(KramersError):
    """Slip series factor is numerically zero; the inverse problem is ill-posed."""


class MissingDensity(KramersError, ValueError):
    """Number density neither supplied nor derivable from the gas state."""


class BranchJump(KramersError):
    """Dispersion phase lost continuity between adjacent grid nodes."""


class SlowDecay(RuntimeWarning):
    """Spectral tail of a distribution integral exceeds its accuracy budget."""
