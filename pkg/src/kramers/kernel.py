"""Reduced chemical potential, log-Fermi moments and the collision kernel.

The kernel of the kinetic equation is the normalized log-Fermi weight

    K(mu, alpha) = ln(1 + e^(alpha - mu^2)) / (2 l_0(alpha)),

with l_n(alpha) = int_0^inf t^n ln(1 + e^(alpha - t^2)) dt.  It integrates
to one over the whole line for every alpha.  For alpha -> -inf it collapses
to the Maxwell weight e^(-mu^2)/sqrt(pi); for alpha >> 1 the rescaled kernel
sqrt(alpha) K(sqrt(alpha) mu, alpha) approaches (3/4)(1 - mu^2) on [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DomainError
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, SemiInfiniteDomain,
                         integrate)

__all__ = [
    "KernelContext",
    "make_context",
    "log_fermi_moment",
    "kernel",
    "maxwell_kernel",
    "degenerate_kernel",
    "ALPHA_MAX",
    "ALPHA_MAXWELL_SWITCH",
]

#: Largest reduced chemical potential the solver accepts.
ALPHA_MAX = 500.0

#: Below this alpha the Maxwell limit is substituted analytically; the
#: difference is O(e^alpha) relative, under double-precision noise.
ALPHA_MAXWELL_SWITCH = -40.0

# Maxwell-limit values of l_n / e^alpha for n = 0, 1, 2.
_MAXWELL_L = (0.5 * math.sqrt(math.pi), 0.5, 0.25 * math.sqrt(math.pi))

# The moments normalize the kernel itself, so they are pushed well past the
# package-wide defaults; purely relative control (values span e^alpha).
_MOMENT_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300)


@dataclass(frozen=True)
class KernelContext:
    """Immutable bundle of alpha, its log-Fermi moments and the t-cutoff.

    Shareable across workers; every downstream module keys its tables on one
    of these.
    """

    alpha: float
    l0: float
    l1: float
    l2: float
    cutoff: float
    maxwell_limit: bool = False

    def kernel_values(self, mu) -> np.ndarray | float:
        """K(mu, alpha) evaluated elementwise (scalar in, scalar out)."""
        scalar = np.ndim(mu) == 0
        mu = np.atleast_1d(np.asarray(mu, dtype=float))
        if self.maxwell_limit:
            out = np.exp(-mu * mu) / math.sqrt(math.pi)
        else:
            out = backend.log1p_exp(self.alpha - mu * mu) / (2.0 * self.l0)
        return float(out[0]) if scalar else out


def log_fermi_moment(n: int, alpha: float,
                     spec: QuadratureSpec | None = None) -> float:
    """Moment l_n(alpha) = int_0^inf t^n ln(1 + e^(alpha - t^2)) dt, n in 0..2.

    Positive, finite and strictly increasing in alpha.  Below the Maxwell
    switch the closed Gaussian moments e^alpha * {sqrt(pi)/2, 1/2, sqrt(pi)/4}
    are returned directly.
    """
    if n not in (0, 1, 2):
        raise DomainError(f"moment order must be 0, 1 or 2, got {n}")
    if not np.isfinite(alpha):
        raise DomainError("alpha must be finite")
    if alpha < ALPHA_MAXWELL_SWITCH:
        return math.exp(alpha) * _MAXWELL_L[n]
    domain = SemiInfiniteDomain.for_log_fermi_weight(alpha)

    def integrand(t: np.ndarray) -> np.ndarray:
        return t**n * backend.log1p_exp(alpha - t * t)

    return integrate(integrand, 0.0, domain.cutoff, spec or _MOMENT_SPEC)


def make_context(alpha: float,
                 spec: QuadratureSpec | None = None) -> KernelContext:
    """Build the :class:`KernelContext` for a reduced chemical potential."""
    if not np.isfinite(alpha):
        raise DomainError("alpha must be finite")
    if alpha > ALPHA_MAX:
        raise DomainError(f"alpha={alpha} above supported maximum {ALPHA_MAX}")
    maxwell = alpha < ALPHA_MAXWELL_SWITCH
    # never looser than the moment default: everything downstream divides
    # by these values
    if spec is not None:
        spec = QuadratureSpec(min(spec.rel_tol, _MOMENT_SPEC.rel_tol),
                              _MOMENT_SPEC.abs_tol, spec.max_subdivisions)
    l0, l1, l2 = (log_fermi_moment(n, alpha, spec) for n in range(3))
    cutoff = SemiInfiniteDomain.for_log_fermi_weight(alpha).cutoff
    return KernelContext(alpha=alpha, l0=l0, l1=l1, l2=l2, cutoff=cutoff,
                         maxwell_limit=maxwell)


def kernel(mu, ctx: KernelContext) -> np.ndarray:
    """Kinetic-equation kernel K(mu, alpha): even, positive, unit integral."""
    return ctx.kernel_values(mu)


def maxwell_kernel(mu) -> np.ndarray | float:
    """Classical limit e^(-mu^2)/sqrt(pi) of the kernel."""
    scalar = np.ndim(mu) == 0
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    out = np.exp(-mu * mu) / math.sqrt(math.pi)
    return float(out[0]) if scalar else out


def degenerate_kernel(mu) -> np.ndarray | float:
    """Strong-degeneracy limit (3/4)(1 - mu^2) of the rescaled kernel.

    Defined on |mu| <= 1 only; used as the shape target for alpha >> 1 after
    the mu -> sqrt(alpha) mu rescaling.
    """
    scalar = np.ndim(mu) == 0
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if np.any(np.abs(mu) > 1.0):
        raise DomainError("degenerate kernel defined on |mu| <= 1")
    out = 0.75 * (1.0 - mu * mu)
    return float(out[0]) if scalar else out
