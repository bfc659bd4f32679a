"""Exact diffuse-wall slip via the dispersion-phase integral.

On the positive real axis the dispersion function has boundary values
lambda(tau) +/- i pi tau K(tau); the continuous phase

    theta(tau) = arg[lambda(tau) + i pi tau K(tau)],  theta(0+) = 0,
    theta(inf) = pi,

yields the exact diffuse (q = 1) slip as an integral over the phase defect:

    V_1(alpha) = -(1/pi) int_0^inf (theta(tau) - pi) dtau.

This closed route validates the successive-approximation solver; the exact
wall velocity sqrt(l2/l0) comes with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchJump, DomainError
from .kernel import KernelContext, make_context
from .quadrature import QuadratureSpec, integrate, principal_value

__all__ = [
    "DispersionPhase",
    "lambda_real",
    "phase_theta",
    "dispersion_phase",
    "exact_slip_diffuse",
    "exact_wall_velocity",
]

#: tau integration stops once |theta - pi| falls below this.
PHASE_TOL = 1e-10

_PHASE_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13)


@dataclass(frozen=True)
class DispersionPhase:
    """Sampled dispersion phase: Re lambda, theta and zeta = theta - pi."""

    tau_grid: np.ndarray
    lambda_re: np.ndarray
    theta: np.ndarray

    @property
    def zeta(self) -> np.ndarray:
        return self.theta - math.pi


def lambda_real(tau: float, ctx: KernelContext,
                spec: QuadratureSpec | None = None) -> float:
    """Re lambda(tau) = 1 + tau p.v. int K(t)/(t - tau) dt over the line.

    The pole is subtracted over the window symmetric about tau; outside the
    kernel support the integrand is dropped (relative tail below 5e-18).
    """
    if tau <= 0.0:
        raise DomainError("tau must be positive")
    spec = spec or _PHASE_SPEC
    reach = ctx.cutoff + tau + 2.0
    pv = principal_value(ctx.kernel_values, tau, -reach, reach, spec)
    return 1.0 + tau * pv


def phase_theta(tau: float, ctx: KernelContext,
                spec: QuadratureSpec | None = None) -> float:
    """Continuous phase theta(tau) = arg(lambda + i pi tau K) in (0, pi).

    The imaginary part pi tau K(tau) is strictly positive for tau > 0, so
    atan2 already lands on the continuous branch rising from 0 to pi.
    """
    lam = lambda_real(tau, ctx, spec)
    return math.atan2(math.pi * tau * float(ctx.kernel_values(tau)), lam)


def _tau_upper(ctx: KernelContext) -> float:
    """Smallest tau beyond which |theta - pi| stays below PHASE_TOL.

    For tau past the zero of lambda, |theta - pi| ~ pi tau K(tau)/|lambda|
    with lambda -> -T_2(0)/tau^2; bracket on that estimate, then verify.
    """
    t2_zero = ctx.l2 / ctx.l0
    tau = max(2.0, 0.6 * ctx.cutoff)
    while tau < ctx.cutoff + 12.0:
        estimate = (math.pi * tau**3 * float(ctx.kernel_values(tau))
                    / t2_zero)
        if estimate < 0.1 * PHASE_TOL:
            break
        tau += 0.25
    return tau


def dispersion_phase(ctx: KernelContext, n_tau: int = 400,
                     spec: QuadratureSpec | None = None,
                     _refined: bool = False) -> DispersionPhase:
    """Tabulate the phase on [0, tau_max] and enforce branch continuity."""
    tau_max = _tau_upper(ctx)
    taus = np.linspace(tau_max / n_tau, tau_max, n_tau)
    lam = np.array([lambda_real(t, ctx, spec) for t in taus])
    theta = np.arctan2(math.pi * taus * np.asarray(ctx.kernel_values(taus)),
                       lam)
    jumps = np.abs(np.diff(theta))
    if jumps.size and jumps.max() > 0.5 * math.pi:
        if _refined:
            raise BranchJump(
                f"phase jump {jumps.max():.3f} rad after refinement")
        return dispersion_phase(ctx, 4 * n_tau, spec, _refined=True)
    return DispersionPhase(tau_grid=taus, lambda_re=lam, theta=theta)


def exact_slip_diffuse(alpha: float, spec: QuadratureSpec | None = None,
                       resolution: float = 1.0,
                       ctx: KernelContext | None = None) -> float:
    """Exact diffuse slip V_1(alpha) = -(1/pi) int_0^inf (theta - pi) dtau.

    ``resolution`` > 1 tightens the phase quadrature (used by the
    self-convergence oracle).
    """
    ctx = ctx or make_context(alpha)
    spec = spec or _PHASE_SPEC
    inner = spec.tightened(resolution) if resolution != 1.0 else spec
    outer = QuadratureSpec(rel_tol=max(1e-8 / resolution, 1e-12),
                           abs_tol=1e-12, max_subdivisions=4000)
    tau_max = _tau_upper(ctx)

    def defect(taus: np.ndarray) -> np.ndarray:
        return np.array([math.pi - phase_theta(float(t), ctx, inner)
                         for t in taus]) / math.pi

    seeds = np.linspace(0.0, tau_max, 17)
    return integrate(defect, 0.0, tau_max, outer, seed_edges=seeds)


def exact_wall_velocity(alpha: float,
                        ctx: KernelContext | None = None) -> float:
    """Exact wall velocity U(0)/G_v = sqrt(l2/l0); 1/sqrt(2) in the Maxwell limit."""
    ctx = ctx or make_context(alpha)
    return math.sqrt(ctx.l2 / ctx.l0)
