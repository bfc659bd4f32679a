"""Successive-approximation solution of the slip problem.

The Fredholm equation for the spectral density E(k) of the continuum mass
velocity is expanded in powers of the diffuseness q.  Each order yields a
slip coefficient U_n and a spectral density E_n(k); removal of the double
pole of E_n at k = 0 is what fixes U_n:

    U_0 = T_2(0) / T_1(0),
    E_0(k) = [T_2(k) - U_0 T_1(k)] / L(k) = phi_0(k) / T_2(k),
    U_n = -(1 / (pi T_1(0))) int_0^inf T_1(k) E_{n-1}(k) dk,
    E_n(k) = -(1 / (pi T_2(k))) int_0^inf S(k, k1) E_{n-1}(k1) dk1.

The dimensionless slip is U_sl / G_v = C(q, alpha)
= ((2 - q)/q) [U_0 + U_1 q + U_2 q^2 + ...].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeries, DomainError, GridTooCoarse
from .kernel import KernelContext, make_context
from .moments import KGrid, MomentCache, moment_T
from .quadrature import DEFAULT_SPEC, QuadratureSpec

__all__ = [
    "NeumannSeries",
    "SlipSolution",
    "u0",
    "phi0",
    "neumann_step",
    "build_series",
    "series_factor",
    "slip_velocity",
    "inverse_kramers",
    "check_grid_convergence",
]


@dataclass
class NeumannSeries:
    """Solution state: coefficients U_0..U_N and spectral densities E_0..E_N.

    ``E[n]`` is sampled on ``cache.grid``; every density is finite at the
    smallest node because the recursion removes the double pole by
    construction.  Treat instances as immutable.
    """

    order: int
    U: np.ndarray
    E: list[np.ndarray]
    ctx: KernelContext
    cache: MomentCache

    @property
    def alpha(self) -> float:
        return self.ctx.alpha


@dataclass(frozen=True)
class SlipSolution:
    """Dimensionless slip U_sl / G_v and its per-order partial sums."""

    alpha: float
    q: float
    order: int
    C: float
    partials: np.ndarray
    exact_reference: float | None = None


def u0(ctx: KernelContext) -> float:
    """Zeroth slip coefficient U_0 = T_2(0)/T_1(0) = l2/l1.

    Equals sqrt(pi)/2 = 0.8862 in the Maxwell limit.
    """
    return ctx.l2 / ctx.l1


def phi0(k: float, cache: MomentCache,
         spec: QuadratureSpec | None = None) -> float:
    """Pole-free numerator phi_0(k) = [T_2(0) T_3(k) - T_1(0) T_4(k)] / T_1(0).

    E_0(k) = phi_0(k) / T_2(k); algebraically equal to the ratio route
    (T_2(k) - U_0 T_1(k)) / L(k) away from the origin.
    """
    ctx = cache.ctx
    t1_zero, t2_zero = cache.T_at_zero[1], cache.T_at_zero[2]
    t3 = moment_T(3, k, ctx, spec)
    t4 = moment_T(4, k, ctx, spec)
    return (t2_zero * t3 - t1_zero * t4) / t1_zero


def _e0_table(cache: MomentCache) -> np.ndarray:
    t1_zero, t2_zero = cache.T_at_zero[1], cache.T_at_zero[2]
    phi = (t2_zero * cache.T[3] - t1_zero * cache.T[4]) / t1_zero
    return phi / cache.T[2]


def neumann_step(E_prev: np.ndarray, cache: MomentCache) -> tuple[float, np.ndarray]:
    """One recursion step: (U_n, E_n) from the previous spectral density.

    ``E_prev`` must be sampled on ``cache.grid``.
    """
    grid = cache.grid
    if E_prev.shape != grid.nodes.shape:
        raise GridTooCoarse("spectral density not sampled on the cache grid")
    weighted = grid.weights * E_prev
    u_n = -float(cache.T[1] @ weighted) / (math.pi * cache.T_at_zero[1])
    e_n = -(cache.s_matrix @ weighted) / (math.pi * cache.T[2])
    return u_n, e_n


def build_series(alpha: float, order: int = 3,
                 grid: KGrid | None = None,
                 spec: QuadratureSpec | None = None,
                 ctx: KernelContext | None = None) -> NeumannSeries:
    """Run the recursion up to ``order`` corrections at the given alpha."""
    if order < 0:
        raise DomainError("order must be >= 0")
    spec = spec or DEFAULT_SPEC
    ctx = ctx or make_context(alpha, spec)
    cache = MomentCache(ctx, grid)
    U = [u0(ctx)]
    E = [_e0_table(cache)]
    for _ in range(order):
        u_n, e_n = neumann_step(E[-1], cache)
        U.append(u_n)
        E.append(e_n)
    return NeumannSeries(order=order, U=np.array(U), E=E, ctx=ctx,
                         cache=cache)


def series_factor(q: float, U: np.ndarray) -> float:
    """C(q, alpha) = ((2 - q)/q) * sum_n U_n q^n."""
    powers = q ** np.arange(len(U))
    return (2.0 - q) / q * float(U @ powers)


def slip_velocity(alpha: float, q: float, order: int = 3,
                  series: NeumannSeries | None = None,
                  exact_reference: float | None = None,
                  grid: KGrid | None = None,
                  spec: QuadratureSpec | None = None) -> SlipSolution:
    """Dimensionless slip velocity U_sl / G_v with per-order partial sums.

    q is the diffuseness on (0, 1]; q = 0 (purely specular wall) is a
    genuine pole of the (2 - q)/q prefactor and is rejected.
    """
    if not 0.0 < q <= 1.0:
        raise DomainError(f"diffuseness q must lie in (0, 1], got {q}")
    if series is None:
        series = build_series(alpha, order, grid, spec)
    elif series.order < order:
        raise DomainError("requested order exceeds the series order")
    elif not math.isclose(series.alpha, alpha, rel_tol=0.0, abs_tol=1e-12):
        raise DomainError("series was built for a different alpha")
    U = series.U[:order + 1]
    partials = np.array([series_factor(q, U[:m + 1])
                         for m in range(order + 1)])
    return SlipSolution(alpha=alpha, q=q, order=order, C=partials[-1],
                        partials=partials, exact_reference=exact_reference)


def inverse_kramers(u_sl_over_geometry: float, alpha: float, q: float,
                    order: int = 3,
                    series: NeumannSeries | None = None) -> float:
    """Inverse problem: recover the far-field gradient from a given slip.

    Returns G_v = u_sl / C(q, alpha); the slip and the gradient share
    whatever units the caller used.
    """
    solution = slip_velocity(alpha, q, order, series)
    if abs(solution.C) < 1e-12:
        raise DegenerateSeries("series factor C(q, alpha) is numerically zero")
    return u_sl_over_geometry / solution.C


def check_grid_convergence(alpha: float, order: int = 3,
                           tol: float = 1e-5) -> np.ndarray:
    """Verify the grid-resolution clause: doubling nodes moves no U_n by tol.

    Returns the coefficient shifts; raises GridTooCoarse on failure.
    """
    base = build_series(alpha, order)
    fine = build_series(alpha, order, grid=KGrid.build(refine=2.0))
    shift = np.abs(base.U - fine.U)
    if np.any(shift >= tol):
        raise GridTooCoarse(
            f"doubling the spectral grid moved coefficients by {shift.max():.2e}")
    return shift
