"""Spectral moment functions T_n(k), L(k) and the coupling kernels J, J_n, S.

Scalar operations (:func:`moment_T`, :func:`coupling_J`, ...) run the
adaptive engine per call and serve as the precision reference.  Bulk work
goes through :class:`MomentCache`, which tabulates everything on a fixed
:class:`KGrid` with product Gauss-Legendre quadrature over the molecular
speed; the two routes are cross-checked in the test suite.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import backend
from .errors import DomainError
from .kernel import KernelContext
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate

__all__ = [
    "KGrid",
    "MomentCache",
    "moment_T",
    "dispersion_L",
    "coupling_J",
    "coupling_Jn",
    "kernel_S",
    "GRID_NODES_ENV",
]

GRID_NODES_ENV = "KRAMERS_GRID_NODES"

#: Below this k the Taylor form T_n(k) = T_n(0) - k^2 T_{n+2}(0) is used,
#: avoiding cancellation where the removed double pole used to sit.
K_TAYLOR = 1e-3

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _panel_nodes(edges: np.ndarray, points: int):
    """Gauss-Legendre nodes and weights on each panel of ``edges``."""
    if points not in _GL_CACHE:
        _GL_CACHE[points] = np.polynomial.legendre.leggauss(points)
    x, w = _GL_CACHE[points]
    a = edges[:-1, None]
    b = edges[1:, None]
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
    weights = 0.5 * (b - a) * np.broadcast_to(w, nodes.shape)
    return nodes.ravel(), weights.ravel()


def _geometric_edges(lo: float, hi: float, per_decade: float) -> np.ndarray:
    n = max(1, int(math.ceil(math.log10(hi / lo) * per_decade)))
    return np.geomspace(lo, hi, n + 1)


@dataclass(frozen=True)
class KGrid:
    """Fixed spectral grid for the Fourier variable k.

    Geometric panels on [k_min, k_max] plus one leading panel [0, k_min],
    Gauss-Legendre nodes and weights per panel.  The weights integrate
    smooth spectral densities over [0, k_max]; doubling the density must
    leave every downstream slip coefficient unchanged to 1e-5 (checked by
    the grid-convergence test).
    """

    nodes: np.ndarray
    weights: np.ndarray
    k_max: float

    def __post_init__(self) -> None:
        if np.any(self.nodes <= 0.0) or np.any(np.diff(self.nodes) <= 0.0):
            raise ValueError("grid nodes must be positive and increasing")
        if np.any(self.weights <= 0.0):
            raise ValueError("grid weights must be positive")

    @classmethod
    def build(cls, k_max: float = 600.0, k_min: float = 1e-3,
              panels_per_decade: float = 7.0, points_per_panel: int = 10,
              refine: float = 1.0) -> "KGrid":
        """Assemble the default grid, honoring ``KRAMERS_GRID_NODES``.

        ``refine`` scales the panel density (2.0 doubles the node count for
        convergence studies).  The environment override sets a target total
        node count instead.
        """
        env = os.environ.get(GRID_NODES_ENV)
        if env:
            target = int(env)
            decades = math.log10(k_max / k_min)
            panels_per_decade = max(
                1.0, (target / points_per_panel - 1.0) / decades)
        edges = np.concatenate([
            [0.0],
            _geometric_edges(k_min, k_max, panels_per_decade * refine),
        ])
        nodes, weights = _panel_nodes(edges, points_per_panel)
        return cls(nodes=nodes, weights=weights, k_max=float(k_max))

    @property
    def size(self) -> int:
        return self.nodes.size


def _speed_grid(ctx: KernelContext) -> tuple[np.ndarray, np.ndarray]:
    """Product-quadrature nodes over molecular speed t on [0, cutoff].

    Geometric panels resolve the Lorentz factor 1/(1 + k^2 t^2) down to the
    largest grid k.
    """
    edges = np.concatenate([[0.0],
                            _geometric_edges(2e-4, ctx.cutoff, 8.8)])
    return _panel_nodes(edges, 15)


class MomentCache:
    """Tabulated T_n(k) (n = 0..4) and couplings on one (context, grid) pair.

    Construction is a handful of dense matrix products; the instance is
    immutable afterwards and safe for concurrent reads.  The S-matrix of the
    successive-approximation recursion is assembled lazily and reused for
    every order.
    """

    def __init__(self, ctx: KernelContext, grid: KGrid | None = None):
        self.ctx = ctx
        self.grid = grid or KGrid.build()
        t, wt = _speed_grid(ctx)
        self._t = t
        self._g = wt * np.asarray(ctx.kernel_values(t))
        self.T = backend.moment_tables(self.grid.nodes, t, self._g, 4)
        self.T_at_zero = (1.0, ctx.l1 / ctx.l0, ctx.l2 / ctx.l0)
        self._s_matrix: np.ndarray | None = None
        self._interp: dict[int, PchipInterpolator] = {}

    @property
    def s_matrix(self) -> np.ndarray:
        """S(k_i, k_j) = k_j^2 [J5(k_i,k_j) - T3(k_i) T3(k_j) / T1(0)]."""
        if self._s_matrix is None:
            j5 = backend.fifth_moment_matrix(self.grid.nodes, self._t,
                                             self._g)
            t3 = self.T[3]
            k2 = self.grid.nodes**2
            self._s_matrix = k2[None, :] * (
                j5 - np.outer(t3, t3) / self.T_at_zero[1])
        return self._s_matrix

    def dispersion_values(self) -> np.ndarray:
        """L(k) = k^2 T_2(k) on the grid."""
        return self.grid.nodes**2 * self.T[2]

    def interp_T(self, n: int) -> PchipInterpolator:
        """Monotone cubic interpolant of T_n for off-grid queries."""
        if n not in self._interp:
            k = np.concatenate([[0.0], self.grid.nodes])
            zero = (self.T_at_zero[n] if n < 3 else
                    moment_T(n, 0.0, self.ctx))
            vals = np.concatenate([[zero], self.T[n]])
            self._interp[n] = PchipInterpolator(k, vals, extrapolate=False)
        return self._interp[n]

    def identity_residuals(self) -> dict[str, float]:
        """Residuals of the internal moment identities, for selftest."""
        k = self.grid.nodes
        l_two_routes = np.abs((1.0 - self.T[0]) - k * k * self.T[2])
        rec1 = np.abs(self.T[1] - (self.T_at_zero[1] - k * k * self.T[3]))
        rec2 = np.abs(self.T[2] - (self.T_at_zero[2] - k * k * self.T[4]))
        return {
            "L_two_routes": float(l_two_routes.max()),
            "T1_recurrence": float(rec1.max()),
            "T2_recurrence": float(rec2.max()),
        }


@lru_cache(maxsize=4096)
def _moment_at_zero(n: int, ctx: KernelContext, tol_key: float) -> float:
    if n == 0:
        return 1.0
    if n == 1:
        return ctx.l1 / ctx.l0
    if n == 2:
        return ctx.l2 / ctx.l0
    spec = QuadratureSpec(rel_tol=tol_key, abs_tol=1e-16)

    def integrand(t: np.ndarray) -> np.ndarray:
        return np.asarray(ctx.kernel_values(t)) * t**n

    return 2.0 * integrate(integrand, 0.0, ctx.cutoff, spec)


def moment_T(n: int, k: float, ctx: KernelContext,
             spec: QuadratureSpec | None = None) -> float:
    """T_n(k) = 2 int_0^inf K(t) t^n / (1 + k^2 t^2) dt for n in 0..6.

    At k = 0 the closed moments are returned (T_0(0) = 1 by normalization,
    T_1(0) = l1/l0, T_2(0) = l2/l0); below ``K_TAYLOR`` the quadratic Taylor
    form is used.
    """
    if not 0 <= n <= 6:
        raise DomainError(f"moment order must be in 0..6, got {n}")
    if k < 0.0:
        raise DomainError("k must be nonnegative")
    spec = spec or DEFAULT_SPEC
    if k == 0.0:
        return _moment_at_zero(n, ctx, spec.rel_tol)
    if k < K_TAYLOR and n <= 4:
        return (_moment_at_zero(n, ctx, spec.rel_tol) -
                k * k * _moment_at_zero(n + 2, ctx, spec.rel_tol))

    def integrand(t: np.ndarray) -> np.ndarray:
        return (np.asarray(ctx.kernel_values(t)) * t**n /
                (1.0 + (k * t)**2))

    edges = _lorentz_edges(k, ctx.cutoff)
    return 2.0 * integrate(integrand, 0.0, ctx.cutoff, spec,
                           seed_edges=edges)


def _lorentz_edges(k: float, cutoff: float) -> np.ndarray | None:
    """Seed edges resolving the 1/(1 + k^2 t^2) shoulder at t ~ 1/k."""
    if k <= 2.0 / cutoff:
        return None
    shoulder = 1.0 / k
    inner = np.geomspace(shoulder / 8.0, cutoff, 24)
    return np.concatenate([[0.0], inner[:-1], [cutoff]])


def dispersion_L(k: float, ctx: KernelContext,
                 spec: QuadratureSpec | None = None) -> float:
    """L(k) = k^2 T_2(k), the dispersion combination with a double zero at 0.

    Agrees with 1 - T_0(k); the cache invariant checks the two routes
    against each other.
    """
    if k < 0.0:
        raise DomainError("k must be nonnegative")
    return k * k * moment_T(2, k, ctx, spec)


def _double_lorentz(n: int, k: float, k1: float, ctx: KernelContext,
                    spec: QuadratureSpec) -> float:
    def integrand(t: np.ndarray) -> np.ndarray:
        return (np.asarray(ctx.kernel_values(t)) * t**n /
                ((1.0 + (k * t)**2) * (1.0 + (k1 * t)**2)))

    edges = _lorentz_edges(max(k, k1), ctx.cutoff)
    return 2.0 * integrate(integrand, 0.0, ctx.cutoff, spec,
                           seed_edges=edges)


def coupling_J(k: float, k1: float, ctx: KernelContext,
               spec: QuadratureSpec | None = None) -> float:
    """J(k, k1) = 2 int_0^inf K(t) t / ((1+k^2 t^2)(1+k1^2 t^2)) dt.

    Symmetric in (k, k1); J(k, 0) = T_1(k).
    """
    if k < 0.0 or k1 < 0.0:
        raise DomainError("wavenumbers must be nonnegative")
    return _double_lorentz(1, k, k1, ctx, spec or DEFAULT_SPEC)


def coupling_Jn(n: int, k: float, k1: float, ctx: KernelContext,
                spec: QuadratureSpec | None = None) -> float:
    """Higher couplings J_n, n in {3, 5}, same double-Lorentz weight."""
    if n not in (3, 5):
        raise DomainError(f"coupling order must be 3 or 5, got {n}")
    if k < 0.0 or k1 < 0.0:
        raise DomainError("wavenumbers must be nonnegative")
    return _double_lorentz(n, k, k1, ctx, spec or DEFAULT_SPEC)


def kernel_S(k: float, k1: float, ctx: KernelContext,
             spec: QuadratureSpec | None = None) -> float:
    """Recursion kernel S(k, k1) = k1^2 [J_5(k,k1) - T_3(k) T_3(k1) / T_1(0)].

    Carries the k1^2 factor that cancels the double zero of L, so the
    spectral recursion stays finite at the origin.  Satisfies
    k^2 S(k, k1) = k1^2 S(k1, k).
    """
    spec = spec or DEFAULT_SPEC
    j5 = coupling_Jn(5, k, k1, ctx, spec)
    t3k = moment_T(3, k, ctx, spec)
    t3k1 = moment_T(3, k1, ctx, spec)
    t1_zero = ctx.l1 / ctx.l0
    return k1 * k1 * (j5 - t3k * t3k1 / t1_zero)
