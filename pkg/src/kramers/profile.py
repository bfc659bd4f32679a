"""Knudsen-layer velocity profile and distribution-function corrections.

Per-order velocity corrections are cosine transforms of the spectral
densities,

    U_c^(n)(x) / G_v = ((2 - q)/pi) int_0^inf cos(k x) E_n(k) dk,

and the full profile is U(x)/G_v = U_sl/G_v + x + sum_n q^n U_c^(n)(x).
The spectral densities decay like (a + b ln k)/k^2, so every transform is
split into a grid part on [0, k_max] and an analytic tail: the fitted decay
model is integrated exactly by rotating the contour into the upper half
plane, which is uniform in x down to the wall.

The distribution correction synthesizes h_c(x, mu) from the spectral
slices Phi_n(k, mu); the k-independent part of each bracket is summed in
closed form (it contributes c_n(mu) e^(-x/mu)/mu for mu > 0 and nothing
for mu < 0), leaving only the E_n part to quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import SlowDecay
from .moments import _panel_nodes
from .neumann import NeumannSeries, slip_velocity
from .quadrature import DEFAULT_SPEC, QuadratureSpec, cosine_transform, integrate

__all__ = [
    "VelocityProfile",
    "DistributionSlice",
    "velocity_correction",
    "wall_velocity",
    "full_profile",
    "distribution_spectral",
    "distribution_correction",
    "quadrant_distribution_correction",
]

#: Spectral tail model is fitted for k above k_max / TAIL_FIT_FRACTION.
TAIL_FIT_FRACTION = 10.0

#: Default coordinate grid for profiles, in mean free paths.
DEFAULT_X_GRID = np.arange(0.0, 25.0 + 1e-9, 0.125)

#: Distribution syntheses quadrate the spectral window [0, this] and hand
#: the rest to the fitted tail model (valid from the fit window onward).
SPECTRAL_WINDOW = 60.0


@dataclass(frozen=True)
class VelocityProfile:
    """Sampled velocity field: per-order corrections, total and asymptote.

    Everything is normalized by the far-field gradient G_v; ``total``
    includes the slip and the linear growth, ``asymptote`` is
    U_sl/G_v + x.
    """

    x: np.ndarray
    Uc_by_order: np.ndarray
    total: np.ndarray
    asymptote: np.ndarray
    q: float
    order: int


@dataclass(frozen=True)
class DistributionSlice:
    """Distribution function h at one phase-space point, split into parts."""

    x: float
    mu: float
    h_as: float
    h_c: float

    @property
    def h(self) -> float:
        return self.h_as + self.h_c


def _tail_coefficients(series: NeumannSeries) -> np.ndarray:
    """Least-squares (a + b ln k)/k^2 + c/k^3 fit of each E_n tail.

    Also stashes the relative rms fit residual per order, the model
    uncertainty that feeds the SlowDecay warning.
    """
    cached = getattr(series, "_tail_coefficients", None)
    if cached is not None:
        return cached
    k = series.cache.grid.nodes
    k_max = series.cache.grid.k_max
    sel = k >= k_max / TAIL_FIT_FRACTION
    kk = k[sel]
    design = np.stack([1.0 / kk**2, np.log(kk) / kk**2, 1.0 / kk**3], axis=1)
    coefs = []
    residuals = []
    for E in series.E:
        coef, *_ = np.linalg.lstsq(design, E[sel], rcond=None)
        misfit = design @ coef - E[sel]
        scale = max(float(np.abs(E[sel]).max()), 1e-300)
        coefs.append(coef)
        residuals.append(float(np.sqrt(np.mean(misfit**2))) / scale)
    coefs = np.stack(coefs)
    setattr(series, "_tail_coefficients", coefs)
    setattr(series, "_tail_residuals", np.array(residuals))
    return coefs


def _spectral_interp(series: NeumannSeries, n: int) -> PchipInterpolator:
    """Interpolant of E_n with an even-symmetry anchor at k = 0."""
    cache = getattr(series, "_spectral_interp", None)
    if cache is None:
        cache = {}
        setattr(series, "_spectral_interp", cache)
    if n not in cache:
        k = np.concatenate([[0.0], series.cache.grid.nodes])
        vals = np.concatenate([[series.E[n][0]], series.E[n]])
        cache[n] = PchipInterpolator(k, vals, extrapolate=True)
    return cache[n]


def _tail_transform(coef: np.ndarray, k_max: float, x: float,
                    mu: float = 0.0,
                    spec: QuadratureSpec | None = None) -> float:
    """Re int_{k_max}^inf e^(ikx) g(k)/(1 + ik mu) dk for the fitted tail g.

    Evaluated on the rotated contour k = k_max + i s, where the integrand
    decays monotonically; exact for the tail model at every x >= 0.
    """
    a, b, c = coef
    if x == 0.0 and mu == 0.0:
        return ((a + b * (1.0 + math.log(k_max))) / k_max
                + c / (2.0 * k_max**2))
    spec = spec or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13)
    s_cut = 1e9 if x <= 6e-8 else min(60.0 / x, 1e9)

    def integrand(s: np.ndarray) -> np.ndarray:
        z = k_max + 1j * s
        g = (a + b * np.log(z)) / (z * z) + c / (z * z * z)
        return np.exp(-s * x) * g / (1.0 + 1j * z * mu)

    edges = np.concatenate([[0.0],
                            np.geomspace(s_cut * 1e-8, s_cut, 46)])
    contour = integrate(integrand, 0.0, s_cut, spec, seed_edges=edges)
    return (1j * np.exp(1j * k_max * x) * contour).real


def velocity_correction(n: int, x: float, series: NeumannSeries, q: float,
                        spec: QuadratureSpec | None = None) -> float:
    """Per-order continuum velocity U_c^(n)(x)/G_v.

    Adaptive reference route: capped-panel cosine transform over the grid
    window plus the analytic tail.
    """
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if not 0 <= n <= series.order:
        raise ValueError(f"order {n} not available in the series")
    k_max = series.cache.grid.k_max
    interp = _spectral_interp(series, n)
    coef = _tail_coefficients(series)[n]
    grid_part = cosine_transform(interp, x, k_max, spec)
    tail = _tail_transform(coef, k_max, x) / math.pi
    return (2.0 - q) * (grid_part + tail)


def wall_velocity(series: NeumannSeries, q: float,
                  order: int | None = None) -> float:
    """Gas velocity at the wall, U(0)/G_v, truncating corrections at ``order``.

    The slip term uses the full series; the continuum sum stops at the
    requested order, reproducing the successive wall approximations.
    """
    if order is None:
        order = series.order
    if order > series.order:
        raise ValueError("requested order exceeds the series order")
    slip = slip_velocity(series.alpha, q, series.order, series).C
    weights = series.cache.grid.weights
    coefs = _tail_coefficients(series)
    wall = slip
    for n in range(order + 1):
        sigma = float(weights @ series.E[n]) + _tail_transform(
            coefs[n], series.cache.grid.k_max, 0.0)
        wall += q**n * (2.0 - q) / math.pi * sigma
    return wall


def _bulk_corrections(series: NeumannSeries, q: float,
                      xs: np.ndarray) -> np.ndarray:
    """U_c^(n)(x)/G_v for every order on a batch of coordinates.

    One fixed oscillation-resolving composite grid serves the whole batch;
    per-point results match :func:`velocity_correction` to quadrature
    tolerance.
    """
    xs = np.asarray(xs, dtype=float)
    k_max = series.cache.grid.k_max
    width = math.pi / (4.0 * max(float(xs.max(initial=0.0)), 1.0))
    n_panels = int(math.ceil(k_max / width))
    edges = np.linspace(0.0, k_max, n_panels + 1)
    nodes, weights = _panel_nodes(edges, 10)
    e_vals = np.stack([weights * _spectral_interp(series, n)(nodes)
                       for n in range(series.order + 1)])
    coefs = _tail_coefficients(series)
    out = np.empty((series.order + 1, xs.size))
    for j, x in enumerate(xs):
        cosines = np.cos(nodes * x)
        out[:, j] = e_vals @ cosines
        for n in range(series.order + 1):
            out[n, j] += _tail_transform(coefs[n], k_max, float(x))
    return (2.0 - q) / math.pi * out


def full_profile(series: NeumannSeries, q: float,
                 x_grid: np.ndarray | None = None) -> VelocityProfile:
    """Velocity profile on a coordinate grid (default: 0 to 25, step 1/8)."""
    x = np.asarray(DEFAULT_X_GRID if x_grid is None else x_grid, dtype=float)
    if x.size == 0 or np.any(x < 0.0) or np.any(np.diff(x) <= 0.0):
        raise ValueError("x grid must be nonnegative and increasing")
    corrections = _bulk_corrections(series, q, x)
    slip = slip_velocity(series.alpha, q, series.order, series).C
    asymptote = slip + x
    powers = q ** np.arange(series.order + 1)
    total = asymptote + powers @ corrections
    return VelocityProfile(x=x, Uc_by_order=corrections, total=total,
                           asymptote=asymptote, q=q, order=series.order)


def _lorentz_average(series: NeumannSeries, m: int, mu: float) -> float:
    """D_m(mu) = int_0^inf E_m(k) / (1 + k^2 mu^2) dk, grid plus tail."""
    grid = series.cache.grid
    k = grid.nodes
    grid_part = float((grid.weights * series.E[m]) @ (1.0 / (1.0 + (k * mu)**2)))
    tail = _tail_transform(_tail_coefficients(series)[m], grid.k_max, 0.0,
                           mu=abs(mu))
    return grid_part + tail


def distribution_spectral(n: int, k: float, mu: float,
                          series: NeumannSeries) -> complex:
    """Spectral slice Phi_n(k, mu) of the distribution correction.

    Phi_n = [E_n(k) - U_n |mu| - (|mu|/pi) int_0^inf E_{n-1}(k1)
    /(1 + k1^2 mu^2) dk1] / (1 + i k mu); the zeroth bracket carries
    + mu^2 instead of the integral term.
    """
    if not 0 <= n <= series.order:
        raise ValueError(f"order {n} not available in the series")
    bracket = _bracket_constant(series, n, mu)
    bracket += float(_spectral_interp(series, n)(k))
    return bracket / (1.0 + 1j * k * mu)


def _bracket_constant(series: NeumannSeries, n: int, mu: float) -> float:
    """k-independent part of the Phi_n bracket."""
    am = abs(mu)
    val = -series.U[n] * am
    if n == 0:
        val += mu * mu
    else:
        val -= am / math.pi * _lorentz_average(series, n - 1, mu)
    return val


def distribution_correction(x: float, mu: float, series: NeumannSeries,
                            q: float,
                            spec: QuadratureSpec | None = None) -> DistributionSlice:
    """Distribution function at (x, mu): Chapman-Enskog part plus correction.

    h_c(x, mu) = sum_n q^n (2(2-q)/pi) Re int_0^inf e^(ikx)
    Phi_n(k, mu) dk; the k-independent bracket parts are summed in closed
    form (an e^(-x/mu)/mu source term on the mu > 0 side), the E_n parts by
    capped-panel quadrature plus the analytic tail.
    """
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    spec = spec or DEFAULT_SPEC
    k_win = min(SPECTRAL_WINDOW, series.cache.grid.k_max)
    cap = math.pi / (4.0 * max(x, 1.0))
    edges = np.linspace(0.0, k_win, int(math.ceil(k_win / cap)) + 1)
    coefs = _tail_coefficients(series)
    tail_residuals = getattr(series, "_tail_residuals")

    prefactor = 2.0 * (2.0 - q) / math.pi
    h_c = 0.0
    tail_uncertainty = 0.0
    for n in range(series.order + 1):
        interp = _spectral_interp(series, n)

        def integrand(k: np.ndarray) -> np.ndarray:
            return np.exp(1j * k * x) * interp(k) / (1.0 + 1j * k * mu)

        osc = integrate(integrand, 0.0, k_win, spec, seed_edges=edges).real
        tail = _tail_transform(coefs[n], k_win, x, mu=mu)
        tail_uncertainty += abs(q**n * prefactor * tail) * tail_residuals[n]
        h_c += q**n * prefactor * (osc + tail)
        if mu > 0.0:
            h_c += (q**n * 2.0 * (2.0 - q) * _bracket_constant(series, n, mu)
                    * math.exp(-x / mu) / mu)
    if tail_uncertainty > 1e-3:
        warnings.warn(
            f"spectral tail uncertain by {tail_uncertainty:.2e} in h_c",
            SlowDecay)

    slip = slip_velocity(series.alpha, q, series.order, series).C
    h_as = 2.0 * slip + 2.0 * (x - mu)
    return DistributionSlice(x=x, mu=mu, h_as=h_as, h_c=h_c)


def quadrant_distribution_correction(x: float, mu: float,
                                     series: NeumannSeries, q: float,
                                     x_far: float = 30.0) -> float:
    """Alternative route to h_c for incoming molecules (mu < 0, x > 0).

    Integrates the characteristic solution
    h_c(x, mu) = (1/|mu|) int_x^inf e^(-(t-x)/|mu|) 2 U_c(t) dt directly;
    used as a cross-check of the spectral route near mu = 0.
    """
    if mu >= 0.0:
        raise ValueError("quadrant route applies to mu < 0 only")
    if x >= x_far:
        raise ValueError("x beyond the far-field window")
    am = abs(mu)
    s_max = min(40.0, (x_far - x) / am)
    edges = np.concatenate([[0.0], np.geomspace(1e-3, s_max, 24)])
    s_nodes, s_weights = _panel_nodes(edges, 12)
    corrections = _bulk_corrections(series, q, x + am * s_nodes)
    powers = q ** np.arange(series.order + 1)
    u_c = powers @ corrections
    return float(s_weights @ (np.exp(-s_nodes) * 2.0 * u_c))
