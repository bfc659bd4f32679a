"""Conversion of dimensionless slip results to physical units.

The chain is fixed by the gas state: viscosity
eta = (rho / (nu beta)) (l2/l0), mean free path l = (eta/rho) sqrt(pi beta),
slip coefficient K_v = C(q, alpha) l0 / (sqrt(pi) l2), and the dimensional
slip velocity u_sl = K_v l g_v.  SI units throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MissingDensity
from .kernel import KernelContext, make_context
from .neumann import NeumannSeries, slip_velocity

__all__ = [
    "BOLTZMANN",
    "HBAR",
    "GasParameters",
    "DimensionalResult",
    "viscosity",
    "mean_free_path",
    "slip_coefficient",
    "dimensional_slip",
    "number_density_from_state",
]

#: CODATA exact SI values.
BOLTZMANN = 1.380649e-23  # J/K
HBAR = 1.054571817e-34    # J s


@dataclass(frozen=True)
class GasParameters:
    """Dimensional gas state.

    ``number_density`` may be omitted when it is to be derived from the
    microscopic state (spin and alpha) via
    :func:`number_density_from_state`.  ``gradient`` is the far-field
    velocity gradient g_v in 1/s.
    """

    mass: float                     # kg
    temperature: float              # K
    collision_frequency: float      # 1/s
    number_density: float | None = None  # 1/m^3
    spin: float = 0.5
    gradient: float = 0.0           # 1/s

    def __post_init__(self) -> None:
        if self.mass <= 0.0 or self.temperature <= 0.0:
            raise ValueError("mass and temperature must be positive")
        if self.collision_frequency <= 0.0:
            raise ValueError("collision frequency must be positive")
        if self.number_density is not None and self.number_density <= 0.0:
            raise ValueError("number density must be positive")

    @property
    def beta(self) -> float:
        """Inverse thermal-speed-squared m/(2 k T), in s^2/m^2."""
        return self.mass / (2.0 * BOLTZMANN * self.temperature)


@dataclass(frozen=True)
class DimensionalResult:
    """Physical outputs of the slip chain; u_sl = Kv * mfp * gradient."""

    viscosity: float       # Pa s
    mean_free_path: float  # m
    Kv: float              # dimensionless
    u_sl: float            # m/s


def number_density_from_state(params: GasParameters,
                              ctx: KernelContext) -> float:
    """N = 2 pi (2s+1) m^3 l0(alpha) / ((2 pi hbar)^3 beta^(3/2)), in 1/m^3."""
    return (2.0 * math.pi * (2.0 * params.spin + 1.0) * params.mass**3
            * ctx.l0 / ((2.0 * math.pi * HBAR)**3 * params.beta**1.5))


def _mass_density(params: GasParameters) -> float:
    if params.number_density is not None:
        return params.number_density * params.mass
    raise MissingDensity(
        "number_density not set; derive it with number_density_from_state")


def viscosity(params: GasParameters, ctx: KernelContext) -> float:
    """Dynamic viscosity eta = (rho / (nu beta)) * l2/l0, in Pa s."""
    rho = _mass_density(params)
    return rho / (params.collision_frequency * params.beta) * (ctx.l2 / ctx.l0)


def mean_free_path(params: GasParameters, ctx: KernelContext) -> float:
    """Mean free path l = eta rho^-1 sqrt(pi beta), in m."""
    eta = viscosity(params, ctx)
    rho = _mass_density(params)
    return eta / rho * math.sqrt(math.pi * params.beta)


def slip_coefficient(alpha: float, q: float, order: int = 3,
                     series: NeumannSeries | None = None,
                     ctx: KernelContext | None = None) -> float:
    """Isothermal slip coefficient K_v = C(q, alpha) l0 / (sqrt(pi) l2)."""
    if series is not None:
        ctx = series.ctx
    else:
        ctx = ctx or make_context(alpha)
    c_factor = slip_velocity(alpha, q, order, series).C
    return c_factor * ctx.l0 / (math.sqrt(math.pi) * ctx.l2)


def dimensional_slip(params: GasParameters, alpha: float, q: float,
                     order: int = 3,
                     series: NeumannSeries | None = None) -> DimensionalResult:
    """Full dimensional chain for one gas state and wall."""
    ctx = series.ctx if series is not None else make_context(alpha)
    eta = viscosity(params, ctx)
    mfp = mean_free_path(params, ctx)
    k_v = slip_coefficient(alpha, q, order, series, ctx)
    return DimensionalResult(viscosity=eta, mean_free_path=mfp, Kv=k_v,
                             u_sl=k_v * mfp * params.gradient)
