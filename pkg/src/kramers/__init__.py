"""Isothermal slip of a quantum Fermi gas over a flat wall.

Solves the half-space slip problem for the kinetic equation with the
normalized log-Fermi kernel and specular-diffuse wall scattering: slip
coefficients by successive approximation, Knudsen-layer velocity profiles,
distribution-function corrections, the exact diffuse-wall value from the
dispersion-phase integral, and conversion to physical units.
"""

from .dimensional import (DimensionalResult, GasParameters, dimensional_slip,
                          mean_free_path, slip_coefficient, viscosity)
from .exact import exact_slip_diffuse, exact_wall_velocity
from .kernel import KernelContext, kernel, log_fermi_moment, make_context
from .moments import KGrid, MomentCache
from .neumann import (NeumannSeries, SlipSolution, build_series,
                      inverse_kramers, slip_velocity)
from .profile import (distribution_correction, full_profile,
                      velocity_correction, wall_velocity)

__version__ = "0.1.0"

__all__ = [
    "KernelContext", "make_context", "kernel", "log_fermi_moment",
    "KGrid", "MomentCache",
    "NeumannSeries", "SlipSolution", "build_series", "slip_velocity",
    "inverse_kramers",
    "velocity_correction", "wall_velocity", "full_profile",
    "distribution_correction",
    "exact_slip_diffuse", "exact_wall_velocity",
    "GasParameters", "DimensionalResult", "viscosity", "mean_free_path",
    "slip_coefficient", "dimensional_slip",
    "__version__",
]
