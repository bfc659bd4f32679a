"""Pure-numpy implementations of the hot table-assembly kernels."""

from __future__ import annotations

import numpy as np


def log1p_exp(z: np.ndarray) -> np.ndarray:
    """Numerically stable ln(1 + e^z) for any real z."""
    return np.logaddexp(0.0, z)


def moment_tables(k: np.ndarray, t: np.ndarray, g: np.ndarray,
                  n_max: int = 4) -> np.ndarray:
    """Tables T_n(k_i) = 2 sum_m g_m t_m^n / (1 + k_i^2 t_m^2), n = 0..n_max.

    ``g`` holds quadrature weights already multiplied by kernel values.
    Returns shape ``(n_max + 1, len(k))``.
    """
    lorentz = 1.0 / (1.0 + np.outer(k * k, t * t))
    powers = np.stack([g * t**n for n in range(n_max + 1)])
    return 2.0 * powers @ lorentz.T


def fifth_moment_matrix(k: np.ndarray, t: np.ndarray,
                        g: np.ndarray) -> np.ndarray:
    """Matrix J5[i, j] = 2 sum_m g_m t_m^5 / ((1+k_i^2 t_m^2)(1+k_j^2 t_m^2))."""
    lorentz = 1.0 / (1.0 + np.outer(k * k, t * t))
    return 2.0 * (lorentz * (g * t**5)) @ lorentz.T
