"""Independent reference computations for the test suite.

Everything here is deliberately decoupled from the package internals:
series summation via mpmath polylogarithms, closed Gaussian moments, scipy
special functions and brute-force quadrature.
"""

import math

import mpmath
import numpy as np
from scipy.integrate import quad

SQRT_PI = math.sqrt(math.pi)

# log-Fermi moments as polylogarithms: l_n(alpha) = -c_n Li_{s_n}(-e^alpha)
_POLYLOG_S = (1.5, 2.0, 2.5)
_POLYLOG_C = (SQRT_PI / 2.0, 0.5, SQRT_PI / 4.0)


def polylog_moment(n: int, alpha: float) -> float:
    """l_n(alpha) summed through the polylogarithm (mpmath continuation).

    Li_s is real on the negative axis; mpmath's continuation leaves
    noise-level imaginary parts that are discarded.
    """
    value = mpmath.polylog(_POLYLOG_S[n], -mpmath.exp(alpha))
    return float(-_POLYLOG_C[n] * mpmath.re(value))


def alternating_series_moment(n: int, alpha: float, terms: int = 64) -> float:
    """Alternating series for l_n, Euler-accelerated; needs alpha <= 0.

    Iterated averaging of the trailing partial sums removes the slow
    1/m^s alternating tail (essential at alpha = 0, harmless when the
    series is already geometric).
    """
    if alpha > 0.0:
        raise ValueError("series diverges for alpha > 0; use polylog_moment")
    m = np.arange(1, terms + 1, dtype=float)
    partial = np.cumsum(-(-np.exp(alpha))**m / m**_POLYLOG_S[n])
    tail = partial[-min(40, terms):]
    while tail.size > 1:
        tail = 0.5 * (tail[1:] + tail[:-1])
    return float(tail[0] * _POLYLOG_C[n])


def brute_force_pv(numerator, tau: float, half_width: float,
                   n_nodes: int = 200000) -> float:
    """Principal value by midpoint rule on a tau-symmetric window.

    With an even node count the midpoints straddle the pole in symmetric
    pairs and the singular parts cancel exactly; the density is far beyond
    what the adaptive engine uses.
    """
    h = 2.0 * half_width / n_nodes
    t = tau - half_width + (np.arange(n_nodes) + 0.5) * h
    return float(np.sum(numerator(t) / (t - tau)) * h)


def quad_moment_T(n: int, k: float, alpha: float, cutoff: float) -> float:
    """T_n(k) by scipy.integrate.quad on the explicit integrand."""
    l0 = polylog_moment(0, alpha)

    def f(t):
        return (np.logaddexp(0.0, alpha - t * t) / (2.0 * l0)
                * t**n / (1.0 + (k * t)**2))

    val, _ = quad(f, 0.0, cutoff, epsabs=1e-15, epsrel=1e-12, limit=400)
    return 2.0 * val


def maxwell_T0(k: float) -> float:
    """Closed Maxwell-limit T_0(k) = sqrt(pi) erfcx(1/k) / k."""
    from scipy.special import erfcx
    return SQRT_PI * erfcx(1.0 / k) / k


def maxwell_T1(k: float) -> float:
    """Closed Maxwell-limit T_1(k) = e^(1/k^2) E_1(1/k^2) / (sqrt(pi) k^2)."""
    x = 1.0 / (k * k)
    return float(mpmath.exp(x) * mpmath.expint(1, x)) / (SQRT_PI * k * k)


def maxwell_lambda(tau: float) -> float:
    """Dispersion real part 1 - 2 tau F(tau) with F the Dawson integral."""
    from scipy.special import dawsn
    return 1.0 - 2.0 * tau * dawsn(tau)


def degenerate_u0(alpha: float) -> float:
    """Slip coefficient ratio of the rescaled strong-degeneracy kernel.

    Brute-force moments of (3/4)(1 - mu^2) on [-1, 1] give
    T2/T1 = (1/5)/(3/8); the rescaling restores the sqrt(alpha) factor.
    """
    mu = np.linspace(0.0, 1.0, 200001)
    w = np.asarray(0.75 * (1.0 - mu * mu))
    t2 = 2.0 * np.trapezoid(w * mu * mu, mu)
    t1 = 2.0 * np.trapezoid(w * mu, mu)
    return math.sqrt(alpha) * t2 / t1
