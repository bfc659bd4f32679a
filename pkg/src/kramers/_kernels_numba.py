"""Numba-compiled implementations of the hot table-assembly kernels.

Importing this module requires numba; :mod:`kramers.backend` falls back to
the numpy twins when it is unavailable or deselected.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True)
def log1p_exp(z):
    out = np.empty_like(z)
    for i in range(z.size):
        out.flat[i] = np.logaddexp(0.0, z.flat[i])
    return out


@njit(cache=True, parallel=True)
def moment_tables(k, t, g, n_max=4):
    m_nodes = k.shape[0]
    q_nodes = t.shape[0]
    out = np.empty((n_max + 1, m_nodes))
    for i in prange(m_nodes):
        kk = k[i] * k[i]
        acc = np.zeros(n_max + 1)
        for m in range(q_nodes):
            w = g[m] / (1.0 + kk * t[m] * t[m])
            for n in range(n_max + 1):
                acc[n] += w
                w *= t[m]
        for n in range(n_max + 1):
            out[n, i] = 2.0 * acc[n]
    return out


@njit(cache=True, parallel=True)
def fifth_moment_matrix(k, t, g):
    m_nodes = k.shape[0]
    q_nodes = t.shape[0]
    lorentz = np.empty((m_nodes, q_nodes))
    for i in prange(m_nodes):
        kk = k[i] * k[i]
        for m in range(q_nodes):
            lorentz[i, m] = 1.0 / (1.0 + kk * t[m] * t[m])
    gt5 = g * t**5
    out = np.empty((m_nodes, m_nodes))
    for i in prange(m_nodes):
        for j in range(i + 1):
            s = 0.0
            for m in range(q_nodes):
                s += gt5[m] * lorentz[i, m] * lorentz[j, m]
            out[i, j] = 2.0 * s
            out[j, i] = 2.0 * s
    return out
