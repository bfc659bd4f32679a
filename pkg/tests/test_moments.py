import math

import numpy as np
import pytest

from kramers.errors import DomainError
from kramers.kernel import make_context
from kramers.moments import (KGrid, MomentCache, coupling_J, coupling_Jn,
                             dispersion_L, kernel_S, moment_T)

from oracles import maxwell_T0, maxwell_T1, polylog_moment, quad_moment_T

SQRT_PI = math.sqrt(math.pi)

ALPHAS = [-30.0, -5.0, 0.0, 2.0]


@pytest.fixture(scope="module", params=ALPHAS)
def ctx(request):
    return make_context(request.param)


@pytest.fixture(scope="module")
def cache(ctx):
    return MomentCache(ctx)


def test_moment_closed_values_at_zero(ctx_m30):
    assert moment_T(0, 0.0, ctx_m30) == 1.0
    assert moment_T(1, 0.0, ctx_m30) == pytest.approx(1.0 / SQRT_PI, rel=1e-11)
    assert moment_T(2, 0.0, ctx_m30) == pytest.approx(0.5, rel=1e-11)


def test_moment_against_scipy_quad(ctx):
    for n, k in [(0, 0.5), (1, 1.0), (2, 2.0), (3, 0.2), (4, 5.0)]:
        oracle = quad_moment_T(n, k, ctx.alpha, ctx.cutoff)
        assert moment_T(n, k, ctx) == pytest.approx(oracle, rel=1e-8)


def test_moment_maxwell_closed_forms(ctx_m30):
    for k in (0.5, 1.0, 3.0):
        assert moment_T(0, k, ctx_m30) == pytest.approx(maxwell_T0(k), rel=1e-9)
        assert moment_T(1, k, ctx_m30) == pytest.approx(maxwell_T1(k), rel=1e-9)


def test_moment_taylor_branch_matches_quadrature(ctx_m30):
    # below 1e-3 the quadratic Taylor form takes over; compare to the
    # explicit integrand evaluated by an independent quadrature
    k = 8e-4
    for n in (1, 2):
        oracle = quad_moment_T(n, k, -30.0, ctx_m30.cutoff)
        assert moment_T(n, k, ctx_m30) == pytest.approx(oracle, rel=1e-10)


def test_moment_domain_errors(ctx_m30):
    with pytest.raises(DomainError):
        moment_T(7, 1.0, ctx_m30)
    with pytest.raises(DomainError):
        moment_T(0, -1.0, ctx_m30)


def test_dispersion_values(ctx_m30):
    assert dispersion_L(0.0, ctx_m30) == 0.0
    val = dispersion_L(100.0, ctx_m30)
    assert 0.99 < val < 1.0
    assert val == pytest.approx(1.0 - moment_T(0, 100.0, ctx_m30), abs=1e-9)
    assert dispersion_L(1.0, ctx_m30) == pytest.approx(
        1.0 - moment_T(0, 1.0, ctx_m30), abs=1e-9)


def test_coupling_J_reduces_to_T1(ctx):
    for k in (0.0, 1.0, 5.0):
        assert coupling_J(k, 0.0, ctx) == pytest.approx(
            moment_T(1, k, ctx), rel=1e-10)
    assert coupling_J(0.0, 0.0, ctx) == pytest.approx(ctx.l1 / ctx.l0,
                                                      rel=1e-10)


def test_coupling_symmetry(ctx_m30):
    assert coupling_J(2.0, 3.0, ctx_m30) == pytest.approx(
        coupling_J(3.0, 2.0, ctx_m30), abs=1e-12)
    assert coupling_Jn(5, 1.0, 2.0, ctx_m30) == pytest.approx(
        coupling_Jn(5, 2.0, 1.0, ctx_m30), abs=1e-12)


def test_coupling_Jn_reductions(ctx_m30):
    assert coupling_Jn(3, 1.3, 0.0, ctx_m30) == pytest.approx(
        moment_T(3, 1.3, ctx_m30), rel=1e-10)
    # J_5(0,0) = 2 int K t^5 dt against scipy quad
    from scipy.integrate import quad
    l0 = polylog_moment(0, -30.0)
    f = lambda t: np.logaddexp(0.0, -30.0 - t * t) / (2.0 * l0) * t**5
    oracle, _ = quad(f, 0.0, ctx_m30.cutoff, epsabs=1e-18, epsrel=1e-12)
    assert coupling_Jn(5, 0.0, 0.0, ctx_m30) == pytest.approx(2.0 * oracle,
                                                              rel=1e-9)
    with pytest.raises(DomainError):
        coupling_Jn(4, 1.0, 1.0, ctx_m30)


def test_kernel_S_vanishes_at_zero_second_argument(ctx_m30):
    for k in (0.0, 0.7, 4.0):
        assert kernel_S(k, 0.0, ctx_m30) == 0.0


def test_kernel_S_identity(ctx):
    # J(k,k1) - T1(k)T1(k1)/T1(0) = k^2 S(k,k1)
    k, k1 = 0.7, 1.3
    t1_zero = ctx.l1 / ctx.l0
    lhs = (coupling_J(k, k1, ctx)
           - moment_T(1, k, ctx) * moment_T(1, k1, ctx) / t1_zero)
    assert lhs == pytest.approx(k * k * kernel_S(k, k1, ctx), abs=1e-9)


def test_kernel_S_cross_symmetry(ctx_m30, rng):
    for _ in range(4):
        k, k1 = rng.uniform(0.1, 3.0, size=2)
        assert k * k * kernel_S(k, k1, ctx_m30) == pytest.approx(
            k1 * k1 * kernel_S(k1, k, ctx_m30), abs=1e-10)


def test_partial_fraction_sum_rule(ctx, rng):
    t1_zero = ctx.l1 / ctx.l0
    for _ in range(3):
        k, k1 = rng.uniform(0.05, 3.0, size=2)
        rhs = (t1_zero - k * k * moment_T(3, k, ctx)
               - k1 * k1 * moment_T(3, k1, ctx)
               + (k * k1)**2 * coupling_Jn(5, k, k1, ctx))
        assert coupling_J(k, k1, ctx) == pytest.approx(rhs, abs=1e-9)


def test_moment_recurrences(ctx):
    for k in (0.3, 1.0, 4.0):
        assert moment_T(1, k, ctx) == pytest.approx(
            ctx.l1 / ctx.l0 - k * k * moment_T(3, k, ctx), abs=1e-9)
        assert moment_T(2, k, ctx) == pytest.approx(
            ctx.l2 / ctx.l0 - k * k * moment_T(4, k, ctx), abs=1e-9)


def test_cache_tables_match_adaptive_route(cache):
    idx = [0, len(cache.grid.nodes) // 2, -1]
    for n in range(5):
        for i in idx:
            k = cache.grid.nodes[i]
            assert cache.T[n][i] == pytest.approx(
                moment_T(n, float(k), cache.ctx), rel=1e-8)


def test_cache_tables_positive_decreasing(cache):
    for n in range(5):
        assert np.all(cache.T[n] > 0.0)
        assert np.all(np.diff(cache.T[n]) < 0.0)


def test_cache_consistency_identity(cache):
    k = cache.grid.nodes
    lhs = 1.0 - cache.T[0]
    rhs = k * k * cache.T[2]
    assert np.all(np.abs(lhs - rhs) < 1e-9 * np.maximum(1.0, rhs))


def test_cache_identity_residuals(cache):
    res = cache.identity_residuals()
    assert max(res.values()) < 1e-9


def test_cache_interpolation(cache):
    interp = cache.interp_T(2)
    k = 0.5 * (cache.grid.nodes[10] + cache.grid.nodes[11])
    assert interp(k) == pytest.approx(moment_T(2, float(k), cache.ctx),
                                      rel=1e-6)


def test_grid_invariants_and_env_override(monkeypatch):
    grid = KGrid.build()
    assert np.all(grid.nodes > 0.0)
    assert np.all(np.diff(grid.nodes) > 0.0)
    assert np.all(grid.weights > 0.0)
    assert grid.weights.sum() == pytest.approx(grid.k_max, rel=1e-12)

    monkeypatch.setenv("KRAMERS_GRID_NODES", "240")
    small = KGrid.build()
    assert abs(small.size - 240) <= 60
    assert small.size < grid.size

    with pytest.raises(ValueError):
        KGrid(nodes=np.array([1.0, 0.5]), weights=np.array([1.0, 1.0]),
              k_max=10.0)
