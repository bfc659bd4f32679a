import math

import numpy as np
import pytest

from kramers.errors import DomainError
from kramers.kernel import (ALPHA_MAXWELL_SWITCH, degenerate_kernel, kernel,
                            log_fermi_moment, make_context, maxwell_kernel)
from kramers.quadrature import integrate

from oracles import alternating_series_moment, polylog_moment

SQRT_PI = math.sqrt(math.pi)


def test_l1_at_zero_is_pi_squared_over_24():
    assert log_fermi_moment(1, 0.0) == pytest.approx(math.pi**2 / 24.0,
                                                     abs=1e-12)


def test_l0_at_zero_closed_form():
    # (sqrt(pi)/2)(1 - 2^(-1/2)) zeta(3/2) through the polylog oracle
    assert log_fermi_moment(0, 0.0) == pytest.approx(0.678093895153101,
                                                     abs=1e-10)
    assert log_fermi_moment(0, 0.0) == pytest.approx(polylog_moment(0, 0.0),
                                                     abs=1e-11)


def test_l2_deep_maxwell_leading_term():
    # alpha = -20: two series terms already at 1e-9 relative
    oracle = alternating_series_moment(2, -20.0, terms=2)
    assert log_fermi_moment(2, -20.0) == pytest.approx(oracle, rel=1e-9)
    assert log_fermi_moment(2, -20.0) == pytest.approx(
        SQRT_PI / 4.0 * math.exp(-20.0), rel=1e-8)


@pytest.mark.parametrize("alpha", [-3.0, -1.0, 0.0, 1.0, 3.0])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_polylog_oracle(n, alpha):
    assert log_fermi_moment(n, alpha) == pytest.approx(
        polylog_moment(n, alpha), abs=1e-9, rel=1e-11)


def test_raw_alternating_series_agrees_where_it_converges():
    for alpha in (-3.0, -1.0, 0.0):
        for n in (0, 1, 2):
            assert alternating_series_moment(n, alpha) == pytest.approx(
                log_fermi_moment(n, alpha), abs=1e-10)


def test_moments_increase_with_alpha():
    grid = np.arange(-6.0, 6.5, 1.0)
    for n in (0, 1, 2):
        vals = [log_fermi_moment(n, a) for a in grid]
        assert np.all(np.diff(vals) > 0.0)


def test_moment_domain_errors():
    with pytest.raises(DomainError):
        log_fermi_moment(3, 0.0)
    with pytest.raises(DomainError):
        log_fermi_moment(0, math.nan)
    with pytest.raises(DomainError):
        make_context(501.0)
    with pytest.raises(DomainError):
        make_context(math.inf)


@pytest.mark.parametrize("alpha", [-5.0, 0.0, 5.0])
def test_kernel_normalization(alpha):
    ctx = make_context(alpha)
    val = integrate(ctx.kernel_values, -ctx.cutoff, ctx.cutoff)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_kernel_even_and_decreasing(ctx_m30):
    mu = np.linspace(0.0, 4.0, 41)
    vals = np.asarray(kernel(mu, ctx_m30))
    assert np.array_equal(vals, np.asarray(kernel(-mu, ctx_m30)))
    assert np.all(np.diff(vals) < 0.0)
    assert np.all(vals > 0.0)


def test_kernel_matches_maxwell_ratio_at_minus_20():
    ctx = make_context(-20.0)
    ratio = kernel(0.0, ctx) / maxwell_kernel(0.0)
    assert ratio == pytest.approx(1.0, abs=1e-8)
    assert maxwell_kernel(0.0) == pytest.approx(0.5641895835, abs=1e-9)


def test_kernel_maxwell_limit_proxy(ctx_m30):
    mu = np.linspace(0.0, 4.0, 81)
    dev = np.abs(np.asarray(kernel(mu, ctx_m30)) - maxwell_kernel(mu))
    assert dev.max() < 1e-12


def test_context_below_switch_uses_analytic_maxwell():
    ctx = make_context(ALPHA_MAXWELL_SWITCH - 10.0)
    assert ctx.maxwell_limit
    mu = np.linspace(0.0, 3.0, 7)
    assert np.array_equal(np.asarray(kernel(mu, ctx)), maxwell_kernel(mu))
    assert ctx.l2 / ctx.l0 == pytest.approx(0.5, abs=1e-15)


def test_degenerate_kernel_values_and_normalization():
    assert degenerate_kernel(0.0) == pytest.approx(0.75)
    assert degenerate_kernel(1.0) == 0.0
    assert degenerate_kernel(-1.0) == 0.0
    val = integrate(degenerate_kernel, -1.0, 1.0)
    assert val == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(DomainError):
        degenerate_kernel(1.2)


def test_degenerate_limit_shape_at_alpha_400():
    ctx = make_context(400.0)
    mu = np.linspace(0.0, 0.95, 30)
    rescaled = math.sqrt(400.0) * np.asarray(ctx.kernel_values(
        math.sqrt(400.0) * mu))
    target = degenerate_kernel(mu)
    assert np.max(np.abs(rescaled - target) / target) < 0.02
