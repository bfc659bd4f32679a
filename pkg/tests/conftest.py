import numpy as np
import pytest

from kramers.exact import exact_slip_diffuse
from kramers.kernel import make_context
from kramers.neumann import build_series


@pytest.fixture(scope="session")
def ctx_m30():
    return make_context(-30.0)


@pytest.fixture(scope="session")
def series_m30(ctx_m30):
    return build_series(-30.0, 3, ctx=ctx_m30)


@pytest.fixture(scope="session")
def v1_m30(ctx_m30):
    return exact_slip_diffuse(-30.0, ctx=ctx_m30)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
