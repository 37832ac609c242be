import numpy as np
import pytest

import bobylev as bl
from bobylev.selfsim import construct_profile

SING = bl.KernelSpec("inverse_power_model", s=0.25, b0=1.0)
CONST = bl.KernelSpec("constant_test", b0=1.0)


@pytest.fixture(scope="session")
def profile_15():
    """Self-similar profile at (s, alpha, K) = (0.25, 1.5, 1); shared (slow)."""
    return construct_profile(SING, 1.5, 1.0, tol=5e-7, n=1024, horizon=0.5)


@pytest.fixture(scope="session")
def profile_19():
    """Profile at alpha = 1.9, b0 = 0.3 used by the H^N experiments."""
    kernel = bl.KernelSpec("inverse_power_model", s=0.25, b0=0.3)
    return construct_profile(kernel, 1.9, 1.0, tol=5e-7, n=1024, horizon=8.0)


@pytest.fixture(scope="session")
def scenario_dir():
    import os
    return os.path.join(os.path.dirname(__file__), "..", "scenarios")
