import os
import sys

import numpy as np
import pytest
from hypothesis import settings

# Add the project root directory to Python path
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.core.operators import make_hermitian, make_unitary  # noqa: E402
from src.utils.sampling import random_hermitian, random_unitary  # noqa: E402

# Closed forms are fast but numpy is not free; keep examples modest and reproducible
settings.register_profile("halfline", derandomize=True, deadline=None, max_examples=60)
settings.register_profile("thorough", derandomize=True, deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "halfline"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def scalar_operator():
    """dim 1, A = 0: the hand-computable case."""
    return make_hermitian([[0.0]])


@pytest.fixture
def random_pair(rng):
    """A random dim-4 Hermitian A and unitary W."""
    return make_hermitian(random_hermitian(rng, 4)), make_unitary(random_unitary(rng, 4))
