import numpy as np
import pytest

from ditomo.moment import build_sequence_set, build_structure


@pytest.fixture(scope="session")
def structure_125():
    """Three-party moment structure over the 125-word set (shared: ~7.5k
    equality classes, cheap to build once)."""
    return build_structure(build_sequence_set("local2"))


@pytest.fixture(scope="session")
def structure_216():
    return build_structure(build_sequence_set("local2plus"))


@pytest.fixture()
def rng():
    return np.random.default_rng(20260823)
