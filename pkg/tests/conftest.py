import numpy as np
import pytest


def rel_close(x, y, rtol, atol=1e-15):
    """|x - y| within rtol of the larger magnitude, atol floor for near-zeros."""
    x, y = complex(x), complex(y)
    return abs(x - y) <= max(rtol * max(abs(x), abs(y)), atol)


def vec_rel_close(x, y, rtol, atol=1e-15):
    """Vector version: infinity-norm difference relative to the larger norm."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    scale = max(np.max(np.abs(x)), np.max(np.abs(y)), 0.0)
    return float(np.max(np.abs(x - y))) <= max(rtol * scale, atol)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
