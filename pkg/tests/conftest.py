"""Shared state generators.

Admissible states have f, g, q > 0, b < 0 and fb + gq >= 0.  We draw
f, g, q uniformly and then place b = -r*gq/f with r in (0.02, 0.98) so
the sum u + v = gq(1 - r) stays safely inside the open part of the
constraint while still exercising states close to both edges.
"""

import numpy as np
import pytest
from hypothesis import strategies as st

from twolayerfilm.core import ConservedState


def make_state(f, g, q, r):
    return ConservedState(f, -r * g * q / f, g, q)


def random_state(rng):
    return make_state(rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0),
                      rng.uniform(0.1, 5.0), rng.uniform(0.02, 0.98))


positive = st.floats(min_value=0.1, max_value=5.0,
                     allow_nan=False, allow_infinity=False)
ratio = st.floats(min_value=0.02, max_value=0.98,
                  allow_nan=False, allow_infinity=False)

admissible_states = st.builds(make_state, positive, positive, positive, ratio)


@pytest.fixture
def rng():
    return np.random.default_rng(815)
