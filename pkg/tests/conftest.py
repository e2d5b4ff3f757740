import itertools
import os
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from expokit.order import FinPoset, FinSpace

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_file(name):
    return os.path.join(DATA, name)


@st.composite
def posets(draw, max_size=5, min_size=0):
    """Random posets on range(n): a random subset of i<j pairs, closed."""
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(n)))
    return FinPoset.from_pairs(range(n), [(perm[i], perm[j]) for i, j in chosen])


@st.composite
def spaces(draw, max_size=5):
    return FinSpace(draw(posets(max_size)))


@pytest.fixture
def rng():
    return random.Random(1234)
