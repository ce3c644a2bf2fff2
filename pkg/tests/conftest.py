import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from polyprod.complexes import SimplicialComplex  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def complexes(draw, min_m=1, max_m=4, allow_void=False):
    """Downward closure of a drawn list of subsets of [m]."""
    m = draw(st.integers(min_m, max_m))
    if allow_void and draw(st.booleans()) and draw(st.booleans()):
        return SimplicialComplex.void_complex(m)
    masks = draw(st.lists(st.integers(0, (1 << m) - 1), max_size=6))
    return SimplicialComplex.from_masks(m, masks)


@st.composite
def complexes_on(draw, m):
    masks = draw(st.lists(st.integers(0, (1 << m) - 1), max_size=6))
    return SimplicialComplex.from_masks(m, masks)


@st.composite
def proper_complexes(draw, min_n=1, max_n=3):
    """Neither void nor the full simplex."""
    n = draw(st.integers(min_n, max_n))
    top = (1 << n) - 1
    masks = draw(st.lists(st.integers(0, top - 1), max_size=5))
    return SimplicialComplex.from_masks(n, masks)


@st.composite
def index_pair(draw, m):
    """A disjoint pair (σ, ω) of subsets of [m] as bitmasks."""
    labels = draw(st.lists(st.sampled_from("sol"), min_size=m, max_size=m))
    sigma = sum(1 << k for k, c in enumerate(labels) if c == "s")
    omega = sum(1 << k for k, c in enumerate(labels) if c == "o")
    return sigma, omega
