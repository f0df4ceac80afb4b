"""Hypothesis strategies: a seed plus a dimension, turned into numpy samples."""

from hypothesis import strategies as st

from complementarity.linalg import RngSpec

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small_dims = st.integers(min_value=2, max_value=5)
primes = st.sampled_from([2, 3, 5])


def gen(seed: int, stream: str = "hypothesis"):
    return RngSpec(seed, stream).generator()
