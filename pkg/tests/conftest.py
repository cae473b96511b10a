import numpy as np
from hypothesis import strategies as st

from bracedmzi.fock import complete_basis, make_state
from bracedmzi.verification import random_unitary


@st.composite
def small_states(draw, mode_count=None, max_photons=3, normalized=False):
    """Random sparse states over <= 4 modes and <= 3 photons."""
    n = draw(st.integers(1, 4)) if mode_count is None else mode_count
    kets = [k for p in range(max_photons + 1) for k in complete_basis(n, p)]
    chosen = draw(st.lists(st.sampled_from(kets), min_size=1, max_size=6, unique=True))
    parts = st.floats(-1, 1, allow_nan=False)
    amps = [complex(draw(parts), draw(parts)) for _ in chosen]
    if all(abs(a) < 1e-3 for a in amps):
        amps[0] = 1.0
    state = make_state(n, zip(chosen, amps))
    return state.normalized() if normalized else state


@st.composite
def unitaries(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_unitary(n, np.random.default_rng(seed))
