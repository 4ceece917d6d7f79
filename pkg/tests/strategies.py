"""Shared hypothesis strategies."""
import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

# magnitudes below 1e-100 would underflow when squared inside norms
finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False).map(
    lambda v: 0.0 if abs(v) < 1e-100 else v
)


@st.composite
def matrices(draw, min_rows=2, max_rows=7, min_cols=2, max_cols=7):
    m = draw(st.integers(min_rows, max_rows))
    n = draw(st.integers(min_cols, max_cols))
    return draw(arrays(np.float64, (m, n), elements=finite))


@st.composite
def well_conditioned(draw, max_rows=8):
    """Tall matrix whose columns are comfortably independent."""
    m = draw(st.integers(2, max_rows))
    n = draw(st.integers(1, m))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, n)) + 3 * np.eye(m, n)


@st.composite
def vectors(draw, min_size=1, max_size=10):
    n = draw(st.integers(min_size, max_size))
    return draw(arrays(np.float64, n, elements=finite))
