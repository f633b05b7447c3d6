import random

import pytest
from hypothesis import strategies as st

from qschur.laurent import LaurentPoly


laurent_polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)


@pytest.fixture
def rng():
    return random.Random(20240611)
