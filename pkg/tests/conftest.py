from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ternary_waring.forms import Form, num_monomials  # noqa: E402
from ternary_waring.linalg import as_exact, rng_stream  # noqa: E402


def random_form(nvars: int, degree: int, seed, height: int = 9) -> Form:
    rng = rng_stream(0, "tests", nvars, degree, *np.atleast_1d(seed).tolist())
    while True:
        c = rng.integers(-height, height + 1, size=num_monomials(nvars, degree))
        if np.any(c):
            return Form(nvars, degree, as_exact([Fraction(int(a)) for a in c]))


@pytest.fixture
def xyz():
    from ternary_waring.forms import variables
    return variables(3)


@pytest.fixture
def XYZ():
    from ternary_waring.forms import variables
    return variables(3, dual=True)
