"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

import numbers
import os

from .errors import ZeroForm
from .forms import Form
from .io import form_from_json

SEED_ENV = "WARING_SEED"


def check_form(f, nvars: int | None = None, min_degree: int = 1,
               allow_zero: bool = False, dual: bool = False) -> Form:
    """Coerce ``f`` (a :class:`Form` or a FormFile dict) and check its shape."""
    if isinstance(f, dict):
        f = form_from_json(f)
    if not isinstance(f, Form):
        raise TypeError(f"expected a Form or a FormFile dict, got {type(f).__name__}")
    if f.dual != dual:
        raise TypeError("expected a dual form" if dual else "expected a primal form")
    if nvars is not None and f.nvars != nvars:
        raise ValueError(f"expected a form in {nvars} variables, got {f.nvars}")
    if f.degree < min_degree:
        raise ValueError(f"degree must be at least {min_degree}, got {f.degree}")
    if not allow_zero and f.is_zero():
        raise ZeroForm("the zero form has no decomposition")
    return f


def check_seed(seed=None) -> int:
    """An explicit seed, else ``$WARING_SEED``, else 0."""
    if seed is None:
        env = os.environ.get(SEED_ENV)
        if env is None or env.strip() == "":
            return 0
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    return int(seed)


def check_tolerance(tol, name: str = "tol") -> float:
    tol = float(tol)
    if not tol > 0:
        raise ValueError(f"{name} must be positive")
    return tol


def check_positive_int(n, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise ValueError(f"{name} must be a positive integer")
    return int(n)
