from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ternary_waring.errors import Inconsistent
from ternary_waring.forms import Form, catalecticant
from ternary_waring.linalg import (as_exact, kernel, matrix_rank, primitive_integer,
                                   projectively_equal, promote, random_rational_vector,
                                   rng_stream, solve)


def test_identity_has_trivial_kernel():
    r = kernel(as_exact(np.eye(3, dtype=int)))
    assert r.rank == 3 and r.nullity == 0 and r.threshold_used == 0


def test_zero_matrix_full_kernel():
    r = kernel(as_exact(np.zeros((2, 4), dtype=int)))
    assert r.rank == 0 and r.nullity == 4


def test_catalecticant_of_square_has_rank_one():
    f = Form(2, 2, as_exact([1, 2, 1]))
    assert matrix_rank(catalecticant(f, 1).matrix) == 1


def test_solve_identity():
    x, res = solve(as_exact(np.eye(2, dtype=int)), as_exact([1, 2]))
    assert list(x) == [1, 2] and res == 0


def test_solve_inconsistent_exact():
    with pytest.raises(Inconsistent):
        solve(as_exact([[1], [1]]), as_exact([1, 2]))


def test_solve_float_reports_residual():
    x, res = solve(np.array([[1.0], [1.0]]), np.array([1.0, 2.0]))
    assert abs(x[0] - 1.5) < 1e-12 and res == pytest.approx(np.sqrt(0.5))


def test_vandermonde_interpolation_weights():
    # xy = 1/4 (x+y)^2 - 1/4 (x-y)^2: columns are the squares of the two nodes
    V = as_exact([[1, 1], [2, -2], [1, 1]])
    w, res = solve(V, as_exact([0, 1, 0]))
    assert list(w) == [Fraction(1, 4), Fraction(-1, 4)] and res == 0


matrices = st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1,
                    max_size=5)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_exact_kernel_matches_sympy(rows):
    M = as_exact(rows)
    r = kernel(M)
    ref = sp.Matrix(rows)
    assert r.rank == ref.rank()
    assert r.rank + r.nullity == 4
    for k in r.kernel_basis:
        assert all(v == 0 for v in M.dot(k))


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_float_kernel_residual_bound(rows):
    M = np.array(rows, dtype=complex)
    r = kernel(M)
    for k in r.kernel_basis:
        assert np.linalg.norm(k) == pytest.approx(1.0)
        assert np.linalg.norm(M @ k) <= 10 * max(r.threshold_used, 1e-300) * max(
            np.linalg.norm(M, 2), 1.0) + 1e-12


def test_kernel_is_deterministic():
    M = np.random.default_rng(0).normal(size=(3, 5))
    a, b = kernel(M), kernel(M.copy())
    assert a.rank == b.rank
    assert all(np.array_equal(u, v) for u, v in zip(a.kernel_basis, b.kernel_basis))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(max_denominator=10 ** 6).filter(lambda q: abs(q) <= 10 ** 6),
                min_size=2, max_size=2))
def test_promotion_commutes_with_arithmetic(pair):
    a, b = pair
    for exact, flt in ((a * b, promote(as_exact([a]))[0] * promote(as_exact([b]))[0]),
                       (a + b, promote(as_exact([a]))[0] + promote(as_exact([b]))[0])):
        assert abs(complex(float(exact)) - flt) <= 1e-12 * max(1.0, abs(float(exact)))


def test_random_vectors_reproducible():
    a = random_rational_vector(3, rng_stream(5, "x"))
    b = random_rational_vector(3, rng_stream(5, "x"))
    assert list(a) == list(b)
    assert len(random_rational_vector(1, rng_stream(5, "y"))) == 1


def test_random_vectors_rarely_collide():
    rng = rng_stream(11, "collide")
    draws = [tuple(random_rational_vector(3, rng)) for _ in range(10_000)]
    collisions = len(draws) - len(set(draws))
    assert collisions / len(draws) < 0.01


def test_random_vector_height_and_n():
    with pytest.raises(ValueError):
        random_rational_vector(0, rng_stream(0))
    v = random_rational_vector(50, rng_stream(0), height=3, den_height=4)
    assert all(abs(q.numerator) <= 3 and 1 <= q.denominator <= 4 for q in v)


def test_primitive_integer_and_projective_equality():
    v = primitive_integer(as_exact([Fraction(2, 3), Fraction(-4, 3), 0]))
    assert list(v) == [1, -2, 0]
    assert projectively_equal([1, 2, 3], [-2, -4, -6])
    assert not projectively_equal([1, 2, 3], [1, 2, 4])
