from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from conftest import random_form
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import (X as SX, Y as SY, binary_length_sympy, polyroots_projective,
                      squarefree_sympy, to_sympy)
from ternary_waring.binary import (apolar_component, apolar_generators, binary_length,
                                   decompose_from_apolar, is_squarefree, roots,
                                   sylvester_min_decompose)
from ternary_waring.errors import PreconditionViolated, ZeroForm
from ternary_waring.forms import Form, apolar_apply, power, variables
from ternary_waring.linalg import as_exact, matrix_rank

x, y = variables(2)
X, Y = variables(2, dual=True)


def _span_rank(forms):
    return matrix_rank(np.stack([f.coeffs for f in forms]).T)


@pytest.mark.parametrize("d", range(1, 8))
def test_length_of_power(d):
    assert binary_length(x ** d) == 1


def test_length_examples():
    assert binary_length(x * y ** 3) == 2
    with pytest.raises(ZeroForm):
        binary_length(Form.zero(2, 3))


@pytest.mark.parametrize("seed", range(4))
def test_random_sextic_has_length_four(seed):
    f = random_form(2, 6, ("sextic", seed), height=99)
    assert binary_length(f) == binary_length_sympy(to_sympy(f), 6) == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.lists(st.integers(-4, 4), min_size=8, max_size=8))
def test_length_range_and_oracle(d, cs):
    f = Form(2, d, as_exact(cs[: d + 1]))
    if f.is_zero():
        return
    ell = binary_length(f)
    assert 1 <= ell <= d // 2 + 1
    assert ell == binary_length_sympy(to_sympy(f), d)


def test_apolar_component_examples():
    comp = apolar_component(x ** 2 + y ** 2, 2)
    assert _span_rank(comp + [X * Y]) == _span_rank(comp)
    # X^2 * S^2 plus <Y^4>: every quartic operator except X Y^3
    H = apolar_component(x * y ** 3, 4)
    assert len(H) == 4
    expected = [X ** 2 * X ** 2, X ** 2 * X * Y, X ** 2 * Y ** 2, Y ** 4]
    assert _span_rank(H + expected) == 4
    assert apolar_component(x * y ** 3, 0) == []


def test_generators_examples():
    g = apolar_generators(x * y ** 3)
    assert (g.ell, g.ell_prime) == (2, 4)
    assert _span_rank([g.gen_low, X ** 2]) == 1
    assert _span_rank([g.gen_high, Y ** 4]) == 1
    for d in range(1, 6):
        g = apolar_generators(x ** d)
        assert _span_rank([g.gen_low, Y]) == 1
        assert _span_rank([g.gen_high, X ** (d + 1)]) == 1
    g = apolar_generators(x ** 2 + y ** 2)
    assert g.ell == g.ell_prime == 2
    assert _span_rank([g.gen_low, g.gen_high, X * Y, X ** 2 - Y ** 2]) == 2


@pytest.mark.parametrize("seed", range(10))
def test_generator_invariants(seed):
    d = 2 + seed % 5
    f = random_form(2, d, ("gens", seed), height=5)
    g = apolar_generators(f)
    assert g.ell + g.ell_prime == d + 2 and g.ell <= g.ell_prime
    assert apolar_apply(g.gen_low, f).is_zero() and apolar_apply(g.gen_high, f).is_zero()
    lo = sp.Poly(to_sympy(Form(2, g.ell, g.gen_low.coeffs)), SX, SY)
    hi = sp.Poly(to_sympy(Form(2, g.ell_prime, g.gen_high.coeffs)), SX, SY)
    assert sp.gcd(lo, hi).total_degree() == 0


def test_squarefree_examples():
    assert is_squarefree(X * Y)
    assert not is_squarefree(X ** 2)
    assert is_squarefree(X ** 3 - X * Y ** 2)
    assert not is_squarefree(Y ** 2 * X)
    assert is_squarefree((X * Y).to_float())
    assert not is_squarefree((X ** 2 * Y).to_float())


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_squarefree_matches_sympy(m, cs):
    h = Form(2, m, as_exact(cs[: m + 1]), dual=True)
    if h.is_zero():
        return
    assert is_squarefree(h) == squarefree_sympy(list(h.coeffs))


def test_roots_examples():
    r = roots(X * Y)
    pts = {tuple(np.round(p / p[np.argmax(abs(p))], 12)) for p in r.points}
    assert pts == {(0, 1), (1, 0)}
    r = roots(X ** 2 - Y ** 2)
    ratios = sorted(complex(p[0] / p[1]).real for p in r.points)
    assert ratios == pytest.approx([-1, 1])


@pytest.mark.parametrize("seed", range(5))
def test_roots_against_mpmath(seed):
    h = Form(2, 5, random_form(2, 5, ("roots", seed), height=99).coeffs, dual=True)
    r = roots(h)
    assert len(r) == 5 and np.all(r.residuals <= 1e-10)
    assert all(abs(p[1]) > 0 for p in r.points)
    ours = [complex(p[0] / p[1]) for p in r.points]
    ref = [t for t in polyroots_projective(h.coeffs) if np.isfinite(t)]
    assert len(ref) == 5
    for t in ref:
        assert min(abs(t - u) for u in ours) <= 1e-9 * max(1, abs(t))


def test_roots_with_root_at_infinity():
    r = roots(X * (X - Y) * (X + 2 * Y))
    assert sum(1 for p in r.points if abs(p[1]) < 1e-12) == 0
    assert sum(1 for p in r.points if abs(p[0]) < 1e-12) == 1


def test_decompose_from_apolar_examples():
    dec = decompose_from_apolar(x ** 2 + y ** 2, X * Y)
    assert dec.count == 2 and dec.power_sum().allclose((x ** 2 + y ** 2).to_float())
    dec = decompose_from_apolar(x * y, X ** 2 - Y ** 2)
    canon = dec.canonical()
    got = sorted((complex(w).real, complex(p[1]).real) for w, p in zip(canon.weights, canon.points))
    assert got == [pytest.approx((-0.25, -1.0)), pytest.approx((0.25, 1.0))]


@pytest.mark.parametrize("seed", range(5))
def test_decompose_random_quintic(seed):
    f = random_form(2, 5, ("quintic", seed), height=99)
    ell = binary_length(f)
    H = apolar_component(f, ell)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        h = sum((int(c) * b for c, b in zip(rng.integers(-9, 10, size=len(H)), H)),
                Form.zero(2, ell, dual=True))
        if not h.is_zero() and is_squarefree(h):
            break
    dec = decompose_from_apolar(f, h)
    assert dec.count == h.degree
    s = dec.power_sum()
    assert np.linalg.norm(s.coeffs - f.to_float().coeffs) <= 1e-9 * f.norm()


def test_decompose_from_apolar_rejects_bad_input():
    with pytest.raises(PreconditionViolated):
        decompose_from_apolar(x * y ** 2, X ** 2)             # apolar, not squarefree
    with pytest.raises(PreconditionViolated):
        decompose_from_apolar(x ** 3 + y ** 3, X ** 2 - Y ** 2)  # squarefree, not apolar
    assert decompose_from_apolar(x ** 3 + y ** 3, X * Y * (X - Y)).count == 3


def test_sylvester_examples():
    assert sylvester_min_decompose((x + y) ** 3).count == 1
    assert sylvester_min_decompose(x * y).count == 2
    assert sylvester_min_decompose(x * y ** 3).count == 4


# --- the antiderivative length law ---------------------------------------

def _antiderivative_sympy(f: Form, a, b):
    """A solution w of (a d/dx + b d/dy) w = f, in degree d + 1."""
    d = f.degree
    cs = sp.symbols(f"c0:{d + 2}")
    w = sum(c * SX ** (d + 1 - k) * SY ** k for k, c in enumerate(cs))
    eq = sp.expand(a * sp.diff(w, SX) + b * sp.diff(w, SY) - to_sympy(f))
    sol = sp.solve(sp.Poly(eq, SX, SY).coeffs(), cs, dict=True)[0]
    vals = [sp.sympify(sol.get(c, 0)).subs({c2: 0 for c2 in cs}) for c in cs]
    return as_exact([Fraction(int(sp.numer(v)), int(sp.denom(v))) for v in vals])


@pytest.mark.parametrize("seed", range(8))
def test_antiderivative_length_law(seed):
    d = 2 + seed % 5
    f = random_form(2, d, ("law", seed), height=9)
    ell = binary_length(f)
    ell_p = d + 2 - ell
    rng = np.random.default_rng(seed)
    a, b = (int(v) for v in rng.integers(1, 20, size=2))
    w0 = Form(2, d + 1, _antiderivative_sympy(f, a, b))
    assert apolar_apply(a * X + b * Y, w0) == f
    vinf = power(as_exact([b, -a]), d + 1)      # spans the kernel of a X + b Y
    want = min(ell + 1, ell_p)
    bad = 0
    for t in rng.integers(-1000, 1001, size=20):
        w = w0 + Fraction(int(t)) * vinf
        bad += binary_length(w) != want
    assert bad <= 2
