"""Binary forms: length, apolar ideals, squarefree tests, roots, Sylvester.

All forms here have two variables.  A dual binary form ``h(X, Y)`` has as
roots the primal points ``(a, b)`` with ``h(a, b) = 0``; the root
``(a, b)`` stands for the linear form ``a*x + b*y``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GenericChoiceFailed, PreconditionViolated, ZeroForm
from .forms import (Form, WeightedDecomposition, apolar_apply, catalecticant,
                    num_monomials, power_matrix)
from .linalg import (DEFAULT_RTOL, as_exact, kernel, matrix_rank, promote,
                     random_rational_vector, rng_stream)

#: Minimum chordal distance between roots for a float form to count as squarefree.
DEFAULT_SEPARATION = 1e-7


def _check_binary(f: Form, dual: bool):
    if f.nvars != 2:
        raise TypeError("expected a binary form")
    if f.dual != dual:
        raise TypeError(f"expected a {'dual' if dual else 'primal'} form")


def binary_length(f: Form, rtol: float = DEFAULT_RTOL) -> int:
    """Initial degree of the apolar ideal of a nonzero binary form."""
    _check_binary(f, dual=False)
    if f.is_zero():
        raise ZeroForm("binary length of the zero form is undefined")
    d = f.degree
    for delta in range(1, d + 1):
        cat = catalecticant(f, delta).matrix
        if cat.shape[1] - matrix_rank(cat, rtol) > 0:
            return delta
    return d + 1


def _basis_forms(vectors, delta: int) -> list[Form]:
    return [Form(2, delta, v, dual=True) for v in vectors]


def apolar_component(f: Form, delta: int, rtol: float = DEFAULT_RTOL) -> list[Form]:
    """Basis of the degree-``delta`` part of the apolar ideal of ``f``."""
    _check_binary(f, dual=False)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta > f.degree:
        n = num_monomials(2, delta)
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        vecs = as_exact(eye) if f.is_exact else np.eye(n, dtype=np.complex128)
        return _basis_forms(vecs, delta)
    if delta == 0:
        if f.is_zero():
            return [Form.constant(2, 1, dual=True, tier=f.tier)]
        return []
    rep = kernel(catalecticant(f, delta).matrix, rtol)
    return _basis_forms(rep.kernel_basis, delta)


def shifted_component(f: Form, x: Form, delta: int, rtol: float = DEFAULT_RTOL) -> list[Form]:
    """Basis of the degree-``delta`` part of ``x * I`` for a dual linear ``x``."""
    if delta < 1:
        return []
    if x.is_exact != f.is_exact:
        x = x.to_float()
    return [x * p for p in apolar_component(f, delta - 1, rtol)]


@dataclass(frozen=True)
class SylvesterData:
    f: Form
    ell: int
    ell_prime: int
    gen_low: Form
    gen_high: Form


def _in_span(vectors, candidate, rtol) -> bool:
    if not vectors:
        return False
    M = np.stack(list(vectors))
    r0 = matrix_rank(M.T, rtol)
    r1 = matrix_rank(np.concatenate([M, candidate[None, :]]).T, rtol)
    return r1 == r0


def apolar_generators(f: Form, rtol: float = DEFAULT_RTOL) -> SylvesterData:
    """The two generators of the apolar ideal, of degrees ``ell <= ell'``."""
    ell = binary_length(f, rtol)
    ell_p = f.degree + 2 - ell
    low = apolar_component(f, ell, rtol)
    if ell == ell_p:
        if len(low) != 2:
            raise ArithmeticError("expected a 2-dimensional kernel at the generator degree")
        return SylvesterData(f, ell, ell_p, low[0], low[1])
    if len(low) != 1:
        raise ArithmeticError("expected a 1-dimensional kernel at the binary length")
    g = low[0]
    mults = [g * Form(2, ell_p - ell, e, dual=True)
             for e in _unit_vectors(ell_p - ell + 1, g.is_exact)]
    span = [m.coeffs for m in mults]
    for cand in apolar_component(f, ell_p, rtol):
        if not _in_span(span, cand.coeffs, rtol):
            return SylvesterData(f, ell, ell_p, g, cand)
    raise ArithmeticError("no generator found outside gen_low * S^(ell'-ell)")


def _unit_vectors(n: int, exact: bool):
    for i in range(n):
        v = [0] * n
        v[i] = 1
        yield as_exact(v) if exact else np.array(v, dtype=np.complex128)


# --- squarefree tests and roots -------------------------------------------

def _dehomogenized(h: Form) -> list:
    """Ascending coefficients of ``h(t, 1)``."""
    # coeffs are ordered X^m, X^(m-1) Y, ..., Y^m
    return list(h.coeffs[::-1])


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
    return _trim(a)


def _poly_gcd_degree(a: list, b: list) -> int:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


def is_squarefree(h: Form, separation: float = DEFAULT_SEPARATION) -> bool:
    """No repeated projective root.

    Exact tier: the multiplicity of the root at ``y = 0`` is at most one
    and ``gcd(p, p')`` is constant for the dehomogenization ``p``.  Float
    tier: all pairwise chordal root distances exceed ``separation``.
    """
    _check_binary(h, dual=True)
    if h.is_zero():
        raise ZeroForm("squarefree test of the zero form")
    m = h.degree
    if m <= 1:
        return True
    if h.is_exact:
        p = _trim(_dehomogenized(h))
        if m - (len(p) - 1) > 1:
            return False
        dp = [i * c for i, c in enumerate(p)][1:]
        return _poly_gcd_degree(p, dp) == 0
    pts = roots(h).points
    return min_chordal_distance(pts) > separation


def chordal_distance(u, v) -> float:
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    return float(abs(u[0] * v[1] - u[1] * v[0]) / (np.linalg.norm(u) * np.linalg.norm(v)))


def min_chordal_distance(points) -> float:
    P = np.asarray(points, dtype=np.complex128)
    best = np.inf
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            best = min(best, chordal_distance(P[i], P[j]))
    return float(best)


@dataclass(frozen=True)
class RootList:
    points: np.ndarray      # (m, 2) unit-norm complex points, repeated by multiplicity
    residuals: np.ndarray   # |h(v)| / ||h|| per point

    def __len__(self):
        return len(self.points)


def _hom_eval(c: np.ndarray, m: int, a, b):
    # c ordered X^m, X^(m-1)Y, ..., Y^m
    k = np.arange(m, -1, -1)
    return np.sum(c * a ** k * b ** (m - k))


def roots(h: Form, tol: float = 1e-13) -> RootList:
    """Projective roots of a binary dual form, with multiplicity.

    The root ``(1, 0)`` is stripped first by inspecting the leading
    coefficients of ``h(t, 1)``; the rest are eigenvalues of the companion
    matrix of the dehomogenization, refined by guarded Newton steps.
    """
    _check_binary(h, dual=True)
    if h.is_zero():
        raise ZeroForm("roots of the zero form")
    m = h.degree
    c = promote(h.coeffs)
    hn = np.linalg.norm(c)
    c = c / hn
    p = list(c[::-1])   # ascending in t
    k_inf = 0
    while len(p) > 1 and abs(p[-1]) <= tol:
        p.pop()
        k_inf += 1
    n = len(p) - 1
    pts = [np.array([1.0, 0.0], dtype=np.complex128)] * k_inf
    if n > 0:
        p = np.array(p)
        comp = np.zeros((n, n), dtype=np.complex128)
        if n > 1:
            comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -p[:-1] / p[-1]
        lam = np.linalg.eigvals(comp)
        poly = np.polynomial.polynomial
        dp = poly.polyder(p)
        refined = []
        for t in lam:
            val = abs(poly.polyval(t, p))
            for _ in range(3):
                der = poly.polyval(t, dp)
                if der == 0:
                    break
                t2 = t - poly.polyval(t, p) / der
                val2 = abs(poly.polyval(t2, p))
                if not val2 < val:
                    break
                t, val = t2, val2
            refined.append(t)
        for t in refined:
            v = np.array([t, 1.0], dtype=np.complex128)
            pts.append(v / np.linalg.norm(v))
    P = np.array(pts, dtype=np.complex128).reshape(-1, 2)
    res = np.array([abs(_hom_eval(c, m, v[0], v[1])) for v in P])
    return RootList(P, res)


# --- decompositions -------------------------------------------------------

def decompose_from_apolar(f: Form, h: Form, tol: float = 1e-9,
                          separation: float = DEFAULT_SEPARATION) -> WeightedDecomposition:
    """Write ``f`` as a weighted sum of powers of the roots of ``h``.

    ``h`` must be squarefree, of degree at most ``deg f + 1`` and apolar to
    ``f``.  Raises :class:`GenericChoiceFailed` if the least-squares
    residual exceeds ``tol`` relative to ``||f||``.
    """
    _check_binary(f, dual=False)
    _check_binary(h, dual=True)
    if h.degree > f.degree + 1:
        raise PreconditionViolated("apolar element degree exceeds deg f + 1")
    if h.degree > f.degree:
        pass
    elif h.is_exact and f.is_exact:
        if not apolar_apply(h, f).is_zero():
            raise PreconditionViolated("h is not in the apolar ideal of f")
    else:
        cat = promote(catalecticant(f, h.degree).matrix) if h.degree <= f.degree else None
        if cat is not None:
            scale = np.linalg.norm(cat) * np.linalg.norm(promote(h.coeffs))
            if np.linalg.norm(cat @ promote(h.coeffs)) > 1e-6 * max(scale, 1e-300):
                raise PreconditionViolated("h is not in the apolar ideal of f")
    if not is_squarefree(h, separation):
        raise PreconditionViolated("h is not squarefree")
    pts = roots(h).points
    if len(pts) and min_chordal_distance(pts) <= separation:
        raise GenericChoiceFailed("roots are numerically coincident")
    V = power_matrix(pts, f.degree)            # (m, d+1)
    b = promote(f.coeffs)
    w, *_ = np.linalg.lstsq(V.T, b, rcond=None)
    fn = np.linalg.norm(b)
    resid = np.linalg.norm(V.T @ w - b) / fn if fn > 0 else np.linalg.norm(V.T @ w)
    if resid > tol:
        raise GenericChoiceFailed(f"relative residual {resid:.3e} above {tol:.1e}")
    return WeightedDecomposition(f.degree, w, pts)


def _combination(basis: list[Form], coeffs) -> Form:
    out = None
    for b, c in zip(basis, coeffs):
        term = b * (c if b.is_exact else complex(c))
        out = term if out is None else out + term
    return out


def sylvester_min_decompose(f: Form, seed: int = 0, max_samples: int = 50,
                            rtol: float = DEFAULT_RTOL, tol: float = 1e-9,
                            separation: float = DEFAULT_SEPARATION) -> WeightedDecomposition:
    """Shortest decomposition found by scanning the apolar ideal degree by degree.

    For each degree starting at the binary length, look for a squarefree
    element of the apolar ideal (sampling the kernel when it has dimension
    above one) and decompose over its roots.
    """
    _check_binary(f, dual=False)
    if f.is_zero():
        raise ZeroForm("cannot decompose the zero form")
    if f.degree < 1:
        raise PreconditionViolated("degree must be at least 1")
    start = binary_length(f, rtol)
    for delta in range(start, f.degree + 2):
        basis = apolar_component(f, delta, rtol)
        if not basis:
            continue
        rng = rng_stream(seed, "sylvester", delta)
        candidates = [basis[0]] if len(basis) == 1 else (
            _combination(basis, _sample_coeffs(len(basis), rng, basis[0].is_exact))
            for _ in range(max_samples))
        for h in candidates:
            if h.is_zero() or not is_squarefree(h, separation):
                continue
            try:
                return decompose_from_apolar(f, h, tol, separation)
            except GenericChoiceFailed:
                continue
    raise GenericChoiceFailed("no squarefree apolar element found up to degree d + 1")


def _sample_coeffs(k: int, rng, exact: bool):
    while True:
        c = random_rational_vector(k, rng)
        if any(a != 0 for a in c):
            return c if exact else [float(a) for a in c]


__all__ = [
    "DEFAULT_SEPARATION", "RootList", "SylvesterData", "apolar_component",
    "apolar_generators", "binary_length", "chordal_distance", "decompose_from_apolar",
    "is_squarefree", "min_chordal_distance", "roots", "shifted_component",
    "sylvester_min_decompose",
]
