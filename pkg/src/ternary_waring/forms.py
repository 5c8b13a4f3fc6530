"""Dense homogeneous forms in two or three variables and the apolarity action.

A :class:`Form` is either *primal* (a polynomial in ``x, y, z``) or *dual*
(a differential operator in ``X, Y, Z``, where ``X`` acts as ``d/dx``).
Coefficients are stored densely, one per monomial of the fixed degree, in
descending lexicographic order of exponent tuples.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Number

import numpy as np

from .errors import PreconditionViolated
from .linalg import (Tier, as_exact, exact_zeros, kernel, primitive_integer,
                     promote, solve, tier_of)

PRIMAL_NAMES = ("x", "y", "z")
DUAL_NAMES = ("X", "Y", "Z")


# --- monomial bookkeeping -------------------------------------------------

@lru_cache(maxsize=None)
def _monomial_tuples(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in _monomial_tuples(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> np.ndarray:
    """Exponent tuples of degree ``d`` in ``n`` variables, shape ``(N, n)``."""
    m = np.array(_monomial_tuples(n, d), dtype=np.int64).reshape(-1, n)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {e: k for k, e in enumerate(_monomial_tuples(n, d))}


def num_monomials(n: int, d: int) -> int:
    return math.comb(n + d - 1, d) if d >= 0 else 0


@lru_cache(maxsize=None)
def _multinomials(n: int, d: int, exact: bool) -> np.ndarray:
    vals = [math.factorial(d) // math.prod(math.factorial(a) for a in e)
            for e in _monomial_tuples(n, d)]
    if exact:
        return np.array(vals, dtype=object)
    return np.array(vals, dtype=np.float64)


@lru_cache(maxsize=None)
def _partial_tables(n: int, d: int):
    """For each variable j: source indices into degree d and multipliers.

    ``(d/dx_j f)[alpha] = (alpha_j + 1) * f[alpha + e_j]`` for alpha of degree d-1.
    """
    idx_d = monomial_index(n, d)
    tabs = []
    for j in range(n):
        src, mult = [], []
        for e in _monomial_tuples(n, d - 1):
            e2 = list(e)
            e2[j] += 1
            src.append(idx_d[tuple(e2)])
            mult.append(e[j] + 1)
        tabs.append((np.array(src, dtype=np.int64), np.array(mult, dtype=np.int64)))
    return tabs


@lru_cache(maxsize=None)
def _catalecticant_tables(n: int, d: int, delta: int, exact: bool):
    rows = _monomial_tuples(n, d - delta)
    cols = _monomial_tuples(n, delta)
    idx_d = monomial_index(n, d)
    idx = np.empty((len(rows), len(cols)), dtype=np.int64)
    fac = np.empty((len(rows), len(cols)), dtype=object if exact else np.float64)
    for a, al in enumerate(rows):
        for b, be in enumerate(cols):
            s = tuple(p + q for p, q in zip(al, be))
            idx[a, b] = idx_d[s]
            fac[a, b] = math.prod(math.factorial(p) // math.factorial(q)
                                  for p, q in zip(s, al))
    return idx, fac


@lru_cache(maxsize=None)
def _product_table(n: int, d1: int, d2: int) -> np.ndarray:
    idx = monomial_index(n, d1 + d2)
    m1 = _monomial_tuples(n, d1)
    m2 = _monomial_tuples(n, d2)
    return np.array([[idx[tuple(p + q for p, q in zip(a, b))] for b in m2] for a in m1],
                    dtype=np.int64).reshape(len(m1), len(m2))


# --- the Form type --------------------------------------------------------

def _is_exact_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, np.integer)) and not isinstance(c, bool)


class Form:
    """A homogeneous polynomial of fixed degree with dense coefficients.

    Parameters
    ----------
    nvars : int
        2 or 3.
    degree : int
    coeffs : array-like
        One coefficient per monomial of ``monomials(nvars, degree)``.  An
        object array of Fractions makes an exact form, anything numeric a
        complex float form.
    dual : bool
        True for operators (``S^.``), False for polynomials (``S_.``).
    """

    __slots__ = ("nvars", "degree", "dual", "coeffs")

    def __init__(self, nvars: int, degree: int, coeffs, dual: bool = False):
        if nvars not in (1, 2, 3):
            raise ValueError("forms have 2 or 3 variables")
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        arr = np.asarray(coeffs)
        if arr.dtype == object:
            arr = as_exact(arr)
        else:
            arr = arr.astype(np.complex128)
        arr = arr.reshape(-1)
        if arr.size != num_monomials(nvars, degree):
            raise ValueError(f"expected {num_monomials(nvars, degree)} coefficients, "
                             f"got {arr.size}")
        arr.setflags(write=False)
        self.nvars = nvars
        self.degree = degree
        self.dual = bool(dual)
        self.coeffs = arr

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, nvars, degree, dual=False, tier=Tier.EXACT) -> "Form":
        n = num_monomials(nvars, degree)
        c = exact_zeros(n) if tier is Tier.EXACT else np.zeros(n, np.complex128)
        return cls(nvars, degree, c, dual)

    @classmethod
    def from_terms(cls, nvars, degree, terms, dual=False, tier=None) -> "Form":
        """Build from ``{exponent_tuple: coefficient}``; missing monomials are 0."""
        values = list(terms.values())
        if tier is None:
            tier = Tier.EXACT if all(_is_exact_scalar(v) for v in values) else Tier.FLOAT
        out = cls.zero(nvars, degree, dual, tier).coeffs.copy()
        idx = monomial_index(nvars, degree)
        for e, c in terms.items():
            e = tuple(int(a) for a in e)
            if len(e) != nvars or sum(e) != degree:
                raise ValueError(f"exponent {e} does not have degree {degree} "
                                 f"in {nvars} variables")
            out[idx[e]] = Fraction(c) if tier is Tier.EXACT else complex(c)
        return cls(nvars, degree, out, dual)

    @classmethod
    def linear(cls, vec, dual=False) -> "Form":
        v = np.asarray(vec)
        if v.dtype != object and np.issubdtype(v.dtype, np.integer):
            v = as_exact(v)
        return cls(len(v), 1, v, dual)

    # basic properties -----------------------------------------------------
    @property
    def tier(self) -> Tier:
        return tier_of(self.coeffs)

    @property
    def is_exact(self) -> bool:
        return self.coeffs.dtype == object

    def to_float(self) -> "Form":
        if not self.is_exact:
            return self
        return Form(self.nvars, self.degree, promote(self.coeffs), self.dual)

    def norm(self) -> float:
        return float(np.linalg.norm(promote(self.coeffs)))

    def is_zero(self, tol: float = 0.0) -> bool:
        """Exact zero test, or ``max |c| <= tol`` in the float tier."""
        if self.is_exact:
            return all(c == 0 for c in self.coeffs)
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def terms(self) -> dict[tuple[int, ...], object]:
        mons = _monomial_tuples(self.nvars, self.degree)
        return {e: c for e, c in zip(mons, self.coeffs) if c != 0}

    def coefficient(self, exps) -> object:
        return self.coeffs[monomial_index(self.nvars, self.degree)[tuple(exps)]]

    def _like(self, coeffs) -> "Form":
        return Form(self.nvars, self.degree, coeffs, self.dual)

    def _check_compatible(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if self.nvars != other.nvars or self.dual != other.dual:
            raise TypeError("forms live in different rings")
        if self.is_exact != other.is_exact:
            raise TypeError("mixed-tier arithmetic: promote explicitly with to_float()")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Number) and other == 0:
            return self
        self._check_compatible(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        return self._like(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def _scale(self, c):
        if self.is_exact:
            if not _is_exact_scalar(c):
                raise TypeError("exact form times inexact scalar: promote first")
            return self._like(self.coeffs * Fraction(c))
        return self._like(self.coeffs * complex(c))

    def __mul__(self, other):
        if isinstance(other, Form):
            return multiply(self, other)
        if isinstance(other, Number):
            return self._scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self._scale(other)
        return NotImplemented

    def __truediv__(self, c):
        if self.is_exact:
            return self._scale(Fraction(1) / Fraction(c))
        return self._scale(1 / complex(c))

    def __pow__(self, k: int):
        out = Form.constant(self.nvars, 1, self.dual, self.tier)
        for _ in range(k):
            out = multiply(out, self)
        return out

    @classmethod
    def constant(cls, nvars, value=1, dual=False, tier=Tier.EXACT) -> "Form":
        c = as_exact([value]) if tier is Tier.EXACT else np.array([value], np.complex128)
        return cls(nvars, 0, c, dual)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.nvars == other.nvars and self.degree == other.degree
                and self.dual == other.dual and self.is_exact == other.is_exact
                and bool(np.all(self.coeffs == other.coeffs)))

    __hash__ = None

    def allclose(self, other: "Form", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        if (self.nvars, self.degree, self.dual) != (other.nvars, other.degree, other.dual):
            return False
        a, b = promote(self.coeffs), promote(other.coeffs)
        scale = max(np.linalg.norm(a), np.linalg.norm(b))
        return bool(np.linalg.norm(a - b) <= rtol * scale + atol)

    def __repr__(self):
        names = (DUAL_NAMES if self.dual else PRIMAL_NAMES)[: self.nvars]
        parts = []
        for e, c in self.terms().items():
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        body = " + ".join(parts) if parts else "0"
        return f"Form[{'dual' if self.dual else 'primal'}, deg {self.degree}]({body})"


def variables(nvars: int, dual: bool = False) -> tuple[Form, ...]:
    """The degree-1 coordinate forms, e.g. ``x, y, z = variables(3)``."""
    out = []
    for j in range(nvars):
        v = [0] * nvars
        v[j] = 1
        out.append(Form.linear(as_exact(v), dual))
    return tuple(out)


# --- apolarity ------------------------------------------------------------

def _coerce_vector(vec, exact: bool) -> np.ndarray:
    if isinstance(vec, Form):
        vec = vec.coeffs
    v = np.asarray(vec)
    if exact:
        return as_exact(v)
    return promote(v)


def partial(f: Form, j: int) -> Form:
    """Derivative with respect to the j-th variable."""
    if f.degree == 0:
        return Form.zero(f.nvars, 0, f.dual, f.tier)
    src, mult = _partial_tables(f.nvars, f.degree)[j]
    return Form(f.nvars, f.degree - 1, f.coeffs[src] * mult, f.dual)


def diff_linear(l, f: Form) -> Form:
    """``d_l f`` for a dual linear form ``l`` (a Form or a coordinate vector).

    Exact line coordinates acting on a float form are promoted explicitly.
    """
    if isinstance(l, Form) and (not l.dual or l.degree != 1):
        raise TypeError("diff_linear expects a dual linear form")
    lv = _coerce_vector(l, f.is_exact)
    if len(lv) != f.nvars:
        raise ValueError("variable count mismatch")
    if f.degree == 0:
        return Form.zero(f.nvars, 0, f.dual, f.tier)
    tabs = _partial_tables(f.nvars, f.degree)
    out = None
    for j, (src, mult) in enumerate(tabs):
        if lv[j] == 0:
            continue
        term = f.coeffs[src] * mult * lv[j]
        out = term if out is None else out + term
    if out is None:
        return Form.zero(f.nvars, f.degree - 1, f.dual, f.tier)
    return Form(f.nvars, f.degree - 1, out, f.dual)


def diff_lines(lines, f: Form) -> Form:
    """Apply the product of the given dual linear forms to ``f``."""
    for l in lines:
        f = diff_linear(l, f)
    return f


class Catalecticant:
    """Matrix of ``S^delta -> S_{d-delta}, x -> d_x f`` in monomial bases.

    Columns index degree-``delta`` dual monomials, rows degree-``d - delta``
    primal monomials.
    """

    __slots__ = ("source_degree", "target_degree", "matrix", "nvars")

    def __init__(self, source_degree, target_degree, matrix, nvars):
        self.source_degree = source_degree
        self.target_degree = target_degree
        self.matrix = matrix
        self.nvars = nvars

    @property
    def shape(self):
        return self.matrix.shape

    def kernel(self, rtol=None):
        from .linalg import DEFAULT_RTOL
        return kernel(self.matrix, DEFAULT_RTOL if rtol is None else rtol)


def catalecticant(f: Form, delta: int) -> Catalecticant:
    if f.dual:
        raise TypeError("catalecticant is defined for primal forms")
    if not 0 <= delta <= f.degree:
        raise ValueError("need 0 <= delta <= degree")
    idx, fac = _catalecticant_tables(f.nvars, f.degree, delta, f.is_exact)
    return Catalecticant(delta, f.degree - delta, f.coeffs[idx] * fac, f.nvars)


def apolar_apply(x: Form, f: Form) -> Form:
    """``d_x f``: the dual form ``x`` acting on the primal form ``f``."""
    if not x.dual or f.dual:
        raise TypeError("apolar_apply takes a dual form and a primal form")
    if x.nvars != f.nvars:
        raise ValueError("variable count mismatch")
    if x.is_exact != f.is_exact:
        raise TypeError("mixed-tier arithmetic: promote explicitly with to_float()")
    if x.degree > f.degree:
        raise ValueError("operator degree exceeds form degree")
    if x.degree == 1:
        return diff_linear(x, f)
    cat = catalecticant(f, x.degree)
    return Form(f.nvars, f.degree - x.degree, cat.matrix.dot(x.coeffs))


def _point_vector(v) -> np.ndarray:
    if isinstance(v, Form):
        if v.dual or v.degree != 1:
            raise TypeError("expected a primal linear form")
        return v.coeffs
    return np.asarray(v)


def evaluate(x: Form, v) -> object:
    """``x(v) = d_x v^d / d!`` -- equivalently, ``x`` evaluated at the coordinates of ``v``."""
    if not x.dual:
        raise TypeError("evaluate expects a dual form")
    vv = _point_vector(v)
    if len(vv) != x.nvars:
        raise ValueError("variable count mismatch")
    exact = x.is_exact and vv.dtype == object
    vv = as_exact(vv) if exact else promote(vv)
    coeffs = x.coeffs if exact else promote(x.coeffs)
    mons = monomials(x.nvars, x.degree)
    vals = np.prod(vv[None, :] ** mons, axis=1) if x.degree else np.ones(1, dtype=vv.dtype)
    return vals.dot(coeffs) if exact else complex(vals @ coeffs)


def evaluate_many(x: Form, points) -> np.ndarray:
    """Vectorized :func:`evaluate` over the rows of ``points``."""
    P = np.asarray(points)
    exact = x.is_exact and P.dtype == object
    P = as_exact(P) if exact else promote(P)
    coeffs = x.coeffs if exact else promote(x.coeffs)
    mons = monomials(x.nvars, x.degree)
    vals = np.prod(P[:, None, :] ** mons[None, :, :], axis=2)
    return vals.dot(coeffs)


def power_matrix(points, d: int) -> np.ndarray:
    """Row k holds the coefficients of ``v_k^d`` for the k-th row ``v_k`` of ``points``."""
    P = np.asarray(points)
    exact = P.dtype == object
    if not exact:
        P = promote(P)
    r, n = P.shape
    mons = monomials(n, d)
    if r == 0:
        return np.empty((0, len(mons)), dtype=object if exact else np.complex128)
    vals = np.prod(P[:, None, :] ** mons[None, :, :], axis=2)
    return vals * _multinomials(n, d, exact)[None, :]


def power(v, d: int) -> Form:
    vv = _point_vector(v)
    return Form(len(vv), d, power_matrix(vv.reshape(1, -1), d)[0])


def multiply(a: Form, b: Form) -> Form:
    a._check_compatible(b)
    table = _product_table(a.nvars, a.degree, b.degree)
    n_out = num_monomials(a.nvars, a.degree + b.degree)
    out = exact_zeros(n_out) if a.is_exact else np.zeros(n_out, np.complex128)
    np.add.at(out, table.reshape(-1), np.multiply.outer(a.coeffs, b.coeffs).reshape(-1))
    return Form(a.nvars, a.degree + b.degree, out, a.dual)


# --- change of variables and binary charts --------------------------------

def substitution_matrix(A, d: int) -> np.ndarray:
    """Linear map on degree-``d`` coefficients for ``x_i = sum_k A[i, k] y_k``.

    Column ``j`` holds the coefficients (in the ``y`` variables) of the
    ``j``-th ``x`` monomial after substitution.
    """
    A = np.asarray(A)
    exact = A.dtype == object
    n_old, n_new = A.shape
    pows = [[power_matrix(A[i:i + 1], k)[0] for k in range(d + 1)] for i in range(n_old)]
    cols = []
    for e in _monomial_tuples(n_old, d):
        acc = np.array([Fraction(1)], dtype=object) if exact else np.ones(1, np.complex128)
        deg = 0
        for i, k in enumerate(e):
            table = _product_table(n_new, deg, k)
            out = exact_zeros(num_monomials(n_new, deg + k)) if exact else \
                np.zeros(num_monomials(n_new, deg + k), np.complex128)
            np.add.at(out, table.reshape(-1), np.multiply.outer(acc, pows[i][k]).reshape(-1))
            acc = out
            deg += k
        cols.append(acc)
    return np.stack(cols, axis=1)


def substitute(f: Form, A) -> Form:
    """``f`` rewritten through ``x_i = sum_k A[i, k] y_k`` (same ring tag)."""
    A = np.asarray(A)
    if A.shape[0] != f.nvars:
        raise ValueError("substitution matrix has the wrong number of rows")
    if f.is_exact:
        M = substitution_matrix(as_exact(A), f.degree)
    else:
        M = substitution_matrix(promote(A), f.degree)
    return Form(A.shape[1], f.degree, M.dot(f.coeffs), f.dual)


def _cross(a, b) -> np.ndarray:
    return as_exact([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def _orthogonal_kernel_basis(l0) -> np.ndarray:
    cands = [primitive_integer(_cross(l0, [int(k == j) for k in range(3)])) for j in range(3)]
    t1 = min((c for c in cands if any(c)), key=lambda c: (sum(a * a for a in c), tuple(c)))
    n = max(1, round(sum(float(a) ** 2 for a in l0) ** 0.5))
    t2 = _cross(l0, t1) / Fraction(n)
    return np.stack([t1, t2])


class BinaryChart:
    """Coordinates on the binary subring ``Ker d_{l0}`` of ternary forms.

    ``basis`` holds two rational vectors ``t1, t2`` spanning the linear forms
    annihilated by ``l0``.  They are orthogonal and of nearly equal length,
    which keeps float restrictions well conditioned at high degree; ``points`` holds ``P1, P2`` with
    ``t_k . P_j = delta_kj`` and ``l0 . P_j = 0``, so that a ternary form
    ``f = g(t1, t2)`` restricts to ``g(a, b) = f(a P1 + b P2)``.
    """

    def __init__(self, l0):
        l0 = primitive_integer(l0)
        if all(c == 0 for c in l0):
            raise ValueError("l0 must be nonzero")
        self.l0 = l0
        self.basis = _orthogonal_kernel_basis(l0)
        M = np.stack([self.basis[0], self.basis[1], l0])
        cols = []
        for j in range(2):
            e = as_exact([1 if k == j else 0 for k in range(3)])
            cols.append(solve(M, e)[0])
        self.points = np.stack(cols, axis=1)  # 3 x 2
        self._restrict = {}
        self._lift = {}

    def _matrix(self, cache, A, d, exact):
        key = (d, exact)
        if key not in cache:
            M = substitution_matrix(A, d)
            cache[key] = M if exact else promote(M)
        return cache[key]

    def restrict(self, f: Form) -> Form:
        """Binary coordinates of ``f`` (its part free of the complementary direction)."""
        M = self._matrix(self._restrict, self.points, f.degree, f.is_exact)
        return Form(2, f.degree, M.dot(f.coeffs), f.dual)

    def lift(self, g: Form) -> Form:
        M = self._matrix(self._lift, self.basis, g.degree, g.is_exact)
        return Form(3, g.degree, M.dot(g.coeffs), g.dual)

    def point_to_ternary(self, ab) -> np.ndarray:
        """Binary point ``(a, b)`` -> ternary linear form ``a t1 + b t2``."""
        ab = np.asarray(ab)
        B = self.basis if ab.dtype == object else promote(self.basis)
        return ab @ B

    def dual_to_binary(self, l) -> np.ndarray:
        """Image of a ternary dual linear form in the binary dual ring."""
        lv = np.asarray(l.coeffs if isinstance(l, Form) else l)
        if lv.dtype == object:
            return self.basis.dot(as_exact(lv))
        return promote(self.basis) @ promote(lv)


@lru_cache(maxsize=256)
def _chart_cached(key: tuple) -> BinaryChart:
    return BinaryChart(as_exact(list(key)))


def binary_chart(l0) -> BinaryChart:
    lv = primitive_integer(_coerce_vector(l0, True))
    return _chart_cached(tuple(lv))


def restrict_to_binary(f: Form, l0, tol: float = 1e-9) -> tuple[Form, BinaryChart]:
    """Coordinates of ``f`` in ``Ker d_{l0}`` plus the chart that maps back.

    Raises :class:`PreconditionViolated` when ``d_{l0} f`` is not zero
    (exactly, or relative to ``tol`` in the float tier).
    """
    if f.nvars != 3 or f.dual:
        raise TypeError("restrict_to_binary expects a primal ternary form")
    chart = binary_chart(l0)
    if f.degree > 0:
        if f.is_exact:
            bad = not diff_linear(chart.l0, f).is_zero()
        else:
            d = diff_linear(chart.l0, f)
            scale = f.degree * f.norm() * float(np.linalg.norm(promote(chart.l0)))
            bad = d.norm() > tol * max(scale, 1e-300)
        if bad:
            raise PreconditionViolated("form is not annihilated by l0")
    return chart.restrict(f), chart


# --- weighted power sums --------------------------------------------------

class WeightedDecomposition:
    """``f = sum_j weights[j] * points[j]^degree`` with projectively distinct points."""

    __slots__ = ("degree", "weights", "points")

    def __init__(self, degree: int, weights, points, check_distinct: bool = True):
        P = np.asarray(points)
        w = np.asarray(weights)
        if P.ndim != 2:
            raise ValueError("points must be a 2-d array (one row per linear form)")
        if len(w) != len(P):
            raise ValueError("one weight per point required")
        exact = P.dtype == object and w.dtype == object
        self.degree = int(degree)
        self.points = as_exact(P) if exact else promote(P)
        self.weights = as_exact(w) if exact else promote(w)
        if check_distinct and not self._distinct():
            raise ValueError("decomposition points must be projectively distinct")

    @classmethod
    def empty(cls, nvars: int, degree: int, exact: bool = True):
        dt = object if exact else np.complex128
        return cls(degree, np.empty(0, dt), np.empty((0, nvars), dt))

    @property
    def count(self) -> int:
        return len(self.weights)

    def __len__(self):
        return self.count

    @property
    def nvars(self) -> int:
        return self.points.shape[1]

    @property
    def is_exact(self) -> bool:
        return self.points.dtype == object

    def _distinct(self, tol: float = 1e-10) -> bool:
        r = self.count
        if r < 2:
            return True
        if self.is_exact:
            from .linalg import projectively_equal
            return not any(projectively_equal(self.points[i], self.points[j])
                           for i in range(r) for j in range(i + 1, r))
        U = self.points / np.linalg.norm(self.points, axis=1, keepdims=True)
        G = np.abs(U.conj() @ U.T)
        np.fill_diagonal(G, 0.0)
        return bool(np.all(1.0 - G ** 2 > tol ** 2))

    def power_sum(self) -> Form:
        M = power_matrix(self.points, self.degree)
        n = self.nvars
        if self.count == 0:
            return Form.zero(n, self.degree, tier=Tier.EXACT if self.is_exact else Tier.FLOAT)
        return Form(n, self.degree, self.weights.dot(M))

    def to_float(self) -> "WeightedDecomposition":
        return WeightedDecomposition(self.degree, promote(self.weights), promote(self.points),
                                     check_distinct=False)

    def concat(self, other: "WeightedDecomposition") -> "WeightedDecomposition":
        a, b = self, other
        if a.is_exact != b.is_exact:
            a, b = a.to_float(), b.to_float()
        return WeightedDecomposition(
            self.degree, np.concatenate([a.weights, b.weights]),
            np.concatenate([a.points, b.points]))

    def canonical(self) -> "WeightedDecomposition":
        """Rescale each point so its first nonzero coordinate is 1."""
        ws, ps = [], []
        for w, v in zip(self.weights, self.points):
            if self.is_exact:
                c = next(a for a in v if a != 0)
            else:
                thresh = 1e-12 * np.linalg.norm(v)
                c = next(a for a in v if abs(a) > thresh)
            ps.append(v / c)
            ws.append(w * c ** self.degree)
        if not ps:
            return self
        return WeightedDecomposition(self.degree, np.array(ws, dtype=self.weights.dtype),
                                     np.array(ps, dtype=self.points.dtype), check_distinct=False)

    def normalized(self) -> "WeightedDecomposition":
        """Float copy with unit-norm points (weights adjusted)."""
        P = promote(self.points)
        w = promote(self.weights)
        if self.count == 0:
            return self.to_float()
        nrm = np.linalg.norm(P, axis=1)
        return WeightedDecomposition(self.degree, w * nrm ** self.degree, P / nrm[:, None],
                                     check_distinct=False)

    def absorb_weights(self) -> "WeightedDecomposition":
        """Unit weights, each weight's principal d-th root folded into its point."""
        P = promote(self.points)
        w = promote(self.weights)
        root = w ** (1.0 / self.degree) if self.degree else w
        return WeightedDecomposition(self.degree, np.ones_like(w), P * root[:, None],
                                     check_distinct=False)

    def __repr__(self):
        return f"WeightedDecomposition(degree={self.degree}, count={self.count})"


def power_sum(dec: WeightedDecomposition, d: int | None = None) -> Form:
    if d is not None and d != dec.degree:
        dec = WeightedDecomposition(d, dec.weights, dec.points, check_distinct=False)
    return dec.power_sum()
