"""Two-tier scalars and dense linear algebra.

Exact values are ``fractions.Fraction`` objects held in numpy object arrays;
float values are ``complex128`` arrays.  Every matrix is one or the other,
never a mix.  Exact kernels use fraction-free (Bareiss) elimination; float
kernels use the SVD with a relative singular-value threshold.
"""
from __future__ import annotations

import enum
import math
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import Inconsistent

#: Relative singular-value threshold used to decide numerical rank.
DEFAULT_RTOL = 1e-9


class Tier(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


def tier_of(a) -> Tier:
    a = np.asarray(a)
    return Tier.EXACT if a.dtype == object else Tier.FLOAT


def as_exact(values) -> np.ndarray:
    """Object array of Fractions (in lowest terms, positive denominator)."""
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for k, v in enumerate(flat_in):
        if isinstance(v, (complex, np.complexfloating)):
            if v.imag != 0:
                raise TypeError("complex value cannot enter the exact tier")
            v = v.real
        if isinstance(v, (float, np.floating)):
            v = Fraction(float(v))
        elif isinstance(v, (np.integer,)):
            v = int(v)
        flat_out[k] = Fraction(v)
    return out


def promote(a) -> np.ndarray:
    """Explicit exact -> float promotion (identity on float arrays)."""
    a = np.asarray(a)
    if a.dtype == object:
        return np.array([complex(v) for v in a.reshape(-1)],
                        dtype=np.complex128).reshape(a.shape)
    return a.astype(np.complex128, copy=False)


def exact_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


@dataclass(frozen=True)
class RankReport:
    rank: int
    kernel_basis: np.ndarray  # shape (k, cols); rows are kernel vectors
    threshold_used: float

    @property
    def nullity(self) -> int:
        return self.kernel_basis.shape[0]


def _row_to_ints(row) -> list[int]:
    den = 1
    for v in row:
        den = math.lcm(den, v.denominator)
    return [int(v.numerator * (den // v.denominator)) for v in row]


def echelon_exact(M) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Returns the nonzero echelon rows (integers) and their pivot columns.
    Rows of ``M`` are first cleared of denominators, which does not change
    the row space.
    """
    M = as_exact(M)
    rows = [_row_to_ints(r) for r in M]
    n_rows = len(rows)
    n_cols = M.shape[1] if M.ndim == 2 else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, n_rows):
            a = rows[i][c]
            row = rows[i]
            new = [0] * n_cols
            for j in range(c + 1, n_cols):
                q, rem = divmod(piv * row[j] - a * prow[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                new[j] = q
            rows[i] = new
        pivots.append(c)
        prev = piv
        r += 1
    return rows[:r], pivots


def _kernel_exact(M) -> RankReport:
    cols = M.shape[1]
    ech, pivots = echelon_exact(M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * cols
        x[fcol] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            row = ech[k]
            s = sum((row[j] * x[j] for j in range(pc + 1, cols) if row[j]),
                    Fraction(0))
            x[pc] = -s / row[pc]
        basis.append(x)
    kb = as_exact(basis) if basis else np.empty((0, cols), dtype=object)
    return RankReport(len(pivots), kb.reshape(len(basis), cols), 0.0)


def singular_values(M) -> np.ndarray:
    return np.linalg.svd(promote(M), compute_uv=False)


def _kernel_float(M, rtol: float) -> RankReport:
    M = promote(M)
    rows, cols = M.shape
    if rows == 0:
        return RankReport(0, np.eye(cols, dtype=np.complex128), 0.0)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    threshold = rtol * smax
    rank = int(np.count_nonzero(s > threshold)) if smax > 0 else 0
    kb = vh[rank:].conj()
    return RankReport(rank, kb, float(threshold))


def kernel(M, rtol: float = DEFAULT_RTOL) -> RankReport:
    """Rank and kernel basis of ``M`` (exact or float according to dtype)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[1] == 0:
        raise ValueError("kernel expects a nonempty 2-d matrix")
    if M.dtype == object:
        return _kernel_exact(M)
    return _kernel_float(M, rtol)


def matrix_rank(M, rtol: float = DEFAULT_RTOL) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if M.dtype == object:
        return len(echelon_exact(M)[1])
    s = singular_values(M)
    return int(np.count_nonzero(s > rtol * s[0])) if s[0] > 0 else 0


def solve(M, b) -> tuple[np.ndarray, float]:
    """Solve ``M x = b``.

    Exact tier: returns an exact solution (free variables set to zero) and
    residual 0, or raises :class:`Inconsistent`.  Float tier: least-squares
    solution and the 2-norm of the residual; the caller judges it.
    """
    M = np.asarray(M)
    b = np.asarray(b)
    if (M.dtype == object) != (b.dtype == object):
        raise TypeError("solve: matrix and right-hand side differ in tier")
    if M.dtype != object:
        x, *_ = np.linalg.lstsq(M.astype(np.complex128), b.astype(np.complex128),
                                rcond=None)
        return x, float(np.linalg.norm(M @ x - b))
    rows, cols = M.shape
    aug = np.concatenate([as_exact(M), as_exact(b).reshape(rows, 1)], axis=1)
    ech, pivots = echelon_exact(aug)
    if pivots and pivots[-1] == cols:
        raise Inconsistent("system has no solution")
    x = [Fraction(0)] * cols
    for k in range(len(pivots) - 1, -1, -1):
        pc = pivots[k]
        row = ech[k]
        s = sum((row[j] * x[j] for j in range(pc + 1, cols) if row[j]), Fraction(0))
        x[pc] = (row[cols] - s) / row[pc]
    return as_exact(x), 0.0


def primitive_integer(vec) -> np.ndarray:
    """Scale a rational vector to coprime integers with first nonzero entry > 0."""
    v = as_exact(vec)
    den = 1
    for a in v:
        den = math.lcm(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    if g == 0:
        return as_exact(ints)
    ints = [a // g for a in ints]
    lead = next(a for a in ints if a != 0)
    if lead < 0:
        ints = [-a for a in ints]
    return as_exact(ints)


# --- randomness -----------------------------------------------------------

def _key(k) -> int:
    if isinstance(k, (int, np.integer)):
        return int(k) & 0xFFFFFFFF
    return zlib.crc32(str(k).encode())


def rng_stream(seed: int, *keys) -> np.random.Generator:
    """Independent generator for one call site, derived from a top-level seed.

    The same ``(seed, keys)`` always yields the same stream.
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed) & (2**63 - 1),
                               spawn_key=tuple(_key(k) for k in keys)))


def random_rational_vector(n: int, rng: np.random.Generator, height: int = 99,
                           den_height: int = 1) -> np.ndarray:
    """Rationals with numerators in [-height, height], denominators in [1, den_height]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    nums = rng.integers(-height, height + 1, size=n)
    dens = rng.integers(1, den_height + 1, size=n)
    return as_exact([Fraction(int(p), int(q)) for p, q in zip(nums, dens)])


def random_nonzero_rational_vector(n: int, rng: np.random.Generator,
                                   height: int = 99, den_height: int = 1) -> np.ndarray:
    if height < 1:
        raise ValueError("height must be >= 1 to draw a nonzero vector")
    while True:
        v = random_rational_vector(n, rng, height, den_height)
        if any(a != 0 for a in v):
            return v


def projectively_equal(u: Sequence, v: Sequence, tol: float = 1e-12) -> bool:
    """True when ``u`` and ``v`` span the same line (all 2x2 minors vanish)."""
    u = np.asarray(u)
    v = np.asarray(v)
    n = len(u)
    exact = u.dtype == object and v.dtype == object
    if not exact:
        u = promote(u)
        v = promote(v)
        scale = tol * np.linalg.norm(u) * np.linalg.norm(v)
    for i in range(n):
        for j in range(i + 1, n):
            m = u[i] * v[j] - u[j] * v[i]
            if exact:
                if m != 0:
                    return False
            elif abs(m) > scale:
                return False
    return True
