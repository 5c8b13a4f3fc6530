"""Certificates for decompositions, catalecticant lower bounds, bound tables."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import WaringError, ZeroForm
from .forms import Form, WeightedDecomposition, catalecticant
from .io import form_hash
from .linalg import DEFAULT_RTOL, matrix_rank, promote

#: Exact values of the maximum rank of ternary forms known for small degree.
KNOWN_EXACT = {1: 1, 2: 3, 3: 5, 4: 7, 5: 10}

#: Unproved expectations, carried as table annotations only.
NOTES = {
    6: "12 <= rmax <= 14 expected (upper value unproved)",
    7: "17 <= rmax <= 18 expected (upper value unproved)",
}


def upper_bound(d: int) -> int:
    """``floor((d^2 + 6d + 1) / 4)``: every ternary form of degree d has at most this rank."""
    return (d * d + 6 * d + 1) // 4


def rank_bound(nvars: int, d: int) -> int:
    """Upper bound on the rank of any form in ``nvars`` variables of degree ``d``."""
    if nvars == 2:
        return max(d, 1)
    if nvars == 3:
        return upper_bound(d)
    raise ValueError("only binary and ternary forms are supported")


def lower_bound_formula(d: int) -> int:
    return (d + 1) ** 2 // 4


def conjectured_max(d: int) -> int | None:
    return (d * d + 2 * d + 5) // 4 if d >= 2 else None


@dataclass(frozen=True)
class BoundsRow:
    d: int
    lower: int
    upper: int
    conjecture: int | None
    known_exact: int | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def bounds_table(d_max: int) -> list[BoundsRow]:
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    return [BoundsRow(d, lower_bound_formula(d), upper_bound(d), conjectured_max(d),
                      KNOWN_EXACT.get(d), NOTES.get(d))
            for d in range(1, d_max + 1)]


def format_bounds_table(rows: list[BoundsRow]) -> str:
    head = ("d", "lower", "upper", "conj", "exact", "note")
    body = [(str(r.d), str(r.lower), str(r.upper),
             "-" if r.conjecture is None else str(r.conjecture),
             "-" if r.known_exact is None else str(r.known_exact), r.note or "")
            for r in rows]
    widths = [max(len(h), *(len(b[k]) for b in body)) for k, h in enumerate(head[:-1])]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head[:-1], widths)) + "  " + head[-1]]
    for b in body:
        lines.append("  ".join(c.rjust(w) for c, w in zip(b[:-1], widths)) + "  " + b[-1])
    return "\n".join(line.rstrip() for line in lines)


def rank_lower_bound(f: Form, rtol: float = DEFAULT_RTOL) -> int:
    """Largest catalecticant rank; no decomposition of ``f`` is shorter."""
    if f.is_zero():
        raise ZeroForm("lower bound of the zero form")
    best = 1
    for delta in range(1, f.degree // 2 + 1):
        best = max(best, matrix_rank(catalecticant(f, delta).matrix, rtol))
    return best


@dataclass
class Certificate:
    input_hash: str
    degree: int
    count: int
    bound: int
    relative_residual: float
    lower_bound: int
    seed: int | None = None
    per_level_witness_bls: list = field(default_factory=list)
    tolerance: float = 1e-9
    nvars: int = 3

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "Certificate":
        return cls(**obj)


@dataclass(frozen=True)
class Reject:
    reason: str
    relative_residual: float
    count: int
    bound: int

    def __bool__(self):
        return False


class CertificationFailed(WaringError):
    def __init__(self, reject: Reject):
        super().__init__(reject.reason)
        self.reject = reject


def relative_residual(f: Form, dec: WeightedDecomposition) -> float:
    s = dec.power_sum()
    if f.is_exact and s.is_exact:
        diff = f.coeffs - s.coeffs
        num = float(np.sqrt(float(sum(c * c for c in diff))))
        den = float(np.sqrt(float(sum(c * c for c in f.coeffs))))
    else:
        a, b = promote(f.coeffs), promote(s.coeffs)
        num, den = float(np.linalg.norm(a - b)), float(np.linalg.norm(a))
    if den == 0:
        return 0.0 if num == 0 else float("inf")
    return num / den


def verify_decomposition(f: Form, dec: WeightedDecomposition, tol: float = 1e-9,
                         seed: int | None = None, per_level_witness_bls=(),
                         rtol: float = DEFAULT_RTOL) -> Certificate | Reject:
    """Recompute the power sum and check residual and summand count."""
    if f.degree != dec.degree:
        raise ValueError("form and decomposition have different degrees")
    if f.nvars != dec.nvars:
        raise ValueError("form and decomposition have different numbers of variables")
    res = relative_residual(f, dec)
    bound = rank_bound(f.nvars, f.degree)
    if not res <= tol:
        return Reject(f"relative residual {res:.3e} exceeds {tol:.1e}", res, dec.count, bound)
    if dec.count > bound:
        return Reject(f"{dec.count} summands exceed the bound {bound}", res, dec.count, bound)
    return Certificate(
        input_hash=form_hash(f), degree=f.degree, count=dec.count, bound=bound,
        relative_residual=res, lower_bound=rank_lower_bound(f, rtol), seed=seed,
        per_level_witness_bls=[list(map(int, b)) for b in per_level_witness_bls],
        tolerance=tol, nvars=f.nvars)
