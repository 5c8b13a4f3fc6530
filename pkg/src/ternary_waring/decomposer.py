"""Constructive power-sum decomposition of ternary forms.

The decomposition is built along ``d`` dual lines ``l^1, ..., l^d`` whose
product annihilates ``f`` while every product with one factor omitted does
not.  Level ``e`` holds a decomposition of ``d_{l^{e+1} ... l^d} f`` (a form
of degree ``e``); each level adds the roots of one squarefree apolar element
of an essentially binary form, so that a form of degree ``d = 2s + eps``
ends with at most ``s^2 + 3s + eps (s + 2)`` summands.

Generic choices (lines, apolar elements) are drawn at random and accepted
only after their defining properties have been checked.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from .binary import (DEFAULT_SEPARATION, apolar_component, binary_length,
                     decompose_from_apolar, is_squarefree, roots)
from .errors import (GenericChoiceFailed, InvariantViolation, PowerInput,
                     PreconditionViolated, RetryBudgetExhausted, ZeroForm)
from .forms import (BinaryChart, Form, WeightedDecomposition, binary_chart,
                    catalecticant, diff_linear, evaluate_many, power_matrix)
from .linalg import (DEFAULT_RTOL, as_exact, kernel, matrix_rank, projectively_equal,
                     promote, random_nonzero_rational_vector,
                     rng_stream, solve)

log = logging.getLogger(__name__)


def level_bound(e: int) -> int:
    """``s^2 + 3s + eps (s + 2)`` for ``e = 2s + eps``."""
    s, eps = divmod(e, 2)
    return s * s + 3 * s + eps * (s + 2)


def expected_length(e: int) -> int:
    """Binary length every witness carries at level ``e``."""
    s, eps = divmod(e, 2)
    return s + 1 + eps


@dataclass
class DecomposerConfig:
    rank_rtol: float = DEFAULT_RTOL
    separation: float = DEFAULT_SEPARATION
    nonvanishing_tol: float = 1e-9
    residual_tol: float = 1e-9
    retry_lines: int = 64
    retry_h: int = 200
    line_height: int = 99
    sample_height: int = 99
    resample_line_every: int = 10
    restarts: int = 3


# --- antiderivatives ------------------------------------------------------

def _as_dual(x) -> Form:
    if isinstance(x, Form):
        if not x.dual:
            raise TypeError("expected a dual form")
        return x
    return Form.linear(as_exact(x), dual=True)


def relative_antiderivative_decomposition(dec: WeightedDecomposition, x,
                                          tol: float = 0.0) -> WeightedDecomposition:
    """Summands of the ``x``-antiderivative of ``dec`` relative to its points."""
    x = _as_dual(x)
    d, delta = dec.degree, x.degree
    if dec.count == 0:
        return WeightedDecomposition.empty(dec.nvars, d + delta, dec.is_exact)
    exact = dec.is_exact and x.is_exact
    if not exact:
        dec = dec.to_float()
        x = x.to_float()
    vals = evaluate_many(x, dec.points)
    if exact:
        if any(v == 0 for v in vals):
            raise PreconditionViolated("the operator vanishes on a decomposition point")
        ratio = Fraction(math.factorial(d), math.factorial(d + delta))
        w = np.array([ratio * lam / v for lam, v in zip(dec.weights, vals)], dtype=object)
    else:
        scale = (np.linalg.norm(promote(x.coeffs))
                 * np.linalg.norm(dec.points, axis=1) ** delta)
        if np.any(np.abs(vals) <= tol * scale) or np.any(vals == 0):
            raise PreconditionViolated("the operator vanishes on a decomposition point")
        ratio = math.factorial(d) / math.factorial(d + delta)
        w = ratio * dec.weights / vals
    return WeightedDecomposition(d + delta, w, dec.points, check_distinct=False)


def antiderivative_relative(dec: WeightedDecomposition, x, tol: float = 0.0) -> Form:
    """The unique ``x``-antiderivative of ``power_sum(dec)`` in the span of the
    ``(d + deg x)``-th powers of its points."""
    return relative_antiderivative_decomposition(dec, x, tol).power_sum()


# --- powers ---------------------------------------------------------------

def power_root(g: Form, rtol: float = DEFAULT_RTOL):
    """``(c, v)`` with ``g = c * v^m`` if ``g`` is a pure power, else None."""
    if g.dual:
        raise TypeError("expected a primal form")
    if g.is_zero():
        raise ZeroForm("power test of the zero form")
    m = g.degree
    if m == 0:
        return g.coeffs[0], None
    if matrix_rank(catalecticant(g, 1).matrix, rtol) != 1:
        return None
    # the image of S^(m-1) -> S_1 is spanned by the base of the power
    img = catalecticant(g, m - 1).matrix
    if g.is_exact:
        col = next(j for j in range(img.shape[1]) if any(a != 0 for a in img[:, j]))
        v = img[:, col]
    else:
        col = int(np.argmax(np.linalg.norm(img, axis=0)))
        v = img[:, col] / np.linalg.norm(img[:, col])
    P = power_matrix(v.reshape(1, -1), m)[0]
    c, resid = solve(P.reshape(-1, 1), g.coeffs)
    if g.is_exact:
        if any(a != 0 for a in c[0] * P - g.coeffs):
            return None
    elif resid > 1e3 * rtol * g.norm():
        return None
    return c[0], v


def is_power(g: Form, rtol: float = DEFAULT_RTOL) -> bool:
    """True iff ``g = c * v^m`` for a linear form ``v``.

    Decided by the rank of the first polarization (``rank 1`` means ``g``
    lives in a one-variable subring) and confirmed by reconstructing ``c v^m``.
    """
    if g.is_zero():
        raise ZeroForm("power test of the zero form")
    return power_root(g, rtol) is not None


# --- line systems ---------------------------------------------------------

def _nonzero(g: Form, ref: float, tol: float) -> bool:
    if g.is_exact:
        return not g.is_zero()
    return g.norm() > tol * ref


@dataclass
class LineSystem:
    """Dual lines ``l^1..l^d`` plus the derivatives of ``f`` the recursion needs.

    ``suffix[e]`` is ``d_{l^{e+1} ... l^d} f`` and ``omit[(e, i)]`` is the
    same product with ``l^i`` left out (``e < i``).
    """

    f: Form
    lines: list
    suffix: list = field(repr=False)
    omit: dict = field(repr=False)
    charts: list = field(repr=False)

    @classmethod
    def build(cls, f: Form, lines) -> "LineSystem":
        lines = [as_exact(l) for l in lines]
        d = f.degree
        if len(lines) != d:
            raise ValueError("need exactly deg f lines")
        suffix = [None] * (d + 1)
        suffix[d] = f
        for e in range(d - 1, -1, -1):
            suffix[e] = diff_linear(lines[e], suffix[e + 1])
        omit = {}
        for e in range(d - 1, -1, -1):
            omit[(e, e + 1)] = suffix[e + 1]
            for i in range(e + 2, d + 1):
                omit[(e, i)] = diff_linear(lines[e], omit[(e + 1, i)])
        charts = [binary_chart(l) for l in lines]
        return cls(f, lines, suffix, omit, charts)

    @property
    def degree(self) -> int:
        return self.f.degree

    def line(self, i: int) -> np.ndarray:
        """The line ``l^i`` (1-based, as in ``l^1 .. l^d``)."""
        return self.lines[i - 1]

    def chart(self, i: int) -> BinaryChart:
        return self.charts[i - 1]

    def check(self, extras=(), tol: float = 1e-9) -> bool:
        """The three families of line predicates."""
        d = self.degree
        ref = self.f.norm() * max(1.0, float(np.prod([np.linalg.norm(promote(l))
                                                      for l in self.lines])))
        if _nonzero(self.suffix[0], ref, tol):
            return False
        if not all(_nonzero(self.omit[(0, i)], ref, tol) for i in range(1, d + 1)):
            return False
        for ex in extras:
            g = ex
            for l in self.lines:
                g = diff_linear(l, g)
            if not _nonzero(g, ex.norm() * ref / max(self.f.norm(), 1e-300), tol):
                return False
        for a in range(d):
            for b in range(a + 1, d):
                if projectively_equal(self.lines[a], self.lines[b]):
                    return False
        return True


def _rationalize(v: np.ndarray, max_den: int = 10 ** 12) -> np.ndarray:
    v = v / np.max(np.abs(v))
    return as_exact([Fraction(float(a)).limit_denominator(max_den) for a in v])


def choose_lines(f: Form, avoid=(), extras=(), seed: int = 0,
                 config: DecomposerConfig | None = None) -> LineSystem:
    """Distinct rational dual lines with ``d_{l^1..l^d} f = 0``, no single
    omission annihilating ``f``, and ``d_{l^1..l^d} g != 0`` for each extra ``g``.

    ``l^d`` is chosen first, then the construction recurses on ``d_{l^d} f``
    with ``f`` added to the extras.
    """
    cfg = config or DecomposerConfig()
    if f.nvars != 3 or f.dual:
        raise TypeError("choose_lines expects a primal ternary form")
    d = f.degree
    if d < 2:
        raise PreconditionViolated("choose_lines needs degree >= 2")
    if f.is_zero():
        raise ZeroForm("cannot choose lines for the zero form")
    for g in (f, *extras):
        if g.degree < 1 or is_power(g, cfg.rank_rtol):
            raise PowerInput("input form or extra is a pure power")
    for g in extras:
        if g.degree < d + 1:
            raise PreconditionViolated("extras must have degree >= deg f + 1")

    tol = cfg.nonvanishing_tol
    avoid = [as_exact(a) for a in avoid]
    ex = list(extras)
    g = f
    chosen = []   # l^d, l^(d-1), ...
    for m in range(d, 1, -1):
        rng = rng_stream(seed, "lines", m)
        for _ in range(cfg.retry_lines):
            l = random_nonzero_rational_vector(3, rng, cfg.line_height)
            if any(projectively_equal(l, a) for a in avoid):
                continue
            lnorm = float(np.linalg.norm(promote(l)))
            g1 = diff_linear(l, g)
            if not _nonzero(g1, m * lnorm * g.norm(), tol):
                continue
            if m >= 3 and is_power(g1, cfg.rank_rtol):
                continue
            ex1 = [diff_linear(l, e) for e in ex]
            if any(e1.is_zero() or is_power(e1, cfg.rank_rtol) for e1 in ex1):
                continue
            break
        else:
            raise RetryBudgetExhausted(f"no admissible line found at degree {m}")
        chosen.append(l)
        avoid.append(l)
        ex = [g] + ex1
        g = g1
    # g is now linear: pick l^1 in its orthogonal complement
    rng = rng_stream(seed, "lines", 1)
    if g.is_exact:
        kb = kernel(g.coeffs.reshape(1, 3)).kernel_basis
    else:
        # rational lines must kill both the real and imaginary parts
        gv = promote(g.coeffs)
        kb = kernel(np.stack([gv.real, gv.imag]), cfg.rank_rtol).kernel_basis
        kb = [_rationalize(np.real(k)) for k in kb]
    for _ in range(cfg.retry_lines):
        c = random_nonzero_rational_vector(len(kb), rng, cfg.line_height)
        l = sum((a * k for a, k in zip(c, kb)), as_exact([0, 0, 0]))
        if all(a == 0 for a in l) or any(projectively_equal(l, a) for a in avoid):
            continue
        lnorm = float(np.linalg.norm(promote(l)))
        if not all(_nonzero(diff_linear(l, e), e.degree * lnorm * e.norm(), tol) for e in ex):
            continue
        break
    else:
        raise RetryBudgetExhausted("no admissible line found at degree 1")
    chosen.append(l)
    lines = list(reversed(chosen))
    system = LineSystem.build(f, lines)
    if not system.check(extras, tol):
        raise InvariantViolation("chosen lines fail their defining predicates")
    return system


# --- the level recursion --------------------------------------------------

@dataclass
class LevelState:
    """Decomposition of ``d_{l^{e+1} ... l^d} f`` plus its witnesses.

    ``witnesses[i]`` is the binary form ``d_{l^{e+1} .. (omit l^i) .. l^d} f - F_i``
    (in the chart of ``Ker d_{l^i}``), ``F_i`` being the ``l^i``-antiderivative
    relative to ``dec``; ``witness_lengths[i]`` is its measured binary length.
    """

    e: int
    dec: WeightedDecomposition
    witnesses: dict = field(default_factory=dict, repr=False)
    witness_lengths: dict = field(default_factory=dict)
    attempts: int = 0

    @property
    def s(self) -> int:
        return self.e // 2

    @property
    def eps(self) -> int:
        return self.e % 2

    def check(self):
        if self.dec.count > level_bound(self.e):
            raise InvariantViolation(f"level {self.e}: {self.dec.count} summands "
                                     f"exceed {level_bound(self.e)}")
        want = expected_length(self.e)
        bad = {i: b for i, b in self.witness_lengths.items() if b != want}
        if bad:
            raise InvariantViolation(f"level {self.e}: witness lengths {bad} != {want}")


def _witness(lines: LineSystem, e: int, i: int, dec: WeightedDecomposition, tol: float):
    F = antiderivative_relative(dec, lines.line(i), tol)
    w = lines.omit[(e, i)]
    if w.is_exact != F.is_exact:
        w, F = w.to_float(), F.to_float()
    return lines.chart(i).restrict(w - F)


def initial_state(lines: LineSystem, config: DecomposerConfig | None = None) -> LevelState:
    """Level 0: the empty decomposition of ``d_{l^1 ... l^d} f = 0``."""
    cfg = config or DecomposerConfig()
    d = lines.degree
    dec = WeightedDecomposition.empty(3, 0, exact=True)
    wit, bls = {}, {}
    for i in range(1, d + 1):
        wit[i] = _witness(lines, 0, i, dec, cfg.nonvanishing_tol)
        bls[i] = binary_length(wit[i], cfg.rank_rtol)
    state = LevelState(0, dec, wit, bls)
    state.check()
    return state


def _sample_vector(k: int, rng, height: int, exact: bool):
    c = random_nonzero_rational_vector(k, rng, height)
    return c if exact else np.array([float(a) for a in c])


def _combine(basis, coeffs) -> Form:
    out = None
    for b, c in zip(basis, coeffs):
        term = b * (c if b.is_exact else complex(c))
        out = term if out is None else out + term
    return out


def _unit(v: np.ndarray) -> np.ndarray:
    # exact rows keep their scale; rank is exact there
    if v.dtype == object:
        return v
    return v / np.linalg.norm(v)


def _pencil(H, k_points, rng, cfg) -> list:
    """A random 2-dimensional subspace of span(H) missing each ``k_points`` line."""
    if len(H) == 2:
        return H
    exact = H[0].is_exact
    for _ in range(cfg.retry_h):
        c1 = _sample_vector(len(H), rng, cfg.sample_height, exact)
        c2 = _sample_vector(len(H), rng, cfg.sample_height, exact)
        pl = [_combine(H, c1), _combine(H, c2)]
        M = np.stack([_unit(p.coeffs) for p in pl])
        if matrix_rank(M.T, cfg.rank_rtol) < 2:
            continue
        if all(matrix_rank(np.concatenate([M, _unit(k.coeffs)[None, :]]).T,
                           cfg.rank_rtol) == 3 for k in k_points):
            return pl
    raise RetryBudgetExhausted("no admissible pencil in the apolar component")


def level_step(state: LevelState, lines: LineSystem, config: DecomposerConfig | None = None,
               seed: int = 0) -> LevelState:
    """Advance the recursion from level ``e - 1`` to level ``e``."""
    cfg = config or DecomposerConfig()
    state.check()
    e = state.e + 1
    d = lines.degree
    if e > d:
        raise PreconditionViolated("already at the top level")
    s, eps = divmod(e, 2)
    ell = s + 1 + eps
    tol = cfg.nonvanishing_tol

    le = lines.line(e)
    old = relative_antiderivative_decomposition(state.dec, le, tol)   # G'_e summands
    G = old.power_sum()
    target = lines.suffix[e]
    if G.is_exact != target.is_exact:
        G, target = G.to_float(), target.to_float()
    chart = lines.chart(e)
    gp = chart.restrict(target - G)
    if gp.is_zero():
        raise InvariantViolation(f"level {e}: the binary part vanishes")
    H = apolar_component(gp, ell, cfg.rank_rtol)
    if len(H) != eps + 2:
        raise InvariantViolation(f"level {e}: apolar component has dimension {len(H)}, "
                                 f"expected {eps + 2}")
    later = list(range(e + 1, d + 1))
    k_points = []
    if eps == 1:
        low = apolar_component(gp, s + 1, cfg.rank_rtol)
        if len(low) != 1:
            raise InvariantViolation(f"level {e}: binary length of the level form is not {s + 1}")
        for i in later:
            li = Form(2, 1, chart.dual_to_binary(lines.line(i)), dual=True)
            if li.is_exact != low[0].is_exact:
                li = li.to_float()
            k_points.append(li * low[0])

    rng = rng_stream(seed, "h", e)
    pencil = None
    B = promote(chart.basis)
    line_vecs = [promote(lines.line(i)) for i in later]
    for attempt in range(cfg.retry_h):
        if pencil is None or (eps == 1 and attempt and attempt % cfg.resample_line_every == 0):
            pencil = _pencil(H, k_points, rng, cfg)
        c = _sample_vector(2, rng, cfg.sample_height, pencil[0].is_exact)
        h = _combine(pencil, c)
        try:
            new_state = _try_apolar_element(state, lines, cfg, e, gp, h, B, later,
                                            line_vecs, old)
        except (GenericChoiceFailed, PreconditionViolated) as exc:
            log.debug("level %d attempt %d rejected: %s", e, attempt, exc)
            continue
        new_state.attempts = attempt + 1
        log.info("level %d accepted after %d sample(s); %d summands",
                 e, attempt + 1, new_state.dec.count)
        return new_state
    raise RetryBudgetExhausted(f"level {e}: no admissible apolar element "
                               f"in {cfg.retry_h} samples")


def _try_apolar_element(state, lines, cfg, e, gp, h, B, later, line_vecs, old):
    tol = cfg.nonvanishing_tol
    if h.is_zero():
        raise GenericChoiceFailed("zero sample")
    if not is_squarefree(h, cfg.separation):
        raise GenericChoiceFailed("apolar element is not squarefree")
    pts = roots(h).points
    V = pts @ B
    for lv in line_vecs:
        vals = np.abs(V @ lv)
        if np.any(vals <= tol * np.linalg.norm(lv) * np.linalg.norm(V, axis=1)):
            raise GenericChoiceFailed("a later line vanishes on a new point")
    bdec = decompose_from_apolar(gp, h, cfg.residual_tol, cfg.separation)
    # bdec's binary points equal pts; lift them and renormalize
    Vb = bdec.points @ B
    nrm = np.linalg.norm(Vb, axis=1)
    new = WeightedDecomposition(e, bdec.weights * nrm ** e, Vb / nrm[:, None])
    dec = new.concat(old)
    wit, bls = {}, {}
    want = expected_length(e)
    for i in later:
        wit[i] = _witness(lines, e, i, dec, tol)
        bls[i] = binary_length(wit[i], cfg.rank_rtol)
        if bls[i] != want:
            raise GenericChoiceFailed(f"witness {i} has binary length {bls[i]}, want {want}")
    return LevelState(e, dec, wit, bls)


# --- driver ---------------------------------------------------------------

@dataclass
class DecompositionResult:
    decomposition: WeightedDecomposition
    certificate: object
    lines: LineSystem | None = None
    levels: list = field(default_factory=list)


def _run_levels(f: Form, seed: int, cfg: DecomposerConfig):
    lines = choose_lines(f, seed=seed, config=cfg)
    state = initial_state(lines, cfg)
    states = [state]
    for _ in range(f.degree):
        state = level_step(state, lines, cfg, seed)
        states.append(state)
    return lines, states


def _refit_weights(f: Form, dec: WeightedDecomposition) -> WeightedDecomposition:
    """Least-squares weights for the final points; kept only if the residual drops."""
    if dec.weights.dtype == object:
        return dec
    V = power_matrix(dec.points, f.degree).T
    b = promote(f.coeffs)
    w, *_ = np.linalg.lstsq(V, b, rcond=None)
    if np.linalg.norm(V @ w - b) < np.linalg.norm(V @ dec.weights - b):
        return WeightedDecomposition(f.degree, w, dec.points, check_distinct=False)
    return dec


def decompose_ternary(f: Form, seed: int = 0, config: DecomposerConfig | None = None,
                      tol: float | None = None, keep_states: bool = False) -> DecompositionResult:
    """Decompose a ternary form into at most ``floor((d^2 + 6d + 1) / 4)`` powers.

    The result carries a :class:`~ternary_waring.certify.Certificate`; a
    decomposition the verifier rejects raises :class:`CertificationFailed`.
    """
    from .certify import CertificationFailed, Reject, verify_decomposition

    cfg = config or DecomposerConfig()
    tol = cfg.residual_tol if tol is None else tol
    if f.nvars != 3 or f.dual:
        raise TypeError("decompose_ternary expects a primal ternary form")
    if f.degree == 0:
        raise PreconditionViolated("degree-0 forms are not decomposed")
    if f.is_zero():
        raise ZeroForm("cannot decompose the zero form")
    d = f.degree
    lines = None
    states = []
    root = power_root(f, cfg.rank_rtol)
    if root is not None:
        c, v = root
        if f.is_exact:
            dec = WeightedDecomposition(d, as_exact([c]), as_exact(v).reshape(1, 3))
        else:
            dec = WeightedDecomposition(d, [c], promote(v).reshape(1, 3))
        witness_bls = []
        cert = verify_decomposition(f, dec, tol, seed=seed)
        if isinstance(cert, Reject):
            raise CertificationFailed(cert)
    else:
        last = None
        for attempt in range(cfg.restarts + 1):
            run_seed = seed if attempt == 0 else \
                int(rng_stream(seed, "restart", attempt).integers(2 ** 62))
            try:
                lines, states = _run_levels(f, run_seed, cfg)
            except (GenericChoiceFailed, RetryBudgetExhausted) as exc:
                last = exc
                log.info("restart %d: %s", attempt, exc)
                continue
            dec = _refit_weights(f, states[-1].dec)
            witness_bls = [[st.witness_lengths[i] for i in sorted(st.witness_lengths)]
                           for st in states]
            cert = verify_decomposition(f, dec, tol, seed=seed,
                                        per_level_witness_bls=witness_bls)
            if not isinstance(cert, Reject):
                break
            last = CertificationFailed(cert)
            log.info("restart %d: %s", attempt, cert.reason)
        else:
            raise last
    if not keep_states:
        for st in states:
            st.witnesses = {}
    return DecompositionResult(dec, cert, lines, states)
