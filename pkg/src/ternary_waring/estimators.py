"""scikit-learn style wrappers around the decomposers.

The "samples" are forms.  ``fit`` decomposes them and keeps the results;
``transform`` maps forms to decompositions and ``inverse_transform`` maps
decompositions back to forms by expanding the power sums.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .binary import sylvester_min_decompose
from .certify import verify_decomposition
from .decomposer import DecomposerConfig, decompose_ternary
from .forms import Form, WeightedDecomposition
from .io import form_hash
from .validation import check_form, check_positive_int, check_seed, check_tolerance


def _as_batch(X) -> tuple[list, bool]:
    if isinstance(X, (Form, dict)):
        return [X], True
    return list(X), False


class _FormDecomposer(TransformerMixin, BaseEstimator):
    _nvars = 3

    def _decompose(self, f: Form):
        raise NotImplementedError

    def _run(self, X):
        forms, single = _as_batch(X)
        forms = [check_form(f, nvars=self._nvars) for f in forms]
        cache = getattr(self, "_cache", {})
        out = []
        for f in forms:
            key = form_hash(f)
            if key not in cache:
                cache[key] = self._decompose(f)
            out.append(cache[key])
        self._cache = cache
        return out, single

    def fit(self, X, y=None):
        """Decompose ``X`` (one form or a sequence of forms)."""
        self._cache = {}
        results, single = self._run(X)
        self.decompositions_ = [r[0] for r in results]
        self.certificates_ = [r[1] for r in results]
        self.n_forms_ = len(results)
        self._store_single(results[0] if single else None)
        return self

    def _store_single(self, result) -> None:
        if result is not None:
            self.decomposition_, self.certificate_ = result[0], result[1]

    def transform(self, X):
        check_is_fitted(self, "decompositions_")
        results, single = self._run(X)
        decs = [r[0] for r in results]
        return decs[0] if single else decs

    def fit_transform(self, X, y=None, **fit_params):
        self.fit(X, y)
        return self.decomposition_ if isinstance(X, (Form, dict)) else list(self.decompositions_)

    def inverse_transform(self, D):
        check_is_fitted(self, "decompositions_")
        if isinstance(D, WeightedDecomposition):
            return D.power_sum()
        return [d.power_sum() for d in D]

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = True
        tags.non_deterministic = False
        return tags


class WaringDecomposer(_FormDecomposer):
    """Decompose ternary forms into at most ``floor((d^2 + 6d + 1) / 4)`` powers.

    Parameters
    ----------
    seed : int or None
        Top-level seed; ``None`` falls back to ``$WARING_SEED`` and then 0.
    tol : float
        Relative residual accepted by the certificate check.
    retry_lines, retry_h : int
        Sampling budgets for the line system and for each level.
    absorb_weights : bool
        Fold the weights into the linear forms (all output weights equal 1).

    Attributes
    ----------
    decomposition_, certificate_, lines_
        Results for a single fitted form.
    decompositions_, certificates_
        Results for every fitted form.
    """

    def __init__(self, seed=None, tol=1e-9, retry_lines=64, retry_h=200,
                 absorb_weights=False):
        self.seed = seed
        self.tol = tol
        self.retry_lines = retry_lines
        self.retry_h = retry_h
        self.absorb_weights = absorb_weights

    def _config(self) -> DecomposerConfig:
        return DecomposerConfig(retry_lines=check_positive_int(self.retry_lines, "retry_lines"),
                                retry_h=check_positive_int(self.retry_h, "retry_h"))

    def _decompose(self, f: Form):
        r = decompose_ternary(f, seed=check_seed(self.seed), config=self._config(),
                              tol=check_tolerance(self.tol))
        dec = r.decomposition.absorb_weights() if self.absorb_weights else r.decomposition
        return dec, r.certificate, None if r.lines is None else list(r.lines.lines)

    def _store_single(self, result) -> None:
        super()._store_single(result)
        if result is not None:
            self.lines_ = result[2]


class SylvesterDecomposer(_FormDecomposer):
    """Shortest decompositions of binary forms by scanning their apolar ideals."""

    _nvars = 2

    def __init__(self, seed=None, tol=1e-9, max_samples=50):
        self.seed = seed
        self.tol = tol
        self.max_samples = max_samples

    def _decompose(self, f: Form):
        tol = check_tolerance(self.tol)
        dec = sylvester_min_decompose(f, seed=check_seed(self.seed),
                                      max_samples=check_positive_int(self.max_samples,
                                                                     "max_samples"),
                                      tol=tol)
        return dec, verify_decomposition(f, dec, tol)
