"""scikit-learn style wrappers around the context-level constructions.

Rows of ``X`` are objects, columns attributes, cells 0/1.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .completion import birkhoff_completion_context, birkhoff_completion_context_downset
from .context import FormalContext, clarify, irreducible_attribute_labels, negated
from .implications import _closure_mask, canonical_direct_basis, distributive_part
from .validation import check_incidence, context_from_array

__all__ = ["BirkhoffCompletion", "CanonicalDirectBasis"]


def _masks(arr: np.ndarray) -> list[int]:
    weights = [1 << j for j in range(arr.shape[1])]
    return [sum(w for w, v in zip(weights, row) if v) for row in arr]


def _unmask(masks, m: int) -> np.ndarray:
    out = np.zeros((len(masks), m), dtype=bool)
    for i, s in enumerate(masks):
        for j in range(m):
            out[i, j] = bool(s >> j & 1)
    return out


class _ContextEstimator(TransformerMixin, BaseEstimator):
    def _fit_context(self, X, feature_names) -> FormalContext:
        K = context_from_array(X, feature_names)
        self.n_features_in_ = len(K.attributes)
        self.feature_names_in_ = np.array(K.attributes, dtype=object)
        return K

    def _check_X(self, X) -> np.ndarray:
        check_is_fitted(self)
        arr = check_incidence(X)
        if arr.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {arr.shape[1]} features, expected {self.n_features_in_}")
        return arr


class BirkhoffCompletion(_ContextEstimator):
    """Birkhoff completion of the context spanned by the training rows.

    ``kind="up"`` adds negated objects; :meth:`transform` maps every row to its
    closure in the completed context.  ``kind="down"`` adds negated attributes;
    :meth:`transform` appends one column per added attribute.
    """

    def __init__(self, kind: str = "up", feature_names=None):
        self.kind = kind
        self.feature_names = feature_names

    def fit(self, X, y=None):
        if self.kind not in ("up", "down"):
            raise ValueError(f"kind must be 'up' or 'down', got {self.kind!r}")
        K = self._fit_context(X, self.feature_names)
        build = birkhoff_completion_context if self.kind == "up" else birkhoff_completion_context_downset
        self.context_, self.report_ = build(K)
        self.generators_ = list(self.report_.generators)
        return self

    def transform(self, X):
        arr = self._check_X(X)
        BK = self.context_
        m = self.n_features_in_
        rows = _masks(arr)
        if self.kind == "up":
            return _unmask([BK.closure_mask(r) for r in rows], m)
        # ~not:g is held by a row unless the row's attributes all belong to g's intent
        full = (1 << m) - 1
        intents = {negated(g): r & full for g, r in zip(BK.objects, BK.row_masks)}
        cols = [[bool(r & ~intents[name]) for r in rows] for name in self.generators_]
        new = np.array(cols, dtype=bool).T.reshape(len(rows), len(cols))
        return np.hstack([arr, new])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self)
        names = list(self.feature_names_in_)
        if self.kind == "down":
            names += self.generators_
        return np.array(names, dtype=object)


class CanonicalDirectBasis(_ContextEstimator):
    """Canonical direct basis of the training context.

    Reducible attributes are removed before the basis is computed and restored
    by :meth:`transform`, which closes every row.  ``score`` is the fraction of
    rows already closed.
    """

    def __init__(self, distributive_only: bool = False, feature_names=None):
        self.distributive_only = distributive_only
        self.feature_names = feature_names

    def fit(self, X, y=None):
        K = self._fit_context(X, self.feature_names)
        C = clarify(K)
        keep = irreducible_attribute_labels(C)
        R = C.select(attributes=keep)
        basis = canonical_direct_basis(R)
        if self.distributive_only:
            basis = distributive_part(basis)
        self.implications_ = basis
        self.reduced_attributes_ = list(keep)
        # every attribute of K is fixed by the reduced attributes whose extents contain its extent
        cols = K.col_masks
        self.upper_ = {
            m: frozenset(n for n in keep if (cols[K.attribute_index[m]] & ~cols[K.attribute_index[n]]) == 0)
            for m in K.attributes
        }
        return self

    def _close(self, row: int) -> int:
        names = list(self.feature_names_in_)
        pos = {n: k for k, n in enumerate(self.reduced_attributes_)}
        s = 0
        for j, m in enumerate(names):
            if row >> j & 1:
                for n in self.upper_[m]:
                    s |= 1 << pos[n]
        _, pairs = self.implications_._masks()
        s = _closure_mask(pairs, s)
        out = 0
        for j, m in enumerate(names):
            if all(s >> pos[n] & 1 for n in self.upper_[m]):
                out |= 1 << j
        return out | row

    def transform(self, X):
        arr = self._check_X(X)
        return _unmask([self._close(r) for r in _masks(arr)], self.n_features_in_)

    def score(self, X, y=None) -> float:
        arr = self._check_X(X)
        rows = _masks(arr)
        if not rows:
            return 1.0
        return sum(self._close(r) == r for r in rows) / len(rows)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self)
        return np.array(self.feature_names_in_, dtype=object)
