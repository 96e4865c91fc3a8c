"""Input checks shared by the estimator classes."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .context import FormalContext

__all__ = ["check_incidence", "context_from_array"]


def check_incidence(X) -> np.ndarray:
    """Return ``X`` as a 2-d bool array; only 0/1 or boolean cells are accepted."""
    arr = check_array(X, dtype=None, ensure_min_samples=0, ensure_min_features=0)
    if arr.dtype == bool:
        return arr
    if arr.dtype.kind not in "iuf":
        raise ValueError(f"incidence must be boolean or 0/1, got dtype {arr.dtype}")
    bad = ~np.isin(arr, (0, 1))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise ValueError(f"incidence cell ({i}, {j}) is {arr[i, j].item()!r}, expected 0 or 1")
    return arr.astype(bool)


def context_from_array(X, feature_names=None, object_names=None) -> FormalContext:
    """Build a FormalContext from an array or a DataFrame (index = objects, columns = attributes)."""
    if feature_names is None and hasattr(X, "columns"):
        feature_names = [str(c) for c in X.columns]
    if object_names is None and hasattr(X, "columns"):
        object_names = [str(i) for i in X.index]
    arr = check_incidence(X)
    g, m = arr.shape
    if feature_names is None:
        feature_names = [f"x{j}" for j in range(m)]
    if object_names is None:
        object_names = [f"g{i}" for i in range(g)]
    if len(feature_names) != m:
        raise ValueError(f"{len(feature_names)} feature names for {m} columns")
    return FormalContext(object_names, feature_names, arr)
