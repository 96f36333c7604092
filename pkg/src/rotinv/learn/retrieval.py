"""Leave-one-out Euclidean retrieval with precision and average precision."""

from __future__ import annotations

from collections import Counter

import numpy as np

from ..datasets import CLUSTER3, CLUSTER5
from ..errors import DegenerateClass, DimensionMismatch, RankOutOfRange
from .report import EvalReport


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D feature matrix, got shape {X.shape}")
    return X


def euclidean_rank(query, gallery, query_index: int | None = None):
    """Gallery indices sorted by L2 distance to ``query``, ties by index.

    ``query_index`` (when the query is itself a gallery row) is removed.
    Returns ``(order, distances)`` with distances in ranked order.
    """
    G = _as_matrix(gallery)
    q = np.asarray(query, dtype=np.float64).ravel()
    if q.size != G.shape[1]:
        raise DimensionMismatch(f"query has {q.size} features, gallery {G.shape[1]}")
    d = np.sqrt(np.sum((G - q) ** 2, axis=1))
    ids = np.arange(G.shape[0])
    if query_index is not None:
        keep = ids != query_index
        ids, d = ids[keep], d[keep]
    order = np.lexsort((ids, d))
    return ids[order], d[order]


def precision_at_k(relevant, k: int) -> float:
    """Fraction of relevant items among the first ``k`` of a ranked relevance list."""
    rel = np.asarray(relevant, dtype=bool)
    if not 1 <= k <= rel.size:
        raise RankOutOfRange(f"k={k} outside 1..{rel.size}")
    return float(rel[:k].sum()) / k


def average_precision(relevant, n_class_examples: int) -> float:
    """``sum_k P_k rel(k) / (N - 1)``, ``N`` counting the query's own class."""
    if n_class_examples < 2:
        raise DegenerateClass("need at least two examples in the query class")
    rel = np.asarray(relevant, dtype=bool)
    hits = np.cumsum(rel)
    ranks = np.arange(1, rel.size + 1)
    return float(np.sum((hits / ranks)[rel])) / (n_class_examples - 1)


def group_labels(labels, grouping: int) -> list[str | None]:
    """Map class labels onto the 11-, 5- or 3-class grouping (``None`` = dropped)."""
    if grouping == 11:
        return list(labels)
    if grouping == 5:
        return [CLUSTER5[l] for l in labels]
    if grouping == 3:
        return [CLUSTER3.get(l) for l in labels]
    raise ValueError(f"grouping must be 11, 5 or 3, got {grouping}")


def retrieval_eval(X, labels, grouping: int = 11) -> EvalReport:
    """Leave-one-out retrieval over every item.

    Groupings 11 and 3 report the precision at rank ``N_i - 1`` (all other
    members of the query's class) and the mean average precision. Grouping 5
    reports the precision at ``k_min``, the smallest class size.
    """
    X = _as_matrix(X)
    groups = group_labels(labels, grouping)
    keep = np.array([g is not None for g in groups])
    X = X[keep]
    groups = [g for g in groups if g is not None]
    sizes = Counter(groups)
    g_arr = np.array(groups, dtype=object)
    k_min = min(sizes.values())

    p_vals, ap_vals = [], []
    for i in range(X.shape[0]):
        order, _ = euclidean_rank(X[i], X, query_index=i)
        rel = g_arr[order] == g_arr[i]
        n_i = sizes[groups[i]]
        if grouping == 5:
            p_vals.append(precision_at_k(rel, k_min))
        else:
            p_vals.append(precision_at_k(rel, n_i - 1))
            ap_vals.append(average_precision(rel, n_i))

    p_name = f"p_at_{k_min}" if grouping == 5 else "p"
    per = {p_name: np.array(p_vals)}
    if ap_vals:
        per["ap"] = np.array(ap_vals)
    rows = [{"query": i, **{k: float(v[i]) for k, v in per.items()}} for i in range(X.shape[0])]
    return EvalReport.from_rows(rows, list(per), kind="retrieval",
                                meta={"grouping": grouping, "k_min": k_min,
                                      "n_items": int(X.shape[0])})
