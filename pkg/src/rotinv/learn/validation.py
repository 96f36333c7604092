"""Stratified k-fold cross-validation and the confidence-threshold sweep."""

from __future__ import annotations

import numpy as np

from ..errors import RotinvError, TooFewItems
from .classifiers import predict_scores, train, zscore_fit_apply
from .metrics import auc, confusion_metrics
from .report import EvalReport

CLASSIFICATION_METRICS = ["auc", "fscore", "tpr", "fpr", "fnr", "tnr"]

__all__ = ["CLASSIFICATION_METRICS", "kfold_split", "cv_classify", "cv_classify_features",
           "dataset_features", "confidence_sweep", "zscore_fit_apply"]


def kfold_split(n: int, k: int, seed: int = 0, labels=None) -> np.ndarray:
    """Fold index (0..k-1) for each of ``n`` items.

    Items are permuted within each class, the per-class permutations are
    concatenated, and position ``i`` goes to fold ``i mod k``. Fold sizes are
    therefore ``ceil(n/k)`` or ``floor(n/k)`` and each class is spread as
    evenly as possible.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if n < k:
        raise TooFewItems(f"cannot split {n} items into {k} folds")
    rng = np.random.default_rng(seed)
    if labels is None:
        order = rng.permutation(n)
    else:
        labels = np.asarray(labels)
        if labels.size != n:
            raise ValueError("labels length differs from n")
        order = np.concatenate([rng.permutation(np.flatnonzero(labels == c))
                                for c in np.unique(labels)])
    folds = np.empty(n, dtype=int)
    folds[order] = np.arange(n) % k
    return folds


def cv_classify_features(X, y, kind: str = "steplda", folds: int = 10, seed: int = 0,
                         zscore: bool = True, meta: dict | None = None, **params) -> EvalReport:
    """Cross-validated scores and metrics for a precomputed feature matrix."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(int)
    assign = kfold_split(len(y), folds, seed, labels=y)
    rows = []
    for f in range(folds):
        test = assign == f
        model = train(kind, X[~test], y[~test], zscore=zscore, seed=seed + f, **params)
        s = predict_scores(model, X[test])
        row = {"fold": f + 1, "auc": auc(s, y[test])}
        row.update(confusion_metrics(s, y[test]))
        rows.append(row)
    info = {"classifier": kind, "folds": folds, "seed": seed, "zscore": zscore,
            "n_examples": int(len(y)), **(meta or {})}
    return EvalReport.from_rows(rows, CLASSIFICATION_METRICS, "classification", info)


def dataset_features(ds, extractor, levels: int = 4, sigma: float = 2.0,
                     workers: int = 1) -> np.ndarray:
    """Pyramid features of every item, one row per item (``levels=0`` skips the pyramid)."""
    from ..datasets import _parallel_map
    from ..preprocess import laplacian_pyramid, pyramid_features

    def run(item):
        if levels:
            return pyramid_features(laplacian_pyramid(item.data, levels, sigma), extractor).values
        return extractor(item.data).values

    return np.vstack(_parallel_map(run, list(ds), workers))


def cv_classify(ds, extractor, kind: str = "steplda", folds: int = 10, seed: int = 0,
                zscore: bool = True, levels: int = 4, workers: int = 1, **params) -> EvalReport:
    X = dataset_features(ds, extractor, levels, workers=workers)
    meta = {"family": extractor.tag, "levels": levels, "condition": ds.condition}
    return cv_classify_features(X, ds.labels, kind, folds, seed, zscore, meta, **params)


def confidence_sweep(image_dir, labels, taus, extractor, kind: str = "steplda",
                     folds: int = 10, seed: int = 0, levels: int = 4,
                     workers: int = 1) -> EvalReport:
    """One row per tau with (tau, n_examples, auc, fscore).

    A tau that fails (for instance no row passes the filter) yields NaN metrics
    and the error message in the row's ``error`` field.
    """
    from ..datasets import ingest_gz2, read_labels

    manifest = read_labels(labels)
    rows = []
    for i, tau in enumerate(taus):
        row = {"query": i + 1, "tau": float(tau), "n_examples": 0}
        try:
            ds = ingest_gz2(image_dir, labels, tau, workers, rows=manifest)
            row["n_examples"] = len(ds)
            rep = cv_classify(ds, extractor, kind, folds, seed, levels=levels, workers=workers)
            row.update(auc=rep.mean["auc"], fscore=rep.mean["fscore"], error="")
        except RotinvError as exc:
            row.update(auc=float("nan"), fscore=float("nan"),
                       error=f"{type(exc).__name__}: {exc}")
        rows.append(row)
    rep = EvalReport(rows, ["tau", "n_examples", "auc", "fscore"], {}, {}, "sweep",
                     {"family": extractor.tag, "classifier": kind})
    return rep
