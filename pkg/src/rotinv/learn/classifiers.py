"""Binary linear classifiers: linear SVM, Bayesian LDA, stepwise LDA and ELM.

Labels are 0/1 with 1 the positive (spiral) class. Every ``decision_function``
returns continuous scores, higher meaning more likely positive, with 0 as the
natural decision threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import f as f_dist

from ..errors import DimensionMismatch, NonFinite, SingleClass


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).ravel().astype(int)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise DimensionMismatch(f"X {X.shape} does not match {y.size} labels")
    if not np.all(np.isfinite(X)):
        raise NonFinite("features contain NaN or inf")
    if not (np.any(y == 1) and np.any(y == 0)):
        raise SingleClass("training data needs both classes")
    return X, y


def _signed(y):
    return np.where(y == 1, 1.0, -1.0)


class _Linear:
    coef_: np.ndarray
    intercept_: float

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.coef_.size:
            raise DimensionMismatch(f"expected {self.coef_.size} features, got {X.shape}")
        return X @ self.coef_ + self.intercept_


class LinearSVM(_Linear):
    """L1-loss linear SVM trained by dual coordinate descent.

    The bias is learnt as an extra constant feature (so it is regularized too).
    Training stops when the spread of projected gradients over one pass drops
    below ``tol`` (0.1 matches liblinear's dual solvers).
    """

    def __init__(self, c_reg: float = 1.0, tol: float = 0.1, max_iter: int = 1000, seed: int = 0):
        self.c_reg = c_reg
        self.tol = tol
        self.max_iter = max_iter
        self.seed = seed

    def fit(self, X, y) -> "LinearSVM":
        X, y = _check_xy(X, y)
        n, d = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        ys = _signed(y)
        qd = np.einsum("ij,ij->i", Xa, Xa)
        alpha = np.zeros(n)
        w = np.zeros(d + 1)
        c = self.c_reg
        rng = np.random.default_rng(self.seed)
        self.n_iter_ = 0
        for it in range(self.max_iter):
            pg_max, pg_min = -np.inf, np.inf
            for i in rng.permutation(n):
                xi = Xa[i]
                g = ys[i] * float(w @ xi) - 1.0
                a = alpha[i]
                if a == 0.0:
                    pg = min(g, 0.0)
                elif a == c:
                    pg = max(g, 0.0)
                else:
                    pg = g
                pg_max = max(pg_max, pg)
                pg_min = min(pg_min, pg)
                if pg != 0.0 and qd[i] > 0:
                    new = min(max(a - g / qd[i], 0.0), c)
                    if new != a:
                        w += (new - a) * ys[i] * xi
                        alpha[i] = new
            self.n_iter_ = it + 1
            if pg_max - pg_min < self.tol:
                break
        self.alpha_ = alpha
        self.coef_ = w[:d].copy()
        self.intercept_ = float(w[d])
        return self


class BLDA(_Linear):
    """Bayesian linear discriminant: evidence-maximized ridge on +-1 targets.

    The weight prior precision ``alpha`` and noise precision ``beta`` are
    re-estimated with MacKay's fixed-point updates until both change by less
    than ``tol`` (relative) or ``max_iter`` is reached. The intercept is left
    unregularized by centering.
    """

    def __init__(self, tol: float = 1e-6, max_iter: int = 100):
        self.tol = tol
        self.max_iter = max_iter

    @staticmethod
    def _prepare(X, y):
        X, y = _check_xy(X, y)
        t = _signed(y)
        x_mean, t_mean = X.mean(axis=0), t.mean()
        Xc, tc = X - x_mean, t - t_mean
        lam, vec = np.linalg.eigh(Xc.T @ Xc)
        lam = np.clip(lam, 0.0, None)
        return Xc, tc, x_mean, t_mean, lam, vec, vec.T @ (Xc.T @ tc)

    @staticmethod
    def _mean(lam, vec, proj, alpha, beta):
        return vec @ (beta * proj / (alpha + beta * lam))

    @classmethod
    def posterior_mean(cls, X, y, alpha: float, beta: float) -> np.ndarray:
        """Weight posterior mean at fixed hyperparameters (no evidence updates)."""
        _, _, _, _, lam, vec, proj = cls._prepare(X, y)
        return cls._mean(lam, vec, proj, alpha, beta)

    def fit(self, X, y) -> "BLDA":
        Xc, tc, x_mean, t_mean, lam, vec, proj = self._prepare(X, y)
        n = Xc.shape[0]
        alpha, beta = 1.0, 1.0 / max(np.var(tc), 1e-12)
        for it in range(self.max_iter):
            m = self._mean(lam, vec, proj, alpha, beta)
            gamma = float(np.sum(beta * lam / (alpha + beta * lam)))
            resid = float(np.sum((tc - Xc @ m) ** 2))
            new_alpha = gamma / max(float(m @ m), 1e-300)
            new_beta = (n - gamma) / max(resid, 1e-300)
            done = (abs(new_alpha - alpha) <= self.tol * abs(alpha)
                    and abs(new_beta - beta) <= self.tol * abs(beta))
            alpha, beta = new_alpha, new_beta
            if done:
                break
        self.n_iter_ = it + 1
        self.alpha_, self.beta_ = alpha, beta
        self.coef_ = self._mean(lam, vec, proj, alpha, beta)
        self.intercept_ = float(t_mean - x_mean @ self.coef_)
        return self


def scatter_matrices(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Within-class and total scatter (sums of squares and cross products)."""
    Xt = X - X.mean(axis=0)
    total = Xt.T @ Xt
    within = np.zeros_like(total)
    for c in (0, 1):
        Xk = X[y == c] - X[y == c].mean(axis=0)
        within += Xk.T @ Xk
    return within, total


def _cond_var(S, sel, inv_ss, cand):
    """Conditional variance of each candidate given the selected block."""
    if not sel:
        return np.diag(S)[cand]
    cross = S[np.ix_(cand, sel)]
    return np.diag(S)[cand] - np.einsum("ij,jk,ik->i", cross, inv_ss, cross)


class StepwiseLDA(_Linear):
    """Fisher LDA on features picked by stepwise selection on Wilks' lambda.

    Each step enters the candidate with the smallest partial-F p-value if it is
    below ``p_enter``, then removes the selected feature with the largest
    p-value if that exceeds ``p_remove``. Candidates whose within-class
    conditional variance is numerically zero are skipped.
    """

    def __init__(self, p_enter: float = 0.05, p_remove: float = 0.10,
                 max_steps: int | None = None, tol: float = 1e-8):
        if p_enter >= p_remove:
            raise ValueError("p_enter must be smaller than p_remove")
        self.p_enter = p_enter
        self.p_remove = p_remove
        self.max_steps = max_steps
        self.tol = tol

    def _enter_stats(self, W, T, sel, n):
        d = W.shape[0]
        cand = [j for j in range(d) if j not in sel]
        if not cand:
            return [], np.array([]), np.array([])
        inv_w = np.linalg.inv(W[np.ix_(sel, sel)]) if sel else None
        inv_t = np.linalg.inv(T[np.ix_(sel, sel)]) if sel else None
        wv = _cond_var(W, sel, inv_w, cand)
        tv = _cond_var(T, sel, inv_t, cand)
        ok = (wv > self.tol * np.maximum(np.diag(W)[cand], 1e-300)) & (tv > 0)
        p = len(sel)
        df2 = n - 2 - p
        ratio = np.where(ok, tv / np.where(ok, wv, 1.0), 1.0)
        fval = (ratio - 1.0) * df2
        pval = np.where(ok, f_dist.sf(fval, 1, df2), 1.0) if df2 > 0 else np.ones(len(cand))
        return cand, fval, pval

    def _remove_stats(self, W, T, sel, n):
        inv_w = np.linalg.inv(W[np.ix_(sel, sel)])
        inv_t = np.linalg.inv(T[np.ix_(sel, sel)])
        ratio = np.diag(inv_w) / np.diag(inv_t)
        df2 = n - 2 - (len(sel) - 1)
        fval = (ratio - 1.0) * df2
        return fval, f_dist.sf(fval, 1, df2)

    def fit(self, X, y) -> "StepwiseLDA":
        X, y = _check_xy(X, y)
        n, d = X.shape
        W, T = scatter_matrices(X, y)
        sel: list[int] = []
        self.entry_pvalues_: dict[int, float] = {}
        self.history_: list[tuple[str, int, float]] = []
        max_steps = self.max_steps or 4 * d
        for _ in range(max_steps):
            changed = False
            cand, _, pval = self._enter_stats(W, T, sel, n)
            if len(cand):
                j = int(np.argmin(pval))
                if pval[j] < self.p_enter:
                    sel.append(cand[j])
                    self.entry_pvalues_[cand[j]] = float(pval[j])
                    self.history_.append(("enter", cand[j], float(pval[j])))
                    changed = True
            if len(sel) > 1:
                _, rp = self._remove_stats(W, T, sel, n)
                j = int(np.argmax(rp))
                if rp[j] > self.p_remove:
                    self.history_.append(("remove", sel[j], float(rp[j])))
                    self.entry_pvalues_.pop(sel[j], None)
                    del sel[j]
                    changed = True
            if not changed:
                break
        if not sel:
            # nothing is significant: fall back to the single best feature
            cand, _, pval = self._enter_stats(W, T, [], n)
            sel = [cand[int(np.argmin(pval))]]
        self.selected_ = sorted(sel)
        s = self.selected_
        mu0 = X[y == 0][:, s].mean(axis=0)
        mu1 = X[y == 1][:, s].mean(axis=0)
        w_sel = np.linalg.pinv(W[np.ix_(s, s)] / (n - 2)) @ (mu1 - mu0)
        coef = np.zeros(d)
        coef[s] = w_sel
        self.coef_ = coef
        self.intercept_ = float(-w_sel @ (mu0 + mu1) / 2.0)
        return self


def _sigmoid(a):
    return 0.5 * (1.0 + np.tanh(0.5 * a))


class ELM:
    """Single hidden layer of random sigmoid units with a ridge output layer.

    The random input weights are orthonormalized: orthonormal columns when
    ``hidden <= n_features``, orthonormal rows otherwise.
    """

    def __init__(self, hidden: int = 1000, ridge: float = 1e-6, seed: int = 0):
        self.hidden = hidden
        self.ridge = ridge
        self.seed = seed

    def _hidden(self, X):
        return _sigmoid(X @ self.weights_ + self.biases_)

    def fit(self, X, y) -> "ELM":
        X, y = _check_xy(X, y)
        d = X.shape[1]
        rng = np.random.default_rng(self.seed)
        raw = rng.standard_normal((d, self.hidden))
        if self.hidden <= d:
            q, _ = np.linalg.qr(raw)
            self.weights_ = q
        else:
            q, _ = np.linalg.qr(raw.T)
            self.weights_ = q.T
        self.biases_ = rng.uniform(-1.0, 1.0, self.hidden)
        H = self._hidden(X)
        a = H.T @ H + self.ridge * np.eye(self.hidden)
        self.beta_ = np.linalg.solve(a, H.T @ _signed(y))
        return self

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.weights_.shape[0]:
            raise DimensionMismatch(f"expected {self.weights_.shape[0]} features, got {X.shape}")
        return self._hidden(X) @ self.beta_


KINDS = ("svm", "blda", "steplda", "elm")


def zscore_fit_apply(train, test=None):
    """Standardize with training statistics; near-constant columns map to 0.

    Returns ``(train_z, test_z, mean, std)``.
    """
    train = np.asarray(train, dtype=np.float64)
    if train.shape[0] == 0:
        raise ValueError("training matrix is empty")
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    scale = np.where(std < 1e-12, np.inf, std)
    tr = (train - mean) / scale
    te = None if test is None else (np.asarray(test, dtype=np.float64) - mean) / scale
    return tr, te, mean, scale


@dataclass
class ClassifierModel:
    kind: str
    estimator: object
    mean: np.ndarray | None = None
    scale: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if self.mean is None:
            return X
        if X.ndim != 2 or X.shape[1] != self.mean.size:
            raise DimensionMismatch(f"expected {self.mean.size} features, got {X.shape}")
        return (X - self.mean) / self.scale


def make_estimator(kind: str, seed: int = 0, **params):
    if kind == "svm":
        return LinearSVM(seed=seed, **params)
    if kind == "blda":
        return BLDA(**params)
    if kind == "steplda":
        return StepwiseLDA(**params)
    if kind == "elm":
        return ELM(seed=seed, **params)
    raise ValueError(f"unknown classifier kind {kind!r}")


def train(kind: str, X, y, zscore: bool = True, seed: int = 0, **params) -> ClassifierModel:
    X, y = _check_xy(X, y)
    mean = scale = None
    if zscore:
        X, _, mean, scale = zscore_fit_apply(X)
    est = make_estimator(kind, seed=seed, **params).fit(X, y)
    return ClassifierModel(kind, est, mean, scale, dict(params))


def train_svm(X, y, c_reg: float = 1.0, zscore: bool = True, seed: int = 0) -> ClassifierModel:
    return train("svm", X, y, zscore, seed, c_reg=c_reg)


def train_blda(X, y, zscore: bool = True) -> ClassifierModel:
    return train("blda", X, y, zscore)


def train_steplda(X, y, p_enter: float = 0.05, p_remove: float = 0.10,
                  zscore: bool = True) -> ClassifierModel:
    return train("steplda", X, y, zscore, p_enter=p_enter, p_remove=p_remove)


def train_elm(X, y, hidden: int = 1000, seed: int = 0, zscore: bool = True) -> ClassifierModel:
    return train("elm", X, y, zscore, seed, hidden=hidden)


def predict_scores(model: ClassifierModel, X) -> np.ndarray:
    return model.estimator.decision_function(model.transform(X))
