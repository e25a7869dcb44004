"""Five binary classifiers written against plain numpy.

All learners see the same input: rows z-scored with training statistics
and then multiplied by the per-feature weight vector. Labels are +1/-1 at
the API boundary; each learner converts internally as needed. Ties resolve
to the positive class everywhere.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from numba import njit

from .dataset import POSITIVE, Dataset, int_to_label
from .features import N_FEATURES, FeatureVector, StandardizationParams, standardize_apply, standardize_fit

ALGORITHMS = ("svm", "naive-bayes", "decision-tree", "linear-regression", "logistic-regression")
MODEL_FORMAT_VERSION = 1


class TrainingError(ValueError):
    pass


class PredictionError(ValueError):
    pass


@dataclass(frozen=True)
class HyperParams:
    logistic_l2: float = 1e-3
    logistic_epochs: int = 500
    logistic_step: float = 0.1
    svm_penalty: float = 1e-2
    svm_epochs: int = 50
    tree_max_depth: int = 8
    tree_min_leaf: int = 2
    ridge_eps: float = 1e-6

    @classmethod
    def from_dict(cls, d: dict) -> "HyperParams":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)


# ---------------------------------------------------------------- naive Bayes

def fit_naive_bayes(X: np.ndarray, y: np.ndarray) -> dict:
    overall = X.var(axis=0).max() if X.size else 0.0
    floor = 1e-9 * overall if overall > 0 else 1e-9
    params = {}
    for name, cls in (("pos", POSITIVE), ("neg", -POSITIVE)):
        rows = X[y == cls]
        params[name] = {
            "prior": len(rows) / len(X),
            "mean": rows.mean(axis=0),
            "var": np.maximum(rows.var(axis=0), floor),
        }
    return params


def naive_bayes_log_joint(params: dict, X: np.ndarray) -> np.ndarray:
    """``(n, 2)`` log p(x, c) for c = positive, negative."""
    out = []
    for name in ("pos", "neg"):
        p = params[name]
        ll = -0.5 * (np.log(2 * np.pi * p["var"]) + (X - p["mean"]) ** 2 / p["var"])
        out.append(np.log(p["prior"]) + ll.sum(axis=1))
    return np.column_stack(out)


def naive_bayes_score(params: dict, X: np.ndarray) -> np.ndarray:
    """Posterior probability of the positive class."""
    lj = naive_bayes_log_joint(params, X)
    # p(pos|x) = 1 / (1 + exp(lneg - lpos)), computed stably
    return _sigmoid(lj[:, 0] - lj[:, 1])


# ---------------------------------------------------------------- logistic regression

def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(theta: np.ndarray, X: np.ndarray, t: np.ndarray, l2: float) -> float:
    """Mean negative log-likelihood plus ``l2/2 * |w|^2``; ``theta = [w, b]``, t in {0, 1}."""
    z = X @ theta[:-1] + theta[-1]
    # log(1 + e^z) - t z
    nll = np.logaddexp(0.0, z) - t * z
    return float(nll.mean() + 0.5 * l2 * theta[:-1] @ theta[:-1])


def logistic_gradient(theta: np.ndarray, X: np.ndarray, t: np.ndarray, l2: float) -> np.ndarray:
    z = X @ theta[:-1] + theta[-1]
    r = _sigmoid(z) - t
    g = np.empty_like(theta)
    g[:-1] = X.T @ r / len(t) + l2 * theta[:-1]
    g[-1] = r.mean()
    return g


@njit(cache=True, nogil=True)
def _logistic_descent(X, t, l2, step, epochs):
    # same update as logistic_gradient, compiled
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    r = np.empty(n)
    for _ in range(epochs):
        z = X @ w + b
        for i in range(n):
            if z[i] >= 0:
                r[i] = 1.0 / (1.0 + np.exp(-z[i])) - t[i]
            else:
                ez = np.exp(z[i])
                r[i] = ez / (1.0 + ez) - t[i]
        gw = X.T @ r / n + l2 * w
        gb = r.mean()
        w -= step * gw
        b -= step * gb
    theta = np.empty(d + 1)
    theta[:d] = w
    theta[d] = b
    return theta


def fit_logistic(X: np.ndarray, y: np.ndarray, hyper: HyperParams) -> np.ndarray:
    """Full-batch gradient descent from zero on :func:`logistic_loss`."""
    t = (y == POSITIVE).astype(float)
    return _logistic_descent(np.ascontiguousarray(X, dtype=float), t, float(hyper.logistic_l2),
                             float(hyper.logistic_step), int(hyper.logistic_epochs))


# ---------------------------------------------------------------- linear SVM

@njit(cache=True, nogil=True)
def _pegasos_epochs(Xb, y, order, lam):
    w = np.zeros(Xb.shape[1])
    radius = 1.0 / np.sqrt(lam)
    t = 0
    for e in range(order.shape[0]):
        for i in order[e]:
            t += 1
            eta = 1.0 / (lam * t)
            margin = y[i] * np.dot(w, Xb[i])
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += (eta * y[i]) * Xb[i]
            norm = np.sqrt(np.dot(w, w))
            if norm > radius:
                w *= radius / norm
    return w


def fit_svm(X: np.ndarray, y: np.ndarray, hyper: HyperParams, seed: int) -> np.ndarray:
    """Pegasos: stochastic subgradient descent on the L2-penalized hinge loss.

    A constant 1 column is appended so the bias is learned (and penalized)
    with the weights. Step size is ``1 / (lambda * t)`` followed by
    projection onto the ball of radius ``1 / sqrt(lambda)``. Rows are
    reshuffled every epoch from a generator seeded with ``seed``.
    """
    Xb = np.ascontiguousarray(np.hstack([X, np.ones((len(X), 1))]))
    rng = np.random.default_rng(seed)
    order = np.array([rng.permutation(len(Xb)) for _ in range(hyper.svm_epochs)], dtype=np.int64)
    order = order.reshape(hyper.svm_epochs, len(Xb))
    return _pegasos_epochs(Xb, y.astype(float), order, float(hyper.svm_penalty))


# ---------------------------------------------------------------- ridge regression

def fit_ridge(X: np.ndarray, y: np.ndarray, eps: float) -> np.ndarray:
    """Minimize ``|Xb beta - y|^2 + eps |beta|^2`` by the normal equations."""
    Xb = np.hstack([X, np.ones((len(X), 1))])
    A = Xb.T @ Xb + eps * np.eye(Xb.shape[1])
    return np.linalg.solve(A, Xb.T @ y.astype(float))


def ridge_gradient(beta: np.ndarray, X: np.ndarray, y: np.ndarray, eps: float) -> np.ndarray:
    Xb = np.hstack([X, np.ones((len(X), 1))])
    return 2.0 * (Xb.T @ (Xb @ beta - y) + eps * beta)


# ---------------------------------------------------------------- CART

def _gini(pos: np.ndarray, total: np.ndarray) -> np.ndarray:
    p = pos / total
    return 2.0 * p * (1.0 - p)


def _best_split(X: np.ndarray, y: np.ndarray, min_leaf: int):
    """Largest Gini decrease; ties keep the lowest feature, then lowest threshold.

    Zero-gain splits are allowed so that XOR-like structure can be reached.
    """
    n = len(y)
    if n < 2:
        return None
    is_pos = (y == POSITIVE).astype(float)
    parent = _gini(np.array([is_pos.sum()]), np.array([float(n)]))[0]
    # all features at once: column f holds feature f sorted ascending
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    cum_pos = np.cumsum(is_pos[order], axis=0)
    # candidate cut after row i (left = first i+1 rows)
    left_n = np.arange(1, n, dtype=float)[:, None]
    valid = xs[1:] > xs[:-1]
    valid &= (left_n >= min_leaf) & (n - left_n >= min_leaf)
    if not valid.any():
        return None
    lp = cum_pos[:-1]
    rp = cum_pos[-1] - lp
    child = (left_n * _gini(lp, left_n) + (n - left_n) * _gini(rp, n - left_n)) / n
    gain = np.where(valid, parent - child, -np.inf)
    rows = np.argmax(gain, axis=0)  # first maximum = lowest threshold
    col_best = gain[rows, np.arange(X.shape[1])]
    f = int(np.argmax(col_best))  # first maximum = lowest feature
    i = int(rows[f])
    return float(col_best[f]), f, 0.5 * (xs[i, f] + xs[i + 1, f])


def _grow(X: np.ndarray, y: np.ndarray, depth: int, hyper: HyperParams) -> dict:
    n_pos = int((y == POSITIVE).sum())
    leaf = {"leaf": True, "pos_fraction": n_pos / len(y), "n": int(len(y))}
    if n_pos in (0, len(y)) or depth >= hyper.tree_max_depth or len(y) < 2 * hyper.tree_min_leaf:
        return leaf
    split = _best_split(X, y, hyper.tree_min_leaf)
    if split is None:
        return leaf
    _, f, thr = split
    mask = X[:, f] <= thr
    return {
        "leaf": False, "feature": int(f), "threshold": float(thr),
        "left": _grow(X[mask], y[mask], depth + 1, hyper),
        "right": _grow(X[~mask], y[~mask], depth + 1, hyper),
    }


def fit_tree(X: np.ndarray, y: np.ndarray, hyper: HyperParams) -> dict:
    return _grow(X, y, 0, hyper)


def tree_leaf(node: dict, x: np.ndarray) -> dict:
    while not node["leaf"]:
        node = node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]
    return node


def tree_score(node: dict, X: np.ndarray) -> np.ndarray:
    """Positive fraction of the leaf each row lands in."""
    return np.array([tree_leaf(node, x)["pos_fraction"] for x in X])


# ---------------------------------------------------------------- model

# decision boundary on the score returned by each learner
_BOUNDARY = {"svm": 0.0, "linear-regression": 0.0, "logistic-regression": 0.5,
             "naive-bayes": 0.5, "decision-tree": 0.5}


@dataclass
class Model:
    algorithm: str
    parameters: Any
    standardization: StandardizationParams
    weights_used: np.ndarray
    hyper: HyperParams = field(default_factory=HyperParams)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return standardize_apply(self.standardization, X) * self.weights_used

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if not np.isfinite(X).all():
            raise PredictionError("non-finite feature value")
        Z = self.transform(X)
        p = self.parameters
        if self.algorithm in ("svm", "linear-regression"):
            return Z @ p[:-1] + p[-1]
        if self.algorithm == "logistic-regression":
            return _sigmoid(Z @ p[:-1] + p[-1])
        if self.algorithm == "naive-bayes":
            return naive_bayes_score(p, Z)
        return tree_score(p, Z)

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        """+1 / -1 per row."""
        s = self.decision_scores(X)
        return np.where(s >= _BOUNDARY[self.algorithm], POSITIVE, -POSITIVE)


def train(algorithm: str, data: Dataset, hyper: HyperParams | None = None, seed: int = 0,
          weights: np.ndarray | None = None) -> Model:
    """Fit standardization on ``data``, weight the standardized rows, fit ``algorithm``."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    hyper = hyper or HyperParams()
    X, y = data.X, data.y
    if not np.isfinite(X).all():
        raise TrainingError("non-finite feature value in training data")
    if len(np.unique(y)) < 2:
        raise TrainingError("training data must contain both classes")
    w = np.ones(N_FEATURES) if weights is None else np.asarray(weights, dtype=float)
    std = standardize_fit(X)
    Z = standardize_apply(std, X) * w
    if algorithm == "naive-bayes":
        params = fit_naive_bayes(Z, y)
    elif algorithm == "logistic-regression":
        params = fit_logistic(Z, y, hyper)
    elif algorithm == "svm":
        params = fit_svm(Z, y, hyper, seed)
    elif algorithm == "linear-regression":
        params = fit_ridge(Z, y, hyper.ridge_eps)
    else:
        params = fit_tree(Z, y, hyper)
    return Model(algorithm, params, std, w.copy(), hyper)


def predict(model: Model, v: FeatureVector | np.ndarray) -> tuple[str, float]:
    """Label and raw score (margin, probability or leaf positive fraction)."""
    values = v.values if isinstance(v, FeatureVector) else np.asarray(v, dtype=float)
    if values.shape != (N_FEATURES,):
        raise PredictionError(f"expected {N_FEATURES} features, got {values.shape}")
    score = float(model.decision_scores(values[None, :])[0])
    label = POSITIVE if score >= _BOUNDARY[model.algorithm] else -POSITIVE
    return int_to_label(label), score


# ---------------------------------------------------------------- persistence

def _to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    return obj


def _nb_from_json(d: dict) -> dict:
    return {k: {"prior": v["prior"], "mean": np.array(v["mean"]), "var": np.array(v["var"])}
            for k, v in d.items()}


def model_to_dict(model: Model, manifest: dict | None = None) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "algorithm": model.algorithm,
        "hyper": asdict(model.hyper),
        "parameters": _to_jsonable(model.parameters),
        "standardization": {"mean": model.standardization.mean.tolist(),
                            "std": model.standardization.std.tolist()},
        "weights": model.weights_used.tolist(),
        "manifest": manifest or {},
    }


def model_from_dict(d: dict) -> Model:
    if d.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {d.get('format_version')!r}")
    algo = d["algorithm"]
    raw = d["parameters"]
    if algo == "naive-bayes":
        params = _nb_from_json(raw)
    elif algo == "decision-tree":
        params = raw
    else:
        params = np.array(raw, dtype=float)
    std = StandardizationParams(np.array(d["standardization"]["mean"]), np.array(d["standardization"]["std"]))
    return Model(algo, params, std, np.array(d["weights"], dtype=float), HyperParams.from_dict(d["hyper"]))


def save_model(model: Model, path, manifest: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model, manifest), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
