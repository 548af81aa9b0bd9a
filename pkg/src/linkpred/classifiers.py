"""Five from-scratch classifiers behind one train / predict interface.

Kinds, in canonical order: LR (logistic regression by full-batch gradient
descent), GNB (Gaussian naive Bayes), KNN (k-nearest neighbors), DT
(decision tree, Gini), RF (random forest of bootstrapped Gini trees).

Scores are class-1 probabilities or fractions in [0, 1]; predicted label is
1 exactly when the score is >= 0.5. All training is deterministic given
(kind, hyper, dataset, seed). Tie-breaks are fixed: the decision tree takes
the lowest weighted Gini, then the lowest feature index, then the lowest
threshold; KNN orders equal distances by training-row index.

Scale-sensitive kinds (LR, KNN) expect standardized features; the caller
owns that step.
"""
from __future__ import annotations

import numpy as np

from .seeding import child_seed

KINDS = ("LR", "GNB", "KNN", "DT", "RF")

DEFAULT_HYPERPARAMETERS = {
    "LR": {"learning_rate": 0.1, "l2": 1e-4, "epochs": 500},
    "GNB": {"variance_floor": None},  # None: 1e-9 * max feature variance
    "KNN": {"k": 5},
    "DT": {"max_depth": 12, "min_leaf": 1, "criterion": "gini"},
    "RF": {
        "trees": 100,
        "max_features": 4,
        "bootstrap": True,
        "max_depth": 12,
        "min_leaf": 1,
    },
}


def default_hyper(kind: str) -> dict:
    if kind not in DEFAULT_HYPERPARAMETERS:
        raise ValueError(f"unknown classifier kind {kind!r}")
    return dict(DEFAULT_HYPERPARAMETERS[kind])


def _extract_xy(dataset) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(dataset, "X") and hasattr(dataset, "y"):
        X, y = dataset.X, dataset.y
    else:
        X, y = dataset
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("dataset must provide a 2-d matrix and matching labels")
    return X, y


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class TrainedModel:
    """Base class: kind tag, feature count, training seed, hyper block."""

    kind = ""

    def __init__(self, feature_count: int, training_seed: int, hyper: dict):
        self.feature_count = feature_count
        self.training_seed = training_seed
        self.hyper = dict(hyper)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.feature_count:
            raise ValueError(
                f"expected {self.feature_count} features, got shape {X.shape}"
            )
        return X


def predict_score(model: TrainedModel, features) -> float:
    """Class-1 score in [0, 1] for one feature vector."""
    X = model._check_matrix(features)
    if len(X) != 1:
        raise ValueError("predict_score takes a single feature vector")
    return float(model.score_matrix(X)[0])


def score_matrix(model: TrainedModel, X) -> np.ndarray:
    """Class-1 scores for each row of a feature matrix."""
    return model.score_matrix(model._check_matrix(X))


def predict_label(model: TrainedModel, features) -> int:
    """1 when the score reaches 0.5, else 0 (ties go to 1)."""
    return int(predict_score(model, features) >= 0.5)


def label_matrix(model: TrainedModel, X) -> np.ndarray:
    return (score_matrix(model, X) >= 0.5).astype(np.int64)


# ---------------------------------------------------------------- logistic


class LRModel(TrainedModel):
    kind = "LR"

    def __init__(self, feature_count, training_seed, hyper, weights, bias,
                 loss_history=None):
        super().__init__(feature_count, training_seed, hyper)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.loss_history = (
            np.asarray(loss_history, dtype=np.float64)
            if loss_history is not None
            else np.empty(0)
        )

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(X @ self.weights + self.bias)


def lr_loss(weights, bias, dataset, l2: float = DEFAULT_HYPERPARAMETERS["LR"]["l2"]) -> float:
    """Mean logistic loss plus (l2/2)*||w||^2; the bias is not penalized."""
    X, y = _extract_xy(dataset)
    weights = np.asarray(weights, dtype=np.float64)
    z = X @ weights + bias
    data = np.mean(np.logaddexp(0.0, z) - y * z)
    return float(data + 0.5 * l2 * np.dot(weights, weights))


def lr_gradient(weights, bias, dataset, l2: float = DEFAULT_HYPERPARAMETERS["LR"]["l2"]):
    """Gradient of the mean L2-regularized logistic loss.

    Returns a vector of length feature_count + 1; the last entry is the bias
    derivative. The bias is not regularized.
    """
    X, y = _extract_xy(dataset)
    weights = np.asarray(weights, dtype=np.float64)
    if len(weights) != X.shape[1]:
        raise ValueError("weight length does not match feature count")
    resid = _sigmoid(X @ weights + bias) - y
    grad_w = X.T @ resid / len(y) + l2 * weights
    grad_b = float(np.mean(resid))
    return np.concatenate([grad_w, [grad_b]])


def _train_lr(hyper, X, y, seed) -> LRModel:
    lr = float(hyper["learning_rate"])
    l2 = float(hyper["l2"])
    epochs = int(hyper["epochs"])
    if lr <= 0 or l2 < 0 or epochs < 1:
        raise ValueError("LR hyperparameters out of range")
    d = X.shape[1]
    w = np.zeros(d)
    b = 0.0
    history = np.empty(epochs + 1)
    history[0] = lr_loss(w, b, (X, y), l2)
    for e in range(epochs):
        g = lr_gradient(w, b, (X, y), l2)
        w = w - lr * g[:d]
        b = b - lr * g[d]
        history[e + 1] = lr_loss(w, b, (X, y), l2)
    return LRModel(d, seed, hyper, w, b, history)


# ------------------------------------------------------------ naive Bayes


class GNBModel(TrainedModel):
    kind = "GNB"

    def __init__(self, feature_count, training_seed, hyper, priors, means, variances):
        super().__init__(feature_count, training_seed, hyper)
        self.priors = np.asarray(priors, dtype=np.float64)  # (2,)
        self.means = np.asarray(means, dtype=np.float64)  # (2, d)
        self.variances = np.asarray(variances, dtype=np.float64)  # (2, d)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        ll = np.empty((len(X), 2))
        for c in (0, 1):
            var = self.variances[c]
            diff = X - self.means[c]
            ll[:, c] = np.log(self.priors[c]) - 0.5 * np.sum(
                np.log(2.0 * np.pi * var) + diff * diff / var, axis=1
            )
        return _sigmoid(ll[:, 1] - ll[:, 0])


def _train_gnb(hyper, X, y, seed) -> GNBModel:
    floor = hyper.get("variance_floor")
    if floor is None:
        floor = 1e-9 * float(np.max(X.var(axis=0)))
    floor = float(floor)
    if floor <= 0.0:
        floor = 1e-12
    n = len(y)
    priors = np.empty(2)
    means = np.empty((2, X.shape[1]))
    variances = np.empty((2, X.shape[1]))
    for c in (0, 1):
        rows = X[y == c]
        priors[c] = len(rows) / n
        means[c] = rows.mean(axis=0)
        variances[c] = np.maximum(rows.var(axis=0), floor)
    return GNBModel(X.shape[1], seed, hyper, priors, means, variances)


# ------------------------------------------------------------------- kNN


class KNNModel(TrainedModel):
    kind = "KNN"

    def __init__(self, feature_count, training_seed, hyper, train_X, train_y):
        super().__init__(feature_count, training_seed, hyper)
        self.train_X = np.asarray(train_X, dtype=np.float64)
        self.train_y = np.asarray(train_y, dtype=np.int64)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        k = int(self.hyper["k"])
        out = np.empty(len(X))
        sq = np.sum(self.train_X * self.train_X, axis=1)
        for lo in range(0, len(X), 512):
            q = X[lo : lo + 512]
            d2 = sq[None, :] - 2.0 * (q @ self.train_X.T) + np.sum(q * q, axis=1)[:, None]
            order = np.argsort(d2, axis=1, kind="stable")[:, :k]
            out[lo : lo + 512] = self.train_y[order].mean(axis=1)
        return out


def _train_knn(hyper, X, y, seed) -> KNNModel:
    k = int(hyper["k"])
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be a positive odd integer")
    if k > len(y):
        raise ValueError(f"k={k} exceeds {len(y)} training rows")
    return KNNModel(X.shape[1], seed, hyper, X.copy(), y.copy())


# --------------------------------------------------------------- trees


class _TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "score")

    def __init__(self, feature=-1, threshold=0.0, left=None, right=None, score=0.0):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.score = score

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


def _best_split(X, y, features, min_leaf):
    """(weighted_gini, feature, threshold, left_mask) or None.

    Candidates are midpoints between distinct consecutive sorted values.
    First minimum wins: features scan in ascending index order, thresholds in
    ascending value order, and comparisons are strict.
    """
    n = len(y)
    best = None
    for f in features:
        x = X[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = y[order]
        if xs[0] == xs[-1]:
            continue
        cum_pos = np.cumsum(ys)
        left_n = np.arange(1, n, dtype=np.float64)
        right_n = n - left_n
        valid = xs[1:] > xs[:-1]
        if min_leaf > 1:
            valid &= (left_n >= min_leaf) & (right_n >= min_leaf)
        if not np.any(valid):
            continue
        lp = cum_pos[:-1].astype(np.float64)
        rp = cum_pos[-1] - lp
        with np.errstate(invalid="ignore"):
            g_left = 1.0 - (lp / left_n) ** 2 - ((left_n - lp) / left_n) ** 2
            g_right = 1.0 - (rp / right_n) ** 2 - ((right_n - rp) / right_n) ** 2
        weighted = (left_n * g_left + right_n * g_right) / n
        weighted[~valid] = np.inf
        i = int(np.argmin(weighted))
        w = float(weighted[i])
        if best is None or w < best[0]:
            thr = (xs[i] + xs[i + 1]) / 2.0
            if thr <= xs[i]:
                thr = float(xs[i + 1])
            best = (w, int(f), float(thr), x < thr)
    return best


def _build_tree(X, y, depth, max_depth, min_leaf, rng, max_features) -> _TreeNode:
    n = len(y)
    pos = int(y.sum())
    if pos == 0 or pos == n or depth >= max_depth or n < 2 * min_leaf:
        return _TreeNode(score=pos / n)
    d = X.shape[1]
    if rng is not None and max_features < d:
        features = np.sort(rng.choice(d, size=max_features, replace=False))
    else:
        features = np.arange(d)
    found = _best_split(X, y, features, min_leaf)
    if found is None:
        return _TreeNode(score=pos / n)
    _, f, thr, left_mask = found
    left = _build_tree(
        X[left_mask], y[left_mask], depth + 1, max_depth, min_leaf, rng, max_features
    )
    right = _build_tree(
        X[~left_mask], y[~left_mask], depth + 1, max_depth, min_leaf, rng, max_features
    )
    return _TreeNode(feature=f, threshold=thr, left=left, right=right)


def _tree_scores(node: _TreeNode, X, idx, out) -> None:
    if node.is_leaf:
        out[idx] = node.score
        return
    go_left = X[idx, node.feature] < node.threshold
    _tree_scores(node.left, X, idx[go_left], out)
    _tree_scores(node.right, X, idx[~go_left], out)


class DTModel(TrainedModel):
    kind = "DT"

    def __init__(self, feature_count, training_seed, hyper, root: _TreeNode):
        super().__init__(feature_count, training_seed, hyper)
        self.root = root

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X))
        _tree_scores(self.root, X, np.arange(len(X)), out)
        return out


def _check_tree_hyper(hyper) -> tuple[int, int]:
    max_depth = int(hyper["max_depth"])
    min_leaf = int(hyper["min_leaf"])
    if max_depth < 1 or min_leaf < 1:
        raise ValueError("max_depth and min_leaf must be positive")
    if hyper.get("criterion", "gini") != "gini":
        raise ValueError("only the gini criterion is implemented")
    return max_depth, min_leaf


def _train_dt(hyper, X, y, seed) -> DTModel:
    max_depth, min_leaf = _check_tree_hyper(hyper)
    root = _build_tree(X, y, 0, max_depth, min_leaf, None, X.shape[1])
    return DTModel(X.shape[1], seed, hyper, root)


class RFModel(TrainedModel):
    kind = "RF"

    def __init__(self, feature_count, training_seed, hyper, roots):
        super().__init__(feature_count, training_seed, hyper)
        self.roots = list(roots)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        total = np.zeros(len(X))
        buf = np.empty(len(X))
        idx = np.arange(len(X))
        for root in self.roots:
            _tree_scores(root, X, idx, buf)
            total += buf
        return total / len(self.roots)


def _train_rf(hyper, X, y, seed) -> RFModel:
    trees = int(hyper["trees"])
    max_features = int(hyper["max_features"])
    bootstrap = bool(hyper.get("bootstrap", True))
    max_depth, min_leaf = _check_tree_hyper(
        {**hyper, "criterion": hyper.get("criterion", "gini")}
    )
    d = X.shape[1]
    if trees < 1 or not (1 <= max_features <= d):
        raise ValueError("RF hyperparameters out of range")
    roots = []
    for t in range(trees):
        rng = np.random.default_rng(child_seed(seed, f"tree:{t}"))
        if bootstrap:
            rows = rng.integers(0, len(y), size=len(y))
            bx, by = X[rows], y[rows]
        else:
            bx, by = X, y
        node_rng = rng if max_features < d else None
        roots.append(
            _build_tree(bx, by, 0, max_depth, min_leaf, node_rng, max_features)
        )
    return RFModel(d, seed, hyper, roots)


# ------------------------------------------------------------- interface


_TRAINERS = {
    "LR": _train_lr,
    "GNB": _train_gnb,
    "KNN": _train_knn,
    "DT": _train_dt,
    "RF": _train_rf,
}


def train(kind: str, hyper, dataset, seed: int) -> TrainedModel:
    """Fit one classifier; hyper=None uses the documented defaults."""
    if kind not in _TRAINERS:
        raise ValueError(f"unknown classifier kind {kind!r}")
    X, y = _extract_xy(dataset)
    if len(y) == 0:
        raise ValueError("empty training dataset")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite feature value in training data")
    classes = np.unique(y)
    if not np.array_equal(classes, [0, 1]):
        raise ValueError(f"need both classes 0 and 1, got {classes.tolist()}")
    merged = default_hyper(kind)
    if hyper:
        unknown = set(hyper) - set(merged)
        if unknown:
            raise ValueError(f"unknown {kind} hyperparameters: {sorted(unknown)}")
        merged.update(hyper)
    return _TRAINERS[kind](merged, X, y, seed)


# ----------------------------------------------------------- persistence


def _fmt(x: float) -> str:
    return "%.17g" % x


def _fmt_vec(v) -> str:
    return " ".join(_fmt(x) for x in v)


def _write_tree(fh, root: _TreeNode) -> None:
    nodes = []

    def collect(node):
        nodes.append(node)
        if not node.is_leaf:
            collect(node.left)
            collect(node.right)

    collect(root)
    fh.write(f"tree {len(nodes)}\n")
    for node in nodes:
        if node.is_leaf:
            fh.write(f"leaf {_fmt(node.score)}\n")
        else:
            fh.write(f"split {node.feature} {_fmt(node.threshold)}\n")


def _read_tree(lines, at):
    tag, count = lines[at].split()
    if tag != "tree":
        raise ValueError(f"expected tree block at line {at + 1}")
    at += 1

    def build(i):
        parts = lines[i].split()
        if parts[0] == "leaf":
            return _TreeNode(score=float(parts[1])), i + 1
        f, thr = int(parts[1]), float(parts[2])
        left, i = build(i + 1)
        right, i = build(i)
        return _TreeNode(feature=f, threshold=thr, left=left, right=right), i

    root, end = build(at)
    if end - at != int(count):
        raise ValueError("tree block length mismatch")
    return root, end


def save_model(model: TrainedModel, path) -> None:
    """Self-describing text serialization; round-trips predictions exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"linkpred-model {model.kind}\n")
        fh.write(f"feature_count {model.feature_count}\n")
        fh.write(f"training_seed {model.training_seed}\n")
        for key in sorted(model.hyper):
            val = model.hyper[key]
            if isinstance(val, float):
                val = _fmt(val)
            fh.write(f"hyper {key} {val}\n")
        if isinstance(model, LRModel):
            fh.write(f"weights {_fmt_vec(model.weights)}\n")
            fh.write(f"bias {_fmt(model.bias)}\n")
        elif isinstance(model, GNBModel):
            fh.write(f"priors {_fmt_vec(model.priors)}\n")
            for c in (0, 1):
                fh.write(f"mean{c} {_fmt_vec(model.means[c])}\n")
                fh.write(f"var{c} {_fmt_vec(model.variances[c])}\n")
        elif isinstance(model, KNNModel):
            fh.write(f"rows {len(model.train_y)}\n")
            for i in range(len(model.train_y)):
                fh.write(f"row {model.train_y[i]} {_fmt_vec(model.train_X[i])}\n")
        elif isinstance(model, DTModel):
            _write_tree(fh, model.root)
        elif isinstance(model, RFModel):
            fh.write(f"forest {len(model.roots)}\n")
            for root in model.roots:
                _write_tree(fh, root)
        else:
            raise TypeError(f"cannot serialize {type(model).__name__}")


_HYPER_PARSERS = {
    "learning_rate": float, "l2": float, "epochs": int, "k": int,
    "max_depth": int, "min_leaf": int, "criterion": str, "trees": int,
    "max_features": int, "variance_floor": lambda s: None if s == "None" else float(s),
    "bootstrap": lambda s: s == "True",
}


def load_model(path) -> TrainedModel:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    head = lines[0].split()
    if len(head) != 2 or head[0] != "linkpred-model" or head[1] not in KINDS:
        raise ValueError(f"not a model file: {path}")
    kind = head[1]
    feature_count = int(lines[1].split()[1])
    training_seed = int(lines[2].split()[1])
    hyper = {}
    at = 3
    while at < len(lines) and lines[at].startswith("hyper "):
        _, key, val = lines[at].split(" ", 2)
        hyper[key] = _HYPER_PARSERS.get(key, str)(val)
        at += 1
    if kind == "LR":
        weights = np.array([float(x) for x in lines[at].split()[1:]])
        bias = float(lines[at + 1].split()[1])
        return LRModel(feature_count, training_seed, hyper, weights, bias)
    if kind == "GNB":
        priors = np.array([float(x) for x in lines[at].split()[1:]])
        means = np.empty((2, feature_count))
        variances = np.empty((2, feature_count))
        for c in (0, 1):
            means[c] = [float(x) for x in lines[at + 1 + 2 * c].split()[1:]]
            variances[c] = [float(x) for x in lines[at + 2 + 2 * c].split()[1:]]
        return GNBModel(feature_count, training_seed, hyper, priors, means, variances)
    if kind == "KNN":
        n = int(lines[at].split()[1])
        train_X = np.empty((n, feature_count))
        train_y = np.empty(n, dtype=np.int64)
        for i in range(n):
            parts = lines[at + 1 + i].split()
            train_y[i] = int(parts[1])
            train_X[i] = [float(x) for x in parts[2:]]
        return KNNModel(feature_count, training_seed, hyper, train_X, train_y)
    if kind == "DT":
        root, _ = _read_tree(lines, at)
        return DTModel(feature_count, training_seed, hyper, root)
    count = int(lines[at].split()[1])
    roots = []
    at += 1
    for _ in range(count):
        root, at = _read_tree(lines, at)
        roots.append(root)
    return RFModel(feature_count, training_seed, hyper, roots)
