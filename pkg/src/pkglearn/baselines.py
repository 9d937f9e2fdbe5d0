"""Classical classifiers on tabular encodings of the processed records.

Coded facets (diagnoses, medications, procedures) are one-hot encoded over
the corpus universe; the remaining categorical facets map to integers with
0 reserved for missing values.  The classifiers are small, deterministic
reference implementations: k-nearest neighbors with tie-inclusive
neighborhoods, Gaussian naive Bayes with an absolute variance floor, a
Gini CART, discrete AdaBoost over depth-1 stumps, and a linear SVM trained
by full-batch sub-gradient descent.  Prediction ties resolve to the
positive class throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array, check_X_y

from ._validation import check_positive_int
from .exceptions import ValidationError
from .stargraph import age_bucket

ORDINAL_FACETS = (
    ("age_group", lambda r: age_bucket(r.age_years)),
    ("employment", lambda r: r.employment),
    ("ethnicity", lambda r: r.ethnicity),
    ("gender", lambda r: r.gender),
    ("household", lambda r: r.household),
    ("housing", lambda r: r.housing),
    ("marital_status", lambda r: r.marital_status),
    ("religion", lambda r: r.religion),
)


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # "onehot" or "ordinal"


@dataclass
class TabularDataset:
    features: np.ndarray
    labels: np.ndarray
    columns: list
    ordinal_values: dict

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])


def encode_tabular(records) -> TabularDataset:
    """Deterministic tabular encoding of labeled records.

    Column order is fixed by sorting, so any record ordering produces the
    same layout: one-hot blocks for diagnosis families, medication names,
    and procedure families, then the eight integer-coded categorical
    columns with missing mapped to 0.
    """
    records = list(records)
    if not records:
        raise ValidationError("cannot encode an empty record set")
    if any(r.readmitted_within_window is None for r in records):
        raise ValidationError("records must be labeled before encoding")

    diagnoses = sorted({code for r in records for code, _ in r.diagnoses})
    medications = sorted({name for r in records for name in r.medications})
    procedures = sorted({code for r in records for code, _ in r.procedures})
    ordinal_values = {
        name: sorted({getter(r) for r in records if getter(r) is not None})
        for name, getter in ORDINAL_FACETS
    }

    columns = (
        [Column(f"dx:{c}", "onehot") for c in diagnoses]
        + [Column(f"rx:{m}", "onehot") for m in medications]
        + [Column(f"px:{c}", "onehot") for c in procedures]
        + [Column(name, "ordinal") for name, _ in ORDINAL_FACETS]
    )

    dx_pos = {c: i for i, c in enumerate(diagnoses)}
    rx_pos = {m: len(diagnoses) + i for i, m in enumerate(medications)}
    px_pos = {c: len(diagnoses) + len(medications) + i for i, c in enumerate(procedures)}
    ordinal_base = len(diagnoses) + len(medications) + len(procedures)
    ordinal_maps = {
        name: {v: i + 1 for i, v in enumerate(values)}
        for name, values in ordinal_values.items()
    }

    X = np.zeros((len(records), len(columns)))
    y = np.zeros(len(records), dtype=np.int64)
    for i, record in enumerate(records):
        for code, _ in record.diagnoses:
            X[i, dx_pos[code]] = 1.0
        for name in record.medications:
            X[i, rx_pos[name]] = 1.0
        for code, _ in record.procedures:
            X[i, px_pos[code]] = 1.0
        for j, (name, getter) in enumerate(ORDINAL_FACETS):
            value = getter(record)
            if value is not None:
                X[i, ordinal_base + j] = ordinal_maps[name][value]
        y[i] = int(record.readmitted_within_window)
    return TabularDataset(features=X, labels=y, columns=columns,
                          ordinal_values=ordinal_values)


class _BinaryClassifier(BaseEstimator, ClassifierMixin):
    """Shared fit plumbing: binary 0/1 labels, both classes required."""

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y = y.astype(np.int64)
        if set(np.unique(y)) != {0, 1}:
            raise ValidationError("training data must contain both classes 0 and 1")
        self.classes_ = np.array([0, 1])
        self._fit(X.astype(np.float64), y)
        return self

    def _check_predict(self, X):
        if not hasattr(self, "classes_"):
            raise NotFittedError(f"{type(self).__name__} must be fitted first")
        return check_array(X).astype(np.float64)

    def predict(self, X) -> np.ndarray:
        X = self._check_predict(X)
        # ties resolve to the positive class
        return (self.decision_scores(X) >= 0.0).astype(np.int64)

    def decision_scores(self, X) -> np.ndarray:
        raise NotImplementedError


class KNNClassifier(_BinaryClassifier):
    """Euclidean k-nearest neighbors with tie-inclusive neighborhoods.

    Every point whose distance equals the k-th smallest joins the vote, so
    a query equidistant to the whole training set votes over all of it.
    """

    def __init__(self, k: int = 5):
        self.k = k

    def _fit(self, X, y):
        check_positive_int(self.k, "k")
        self.X_ = X
        self.y_ = y

    def decision_scores(self, X) -> np.ndarray:
        X = np.atleast_2d(X)
        d2 = ((X * X).sum(axis=1)[:, None]
              + (self.X_ * self.X_).sum(axis=1)[None, :]
              - 2.0 * X @ self.X_.T)
        np.maximum(d2, 0.0, out=d2)
        k = min(self.k, self.X_.shape[0])
        kth = np.partition(d2, k - 1, axis=1)[:, k - 1]
        votes = d2 <= kth[:, None] + 1e-9
        positive = (votes & (self.y_ == 1)[None, :]).sum(axis=1)
        return positive - votes.sum(axis=1) / 2.0


class GaussianNBClassifier(_BinaryClassifier):
    """Gaussian naive Bayes with per-class variances floored at 1e-9."""

    def __init__(self, var_floor: float = 1e-9):
        self.var_floor = var_floor

    def _fit(self, X, y):
        self.priors_ = np.array([np.mean(y == c) for c in (0, 1)])
        self.means_ = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.vars_ = np.stack([
            np.maximum(X[y == c].var(axis=0), self.var_floor) for c in (0, 1)
        ])

    def _log_posterior(self, X) -> np.ndarray:
        out = np.empty((X.shape[0], 2))
        for c in (0, 1):
            gap = X - self.means_[c]
            out[:, c] = (np.log(self.priors_[c])
                         - 0.5 * np.sum(np.log(2.0 * np.pi * self.vars_[c]))
                         - 0.5 * np.sum(gap * gap / self.vars_[c], axis=1))
        return out

    def decision_scores(self, X) -> np.ndarray:
        lp = self._log_posterior(X)
        return lp[:, 1] - lp[:, 0]


def _best_split(X, y, weights, min_leaf):
    """Lowest weighted Gini split; ties prefer low feature then threshold."""
    n = X.shape[0]
    total = weights.sum()
    best = None
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        values = X[order, j]
        w = weights[order]
        wy = w * y[order]
        w_left = np.cumsum(w)[:-1]
        pos_left = np.cumsum(wy)[:-1]
        w_right = total - w_left
        pos_right = pos_left[-1] + wy[-1] - pos_left

        counts = np.arange(1, n)
        distinct = values[1:] > values[:-1]
        valid = distinct & (counts >= min_leaf) & (n - counts >= min_leaf) \
            & (w_left > 0) & (w_right > 0)
        if not valid.any():
            continue
        p_left = pos_left / w_left
        p_right = pos_right / w_right
        gini = (w_left * 2 * p_left * (1 - p_left)
                + w_right * 2 * p_right * (1 - p_right)) / total
        gini = np.where(valid, gini, np.inf)
        k = int(np.argmin(gini))
        if best is None or gini[k] < best[0] - 1e-15:
            best = (float(gini[k]), j, float((values[k] + values[k + 1]) / 2.0))
    return best


class DecisionTreeCART(_BinaryClassifier):
    """CART with Gini impurity; defaults max depth 12, min leaf size 2."""

    def __init__(self, max_depth: int = 12, min_leaf: int = 2):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def _fit(self, X, y):
        check_positive_int(self.max_depth, "max_depth")
        check_positive_int(self.min_leaf, "min_leaf")
        weights = np.ones(len(y))
        self.tree_ = self._grow(X, y, weights, depth=0)

    def _grow(self, X, y, weights, depth):
        pos = float((weights * y).sum())
        total = float(weights.sum())
        # score in [-0.5, 0.5]; >= 0 predicts positive
        leaf_score = pos / total - 0.5
        if depth >= self.max_depth or len(y) < 2 * self.min_leaf \
                or len(np.unique(y)) == 1:
            return ("leaf", leaf_score)
        split = _best_split(X, y, weights, self.min_leaf)
        if split is None:
            return ("leaf", leaf_score)
        _, feature, threshold = split
        mask = X[:, feature] <= threshold
        return ("node", feature, threshold,
                self._grow(X[mask], y[mask], weights[mask], depth + 1),
                self._grow(X[~mask], y[~mask], weights[~mask], depth + 1))

    def _score_one(self, row, node):
        while node[0] == "node":
            node = node[3] if row[node[1]] <= node[2] else node[4]
        return node[1]

    def decision_scores(self, X) -> np.ndarray:
        return np.array([self._score_one(row, self.tree_) for row in X])


class _Stump:
    """Weighted decision stump over one feature threshold."""

    __slots__ = ("feature", "threshold", "left_label", "right_label")

    def __init__(self, feature, threshold, left_label, right_label):
        self.feature = feature
        self.threshold = threshold
        self.left_label = left_label
        self.right_label = right_label

    def predict_pm1(self, X) -> np.ndarray:
        left = X[:, self.feature] <= self.threshold
        return np.where(left, self.left_label, self.right_label)


def _fit_stump(X, y_pm1, weights) -> _Stump:
    """Minimum weighted error stump; deterministic tie-breaking."""
    best = None
    total = float(weights.sum())
    total_pos = float(weights[y_pm1 == 1].sum())
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        values = X[order, j]
        w = weights[order]
        y = y_pm1[order]
        wpos = np.cumsum(np.where(y > 0, w, 0.0))[:-1]
        wneg = np.cumsum(np.where(y < 0, w, 0.0))[:-1]
        distinct = values[1:] > values[:-1]
        if not distinct.any():
            continue
        # predict +1 on the left block, -1 on the right
        err_plus = np.where(distinct, wneg + (total_pos - wpos), np.inf)
        for left_label, errs in ((1, err_plus), (-1, total - err_plus)):
            errs = np.where(distinct, errs, np.inf)
            k = int(np.argmin(errs))
            if best is None or errs[k] < best[0] - 1e-15:
                best = (float(errs[k]), j,
                        float((values[k] + values[k + 1]) / 2.0), left_label)
    if best is None:
        # constant stump: majority-weighted label everywhere
        label = 1 if total_pos >= total / 2.0 else -1
        return _Stump(0, np.inf, label, label)
    _, feature, threshold, left_label = best
    return _Stump(feature, threshold, left_label, -left_label)


class AdaBoostStumps(_BinaryClassifier):
    """Discrete two-class AdaBoost over depth-1 stumps (default 50)."""

    def __init__(self, n_estimators: int = 50):
        self.n_estimators = n_estimators

    def _fit(self, X, y):
        check_positive_int(self.n_estimators, "n_estimators")
        y_pm1 = np.where(y == 1, 1.0, -1.0)
        weights = np.full(len(y), 1.0 / len(y))
        self.stumps_ = []
        self.alphas_ = []
        for _ in range(self.n_estimators):
            stump = _fit_stump(X, y_pm1, weights)
            pred = stump.predict_pm1(X)
            err = float(weights[pred != y_pm1].sum())
            err = min(max(err, 1e-10), 1.0 - 1e-10)
            alpha = 0.5 * np.log((1.0 - err) / err)
            self.stumps_.append(stump)
            self.alphas_.append(alpha)
            weights = weights * np.exp(-alpha * y_pm1 * pred)
            weights /= weights.sum()
            if err <= 1e-10:
                break

    def decision_scores(self, X) -> np.ndarray:
        scores = np.zeros(X.shape[0])
        for alpha, stump in zip(self.alphas_, self.stumps_):
            scores += alpha * stump.predict_pm1(X)
        return scores


class LinearSVM(_BinaryClassifier):
    """Hinge-loss linear SVM via deterministic full-batch sub-gradient descent."""

    def __init__(self, epochs: int = 200, learning_rate: float = 0.01,
                 l2: float = 1e-4):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.l2 = l2

    def _fit(self, X, y):
        check_positive_int(self.epochs, "epochs")
        y_pm1 = np.where(y == 1, 1.0, -1.0)
        n, d = X.shape
        self.w_ = np.zeros(d)
        self.b_ = 0.0
        for _ in range(self.epochs):
            margins = y_pm1 * (X @ self.w_ + self.b_)
            active = margins < 1.0
            grad_w = -(y_pm1[active, None] * X[active]).sum(axis=0) / n \
                + 2.0 * self.l2 * self.w_
            grad_b = -y_pm1[active].sum() / n
            self.w_ -= self.learning_rate * grad_w
            self.b_ -= self.learning_rate * grad_b

    def decision_scores(self, X) -> np.ndarray:
        return X @ self.w_ + self.b_


BASELINES = {
    "knn": KNNClassifier,
    "nb": GaussianNBClassifier,
    "dt": DecisionTreeCART,
    "adaboost": AdaBoostStumps,
    "lsvm": LinearSVM,
}
