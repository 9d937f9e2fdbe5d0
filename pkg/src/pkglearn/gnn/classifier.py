"""scikit-learn style wrapper around the graph models."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .model import DEFAULT_HIDDEN, predict_proba
from .train import TrainConfig, train


class PKGClassifier(BaseEstimator, ClassifierMixin):
    """Readmission classifier over numeric person graphs.

    ``X`` is a sequence of ``NumericGraph`` objects sharing one version,
    direction, and vocabulary; ``y`` is the 0/1 label vector.  ``arch``
    selects the Sage-style or attention convolution, ``variant`` the linear
    (1) or convolutional (2) head.
    """

    def __init__(self, arch: str = "sage", variant: int = 1,
                 learning_rate: float = 0.001, epochs: int = 100,
                 batch_size: int = 32, n_bases: int = 3,
                 validation_fraction: float = 0.15,
                 hidden_dims: tuple = DEFAULT_HIDDEN, random_state: int = 0):
        self.arch = arch
        self.variant = variant
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.n_bases = n_bases
        self.validation_fraction = validation_fraction
        self.hidden_dims = hidden_dims
        self.random_state = random_state

    def _config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            batch_size=self.batch_size,
            n_bases=self.n_bases,
            validation_fraction=self.validation_fraction,
            hidden_dims=tuple(self.hidden_dims),
            seed=self.random_state,
        )

    def fit(self, X, y) -> "PKGClassifier":
        self.params_, self.history_ = train(list(X), np.asarray(y),
                                            self._config(), arch=self.arch,
                                            variant=self.variant)
        self.classes_ = np.array([0, 1])
        return self

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise NotFittedError("PKGClassifier must be fitted before predicting")

    def predict_proba(self, X) -> np.ndarray:
        self._check_fitted()
        positive = predict_proba(list(X), self.params_)
        return np.column_stack([1.0 - positive, positive])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(int)
