"""Mini-batch training loop with validation-based weight selection."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .._utils import derive_rng
from .._validation import check_fraction, check_positive_int, check_seed
from ..exceptions import ValidationError
from .model import (
    DEFAULT_HIDDEN,
    ModelParams,
    backward_batch,
    bce_loss,
    forward_batch,
    init_params,
    make_batch,
    predict_proba,
)
from .optim import AdamState, adam_step

logger = logging.getLogger("pkglearn.gnn")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    epochs: int = 100
    batch_size: int = 32
    n_bases: int = 3
    validation_fraction: float = 0.15
    hidden_dims: tuple = DEFAULT_HIDDEN
    seed: int = 0

    def validate(self) -> "TrainConfig":
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.epochs < 0 or int(self.epochs) != self.epochs:
            raise ValidationError("epochs must be a non-negative integer")
        check_positive_int(self.batch_size, "batch_size")
        check_positive_int(self.n_bases, "n_bases")
        frac = check_fraction(self.validation_fraction, "validation_fraction")
        if not 0.0 < frac < 1.0:
            raise ValidationError("validation_fraction must lie strictly in (0, 1)")
        check_seed(self.seed)
        return self


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    val_accuracy: float
    val_f1: float


def _accuracy_f1(pred, labels):
    pred = np.asarray(pred)
    labels = np.asarray(labels)
    accuracy = float(np.mean(pred == labels)) * 100.0
    tp = int(np.sum((pred == 1) & (labels == 1)))
    fp = int(np.sum((pred == 1) & (labels == 0)))
    fn = int(np.sum((pred == 0) & (labels == 1)))
    f1 = 100.0 * 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0
    return accuracy, f1


def _stratified_validation_split(labels, fraction, rng):
    """Per-class seeded carve-out; keeps at least one of each class in train."""
    labels = np.asarray(labels)
    val_idx = []
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(len(members))]
        n_val = min(int(round(fraction * len(members))), len(members) - 1)
        val_idx.extend(members[:n_val].tolist())
    val = np.array(sorted(val_idx), dtype=np.int64)
    train = np.array(sorted(set(range(len(labels))) - set(val_idx)), dtype=np.int64)
    return train, val


def train(graphs, labels, config: TrainConfig, arch: str = "sage",
          variant: int = 1) -> tuple[ModelParams, list]:
    """Train one model; returns the best-validation-F1 weights and history.

    The batch loss is the mean cross-entropy over the mini-batch; 15% of
    the training examples (stratified, seeded) are held out and the weight
    snapshot with the best validation F1 is returned.  Deterministic under
    ``config.seed``.
    """
    config.validate()
    graphs = list(graphs)
    labels = np.asarray(labels, dtype=np.int64)
    if len(graphs) != len(labels):
        raise ValidationError("graphs and labels differ in length")
    if len(graphs) == 0:
        raise ValidationError("empty training set")

    rng = derive_rng(config.seed, "train", arch, variant)
    train_idx, val_idx = _stratified_validation_split(
        labels, config.validation_fraction, rng)
    train_labels = labels[train_idx]
    if len(np.unique(train_labels)) < 2 or min(
            np.bincount(train_labels, minlength=2)) < 2:
        raise ValidationError("training split needs at least 2 examples per class")

    d_in = graphs[0].node_features.shape[1]
    from ..vectorize import relation_set

    relations = relation_set(graphs[0].version)
    params = init_params(arch, variant, relations, d_in,
                         hidden=config.hidden_dims, n_bases=config.n_bases,
                         seed=config.seed)
    logger.info("training %s variant %d: %d parameters, %d train / %d val graphs",
                arch, variant, params.count(), len(train_idx), len(val_idx))

    state = AdamState.for_params(params)
    history: list[EpochStats] = []
    best = params.copy()
    best_f1 = -1.0
    val_graphs = [graphs[i] for i in val_idx]
    val_labels = labels[val_idx]

    for epoch in range(config.epochs):
        order = train_idx[rng.permutation(len(train_idx))]
        total_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            chunk = order[start:start + config.batch_size]
            batch = make_batch([graphs[i] for i in chunk])
            p, caches = forward_batch(batch, params)
            total_loss += bce_loss(p, batch.labels) * len(chunk)
            d_logits = (p - batch.labels) / len(chunk)
            grads = backward_batch(batch, params, caches, d_logits)
            adam_step(params, grads, state, config.learning_rate)
        train_loss = total_loss / len(order)

        if len(val_idx):
            val_p = predict_proba(val_graphs, params)
            val_acc, val_f1 = _accuracy_f1((val_p >= 0.5).astype(int), val_labels)
        else:
            val_acc, val_f1 = float("nan"), -1.0
        history.append(EpochStats(epoch=epoch, train_loss=train_loss,
                                  val_accuracy=val_acc, val_f1=val_f1))
        if val_f1 > best_f1:
            best_f1 = val_f1
            best = params.copy()

    if config.epochs == 0 or best_f1 < 0:
        best = params.copy()
    return best, history


def write_history(history, path) -> None:
    """Per-epoch training curve as CSV (epoch, train_loss, val_acc, val_f1)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "val_acc", "val_f1"])
        for row in history:
            writer.writerow([row.epoch, f"{row.train_loss:.10g}",
                             f"{row.val_accuracy:.10g}", f"{row.val_f1:.10g}"])
