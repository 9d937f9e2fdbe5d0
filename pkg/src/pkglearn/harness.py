"""Experimental protocol: balanced splits, cross-validation, ablations, reports.

The imbalanced dataset is rebalanced by partitioning the majority class
into disjoint folds and pairing each fold with the full minority class
(one balanced split per fold).  Within a split, stratified k-fold
cross-validation assigns folds as a function of (labels, split, seed)
only, so every architecture sees identical memberships.  Results aggregate
as flat mean +/- sample standard deviation over all (split, fold) runs.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from ._utils import derive_rng
from ._validation import check_positive_int, check_seed
from .exceptions import ValidationError
from .vectorize import ABLATABLE_FACETS, ablate


@dataclass(frozen=True)
class BalancedSplit:
    """All minority-class records plus one disjoint majority fold."""

    split_id: int
    member_ids: tuple


@dataclass
class ExperimentResult:
    config: str
    version: str
    direction: str
    split_id: int
    fold_id: int
    seed: int
    accuracy: float
    f1: float
    runtime_s: float


def balanced_splits(labels, n_splits: int = 10, seed: int = 0) -> list:
    """Partition the majority class into ``n_splits`` near-equal folds.

    Each split holds one majority fold plus every minority record; fold
    sizes differ by at most one, and the fold assignment is a pure
    function of (labels, n_splits, seed).
    """
    check_positive_int(n_splits, "n_splits")
    check_seed(seed)
    labels = np.asarray(labels, dtype=np.int64)
    classes, counts = np.unique(labels, return_counts=True)
    if len(classes) != 2:
        raise ValidationError("balanced splits need exactly two classes")
    minority_class = classes[np.argmin(counts)]
    minority = np.flatnonzero(labels == minority_class)
    majority = np.flatnonzero(labels != minority_class)
    if n_splits > len(majority):
        raise ValidationError(
            f"n_splits={n_splits} exceeds majority count {len(majority)}")

    rng = derive_rng(seed, "balanced-splits")
    shuffled = majority[rng.permutation(len(majority))]
    return [
        BalancedSplit(split_id=i,
                      member_ids=tuple(sorted(np.concatenate([minority, fold]).tolist())))
        for i, fold in enumerate(np.array_split(shuffled, n_splits))
    ]


def metrics(predictions, labels) -> tuple[float, float]:
    """(accuracy percent, binary positive-class F1 percent)."""
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if predictions.size == 0:
        raise ValidationError("metrics need at least one prediction")
    if predictions.shape != labels.shape:
        raise ValidationError("predictions and labels differ in length")
    accuracy = 100.0 * float(np.mean(predictions == labels))
    tp = int(np.sum((predictions == 1) & (labels == 1)))
    fp = int(np.sum((predictions == 1) & (labels == 0)))
    fn = int(np.sum((predictions == 0) & (labels == 1)))
    f1 = 100.0 * 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0
    return accuracy, f1


def stratified_folds(member_ids, labels, k: int, seed: int, split_id: int) -> list:
    """Deterministic stratified fold assignment within one balanced split.

    Depends only on (labels, k, seed, split_id), never on the model, so
    the same splits serve every experimental setting.
    """
    check_positive_int(k, "k")
    member_ids = np.asarray(member_ids, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    rng = derive_rng(seed, "cv-folds", split_id)
    folds = [[] for _ in range(k)]
    for cls in np.unique(labels[member_ids]):
        members = member_ids[labels[member_ids] == cls]
        if len(members) < k:
            raise ValidationError(
                f"class {cls} has {len(members)} members, fewer than k={k}")
        members = members[rng.permutation(len(members))]
        for fold, part in zip(folds, np.array_split(members, k)):
            fold.extend(part.tolist())
    return [tuple(sorted(fold)) for fold in folds]


def cross_validate(estimator, X, y, split: BalancedSplit, k: int = 5,
                   seed: int = 0, config: str = "", version: str = "",
                   direction: str = "") -> list:
    """Stratified k-fold evaluation of one estimator on one balanced split.

    Each fold is held out once; the estimator is cloned and refitted on
    the remaining folds (model-internal validation carving happens inside
    ``fit``).  Emits one result row per fold.
    """
    y = np.asarray(y, dtype=np.int64)
    folds = stratified_folds(split.member_ids, y, k, seed, split.split_id)
    results = []
    for fold_id, test_ids in enumerate(folds):
        test_ids = list(test_ids)
        train_ids = [i for i in split.member_ids if i not in set(test_ids)]
        if len(np.unique(y[test_ids])) < 2 or len(np.unique(y[train_ids])) < 2:
            raise ValidationError(f"fold {fold_id} is single-class")
        started = time.perf_counter()
        model = clone(estimator)
        model.fit(_take(X, train_ids), y[train_ids])
        predictions = model.predict(_take(X, test_ids))
        accuracy, f1 = metrics(predictions, y[test_ids])
        results.append(ExperimentResult(
            config=config, version=version, direction=direction,
            split_id=split.split_id, fold_id=fold_id, seed=seed,
            accuracy=accuracy, f1=f1,
            runtime_s=time.perf_counter() - started,
        ))
    return results


def _take(X, ids):
    if isinstance(X, np.ndarray):
        return X[ids]
    return [X[i] for i in ids]


def run_experiment(estimator, X, y, n_splits: int = 10, k: int = 5,
                   seed: int = 0, config: str = "", version: str = "",
                   direction: str = "") -> list:
    """Balanced splits x k-fold CV for one configuration."""
    results = []
    for split in balanced_splits(y, n_splits=n_splits, seed=seed):
        results.extend(cross_validate(estimator, X, y, split, k=k, seed=seed,
                                      config=config, version=version,
                                      direction=direction))
    return results


# The single- and two-facet exclusions of the robustness study.
SINGLE_FACETS = ("social", "medication", "procedures", "diseases", "demographics")
DEFAULT_ABLATION_SETS = tuple(
    [frozenset({f}) for f in SINGLE_FACETS]
    + [frozenset({a, b}) for i, a in enumerate(SINGLE_FACETS)
       for b in SINGLE_FACETS[i + 1:]]
)


@dataclass
class AblationRow:
    excluded: tuple
    accuracy: float
    f1: float
    delta_accuracy: float
    delta_f1: float


def ablation_suite(estimator, graphs, labels, facet_sets=DEFAULT_ABLATION_SETS,
                   n_splits: int = 10, k: int = 5, seed: int = 0) -> list:
    """Re-run the full protocol with facet exclusions; deltas vs unablated.

    The first returned row is the unablated baseline (empty exclusion);
    each remaining row retrains on graphs with the facet set removed.
    """
    for facets in facet_sets:
        unknown = set(facets) - set(ABLATABLE_FACETS)
        if unknown:
            raise ValidationError(f"unknown ablation facet(s): {sorted(unknown)}")

    def mean_metrics(gs):
        rows = run_experiment(estimator, gs, labels, n_splits=n_splits, k=k,
                              seed=seed)
        return (float(np.mean([r.accuracy for r in rows])),
                float(np.mean([r.f1 for r in rows])))

    base_acc, base_f1 = mean_metrics(list(graphs))
    out = [AblationRow(excluded=(), accuracy=base_acc, f1=base_f1,
                       delta_accuracy=0.0, delta_f1=0.0)]
    for facets in facet_sets:
        ablated = [ablate(g, set(facets)) for g in graphs]
        acc, f1 = mean_metrics(ablated)
        out.append(AblationRow(
            excluded=tuple(sorted(facets)), accuracy=acc, f1=f1,
            delta_accuracy=acc - base_acc, delta_f1=f1 - base_f1,
        ))
    return out


RESULTS_FIELDS = ["config", "version", "direction", "split", "fold", "seed",
                  "accuracy", "f1", "runtime_s"]


def write_results_csv(results, path) -> None:
    """Per-run rows; the machine-readable record of an experiment."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_FIELDS)
        for r in sorted(results, key=lambda r: (r.config, r.version, r.direction,
                                                r.split_id, r.fold_id)):
            writer.writerow([r.config, r.version, r.direction, r.split_id,
                             r.fold_id, r.seed, f"{r.accuracy:.6f}",
                             f"{r.f1:.6f}", f"{r.runtime_s:.6f}"])


def read_results_csv(path) -> list:
    out = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(ExperimentResult(
                config=row["config"], version=row["version"],
                direction=row["direction"], split_id=int(row["split"]),
                fold_id=int(row["fold"]), seed=int(row["seed"]),
                accuracy=float(row["accuracy"]), f1=float(row["f1"]),
                runtime_s=float(row["runtime_s"]),
            ))
    return out


def aggregate_results(results) -> list:
    """Flat mean +/- sample std over all (split, fold) runs per configuration."""
    groups = {}
    for r in results:
        groups.setdefault((r.config, r.version, r.direction), []).append(r)
    out = []
    for (config, version, direction), rows in sorted(groups.items()):
        acc = np.array([r.accuracy for r in rows])
        f1 = np.array([r.f1 for r in rows])
        out.append({
            "config": config, "version": version, "direction": direction,
            "runs": len(rows),
            "accuracy_mean": float(acc.mean()),
            "accuracy_std": float(acc.std(ddof=1)) if len(rows) > 1 else 0.0,
            "f1_mean": float(f1.mean()),
            "f1_std": float(f1.std(ddof=1)) if len(rows) > 1 else 0.0,
        })
    return out


def format_report(results) -> tuple[str, str]:
    """(aggregate CSV text, aligned text table with mean +/- std cells)."""
    aggregates = aggregate_results(results)
    csv_lines = ["config,version,direction,runs,accuracy_mean,accuracy_std,"
                 "f1_mean,f1_std"]
    for agg in aggregates:
        csv_lines.append(
            f"{agg['config']},{agg['version']},{agg['direction']},{agg['runs']},"
            f"{agg['accuracy_mean']:.6f},{agg['accuracy_std']:.6f},"
            f"{agg['f1_mean']:.6f},{agg['f1_std']:.6f}")

    header = f"{'configuration':<28} {'runs':>5} {'accuracy':>16} {'f1-score':>16}"
    table = [header, "-" * len(header)]
    for agg in aggregates:
        name = " ".join(p for p in (agg["config"], agg["version"],
                                    agg["direction"]) if p)
        acc = f"{agg['accuracy_mean']:.2f} ± {agg['accuracy_std']:.2f}"
        f1 = f"{agg['f1_mean']:.2f} ± {agg['f1_std']:.2f}"
        table.append(f"{name:<28} {agg['runs']:>5} {acc:>16} {f1:>16}")
    return "\n".join(csv_lines) + "\n", "\n".join(table) + "\n"
