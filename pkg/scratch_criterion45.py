"""Scratch: calibrate acceptance criteria 4/5 settings (not part of the package)."""
import time

import numpy as np

from pkglearn.baselines import BASELINES, encode_tabular
from pkglearn.cohort import CohortConfig, PlantedSignal, generate_cohort
from pkglearn.gnn import PKGClassifier
from pkglearn.harness import run_experiment
from pkglearn.preprocess import preprocess_records
from pkglearn.stargraph import build_pkg
from pkglearn.vectorize import GraphVectorizer

WEIGHTS = {
    "428": 2.9, "427": -2.2, "401": 2.2, "414": -1.8, "250": 1.8,
    "276": -1.6, "285": 1.4, "584": -1.4,
    "warfarin": 2.2, "furosemide": -1.8, "insulin": 1.6, "metoprolol": -1.4,
}

signal = PlantedSignal(weights=WEIGHTS, bias=-0.5, noise_std=0.25)
config = CohortConfig(n_patients=1250, seed=101, planted_signal=signal)
records = preprocess_records(generate_cohort(config), filter_to_cohort=False)
records = records[:2000]
labels = np.array([int(r.readmitted_within_window) for r in records])
print(f"admissions: {len(records)}, positive rate: {labels.mean():.3f}")

stars = [build_pkg(r) for r in records]
results = {}
for direction in ("undirected", "directed"):
    vec = GraphVectorizer(version="v3", direction=direction).fit(stars)
    graphs = vec.transform(stars)
    print(f"vocab {vec.vocabulary_.size}")
    for epochs in (40,):
        clf = PKGClassifier(arch="sage", variant=1, epochs=epochs, random_state=0)
        t0 = time.time()
        rows = run_experiment(clf, graphs, labels, n_splits=3, k=5, seed=0,
                              config=f"sage1-{direction}-{epochs}")
        took = time.time() - t0
        acc = np.mean([r.accuracy for r in rows])
        f1 = np.mean([r.f1 for r in rows])
        results[(direction, epochs)] = acc
        print(f"v3 {direction} sage1 epochs={epochs}: acc {acc:.2f} f1 {f1:.2f} "
              f"({took:.0f}s for 15 runs)")

data = encode_tabular(records)
for name in ("nb", "knn"):
    t0 = time.time()
    rows = run_experiment(BASELINES[name](), data.features, data.labels,
                          n_splits=3, k=5, seed=0, config=name)
    print(f"{name}: acc {np.mean([r.accuracy for r in rows]):.2f} "
          f"f1 {np.mean([r.f1 for r in rows]):.2f} ({time.time()-t0:.0f}s)")
