import numpy as np
import pytest

from pkglearn.cohort import AdmissionRecord, CohortConfig, MissingnessProfile, generate_cohort
from pkglearn.gnn import bce_loss, model_forward
from pkglearn.preprocess import group_records, label_and_exclude
from pkglearn.stargraph import Triple, TripleGraph
from pkglearn.vectorize import build_vocabulary, to_numeric


def make_record(admission_id="A00000101", patient_id="P000001", admit_day=0,
                discharge_day=5, age_years=67, labeled=True, **kwargs):
    record = AdmissionRecord(
        patient_id=patient_id,
        admission_id=admission_id,
        admit_day=admit_day,
        discharge_day=discharge_day,
        age_years=age_years,
        **kwargs,
    )
    if labeled:
        record.readmitted_within_window = kwargs.get("readmitted_within_window", False)
    return record


@pytest.fixture(scope="session")
def labeled_cohort():
    """A small labeled synthetic cohort shared across structural tests."""
    config = CohortConfig(n_patients=120, seed=11)
    return label_and_exclude(group_records(generate_cohort(config)))


_LEAF_FACETS = ("disease", "medication", "procedure", "social",
                "race_ethnicity", "religion", "gender", "marital", "age")


def random_star_graph(rng, n_leaves, label=None):
    """Hand-assembled star graph with tiny single-token descriptions."""
    triples = []
    meta = {"patient/X": ("patient", "patient")}
    for i in range(n_leaves):
        facet = _LEAF_FACETS[int(rng.integers(0, len(_LEAF_FACETS)))]
        node = f"{facet}/w{i}"
        meta[node] = (facet, f"w{i}")
        triples.append(Triple("patient/X", "hasDisease", node))
    if label is None:
        label = int(rng.integers(0, 2))
    return TripleGraph("patient/X", triples, meta, label=label)


def random_numeric_graphs(seed, version, direction, count=1, min_leaves=5,
                          max_leaves=11):
    """Random small numeric graphs built through the real transform path."""
    rng = np.random.default_rng(seed)
    if version == "v4":
        # seven group nodes plus the patient already take 8 slots
        min_leaves, max_leaves = 1, 4
    stars = [random_star_graph(rng, int(rng.integers(min_leaves, max_leaves + 1)))
             for _ in range(count)]
    vocab = build_vocabulary(stars)
    return [to_numeric(g, version, vocab, direction) for g in stars]


def finite_difference_gradients(graph, params, label, h=1e-5):
    """Central-difference gradients of the single-example loss."""
    out = {}
    for name, arr in params.named_arrays():
        grad = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            hi = bce_loss(model_forward(graph, params), label)
            flat[i] = orig - h
            lo = bce_loss(model_forward(graph, params), label)
            flat[i] = orig
            gflat[i] = (hi - lo) / (2.0 * h)
        out[name] = grad
    return out


def max_relative_error(analytic, numeric, floor=1e-4):
    """max over entries of |a - n| / max(|a|, |n|, floor)."""
    worst = 0.0
    for name, a in analytic.items():
        n = numeric[name]
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst
