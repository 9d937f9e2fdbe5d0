"""Full model: two relational conv layers, a linear or conv head, sigmoid.

Architectures: ``sage`` (Sage-style convolution) and ``gat`` (attention
convolution).  Variant 1 reads the patient row after the second conv and
applies a linear head; variant 2 applies a third convolution with output
dimension 1 and reads the patient row.  ReLU follows the first two layers,
sigmoid the last.  The readmission probability is the value at the patient
node.

Graphs are processed in block-diagonal batches: node features of the batch
members are stacked and edge indices offset, which is exactly equivalent to
per-graph evaluation because no edges cross graph boundaries.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from .._utils import derive_rng
from ..exceptions import NumericError, ValidationError
from ..vectorize import NumericGraph, relation_set
from .layers import (
    BasisDecomp,
    GatConvParams,
    SageConvParams,
    gat_backward,
    gat_forward,
    glorot,
    sage_backward,
    sage_forward,
)

ARCHS = ("sage", "gat")
VARIANTS = (1, 2)
DEFAULT_HIDDEN = (64, 32)


@dataclass
class LinearParams:
    weight: np.ndarray
    bias: np.ndarray

    @classmethod
    def init(cls, rng, d_in: int, d_out: int) -> "LinearParams":
        return cls(weight=glorot(rng, (d_in, d_out), d_in, d_out),
                   bias=np.zeros(d_out))


@dataclass
class ModelParams:
    """All learnable tensors of one model, addressable by dotted name."""

    arch: str
    variant: int
    relations: tuple
    dims: tuple  # (d_in, hidden1, hidden2)
    n_bases: int
    conv1: object
    conv2: object
    final: object

    def _layer_arrays(self, name, layer):
        if isinstance(layer, LinearParams):
            return [(f"{name}.weight", layer.weight), (f"{name}.bias", layer.bias)]
        entries = [(f"{name}.bases", layer.basis.bases),
                   (f"{name}.coeffs", layer.basis.coeffs)]
        if isinstance(layer, SageConvParams):
            entries.append((f"{name}.self_weight", layer.self_weight))
        else:
            entries.append((f"{name}.attn", layer.attn))
        return entries

    def named_arrays(self) -> list:
        """(name, array) pairs; the arrays are live references."""
        out = []
        for name, layer in (("conv1", self.conv1), ("conv2", self.conv2),
                            ("final", self.final)):
            out.extend(self._layer_arrays(name, layer))
        return out

    def count(self) -> int:
        return int(sum(arr.size for _, arr in self.named_arrays()))

    def copy(self) -> "ModelParams":
        return copy.deepcopy(self)


def init_params(arch: str, variant: int, relations, d_in: int,
                hidden=DEFAULT_HIDDEN, n_bases: int = 3, seed: int = 0) -> ModelParams:
    """Glorot-initialized parameters for one architecture/variant."""
    if arch not in ARCHS:
        raise ValidationError(f"unknown architecture {arch!r}")
    if variant not in VARIANTS:
        raise ValidationError(f"unknown variant {variant!r}")
    relations = tuple(relations)
    h1, h2 = hidden
    rng = derive_rng(seed, "init", arch, variant)
    conv_cls = SageConvParams if arch == "sage" else GatConvParams
    conv1 = conv_cls.init(rng, len(relations), n_bases, d_in, h1)
    conv2 = conv_cls.init(rng, len(relations), n_bases, h1, h2)
    if variant == 1:
        final = LinearParams.init(rng, h2, 1)
    else:
        final = conv_cls.init(rng, len(relations), n_bases, h2, 1)
    return ModelParams(arch=arch, variant=variant, relations=relations,
                       dims=(d_in, h1, h2), n_bases=n_bases,
                       conv1=conv1, conv2=conv2, final=final)


@dataclass
class GraphBatch:
    """Block-diagonal stack of graphs sharing one version and vocabulary."""

    X: np.ndarray
    edges: list
    patient_rows: np.ndarray
    labels: np.ndarray
    relations: tuple


def make_batch(graphs) -> GraphBatch:
    graphs = list(graphs)
    if not graphs:
        raise ValidationError("cannot batch zero graphs")
    version = graphs[0].version
    relations = relation_set(version)
    if any(g.version != version for g in graphs):
        raise ValidationError("all graphs in a batch must share one version")
    dims = {g.node_features.shape[1] for g in graphs}
    if len(dims) != 1:
        raise ValidationError("all graphs in a batch must share one vocabulary")

    features = []
    edges = {rel: [] for rel in relations}
    patient_rows = []
    labels = []
    offset = 0
    for g in graphs:
        features.append(np.asarray(g.node_features, dtype=np.float64))
        for rel in relations:
            arr = g.edges[rel]
            if arr.size:
                edges[rel].append(arr + offset)
        patient_rows.append(offset + g.patient_index)
        labels.append(g.label)
        offset += g.n_nodes
    stacked = {
        rel: (np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64))
        for rel, parts in edges.items()
    }
    return GraphBatch(
        X=np.vstack(features),
        edges=[stacked[rel] for rel in relations],
        patient_rows=np.asarray(patient_rows, dtype=np.int64),
        labels=np.asarray(labels, dtype=np.float64),
        relations=relations,
    )


def _check_finite(arr, layer: str):
    if not np.isfinite(arr).all():
        raise NumericError("non-finite values in layer output", layer=layer)


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    z = np.exp(x[~pos])
    out[~pos] = z / (1.0 + z)
    # keep probabilities strictly inside (0, 1) even for saturating logits
    return np.clip(out, 1e-12, 1.0 - 1e-12)


def forward_batch(batch: GraphBatch, params: ModelParams):
    """Return (probabilities, caches) for one batch."""
    conv_fwd = sage_forward if params.arch == "sage" else gat_forward
    if batch.X.shape[1] != params.dims[0]:
        raise ValidationError(
            f"feature dim {batch.X.shape[1]} does not match model input {params.dims[0]}")
    if batch.relations != params.relations:
        raise ValidationError("batch relations do not match model relations")

    h1, c1 = conv_fwd(batch.X, batch.edges, params.conv1)
    _check_finite(h1, "layer1")
    a1 = np.maximum(h1, 0.0)

    h2, c2 = conv_fwd(a1, batch.edges, params.conv2)
    _check_finite(h2, "layer2")
    a2 = np.maximum(h2, 0.0)

    if params.variant == 1:
        logits = (a2[batch.patient_rows] @ params.final.weight
                  + params.final.bias).ravel()
        c3 = None
    else:
        h3, c3 = conv_fwd(a2, batch.edges, params.final)
        logits = h3[batch.patient_rows].ravel()
    _check_finite(logits, "layer3")

    p = _sigmoid(logits)
    caches = {"c1": c1, "c2": c2, "c3": c3, "m1": h1 > 0, "m2": h2 > 0,
              "a2": a2, "p": p}
    return p, caches


def backward_batch(batch: GraphBatch, params: ModelParams, caches, d_logits):
    """Gradients of every parameter given upstream logit gradients."""
    conv_bwd = sage_backward if params.arch == "sage" else gat_backward
    grads = {}
    a2 = caches["a2"]

    # patient rows are unique within a batch, so plain assignment scatters
    if params.variant == 1:
        rows = a2[batch.patient_rows]
        grads["final.weight"] = rows.T @ d_logits[:, None]
        grads["final.bias"] = np.array([d_logits.sum()])
        d_a2 = np.zeros_like(a2)
        d_a2[batch.patient_rows] = d_logits[:, None] * params.final.weight[:, 0][None, :]
    else:
        d_h3 = np.zeros((a2.shape[0], 1))
        d_h3[batch.patient_rows, 0] = d_logits
        d_a2, g3 = conv_bwd(d_h3, caches["c3"], params.final)
        grads.update({f"final.{k}": v for k, v in g3.items()})

    d_h2 = d_a2 * caches["m2"]
    d_a1, g2 = conv_bwd(d_h2, caches["c2"], params.conv2)
    grads.update({f"conv2.{k}": v for k, v in g2.items()})

    d_h1 = d_a1 * caches["m1"]
    _, g1 = conv_bwd(d_h1, caches["c1"], params.conv1)
    grads.update({f"conv1.{k}": v for k, v in g1.items()})
    return grads


def bce_loss(p, label):
    """Binary cross-entropy with probabilities clamped away from 0 and 1."""
    p = np.clip(np.asarray(p, dtype=np.float64), 1e-12, 1.0 - 1e-12)
    y = np.asarray(label, dtype=np.float64)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log1p(-p))))


def model_forward(graph: NumericGraph, params: ModelParams) -> float:
    """Readmission probability of one graph, read at the patient node."""
    p, _ = forward_batch(make_batch([graph]), params)
    return float(p[0])


def backward(graph: NumericGraph, params: ModelParams, label) -> dict:
    """Per-parameter gradients of the single-example cross-entropy loss."""
    batch = make_batch([graph])
    p, caches = forward_batch(batch, params)
    d_logits = p - np.array([float(label)])
    return backward_batch(batch, params, caches, d_logits)


def predict_proba(graphs, params: ModelParams, chunk_size: int = 256) -> np.ndarray:
    """Probabilities for a sequence of graphs, evaluated in chunks."""
    graphs = list(graphs)
    out = np.empty(len(graphs))
    for start in range(0, len(graphs), chunk_size):
        chunk = graphs[start:start + chunk_size]
        out[start:start + len(chunk)], _ = forward_batch(make_batch(chunk), params)
    return out


def save_checkpoint(params: ModelParams, path) -> None:
    from ..container import write_container

    meta = {
        "kind": "model-checkpoint",
        "arch": params.arch,
        "variant": params.variant,
        "relations": list(params.relations),
        "dims": list(params.dims),
        "n_bases": params.n_bases,
    }
    write_container(path, meta, params.named_arrays())


def load_checkpoint(path) -> ModelParams:
    from ..container import read_container

    meta, arrays = read_container(path)
    if meta.get("kind") != "model-checkpoint":
        raise ValidationError(f"{path}: not a model checkpoint")
    params = init_params(meta["arch"], meta["variant"], meta["relations"],
                         d_in=meta["dims"][0], hidden=tuple(meta["dims"][1:]),
                         n_bases=meta["n_bases"], seed=0)
    for name, arr in params.named_arrays():
        stored = arrays[name]
        if stored.shape != arr.shape:
            raise ValidationError(f"{path}: shape mismatch for {name}")
        arr[...] = stored
    return params
