"""Relational graph convolutions with basis-decomposed weights.

Two layer types, both single-head and 64-bit: a Sage-style layer (self
transform plus per-relation mean aggregation) and an attention layer
(per-relation softmax attention with self-loops).  Per-relation weight
matrices are never stored directly; they are mixed from shared basis
matrices, ``W_r = sum_b coeffs[r, b] * bases[b]``.

Each layer exposes ``*_forward`` returning ``(output, cache)`` and a
matching ``*_backward`` that propagates an upstream gradient to the inputs
and to every parameter tensor.  Activations are applied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..exceptions import ValidationError

LEAKY_SLOPE = 0.2


def glorot(rng: np.random.Generator, shape, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


@dataclass
class BasisDecomp:
    """Shared bases (B, d_in, d_out) and per-relation coefficients (R, B)."""

    bases: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def init(cls, rng, n_relations: int, n_bases: int, d_in: int, d_out: int) -> "BasisDecomp":
        bases = np.stack([glorot(rng, (d_in, d_out), d_in, d_out)
                          for _ in range(n_bases)])
        coeffs = glorot(rng, (n_relations, n_bases), n_relations, n_bases)
        return cls(bases=bases, coeffs=coeffs)

    @property
    def n_relations(self) -> int:
        return self.coeffs.shape[0]

    def weights(self) -> np.ndarray:
        """Effective per-relation weights, shape (R, d_in, d_out)."""
        return np.einsum("rb,bio->rio", self.coeffs, self.bases)

    def backward(self, d_weights: np.ndarray) -> dict:
        """Gradients of bases/coeffs given gradients of the mixed weights."""
        return {
            "bases": np.einsum("rb,rio->bio", self.coeffs, d_weights),
            "coeffs": np.einsum("rio,bio->rb", d_weights, self.bases),
        }


@dataclass
class SageConvParams:
    basis: BasisDecomp
    self_weight: np.ndarray

    @classmethod
    def init(cls, rng, n_relations, n_bases, d_in, d_out) -> "SageConvParams":
        return cls(
            basis=BasisDecomp.init(rng, n_relations, n_bases, d_in, d_out),
            self_weight=glorot(rng, (d_in, d_out), d_in, d_out),
        )


@dataclass
class GatConvParams:
    basis: BasisDecomp
    attn: np.ndarray  # (R, 2 * d_out): source half then target half

    @classmethod
    def init(cls, rng, n_relations, n_bases, d_in, d_out) -> "GatConvParams":
        return cls(
            basis=BasisDecomp.init(rng, n_relations, n_bases, d_in, d_out),
            attn=np.stack([glorot(rng, (2 * d_out,), 2 * d_out, 1)
                           for _ in range(n_relations)]),
        )


def _check_edges(edge_arrays, n_relations: int, n_nodes: int) -> list:
    edge_arrays = [np.asarray(arr, dtype=np.int64).reshape(-1, 2) for arr in edge_arrays]
    if len(edge_arrays) != n_relations:
        raise ValidationError(
            f"expected {n_relations} edge arrays, got {len(edge_arrays)}")
    for arr in edge_arrays:
        if arr.size and (arr.min() < 0 or arr.max() >= n_nodes):
            raise ValidationError("edge endpoint out of range")
    return edge_arrays


def _segment_max(values, index, n_nodes):
    """Per-segment maxima of scalar ``values`` grouped by ``index``."""
    order = np.argsort(index, kind="stable")
    sorted_index = index[order]
    starts = np.concatenate([[0], np.flatnonzero(np.diff(sorted_index)) + 1])
    out = np.full(n_nodes, -np.inf)
    out[sorted_index[starts]] = np.maximum.reduceat(values[order], starts)
    return out


def _scatter_matrix(data, src, tgt, n_nodes):
    """CSR matrix S with S[t, s] += data_e for every edge e = (s, t).

    ``S @ X`` then accumulates per-target sums of edge-weighted source rows;
    duplicate edges accumulate, matching multiset semantics.
    """
    return sparse.csr_matrix((data, (tgt, src)), shape=(n_nodes, n_nodes))


def _mean_matrix(src, tgt, n_nodes):
    deg = np.bincount(tgt, minlength=n_nodes).astype(np.float64)
    return _scatter_matrix(1.0 / deg[tgt], src, tgt, n_nodes), deg


def sage_forward(X, edge_arrays, params: SageConvParams):
    """out[v] = X[v] @ W_self + sum_r mean_{u in N_r(v)} X[u] @ W_r.

    The mean runs over the in-edge multiset per relation; nodes with no
    in-edges under a relation contribute zero for that relation.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if X.shape[1] != params.self_weight.shape[0]:
        raise ValidationError(
            f"feature dim {X.shape[1]} does not match layer input {params.self_weight.shape[0]}")
    edge_arrays = _check_edges(edge_arrays, params.basis.n_relations, n)
    weights = params.basis.weights()

    out = X @ params.self_weight
    aggs = []
    means = []
    for r, arr in enumerate(edge_arrays):
        if arr.size == 0:
            aggs.append(None)
            means.append(None)
            continue
        mean_mat, _ = _mean_matrix(arr[:, 0], arr[:, 1], n)
        agg = mean_mat @ X
        aggs.append(agg)
        means.append(mean_mat)
        out += agg @ weights[r]
    cache = {"X": X, "aggs": aggs, "means": means, "weights": weights}
    return out, cache


def sage_backward(d_out, cache, params: SageConvParams):
    """Return (dX, grads) with grads for bases, coeffs, and self_weight."""
    X = cache["X"]
    weights = cache["weights"]
    dX = d_out @ params.self_weight.T
    d_self = X.T @ d_out
    d_weights = np.zeros_like(weights)
    for r, mean_mat in enumerate(cache["means"]):
        if mean_mat is None:
            continue
        d_weights[r] = cache["aggs"][r].T @ d_out
        dX += mean_mat.T @ (d_out @ weights[r].T)
    grads = params.basis.backward(d_weights)
    grads["self_weight"] = d_self
    return dX, grads


def gat_forward(X, edge_arrays, params: GatConvParams):
    """Per-relation softmax attention over in-neighbors plus a self-loop.

    For every relation each node receives a self-loop, so an isolated node
    under a single relation reduces to ``X[v] @ W_r`` with attention 1.
    Attention logits use the concatenation form with LeakyReLU slope 0.2.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    d_in = params.basis.bases.shape[1]
    if X.shape[1] != d_in:
        raise ValidationError(
            f"feature dim {X.shape[1]} does not match layer input {d_in}")
    edge_arrays = _check_edges(edge_arrays, params.basis.n_relations, n)
    weights = params.basis.weights()
    d_out_dim = weights.shape[2]

    out = np.zeros((n, d_out_dim))
    rel_caches = []
    loop = np.arange(n, dtype=np.int64)
    for r, arr in enumerate(edge_arrays):
        src = np.concatenate([arr[:, 0], loop])
        tgt = np.concatenate([arr[:, 1], loop])
        Z = X @ weights[r]
        a_src = params.attn[r, :d_out_dim]
        a_dst = params.attn[r, d_out_dim:]
        pre = Z[src] @ a_src + Z[tgt] @ a_dst
        act = np.where(pre > 0, pre, LEAKY_SLOPE * pre)

        peak = _segment_max(act, tgt, n)
        expw = np.exp(act - peak[tgt])
        norm = np.bincount(tgt, weights=expw, minlength=n)
        alpha = expw / norm[tgt]

        attend = _scatter_matrix(alpha, src, tgt, n)
        out += attend @ Z
        rel_caches.append({"src": src, "tgt": tgt, "Z": Z, "alpha": alpha,
                           "pos": pre > 0, "attend": attend})
    cache = {"X": X, "weights": weights, "rel": rel_caches}
    return out, cache


def gat_backward(d_out, cache, params: GatConvParams):
    """Return (dX, grads) with grads for bases, coeffs, and attn."""
    X = cache["X"]
    weights = cache["weights"]
    n, d_out_dim = d_out.shape
    dX = np.zeros_like(X)
    d_weights = np.zeros_like(weights)
    d_attn = np.zeros_like(params.attn)

    for r, rc in enumerate(cache["rel"]):
        src, tgt, Z, alpha = rc["src"], rc["tgt"], rc["Z"], rc["alpha"]
        a_src = params.attn[r, :d_out_dim]
        a_dst = params.attn[r, d_out_dim:]

        d_alpha = (d_out[tgt] * Z[src]).sum(axis=1)
        dZ = rc["attend"].T @ d_out

        # softmax over edges sharing a target node
        dot = np.bincount(tgt, weights=alpha * d_alpha, minlength=n)
        d_act = alpha * (d_alpha - dot[tgt])
        d_pre = d_act * np.where(rc["pos"], 1.0, LEAKY_SLOPE)

        # pre_e = Z[src_e] . a_src + Z[tgt_e] . a_dst collapses to per-node
        # scalar sums, so both the attn grads and dZ are rank-1 updates
        src_sum = np.bincount(src, weights=d_pre, minlength=n)
        tgt_sum = np.bincount(tgt, weights=d_pre, minlength=n)
        d_attn[r, :d_out_dim] = src_sum @ Z
        d_attn[r, d_out_dim:] = tgt_sum @ Z
        dZ += np.outer(src_sum, a_src) + np.outer(tgt_sum, a_dst)

        d_weights[r] = X.T @ dZ
        dX += dZ @ weights[r].T

    grads = params.basis.backward(d_weights)
    grads["attn"] = d_attn
    return dX, grads


def sage_layer(X, edge_arrays, params: SageConvParams) -> np.ndarray:
    """Forward-only Sage convolution (activation applied by the caller)."""
    return sage_forward(X, edge_arrays, params)[0]


def gat_layer(X, edge_arrays, params: GatConvParams) -> np.ndarray:
    """Forward-only attention convolution (activation applied by the caller)."""
    return gat_forward(X, edge_arrays, params)[0]
