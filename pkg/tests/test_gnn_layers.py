import numpy as np
import numpy.testing as npt
import pytest

from pkglearn.exceptions import ValidationError
from pkglearn.gnn import (
    BasisDecomp,
    GatConvParams,
    SageConvParams,
    gat_forward,
    gat_layer,
    sage_layer,
)


def sage_params(rng, n_rel, n_bases, d_in, d_out):
    return SageConvParams.init(rng, n_rel, n_bases, d_in, d_out)


def reference_relational_conv(X, edge_arrays, self_weight, rel_weights):
    """Independent slow oracle: per-node loop, mean over in-edge multiset."""
    n = X.shape[0]
    out = X @ self_weight
    for arr, W in zip(edge_arrays, rel_weights):
        for v in range(n):
            incoming = [int(s) for s, t in arr if int(t) == v]
            if incoming:
                mean = np.mean([X[s] for s in incoming], axis=0)
                out[v] += mean @ W
    return out


def test_sage_no_edges_identity_self_weight():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(5, 4))
    params = sage_params(rng, n_rel=2, n_bases=2, d_in=4, d_out=4)
    params.self_weight = np.eye(4)
    out = sage_layer(X, [np.zeros((0, 2), dtype=np.int64)] * 2, params)
    npt.assert_allclose(out, X, atol=1e-15)


def test_sage_single_edge_hand_computation():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(2, 3))
    params = sage_params(rng, n_rel=1, n_bases=1, d_in=3, d_out=2)
    W = params.basis.weights()[0]
    out = sage_layer(X, [np.array([[0, 1]])], params)
    npt.assert_allclose(out[1] - X[1] @ params.self_weight, X[0] @ W, atol=1e-12)
    npt.assert_allclose(out[0], X[0] @ params.self_weight, atol=1e-12)


def test_sage_duplicate_edge_equals_single():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(3, 4))
    params = sage_params(rng, n_rel=1, n_bases=2, d_in=4, d_out=3)
    once = sage_layer(X, [np.array([[0, 2]])], params)
    twice = sage_layer(X, [np.array([[0, 2], [0, 2]])], params)
    npt.assert_allclose(once, twice, atol=1e-12)


def test_sage_matches_independent_weights_reference():
    # With one basis per relation and identity coefficients the basis
    # decomposition reduces to independent per-relation weights.
    rng = np.random.default_rng(3)
    n_rel, d_in, d_out, n = 3, 5, 4, 7
    params = sage_params(rng, n_rel, n_bases=n_rel, d_in=d_in, d_out=d_out)
    params.basis.coeffs = np.eye(n_rel)
    edges = [
        np.array([[0, 1], [2, 1], [3, 4]]),
        np.array([[5, 6], [6, 5], [1, 1]]),
        np.zeros((0, 2), dtype=np.int64),
    ]
    X = rng.normal(size=(n, d_in))
    out = sage_layer(X, edges, params)
    ref = reference_relational_conv(X, edges, params.self_weight,
                                    list(params.basis.bases))
    npt.assert_allclose(out, ref, atol=1e-12)


def test_basis_weights_mix():
    rng = np.random.default_rng(4)
    basis = BasisDecomp.init(rng, n_relations=4, n_bases=2, d_in=3, d_out=3)
    W = basis.weights()
    for r in range(4):
        expected = sum(basis.coeffs[r, b] * basis.bases[b] for b in range(2))
        npt.assert_allclose(W[r], expected, atol=1e-14)


def test_gat_equal_features_split_attention_half_half():
    rng = np.random.default_rng(5)
    params = GatConvParams.init(rng, n_relations=1, n_bases=1, d_in=3, d_out=2)
    x = rng.normal(size=3)
    X = np.vstack([x, x])  # identical features, so identical transformed rows
    out, cache = gat_forward(X, [np.array([[0, 1]])], params)
    alpha = cache["rel"][0]["alpha"]
    tgt = cache["rel"][0]["tgt"]
    npt.assert_allclose(alpha[tgt == 1], [0.5, 0.5], atol=1e-12)
    Z = X @ params.basis.weights()[0]
    npt.assert_allclose(out[1], Z[1], atol=1e-12)


def test_gat_isolated_node_self_loop_only():
    rng = np.random.default_rng(6)
    params = GatConvParams.init(rng, n_relations=1, n_bases=1, d_in=4, d_out=3)
    X = rng.normal(size=(1, 4))
    out = gat_layer(X, [np.zeros((0, 2), dtype=np.int64)], params)
    npt.assert_allclose(out, X @ params.basis.weights()[0], atol=1e-12)


def test_gat_star_attention_sums_to_one():
    rng = np.random.default_rng(7)
    params = GatConvParams.init(rng, n_relations=2, n_bases=2, d_in=3, d_out=2)
    X = rng.normal(size=(3, 3))
    edges = [np.array([[1, 0], [2, 0]]), np.array([[2, 0]])]
    _, cache = gat_forward(X, edges, params)
    for rc in cache["rel"]:
        sums = np.zeros(3)
        np.add.at(sums, rc["tgt"], rc["alpha"])
        npt.assert_allclose(sums, np.ones(3), atol=1e-12)


@pytest.mark.parametrize("layer", [sage_layer, gat_layer])
def test_layer_shape_mismatch_rejected(layer):
    rng = np.random.default_rng(8)
    if layer is sage_layer:
        params = sage_params(rng, 1, 1, d_in=4, d_out=2)
    else:
        params = GatConvParams.init(rng, 1, 1, d_in=4, d_out=2)
    with pytest.raises(ValidationError):
        layer(rng.normal(size=(3, 5)), [np.zeros((0, 2), dtype=np.int64)], params)


def test_layer_edge_count_mismatch_rejected():
    rng = np.random.default_rng(9)
    params = sage_params(rng, 2, 1, d_in=3, d_out=2)
    with pytest.raises(ValidationError):
        sage_layer(rng.normal(size=(3, 3)), [np.zeros((0, 2), dtype=np.int64)], params)
