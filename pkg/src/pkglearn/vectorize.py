"""Numeric graphs: structure versions, bag-of-words features, ablation.

The four structure versions trade heterogeneity for simplicity: v1 keeps
the full 8-relation schema, v2 folds the demographic relations into
``hasDemographics``, v3 keeps a single generic ``has`` relation, and v4
keeps ``has`` but routes every leaf through one of seven inserted group
nodes.  In directed v1-v3 graphs every edge targets the central patient
node; undirected variants carry both directions under the same relation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .container import read_container, write_container
from .exceptions import ConfigurationError, ValidationError
from .stargraph import (
    DEMOGRAPHIC_FACETS,
    FACET_RELATION,
    TripleGraph,
    V1_RELATIONS,
    V2_RELATIONS,
    V3_RELATIONS,
)

VERSIONS = ("v1", "v2", "v3", "v4")
DIRECTIONS = ("directed", "undirected")

# The seven group-node descriptors of v4 (plus the patient descriptor these
# words join the vocabulary of every corpus).
GROUP_DESCRIPTIONS = (
    "diseases", "social context", "demographics", "age", "interventions",
    "procedures", "medication",
)
DESCRIPTOR_WORDS = ("patient",) + GROUP_DESCRIPTIONS

# Which group node parents each leaf facet in v4.  Demographic leaves hang
# off the demographics group only (not the patient); the age leaf hangs off
# the dedicated age group.
_V4_LEAF_GROUP = {
    "disease": "diseases",
    "social": "social context",
    "race_ethnicity": "demographics",
    "religion": "demographics",
    "gender": "demographics",
    "marital": "demographics",
    "age": "age",
    "procedure": "procedures",
    "medication": "medication",
}

# Facet names accepted by ablate() and the node facet categories they cover.
ABLATABLE_FACETS = {
    "social": frozenset({"social"}),
    "medication": frozenset({"medication"}),
    "procedures": frozenset({"procedure"}),
    "diseases": frozenset({"disease"}),
    "demographics": DEMOGRAPHIC_FACETS,
}

_TOKEN_RE = re.compile(r"[0-9a-z]+")


def relation_set(version: str) -> tuple:
    """Relation identifiers of a structure version (8 / 4 / 1 / 1)."""
    if version == "v1":
        return V1_RELATIONS
    if version == "v2":
        return V2_RELATIONS
    if version in ("v3", "v4"):
        return V3_RELATIONS
    raise ConfigurationError(f"unknown graph version {version!r}")


def tokenize(text: str) -> list:
    """Lowercase tokens split on non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Vocabulary:
    """Dense token -> index map built from node descriptions.

    Tokens are sorted before indexing, so any corpus ordering yields the
    same vocabulary.  ``oov_count`` tallies dropped out-of-vocabulary
    tokens; the corpus-built vocabulary is complete by construction, so a
    non-zero counter signals pipeline misuse.
    """

    index: dict
    oov_count: int = 0

    @property
    def size(self) -> int:
        return len(self.index)

    def tokens(self) -> list:
        return sorted(self.index, key=self.index.get)


def build_vocabulary(graphs) -> Vocabulary:
    """Collect description tokens from a graph corpus plus descriptor words."""
    graphs = list(graphs)
    if not graphs:
        raise ValidationError("cannot build a vocabulary from an empty corpus")
    tokens = set()
    for word in DESCRIPTOR_WORDS:
        tokens.update(tokenize(word))
    for graph in graphs:
        for _, description in graph.node_meta.values():
            tokens.update(tokenize(description))
    return Vocabulary(index={tok: i for i, tok in enumerate(sorted(tokens))})


def bow_features(description: str, vocab: Vocabulary) -> np.ndarray:
    """Token-count vector of length ``vocab.size``; OOV tokens are dropped."""
    vec = np.zeros(vocab.size, dtype=np.int64)
    for token in tokenize(description):
        pos = vocab.index.get(token)
        if pos is None:
            vocab.oov_count += 1
        else:
            vec[pos] += 1
    return vec


@dataclass
class NumericGraph:
    """Trainable form of one admission graph.

    ``edges`` maps every relation of the version's relation set to an
    ``(E, 2)`` int64 array of (source, target) node indices; undirected
    graphs carry both directions explicitly.
    """

    node_features: np.ndarray
    edges: dict
    patient_index: int
    label: int
    node_facets: list
    version: str
    direction: str

    @property
    def n_nodes(self) -> int:
        return int(self.node_features.shape[0])

    def validate(self) -> "NumericGraph":
        n = self.n_nodes
        if not 0 <= self.patient_index < n:
            raise ValidationError("patient_index out of range")
        if len(self.node_facets) != n:
            raise ValidationError("node_facets length mismatch")
        if self.label not in (0, 1):
            raise ValidationError(f"label must be 0/1, got {self.label!r}")
        if set(self.edges) != set(relation_set(self.version)):
            raise ValidationError("edge relations do not match the version's relation set")
        for rel, pairs in self.edges.items():
            if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
                raise ValidationError(f"edge endpoint out of range under {rel!r}")
        return self


def _leaf_relation(facet: str, version: str) -> str:
    if version == "v1":
        return FACET_RELATION[facet]
    if version == "v2":
        return "hasDemographics" if facet in DEMOGRAPHIC_FACETS else FACET_RELATION[facet]
    return "has"


def to_numeric(graph: TripleGraph, version: str, vocab: Vocabulary,
               direction: str = "directed") -> NumericGraph:
    """Transform a star graph into the numeric form of one version.

    Directed v1-v3: one leaf->patient edge per leaf, typed by the version's
    relation grouping.  Directed v4: patient->group and group->leaf edges
    under ``has``, with all seven group nodes always present.  Undirected
    variants add the reverse of every edge under the same relation.
    """
    if version not in VERSIONS:
        raise ConfigurationError(f"unknown graph version {version!r}")
    if direction not in DIRECTIONS:
        raise ConfigurationError(f"unknown direction {direction!r}")
    if graph.label is None:
        raise ValidationError(f"{graph.patient_node}: graph lacks a label")

    leaves = sorted(
        (node, facet, desc) for node, (facet, desc) in graph.node_meta.items()
        if facet != "patient"
    )

    node_ids = [graph.patient_node]
    descriptions = ["patient"]
    facets = ["patient"]
    if version == "v4":
        for word in GROUP_DESCRIPTIONS:
            node_ids.append(f"group/{word}")
            descriptions.append(word)
            facets.append("group")
    for node, facet, desc in leaves:
        node_ids.append(node)
        descriptions.append(desc)
        facets.append(facet)
    position = {node: i for i, node in enumerate(node_ids)}

    pairs = {rel: [] for rel in relation_set(version)}
    if version == "v4":
        group_pos = {word: position[f"group/{word}"] for word in GROUP_DESCRIPTIONS}
        pairs["has"].extend([
            (0, group_pos["diseases"]),
            (0, group_pos["social context"]),
            (0, group_pos["demographics"]),
            (0, group_pos["interventions"]),
            (group_pos["interventions"], group_pos["procedures"]),
            (group_pos["interventions"], group_pos["medication"]),
            (group_pos["demographics"], group_pos["age"]),
        ])
        for node, facet, _ in leaves:
            pairs["has"].append((group_pos[_V4_LEAF_GROUP[facet]], position[node]))
    else:
        for node, facet, _ in leaves:
            pairs[_leaf_relation(facet, version)].append((position[node], 0))

    if direction == "undirected":
        for rel in pairs:
            pairs[rel] = pairs[rel] + [(t, s) for s, t in pairs[rel]]

    edges = {
        rel: np.array(sorted(pairs[rel]), dtype=np.int64).reshape(-1, 2)
        for rel in pairs
    }
    features = np.vstack([bow_features(desc, vocab) for desc in descriptions])
    return NumericGraph(
        node_features=features,
        edges=edges,
        patient_index=0,
        label=int(graph.label),
        node_facets=facets,
        version=version,
        direction=direction,
    ).validate()


def ablate(graph: NumericGraph, facets) -> NumericGraph:
    """Remove all nodes of the given facets plus their incident edges.

    ``facets`` is a subset of {social, medication, procedures, diseases,
    demographics}; the patient node is always retained and the remaining
    nodes are reindexed densely.
    """
    facets = set(facets)
    unknown = facets - set(ABLATABLE_FACETS)
    if unknown:
        raise ConfigurationError(
            f"cannot ablate {sorted(unknown)}; allowed: {sorted(ABLATABLE_FACETS)}")
    if not facets:
        return replace(graph, edges={rel: arr.copy() for rel, arr in graph.edges.items()},
                       node_features=graph.node_features.copy(),
                       node_facets=list(graph.node_facets))

    removed = set()
    for facet in facets:
        removed |= ABLATABLE_FACETS[facet]
    keep = [i for i, facet in enumerate(graph.node_facets) if facet not in removed]
    remap = {old: new for new, old in enumerate(keep)}

    edges = {}
    for rel, arr in graph.edges.items():
        kept_rows = [
            (remap[int(s)], remap[int(t)]) for s, t in arr
            if int(s) in remap and int(t) in remap
        ]
        edges[rel] = np.array(sorted(kept_rows), dtype=np.int64).reshape(-1, 2)

    return NumericGraph(
        node_features=graph.node_features[keep].copy(),
        edges=edges,
        patient_index=remap[graph.patient_index],
        label=graph.label,
        node_facets=[graph.node_facets[i] for i in keep],
        version=graph.version,
        direction=graph.direction,
    ).validate()


def save_numeric_graph(graph: NumericGraph, path) -> None:
    meta = {
        "kind": "numeric-graph",
        "version": graph.version,
        "direction": graph.direction,
        "label": int(graph.label),
        "patient_index": int(graph.patient_index),
        "n_nodes": graph.n_nodes,
        "vocab_size": int(graph.node_features.shape[1]),
        "node_facets": list(graph.node_facets),
    }
    arrays = [("features", graph.node_features)]
    for rel in sorted(graph.edges):
        arrays.append((f"edges/{rel}", graph.edges[rel]))
    write_container(path, meta, arrays)


def load_numeric_graph(path) -> NumericGraph:
    meta, arrays = read_container(path)
    if meta.get("kind") != "numeric-graph":
        raise ValidationError(f"{path}: not a numeric graph container")
    edges = {
        name.split("/", 1)[1]: arr for name, arr in arrays.items()
        if name.startswith("edges/")
    }
    return NumericGraph(
        node_features=arrays["features"],
        edges=edges,
        patient_index=meta["patient_index"],
        label=meta["label"],
        node_facets=list(meta["node_facets"]),
        version=meta["version"],
        direction=meta["direction"],
    ).validate()


class GraphVectorizer(BaseEstimator, TransformerMixin):
    """Corpus-fitted transformer from star graphs to numeric graphs.

    ``fit`` learns the bag-of-words vocabulary from a corpus of star
    graphs; ``transform`` produces the numeric graphs of the configured
    version and direction.
    """

    def __init__(self, version: str = "v1", direction: str = "directed"):
        self.version = version
        self.direction = direction

    def fit(self, X, y=None) -> "GraphVectorizer":
        self.vocabulary_ = build_vocabulary(X)
        return self

    def transform(self, X) -> list:
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError("GraphVectorizer must be fitted before transform")
        return [to_numeric(g, self.version, self.vocabulary_, self.direction) for g in X]
