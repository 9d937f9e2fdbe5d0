"""Person-centric knowledge graphs with graph neural networks for
30-day readmission prediction on synthetic admission cohorts."""

from .baselines import (
    AdaBoostStumps,
    DecisionTreeCART,
    GaussianNBClassifier,
    KNNClassifier,
    LinearSVM,
    TabularDataset,
    encode_tabular,
)
from .cohort import (
    AdmissionRecord,
    CohortConfig,
    MissingnessProfile,
    PlantedSignal,
    apply_missingness,
    generate_cohort,
    read_records,
    write_records,
)
from .gnn import PKGClassifier, TrainConfig, train
from .harness import (
    BalancedSplit,
    ExperimentResult,
    ablation_suite,
    balanced_splits,
    cross_validate,
    metrics,
    run_experiment,
)
from .preprocess import (
    PreprocessConfig,
    filter_cohort,
    group_icd_code,
    group_records,
    label_and_exclude,
    preprocess_records,
)
from .stargraph import (
    HspoSchema,
    Triple,
    TripleGraph,
    build_pkg,
    parse_ntriples,
    query,
    serialize_ntriples,
)
from .vectorize import (
    GraphVectorizer,
    NumericGraph,
    Vocabulary,
    ablate,
    bow_features,
    build_vocabulary,
    load_numeric_graph,
    relation_set,
    save_numeric_graph,
    to_numeric,
)

__version__ = "0.1.0"

__all__ = [
    "AdaBoostStumps", "AdmissionRecord", "BalancedSplit", "CohortConfig",
    "DecisionTreeCART", "ExperimentResult", "GaussianNBClassifier",
    "GraphVectorizer", "HspoSchema", "KNNClassifier", "LinearSVM",
    "MissingnessProfile", "NumericGraph", "PKGClassifier", "PlantedSignal",
    "PreprocessConfig", "TabularDataset", "TrainConfig", "Triple",
    "TripleGraph", "Vocabulary", "ablate", "ablation_suite",
    "apply_missingness", "balanced_splits", "bow_features",
    "build_pkg", "build_vocabulary", "cross_validate", "encode_tabular",
    "filter_cohort", "generate_cohort", "group_icd_code", "group_records",
    "label_and_exclude", "load_numeric_graph", "metrics", "parse_ntriples",
    "preprocess_records", "query", "read_records", "relation_set",
    "run_experiment", "save_numeric_graph", "serialize_ntriples",
    "to_numeric", "train", "write_records",
]
