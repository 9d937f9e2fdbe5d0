"""Command-line pipeline: generate -> preprocess -> build-graphs -> transform
-> train/evaluate -> ablate -> report.

One JSON configuration file drives every stage; flags override individual
settings.  Each stage writes a manifest (config hash, seed, input/output
hashes) next to its outputs.  Exit codes: 0 success, 2 usage, 3 validation
or configuration failure, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._utils import canonical_json, sha256_bytes, sha256_file
from .baselines import BASELINES, encode_tabular
from .cohort import (
    CohortConfig,
    MissingnessProfile,
    PlantedSignal,
    generate_cohort,
    read_records,
    write_records,
)
from .exceptions import NumericError, PkgLearnError, ValidationError
from .gnn import PKGClassifier
from .harness import format_report, read_results_csv, run_experiment, write_results_csv
from .harness import ablation_suite as run_ablation_suite
from .preprocess import PreprocessConfig, preprocess_records, summarize_records
from .stargraph import build_pkg, parse_ntriples, serialize_ntriples
from .vectorize import (
    DIRECTIONS,
    VERSIONS,
    GraphVectorizer,
    load_numeric_graph,
    save_numeric_graph,
)

ARCH_CHOICES = ("sage", "gat")


@dataclass
class PipelineConfig:
    workdir: Path
    seed: int = 0
    cohort: dict = field(default_factory=dict)
    preprocess: dict = field(default_factory=dict)
    train: dict = field(default_factory=dict)
    matrix: dict = field(default_factory=lambda: {
        "versions": list(VERSIONS), "directions": list(DIRECTIONS),
        "archs": list(ARCH_CHOICES), "variants": [1, 2],
    })
    baselines: list = field(default_factory=lambda: sorted(BASELINES))
    splits: int = 10
    folds: int = 5

    @classmethod
    def load(cls, path, seed_override=None) -> "PipelineConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValidationError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config file {path} is not valid JSON: {exc}")
        known = {"workdir", "seed", "cohort", "preprocess", "train", "matrix",
                 "baselines", "splits", "folds"}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown config key(s): {sorted(unknown)}")
        if "workdir" not in raw:
            raise ValidationError("config must set 'workdir'")
        config = cls(**{**raw, "workdir": Path(raw["workdir"])})
        if seed_override is not None:
            config.seed = int(seed_override)
        matrix = config.matrix
        if not (matrix.get("versions") and matrix.get("directions")
                and matrix.get("archs") and matrix.get("variants")):
            raise ValidationError("experiment matrix must be non-empty")
        config.workdir.mkdir(parents=True, exist_ok=True)
        return config

    def config_hash(self) -> str:
        data = {k: v for k, v in self.__dict__.items() if k != "workdir"}
        return sha256_bytes(canonical_json(data).encode())

    def cohort_config(self) -> CohortConfig:
        raw = dict(self.cohort)
        missingness = raw.pop("missingness", None)
        signal = raw.pop("planted_signal", None)
        return CohortConfig(
            missingness=(MissingnessProfile.from_dict(missingness)
                         if missingness else MissingnessProfile()),
            planted_signal=PlantedSignal(**signal) if signal else None,
            seed=self.seed,
            **raw,
        ).validate()

    def preprocess_config(self) -> tuple[PreprocessConfig, bool]:
        raw = dict(self.preprocess)
        filter_to_cohort = raw.pop("filter_cohort", True)
        if "cohort_codes" in raw:
            raw["cohort_codes"] = frozenset(raw["cohort_codes"])
        return PreprocessConfig(**raw).validate(), filter_to_cohort

    # stage artifact paths
    def cohort_path(self) -> Path:
        return self.workdir / "cohort.jsonl"

    def processed_path(self) -> Path:
        return self.workdir / "processed.jsonl"

    def summary_path(self) -> Path:
        return self.workdir / "summary.txt"

    def graphs_dir(self) -> Path:
        return self.workdir / "graphs"

    def numeric_dir(self, version, direction) -> Path:
        return self.workdir / "numeric" / f"{version}-{direction}"

    def results_path(self) -> Path:
        return self.workdir / "results.csv"


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise ValidationError(
            f"missing expected artifact {path}; run `pkglearn {producer}` first")
    return path


def _write_manifest(config: PipelineConfig, stage: str, inputs, outputs) -> None:
    manifest = {
        "stage": stage,
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "inputs": {str(p.relative_to(config.workdir)): sha256_file(p)
                   for p in inputs},
        "outputs": {str(p.relative_to(config.workdir)): sha256_file(p)
                    for p in outputs},
    }
    path = config.workdir / f"{stage}.manifest.json"
    path.write_text(canonical_json(manifest) + "\n", encoding="utf-8")


def cmd_generate(config: PipelineConfig, args) -> int:
    records = generate_cohort(config.cohort_config())
    write_records(records, config.cohort_path())
    _write_manifest(config, "generate", [], [config.cohort_path()])
    print(f"wrote {len(records)} admissions to {config.cohort_path()}")
    return 0


def cmd_preprocess(config: PipelineConfig, args) -> int:
    source = _require(config.cohort_path(), "generate")
    pre_config, filter_to_cohort = config.preprocess_config()
    records = preprocess_records(read_records(source), pre_config,
                                 filter_to_cohort=filter_to_cohort)
    if not records:
        raise ValidationError("preprocessing produced an empty record set")
    write_records(records, config.processed_path())
    config.summary_path().write_text(summarize_records(records), encoding="utf-8")
    _write_manifest(config, "preprocess", [source],
                    [config.processed_path(), config.summary_path()])
    positives = sum(1 for r in records if r.readmitted_within_window)
    print(f"kept {len(records)} admissions ({positives} positive) "
          f"-> {config.processed_path()}")
    return 0


def cmd_build_graphs(config: PipelineConfig, args) -> int:
    source = _require(config.processed_path(), "preprocess")
    records = read_records(source)
    out_dir = config.graphs_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for record in records:
        graph = build_pkg(record)
        path = out_dir / f"{record.admission_id}.nt"
        path.write_text(serialize_ntriples(graph), encoding="utf-8")
        outputs.append(path)
    _write_manifest(config, "build-graphs", [source], outputs)
    print(f"wrote {len(outputs)} graphs to {out_dir}")
    return 0


def _load_star_corpus(config: PipelineConfig):
    source = _require(config.processed_path(), "preprocess")
    graphs_dir = _require(config.graphs_dir(), "build-graphs")
    labels = {r.admission_id: int(r.readmitted_within_window)
              for r in read_records(source)}
    corpus = []
    for path in sorted(graphs_dir.glob("*.nt")):
        graph = parse_ntriples(path.read_text(encoding="utf-8"))
        admission_id = path.stem
        if admission_id not in labels:
            raise ValidationError(
                f"{path} has no matching record in {source}")
        graph.label = labels[admission_id]
        corpus.append((admission_id, graph))
    if not corpus:
        raise ValidationError(f"no graphs found under {graphs_dir}")
    return corpus


def _matrix_pairs(config: PipelineConfig, args):
    versions = [args.version] if args.version else config.matrix["versions"]
    directions = [args.direction] if args.direction else config.matrix["directions"]
    return [(v, d) for v in versions for d in directions]


def cmd_transform(config: PipelineConfig, args) -> int:
    corpus = _load_star_corpus(config)
    stars = [graph for _, graph in corpus]
    outputs = []
    for version, direction in _matrix_pairs(config, args):
        vectorizer = GraphVectorizer(version=version, direction=direction).fit(stars)
        out_dir = config.numeric_dir(version, direction)
        out_dir.mkdir(parents=True, exist_ok=True)
        vocab_path = out_dir / "vocabulary.json"
        vocab_path.write_text(
            canonical_json(vectorizer.vocabulary_.tokens()) + "\n", encoding="utf-8")
        outputs.append(vocab_path)
        for (admission_id, _), numeric in zip(corpus,
                                              vectorizer.transform(stars)):
            path = out_dir / f"{admission_id}.pkg"
            save_numeric_graph(numeric, path)
            outputs.append(path)
    inputs = [config.processed_path()]
    _write_manifest(config, "transform", inputs, outputs)
    print(f"wrote {len(outputs)} numeric artifacts under {config.workdir / 'numeric'}")
    return 0


def _load_numeric(config: PipelineConfig, version: str, direction: str):
    out_dir = _require(config.numeric_dir(version, direction), "transform")
    graphs = [load_numeric_graph(p) for p in sorted(out_dir.glob("*.pkg"))]
    if not graphs:
        raise ValidationError(f"no numeric graphs under {out_dir}")
    labels = np.array([g.label for g in graphs], dtype=np.int64)
    return graphs, labels


def _classifier(config: PipelineConfig, arch: str, variant: int) -> PKGClassifier:
    train = dict(config.train)
    if "hidden_dims" in train:
        train["hidden_dims"] = tuple(train["hidden_dims"])
    return PKGClassifier(arch=arch, variant=variant, random_state=config.seed,
                         **train)


def _append_results(config: PipelineConfig, rows) -> None:
    existing = []
    if config.results_path().exists():
        existing = read_results_csv(config.results_path())
    write_results_csv(existing + rows, config.results_path())


def cmd_train(config: PipelineConfig, args) -> int:
    version = args.version or "v3"
    direction = args.direction or "undirected"
    graphs, labels = _load_numeric(config, version, direction)
    estimator = _classifier(config, args.arch, args.variant)
    rows = run_experiment(estimator, graphs, labels, n_splits=config.splits,
                          k=config.folds, seed=config.seed,
                          config=f"{args.arch}{args.variant}",
                          version=version, direction=direction)
    _append_results(config, rows)
    _write_manifest(config, "train", [], [config.results_path()])
    accuracy = np.mean([r.accuracy for r in rows])
    f1 = np.mean([r.f1 for r in rows])
    print(f"{args.arch}{args.variant} {version} {direction}: "
          f"accuracy {accuracy:.2f} f1 {f1:.2f} over {len(rows)} runs")
    return 0


def cmd_evaluate(config: PipelineConfig, args) -> int:
    all_rows = []
    for version, direction in _matrix_pairs(config, args):
        graphs, labels = _load_numeric(config, version, direction)
        for arch in config.matrix["archs"]:
            for variant in config.matrix["variants"]:
                rows = run_experiment(
                    _classifier(config, arch, variant), graphs, labels,
                    n_splits=config.splits, k=config.folds, seed=config.seed,
                    config=f"{arch}{variant}", version=version,
                    direction=direction)
                all_rows.extend(rows)
                print(f"{arch}{variant} {version} {direction}: "
                      f"accuracy {np.mean([r.accuracy for r in rows]):.2f}")

    if config.baselines:
        records = sorted(read_records(_require(config.processed_path(),
                                               "preprocess")),
                         key=lambda r: r.admission_id)
        data = encode_tabular(records)
        for name in config.baselines:
            if name not in BASELINES:
                raise ValidationError(f"unknown baseline {name!r}")
            rows = run_experiment(BASELINES[name](), data.features, data.labels,
                                  n_splits=config.splits, k=config.folds,
                                  seed=config.seed, config=name,
                                  version="-", direction="-")
            all_rows.extend(rows)
            print(f"{name}: accuracy {np.mean([r.accuracy for r in rows]):.2f}")

    write_results_csv(all_rows, config.results_path())
    _write_manifest(config, "evaluate", [], [config.results_path()])
    print(f"wrote {config.results_path()}")
    return 0


def cmd_ablate(config: PipelineConfig, args) -> int:
    version = args.version or "v3"
    direction = args.direction or "undirected"
    graphs, labels = _load_numeric(config, version, direction)
    estimator = _classifier(config, args.arch, args.variant)
    rows = run_ablation_suite(estimator, graphs, labels,
                              n_splits=config.splits, k=config.folds,
                              seed=config.seed)
    out = Path(args.out) if args.out else config.workdir / "ablation.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("excluded,accuracy,f1,delta_accuracy,delta_f1\n")
        for row in rows:
            name = "+".join(row.excluded) if row.excluded else "-"
            fh.write(f"{name},{row.accuracy:.6f},{row.f1:.6f},"
                     f"{row.delta_accuracy:.6f},{row.delta_f1:.6f}\n")
    _write_manifest(config, "ablate", [], [out])
    print(f"wrote {len(rows)} ablation rows to {out}")
    return 0


def cmd_report(config: PipelineConfig, args) -> int:
    results = read_results_csv(_require(config.results_path(),
                                        "train or evaluate"))
    csv_text, table_text = format_report(results)
    out_dir = Path(args.out) if args.out else config.workdir
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.csv").write_text(csv_text, encoding="utf-8")
    (out_dir / "report.txt").write_text(table_text, encoding="utf-8")
    _write_manifest(config, "report",
                    [config.results_path()],
                    [out_dir / "report.csv", out_dir / "report.txt"])
    print(table_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkglearn",
        description="Person-centric knowledge graph readmission pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def stage(name, handler, **kwargs):
        cmd = sub.add_parser(name, **kwargs)
        cmd.set_defaults(handler=handler)
        cmd.add_argument("--config", required=True, help="pipeline config JSON")
        cmd.add_argument("--seed", type=int, default=None,
                         help="override the config seed")
        return cmd

    stage("generate", cmd_generate, help="generate a synthetic cohort")
    stage("preprocess", cmd_preprocess,
          help="group codes, label readmissions, filter the cohort")
    stage("build-graphs", cmd_build_graphs,
          help="extract one star graph per admission")

    transform = stage("transform", cmd_transform,
                      help="produce numeric graphs for the matrix")
    transform.add_argument("--version", choices=VERSIONS, default=None)
    transform.add_argument("--direction", choices=DIRECTIONS, default=None)

    for name, handler, helptext in [
        ("train", cmd_train, "train one configuration with CV"),
        ("ablate", cmd_ablate, "run facet-exclusion robustness suite"),
    ]:
        cmd = stage(name, handler, help=helptext)
        cmd.add_argument("--version", choices=VERSIONS, default=None)
        cmd.add_argument("--direction", choices=DIRECTIONS, default=None)
        cmd.add_argument("--arch", choices=ARCH_CHOICES, default="sage")
        cmd.add_argument("--variant", type=int, choices=(1, 2), default=1)
        cmd.add_argument("--out", default=None)

    evaluate = stage("evaluate", cmd_evaluate,
                     help="run the full experiment matrix plus baselines")
    evaluate.add_argument("--version", choices=VERSIONS, default=None)
    evaluate.add_argument("--direction", choices=DIRECTIONS, default=None)

    report = stage("report", cmd_report, help="aggregate results.csv")
    report.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = PipelineConfig.load(args.config, seed_override=args.seed)
        return args.handler(config, args)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except PkgLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
