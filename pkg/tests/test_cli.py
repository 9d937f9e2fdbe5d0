import hashlib
import json

import pytest

from pkglearn.cli import main


def write_config(tmp_path, name="config.json", **overrides):
    config = {
        "workdir": str(tmp_path / "run"),
        "seed": 5,
        "cohort": {"n_patients": 120, "readmission_rate": 0.2,
                   "deceased_rate": 0.05},
        "preprocess": {"window_days": 30, "filter_cohort": False},
        "train": {"epochs": 2, "hidden_dims": [8, 4]},
        "matrix": {"versions": ["v3"], "directions": ["undirected"],
                   "archs": ["sage"], "variants": [1]},
        "baselines": ["nb"],
        "splits": 2,
        "folds": 2,
    }
    config.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return path, tmp_path / "run"


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("cli")
    config, workdir = write_config(tmp_path)
    for command in ("generate", "preprocess", "build-graphs", "transform"):
        assert main([command, "--config", str(config)]) == 0
    return config, workdir


def test_generate_writes_cohort_and_manifest(pipeline):
    config, workdir = pipeline
    assert (workdir / "cohort.jsonl").exists()
    manifest = json.loads((workdir / "generate.manifest.json").read_text())
    assert manifest["stage"] == "generate"
    assert manifest["seed"] == 5
    assert "cohort.jsonl" in manifest["outputs"]


def test_preprocess_summary_written(pipeline):
    _, workdir = pipeline
    text = (workdir / "summary.txt").read_text()
    assert "total admissions" in text


def test_graphs_and_numeric_artifacts(pipeline):
    _, workdir = pipeline
    graphs = list((workdir / "graphs").glob("*.nt"))
    numeric = list((workdir / "numeric" / "v3-undirected").glob("*.pkg"))
    assert graphs and len(graphs) == len(numeric)
    assert (workdir / "numeric" / "v3-undirected" / "vocabulary.json").exists()


def test_transform_idempotent_byte_identical(pipeline):
    config, workdir = pipeline
    targets = sorted((workdir / "numeric" / "v3-undirected").glob("*.pkg"))[:5]
    before = {p.name: sha(p) for p in targets}
    assert main(["transform", "--config", str(config)]) == 0
    after = {p.name: sha(p) for p in targets}
    assert before == after


def test_full_chain_emits_results_and_report(pipeline):
    config, workdir = pipeline
    assert main(["evaluate", "--config", str(config)]) == 0
    results = (workdir / "results.csv").read_text().splitlines()
    assert results[0] == "config,version,direction,split,fold,seed,accuracy,f1,runtime_s"
    assert len(results) > 1
    configs = {line.split(",")[0] for line in results[1:]}
    assert configs == {"sage1", "nb"}

    assert main(["report", "--config", str(config)]) == 0
    assert (workdir / "report.csv").exists()
    table = (workdir / "report.txt").read_text()
    assert "sage1" in table and "±" in table


def test_train_single_configuration(pipeline):
    config, workdir = pipeline
    assert main(["train", "--config", str(config), "--version", "v3",
                 "--direction", "undirected", "--arch", "sage",
                 "--variant", "1"]) == 0
    assert (workdir / "results.csv").exists()


def test_unknown_version_flag_is_usage_error(pipeline):
    config, _ = pipeline
    with pytest.raises(SystemExit) as exc:
        main(["train", "--config", str(config), "--version", "v9"])
    assert exc.value.code == 2


def test_missing_prior_stage_artifact_names_file(tmp_path, capsys):
    config, workdir = write_config(tmp_path)
    code = main(["preprocess", "--config", str(config)])
    captured = capsys.readouterr()
    assert code == 3
    assert "cohort.jsonl" in captured.err
    assert "generate" in captured.err


def test_missing_config_file_is_validation_error(tmp_path, capsys):
    code = main(["generate", "--config", str(tmp_path / "nope.json")])
    assert code == 3


def test_invalid_cohort_rate_is_validation_error(tmp_path, capsys):
    config, _ = write_config(tmp_path, name="bad.json",
                             cohort={"n_patients": 10, "readmission_rate": 3.0})
    assert main(["generate", "--config", str(config)]) == 3


def test_seed_flag_overrides_config(tmp_path):
    config, workdir = write_config(tmp_path, name="seed.json")
    assert main(["generate", "--config", str(config), "--seed", "9"]) == 0
    manifest = json.loads((workdir / "generate.manifest.json").read_text())
    assert manifest["seed"] == 9


def test_end_to_end_determinism_small(tmp_path):
    # same seed, fresh workdirs: per-run results identical up to runtime
    def run(workdir_name):
        config = {
            "workdir": str(tmp_path / workdir_name),
            "seed": 3,
            "cohort": {"n_patients": 80, "readmission_rate": 0.25,
                       "deceased_rate": 0.0},
            "preprocess": {"filter_cohort": False},
            "train": {"epochs": 1, "hidden_dims": [6, 4]},
            "matrix": {"versions": ["v3"], "directions": ["undirected"],
                       "archs": ["sage"], "variants": [1]},
            "baselines": [],
            "splits": 2,
            "folds": 2,
        }
        path = tmp_path / f"{workdir_name}.json"
        path.write_text(json.dumps(config))
        for command in ("generate", "preprocess", "build-graphs", "transform",
                        "evaluate", "report"):
            assert main([command, "--config", str(path)]) == 0
        results = (tmp_path / workdir_name / "results.csv").read_text()
        stripped = "\n".join(",".join(line.split(",")[:-1])
                             for line in results.splitlines())
        return stripped, (tmp_path / workdir_name / "report.csv").read_text()

    assert run("a") == run("b")
