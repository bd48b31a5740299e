import json

import pytest

from hintforge.cli import load_manifest, load_split, main
from hintforge.instances import from_json


@pytest.fixture()
def mis_dataset(tmp_path):
    out = tmp_path / "mis-ds"
    rc = main(
        [
            "generate",
            "--class", "mis",
            "--family", "clique-path",
            "--profile", "desk",
            "--seed", "3",
            "--train", "3",
            "--val", "2",
            "--test", "2",
            "--out", str(out),
        ]
    )
    assert rc == 0
    return out


@pytest.fixture()
def sat_dataset(tmp_path):
    out = tmp_path / "sat-ds"
    rc = main(
        [
            "generate",
            "--class", "maxsat",
            "--family", "latent-backdoor",
            "--profile", "desk",
            "--seed", "4",
            "--train", "6",
            "--val", "2",
            "--test", "2",
            "--out", str(out),
        ]
    )
    assert rc == 0
    return out


def test_generate_writes_manifest_and_instances(mis_dataset, capsys):
    manifest = load_manifest(mis_dataset)
    assert manifest["problemClass"] == "mis"
    assert manifest["counts"] == {"train": 3, "val": 2, "test": 2}
    assert len(manifest["contentHash"]) == 64
    files = sorted(p.name for p in mis_dataset.iterdir())
    assert "manifest.json" in files
    assert "train-0000.json" in files and "test-0001.json" in files
    train = load_split(mis_dataset, "train")
    assert len(train) == 3
    assert train[0].problem_class == "mis"


def test_generate_is_deterministic(tmp_path):
    hashes = []
    for name in ("a", "b"):
        out = tmp_path / name
        main(
            [
                "generate", "--class", "coloring", "--family", "ring-template",
                "--seed", "5", "--train", "2", "--val", "1", "--test", "1",
                "--out", str(out),
            ]
        )
        hashes.append(load_manifest(out)["contentHash"])
    assert hashes[0] == hashes[1]


def test_env_seed_override(tmp_path, monkeypatch):
    out1, out2, out3 = tmp_path / "e1", tmp_path / "e2", tmp_path / "e3"
    base = [
        "generate", "--class", "mis", "--family", "clique-path",
        "--train", "1", "--val", "0", "--test", "0",
    ]
    monkeypatch.setenv("HINTFORGE_SEED", "42")
    main(base + ["--out", str(out1)])
    # An explicit --seed beats the environment.
    main(base + ["--seed", "42", "--out", str(out2)])
    main(base + ["--seed", "7", "--out", str(out3)])
    h1 = load_manifest(out1)["contentHash"]
    assert h1 == load_manifest(out2)["contentHash"]
    assert h1 != load_manifest(out3)["contentHash"]


def test_oracle_agrees_with_stored_optimum(mis_dataset, capsys):
    rc = main(["oracle", "--in", str(mis_dataset / "train-0000.json")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "optimum" in out


def test_oracle_flags_corrupted_optimum(mis_dataset, tmp_path, capsys):
    path = mis_dataset / "train-0000.json"
    payload = json.loads(path.read_text())
    payload["evaluator"]["optimumValue"] += 1.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(payload))
    rc = main(["oracle", "--in", str(bad)])
    assert rc == 1
    assert "INVARIANT VIOLATION" in capsys.readouterr().err


def test_solve_by_full_or_short_name(mis_dataset, capsys):
    path = str(mis_dataset / "test-0000.json")
    assert main(["solve", "--solver", "mis/min-degree-greedy", "--in", path]) == 0
    assert "quality" in capsys.readouterr().out
    assert main(["solve", "--solver", "min-degree-greedy", "--in", path]) == 0


def test_solve_unknown_solver_exits(mis_dataset):
    path = str(mis_dataset / "test-0000.json")
    with pytest.raises(SystemExit):
        main(["solve", "--solver", "no-such", "--in", path])


def test_select_reports_winner(mis_dataset, tmp_path, capsys):
    out = tmp_path / "selection.json"
    rc = main(
        [
            "select", "--library", "mis", "--dataset", str(mis_dataset),
            "--out", str(out),
        ]
    )
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["selectedId"].startswith("mis/")
    assert report["n"] == 3
    assert report["errBound"] > 0
    assert len(report["stats"]) == 4


def test_learn_backdoor_smoke(sat_dataset, capsys):
    rc = main(["learn-backdoor", "--dataset", str(sat_dataset), "--k", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "recovered backdoor" in out
    assert "speedup vs dpll" in out


def test_bench_run_single_target(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = main(
        [
            "bench", "run", "--targets", "mis/clique-path",
            "--profile", "desk", "--repeats", "1",
            "--train", "0", "--val", "0", "--test", "3",
            "--out", str(out),
        ]
    )
    assert rc == 0
    report = json.loads(out.read_text())
    assert "mis/clique-path" in report["perTarget"]
    assert out.with_suffix(".csv").exists()


def test_bench_perturb_smoke(capsys):
    rc = main(
        [
            "bench", "perturb", "--target", "mis/clique-path",
            "--solver", "min-degree-greedy", "--test", "4",
        ]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["feasibilityChanged"] == 0.0
    assert payload["n"] == 4


def test_bench_synthesize_smoke(mis_dataset, capsys):
    rc = main(
        [
            "bench", "synthesize", "--dataset", str(mis_dataset),
            "--proposer", "catalog", "-R", "2", "-B", "2", "-K", "4",
        ]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert "best candidate" in out
    assert "archive size" in out


def test_select_and_synthesize_survive_without_test_split(mis_dataset, capsys):
    # Learning never touches the test split: removing every test file must
    # not affect select or synthesize, while bench run needs them.
    for p in mis_dataset.glob("test-*.json"):
        p.unlink()
    assert main(["select", "--library", "mis", "--dataset", str(mis_dataset)]) == 0
    assert (
        main(
            [
                "bench", "synthesize", "--dataset", str(mis_dataset),
                "-R", "1", "-B", "2", "-K", "2",
            ]
        )
        == 0
    )
    capsys.readouterr()


def test_errors_exit_nonzero_not_raise(tmp_path, capsys):
    rc = main(["oracle", "--in", str(tmp_path / "missing.json")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_instance_files_round_trip(mis_dataset):
    text = (mis_dataset / "val-0001.json").read_text()
    inst = from_json(text)
    payload = json.loads(text)
    assert set(payload) == {"id", "problemClass", "public", "evaluator"}
    assert inst.id.endswith("val-0001")
