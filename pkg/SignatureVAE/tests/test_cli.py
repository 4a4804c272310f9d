import csv
import json
import os

import numpy as np
import pytest

from SignatureVAE.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from SignatureVAE.image import load_image, read_manifest, save_image
from SignatureVAE.learning.vae import load_checkpoint, read_history_csv

VAE_FLAGS = ["--epochs", "2", "--latent-dim", "3", "--intermediate-dim", "8",
             "--batch-size", "4"]


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def run_manifest(outdir):
    with open(os.path.join(outdir, "run_manifest.json")) as f:
        return json.load(f)


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = str(tmp_path_factory.mktemp("synth"))
    assert main(["synth", "--out", out, "--identities", "2", "--genuine", "6",
                 "--forged", "4", "--size", "16", "--seed", "1", "-q"]) == EXIT_OK
    return os.path.join(out, "manifest.csv")


@pytest.fixture(scope="module")
def trained(dataset, tmp_path_factory):
    out = str(tmp_path_factory.mktemp("train"))
    assert main(["train", "--manifest", dataset, "--out", out, "-q"]
                + VAE_FLAGS) == EXIT_OK
    return out


@pytest.mark.fast_test
def test_synth(dataset):
    manifest = read_manifest(dataset)
    assert len(manifest) == 20
    assert len(manifest.identities) == 2
    assert load_image(manifest.resolve(0)).shape == (16, 16)
    info = run_manifest(os.path.dirname(dataset))
    assert info["command"] == "synth"
    assert info["seed"] == 1
    assert "manifest.csv" in info["files"]
    assert len(info["files"]) == 21
    assert info["config"]["synth"]["n_identities"] == 2


@pytest.mark.fast_test
def test_train(trained):
    for name in ("model.svae", "model.svae.json", "history.csv",
                 "loss_breakdown.svg", "loss_breakdown.csv", "run_manifest.json"):
        assert os.path.exists(os.path.join(trained, name))
    params = load_checkpoint(os.path.join(trained, "model.svae"))
    assert params.config.input_dim == 256
    assert params.config.latent_dim == 3
    assert len(read_history_csv(os.path.join(trained, "history.csv"))) == 2
    info = run_manifest(trained)
    assert info["files"] == sorted(info["files"])
    assert len(info["config_hash"]) == 64


@pytest.mark.fast_test
def test_train_is_reproducible(dataset, trained, tmp_path):
    out = str(tmp_path)
    args = ["train", "--manifest", dataset, "--out", out, "-q"] + VAE_FLAGS
    assert main(args) == EXIT_OK
    for name in ("model.svae", "history.csv", "loss_breakdown.svg"):
        assert read_bytes(os.path.join(out, name)) == \
            read_bytes(os.path.join(trained, name))
    first = read_bytes(os.path.join(out, "run_manifest.json"))
    assert main(args) == EXIT_OK
    assert read_bytes(os.path.join(out, "run_manifest.json")) == first


@pytest.mark.fast_test
def test_diagnose(dataset, trained, tmp_path):
    out = str(tmp_path)
    assert main(["diagnose", "--manifest", dataset, "--checkpoint",
                 os.path.join(trained, "model.svae"), "--out", out, "-q"]) == EXIT_OK
    with open(os.path.join(out, "collapse.json")) as f:
        report = json.load(f)
    assert len(report["per_dim_kl"]) == 3
    assert len(report["kl_fraction_by_epoch"]) == 2
    assert os.path.exists(os.path.join(out, "loss_breakdown.svg"))


@pytest.mark.fast_test
@pytest.mark.parametrize("method", [["--method", "pca"],
                                    ["--perplexity", "3", "--iterations", "50"],
                                    ["--iterations", "50"]])
def test_embed(dataset, trained, tmp_path, method):
    out = str(tmp_path)
    args = ["embed", "--manifest", dataset, "--checkpoint",
            os.path.join(trained, "model.svae"), "--out", out, "-q"] + method
    assert main(args) == EXIT_OK
    with open(os.path.join(out, "embedding.csv")) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["id", "label", "x", "y"]
    assert len(rows) == 21
    assert {row[1] for row in rows[1:]} == {"genuine", "forged"}
    first = read_bytes(os.path.join(out, "embedding.csv"))
    assert main(args) == EXIT_OK
    assert read_bytes(os.path.join(out, "embedding.csv")) == first


@pytest.mark.fast_test
def test_eval(dataset, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"classifier": {"forest": {"n_trees": 5}}}))
    out = str(tmp_path / "eval")
    args = ["eval", "--manifest", dataset, "--config", str(config), "--out", out,
            "--mode", "latent", "--mode", "both", "-q"] + VAE_FLAGS
    assert main(args) == EXIT_OK
    with open(os.path.join(out, "report.csv")) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["identity", "mode", "classifier", "accuracy", "recall",
                       "f1", "auc"]
    assert len(rows) == 1 + 2 * 2 * 2
    assert {row[1] for row in rows[1:]} == {"latent", "both"}
    for identity in read_manifest(dataset).identities:
        history = os.path.join(out, "history", identity + ".csv")
        assert len(read_history_csv(history)) == 2
        assert "history/%s.csv" % identity in run_manifest(out)["files"]
    assert len(read_history_csv(os.path.join(out, "loss_breakdown.csv"))) == 2
    for name in ("loss_breakdown.svg", "roc_latent_knn.svg", "roc_latent_rf.svg",
                 "roc_both_knn.svg", "roc_both_rf.svg"):
        assert os.path.exists(os.path.join(out, name))
    assert not os.path.exists(os.path.join(out, "roc_recon_rf.svg"))
    report_json = read_bytes(os.path.join(out, "report.json"))
    report_csv = read_bytes(os.path.join(out, "report.csv"))
    assert main(args) == EXIT_OK
    assert read_bytes(os.path.join(out, "report.json")) == report_json
    assert read_bytes(os.path.join(out, "report.csv")) == report_csv


@pytest.mark.fast_test
def test_eval_beta_comparison(dataset, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"classifier": {"modes": ["recon"],
                                                 "classifiers": ["knn"]}}))
    out = str(tmp_path / "eval")
    assert main(["eval", "--manifest", dataset, "--config", str(config),
                 "--out", out, "--betas", "1,0.001", "-q"] + VAE_FLAGS) == EXIT_OK
    with open(os.path.join(out, "comparison.json")) as f:
        assert sorted(json.load(f)) == ["0.001", "1.0"]
    assert os.path.exists(os.path.join(out, "beta_0.001", "report.csv"))


@pytest.mark.fast_test
def test_traverse(dataset, trained, tmp_path):
    out = str(tmp_path / "checkpoint")
    assert main(["traverse", "--checkpoint", os.path.join(trained, "model.svae"),
                 "--out", out, "--steps", "5", "-q"]) == EXIT_OK
    for dim in range(3):
        assert load_image(os.path.join(out, "traversal_dim%02d.pgm" % dim)).shape \
            == (16, 5 * 16 + 4)
    assert os.path.exists(os.path.join(out, "traversal.svg"))

    out = str(tmp_path / "sweep")
    assert main(["traverse", "--manifest", dataset, "--out", out, "--betas",
                 "1,5", "--steps", "3", "-q"] + VAE_FLAGS) == EXIT_OK
    for beta in ("1.0", "5.0"):
        sub = os.path.join(out, "beta_" + beta)
        assert os.path.exists(os.path.join(sub, "collapse.json"))
        assert os.path.exists(os.path.join(sub, "traversal_dim02.pgm"))


@pytest.mark.fast_test
def test_datasize(dataset, tmp_path):
    out = str(tmp_path / "datasize")
    args = ["datasize", "--manifest", dataset, "--out", out, "--small", "3",
            "--samples", "5", "-q"] + VAE_FLAGS
    assert main(args) == EXIT_OK
    with open(os.path.join(out, "data_size.json")) as f:
        result = json.load(f)
    # 12 genuine images, 4 of them held out
    assert (result["n_large"], result["n_small"]) == (8, 3)
    for key in ("heldout_recon_large", "heldout_recon_small",
                "prior_distance_large", "prior_distance_small"):
        assert result[key] > 0.0
    assert run_manifest(out)["config"]["diagnostics"]["small_size"] == 3
    first = read_bytes(os.path.join(out, "data_size.json"))
    assert main(args) == EXIT_OK
    assert read_bytes(os.path.join(out, "data_size.json")) == first

    assert main(["datasize", "--manifest", dataset, "--out", out, "--small", "8",
                 "-q"] + VAE_FLAGS) == EXIT_USAGE


@pytest.mark.fast_test
def test_augment(dataset, tmp_path):
    out = str(tmp_path)
    assert main(["augment", "--manifest", dataset, "--out", out, "--copies", "2",
                 "-q"]) == EXIT_OK
    manifest = read_manifest(os.path.join(out, "manifest.csv"))
    assert len(manifest) == 20 * 3
    assert all(os.path.exists(manifest.resolve(i)) for i in range(len(manifest)))
    assert len(run_manifest(out)["files"]) == 20 * 3 + 1


@pytest.mark.fast_test
def test_preprocess_reports_failures(tmp_path):
    src = tmp_path / "src"
    src.mkdir()
    img = np.ones((20, 30))
    img[8:12, 5:25] = 0.0
    save_image(str(src / "good.pgm"), img)
    (src / "bad.pgm").write_bytes(b"not an image")
    (src / "manifest.csv").write_text(
        "path,identity,label\ngood.pgm,a,genuine\nbad.pgm,a,forged\n")
    out = str(tmp_path / "out")
    code = main(["preprocess", "--manifest", str(src / "manifest.csv"),
                 "--out", out, "--target-size", "16", "-q"])
    assert code == EXIT_FAILURE
    manifest = read_manifest(os.path.join(out, "manifest.csv"))
    assert [row.path for row in manifest.rows] == ["good.pgm"]
    assert load_image(manifest.resolve(0)).shape == (16, 16)
    assert run_manifest(out)["files"] == ["good.pgm", "manifest.csv"]


@pytest.mark.fast_test
def test_usage_errors(dataset, tmp_path):
    out = str(tmp_path / "out")
    # no output directory
    assert main(["synth", "-q"]) == EXIT_USAGE
    assert main(["train", "--manifest", str(tmp_path / "missing.csv"),
                 "--out", out, "-q"]) == EXIT_USAGE
    bad_config = tmp_path / "bad.json"
    bad_config.write_text(json.dumps({"vae": {"latent": 3}}))
    assert main(["train", "--manifest", dataset, "--config", str(bad_config),
                 "--out", out, "-q"]) == EXIT_USAGE
    empty = tmp_path / "empty.csv"
    empty.write_text("path,identity,label\n")
    assert main(["train", "--manifest", str(empty), "--out", out, "-q"]) == EXIT_USAGE
    assert main(["train", "--manifest", dataset, "--out", out, "--epochs", "-1",
                 "-q"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as err:
        main(["fly"])
    assert err.value.code == 2


@pytest.mark.fast_test
def test_runtime_errors(dataset, tmp_path):
    corrupt = tmp_path / "model.svae"
    corrupt.write_bytes(b"SVAE\x00")
    assert main(["diagnose", "--manifest", dataset, "--checkpoint", str(corrupt),
                 "--out", str(tmp_path / "out"), "-q"]) == EXIT_FAILURE
