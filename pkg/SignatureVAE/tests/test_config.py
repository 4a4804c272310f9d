import json

import pytest

from SignatureVAE.config import ConfigError, RunConfig, load_config


@pytest.mark.fast_test
def test_defaults():
    config = RunConfig.from_dict({})
    assert config.seed == 0
    assert config.preprocess_config().target_size == 128
    vae = config.vae_config(input_dim=4096)
    assert (vae.input_dim, vae.latent_dim, vae.seed) == (4096, 256, 0)
    clf = config.classifier_config()
    assert clf.k == 5 and clf.forest.n_trees == 100
    assert config.diagnostics_config().method == "tsne"
    assert RunConfig.from_dict(None) == RunConfig()


@pytest.mark.fast_test
@pytest.mark.parametrize("doc, path", [
    ({"bogus": 1}, "bogus"),
    ({"vae": {"latent": 3}}, "vae.latent"),
    ({"classifier": {"forest": {"trees": 3}}}, "classifier.forest.trees"),
    ({"vae": 3}, "vae"),
    ({"seed": -1}, "seed"),
    ({"seed": True}, "seed"),
    ({"seed": 1.5}, "seed"),
    ({"vae": {"latent_dim": 0}}, "vae"),
    ({"classifier": {"forest": {"max_depth": 0}}}, "classifier.forest"),
    ({"classifier": {"modes": ["pixels"]}}, "classifier"),
    ({"synth": {"forgery": "traced"}}, "synth"),
    ({"diagnostics": {"method": "umap"}}, "diagnostics"),
])
def test_invalid_documents(doc, path):
    with pytest.raises(ConfigError) as err:
        RunConfig.from_dict(doc)
    assert err.value.path == path
    assert str(err.value).startswith(path + ":")


@pytest.mark.fast_test
def test_sections_are_typed():
    config = RunConfig.from_dict({
        "seed": 7,
        "vae": {"latent_dim": 5, "epochs": 2},
        "classifier": {"k": 3, "modes": ["latent"], "forest": {"n_trees": 9}},
        "diagnostics": {"betas": [1, 2]},
    })
    vae = config.vae_config(input_dim=16)
    assert (vae.latent_dim, vae.epochs, vae.seed) == (5, 2, 7)
    clf = config.classifier_config()
    assert clf.modes == ("latent",)
    assert clf.forest.n_trees == 9
    assert config.diagnostics_config().betas == (1, 2)
    with pytest.raises(ConfigError):
        config.vae_config()

    config = RunConfig.from_dict({"seed": 7, "vae": {"seed": 3}})
    assert config.vae_config(input_dim=4).seed == 3


@pytest.mark.fast_test
def test_with_overrides():
    config = RunConfig.from_dict({"vae": {"epochs": 2}})
    changed = config.with_overrides(**{"seed": 4, "vae.beta": 0.5,
                                       "vae.epochs": None, "out": "runs"})
    assert changed.seed == 4
    assert changed.out == "runs"
    assert changed.vae == {"epochs": 2, "beta": 0.5}
    assert config.vae == {"epochs": 2}
    with pytest.raises(ConfigError):
        config.with_overrides(**{"vae.beta": -1.0})


@pytest.mark.fast_test
def test_load_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 3, "preprocess": {"target_size": 32}}))
    config = load_config(str(path))
    assert config.seed == 3
    assert config.preprocess_config().target_size == 32
    assert load_config() == RunConfig()

    bad = tmp_path / "bad.json"
    bad.write_text('{"seed": ')
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(str(listing))


@pytest.mark.fast_test
def test_check_paths(tmp_path):
    config = RunConfig.from_dict({"manifest": str(tmp_path / "missing.csv")})
    with pytest.raises(ConfigError) as err:
        config.check_paths("manifest")
    assert err.value.path == "manifest"
    with pytest.raises(ConfigError):
        config.check_paths("out")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("path,identity,label\n")
    config.with_overrides(manifest=str(manifest), out="x").check_paths("manifest", "out")
