"""Run configuration: one JSON document holding the settings of every stage.

Example::

    {
      "seed": 7,
      "manifest": "data/manifest.csv",
      "preprocess": {"target_size": 32},
      "vae": {"latent_dim": 64, "epochs": 100},
      "classifier": {"k": 5, "forest": {"n_trees": 100}}
    }

Unknown keys are rejected with their dotted path.
"""
import copy
import os
from dataclasses import dataclass, field, fields
from typing import Optional

import yaml

from .diagnostics.collapse import COLLAPSE_THRESHOLD
from .diagnostics.traversal import DEFAULT_BETAS, SWEEP_HI, SWEEP_LO, SWEEP_STEPS
from .image.augment import AugmentConfig
from .image.preprocess import PreprocessConfig
from .learning.forest import ForestConfig
from .learning.vae import VaeConfig
from .model_systems.forgery_models import parse_forgery_model
from .protocol import ClassifierConfig


class ConfigError(ValueError):
    """Invalid run configuration.

    Parameters
    ----------
    * `path` [str]:
        Dotted path of the offending field, e.g. ``"vae.latent_dim"``.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__("%s: %s" % (path or "<root>", message))


@dataclass(frozen=True)
class SynthConfig:
    n_identities: int = 4
    genuine_per_id: int = 10
    forged_per_id: int = 10
    forgery: str = "random"
    jitter: Optional[float] = None
    size: int = 64

    def __post_init__(self):
        for name in ("n_identities", "genuine_per_id", "forged_per_id"):
            if getattr(self, name) < 1:
                raise ValueError(
                    "Expected `%s` >= 1, got %r" % (name, getattr(self, name)))
        parse_forgery_model(self.forgery_spec())

    def forgery_spec(self):
        spec = {"kind": self.forgery}
        if self.jitter is not None:
            spec["jitter"] = self.jitter
        return spec


@dataclass(frozen=True)
class DiagnosticsConfig:
    method: str = "tsne"
    perplexity: float = 30.0
    iterations: int = 1000
    lo: float = SWEEP_LO
    hi: float = SWEEP_HI
    steps: int = SWEEP_STEPS
    betas: tuple = DEFAULT_BETAS
    collapse_threshold: float = COLLAPSE_THRESHOLD
    small_size: int = 10
    heldout_fraction: float = 0.3
    prior_samples: int = 100

    def __post_init__(self):
        if self.method not in ("tsne", "pca"):
            raise ValueError("Expected `method` 'tsne' or 'pca', got %r" % self.method)
        if self.small_size < 1 or self.prior_samples < 1:
            raise ValueError("Expected `small_size` and `prior_samples` >= 1")
        if not 0.0 < self.heldout_fraction < 1.0:
            raise ValueError(
                "Expected `heldout_fraction` in (0, 1), got %r" % self.heldout_fraction)


def _field_names(cls):
    return {f.name for f in fields(cls)}


# Allowed keys per section; a set ends the recursion.
SCHEMA = {
    "seed": None,
    "manifest": None,
    "out": None,
    "checkpoint": None,
    "preprocess": _field_names(PreprocessConfig),
    "augment": _field_names(AugmentConfig),
    "synth": _field_names(SynthConfig),
    "vae": _field_names(VaeConfig),
    "classifier": {
        **{name: None for name in _field_names(ClassifierConfig) - {"forest"}},
        "forest": _field_names(ForestConfig),
    },
    "diagnostics": _field_names(DiagnosticsConfig),
}


def _check_keys(doc, schema, prefix=""):
    if not isinstance(doc, dict):
        raise ConfigError(prefix, "expected an object, got %s" % type(doc).__name__)
    for key, value in doc.items():
        path = prefix + "." + key if prefix else key
        if key not in schema:
            raise ConfigError(path, "unknown key")
        sub = schema[key]
        if isinstance(sub, dict):
            _check_keys(value, sub, path)
        elif isinstance(sub, set):
            if not isinstance(value, dict):
                raise ConfigError(
                    path, "expected an object, got %s" % type(value).__name__)
            for name in value:
                if name not in sub:
                    raise ConfigError(path + "." + name, "unknown key")


@dataclass
class RunConfig:
    """Validated run configuration; sections stay plain dicts until a stage
    asks for its typed config."""

    seed: int = 0
    manifest: Optional[str] = None
    out: Optional[str] = None
    checkpoint: Optional[str] = None
    preprocess: dict = field(default_factory=dict)
    augment: dict = field(default_factory=dict)
    synth: dict = field(default_factory=dict)
    vae: dict = field(default_factory=dict)
    classifier: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc) -> "RunConfig":
        doc = {} if doc is None else copy.deepcopy(doc)
        _check_keys(doc, SCHEMA)
        seed = doc.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise ConfigError("seed", "expected a non-negative integer, got %r" % seed)
        config = cls(**doc)
        config.validate()
        return config

    def to_dict(self):
        return {f.name: copy.deepcopy(getattr(self, f.name)) for f in fields(self)}

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with dotted-path overrides, e.g. `**{"vae.epochs": 5}`.

        `None` values are ignored, so unset command-line flags can be passed
        straight through.
        """
        doc = self.to_dict()
        for dotted, value in overrides.items():
            if value is None:
                continue
            keys = dotted.split(".")
            target = doc
            for key in keys[:-1]:
                target = target.setdefault(key, {})
            target[keys[-1]] = value
        return RunConfig.from_dict(doc)

    def validate(self):
        """Build every typed config once so errors surface before any work."""
        for section in ("preprocess_config", "augment_config", "synth_config",
                        "classifier_config", "diagnostics_config"):
            getattr(self, section)()
        self.vae_config(input_dim=self.vae.get("input_dim", 1))

    def _build(self, path, cls, values):
        try:
            return cls(**values)
        except (TypeError, ValueError) as err:
            raise ConfigError(path, str(err)) from err

    def preprocess_config(self) -> PreprocessConfig:
        return self._build("preprocess", PreprocessConfig, self.preprocess)

    def augment_config(self) -> AugmentConfig:
        return self._build("augment", AugmentConfig, self.augment)

    def synth_config(self) -> SynthConfig:
        return self._build("synth", SynthConfig, self.synth)

    def diagnostics_config(self) -> DiagnosticsConfig:
        values = dict(self.diagnostics)
        if "betas" in values:
            values["betas"] = tuple(values["betas"])
        return self._build("diagnostics", DiagnosticsConfig, values)

    def vae_config(self, input_dim=None) -> VaeConfig:
        """`VaeConfig` with the run seed unless the section sets its own;
        `input_dim` overrides the section (it usually comes from the data)."""
        values = {"seed": self.seed, **self.vae}
        if input_dim is not None:
            values["input_dim"] = input_dim
        if "input_dim" not in values:
            raise ConfigError("vae.input_dim", "unknown until images are loaded")
        return self._build("vae", VaeConfig, values)

    def classifier_config(self) -> ClassifierConfig:
        values = dict(self.classifier)
        values["forest"] = self._build("classifier.forest", ForestConfig,
                                       values.get("forest", {}))
        for key in ("modes", "classifiers"):
            if key in values:
                values[key] = tuple(values[key])
        return self._build("classifier", ClassifierConfig, values)

    def check_paths(self, *names):
        """Require the named path fields to be set and, for inputs, to
        exist."""
        for name in names:
            value = getattr(self, name)
            if not value:
                raise ConfigError(name, "required")
            if name in ("manifest", "checkpoint") and not os.path.exists(value):
                raise ConfigError(name, "no such file: %s" % value)


def load_config(path=None) -> RunConfig:
    """Read a JSON run configuration; no path gives the defaults."""
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as f:
            doc = yaml.safe_load(f)
    except OSError as err:
        raise ConfigError("", "cannot read %s: %s" % (path, err)) from err
    except yaml.YAMLError as err:
        raise ConfigError("", "%s is not valid JSON: %s" % (path, err)) from err
    return RunConfig.from_dict(doc)
