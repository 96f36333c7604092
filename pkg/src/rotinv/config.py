"""Experiment configuration read from an INI-style ``key = value`` file.

Sections and keys (all optional, defaults in brackets)::

    [experiment]  seed [0], out [rotinv-out]
    [dataset]     conditions [1,2,3,4,5,6], template_side [64],
                  speckle_variance [0.05], gaussian_variance [0.01], norm_eps [0.03],
                  gz2_per_class [0], gz2_side [424]
    [features]    family [fft], plus family parameters: n_max, n_rho, n_theta,
                  literal, k, v, sigma
    [retrieval]   grouping [11], zscore [false]
    [classify]    classifier [steplda], folds [10], zscore [true], tau [0.9],
                  levels [4], family [ring], sweep [0.5,0.6,0.7,0.8,0.9],
                  c_reg [1.0], hidden [1000], p_enter [0.05], p_remove [0.10]
    [paths]       dataset, features, gz2_images, gz2_labels

Relative paths are resolved against the directory holding the config file.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .extract import DEFAULTS, FAMILIES, Extractor
from .learn.classifiers import KINDS

_FEATURE_TYPES = {"n_max": int, "n_rho": int, "n_theta": int, "literal": bool,
                  "k": int, "v": int, "sigma": float}

_KNOWN = {
    "experiment": {"seed", "out"},
    "dataset": {"conditions", "template_side", "speckle_variance", "gaussian_variance",
                "norm_eps", "gz2_per_class", "gz2_side"},
    "features": {"family", *_FEATURE_TYPES},
    "retrieval": {"grouping", "zscore"},
    "classify": {"classifier", "folds", "zscore", "tau", "levels", "family", "sweep",
                 "c_reg", "hidden", "p_enter", "p_remove"},
    "paths": {"dataset", "features", "gz2_images", "gz2_labels"},
}


@dataclass
class ExperimentConfig:
    seed: int = 0
    out: Path = Path("rotinv-out")
    conditions: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    template_side: int = 64
    speckle_variance: float = 0.05
    gaussian_variance: float = 0.01
    norm_eps: float = 0.03
    gz2_per_class: int = 0
    gz2_side: int = 424
    family: str = "fft"
    family_params: dict = field(default_factory=dict)
    grouping: int = 11
    retrieval_zscore: bool = False
    classifier: str = "steplda"
    classifier_params: dict = field(default_factory=dict)
    folds: int = 10
    classify_zscore: bool = True
    tau: float = 0.9
    levels: int = 4
    classify_family: str = "ring"
    sweep: tuple[float, ...] = (0.5, 0.6, 0.7, 0.8, 0.9)
    dataset: Path | None = None
    features: Path | None = None
    gz2_images: Path | None = None
    gz2_labels: Path | None = None

    def extractor(self) -> Extractor:
        return Extractor(self.family, self._params_for(self.family))

    def classify_extractor(self) -> Extractor:
        return Extractor(self.classify_family, self._params_for(self.classify_family))

    def _params_for(self, family: str) -> dict:
        return {k: v for k, v in self.family_params.items() if k in DEFAULTS[family]}

    def validate(self) -> "ExperimentConfig":
        def need(ok, msg):
            if not ok:
                raise ConfigError(msg)

        need(all(1 <= c <= 6 for c in self.conditions) and self.conditions,
             "conditions must be a non-empty subset of 1..6")
        need(self.template_side >= 16, "template_side must be at least 16")
        need(self.speckle_variance >= 0 and self.gaussian_variance >= 0,
             "noise variances must be non-negative")
        need(0 <= self.norm_eps < 1, "norm_eps must lie in [0, 1)")
        need(self.gz2_per_class >= 0, "gz2_per_class must be non-negative")
        need(self.gz2_side >= 250, "gz2_side must be at least 250")
        for fam in (self.family, self.classify_family):
            need(fam in FAMILIES, f"unknown family {fam!r}")
        p = self.family_params
        for key in ("n_rho", "n_theta", "n_max"):
            need(key not in p or p[key] >= 1, f"{key} must be positive")
        for key in ("k", "v"):
            need(key not in p or p[key] >= 0, f"{key} must be non-negative")
        need("sigma" not in p or p["sigma"] > 0, "sigma must be positive")
        need(self.grouping in (11, 5, 3), "grouping must be 11, 5 or 3")
        need(self.classifier in KINDS, f"classifier must be one of {KINDS}")
        need(self.folds >= 2, "folds must be at least 2")
        need(0 <= self.tau <= 1, "tau must lie in [0, 1]")
        need(self.levels >= 0, "levels must be non-negative")
        need(all(0 <= t <= 1 for t in self.sweep), "sweep taus must lie in [0, 1]")
        cp = self.classifier_params
        need("c_reg" not in cp or cp["c_reg"] > 0, "c_reg must be positive")
        need("hidden" not in cp or cp["hidden"] >= 1, "hidden must be positive")
        if "p_enter" in cp or "p_remove" in cp:
            pe, pr = cp.get("p_enter", 0.05), cp.get("p_remove", 0.10)
            need(0 < pe < pr < 1, "need 0 < p_enter < p_remove < 1")
        return self


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


def load_config(path=None) -> ExperimentConfig:
    """Parse and validate a config file; ``None`` gives the defaults."""
    cfg = ExperimentConfig()
    if path is None:
        return cfg.validate()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    base = path.parent
    for sec in cp.sections():
        if sec not in _KNOWN:
            raise ConfigError(f"unknown section [{sec}]")
        extra = set(cp[sec]) - _KNOWN[sec]
        if extra:
            raise ConfigError(f"unknown keys in [{sec}]: {sorted(extra)}")

    def get(sec, key, conv):
        if not cp.has_option(sec, key):
            return None
        raw = cp.get(sec, key)
        try:
            if conv is bool:
                return cp.getboolean(sec, key)
            return conv(raw)
        except ValueError:
            raise ConfigError(f"[{sec}] {key} = {raw!r} is not a valid {conv.__name__}") from None

    def setv(attr, sec, key, conv):
        v = get(sec, key, conv)
        if v is not None:
            setattr(cfg, attr, v)

    setv("seed", "experiment", "seed", int)
    setv("out", "experiment", "out", lambda s: base / s)
    setv("conditions", "dataset", "conditions", lambda s: tuple(int(x) for x in _floats(s)))
    setv("template_side", "dataset", "template_side", int)
    setv("speckle_variance", "dataset", "speckle_variance", float)
    setv("gaussian_variance", "dataset", "gaussian_variance", float)
    setv("norm_eps", "dataset", "norm_eps", float)
    setv("gz2_per_class", "dataset", "gz2_per_class", int)
    setv("gz2_side", "dataset", "gz2_side", int)
    setv("family", "features", "family", str)
    for key, conv in _FEATURE_TYPES.items():
        v = get("features", key, conv)
        if v is not None:
            cfg.family_params[key] = v
    setv("grouping", "retrieval", "grouping", int)
    setv("retrieval_zscore", "retrieval", "zscore", bool)
    setv("classifier", "classify", "classifier", str)
    setv("folds", "classify", "folds", int)
    setv("classify_zscore", "classify", "zscore", bool)
    setv("tau", "classify", "tau", float)
    setv("levels", "classify", "levels", int)
    setv("classify_family", "classify", "family", str)
    setv("sweep", "classify", "sweep", _floats)
    for key, conv in (("c_reg", float), ("hidden", int), ("p_enter", float), ("p_remove", float)):
        v = get("classify", key, conv)
        if v is not None:
            cfg.classifier_params[key] = v
    for key in ("dataset", "features", "gz2_images", "gz2_labels"):
        setv(key, "paths", key, lambda s: base / s)
    return cfg.validate()


def classifier_kwargs(cfg: ExperimentConfig) -> dict:
    """Hyperparameters that apply to the configured classifier kind."""
    wanted = {"svm": ("c_reg",), "elm": ("hidden",), "steplda": ("p_enter", "p_remove"),
              "blda": ()}[cfg.classifier]
    return {k: v for k, v in cfg.classifier_params.items() if k in wanted}
