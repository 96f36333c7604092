"""Single entry point that maps a family name and parameters to a descriptor."""

from __future__ import annotations

from dataclasses import dataclass, field

from .features import FeatureVector
from .fmt import DEFAULT_SIGMA, fmt1_features, fmt2_features, fmt_cartesian, fmt_count
from .imgcore import Centroid, as_image, gravity_center, to_polar
from .moments import flusser_features, hu_features
from .ringfeat import fft_ring_features, ring_stats
from .zernike import zernike_features, zernike_index_vectors

FAMILIES = ("hu", "flusser", "zernike", "ring", "fft", "fmt1", "fmt2")

DEFAULTS = {
    "hu": {},
    "flusser": {},
    "zernike": {"n_max": 5, "n_rho": 10, "n_theta": 16},
    "ring": {"n_rho": 10, "n_theta": 16, "literal": False},
    "fft": {"n_rho": 8, "n_theta": 32},
    "fmt1": {"k": 5, "v": 5, "sigma": DEFAULT_SIGMA},
    "fmt2": {"k": 5, "v": 5, "sigma": DEFAULT_SIGMA},
}


@dataclass(frozen=True)
class Extractor:
    """A descriptor family plus its parameters, callable on an image.

    ``r_max`` for the polar families defaults to half the shorter image side.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown descriptor family {self.family!r}")
        unknown = set(self.params) - set(DEFAULTS[self.family]) - {"r_max"}
        if unknown:
            raise ValueError(f"unknown {self.family} parameters: {sorted(unknown)}")
        object.__setattr__(self, "params", {**DEFAULTS[self.family], **self.params})

    def length(self) -> int:
        p = self.params
        if self.family == "hu":
            return 7
        if self.family == "flusser":
            return 11
        if self.family == "zernike":
            return len(zernike_index_vectors(p["n_max"]).n_list)
        if self.family == "ring":
            return 4 * p["n_rho"]
        if self.family == "fft":
            return p["n_rho"] * ((p["n_theta"] // 2).bit_length() - 1 + 2)
        return fmt_count(p["k"], p["v"])

    def __call__(self, img, center: Centroid | None = None) -> FeatureVector:
        img = as_image(img)
        p = self.params
        fam = self.family
        if fam == "hu":
            return hu_features(img, center)
        if fam == "flusser":
            return flusser_features(img, center)
        if fam in ("fmt1", "fmt2"):
            g = fmt_cartesian(img, p["k"], p["v"], p["sigma"], center)
            return fmt1_features(g) if fam == "fmt1" else fmt2_features(g)
        if center is None:
            center = gravity_center(img)
        r_max = p.get("r_max") or min(img.shape) / 2.0
        polar = to_polar(img, p["n_rho"], p["n_theta"], r_max, center)
        if fam == "zernike":
            return zernike_features(polar, p["n_max"])
        if fam == "ring":
            return ring_stats(polar, p["literal"])
        return fft_ring_features(polar)

    @property
    def tag(self) -> str:
        if self.family.startswith("fmt"):
            return f"{self.family}_k{self.params['k']}v{self.params['v']}"
        return self.family
