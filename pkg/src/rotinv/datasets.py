"""Artificial galaxy templates, evaluation conditions and GZ2-style corpora."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidCondition, MalformedRow, MissingFile, ZeroSelected
from .imgcore import center_square_normalize, gaussian_blur, rotate

CLASSES = ("E0", "E3", "E7", "S0", "Sa", "Sb", "Sc", "SBa", "SBb", "SBc", "I")

CLUSTER5 = {
    "E0": "E", "E3": "E", "E7": "E",
    "S0": "S0",
    "Sa": "S", "Sb": "S", "Sc": "S",
    "SBa": "SB", "SBb": "SB", "SBc": "SB",
    "I": "I",
}
CLUSTER3 = {k: v for k, v in CLUSTER5.items() if v in ("E", "S", "SB")}

N_ROTATIONS = 12
DBA6_BLURS = (0.125, 1.0, 2.0, 4.0)
NOISE_KINDS = ("none", "speckle", "gaussian")

# label values for the binary GZ2 task; spirals are the positive class
ELLIPTICAL = 0
SPIRAL = 1


@dataclass(frozen=True)
class GalaxyClass:
    label: str

    def __post_init__(self):
        if self.label not in CLASSES:
            raise ValueError(f"unknown galaxy class {self.label!r}")

    @property
    def cluster5(self) -> str:
        return CLUSTER5[self.label]

    @property
    def cluster3(self) -> str | None:
        return CLUSTER3.get(self.label)


@dataclass(frozen=True)
class TemplateParams:
    """Shape constants of the parametric template renderer (pixels, degrees)."""

    ell_scale: float = 8.0
    ell_radius: float = 27.0
    s0_bulge: float = 3.5
    s0_disk: float = 7.0
    s0_axis_ratio: float = 0.55
    pitch: tuple[float, float, float] = (10.0, 20.0, 30.0)
    bulge_scale: tuple[float, float, float] = (5.0, 3.5, 2.5)
    bulge_amp: tuple[float, float, float] = (1.0, 0.6, 0.35)
    disk_scale: float = 8.0
    disk_radius: float = 27.0
    spiral_axis_ratio: tuple[float, float, float] = (0.9, 0.8, 0.7)
    barred_axis_ratio: tuple[float, float, float] = (0.9, 0.8, 0.7)
    arm_contrast: float = 0.8
    arm_lopsided: float = 0.35
    bar_length: float = 10.0
    bar_width: float = 2.2
    irregular_blobs: int = 7
    irregular_radius: float = 24.0
    edge_floor: float = 0.05


@dataclass(frozen=True)
class NoiseParams:
    """Noise magnitudes and the intensity floor used to measure ``R_max``."""

    speckle_variance: float = 0.05
    gaussian_variance: float = 0.01
    norm_eps: float = 0.03


def _grid(side: int, q: float = 1.0, pa: float = 0.0):
    c = (side - 1) / 2.0
    y, x = np.mgrid[0:side, 0:side].astype(np.float64)
    x -= c
    y -= c
    ca, sa = math.cos(pa), math.sin(pa)
    u = ca * x + sa * y
    v = (-sa * x + ca * y) / q
    return u, v


def _bounded(profile, r, radius, floor):
    """Rescale ``profile`` into ``[floor, 1]`` inside ``radius`` and zero it outside.

    The hard edge keeps the support bounded and brighter than the
    normalization threshold, so the normalizing crop never clips faint wings.
    """
    prof = profile / profile.max()
    return np.where(r <= radius, floor + (1.0 - floor) * prof, 0.0)


def _elliptical(side, tp: TemplateParams, ex: int):
    q = 1.0 - ex / 10.0
    u, v = _grid(side, q)
    r = np.hypot(u, v)
    return _bounded(np.exp(-0.5 * (r / tp.ell_scale) ** 2), r, tp.ell_radius, tp.edge_floor)


def _lenticular(side, tp: TemplateParams):
    u, v = _grid(side, tp.s0_axis_ratio)
    r = np.hypot(u, v)
    bulge = np.exp(-0.5 * (r / tp.s0_bulge) ** 2)
    disk = 0.5 * np.exp(-r / tp.s0_disk)
    return _bounded(bulge + disk, r, tp.disk_radius, tp.edge_floor)


def _spiral(side, tp: TemplateParams, which: int, barred: bool):
    q = (tp.barred_axis_ratio if barred else tp.spiral_axis_ratio)[which]
    u, v = _grid(side, q)
    r = np.hypot(u, v)
    theta = np.arctan2(v, u)
    tan_pitch = math.tan(math.radians(tp.pitch[which]))
    r0 = tp.bar_length if barred else 3.0
    winding = np.log(np.maximum(r, 1e-6) / r0) / tan_pitch
    phase = theta - winding
    # two arms; the second one fainter so the shape is not centrally symmetric
    arm1 = ((1 + np.cos(phase)) / 2) ** 4
    arm2 = ((1 - np.cos(phase)) / 2) ** 4 * (1 - tp.arm_lopsided)
    arms = (arm1 + arm2) * np.clip((r - 0.6 * r0) / (0.4 * r0), 0, 1)
    disk = np.exp(-r / tp.disk_scale)
    img = disk * (1 - tp.arm_contrast + tp.arm_contrast * arms)
    img = img + tp.bulge_amp[which] * np.exp(-0.5 * (r / tp.bulge_scale[which]) ** 2)
    if barred:
        bar = np.exp(-0.5 * ((u / tp.bar_length) ** 4 + (v / tp.bar_width) ** 2))
        img = img + 0.7 * bar
    return _bounded(img, r, tp.disk_radius, tp.edge_floor)


def _irregular(side, tp: TemplateParams, rng: np.random.Generator):
    u, v = _grid(side)
    img = np.zeros((side, side))
    for _ in range(tp.irregular_blobs):
        rad = rng.uniform(0, 14)
        ang = rng.uniform(0, 2 * math.pi)
        cx, cy = rad * math.cos(ang), rad * math.sin(ang)
        s = rng.uniform(2.0, 5.0)
        img += rng.uniform(0.4, 1.0) * np.exp(-0.5 * ((u - cx) ** 2 + (v - cy) ** 2) / s ** 2)
    return _bounded(img, np.hypot(u, v), tp.irregular_radius, tp.edge_floor)


def generate_templates(seed: int = 0, side: int = 64,
                       params: TemplateParams | None = None) -> dict[str, np.ndarray]:
    """Render the 11 class templates, deterministic in ``seed``.

    Only the irregular template consumes randomness.
    """
    tp = params or TemplateParams()
    rng = np.random.default_rng([seed, 11])
    out = {
        "E0": _elliptical(side, tp, 0),
        "E3": _elliptical(side, tp, 3),
        "E7": _elliptical(side, tp, 7),
        "S0": _lenticular(side, tp),
    }
    for i, name in enumerate(("Sa", "Sb", "Sc")):
        out[name] = _spiral(side, tp, i, barred=False)
    for i, name in enumerate(("SBa", "SBb", "SBc")):
        out[name] = _spiral(side, tp, i, barred=True)
    out["I"] = _irregular(side, tp, rng)
    return {k: out[k] for k in CLASSES}


def add_speckle(img, variance: float, seed) -> np.ndarray:
    """Multiplicative noise ``J = I + n I``, ``n`` zero-mean uniform, clamped."""
    if variance < 0:
        raise ValueError("variance must be non-negative")
    img = np.asarray(img, dtype=np.float64)
    if variance == 0:
        return img.copy()
    a = math.sqrt(3.0 * variance)
    n = np.random.default_rng(seed).uniform(-a, a, size=img.shape)
    return np.clip(img + n * img, 0.0, 1.0)


def add_gaussian_noise(img, variance: float, seed) -> np.ndarray:
    if variance < 0:
        raise ValueError("variance must be non-negative")
    img = np.asarray(img, dtype=np.float64)
    if variance == 0:
        return img.copy()
    n = np.random.default_rng(seed).normal(0.0, math.sqrt(variance), size=img.shape)
    return np.clip(img + n, 0.0, 1.0)


@dataclass
class Item:
    data: np.ndarray
    label: str | int
    confidence: float | None = None
    meta: dict = field(default_factory=dict)


@dataclass
class LabeledDataset:
    items: list[Item]
    condition: str

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def labels(self) -> list:
        return [it.label for it in self.items]


def condition_recipes(idx: int) -> list[tuple[int, str, float]]:
    """``(rotation_index, noise_kind, blur_sigma)`` per item of one class.

    A blur sigma of 0 means no filtering.
    """
    rots = range(N_ROTATIONS)
    if idx == 1:
        return [(k, "none", 0.0) for k in rots]
    if idx == 2:
        return [(k, "speckle", 0.0) for k in rots]
    if idx == 3:
        return [(k, "gaussian", 0.0) for k in rots]
    if idx == 4:
        return [(k, "none", 2.0) for k in rots]
    if idx == 5:
        return [(k, "none", 4.0) for k in rots]
    if idx == 6:
        return [(k, n, s) for k in rots for s in DBA6_BLURS for n in NOISE_KINDS]
    raise InvalidCondition(f"condition must be 1..6, got {idx}")


def render_item(template, cls_index: int, item_index: int, recipe, seed: int,
                noise: NoiseParams) -> np.ndarray:
    """Rotate, add noise, blur, then geometrically normalize one example.

    The noise stream is keyed by ``(seed, class, item)`` only.
    """
    k, kind, sigma = recipe
    img = rotate(template, k * math.pi / 6)
    key = [seed, cls_index, item_index]
    if kind == "speckle":
        img = add_speckle(img, noise.speckle_variance, key)
    elif kind == "gaussian":
        img = add_gaussian_noise(img, noise.gaussian_variance, key)
    if sigma > 0:
        img = gaussian_blur(img, sigma)
    return center_square_normalize(img, 62, 2, eps=noise.norm_eps)


def build_condition(idx: int, seed: int = 0, templates: dict | None = None,
                    noise: NoiseParams | None = None, workers: int = 1) -> LabeledDataset:
    recipes = condition_recipes(idx)
    templates = templates if templates is not None else generate_templates(seed)
    noise = noise or NoiseParams()
    jobs = [(ci, name, ii, rec) for ci, name in enumerate(CLASSES)
            for ii, rec in enumerate(recipes)]

    def run(job):
        ci, name, ii, rec = job
        img = render_item(templates[name], ci, ii, rec, seed, noise)
        meta = {"rotation_index": rec[0], "noise_kind": rec[1], "blur_sigma": rec[2],
                "item_index": ii}
        return Item(img, name, None, meta)

    items = _parallel_map(run, jobs, workers)
    return LabeledDataset(items, f"DBA{idx}")


def _parallel_map(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(j) for j in jobs]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


# --- GZ2-style corpora ----------------------------------------------------

LABEL_COLUMNS = ("filename", "p_elliptical", "p_spiral", "p_not_odd")


@dataclass
class ManifestRow:
    filename: str
    p_elliptical: float
    p_spiral: float
    p_not_odd: float

    @property
    def label(self) -> int:
        return SPIRAL if self.p_spiral > self.p_elliptical else ELLIPTICAL

    def passes(self, tau: float) -> bool:
        return self.p_not_odd >= tau and max(self.p_elliptical, self.p_spiral) >= tau


def read_labels(path) -> list[ManifestRow]:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"labels file not found: {path}")
    rows = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(LABEL_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise MalformedRow(f"missing columns {sorted(missing)}", 1)
        for line, rec in enumerate(reader, start=2):
            try:
                vals = [float(rec[c]) for c in LABEL_COLUMNS[1:]]
            except (TypeError, ValueError):
                raise MalformedRow("non-numeric confidence", line) from None
            if not rec["filename"] or not all(0.0 <= v <= 1.0 for v in vals):
                raise MalformedRow("confidence outside [0, 1] or empty filename", line)
            rows.append(ManifestRow(rec["filename"], *vals))
    return rows


def select_rows(rows: list[ManifestRow], tau: float) -> list[ManifestRow]:
    kept = [r for r in rows if r.passes(tau)]
    if not kept:
        raise ZeroSelected(f"no row reaches confidence {tau}")
    return kept


def ingest_gz2(image_dir, labels, tau: float = 0.9, workers: int = 1,
               rows: list[ManifestRow] | None = None) -> LabeledDataset:
    """Filter the manifest at confidence ``tau`` and normalize every kept image."""
    from .imageio import read_image
    from .preprocess import gz2_normalize

    image_dir = Path(image_dir)
    kept = select_rows(rows if rows is not None else read_labels(labels), tau)
    for r in kept:
        if not (image_dir / r.filename).is_file():
            raise MissingFile(f"image not found: {image_dir / r.filename}")

    def run(r: ManifestRow):
        img = gz2_normalize(read_image(image_dir / r.filename))
        return Item(img, r.label, max(r.p_elliptical, r.p_spiral),
                    {"filename": r.filename, "p_not_odd": r.p_not_odd})

    return LabeledDataset(_parallel_map(run, kept, workers), "gz2")


def render_survey_galaxy(kind: int, rng: np.random.Generator, side: int = 424) -> np.ndarray:
    """One synthetic survey cutout: a random elliptical or spiral plus sky, stars and noise.

    Profiles are scaled so the galaxy stays visible out to a few effective
    radii, with a saturated core as in stretched survey imagery.
    """
    c = (side - 1) / 2.0
    y, x = np.mgrid[0:side, 0:side].astype(np.float64)
    x = x - c - rng.normal(0, 2)
    y = y - c - rng.normal(0, 2)
    pa = rng.uniform(0, 2 * math.pi)
    ca, sa = math.cos(pa), math.sin(pa)
    r_e = rng.uniform(16, 28)
    if kind == ELLIPTICAL:
        q = rng.uniform(0.4, 1.0)
        n = rng.uniform(2.5, 4.0)
        b = 2.0 * n - 1.0 / 3.0
        u = ca * x + sa * y
        v = (-sa * x + ca * y) / q
        r = np.hypot(u, v) / r_e
        img = np.exp(-b * (r ** (1.0 / n) - 1.0))
        img = img / math.exp(-b * (0.3 ** (1.0 / n) - 1.0))
    else:
        q = rng.uniform(0.6, 1.0)
        u = ca * x + sa * y
        v = (-sa * x + ca * y) / q
        r = np.hypot(u, v)
        h = r_e / 1.68
        theta = np.arctan2(v, u)
        tan_pitch = math.tan(math.radians(rng.uniform(12, 30)))
        r0 = h * rng.uniform(0.4, 0.8)
        phase = theta - np.log(np.maximum(r, 1e-6) / r0) / tan_pitch + rng.uniform(0, 2 * math.pi)
        arms = ((1 + np.cos(2 * phase)) / 2) ** 3 * np.clip((r - 0.5 * r0) / r0, 0, 1)
        disk = np.exp(-r / h)
        bulge = rng.uniform(0.5, 1.5) * np.exp(-0.5 * (r / (0.25 * h)) ** 2)
        img = 1.5 * disk * (0.25 + 0.75 * arms) + bulge
    img = np.minimum(img, 1.0) * rng.uniform(0.7, 1.0)
    for _ in range(rng.integers(0, 4)):
        sx, sy = rng.uniform(-c, c, size=2)
        img += rng.uniform(0.2, 0.9) * np.exp(-0.5 * ((x - sx) ** 2 + (y - sy) ** 2) / 1.5 ** 2)
    img = img + rng.uniform(0.01, 0.04)
    img = img + rng.normal(0, 0.015, size=img.shape)
    return np.clip(img, 0.0, 1.0)


def write_gz2_corpus(out_dir, n_per_class: int, seed: int = 0, workers: int = 1,
                     side: int = 424) -> Path:
    """Write a labelled synthetic corpus in the GZ2 ingest layout.

    Confidences are drawn so that a sweep over ``tau`` changes the kept count.
    """
    from .imageio import write_image

    out_dir = Path(out_dir)
    img_dir = out_dir / "images"
    img_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(kind, i) for kind in (ELLIPTICAL, SPIRAL) for i in range(n_per_class)]

    def run(job):
        kind, i = job
        rng = np.random.default_rng([seed, 424, kind, i])
        name = f"{'ell' if kind == ELLIPTICAL else 'sp'}_{i:05d}.png"
        write_image(img_dir / name, render_survey_galaxy(kind, rng, side))
        conf = float(np.round(1.0 - 0.5 * rng.beta(1.0, 6.0), 4))
        other = float(np.round(rng.uniform(0.0, 1.0 - conf), 4))
        not_odd = float(np.round(1.0 - 0.5 * rng.beta(1.0, 10.0), 4))
        p_e, p_s = (conf, other) if kind == ELLIPTICAL else (other, conf)
        return (name, p_e, p_s, not_odd)

    rows = _parallel_map(run, jobs, workers)
    with (out_dir / "labels.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LABEL_COLUMNS)
        w.writerows(rows)
    return out_dir
