"""8-bit grayscale image files."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import MissingFile
from .imgcore import to_gray


def read_image(path) -> np.ndarray:
    """Load PNG/JPEG as luminance in ``[0, 1]``."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"image not found: {path}")
    with Image.open(path) as im:
        if im.mode in ("L", "I;16", "I", "F"):
            arr = np.asarray(im, dtype=np.float64)
            scale = 65535.0 if im.mode == "I;16" else 255.0
            return arr / scale
        arr = np.asarray(im.convert("RGB"), dtype=np.float64)
    return to_gray(arr) / 255.0


def quantize(img) -> np.ndarray:
    return np.clip(np.rint(np.asarray(img) * 255.0), 0, 255).astype(np.uint8)


def write_image(path, img) -> None:
    """Write ``img`` (values clamped to ``[0, 1]``) as an 8-bit grayscale PNG."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(quantize(img), mode="L").save(path, format="PNG", optimize=False)
