from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class FeatureVector:
    """Descriptor values tagged with the family and parameters that made them."""

    family: str
    params: dict = field(default_factory=dict)
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"{self.family} features contain non-finite values")

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)
