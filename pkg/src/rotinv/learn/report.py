from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np


@dataclass
class EvalReport:
    """Per-fold (or per-query) metric rows plus their mean and standard deviation.

    ``std`` is the population standard deviation across rows.
    """

    rows: list[dict]
    metrics: list[str]
    mean: dict[str, float]
    std: dict[str, float]
    kind: str = "classification"
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows, metrics, kind="classification", meta=None) -> "EvalReport":
        mean, std = {}, {}
        for m in metrics:
            vals = np.array([r[m] for r in rows], dtype=np.float64)
            mean[m] = float(vals.mean())
            std[m] = float(vals.std())
        return cls(list(rows), list(metrics), mean, std, kind, dict(meta or {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.kind == "sweep":
            # one row per threshold, no aggregate
            w.writerow([*self.metrics, "error"])
            for r in self.rows:
                w.writerow([*(_fmt(r[m]) for m in self.metrics), r.get("error", "")])
            return buf.getvalue()
        key = "fold" if self.kind == "classification" else "query"
        w.writerow([key, *self.metrics])
        for r in self.rows:
            w.writerow([r[key], *(_fmt(r[m]) for m in self.metrics)])
        w.writerow(["mean", *(_fmt(self.mean[m]) for m in self.metrics)])
        w.writerow(["std", *(_fmt(self.std[m]) for m in self.metrics)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "meta": self.meta, "metrics": self.metrics,
                "rows": self.rows, "mean": self.mean, "std": self.std}

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), indent=2, sort_keys=True, allow_nan=False)

    def summary(self) -> str:
        if not self.mean:
            return "; ".join(", ".join(f"{m}={r[m]}" for m in self.metrics) for r in self.rows)
        return ", ".join(f"{m}={self.mean[m]:.4f}±{self.std[m]:.4f}" for m in self.metrics)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def _clean(v):
    # strict JSON has no NaN
    if isinstance(v, float) and v != v:
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_clean(x) for x in v]
    return v
