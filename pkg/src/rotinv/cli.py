"""``rotinv`` command line: gen, extract, retrieve and classify.

Outputs (all under ``--out``, default from the config):

``gen``
    ``templates/<class>.png``, ``DBA<i>/<class>_<item>.png``, ``manifest.csv``
    (``id,filename,class,condition,rotation_index,noise_kind,blur_sigma,seed``) and,
    when ``gz2_per_class > 0``, a survey-style corpus in ``gz2/``.
``extract``
    ``features_<tag>.csv`` with header ``id,class,condition,<family>_<level>_<index>``.
``retrieve``
    ``retrieval_<tag>_DBA<i>_g<grouping>.csv`` (``query,<metrics>`` plus mean and
    std rows) and a matching ``.json``.
``classify``
    ``classify_<tag>_<kind>.csv`` (``fold,auc,fscore,tpr,fpr,fnr,tnr`` plus mean
    and std rows) and ``.json``; with ``--sweep-confidence`` also
    ``sweep_<tag>_<kind>.csv`` (``tau,n_examples,auc,fscore,error``).

Files are written to a staging directory and moved into place only when the
command succeeds. ``ROTINV_THREADS`` caps the worker threads.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, classifier_kwargs, load_config
from .datasets import (CLASSES, NoiseParams, _parallel_map, build_condition, generate_templates,
                       ingest_gz2, write_gz2_corpus)
from .errors import ConfigError, MalformedRow, MissingFile, RotinvError
from .imageio import read_image, write_image
from .learn import confidence_sweep, cv_classify, retrieval_eval, zscore_fit_apply

log = logging.getLogger("rotinv")

MANIFEST_COLUMNS = ["id", "filename", "class", "condition", "rotation_index", "noise_kind",
                    "blur_sigma", "seed"]


def thread_count() -> int:
    cap = os.environ.get("ROTINV_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"ROTINV_THREADS must be an integer, got {cap!r}") from None
    return n


@contextlib.contextmanager
def staged(out: Path):
    """Yield a scratch directory whose contents replace files in ``out`` on success."""
    out.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".partial-", dir=out))
    try:
        yield tmp
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    for src in sorted(tmp.iterdir()):
        dst = out / src.name
        if dst.is_dir():
            shutil.rmtree(dst)
        elif dst.exists():
            dst.unlink()
        src.replace(dst)
    tmp.rmdir()


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -- gen ---------------------------------------------------------------------

def cmd_gen(cfg: ExperimentConfig, out: Path, workers: int) -> Path:
    noise = NoiseParams(cfg.speckle_variance, cfg.gaussian_variance, cfg.norm_eps)
    templates = generate_templates(cfg.seed, cfg.template_side)
    with staged(out) as tmp:
        for name, img in templates.items():
            write_image(tmp / "templates" / f"{name}.png", img)
        rows = []
        for idx in cfg.conditions:
            ds = build_condition(idx, cfg.seed, templates, noise, workers)
            cond = f"DBA{idx}"

            def save(item, cond=cond):
                rel = f"{cond}/{item.label}_{item.meta['item_index']:03d}.png"
                write_image(tmp / rel, item.data)
                return rel

            files = _parallel_map(save, ds.items, workers)
            for rel, item in zip(files, ds.items):
                m = item.meta
                rows.append([f"{cond}-{item.label}-{m['item_index']:03d}", rel, item.label, cond,
                             m["rotation_index"], m["noise_kind"], repr(float(m["blur_sigma"])),
                             cfg.seed])
            log.info("%s: %d images", cond, len(ds))
        _write_csv(tmp / "manifest.csv", MANIFEST_COLUMNS, rows)
        if cfg.gz2_per_class:
            write_gz2_corpus(tmp / "gz2", cfg.gz2_per_class, cfg.seed, workers, cfg.gz2_side)
            log.info("gz2: %d images per class", cfg.gz2_per_class)
    return out


# -- extract -----------------------------------------------------------------

def read_manifest(path: Path) -> list[dict]:
    if not path.is_file():
        raise MissingFile(f"manifest not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(MANIFEST_COLUMNS[:4]) - set(reader.fieldnames or [])
        if missing:
            raise MalformedRow(f"missing columns {sorted(missing)}", 1)
        rows = []
        for line, rec in enumerate(reader, start=2):
            if not rec.get("filename") or rec.get("class") not in CLASSES:
                raise MalformedRow("empty file or unknown class", line)
            rows.append(rec)
    return rows


def feature_header(family: str, n: int, level: int = 0) -> list[str]:
    return [f"{family}_{level}_{i}" for i in range(n)]


def cmd_extract(cfg: ExperimentConfig, dataset: Path, out: Path, workers: int) -> Path:
    ex = cfg.extractor()
    rows = read_manifest(dataset / "manifest.csv")

    def run(rec):
        return ex(read_image(dataset / rec["filename"])).values

    values = _parallel_map(run, rows, workers)
    target = out / f"features_{ex.tag}.csv"
    with staged(out) as tmp:
        _write_csv(tmp / target.name,
                   ["id", "class", "condition", *feature_header(ex.family, ex.length())],
                   ([r["id"], r["class"], r["condition"], *map(repr, map(float, v))]
                    for r, v in zip(rows, values)))
    return target


# -- retrieve ----------------------------------------------------------------

def read_features(path: Path):
    """Parse a feature CSV into ``(ids, classes, conditions, matrix)``."""
    if not path.is_file():
        raise MissingFile(f"feature file not found: {path}")
    ids, classes, conds, vals = [], [], [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:3] != ["id", "class", "condition"] or len(header) < 4:
            raise MalformedRow("header must start with id,class,condition", 1)
        width = len(header)
        for line, rec in enumerate(reader, start=2):
            if len(rec) != width:
                raise MalformedRow(f"expected {width} fields, got {len(rec)}", line)
            try:
                v = [float(x) for x in rec[3:]]
            except ValueError:
                raise MalformedRow("non-numeric feature value", line) from None
            if not np.all(np.isfinite(v)):
                raise MalformedRow("non-finite feature value", line)
            ids.append(rec[0])
            classes.append(rec[1])
            conds.append(rec[2])
            vals.append(v)
    return ids, classes, conds, np.array(vals, dtype=np.float64).reshape(len(vals), width - 3)


def cmd_retrieve(cfg: ExperimentConfig, features: Path, out: Path) -> list[Path]:
    _, classes, conds, X = read_features(features)
    written = []
    stem = features.stem.removeprefix("features_")
    with staged(out) as tmp:
        for cond in sorted(set(conds)):
            sel = [i for i, c in enumerate(conds) if c == cond]
            Xc = X[sel]
            if cfg.retrieval_zscore:
                Xc = zscore_fit_apply(Xc)[0]
            rep = retrieval_eval(Xc, [classes[i] for i in sel], cfg.grouping)
            rep.meta.update(condition=cond, features=features.name)
            name = f"retrieval_{stem}_{cond}_g{cfg.grouping}"
            (tmp / f"{name}.csv").write_text(rep.to_csv())
            (tmp / f"{name}.json").write_text(rep.to_json() + "\n")
            log.info("%s: %s", cond, rep.summary())
            written.append(out / f"{name}.csv")
    return written


# -- classify ----------------------------------------------------------------

def _gz2_paths(cfg: ExperimentConfig, source: Path | None) -> tuple[Path, Path]:
    if source is not None:
        return source / "images", source / "labels.csv"
    if cfg.gz2_images and cfg.gz2_labels:
        return cfg.gz2_images, cfg.gz2_labels
    base = cfg.dataset or cfg.out
    return base / "gz2" / "images", base / "gz2" / "labels.csv"


def cmd_classify(cfg: ExperimentConfig, source: Path | None, out: Path, workers: int,
                 sweep: bool = False) -> list[Path]:
    image_dir, labels = _gz2_paths(cfg, source)
    ex = cfg.classify_extractor()
    kw = classifier_kwargs(cfg)
    ds = ingest_gz2(image_dir, labels, cfg.tau, workers)
    rep = cv_classify(ds, ex, cfg.classifier, cfg.folds, cfg.seed, cfg.classify_zscore,
                      cfg.levels, workers, **kw)
    rep.meta["tau"] = cfg.tau
    name = f"classify_{ex.tag}_{cfg.classifier}"
    written = [out / f"{name}.csv"]
    sweep_rep = None
    if sweep:
        sweep_rep = confidence_sweep(image_dir, labels, cfg.sweep, ex, cfg.classifier,
                                     cfg.folds, cfg.seed, cfg.levels, workers)
    with staged(out) as tmp:
        (tmp / f"{name}.csv").write_text(rep.to_csv())
        (tmp / f"{name}.json").write_text(rep.to_json() + "\n")
        if sweep_rep is not None:
            sname = f"sweep_{ex.tag}_{cfg.classifier}"
            (tmp / f"{sname}.csv").write_text(sweep_rep.to_csv())
            (tmp / f"{sname}.json").write_text(sweep_rep.to_json() + "\n")
            written.append(out / f"{sname}.csv")
    log.info("%s: %s", name, rep.summary())
    return written


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rotinv", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"rotinv {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("gen", "generate templates and DBA conditions"),
                           ("extract", "compute descriptors for a generated dataset"),
                           ("retrieve", "leave-one-out retrieval on a feature file"),
                           ("classify", "cross-validated binary classification")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--config", type=Path, help="INI-style experiment config")
        s.add_argument("--out", type=Path, help="output directory (overrides config)")
        s.add_argument("--seed", type=int, help="override the config seed")
        s.add_argument("-v", "--verbose", action="store_true")
        if name == "extract":
            s.add_argument("--dataset", type=Path, help="directory written by gen")
        if name == "retrieve":
            s.add_argument("--features", type=Path, help="feature CSV written by extract")
            s.add_argument("--grouping", type=int, choices=(11, 5, 3))
        if name == "classify":
            s.add_argument("--corpus", type=Path,
                           help="directory holding images/ and labels.csv")
            s.add_argument("--sweep-confidence", action="store_true",
                           help="also sweep the confidence threshold")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        out = args.out or cfg.out
        workers = thread_count()
        if args.command == "gen":
            cmd_gen(cfg, out, workers)
        elif args.command == "extract":
            cmd_extract(cfg, args.dataset or cfg.dataset or out, out, workers)
        elif args.command == "retrieve":
            if args.grouping:
                cfg.grouping = args.grouping
            feats = args.features or cfg.features or out / f"features_{cfg.extractor().tag}.csv"
            cmd_retrieve(cfg, feats, out)
        else:
            cmd_classify(cfg, args.corpus, out, workers, args.sweep_confidence)
    except (RotinvError, OSError, ValueError) as exc:
        print(f"rotinv: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
