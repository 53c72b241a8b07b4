"""Command-line entry point.

Subcommands compose into a pipeline whose stages exchange plain files:

    stats     archive        -> per-dataset stats JSON
    encode    archive        -> PNG tree + encode_report.json
    manifest  PNG tree       -> manifest JSONL (sc | ac | dataset-sep)
    baseline  manifest       -> predictions CSV (1-NN euclidean / dtw / rp_image)
    eval      manifest+preds -> summary.csv + confusion matrices
    report    accuracy CSVs  -> relative-difference histograms

Exit codes: 0 ok, 2 usage, 3 data error, 4 I/O error.  Every run writes a
``run.json`` provenance file under its output root.  Reruns with identical
inputs and flags produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import __version__
from .encode import (
    EncodeConfig,
    batch_encode,
    read_report,
    write_report,
)
from .errors import DataError, IoError, TimageError
from .evaluation import (
    DATASET_MASKED,
    DEFAULT_EDGES,
    GLOBAL,
    accuracy_table,
    evaluate,
    read_accuracy_csv,
    relative_accuracy_histogram,
    render_report,
)
from .manifest import (
    AC,
    DATASET_SEP,
    SC,
    build_manifest,
    read_manifest,
    read_predictions,
    write_manifest,
    write_predictions,
)
from .ucr import DatasetStats, discover_datasets, parse_dataset, split_paths, write_stats_json

_REGIME_FLAGS = {"sc": SC, "ac": AC, "dataset-sep": DATASET_SEP}
_SCOPE_FLAGS = {"global": GLOBAL, "dataset-masked": DATASET_MASKED}


def _workers(value: str | None) -> int:
    if value is None:
        value = os.environ.get("TIMAGE_WORKERS", "auto")
    if value == "auto":
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"workers must be >= 1 or 'auto', got {value!r}")
    return n


def _dataset_dirs(archive: str, names: list[str] | None) -> list[Path]:
    root = Path(archive)
    if names:
        dirs = [root / n for n in names]
        for d in dirs:
            if not d.is_dir():
                raise IoError(f"dataset directory not found: {d}")
        return dirs
    dirs = discover_datasets(root)
    if not dirs:
        raise IoError(f"no datasets found under {root}")
    return dirs


def _write_run_json(out_root: Path, subcommand: str, config: dict) -> None:
    out_root.mkdir(parents=True, exist_ok=True)
    payload = {
        "tool": "timage",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
    }
    with (out_root / "run.json").open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _stats_from_report(report, dataset: str) -> DatasetStats:
    # Structural stats reconstructed from an encode report; z-normalization
    # detection needs raw series and is reported as False here.
    counts = {"train": {}, "test": {}}
    lengths = []
    for rec in report.images:
        if rec.dataset != dataset:
            continue
        counts[rec.split][rec.label] = counts[rec.split].get(rec.label, 0) + 1
        lengths.append(rec.length)
    if not lengths:
        raise DataError(f"encode report holds no images for dataset {dataset!r}")
    return DatasetStats(
        dataset_name=dataset,
        class_counts_train=counts["train"],
        class_counts_test=counts["test"],
        min_length=min(lengths),
        max_length=max(lengths),
        is_variable_length=min(lengths) != max(lengths),
        z_normalized_already=False,
    )


# -- subcommand implementations --------------------------------------------------


def _cmd_stats(args) -> int:
    dirs = _dataset_dirs(args.archive, args.dataset)
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        _write_run_json(out_dir, "stats", {"archive": args.archive, "dataset": args.dataset})
    for d in dirs:
        _, stats = parse_dataset(*split_paths(d))
        doc = stats.to_json_dict()
        if out_dir:
            write_stats_json(stats, out_dir / f"{stats.dataset_name}.json")
        print(json.dumps(doc))
    return 0


def _cmd_encode(args) -> int:
    cfg = EncodeConfig(
        image_size=args.size,
        clamp_k=args.clamp_k,
        thresholded=args.thresholded,
        epsilon=args.epsilon,
        order=args.order,
    )
    dirs = _dataset_dirs(args.archive, args.dataset)
    workers = _workers(args.workers)
    out_root = Path(args.out)
    _write_run_json(
        out_root,
        "encode",
        {
            "archive": args.archive,
            "dataset": args.dataset,
            "out": args.out,
            "size": args.size,
            "clamp_k": args.clamp_k,
            "thresholded": args.thresholded,
            "epsilon": args.epsilon,
            "order": args.order,
            "workers": workers,
        },
    )
    report = batch_encode(dirs, cfg, out_root, workers=workers)
    write_report(report, out_root)
    for dataset, counts in sorted(report.counts().items()):
        print(f"{dataset}: train={counts['train']} test={counts['test']}")
    if report.failures:
        print(f"{len(report.failures)} failure(s), see {out_root / 'encode_report.json'}")
    if not report.images:
        raise DataError("no images were produced")
    return 0


def _cmd_manifest(args) -> int:
    regime = _REGIME_FLAGS[args.regime]
    images_root = Path(args.images)
    report = read_report(images_root)
    datasets = sorted({rec.dataset for rec in report.images})
    pairs = [(_stats_from_report(report, d), report) for d in datasets]
    manifests = build_manifest(regime, pairs, images_root=images_root)

    out = Path(args.out)
    config = {"images": args.images, "regime": args.regime, "out": args.out}
    if regime == SC:
        out.mkdir(parents=True, exist_ok=True)
        _write_run_json(out, "manifest", config)
        for m in manifests:
            dataset = m.records[0].dataset
            write_manifest(m, out / f"{dataset}.jsonl")
            print(f"{dataset}: {len(m.label_index)} labels, {len(m.records)} records")
    else:
        write_manifest(manifests[0], out)
        _write_run_json(out.parent, "manifest", config)
        m = manifests[0]
        print(f"{args.regime}: {len(m.label_index)} labels, {len(m.records)} records")
        if m.missing_train_labels:
            print(f"warning: {len(m.missing_train_labels)} label(s) absent from train split")
    return 0


def _cmd_baseline(args) -> int:
    from .baselines import run_baseline

    manifest = read_manifest(args.manifest)
    predictions = run_baseline(
        manifest,
        metric=args.metric,
        archive_root=args.archive,
        images_root=args.images,
        window=args.window,
        dtw_cost=args.dtw_cost,
    )
    out = Path(args.out)
    write_predictions(predictions, out)
    _write_run_json(
        out.parent,
        "baseline",
        {
            "manifest": args.manifest,
            "metric": args.metric,
            "archive": args.archive,
            "images": args.images,
            "window": args.window,
            "dtw_cost": args.dtw_cost,
            "out": args.out,
        },
    )
    print(f"{len(predictions)} predictions -> {out}")
    return 0


def _cmd_eval(args) -> int:
    manifest = read_manifest(args.manifest)
    predictions = read_predictions(args.predictions)
    reports = evaluate(manifest, predictions, scope=_SCOPE_FLAGS[args.scope])
    out = Path(args.out)
    render_report(reports, {}, out)
    _write_run_json(
        out,
        "eval",
        {
            "manifest": args.manifest,
            "predictions": args.predictions,
            "scope": args.scope,
            "out": args.out,
        },
    )
    for r in reports:
        print(f"{r.dataset}: accuracy={r.accuracy:.4f} default_rate={r.default_rate:.4f} n={r.n_test}")
    return 0


def _load_ours(path: str) -> dict[str, float]:
    # Accept either an eval summary.csv or a bare dataset,accuracy table.
    p = Path(path)
    if not p.is_file():
        raise IoError(f"missing accuracy file: {p}")
    with p.open("r", encoding="utf-8", newline="") as fh:
        header = next(csv.reader(fh), None) or []
    cols = [h.strip().lower() for h in header]
    if cols[:2] == ["dataset", "accuracy"]:
        return read_accuracy_csv(p)
    if "dataset" in cols and "accuracy" in cols:
        di, ai = cols.index("dataset"), cols.index("accuracy")
        out: dict[str, float] = {}
        with p.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                values = list(row.values())
                out[values[di]] = float(values[ai])
        return out
    raise IoError(f"{p}: no dataset/accuracy columns in header {header}")


def _cmd_report(args) -> int:
    ours = _load_ours(args.ours)
    edges = DEFAULT_EDGES
    if args.edges:
        edges = tuple(float(tok) for tok in args.edges.split(","))
    histograms = {}
    for spec_arg in args.theirs:
        if "=" not in spec_arg:
            raise DataError(f"--theirs expects NAME=CSV, got {spec_arg!r}")
        name, path = spec_arg.split("=", 1)
        histograms[name] = relative_accuracy_histogram(ours, read_accuracy_csv(path), edges)
    out = Path(args.out)
    render_report([], histograms, out)
    _write_run_json(
        out,
        "report",
        {"ours": args.ours, "theirs": args.theirs, "edges": args.edges, "out": args.out},
    )
    for name in sorted(histograms):
        h = histograms[name]
        print(f"{name}: better={h.better} equal={h.equal} worse={h.worse} of {h.total}")
    return 0


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timage",
        description="Recurrence-image encoding, manifests, baselines and evaluation "
        "for UCR 2018 time series.",
    )
    parser.add_argument("--version", action="version", version=f"timage {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("stats", help="parse datasets and emit per-dataset statistics")
    p.add_argument("--archive", required=True, help="UCR archive root directory")
    p.add_argument("--dataset", action="append", help="dataset name (repeatable; default all)")
    p.add_argument("--out", help="directory for per-dataset stats JSON (default: stdout only)")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("encode", help="encode series to recurrence images")
    p.add_argument("--archive", required=True, help="UCR archive root directory")
    p.add_argument("--dataset", action="append", help="dataset name (repeatable; default all)")
    p.add_argument("--out", required=True, help="output root for the PNG tree")
    p.add_argument("--size", type=int, default=224, help="square image side (default 224)")
    p.add_argument("--clamp-k", type=float, default=3.0, dest="clamp_k",
                   help="clamp factor in sigmas (default 3.0)")
    p.add_argument("--order", choices=["clamp-first", "scale-first"], default="clamp-first",
                   help="clamp/min-max order (default clamp-first)")
    p.add_argument("--thresholded", action="store_true", help="binary recurrence images")
    p.add_argument("--epsilon", type=float, help="threshold for --thresholded")
    p.add_argument("--workers", help="parallel workers or 'auto' (env TIMAGE_WORKERS)")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("manifest", help="build a classification manifest from encoded images")
    p.add_argument("--images", required=True, help="encode output root")
    p.add_argument("--regime", choices=sorted(_REGIME_FLAGS), required=True)
    p.add_argument("--out", required=True,
                   help="manifest file (ac, dataset-sep) or directory (sc)")
    p.set_defaults(func=_cmd_manifest)

    p = sub.add_parser("baseline", help="1-NN baseline predictions over a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--metric", choices=["euclidean", "dtw", "rp_image"], required=True)
    p.add_argument("--archive", help="UCR archive root (euclidean, dtw)")
    p.add_argument("--images", help="encode output root (rp_image)")
    p.add_argument("--window", type=int, help="DTW band half-width (default unconstrained)")
    p.add_argument("--dtw-cost", choices=["abs", "squared"], default="abs", dest="dtw_cost")
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("eval", help="score a predictions CSV against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--scope", choices=sorted(_SCOPE_FLAGS), default="global")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="relative-accuracy histograms against third-party results")
    p.add_argument("--ours", required=True, help="eval summary.csv or dataset,accuracy CSV")
    p.add_argument("--theirs", action="append", required=True, metavar="NAME=CSV",
                   help="comparison accuracy CSV (repeatable)")
    p.add_argument("--edges", help="comma-separated bin edges (default -inf,-0.05,0,0.05,inf)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IoError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 4
    except DataError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    except TimageError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
