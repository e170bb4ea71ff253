"""Command-line entry point: generate -> ingest -> extract -> train/tune -> evaluate -> rank -> predict.

Exit codes: 0 success, 1 usage error, 2 data/validation error. Commands with
any randomness require an explicit --seed; there is no wall-clock default.
Every artifact-producing command writes a manifest next to its output.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import ModelArtifact, artifact_to_json, load_model
from .catalogs import CATALOGS, get_catalog
from .events import INTENT_CLASS_NAMES
from .exceptions import EmptyInput, SessionMinerError, UnreadableStream
from .features import FeatureTable, extract_table, feature_csv_text, read_feature_csv
from .knowledge import (
    KNOWLEDGE_CLASS_NAMES,
    assign_classes,
    read_knowledge,
    select_features,
)
from .log_io import build_corpus, read_event_log, read_labels
from .metrics import evaluate, report_table
from .model_selection import (
    DEFAULT_FOLDS,
    SELECTION_METRICS,
    default_grid,
    evaluate_cv,
    grid_search,
)
from .parallel import available_parallelism
from .ranking import information_gain_ranking
from .segmentation import GapPolicy
from .synth import SynthConfig, config_from_json, generate_corpus

PREDICTIONS_HEADER = "#session-miner-predictions v1"

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 1, not argparse's 2
        raise UsageError(message)


def _configure_logging():
    level_name = os.environ.get("SESSION_MINER_LOG", "").lower()
    level = {"debug": logging.DEBUG, "info": logging.INFO}.get(level_name)
    if level is not None:
        logging.basicConfig(level=level, stream=sys.stderr, format="%(name)s: %(message)s")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(out_path: Path, command: str, inputs, outputs, seed=None, extra=None):
    doc = {
        "fmt": "session-miner-manifest",
        "v": 1,
        "command": command,
        "tool_version": __version__,
        "seed": seed,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": {str(p): _sha256(Path(p)) for p in outputs},
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        doc.update(extra)
    out_path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _read_features(path) -> FeatureTable:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            return read_feature_csv(fh)
    except OSError as exc:
        raise UnreadableStream(f"cannot open {path}: {exc}") from exc


def _infer_class_names(labels) -> tuple[str, ...]:
    present = {lab for lab in labels if lab is not None}
    if not present:
        raise EmptyInput("no labeled rows in the feature file")
    if present <= set(INTENT_CLASS_NAMES):
        return INTENT_CLASS_NAMES
    if present <= set(KNOWLEDGE_CLASS_NAMES):
        return KNOWLEDGE_CLASS_NAMES
    raise SessionMinerError(f"labels {sorted(present)} match neither intent nor knowledge classes")


# ---- subcommands ---------------------------------------------------------------


def cmd_synth(args) -> int:
    if args.config:
        try:
            cfg = config_from_json(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UnreadableStream(f"cannot open {args.config}: {exc}") from exc
    else:
        cfg = SynthConfig()
    overrides = {"seed": args.seed}
    if args.sessions is not None:
        overrides["n_sessions"] = args.sessions
    cfg = replace(cfg, **overrides)
    corpus = generate_corpus(cfg, jobs=args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        out / "events.log": corpus.event_log,
        out / "labels.tsv": corpus.labels,
        out / "knowledge.tsv": corpus.knowledge,
    }
    for path, text in files.items():
        path.write_text(text, encoding="utf-8")
    inputs = [args.config] if args.config else []
    _write_manifest(out / "manifest.json", "synth", inputs, list(files), seed=args.seed,
                    extra={"n_sessions": cfg.n_sessions})
    print(f"wrote {len(files)} corpus files to {out}")
    return 0


def cmd_extract(args) -> int:
    get_catalog(args.catalog)
    events, diagnostics = read_event_log(args.log)
    for diag in diagnostics:
        print(f"{args.log}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
    labels = read_labels(args.labels) if args.labels else None
    corpus = build_corpus(
        events,
        labels,
        policy=args.session_policy,
        gap=GapPolicy(gap_threshold_ms=args.gap_min * 60_000),
    )
    table = extract_table(corpus.sessions, args.catalog, break_sec=args.break_sec)
    out = Path(args.out)
    out.write_text(feature_csv_text(table), encoding="utf-8")
    inputs = [args.log] + ([args.labels] if args.labels else [])
    _write_manifest(Path(str(out) + ".manifest.json"), "extract", inputs, [out],
                    extra={"catalog": args.catalog, "sessions": len(corpus.sessions)})
    print(f"extracted {table.X.shape[0]} sessions x {table.X.shape[1]} features -> {out}")
    return 0


def _fit_artifact(family, params, table, class_names, seed, jobs=1) -> ModelArtifact:
    from .classifiers import make_estimator
    from .exceptions import EmptyTrainingSet

    labeled = table.labeled()
    if not labeled.session_ids:
        raise EmptyTrainingSet("the feature file contains no labeled rows")
    y = labeled.y(class_names)
    est = make_estimator(family, params, seed=seed)
    if family == "rf":
        est.fit(labeled.X, y, n_classes=len(class_names), jobs=jobs)
    else:
        est.fit(labeled.X, y, n_classes=len(class_names))
    return ModelArtifact(family, est, table.catalog, class_names, seed)


def cmd_train(args) -> int:
    from .exceptions import EmptyTrainingSet

    table = _read_features(args.features)
    labeled = table.labeled()
    if not labeled.session_ids:
        raise EmptyTrainingSet("the feature file contains no labeled rows")
    class_names = _infer_class_names(labeled.labels)
    y = labeled.y(class_names)

    grid = None
    if args.grid == "default":
        grid = default_grid(args.family)
    elif args.grid:
        try:
            grid = json.loads(Path(args.grid).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UnreadableStream(f"cannot open {args.grid}: {exc}") from exc
        if not isinstance(grid, list) or not all(isinstance(c, dict) for c in grid):
            raise SessionMinerError("grid file must be a JSON list of parameter objects")

    out = Path(args.out)
    outputs = [out]
    params: dict = {}
    extra = {"family": args.family, "catalog": table.catalog}
    if grid is not None:
        result = grid_search(
            args.family, grid, labeled.X, y, len(class_names),
            k_folds=args.folds, seed=args.seed, metric=args.metric, jobs=args.jobs,
        )
        params = result.best_params
        grid_out = Path(str(out) + ".gridsearch.json")
        grid_out.write_text(result.to_json(), encoding="utf-8")
        outputs.append(grid_out)
        extra["selected_params"] = params
        print(f"grid search: {len(result.cells)} cells, best {args.metric} "
              f"{result.selected.score(args.metric):.4f} with {params}")

    artifact = _fit_artifact(args.family, params, table, class_names, args.seed, jobs=args.jobs)
    out.write_text(artifact_to_json(artifact), encoding="utf-8")
    _write_manifest(Path(str(out) + ".manifest.json"), "train", [args.features], outputs,
                    seed=args.seed, extra=extra)
    print(f"trained {args.family} on {len(labeled.session_ids)} sessions -> {out}")
    return 0


def cmd_evaluate(args) -> int:
    artifact = load_model(args.model)
    table = _read_features(args.features)
    labeled = table.labeled()
    if not labeled.session_ids:
        raise EmptyInput("evaluation needs labeled rows")
    y = labeled.y(artifact.class_names)
    _, pred = artifact.predict_matrix(labeled.X, table.catalog)
    report = evaluate(y, pred, artifact.n_classes, class_names=artifact.class_names,
                      protocol="as-provided feature file")
    print(report_table([(artifact.family, report)]), end="")
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
        _write_manifest(Path(args.out + ".manifest.json"), "evaluate",
                        [args.model, args.features], [args.out])
    return 0


def cmd_rank(args) -> int:
    table = _read_features(args.features)
    labeled = table.labeled()
    if not labeled.session_ids:
        raise EmptyInput("ranking needs labeled rows")
    class_names = _infer_class_names(labeled.labels)
    ranking = information_gain_ranking(labeled.X, labeled.y(class_names), get_catalog(table.catalog))
    print(ranking.table(), end="")
    if args.out:
        Path(args.out).write_text(ranking.to_json(), encoding="utf-8")
        _write_manifest(Path(args.out + ".manifest.json"), "rank", [args.features], [args.out])
    return 0


def cmd_predict(args) -> int:
    artifact = load_model(args.model)
    if args.features:
        table = _read_features(args.features)
        inputs = [args.features]
    else:
        events, diagnostics = read_event_log(args.log)
        for diag in diagnostics:
            print(f"{args.log}:{diag.line_no}: skipped: {diag.reason}", file=sys.stderr)
        corpus = build_corpus(events, None, policy=args.session_policy,
                              gap=GapPolicy(gap_threshold_ms=args.gap_min * 60_000))
        table = extract_table(corpus.sessions, artifact.catalog, break_sec=args.break_sec)
        inputs = [args.log]
    scores, pred = artifact.predict_matrix(table.X, table.catalog)

    buf = io.StringIO()
    buf.write(PREDICTIONS_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["session_id", "predicted", *[f"score_{n}" for n in artifact.class_names]])
    for sid, p, row in zip(table.session_ids, pred, scores):
        writer.writerow([sid, artifact.class_names[int(p)], *[repr(float(v)) for v in row]])
    out = Path(args.out)
    out.write_text(buf.getvalue(), encoding="utf-8")
    _write_manifest(Path(str(out) + ".manifest.json"), "predict", [args.model] + inputs, [out])
    print(f"wrote {len(table.session_ids)} predictions -> {out}")
    return 0


def cmd_knowledge(args) -> int:
    table = _read_features(args.features)
    if table.catalog != "knowledge-v1":
        raise SessionMinerError("the knowledge pipeline expects knowledge-v1 features")
    records = read_knowledge(args.knowledge)
    by_sid = {r.session_id: r for r in records}
    keep = [i for i, sid in enumerate(table.session_ids) if sid in by_sid]
    if not keep:
        raise EmptyInput("no feature rows match the knowledge file")
    missing = len(table.session_ids) - len(keep)
    if missing:
        logger.info("%d session(s) lack knowledge records and are skipped", missing)
    X = table.X[keep]
    joined = [by_sid[table.session_ids[i]] for i in keep]
    joined = assign_classes(joined, policy=args.policy)

    catalog = get_catalog(table.catalog)
    result: dict = {
        "fmt": "session-miner-knowledge-report",
        "v": 1,
        "policy": args.policy,
        "family": args.family,
        "selection": None,
        "tasks": {},
    }
    rows = []
    for task in ("state", "gain"):
        y = np.asarray([getattr(r, f"{task}_class") for r in joined], dtype=int)
        X_task = X
        selected = None
        if args.selection != "none":
            selected = select_features(
                X, y, catalog, method=args.selection, budget=args.budget,
                family=args.family, seed=args.seed, jobs=args.jobs,
            )
            cols = [catalog.index_of(name) for name in selected]
            X_task = X[:, cols]
            result["selection"] = {"method": args.selection, "budget": args.budget}
        report = evaluate_cv(
            args.family, {}, X_task, y, len(KNOWLEDGE_CLASS_NAMES),
            class_names=KNOWLEDGE_CLASS_NAMES, k_folds=args.folds, seed=args.seed, jobs=args.jobs,
        )
        result["tasks"][task] = report.to_dict()
        if selected is not None:
            result["tasks"][task]["selected_features"] = list(selected)
        rows.append((f"{args.family}/{task}", report))
    print(report_table(rows), end="")
    if args.out:
        Path(args.out).write_text(json.dumps(result, sort_keys=True, separators=(",", ":")) + "\n",
                                  encoding="utf-8")
        _write_manifest(Path(args.out + ".manifest.json"), "knowledge",
                        [args.features, args.knowledge], [args.out], seed=args.seed)
    return 0


# ---- parser ----------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="session-miner", description=__doc__)
    parser.add_argument("--version", action="version", version=f"session-miner {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_jobs(p):
        p.add_argument("--jobs", type=int, default=available_parallelism(),
                       help="worker count for parallel sections")

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--config", help="JSON config file (documented schema)")
    p.add_argument("--sessions", type=int, help="override the configured session count")
    add_jobs(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="event log -> feature matrix CSV")
    p.add_argument("--log", required=True)
    p.add_argument("--labels")
    p.add_argument("--catalog", required=True, choices=sorted(CATALOGS))
    p.add_argument("--out", required=True)
    p.add_argument("--session-policy", choices=("by-field", "by-gap"), default="by-field")
    p.add_argument("--gap-min", type=int, default=30, help="by-gap inactivity threshold, minutes")
    p.add_argument("--break-sec", type=float, default=60.0, help="break threshold for session features")
    add_jobs(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train a model, optionally tuning by grid search")
    p.add_argument("--features", required=True)
    p.add_argument("--family", required=True, choices=("dt", "rf", "lr", "svm", "nb", "mlp"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--grid", help="JSON grid file, or 'default' for the built-in grid")
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--metric", choices=SELECTION_METRICS, default="accuracy")
    add_jobs(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="per-class P/R/F1, weighted averages, accuracy")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rank", help="information-gain feature ranking")
    p.add_argument("--features", required=True)
    p.add_argument("--out", help="write the JSON ranking here")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("predict", help="per-session class scores")
    p.add_argument("--model", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--features")
    src.add_argument("--log")
    p.add_argument("--out", required=True)
    p.add_argument("--session-policy", choices=("by-field", "by-gap"), default="by-field")
    p.add_argument("--gap-min", type=int, default=30)
    p.add_argument("--break-sec", type=float, default=60.0)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("knowledge", help="knowledge state and gain classification tasks")
    p.add_argument("--features", required=True, help="knowledge-v1 feature CSV")
    p.add_argument("--knowledge", required=True, help="knowledge TSV (session_id pre post)")
    p.add_argument("--family", required=True, choices=("dt", "rf", "lr", "svm", "nb", "mlp"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--policy", choices=("tertile", "fixed"), default="tertile")
    p.add_argument("--selection", choices=("none", "ig-top-k", "greedy-forward"), default="none")
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--out", help="write the JSON report here")
    add_jobs(p)
    p.set_defaults(func=cmd_knowledge)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SessionMinerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
