"""Command-line entry point wiring the library into the fit -> (tune) ->
score -> eval -> compare workflow.

Exit codes: 0 success, 2 I/O failure, 3 malformed file, 4 contract violation
(bad arguments or preconditions). `--json-errors` emits errors as one JSON
object on stderr instead of prose.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import centroid, featureset, metrics, scoring, synth, tuning
from .errors import ContractError, FormatError, IoFailure, OodscoreError

EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_CONTRACT = 4


def _load_featureset(path: str, n_classes: int | None) -> featureset.FeatureSet:
    if path.endswith(".csv"):
        if n_classes is None:
            n_classes = _infer_csv_classes(path)
        return featureset.import_csv(path, n_classes)
    return featureset.load_fset(path)


def _infer_csv_classes(path: str) -> int:
    # Peek at the header: logit column count wins; otherwise max label + 1.
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    header = rows[0] if rows else []
    n_logits = sum(1 for h in header if h.startswith("logit_"))
    if n_logits:
        return n_logits
    if "label" in header:
        col = header.index("label")
        return max(int(r[col]) for r in rows[1:]) + 1
    return 1


def _write_scores_csv(path: str, scores: np.ndarray) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            f.write("row,score\n")
            for i, v in enumerate(scores):
                f.write(f"{i},{v:.17g}\n")
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def _read_scores_csv(path: str) -> np.ndarray:
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    if not rows or rows[0] != ["row", "score"]:
        raise FormatError(f"{path}: expected 'row,score' header")
    return np.array([float(r[1]) for r in rows[1:]], dtype=np.float64)


def _score_config(args) -> scoring.ScoreConfig:
    return scoring.ScoreConfig(
        method=scoring.Method(args.method),
        variant=scoring.NcddVariant(args.variant),
        alpha1=args.alpha1,
        alpha2=args.alpha2,
        log_base=scoring.LogBase(args.log_base),
        k=args.k,
        temperature=args.temperature,
    )


def _add_score_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", default="weighted",
                   choices=[v.value for v in scoring.NcddVariant])
    p.add_argument("--alpha1", type=float, default=-1.0)
    p.add_argument("--alpha2", type=float, default=0.0)
    p.add_argument("--log-base", dest="log_base", default="natural",
                   choices=[b.value for b in scoring.LogBase])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--temperature", type=float, default=1.0)


def cmd_fit(args) -> int:
    train = _load_featureset(args.train, args.n_classes)
    model = centroid.fit_centroids(train)
    centroid.save_model(model, args.out)
    print(f"fit: {model.n_classes} centroids of dim {model.n_features} -> {args.out}")
    return 0


def cmd_score(args) -> int:
    model = centroid.load_model(args.model) if args.model else None
    test = _load_featureset(args.infile, args.n_classes)
    train = _load_featureset(args.train, args.n_classes) if args.train else None
    cfg = _score_config(args)
    if cfg.method is scoring.Method.KNN and train is None:
        raise ContractError("--method knn requires --train")
    sv = scoring.score_set(test, model, cfg, train=train)
    _write_scores_csv(args.out, sv.scores)
    if args.json_meta:
        meta = {"config": cfg.to_dict(), "model_fingerprint": sv.model_fingerprint,
                "n_samples": int(sv.scores.size)}
        Path(args.json_meta).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    print(f"score: {sv.scores.size} rows ({cfg.method.value}) -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    ids = _read_scores_csv(args.id_scores)
    oods = _read_scores_csv(args.ood_scores)
    report = metrics.evaluate(ids, oods, tpr_target=args.tpr)
    report.save(args.out)
    print(f"auroc={report.auroc:.6f} fpr{int(round(args.tpr * 100))}={report.fpr95:.6f} "
          f"lambda={report.threshold_lambda:.6g}")
    return 0


def _parse_grid(text: str) -> tuning.TuneGrid:
    parts = dict(p.split(":", 1) for p in text.split(";") if p)
    def vals(key):
        if key not in parts:
            return tuning.DEFAULT_ALPHAS
        return tuple(float(x) for x in parts[key].split(",") if x)
    try:
        return tuning.TuneGrid(alpha1_values=vals("a1"), alpha2_values=vals("a2"))
    except ValueError as e:
        raise ContractError(f"bad --grid: {e}") from e


def cmd_tune(args) -> int:
    model = centroid.load_model(args.model)
    val_id = _load_featureset(args.val_id, args.n_classes)
    val_ood = _load_featureset(args.val_ood, args.n_classes)
    grid = _parse_grid(args.grid) if args.grid else tuning.TuneGrid()
    grid = tuning.TuneGrid(alpha1_values=grid.alpha1_values,
                           alpha2_values=grid.alpha2_values,
                           tpr_target=args.tpr)
    result = tuning.tune(model, val_id, val_ood, grid)
    result.save(args.out)
    print(f"{'alpha1':>8} {'alpha2':>8} {'fpr95':>8} {'auroc':>8}")
    for a1, a2, fpr, auc in result.full_table:
        print(f"{a1:>8g} {a2:>8g} {fpr:>8.4f} {auc:>8.4f}")
    print(f"best: alpha1={result.best_alpha1:g} alpha2={result.best_alpha2:g} "
          f"objective={result.best_objective:.6f}")
    return 0


def cmd_compare(args) -> int:
    model = centroid.load_model(args.model) if args.model else None
    test_id = _load_featureset(args.test_id, args.n_classes)
    test_ood = _load_featureset(args.test_ood, args.n_classes)
    train = _load_featureset(args.train, args.n_classes) if args.train else None

    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        parsed = [scoring.Method(m) for m in methods]
    except ValueError as e:
        raise ContractError(f"unknown method in --methods: {e}") from e

    reports = []
    for method in parsed:
        cfg = scoring.ScoreConfig(
            method=method,
            variant=scoring.NcddVariant(args.variant),
            alpha1=args.alpha1, alpha2=args.alpha2,
            log_base=scoring.LogBase(args.log_base),
            k=args.k, temperature=args.temperature,
        )
        if method is scoring.Method.KNN and train is None:
            raise ContractError("knn in --methods requires --train")
        ids = scoring.score_set(test_id, model, cfg, train=train).scores
        oods = scoring.score_set(test_ood, model, cfg, train=train).scores
        reports.append(metrics.evaluate(ids, oods, tpr_target=args.tpr,
                                        method=method.value, config=cfg.to_dict()))

    auc_rank = {i: r + 1 for r, i in
                enumerate(sorted(range(len(reports)), key=lambda i: -reports[i].auroc))}
    fpr_rank = {i: r + 1 for r, i in
                enumerate(sorted(range(len(reports)), key=lambda i: reports[i].fpr95))}
    print(f"{'method':<10} {'auroc':>8} {'fpr95':>8} {'auc_rank':>9} {'fpr_rank':>9}")
    for i, rep in enumerate(reports):
        print(f"{rep.method:<10} {rep.auroc:>8.4f} {rep.fpr95:>8.4f} "
              f"{auc_rank[i]:>9} {fpr_rank[i]:>9}")
    doc = [dict(rep.to_dict(), auc_rank=auc_rank[i], fpr_rank=fpr_rank[i])
           for i, rep in enumerate(reports)]
    Path(args.out).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_gen(args) -> int:
    text = args.spec
    if not text.lstrip().startswith("{"):
        text = Path(text).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"bad --spec JSON: {e}") from e
    try:
        spec = synth.SynthSpec(**raw)
    except TypeError as e:
        raise ContractError(f"bad --spec fields: {e}") from e
    train, test_id, test_ood = synth.generate(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    featureset.save_fset(train, out / "train.fset")
    featureset.save_fset(test_id, out / "test_id.fset")
    featureset.save_fset(test_ood, out / "test_ood.fset")
    print(f"gen: wrote train/test_id/test_ood under {out}")
    return 0


def cmd_convert(args) -> int:
    src, dst = args.infile, args.out
    if src.endswith(".csv"):
        fs = featureset.import_csv(src, args.n_classes or _infer_csv_classes(src))
    else:
        fs = featureset.load_fset(src)
    if dst.endswith(".csv"):
        featureset.export_csv(fs, dst)
    else:
        featureset.save_fset(fs, dst)
    print(f"convert: {src} -> {dst} ({fs.n_samples}x{fs.n_features})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oodscore",
        description="Post-hoc OOD scoring over pre-extracted features/logits.",
    )
    parser.add_argument("--json-errors", action="store_true",
                        help="emit errors as JSON on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit per-class centroids")
    p.add_argument("--train", required=True)
    p.add_argument("--n-classes", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("score", help="score a feature set")
    p.add_argument("--model", default=None)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--train", default=None)
    p.add_argument("--n-classes", type=int, default=None)
    p.add_argument("--method", required=True, choices=[m.value for m in scoring.Method])
    _add_score_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--json-meta", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="AUROC / FPR at TPR target from score CSVs")
    p.add_argument("--id-scores", dest="id_scores", required=True)
    p.add_argument("--ood-scores", dest="ood_scores", required=True)
    p.add_argument("--tpr", type=float, default=0.95)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tune", help="grid search over (alpha1, alpha2)")
    p.add_argument("--model", required=True)
    p.add_argument("--val-id", dest="val_id", required=True)
    p.add_argument("--val-ood", dest="val_ood", required=True)
    p.add_argument("--n-classes", type=int, default=None)
    p.add_argument("--grid", default=None, help='e.g. "a1:-2,-1,0,1;a2:-1,0"')
    p.add_argument("--tpr", type=float, default=0.95)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("compare", help="evaluate several methods side by side")
    p.add_argument("--model", default=None)
    p.add_argument("--test-id", dest="test_id", required=True)
    p.add_argument("--test-ood", dest="test_ood", required=True)
    p.add_argument("--train", default=None)
    p.add_argument("--n-classes", type=int, default=None)
    p.add_argument("--methods", required=True)
    _add_score_flags(p)
    p.add_argument("--tpr", type=float, default=0.95)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate synthetic train/test_id/test_ood")
    p.add_argument("--spec", required=True, help="JSON object or path to one")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("convert", help="convert between FSET1 and CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n-classes", type=int, default=None)
    p.set_defaults(func=cmd_convert)

    return parser


def _emit_error(err: Exception, code: int, json_errors: bool) -> None:
    if json_errors:
        doc = {"error": type(err).__name__, "message": str(err), "exit_code": code}
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {err}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    # OODSCORE_THREADS is accepted for harness compatibility; scoring is a
    # fixed-order sequential loop, so results never depend on it.
    os.environ.setdefault("OODSCORE_THREADS", "1")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IoFailure as e:
        _emit_error(e, EXIT_IO, args.json_errors)
        return EXIT_IO
    except FormatError as e:
        _emit_error(e, EXIT_FORMAT, args.json_errors)
        return EXIT_FORMAT
    except (ContractError, ValueError) as e:
        _emit_error(e, EXIT_CONTRACT, args.json_errors)
        return EXIT_CONTRACT
    except OSError as e:
        _emit_error(e, EXIT_IO, args.json_errors)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
