"""Command-line interface.

Subcommands: train, predict, evaluate, experiment, solve, export-lp,
binarize.  Exit codes: 0 success, 2 usage error, 1 runtime error.
Reports on stdout are deterministic for fixed inputs and flags; wall
clock timings go to stderr so reruns stay byte-identical.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from orsplit import metrics as em
from orsplit import tree as tr
from orsplit.binarize import build_matrix
from orsplit.dataset import (
    Dataset,
    binarize_target,
    load_binary_features,
    load_csv,
    read_rows,
)
from orsplit.lpwriter import write_error_lp, write_gini_lp
from orsplit.solver import SolverConfig, brute_force_solve, enum_solve


def _add_data_flags(p: argparse.ArgumentParser, need_target: bool = True) -> None:
    p.add_argument("--data", required=True, help="input CSV file")
    p.add_argument("--target", required=need_target, help="target column name")
    p.add_argument("--positive", help="positive class label (default: second class seen)")
    p.add_argument("--delimiter", default=",", help="field delimiter (default ,)")
    p.add_argument(
        "--drop-incomplete",
        action="store_true",
        help="drop rows with missing values instead of failing",
    )


def _add_tree_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-rules", type=int, default=2, help="max questions per split rule")
    p.add_argument("--node-size", type=int, default=0, help="min child size, 0 = dynamic")
    p.add_argument(
        "--node-size-policy",
        choices=["sqrt", "fourth-root"],
        default="sqrt",
        help="dynamic node-size rule",
    )
    p.add_argument("--stop-prob", type=float, default=0.95, help="purity stop threshold")
    p.add_argument("--bin-size", type=int, default=0, help="min question support, 0 = auto")
    p.add_argument("--nseg-numeric", type=int, default=20, help="max thresholds per direction")
    p.add_argument("--no-same-gender-children", action="store_true",
                   help="require children with differing majority classes")
    p.add_argument("--max-leaves", type=int, default=None, help="prune to this many leaves")
    p.add_argument("--max-depth", type=int, default=None, help="depth budget")
    p.add_argument("--time-limit", type=float, default=None, help="per-split seconds budget")
    p.add_argument("--threads", type=int, default=1, help="parallel experiment repetitions")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-rules", type=int, default=2)
    p.add_argument("--node-size", type=int, default=0, help="min child size, 0 = dynamic")
    p.add_argument("--no-same-gender-children", action="store_true")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--budget", type=int, default=None, help="max objective evaluations")
    p.add_argument(
        "--format",
        choices=["csv", "binary"],
        default="csv",
        help="csv: 0/1 columns + target column; binary: space-separated, label first",
    )


def _tree_config(args) -> tr.TreeConfig:
    return tr.TreeConfig(
        max_rules=args.max_rules,
        min_node_size=args.node_size,
        node_size_policy=args.node_size_policy,
        no_same_gender_children=args.no_same_gender_children,
        time_limit=args.time_limit,
        stop_prob=args.stop_prob,
        max_leaves=args.max_leaves,
        max_depth=args.max_depth,
        bin_size=args.bin_size,
        nseg_numeric=args.nseg_numeric,
    )


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        max_rules=args.max_rules,
        min_node_size=args.node_size,
        no_same_gender_children=args.no_same_gender_children,
        time_limit=args.time_limit,
        node_budget=args.budget,
    )


def _load_dataset(args) -> Dataset:
    return load_csv(
        args.data,
        args.target,
        delimiter=args.delimiter,
        drop_incomplete=args.drop_incomplete,
    )


def _positive_label(d: Dataset, args) -> str:
    if args.positive is not None:
        if args.positive not in d.classes:
            raise ValueError(f"label {args.positive!r} not among classes {d.classes}")
        return args.positive
    if len(d.classes) != 2:
        raise ValueError("--positive is required for non-binary targets")
    return d.classes[1]


def _fit(d: Dataset, args):
    cfg = _tree_config(args)
    if len(d.classes) > 2 and args.positive is None:
        model = tr.grow_multiclass(d, cfg)
        if cfg.max_leaves is not None:
            model = tr.Ensemble(
                trees=[tr.prune_to_max_leaves(t, cfg.max_leaves) for t in model.trees],
                classes=model.classes,
            )
        return model
    positive = _positive_label(d, args) if len(d.classes) == 2 else args.positive
    if positive not in d.classes:
        raise ValueError(f"label {positive!r} not among classes {d.classes}")
    y = binarize_target(d, positive)
    negative = None if len(d.classes) == 2 else f"not {positive}"
    t = tr.grow(d, y, cfg, negative_label=negative)
    if cfg.max_leaves is not None:
        t = tr.prune_to_max_leaves(t, cfg.max_leaves)
    return t


def _model_predictions(model, d: Dataset) -> list[str]:
    if isinstance(model, tr.Ensemble):
        return [em.predict_multiclass(model, row) for row in d.rows()]
    return [p.label for p in em.predict_dataset(model, d)]


def cmd_train(args) -> int:
    d = _load_dataset(args)
    started = time.monotonic()
    model = _fit(d, args)
    elapsed = time.monotonic() - started
    tr.save_model(model, args.out)
    if isinstance(model, tr.Ensemble):
        preds = _model_predictions(model, d)
        conf = em.confusion_accuracy(preds, d.target)
        for t in model.trees:
            print(tr.summarize(t))
        print("ensemble confusion matrix (rows=predicted, cols=actual):")
        _print_confusion(conf)
    else:
        actual = [
            model.positive_label if x == model.positive_label else model.negative_label
            for x in d.target
        ]
        conf = em.confusion_accuracy(_model_predictions(model, d), actual)
        print(tr.summarize(model, confusion=conf))
    print(f"model written to {args.out}")
    print(f"training time: {elapsed:.2f}s", file=sys.stderr)
    return 0


def cmd_predict(args) -> int:
    model = tr.load_model(args.model)
    header, rows = read_rows(args.data, delimiter=args.delimiter)
    out = open(args.out, "w", encoding="utf-8") if args.out != "-" else sys.stdout
    try:
        if isinstance(model, tr.Ensemble):
            out.write("label\n")
            for row in rows:
                out.write(em.predict_multiclass(model, row) + "\n")
        else:
            if args.type == "class":
                out.write("label\n")
            elif args.type == "score":
                out.write("score\n")
            else:
                out.write("label,score\n")
            for row in rows:
                p = em.predict_case(model, row)
                if args.type == "class":
                    out.write(f"{p.label}\n")
                elif args.type == "score":
                    out.write(f"{p.score!r}\n")
                else:
                    out.write(f"{p.label},{p.score!r}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _print_confusion(conf) -> None:
    width = max(len(str(x)) for x in conf.labels) + 2
    print(" " * width + "".join(f"{x:>{width}}" for x in conf.labels))
    for i, row_label in enumerate(conf.labels):
        print(
            f"{row_label:>{width}}"
            + "".join(f"{int(conf.matrix[i, j]):>{width}}" for j in range(len(conf.labels)))
        )


def cmd_evaluate(args) -> int:
    model = tr.load_model(args.model)
    d = _load_dataset(args)
    if isinstance(model, tr.Ensemble):
        preds = _model_predictions(model, d)
        conf = em.confusion_accuracy(preds, d.target)
        print(f"accuracy: {conf.accuracy:.4f}")
        _print_confusion(conf)
        return 0
    actual = [
        model.positive_label if x == model.positive_label else model.negative_label
        for x in d.target
    ]
    predictions = em.predict_dataset(model, d)
    conf = em.confusion_accuracy([p.label for p in predictions], actual)
    scores = [p.score for p in predictions]
    yb = [1 if a == model.positive_label else 0 for a in actual]
    roc = em.roc_auc(scores, yb)
    print(f"accuracy: {conf.accuracy:.4f}")
    print(f"auc: {roc.auc:.4f}")
    _print_confusion(conf)
    if args.roc_csv:
        em.write_roc_csv(roc, args.roc_csv)
    return 0


def _experiment_split(n: int, fraction: float, seed: int, rep: int):
    """Seeded 70/30-style split: PCG64 keyed by (seed, rep) permutes rows."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, rep])))
    perm = rng.permutation(n)
    k = int(np.floor(fraction * n))
    return perm[:k], perm[k:]


def _run_rep(d: Dataset, args, rep: int):
    train_rows, test_rows = _experiment_split(d.n, args.split_fraction, args.seed, rep)
    dtrain = d.subset(train_rows)
    dtest = d.subset(test_rows)
    model = _fit(dtrain, args)
    if isinstance(model, tr.Ensemble):
        preds = _model_predictions(model, dtest)
        conf = em.confusion_accuracy(preds, dtest.target)
        return rep, len(train_rows), len(test_rows), conf.accuracy, None
    actual = [
        model.positive_label if x == model.positive_label else model.negative_label
        for x in dtest.target
    ]
    predictions = em.predict_dataset(model, dtest)
    conf = em.confusion_accuracy([p.label for p in predictions], actual)
    yb = [1 if a == model.positive_label else 0 for a in actual]
    try:
        auc = em.roc_auc([p.score for p in predictions], yb).auc
    except ValueError:  # single-class test split
        auc = float("nan")
    return rep, len(train_rows), len(test_rows), conf.accuracy, auc


def cmd_experiment(args) -> int:
    d = _load_dataset(args)
    started = time.monotonic()
    reps = range(args.reps)
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(lambda r: _run_rep(d, args, r), reps))
    else:
        results = [_run_rep(d, args, r) for r in reps]
    results.sort(key=lambda r: r[0])
    has_auc = any(r[4] is not None for r in results)
    print("rep,train_n,test_n,accuracy" + (",auc" if has_auc else ""))
    accs, aucs = [], []
    for rep, ntr, nte, acc, auc in results:
        accs.append(acc)
        line = f"{rep},{ntr},{nte},{acc:.4f}"
        if has_auc:
            line += f",{auc:.4f}"
            if not np.isnan(auc):
                aucs.append(auc)
        print(line)
    mean_line = f"mean,,,{np.mean(accs):.4f}"
    if has_auc:
        mean_line += f",{np.mean(aucs):.4f}" if aucs else ",nan"
    print(mean_line)
    print(f"total time: {time.monotonic() - started:.2f}s", file=sys.stderr)
    return 0


def _load_instance(args):
    """0/1 question matrix + response for solve/export-lp."""
    if args.format == "binary":
        B, y, names = load_binary_features(args.data)
        return B, y, names
    if args.target is None:
        raise ValueError("--target is required for csv-format instances")
    header, rows = read_rows(args.data, delimiter=args.delimiter)
    if args.target not in header:
        raise ValueError(f"target column {args.target!r} not found")
    names = [h for h in header if h != args.target]
    if not names:
        raise ValueError("no feature columns")
    B = np.zeros((len(rows), len(names)), dtype=np.uint8)
    for i, row in enumerate(rows):
        for j, name in enumerate(names):
            v = row[name].strip()
            if v not in ("0", "1"):
                raise ValueError(f"column {name!r} is not 0/1 at data row {i + 1}")
            B[i, j] = v == "1"
    labels = [row[args.target] for row in rows]
    classes = []
    for x in labels:
        if x not in classes:
            classes.append(x)
    if len(classes) != 2:
        raise ValueError(f"target must be binary, found classes {classes}")
    positive = args.positive if args.positive is not None else classes[1]
    if positive not in classes:
        raise ValueError(f"label {positive!r} not among classes {classes}")
    y = np.fromiter((1 if x == positive else 0 for x in labels), dtype=np.uint8)
    return B, y, names


def cmd_solve(args) -> int:
    B, y, names = _load_instance(args)
    cfg = _solver_config(args)
    started = time.monotonic()
    solve = brute_force_solve if args.oracle else enum_solve
    res = solve(B, y, cfg)
    elapsed = time.monotonic() - started
    n, m = B.shape
    if res.feasible:
        rule = " | ".join(names[k] for k in res.best)
        print(
            f"n={n} m={m} objective={res.best_eval.nu} rule=[{rule}] "
            f"evaluations={res.evaluations} optimal={res.optimal}"
        )
    else:
        print(f"n={n} m={m} infeasible evaluations={res.evaluations} optimal={res.optimal}")
    print(f"solve time: {elapsed:.3f}s", file=sys.stderr)
    return 0


def cmd_export_lp(args) -> int:
    B, y, names = _load_instance(args)
    cfg = _solver_config(args)
    writer = write_gini_lp if args.model == "gini" else write_error_lp
    summary = writer(B, y, cfg, args.out)
    print(
        f"wrote {args.out}: {summary.vars} variables "
        f"({summary.binary_vars} binary, {summary.z_vars} unit-box, "
        f"{summary.theta_vars} free), {summary.constraints} constraints"
    )
    return 0


def cmd_binarize(args) -> int:
    d = _load_dataset(args)
    positive = _positive_label(d, args)
    y = binarize_target(d, positive)
    cfg = tr.TreeConfig(
        bin_size=args.bin_size,
        nseg_numeric=args.nseg_numeric,
    ).binarize_config()
    bm = build_matrix(d, y, cfg)
    out = open(args.out, "w", encoding="utf-8") if args.out != "-" else sys.stdout
    try:
        headers = [f"q{k}:{q.label()}" for k, q in enumerate(bm.questions)]
        out.write(",".join(headers + [d.target_name]) + "\n")
        for i in range(bm.n):
            out.write(",".join(str(int(v)) for v in bm.B[i]) + f",{d.target[i]}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"binarized {bm.n} rows into {bm.m} questions", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orsplit",
        description="decision trees with exact-optimal boolean OR-clause splits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="grow a tree (or one-vs-rest ensemble) and save it")
    _add_data_flags(p)
    _add_tree_flags(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict labels/scores for a CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--type", choices=["class", "score", "both"], default="both")
    p.add_argument("--out", default="-", help="output CSV ('-' = stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="accuracy, AUC and confusion matrix on a CSV")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--roc-csv", default=None, help="dump ROC points to this CSV")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="repeated seeded train/test splits")
    _add_data_flags(p)
    _add_tree_flags(p)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-fraction", type=float, default=0.7)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("solve", help="optimal split rule for a binarized instance")
    p.add_argument("--data", required=True)
    p.add_argument("--target", help="target column (csv format)")
    p.add_argument("--positive", help="positive label (csv format)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--oracle", action="store_true", help="use the brute-force oracle")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export-lp", help="write the split instance as an LP file")
    p.add_argument("--data", required=True)
    p.add_argument("--target", help="target column (csv format)")
    p.add_argument("--positive", help="positive label (csv format)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--model", choices=["gini", "error"], default="gini")
    p.add_argument("--out", required=True)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("binarize", help="emit the question matrix as CSV")
    _add_data_flags(p)
    p.add_argument("--bin-size", type=int, default=0)
    p.add_argument("--nseg-numeric", type=int, default=20)
    p.add_argument("--out", default="-", help="output CSV ('-' = stdout)")
    p.set_defaults(func=cmd_binarize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
