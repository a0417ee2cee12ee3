"""Prediction and evaluation: routing, scores, ROC/AUC, confusion counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from orsplit.dataset import Dataset
from orsplit.tree import Ensemble, Tree, TreeNode


@dataclass(frozen=True)
class Prediction:
    label: str
    score: float  # leaf probability of the positive class


@dataclass(frozen=True)
class RocResult:
    points: list[tuple[float, float]]  # (fpr, tpr), fpr nondecreasing
    auc: float


@dataclass(frozen=True)
class ConfusionResult:
    labels: list[str]
    matrix: np.ndarray  # rows = predicted, cols = actual
    accuracy: float


def route(t: Tree, row) -> TreeNode:
    """Walk a case down the tree; yes branch when any rule question holds."""
    node = t.root
    while not node.is_leaf:
        answer = False
        for q in t.rule_questions(node):
            value = _fetch(row, q.name)
            if q.matches(value):
                answer = True
                break
        node = node.yes_child if answer else node.no_child
    return node


def _fetch(row, name: str):
    try:
        value = row[name]
    except (KeyError, IndexError):
        raise ValueError(f"row is missing column {name!r}") from None
    if value is None or (isinstance(value, str) and value.strip() == ""):
        raise ValueError(f"missing value for column {name!r}")
    if isinstance(value, float) and np.isnan(value):
        raise ValueError(f"missing value for column {name!r}")
    return value


def predict_case(t: Tree, row) -> Prediction:
    """Label and positive-class score for one row (a name -> value mapping)."""
    leaf = route(t, row)
    return Prediction(label=leaf.leaf_label, score=leaf.prob_positive)


def predict_dataset(t: Tree, d: Dataset) -> list[Prediction]:
    return [predict_case(t, row) for row in d.rows()]


def predict_multiclass(e: Ensemble, row) -> str:
    """Highest-scoring class wins; ties go to the earliest listed class."""
    best_label = e.classes[0]
    best_score = -1.0
    for label, t in zip(e.classes, e.trees):
        score = predict_case(t, row).score
        if score > best_score:
            best_score = score
            best_label = label
    return best_label


def vote_ensemble(trees: list[Tree], row) -> Prediction:
    """Majority vote over variant-config trees; score is the mean score.

    Vote ties go to the negative label, mirroring single-tree behaviour.
    """
    if not trees:
        raise ValueError("empty ensemble")
    preds = [predict_case(t, row) for t in trees]
    positive = trees[0].positive_label
    pos_votes = sum(1 for p in preds if p.label == positive)
    label = positive if 2 * pos_votes > len(preds) else trees[0].negative_label
    score = sum(p.score for p in preds) / len(preds)
    return Prediction(label=label, score=score)


def roc_auc(scores, labels) -> RocResult:
    """ROC points from a descending threshold sweep and the trapezoid AUC.

    Tied scores are processed as a single threshold step, which makes the
    trapezoid area equal the pairwise-comparison statistic with half
    credit for ties.
    """
    s = np.asarray(scores, dtype=np.float64)
    yv = np.asarray(labels)
    if s.shape != yv.shape or s.ndim != 1:
        raise ValueError("scores and labels must be equal-length vectors")
    pos_total = int(np.count_nonzero(yv))
    neg_total = len(yv) - pos_total
    if pos_total == 0 or neg_total == 0:
        raise ValueError("both classes must be present")

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = (yv[order] != 0).astype(np.int64)
    # indices where a threshold step ends (last occurrence of each score)
    distinct_end = np.nonzero(np.diff(s_sorted))[0]
    ends = np.concatenate([distinct_end, [len(s_sorted) - 1]])
    tps = np.cumsum(y_sorted)[ends]
    fps = ends + 1 - tps

    points = [(0.0, 0.0)]
    for fp, tp in zip(fps, tps):
        points.append((fp / neg_total, tp / pos_total))
    auc = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        auc += (x1 - x0) * (y0 + y1) / 2.0
    return RocResult(points=points, auc=auc)


def confusion_accuracy(preds, actual) -> ConfusionResult:
    """Contingency counts (rows = predicted, cols = actual) and accuracy."""
    preds = list(preds)
    actual = list(actual)
    if len(preds) != len(actual):
        raise ValueError("prediction and actual label lists differ in length")
    if not preds:
        raise ValueError("empty label lists")
    labels = sorted(set(preds) | set(actual))
    index = {x: i for i, x in enumerate(labels)}
    matrix = np.zeros((len(labels), len(labels)), dtype=np.int64)
    hits = 0
    for p, a in zip(preds, actual):
        matrix[index[p], index[a]] += 1
        hits += p == a
    return ConfusionResult(labels=labels, matrix=matrix, accuracy=hits / len(preds))


def write_roc_csv(roc: RocResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("fpr,tpr\n")
        for fpr, tpr in roc.points:
            fh.write(f"{fpr!r},{tpr!r}\n")
