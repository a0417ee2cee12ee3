"""Turning input columns into a pool of yes/no questions.

Numeric columns yield threshold questions found by two frontier scans
(one per inequality direction); categorical columns yield level-membership
questions, with high-cardinality levels grouped first.  The pooled
questions form the 0/1 matrix the split optimizer works on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from orsplit.dataset import BinaryTarget, Dataset

OPS = {"ge": ">=", "le": "<=", "in": "in"}


@dataclass(frozen=True)
class Question:
    """One yes/no predicate over a single input column."""

    column: int
    name: str
    op: str  # "ge" | "le" | "in"
    threshold: float | None = None
    levels: frozenset[str] | None = None
    support: int = 0

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise ValueError(f"unknown question op {self.op!r}")
        if self.op == "in" and not self.levels:
            raise ValueError("membership question needs a level set")
        if self.op != "in" and self.threshold is None:
            raise ValueError("threshold question needs a threshold")

    def evaluate(self, values: np.ndarray) -> np.ndarray:
        """Vectorized yes/no answers over a column's values."""
        if self.op == "ge":
            return (values >= self.threshold).astype(np.uint8)
        if self.op == "le":
            return (values <= self.threshold).astype(np.uint8)
        return np.isin(values, sorted(self.levels)).astype(np.uint8)

    def matches(self, value) -> bool:
        """Yes/no answer for a single raw value (prediction path).

        Unseen categorical levels answer no; the level sets were built
        from observed data so membership cannot be claimed for novelties.
        """
        if self.op == "in":
            return str(value) in self.levels
        v = float(value)
        return v >= self.threshold if self.op == "ge" else v <= self.threshold

    def label(self) -> str:
        if self.op == "in":
            return f"{self.name} in {{{'|'.join(sorted(self.levels))}}}"
        return f"{self.name}{OPS[self.op]}{self.threshold:g}"


@dataclass(frozen=True)
class SeparableSplit:
    """A numeric threshold that perfectly separates the two classes."""

    column: int
    name: str
    threshold: float
    positive_op: str  # side holding the positive class: "ge" or "le"

    def to_question(self, support: int) -> Question:
        return Question(
            column=self.column,
            name=self.name,
            op=self.positive_op,
            threshold=self.threshold,
            support=support,
        )


@dataclass(frozen=True)
class BinarizeConfig:
    """Question-pool controls.

    bin_size = 0 resolves to max(1, floor(sqrt(n)/4)): the minimum number
    of yes answers a question needs to enter the pool.  nseg_numeric caps
    how many questions each scan direction may emit per numeric column.
    """

    bin_size: int = 0
    nseg_numeric: int = 20
    categorical_dummy_threshold: int = 30

    def __post_init__(self) -> None:
        if self.bin_size < 0:
            raise ValueError("bin_size must be >= 0")
        if self.nseg_numeric < 1 or self.categorical_dummy_threshold < 1:
            raise ValueError("nseg_numeric and categorical_dummy_threshold must be >= 1")

    def resolved_bin_size(self, n: int) -> int:
        if self.bin_size > 0:
            return self.bin_size
        return max(1, math.isqrt(n) // 4)


@dataclass
class BinaryMatrix:
    """The n-by-m 0/1 question matrix with its question pool and response."""

    B: np.ndarray
    questions: list[Question]
    y: BinaryTarget

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]


def _check_binary_response(y: np.ndarray) -> int:
    pos = int(np.count_nonzero(y))
    if pos == 0 or pos == len(y):
        raise ValueError("both classes must be present")
    return pos


def binarize_numeric(
    values: np.ndarray,
    y: np.ndarray,
    cfg: BinarizeConfig,
    column: int = 0,
    name: str = "x",
) -> SeparableSplit | list[Question]:
    """Threshold questions for one numeric column.

    If one class's minimum exceeds the other's maximum the classes are
    perfectly separable and the single separating midpoint is returned
    instead of a question list.  Otherwise two scans over the sorted
    distinct values emit ">=" questions (ascending thresholds, shrinking
    support) and "<=" questions (descending thresholds, shrinking
    support).  A scan emits a threshold only when its yes-side positive
    fraction strictly exceeds every previously emitted one, so dominated
    candidates (no purer, no larger) never enter the pool.
    """
    n = len(values)
    if n < 2:
        raise ValueError("need at least two cases")
    _check_binary_response(y)
    ypos = y != 0

    pos_vals = values[ypos]
    neg_vals = values[~ypos]
    if pos_vals.min() > neg_vals.max():
        mid = (float(neg_vals.max()) + float(pos_vals.min())) / 2.0
        return SeparableSplit(column, name, mid, "ge")
    if neg_vals.min() > pos_vals.max():
        mid = (float(pos_vals.max()) + float(neg_vals.min())) / 2.0
        return SeparableSplit(column, name, mid, "le")

    distinct, inverse = np.unique(values, return_inverse=True)
    if len(distinct) < 2:
        return []
    counts = np.bincount(inverse, minlength=len(distinct))
    pos_counts = np.bincount(inverse, weights=ypos.astype(np.int64), minlength=len(distinct)).astype(np.int64)
    cum_cnt = np.cumsum(counts)
    cum_pos = np.cumsum(pos_counts)
    total_pos = int(cum_pos[-1])
    bin_size = cfg.resolved_bin_size(n)

    questions: list[Question] = []
    # ascending scan: ">= threshold" questions, yes side shrinking
    best_num, best_den = -1, 1
    emitted = 0
    for d in range(len(distinct) - 1):
        support = n - int(cum_cnt[d])
        if support < bin_size:
            break  # supports only shrink from here
        yes_pos = total_pos - int(cum_pos[d])
        if yes_pos * best_den > best_num * support:
            thr = (float(distinct[d]) + float(distinct[d + 1])) / 2.0
            questions.append(Question(column, name, "ge", threshold=thr, support=support))
            best_num, best_den = yes_pos, support
            emitted += 1
            if emitted >= cfg.nseg_numeric:
                break
    # descending scan: "<= threshold" questions, yes side shrinking
    best_num, best_den = -1, 1
    emitted = 0
    for d in range(len(distinct) - 2, -1, -1):
        support = int(cum_cnt[d])
        if support < bin_size:
            break
        yes_pos = int(cum_pos[d])
        if yes_pos * best_den > best_num * support:
            thr = (float(distinct[d]) + float(distinct[d + 1])) / 2.0
            questions.append(Question(column, name, "le", threshold=thr, support=support))
            best_num, best_den = yes_pos, support
            emitted += 1
            if emitted >= cfg.nseg_numeric:
                break
    return questions


def group_levels(
    levels: list[str],
    counts: dict[str, int],
    pos_counts: dict[str, int],
    max_groups: int,
) -> list[list[str]]:
    """Partition levels into at most max_groups by positive rate.

    Levels are ordered by (positive rate, token); the adjacent pair with
    the closest rates is merged repeatedly.  Deterministic: rate
    comparisons are exact cross-multiplications, ties pick the leftmost
    pair.
    """
    ordered = sorted(levels, key=lambda t: (Fraction(pos_counts[t], counts[t]), t))
    groups = [[t] for t in ordered]
    g_pos = [pos_counts[t] for t in ordered]
    g_cnt = [counts[t] for t in ordered]
    while len(groups) > max_groups:
        best_i = 0
        best_num = best_den = None
        for i in range(len(groups) - 1):
            # rate gap |p1/c1 - p2/c2| kept as an exact fraction
            num = abs(g_pos[i] * g_cnt[i + 1] - g_pos[i + 1] * g_cnt[i])
            den = g_cnt[i] * g_cnt[i + 1]
            if best_num is None or num * best_den < best_num * den:
                best_num, best_den = num, den
                best_i = i
        groups[best_i] = groups[best_i] + groups.pop(best_i + 1)
        g_pos[best_i] += g_pos.pop(best_i + 1)
        g_cnt[best_i] += g_cnt.pop(best_i + 1)
    return groups


def binarize_categorical(
    values: np.ndarray,
    y: np.ndarray,
    cfg: BinarizeConfig,
    column: int = 0,
    name: str = "x",
) -> list[Question]:
    """Membership questions for one categorical column.

    One dummy question per level when the level count is at or below
    cfg.categorical_dummy_threshold; above it, levels are value-grouped
    first and one question per group is emitted.
    """
    n = len(values)
    _check_binary_response(y)
    ypos = y != 0
    tokens = [str(v) for v in values]
    counts: dict[str, int] = {}
    pos_counts: dict[str, int] = {}
    for t, p in zip(tokens, ypos):
        counts[t] = counts.get(t, 0) + 1
        pos_counts[t] = pos_counts.get(t, 0) + int(p)
    levels = sorted(counts)
    if len(levels) < 2:
        raise ValueError("need at least two distinct levels")
    bin_size = cfg.resolved_bin_size(n)

    if len(levels) <= cfg.categorical_dummy_threshold:
        groups = [[t] for t in levels]
    else:
        groups = group_levels(levels, counts, pos_counts, cfg.categorical_dummy_threshold)

    questions = []
    for group in groups:
        support = sum(counts[t] for t in group)
        if support < bin_size or support > n - 1:
            continue
        questions.append(
            Question(column, name, "in", levels=frozenset(group), support=support)
        )
    return questions


def find_separable_column(
    d: Dataset, y: np.ndarray, rows: np.ndarray | None = None
) -> SeparableSplit | None:
    """First numeric column, in column order, that perfectly separates y."""
    if rows is None:
        rows = np.arange(d.n)
    ysub = y[rows]
    pos = int(np.count_nonzero(ysub))
    if pos == 0 or pos == len(rows):
        return None
    ypos = ysub != 0
    for ci, col in enumerate(d.columns):
        if col.kind != "numeric":
            continue
        vals = col.values[rows]
        pos_vals = vals[ypos]
        neg_vals = vals[~ypos]
        if pos_vals.min() > neg_vals.max():
            mid = (float(neg_vals.max()) + float(pos_vals.min())) / 2.0
            return SeparableSplit(ci, col.name, mid, "ge")
        if neg_vals.min() > pos_vals.max():
            mid = (float(pos_vals.max()) + float(neg_vals.min())) / 2.0
            return SeparableSplit(ci, col.name, mid, "le")
    return None


def build_matrix(d: Dataset, y: BinaryTarget, cfg: BinarizeConfig) -> BinaryMatrix:
    """Pool questions from every column and materialize the 0/1 matrix.

    Question order is column order, then emission order within a column.
    Columns of B that duplicate an earlier one are dropped (first kept);
    a perfectly separating numeric column contributes its separating
    threshold as an ordinary question (callers that want the fast path
    check find_separable_column before building a matrix).
    """
    if d.n < 1:
        raise ValueError("empty dataset")
    yvec = y.y
    collected: list[Question] = []
    for ci, col in enumerate(d.columns):
        if col.kind == "numeric":
            out = binarize_numeric(col.values, yvec, cfg, column=ci, name=col.name)
            if isinstance(out, SeparableSplit):
                yes = out.to_question(0).evaluate(col.values)
                collected.append(out.to_question(int(yes.sum())))
            else:
                collected.extend(out)
        else:
            if len(set(map(str, col.values))) < 2:
                continue
            collected.extend(binarize_categorical(col.values, yvec, cfg, column=ci, name=col.name))

    columns = []
    questions = []
    seen: dict[bytes, int] = {}
    for q in collected:
        vec = q.evaluate(d.columns[q.column].values)
        key = vec.tobytes()
        if key in seen:
            continue
        seen[key] = len(questions)
        support = int(vec.sum())
        questions.append(
            Question(q.column, q.name, q.op, threshold=q.threshold, levels=q.levels, support=support)
        )
        columns.append(vec)
    if not questions:
        raise ValueError("no candidate questions")
    B = np.stack(columns, axis=1).astype(np.uint8)
    return BinaryMatrix(B=B, questions=questions, y=y)
