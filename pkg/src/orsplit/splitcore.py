"""Count algebra for evaluating OR-clause split rules.

A split rule is a set of question indices; a case goes to the yes child
when any selected question answers yes.  Everything here is exact integer
arithmetic except ``gini``/``delta_gini``, which are the only floating
point quantities in the library.  Keeping the objective and its lower
bound integral is what makes search pruning comparisons safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class NodeStats:
    """Class composition of a tree node: positive and negative case counts."""

    pos: int
    neg: int

    def __post_init__(self) -> None:
        if self.pos < 0 or self.neg < 0 or self.pos + self.neg < 1:
            raise ValueError(f"invalid node stats ({self.pos}, {self.neg})")

    @property
    def total(self) -> int:
        return self.pos + self.neg


@dataclass(frozen=True)
class SplitEval:
    """Confusion counts and objective values of one candidate rule.

    ``nu`` is the split objective pos*fp + neg*fn - 2*fn*fp; minimizing it
    maximizes the Gini reduction.  ``tau`` is a lower bound on ``nu`` over
    every superset of the rule, used for search pruning.
    """

    tp: int
    fp: int
    tn: int
    fn: int
    nu: int
    tau: int
    z_sum: int

    @property
    def misclassified(self) -> int:
        return self.fp + self.fn


def gini(stats: NodeStats) -> float:
    """Binary Gini impurity 2*P*N/(P+N)^2, in [0, 0.5]."""
    t = stats.total
    return 2.0 * stats.pos * stats.neg / (t * t)


def tau_bound(stats: NodeStats, fp: int, fn: int) -> int:
    """Lower bound on ``nu`` over all supersets of the evaluated rule.

    Enlarging a rule set can only grow the yes side, so fp never decreases
    and fn never increases.  Four cases on (fn vs P/2, fp vs N/2) give the
    strongest bound derivable from the current counts alone; the last case
    carries no information beyond nonnegativity.
    """
    pos, neg = stats.pos, stats.neg
    if not (0 <= fn <= pos and 0 <= fp <= neg):
        raise ValueError(f"counts out of range: fp={fp}, fn={fn}")
    if 2 * fn < pos:
        if 2 * fp > neg:
            return pos * fp + neg * fn - 2 * fn * fp
        return pos * fp
    if 2 * fp > neg:
        return neg * (pos - fn)
    return 0


def make_split_eval(stats: NodeStats, tp: int, fp: int, z_sum: int) -> SplitEval:
    """Assemble a SplitEval from the counts a rule evaluation produces."""
    fn = stats.pos - tp
    tn = stats.neg - fp
    nu = stats.pos * fp + stats.neg * fn - 2 * fn * fp
    return SplitEval(
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        nu=nu,
        tau=tau_bound(stats, fp, fn),
        z_sum=z_sum,
    )


def eval_ruleset(B: np.ndarray, y: np.ndarray, indices: Iterable[int]) -> SplitEval:
    """Evaluate the OR-clause over question columns ``indices`` of B.

    B is the n-by-m 0/1 question matrix, y the 0/1 response.  This is the
    plain-numpy reference path; the search kernels reimplement the same
    counts over packed bitsets.
    """
    idx = sorted(set(int(k) for k in indices))
    if not idx:
        raise ValueError("empty rule set; the caller owns the no-split baseline")
    n, m = B.shape
    if idx[0] < 0 or idx[-1] >= m:
        raise IndexError(f"question index out of range 0..{m - 1}")
    z = B[:, idx].any(axis=1)
    ypos = y != 0
    pos = int(ypos.sum())
    stats = NodeStats(pos, n - pos)
    tp = int((z & ypos).sum())
    z_sum = int(z.sum())
    return make_split_eval(stats, tp, z_sum - tp, z_sum)


def delta_gini(stats: NodeStats, ev: SplitEval) -> float:
    """Gini reduction of the split: parent impurity minus the children's,
    each child weighted by its squared case proportion.

    Algebraically equal to (2*P*N - 2*nu)/(P+N)^2; both children must be
    populated or the quantity is undefined.
    """
    left = ev.tp + ev.fp
    right = ev.tn + ev.fn
    if left == 0 or right == 0:
        raise ValueError("degenerate split: empty child node")
    t = stats.total
    return (2.0 * stats.pos * stats.neg - 2.0 * (ev.tp * ev.fp + ev.tn * ev.fn)) / (t * t)


def error_objective(ev: SplitEval) -> int:
    """Misclassified-case count fp + fn of the split."""
    return ev.fp + ev.fn


def error_objective_raw(stats: NodeStats, ev: SplitEval) -> int:
    """Raw pairwise error objective P*fp + N*fn.

    This is the value an error-minimizing model reports; it shares its
    minimizers with fp + fn weighted by class sizes, and is what the LP
    export of the error model evaluates to at integral points.
    """
    return stats.pos * ev.fp + stats.neg * ev.fn
