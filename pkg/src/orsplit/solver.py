"""Exact OR-clause split selection.

``enum_solve`` runs a breadth-first implicit enumeration over question
subsets with bound-based pruning; ``brute_force_solve`` is the
deliberately naive oracle used to verify it.  Both return the feasible
rule with the smallest objective, preferring fewer questions and then the
lexicographically smallest index tuple among ties.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from orsplit import _kernel
from orsplit.splitcore import NodeStats, SplitEval, make_split_eval

EVAL_SATURATION = 1 << 63

BRUTE_FORCE_CAP = 10**6


@dataclass(frozen=True)
class SolverConfig:
    """Regulation knobs for split selection.

    min_node_size = 0 resolves dynamically to max(1, floor(sqrt(n))) of
    the node being split (see resolve_min_node_size for the alternative
    fourth-root policy).  no_same_gender_children vetoes candidates whose
    two children would carry the same majority class.
    """

    max_rules: int = 2
    min_node_size: int = 0
    no_same_gender_children: bool = False
    time_limit: float | None = None
    node_budget: int | None = None

    def __post_init__(self) -> None:
        if self.max_rules < 1:
            raise ValueError("max_rules must be >= 1")
        if self.min_node_size < 0:
            raise ValueError("min_node_size must be >= 0")


@dataclass(frozen=True)
class SolveResult:
    best: tuple[int, ...] | None
    best_eval: SplitEval | None
    evaluations: int
    optimal: bool
    feasible: bool


def resolve_min_node_size(configured: int, n: int, policy: str = "sqrt") -> int:
    """Resolve the dynamic (0) setting against the node's case count."""
    if configured > 0:
        return configured
    if policy == "sqrt":
        return max(1, math.isqrt(n))
    if policy == "fourth-root":
        return max(1, math.isqrt(math.isqrt(n)))
    raise ValueError(f"unknown node size policy {policy!r}")


def worst_case_evals(m: int, max_rules: int) -> int:
    """Total candidate count sum_{i=1..max_rules} C(m, i).

    This is the number of objective evaluations an unpruned search
    performs.  Saturates at 2**63 rather than overflowing the report.
    """
    if max_rules > m:
        raise ValueError("max_rules exceeds the question count")
    if max_rules < 1:
        raise ValueError("max_rules must be >= 1")
    total = sum(math.comb(m, i) for i in range(1, max_rules + 1))
    return min(total, EVAL_SATURATION)


def _check_instance(B: np.ndarray, y: np.ndarray) -> tuple[int, int, NodeStats]:
    if B.ndim != 2:
        raise ValueError("B must be a 2-d 0/1 matrix")
    n, m = B.shape
    if m < 1:
        raise ValueError("empty question pool")
    if y.shape != (n,):
        raise ValueError("response length does not match B")
    pos = int(np.count_nonzero(y))
    if pos == 0 or pos == n:
        raise ValueError("both classes must be present to optimize a split")
    return n, m, NodeStats(pos, n - pos)


def enum_solve(B: np.ndarray, y: np.ndarray, cfg: SolverConfig) -> SolveResult:
    """Find the exact-optimal OR-clause split of up to max_rules questions.

    B is the n-by-m 0/1 question matrix, y the 0/1 response vector.  The
    search is breadth first, so when stopped early by time_limit or
    node_budget the result is still the optimum over everything evaluated
    (optimal=False marks the truncation).  feasible=False means no
    candidate satisfied the regulation constraints; the caller should
    keep the node as a leaf.
    """
    n, m, stats = _check_instance(B, y)
    mns = resolve_min_node_size(cfg.min_node_size, n)
    Bc = np.ascontiguousarray(B, dtype=np.uint8)
    yc = np.ascontiguousarray(y, dtype=np.uint8)
    best, counts, evaluations, truncated = _kernel.enum_search(
        Bc,
        yc,
        cfg.max_rules,
        mns,
        cfg.no_same_gender_children,
        -1 if cfg.node_budget is None else cfg.node_budget,
        0.0 if cfg.time_limit is None else cfg.time_limit,
    )
    best_eval = None
    if best is not None:
        tp, fp, z_sum, nu = counts
        best_eval = make_split_eval(stats, tp, fp, z_sum)
        if best_eval.nu != nu:
            raise AssertionError("kernel objective disagrees with count algebra")
    return SolveResult(
        best=best,
        best_eval=best_eval,
        evaluations=int(evaluations),
        optimal=not truncated,
        feasible=best is not None,
    )


def brute_force_solve(
    B: np.ndarray,
    y: np.ndarray,
    cfg: SolverConfig,
    cap: int = BRUTE_FORCE_CAP,
) -> SolveResult:
    """Exhaustive oracle: evaluate every rule set of size 1..max_rules.

    No pruning or skipping of any kind, so evaluations always equals
    worst_case_evals(m, max_rules); feasibility filters and tie-breaking
    match enum_solve.  Refuses instances whose candidate count exceeds
    ``cap``.
    """
    n, m, stats = _check_instance(B, y)
    levels = min(cfg.max_rules, m)
    total = worst_case_evals(m, levels)
    if total > cap:
        raise ValueError(f"{total} candidates exceed the brute-force cap {cap}")
    mns = resolve_min_node_size(cfg.min_node_size, n)
    gender_rhs = max(0, 2 * stats.pos - n)
    Bb = B.astype(bool)
    ypos = y.astype(bool)
    pos, neg = stats.pos, stats.neg

    best: tuple[int, ...] | None = None
    best_nu = None
    best_counts = None
    evaluations = 0
    for size in range(1, levels + 1):
        for S in itertools.combinations(range(m), size):
            z = Bb[:, S].any(axis=1)
            z_sum = int(z.sum())
            tp = int((z & ypos).sum())
            fp = z_sum - tp
            fn = pos - tp
            nu = pos * fp + neg * fn - 2 * fn * fp
            evaluations += 1
            if z_sum < mns or n - z_sum < mns:
                continue
            if cfg.no_same_gender_children and tp - fp < gender_rhs:
                continue
            if best_nu is None or nu < best_nu:
                best_nu = nu
                best = S
                best_counts = (tp, fp, z_sum)
    best_eval = None
    if best is not None:
        tp, fp, z_sum = best_counts
        best_eval = make_split_eval(stats, tp, fp, z_sum)
    return SolveResult(
        best=best,
        best_eval=best_eval,
        evaluations=evaluations,
        optimal=True,
        feasible=best is not None,
    )
