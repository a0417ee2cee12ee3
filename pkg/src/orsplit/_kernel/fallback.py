"""Pure-Python search kernel.

Question columns are packed into arbitrary-precision integers so the OR
of a candidate rule and its population counts are single big-int
operations (`|`, `&`, `int.bit_count`).  The compiled kernel mirrors this
module operation for operation; any behavioural difference between the
two is a bug (see tests/test_kernel_parity.py).
"""

from __future__ import annotations

import time

import numpy as np

# sentinel "no incumbent yet"; real objectives are < n^2
NU_INF = 1 << 62

TIME_CHECK_MASK = 0x3FF  # poll the clock every 1024 evaluations


def pack_columns(B: np.ndarray) -> list[int]:
    """Pack each 0/1 column of B into an int whose bit i is row i."""
    n = B.shape[0]
    cols = []
    for k in range(B.shape[1]):
        raw = np.packbits(np.ascontiguousarray(B[:, k]), bitorder="little")
        cols.append(int.from_bytes(raw.tobytes(), "little"))
    return cols


def pack_vector(y: np.ndarray) -> int:
    raw = np.packbits(np.ascontiguousarray(y), bitorder="little")
    return int.from_bytes(raw.tobytes(), "little")


def enum_search(
    B: np.ndarray,
    y: np.ndarray,
    max_rules: int,
    min_node_size: int,
    same_gender_veto: bool,
    node_budget: int,
    time_limit: float,
):
    """Breadth-first implicit enumeration over question subsets.

    Arguments are already validated/resolved by the caller: B is (n, m)
    uint8, y (n,) uint8 with both classes present, min_node_size >= 0,
    node_budget < 0 meaning unlimited, time_limit <= 0 meaning unlimited.

    Returns ``(best_indices, best_counts, evaluations, truncated)`` where
    best_indices is a tuple (or None when no feasible candidate exists)
    and best_counts is ``(tp, fp, z_sum, nu)``.

    Search order: all single-question rules in index order, then pairs
    branched from each survivor by appending a strictly larger index, and
    so on level by level.  The incumbent only updates on strict
    improvement, so the first optimum met in this order wins, which makes
    the returned rule the fewest-clause, lexicographically-smallest one.

    A frontier entry stops being expanded when
      * its bound tau is >= the incumbent objective (no superset can
        strictly beat it, and equal-value supersets lose the tie-break), or
      * its no-side population n - z_sum is already below min_node_size
        (growing the rule only shrinks the no side further).
    Candidates violating min-node-size or the differing-majority veto are
    skipped as incumbents but still count as evaluated and may still be
    expanded, since supersets can regain yes-side feasibility.
    """
    n, m = B.shape
    pos = int(np.count_nonzero(y))
    neg = n - pos
    cols = pack_columns(B)
    ymask = pack_vector(y)
    mns = min_node_size
    gender_rhs = max(0, 2 * pos - n)
    deadline = time.monotonic() + time_limit if time_limit > 0 else None

    nu_best = NU_INF
    best_idx = None
    best_counts = None
    evals = 0
    truncated = False

    levels = min(max_rules, m)

    frontier: list[tuple[tuple[int, ...], int, int]] = []  # (indices, tau, z_sum)
    for k in range(m):
        if node_budget >= 0 and evals >= node_budget:
            truncated = True
            break
        if deadline is not None and (evals & TIME_CHECK_MASK) == 0 and time.monotonic() > deadline:
            truncated = True
            break
        z = cols[k]
        z_sum = z.bit_count()
        tp = (z & ymask).bit_count()
        fp = z_sum - tp
        fn = pos - tp
        nu = pos * fp + neg * fn - 2 * fn * fp
        if 2 * fn < pos:
            tau = nu if 2 * fp > neg else pos * fp
        else:
            tau = neg * (pos - fn) if 2 * fp > neg else 0
        evals += 1
        if (
            z_sum >= mns
            and n - z_sum >= mns
            and (not same_gender_veto or tp - fp >= gender_rhs)
            and nu < nu_best
        ):
            nu_best = nu
            best_idx = (k,)
            best_counts = (tp, fp, z_sum, nu)
        frontier.append(((k,), tau, z_sum))

    level = 1
    while level < levels and frontier and not truncated:
        store_children = level + 1 < levels
        nxt: list[tuple[tuple[int, ...], int, int]] = []
        for idx, tau, z_sum in frontier:
            if n - z_sum < mns:
                continue
            if tau >= nu_best:
                continue
            z = cols[idx[0]]
            for j in idx[1:]:
                z |= cols[j]
            for k in range(idx[-1] + 1, m):
                if node_budget >= 0 and evals >= node_budget:
                    truncated = True
                    break
                if (
                    deadline is not None
                    and (evals & TIME_CHECK_MASK) == 0
                    and time.monotonic() > deadline
                ):
                    truncated = True
                    break
                z2 = z | cols[k]
                zs2 = z2.bit_count()
                tp = (z2 & ymask).bit_count()
                fp = zs2 - tp
                fn = pos - tp
                nu = pos * fp + neg * fn - 2 * fn * fp
                if 2 * fn < pos:
                    tau2 = nu if 2 * fp > neg else pos * fp
                else:
                    tau2 = neg * (pos - fn) if 2 * fp > neg else 0
                evals += 1
                if (
                    zs2 >= mns
                    and n - zs2 >= mns
                    and (not same_gender_veto or tp - fp >= gender_rhs)
                    and nu < nu_best
                ):
                    nu_best = nu
                    best_idx = idx + (k,)
                    best_counts = (tp, fp, zs2, nu)
                if store_children:
                    nxt.append((idx + (k,), tau2, zs2))
            if truncated:
                break
        frontier = nxt
        level += 1

    return best_idx, best_counts, evals, truncated
