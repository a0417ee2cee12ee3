"""Writes split-selection instances as solver-agnostic LP-format text.

Any external MIP solver that reads LP files can then independently
verify the search's optimum.  Variables: w<k> (binary, question k
selected), z<i> (continuous in the unit box, case i classified yes),
t<i>_<j> (free, one per positive/negative case pair, gini model only).
All indices are 1-based row/column numbers; all coefficients are printed
as plain integers so the files are byte-stable across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from orsplit.solver import SolverConfig, resolve_min_node_size

THETA_CAP = 1_000_000

_TERMS_PER_LINE = 8


@dataclass(frozen=True)
class LpSummary:
    binary_vars: int
    z_vars: int
    theta_vars: int
    constraints: int

    @property
    def vars(self) -> int:
        return self.binary_vars + self.z_vars + self.theta_vars


def _wrap(parts: list[str], head: str) -> str:
    lines = []
    cur = head
    for i, p in enumerate(parts):
        cur += " " + p
        if (i + 1) % _TERMS_PER_LINE == 0 and i + 1 < len(parts):
            lines.append(cur)
            cur = "      "
    lines.append(cur)
    return "\n".join(lines)


def _term(coef: int, name: str, first: bool) -> str:
    if coef < 0:
        return f"- {-coef} {name}"
    if first:
        return f"{coef} {name}"
    return f"+ {coef} {name}"


def _expr(terms: list[tuple[int, str]], constant: int = 0) -> list[str]:
    parts = []
    for i, (coef, name) in enumerate(terms):
        parts.append(_term(coef, name, first=(i == 0)))
    if constant:
        parts.append(f"+ {constant}" if constant > 0 else f"- {-constant}")
    return parts


def _validate(B: np.ndarray, y: np.ndarray) -> tuple[int, int, list[int], list[int]]:
    n, m = B.shape
    pos_rows = [i for i in range(n) if y[i]]
    neg_rows = [i for i in range(n) if not y[i]]
    if not pos_rows or not neg_rows:
        raise ValueError("both classes must be present")
    return n, m, pos_rows, neg_rows


def _write_instance(
    B: np.ndarray,
    y: np.ndarray,
    cfg: SolverConfig,
    path: str,
    *,
    with_theta: bool,
    max_theta: int,
) -> LpSummary:
    n, m, pos_rows, neg_rows = _validate(B, y)
    P, N = len(pos_rows), len(neg_rows)
    n_theta = P * N if with_theta else 0
    if with_theta and n_theta > max_theta:
        raise ValueError(
            f"instance needs {P * N} pairwise variables, exceeding the cap {max_theta}"
        )
    mns = resolve_min_node_size(cfg.min_node_size, n)
    gender_rhs = max(0, 2 * P - n)

    out = []
    kind = "gini" if with_theta else "error"
    out.append(f"\\ OR-clause split selection, {kind} objective")
    out.append(f"\\ rows={n} positives={P} negatives={N} questions={m}")
    out.append("Minimize")

    obj: list[tuple[int, str]] = []
    for i in pos_rows:
        obj.append((-N, f"z{i + 1}"))
    for j in neg_rows:
        obj.append((P, f"z{j + 1}"))
    if with_theta:
        for i in pos_rows:
            for j in neg_rows:
                obj.append((-2, f"t{i + 1}_{j + 1}"))
    # constant makes the optimum equal the split objective directly
    out.append(_wrap(_expr(obj, constant=P * N), " obj:"))

    out.append("Subject To")
    n_cons = 0
    for i in range(n):
        for k in range(m):
            if B[i, k]:
                out.append(f" imp_{i + 1}_{k + 1}: w{k + 1} - z{i + 1} <= 0")
                n_cons += 1
    for i in range(n):
        terms = [(1, f"w{k + 1}") for k in range(m) if B[i, k]]
        terms.append((-1, f"z{i + 1}"))
        out.append(_wrap(_expr(terms) + [">= 0"], f" cov_{i + 1}:"))
        n_cons += 1
    if with_theta:
        for i in pos_rows:
            for j in neg_rows:
                out.append(f" tha_{i + 1}_{j + 1}: t{i + 1}_{j + 1} + z{i + 1} <= 1")
                out.append(f" thb_{i + 1}_{j + 1}: t{i + 1}_{j + 1} - z{j + 1} <= 0")
                n_cons += 2
    rule_terms = [(1, f"w{k + 1}") for k in range(m)]
    out.append(_wrap(_expr(rule_terms) + [f"<= {cfg.max_rules}"], " rules:"))
    n_cons += 1
    z_terms = [(1, f"z{i + 1}") for i in range(n)]
    out.append(_wrap(_expr(z_terms) + [f">= {mns}"], " minyes:"))
    out.append(_wrap(_expr(z_terms) + [f"<= {n - mns}"], " minno:"))
    n_cons += 2
    if cfg.no_same_gender_children:
        gt = [(1, f"z{i + 1}") for i in pos_rows] + [(-1, f"z{j + 1}") for j in neg_rows]
        out.append(_wrap(_expr(gt) + [f">= {gender_rhs}"], " diffmaj:"))
        n_cons += 1

    out.append("Bounds")
    # the unit box on z reduces to an upper bound on positive rows and the
    # default lower bound elsewhere; integrality of z is implied, not declared
    for i in pos_rows:
        out.append(f" z{i + 1} <= 1")
    if with_theta:
        for i in pos_rows:
            for j in neg_rows:
                out.append(f" t{i + 1}_{j + 1} free")

    out.append("Binary")
    for k in range(m):
        out.append(f" w{k + 1}")
    out.append("End")

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return LpSummary(binary_vars=m, z_vars=n, theta_vars=n_theta, constraints=n_cons)


def write_gini_lp(
    B: np.ndarray,
    y: np.ndarray,
    cfg: SolverConfig,
    path: str,
    *,
    max_theta: int = THETA_CAP,
) -> LpSummary:
    """Gini-reduction model: the LP optimum equals the split objective nu."""
    return _write_instance(B, y, cfg, path, with_theta=True, max_theta=max_theta)


def write_error_lp(B: np.ndarray, y: np.ndarray, cfg: SolverConfig, path: str) -> LpSummary:
    """Misclassification model: optimum equals P*fp + N*fn of the best rule."""
    return _write_instance(B, y, cfg, path, with_theta=False, max_theta=0)
