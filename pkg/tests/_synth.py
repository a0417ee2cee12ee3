"""Synthetic data shared across the test suite.

Includes the tic-tac-toe endgame instance rebuilt from the game rules:
the 958 distinct terminal board positions with first player x, one-hot
encoded per cell.  Row/column order differs from published copies, but
the split objective and full-enumeration counts are order-invariant.
"""

from __future__ import annotations

import numpy as np

from orsplit.dataset import Column, Dataset

_TTT_LINES = [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6)]


def _winner(b: str) -> str | None:
    for i, j, k in _TTT_LINES:
        if b[i] != " " and b[i] == b[j] == b[k]:
            return b[i]
    return None


def tictactoe_boards() -> list[str]:
    """All distinct terminal positions of tic-tac-toe, x moving first."""
    terminals: set[str] = set()

    def play(b: list[str], turn: str) -> None:
        if _winner("".join(b)) is not None or " " not in b:
            terminals.add("".join(b))
            return
        nxt = "o" if turn == "x" else "x"
        for i in range(9):
            if b[i] == " ":
                b[i] = turn
                play(b, nxt)
                b[i] = " "

    play([" "] * 9, "x")
    return sorted(terminals)


def tictactoe_instance() -> tuple[np.ndarray, np.ndarray]:
    """One-hot binary instance: 27 features (9 cells x {x,o,blank})."""
    boards = tictactoe_boards()
    y = np.array([1 if _winner(b) == "x" else 0 for b in boards], dtype=np.uint8)
    cols = [
        np.array([1 if b[cell] == val else 0 for b in boards], dtype=np.uint8)
        for cell in range(9)
        for val in "xo "
    ]
    return np.stack(cols, axis=1), y


def tictactoe_dataset() -> Dataset:
    """The same boards as 9 categorical input columns (x/o/b tokens)."""
    boards = tictactoe_boards()
    columns = []
    for cell in range(9):
        tokens = np.array(["b" if b[cell] == " " else b[cell] for b in boards], dtype=object)
        columns.append(Column(f"cell{cell + 1}", "categorical", tokens))
    target = ["positive" if _winner(b) == "x" else "negative" for b in boards]
    return Dataset(columns, target, target_name="outcome")


# ---------------------------------------------------------------------------
# 2-d pattern datasets (x/y coordinates in the unit square)

PATTERN_NAMES = ["grid", "obli", "diam", "circ", "ring", "sh88"]


def _pattern_label(name: str, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if name == "grid":
        return (x > 0.5) ^ (y > 0.5)
    if name == "obli":
        return x + y > 1.0
    if name == "diam":
        return np.abs(x - 0.5) + np.abs(y - 0.5) < 0.5
    if name == "circ":
        return (x - 0.5) ** 2 + (y - 0.5) ** 2 < 1.0 / (2.0 * np.pi)
    if name == "ring":
        d2 = (x - 0.5) ** 2 + (y - 0.5) ** 2
        return (d2 > 0.04) & (d2 < 0.04 + 1.0 / (2.0 * np.pi))
    if name == "sh88":
        d2a = (x - 0.3) ** 2 + (y - 0.5) ** 2
        d2b = (x - 0.7) ** 2 + (y - 0.5) ** 2
        band = 1.0 / (4.0 * np.pi)
        return ((d2a > 0.0064) & (d2a < 0.0064 + band)) | ((d2b > 0.0064) & (d2b < 0.0064 + band))
    raise ValueError(f"unknown pattern {name!r}")


def make_pattern(name: str, n: int = 600, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    x = rng.random(n)
    y = rng.random(n)
    lab = _pattern_label(name, x, y)
    # guarantee two classes even for tiny n
    if lab.all() or not lab.any():
        lab[0] = not lab[0]
    columns = [Column("x", "numeric", x), Column("y", "numeric", y)]
    target = ["pos" if v else "neg" for v in lab]
    return Dataset(columns, target, target_name="label")


# ---------------------------------------------------------------------------
# randomized generators

def random_instance(rng: np.random.Generator, n_lo=10, n_hi=80, m_lo=3, m_hi=12):
    """Random 0/1 question matrix + response with both classes present."""
    n = int(rng.integers(n_lo, n_hi + 1))
    m = int(rng.integers(m_lo, m_hi + 1))
    density = rng.uniform(0.1, 0.9, size=m)
    B = (rng.random((n, m)) < density).astype(np.uint8)
    if m >= 4 and rng.random() < 0.4:  # correlated / duplicate columns
        B[:, int(rng.integers(0, m))] = B[:, int(rng.integers(0, m))]
    y = (rng.random(n) < rng.uniform(0.15, 0.85)).astype(np.uint8)
    if y.sum() == 0:
        y[int(rng.integers(0, n))] = 1
    if y.sum() == n:
        y[int(rng.integers(0, n))] = 0
    return B, y


def random_dataset(rng: np.random.Generator, n_lo=30, n_hi=150) -> Dataset:
    """Random mixed-column dataset with a learnable (noisy) signal."""
    n = int(rng.integers(n_lo, n_hi + 1))
    n_num = int(rng.integers(1, 4))
    n_cat = int(rng.integers(0, 3))
    columns = []
    score = np.zeros(n)
    for i in range(n_num):
        vals = rng.normal(size=n)
        columns.append(Column(f"x{i}", "numeric", vals))
        score += rng.uniform(-1, 1) * vals
    for i in range(n_cat):
        k = int(rng.integers(2, 5))
        toks = rng.integers(0, k, size=n)
        columns.append(
            Column(f"c{i}", "categorical", np.array([f"v{t}" for t in toks], dtype=object))
        )
        score += rng.uniform(-1, 1) * (toks == 0)
    score += rng.normal(scale=0.5, size=n)
    lab = score > np.median(score)
    if lab.all() or not lab.any():
        lab[0] = not lab[0]
    target = ["yes" if v else "no" for v in lab]
    return Dataset(columns, target, target_name="cls")
