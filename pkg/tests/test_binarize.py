"""Question-pool generation: frontier scans, grouping, matrix assembly."""

import numpy as np
import pytest

from orsplit.binarize import (
    BinarizeConfig,
    Question,
    SeparableSplit,
    binarize_categorical,
    binarize_numeric,
    build_matrix,
    find_separable_column,
    group_levels,
)
from orsplit.dataset import BinaryTarget, Column, Dataset, binarize_target

from _synth import random_dataset


def test_perfectly_separable_midpoint():
    out = binarize_numeric(
        np.array([1.0, 2.0, 3.0, 4.0]),
        np.array([0, 0, 1, 1], dtype=np.uint8),
        BinarizeConfig(bin_size=1),
    )
    assert isinstance(out, SeparableSplit)
    assert out.threshold == 2.5
    assert out.positive_op == "ge"


def test_perfectly_separable_positives_low():
    out = binarize_numeric(
        np.array([1.0, 2.0, 3.0, 4.0]),
        np.array([1, 1, 0, 0], dtype=np.uint8),
        BinarizeConfig(bin_size=1),
    )
    assert isinstance(out, SeparableSplit)
    assert out.positive_op == "le" and out.threshold == 2.5


def test_constant_column_yields_nothing():
    out = binarize_numeric(
        np.array([2.0, 2.0, 2.0, 2.0]),
        np.array([0, 1, 0, 1], dtype=np.uint8),
        BinarizeConfig(bin_size=1),
    )
    assert out == []


def test_frontier_scan_alternating_example():
    # values 1..6 with alternating classes: the ge frontier is exactly the
    # thresholds whose yes-side purity strictly improves as support shrinks
    values = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    y = np.array([0, 1, 0, 1, 0, 1], dtype=np.uint8)
    out = binarize_numeric(values, y, BinarizeConfig(bin_size=1, nseg_numeric=3))
    ge = [q for q in out if q.op == "ge"]
    assert [q.threshold for q in ge] == [1.5, 3.5, 5.5]
    assert [q.support for q in ge] == [5, 3, 1]
    # independent check by exhaustive threshold evaluation
    frontier = []
    best = -1.0
    for thr in (1.5, 2.5, 3.5, 4.5, 5.5):
        yes = values >= thr
        purity = y[yes].mean()
        if purity > best:
            frontier.append(thr)
            best = purity
    assert [q.threshold for q in ge] == frontier


def test_frontier_property_random():
    # per scan direction: smaller support implies strictly higher purity
    rng = np.random.default_rng(8)
    for _ in range(60):
        n = int(rng.integers(10, 120))
        values = np.round(rng.normal(size=n), 1)
        y = (rng.random(n) < 0.5).astype(np.uint8)
        if y.sum() in (0, n) or len(np.unique(values)) < 2:
            continue
        out = binarize_numeric(values, y, BinarizeConfig(bin_size=1, nseg_numeric=50))
        if isinstance(out, SeparableSplit):
            continue
        for op in ("ge", "le"):
            qs = [q for q in out if q.op == op]
            stats = []
            for q in qs:
                yes = values >= q.threshold if op == "ge" else values <= q.threshold
                assert int(yes.sum()) == q.support
                stats.append((q.support, y[yes].sum() / q.support))
            for (s1, p1), (s2, p2) in zip(stats, stats[1:]):
                assert s1 > s2 and p2 > p1


def test_supports_respect_bin_size_and_never_all_yes():
    rng = np.random.default_rng(18)
    for _ in range(40):
        n = int(rng.integers(10, 100))
        values = np.round(rng.normal(size=n), 1)
        y = (rng.random(n) < 0.4).astype(np.uint8)
        if y.sum() in (0, n) or len(np.unique(values)) < 2:
            continue
        cfg = BinarizeConfig(bin_size=int(rng.integers(1, 6)))
        out = binarize_numeric(values, y, cfg)
        if isinstance(out, SeparableSplit):
            continue
        for q in out:
            assert cfg.bin_size <= q.support <= n - 1


def test_nseg_caps_each_direction():
    values = np.arange(100, dtype=np.float64)
    rng = np.random.default_rng(1)
    y = (rng.random(100) < 0.5).astype(np.uint8)
    out = binarize_numeric(values, y, BinarizeConfig(bin_size=1, nseg_numeric=2))
    assert not isinstance(out, SeparableSplit)
    assert sum(q.op == "ge" for q in out) <= 2
    assert sum(q.op == "le" for q in out) <= 2


def test_categorical_dummies():
    values = np.array(["a", "b", "a", "b", "a"], dtype=object)
    y = np.array([1, 0, 1, 0, 0], dtype=np.uint8)
    out = binarize_categorical(values, y, BinarizeConfig(bin_size=1))
    assert {frozenset(q.levels) for q in out} == {frozenset({"a"}), frozenset({"b"})}


def test_categorical_support_filter():
    values = np.array(["a"] * 8 + ["b"] * 2, dtype=object)
    y = np.array([1, 0, 1, 0, 1, 0, 1, 0, 1, 0], dtype=np.uint8)
    out = binarize_categorical(values, y, BinarizeConfig(bin_size=5))
    assert [sorted(q.levels) for q in out] == [["a"]]


def test_categorical_single_level_rejected():
    values = np.array(["a", "a", "a"], dtype=object)
    y = np.array([1, 0, 1], dtype=np.uint8)
    with pytest.raises(ValueError, match="two distinct levels"):
        binarize_categorical(values, y, BinarizeConfig(bin_size=1))


def test_value_grouping_partitions_levels():
    rng = np.random.default_rng(30)
    n = 400
    levels = [f"tok{i:02d}" for i in range(40)]
    values = np.array([levels[int(rng.integers(0, 40))] for _ in range(n)], dtype=object)
    y = (rng.random(n) < 0.5).astype(np.uint8)
    cfg = BinarizeConfig(bin_size=1, categorical_dummy_threshold=30)
    out = binarize_categorical(values, y, cfg)
    assert len(out) <= 30
    seen = [t for q in out for t in q.levels]
    present = sorted(set(map(str, values)))
    assert sorted(seen) == present  # a partition: every level exactly once


def test_group_levels_merge_count_and_partition():
    counts = {f"l{i}": 10 for i in range(12)}
    pos = {f"l{i}": i % 5 for i in range(12)}
    groups = group_levels(list(counts), counts, pos, max_groups=4)
    assert len(groups) == 4
    flat = sorted(t for g in groups for t in g)
    assert flat == sorted(counts)


def test_build_matrix_single_binary_column():
    d = Dataset(
        [Column("f", "numeric", np.array([0.0, 1.0, 0.0, 1.0, 1.0]))],
        ["n", "y", "n", "y", "n"],
    )
    y = binarize_target(d, "y")
    bm = build_matrix(d, y, BinarizeConfig(bin_size=1))
    assert bm.m <= 2  # the indicator and possibly its complement
    np.testing.assert_array_equal(bm.B[:, 0], d.columns[0].values.astype(np.uint8))


def test_build_matrix_dedups_identical_columns():
    vals = np.array([1.0, 2.0, 3.0, 4.0, 2.5, 3.5])
    d = Dataset(
        [
            Column("a", "numeric", vals),
            Column("b", "numeric", vals * 10.0),  # same ordering: same indicators
        ],
        ["n", "n", "y", "y", "n", "y"],
    )
    y = binarize_target(d, "y")
    bm = build_matrix(d, y, BinarizeConfig(bin_size=1))
    cols = {bm.B[:, k].tobytes() for k in range(bm.m)}
    assert len(cols) == bm.m  # no duplicate columns survive
    assert all(q.name == "a" for q in bm.questions)  # first occurrence kept


def test_build_matrix_column_sums_match_supports():
    rng = np.random.default_rng(55)
    for _ in range(20):
        d = random_dataset(rng)
        y = binarize_target(d, "yes")
        try:
            bm = build_matrix(d, y, BinarizeConfig(bin_size=1))
        except ValueError:
            continue
        sums = bm.B.sum(axis=0)
        for k, q in enumerate(bm.questions):
            assert int(sums[k]) == q.support
            assert 1 <= q.support <= d.n - 1


def test_build_matrix_empty_pool_errors():
    d = Dataset(
        [Column("c", "categorical", np.array(["a", "a", "a"], dtype=object))],
        ["y", "n", "y"],
    )
    y = binarize_target(d, "y")
    with pytest.raises(ValueError, match="no candidate questions"):
        build_matrix(d, y, BinarizeConfig(bin_size=1))


def test_find_separable_column():
    d = Dataset(
        [
            Column("noise", "categorical", np.array(["u", "v", "u", "v"], dtype=object)),
            Column("sig", "numeric", np.array([5.0, 6.0, 1.0, 2.0])),
        ],
        ["y", "y", "n", "n"],
    )
    y = binarize_target(d, "y")
    sep = find_separable_column(d, y.y)
    assert sep is not None and sep.column == 1
    assert sep.threshold == 3.5 and sep.positive_op == "ge"
    sub = find_separable_column(d, y.y, rows=np.array([0, 2]))
    assert sub is not None


def test_question_labels_and_matches():
    q = Question(0, "age", "ge", threshold=35.5, support=3)
    assert q.label() == "age>=35.5"
    assert q.matches(35.5) and q.matches("40") and not q.matches(35.4)
    qin = Question(1, "color", "in", levels=frozenset({"red", "blue"}), support=2)
    assert qin.label() == "color in {blue|red}"
    assert qin.matches("red") and not qin.matches("green")
