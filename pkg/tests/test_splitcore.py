"""Count algebra: impurity, objective, bound, and their identities."""

import numpy as np
import pytest

from orsplit.splitcore import (
    NodeStats,
    delta_gini,
    error_objective,
    error_objective_raw,
    eval_ruleset,
    gini,
    make_split_eval,
    tau_bound,
)

from _synth import random_instance


def test_gini_pure_node():
    assert gini(NodeStats(5, 0)) == 0.0


def test_gini_balanced_node():
    assert gini(NodeStats(3, 3)) == 0.5


def test_gini_printed_tree_root():
    # 2*322*167/489^2 from the worked two-class example
    assert gini(NodeStats(322, 167)) == 107548 / 239121
    assert gini(NodeStats(322, 167)) == pytest.approx(0.44976, abs=1e-5)


def test_gini_symmetry():
    assert gini(NodeStats(7, 13)) == gini(NodeStats(13, 7))


def test_node_stats_validation():
    with pytest.raises(ValueError):
        NodeStats(0, 0)
    with pytest.raises(ValueError):
        NodeStats(-1, 5)


# three positives / three negatives, two classic ways to split them:
# pure-but-tiny left child versus balanced children
def _toy_eval(tp, fp):
    return make_split_eval(NodeStats(3, 3), tp=tp, fp=fp, z_sum=tp + fp)


def test_eval_toy_left_split():
    ev = _toy_eval(tp=1, fp=0)  # left child holds one positive
    assert (ev.fp, ev.fn) == (0, 2)
    assert ev.nu == 6


def test_eval_toy_right_split():
    ev = _toy_eval(tp=2, fp=1)  # balanced children, strictly better
    assert (ev.fp, ev.fn) == (1, 1)
    assert ev.nu == 4


def test_eval_toy_error_count_ties():
    # both toy splits misclassify two cases: indistinguishable by error count
    a, b = _toy_eval(1, 0), _toy_eval(2, 1)
    assert error_objective(a) == error_objective(b) == 2
    assert error_objective_raw(NodeStats(3, 3), a) == error_objective_raw(NodeStats(3, 3), b) == 6


def test_eval_all_negative_rule():
    stats = NodeStats(4, 6)
    ev = make_split_eval(stats, tp=0, fp=0, z_sum=0)
    assert ev.fp == 0 and ev.fn == 4
    assert ev.nu == stats.neg * stats.pos


def test_eval_ruleset_matches_counts():
    B = np.array([[1, 0], [1, 1], [0, 0], [0, 1]], dtype=np.uint8)
    y = np.array([1, 1, 0, 0], dtype=np.uint8)
    ev = eval_ruleset(B, y, [0])
    assert (ev.tp, ev.fp, ev.tn, ev.fn) == (2, 0, 2, 0)
    assert ev.nu == 0 and ev.z_sum == 2
    ev2 = eval_ruleset(B, y, [0, 1])
    assert (ev2.tp, ev2.fp) == (2, 1)


def test_eval_ruleset_rejects_empty_and_out_of_range():
    B = np.eye(3, dtype=np.uint8)
    y = np.array([1, 0, 1], dtype=np.uint8)
    with pytest.raises(ValueError):
        eval_ruleset(B, y, [])
    with pytest.raises(IndexError):
        eval_ruleset(B, y, [5])


def test_tau_case_one_is_nu():
    stats = NodeStats(10, 10)
    assert tau_bound(stats, fp=7, fn=3) == 10 * 7 + 10 * 3 - 2 * 3 * 7 == 58


def test_tau_case_two():
    assert tau_bound(NodeStats(10, 10), fp=4, fn=3) == 40


def test_tau_case_three():
    assert tau_bound(NodeStats(10, 10), fp=7, fn=6) == 10 * (10 - 6)


def test_tau_case_four_trivial():
    assert tau_bound(NodeStats(10, 10), fp=3, fn=6) == 0


def test_tau_never_exceeds_nu_exhaustive():
    for pos in range(1, 9):
        for neg in range(1, 9):
            stats = NodeStats(pos, neg)
            for tp in range(pos + 1):
                for fp in range(neg + 1):
                    ev = make_split_eval(stats, tp, fp, tp + fp)
                    assert ev.tau <= ev.nu


def test_delta_gini_pure_split_of_balanced_parent():
    stats = NodeStats(6, 6)
    ev = make_split_eval(stats, tp=6, fp=0, z_sum=6)
    assert delta_gini(stats, ev) == pytest.approx(0.5)


def test_delta_gini_toy_value():
    stats = NodeStats(3, 3)
    ev = make_split_eval(stats, tp=2, fp=1, z_sum=3)
    assert delta_gini(stats, ev) == pytest.approx(10.0 / 36.0)


def test_delta_gini_degenerate_child_errors():
    stats = NodeStats(3, 3)
    ev = make_split_eval(stats, tp=3, fp=3, z_sum=6)
    with pytest.raises(ValueError, match="degenerate"):
        delta_gini(stats, ev)


def test_delta_gini_closed_form_equals_three_term_form():
    rng = np.random.default_rng(42)
    for _ in range(300):
        pos = int(rng.integers(1, 40))
        neg = int(rng.integers(1, 40))
        tp = int(rng.integers(0, pos + 1))
        fp = int(rng.integers(0, neg + 1))
        if tp + fp == 0 or tp + fp == pos + neg:
            continue
        stats = NodeStats(pos, neg)
        ev = make_split_eval(stats, tp, fp, tp + fp)
        left, right = ev.tp + ev.fp, ev.tn + ev.fn
        total = pos + neg
        g_left = 2.0 * ev.tp * ev.fp / (left * left)
        g_right = 2.0 * ev.tn * ev.fn / (right * right)
        three_term = gini(stats) - (left / total) ** 2 * g_left - (right / total) ** 2 * g_right
        assert delta_gini(stats, ev) == pytest.approx(three_term, abs=1e-12)


def test_objective_identity_exhaustive_grid():
    # TP*FP + TN*FN == P*FP + N*FN - 2*FP*FN for all consistent counts
    for pos in range(1, 13):
        for neg in range(1, 13):
            for tp in range(pos + 1):
                for fp in range(neg + 1):
                    fn, tn = pos - tp, neg - fp
                    assert tp * fp + tn * fn == pos * fp + neg * fn - 2 * fp * fn


def test_label_swap_invariance():
    # relabeling the children swaps tp<->fn and fp<->tn; delta gini is unchanged
    rng = np.random.default_rng(3)
    for _ in range(200):
        pos = int(rng.integers(1, 30))
        neg = int(rng.integers(1, 30))
        tp = int(rng.integers(0, pos + 1))
        fp = int(rng.integers(0, neg + 1))
        if tp + fp in (0, pos + neg):
            continue
        stats = NodeStats(pos, neg)
        ev = make_split_eval(stats, tp, fp, tp + fp)
        swapped = make_split_eval(stats, tp=ev.fn, fp=ev.tn, z_sum=ev.fn + ev.tn)
        assert delta_gini(stats, ev) == pytest.approx(delta_gini(stats, swapped), abs=1e-12)


def test_fp_fn_monotone_under_rule_growth():
    rng = np.random.default_rng(11)
    for _ in range(100):
        B, y = random_instance(rng, n_lo=10, n_hi=50, m_lo=3, m_hi=10)
        m = B.shape[1]
        base = sorted(rng.choice(m, size=int(rng.integers(1, m)), replace=False).tolist())
        extra = [k for k in range(m) if k not in base]
        if not extra:
            continue
        sup = sorted(base + [int(rng.choice(extra))])
        ev_s = eval_ruleset(B, y, base)
        ev_sup = eval_ruleset(B, y, sup)
        assert ev_sup.fp >= ev_s.fp
        assert ev_sup.fn <= ev_s.fn
        assert ev_s.tau <= ev_sup.nu


def test_pairwise_term_zero_iff_both_right_or_both_wrong():
    # the gini objective's pairwise term 1 - z_i + z_j - 2*max(theta) is
    # zero exactly when the positive case i and negative case j are both
    # classified correctly or both incorrectly
    for z_i in (0, 1):
        for z_j in (0, 1):
            theta = (1 - z_i) * z_j
            assert theta <= 1 - z_i and theta <= z_j
            term = 1 - z_i + z_j - 2 * theta
            both_right = z_i == 1 and z_j == 0
            both_wrong = z_i == 0 and z_j == 1
            assert (term == 0) == (both_right or both_wrong)
            assert term in (0, 1)
