"""The compiled kernel and the pure-Python fallback must agree bit for bit."""

import numpy as np
import pytest

from orsplit import _kernel
from orsplit._kernel import fallback

from _synth import random_instance, tictactoe_instance

compiled = pytest.importorskip(
    "orsplit._kernel._fastcore", reason="compiled kernel not built"
)


def _run(impl, B, y, **kw):
    args = dict(max_rules=2, min_node_size=1, same_gender_veto=False,
                node_budget=-1, time_limit=0.0)
    args.update(kw)
    return impl.enum_search(
        np.ascontiguousarray(B), np.ascontiguousarray(y),
        args["max_rules"], args["min_node_size"], args["same_gender_veto"],
        args["node_budget"], args["time_limit"],
    )


def test_backends_agree_randomized():
    rng = np.random.default_rng(77)
    for _ in range(120):
        B, y = random_instance(rng, n_lo=5, n_hi=90, m_lo=2, m_hi=12)
        kw = dict(
            max_rules=int(rng.integers(1, 4)),
            min_node_size=int(rng.choice([0, 1, 3])),
            same_gender_veto=bool(rng.random() < 0.3),
        )
        assert _run(compiled, B, y, **kw) == _run(fallback, B, y, **kw)


def test_backends_agree_under_budget():
    rng = np.random.default_rng(78)
    B, y = random_instance(rng, n_lo=50, n_hi=50, m_lo=10, m_hi=10)
    for budget in (1, 5, 10, 17, 55):
        assert _run(compiled, B, y, max_rules=3, node_budget=budget) == _run(
            fallback, B, y, max_rules=3, node_budget=budget
        )


def test_backends_agree_on_wide_rows():
    # n > 64 exercises multi-word bitsets in the compiled kernel
    rng = np.random.default_rng(79)
    B, y = random_instance(rng, n_lo=200, n_hi=300, m_lo=8, m_hi=8)
    assert _run(compiled, B, y, max_rules=3) == _run(fallback, B, y, max_rules=3)


def test_backends_agree_on_tictactoe():
    B, y = tictactoe_instance()
    assert _run(compiled, B, y) == _run(fallback, B, y)


def test_selected_backend_is_exported():
    assert _kernel.BACKEND in ("compiled", "fallback")
    assert callable(_kernel.enum_search)
