"""Token mixing: parity between the scalar and array paths, injectivity."""

import numpy as np
import pytest

from dshlab._tokens import (
    disable_token_audit,
    enable_token_audit,
    mix_token_tuple,
    mix_tokens,
    splitmix64,
)


def test_splitmix64_known_value():
    # the classic splitmix64 first output for state 0
    assert int(splitmix64(np.uint64(0))) == 0xE220A8397B1DCDAF


def test_splitmix64_no_collisions_on_sample():
    xs = np.random.default_rng(1).integers(0, 2**64, 200_000, dtype=np.uint64)
    xs = np.unique(xs)
    out = splitmix64(xs)
    assert np.unique(out).size == xs.size


def test_scalar_matches_array_path():
    rng = np.random.default_rng(2)
    for _ in range(300):
        k = int(rng.integers(1, 9))
        toks = tuple(int(t) for t in rng.integers(0, 2**64, k, dtype=np.uint64))
        cols = [np.asarray([t], dtype=np.uint64) for t in toks]
        assert mix_token_tuple(toks) == int(mix_tokens(cols)[0])


def test_mixing_is_order_and_arity_sensitive():
    a = mix_token_tuple((1, 2))
    assert a != mix_token_tuple((2, 1))
    assert a != mix_token_tuple((1, 2, 0))
    assert mix_token_tuple((7,)) != 7


def test_mix_tokens_rejects_empty():
    with pytest.raises(ValueError):
        mix_tokens([])
    with pytest.raises(ValueError):
        mix_token_tuple(())


def test_audit_counts_and_passes_on_distinct_tuples():
    enable_token_audit()
    try:
        for i in range(500):
            mix_token_tuple((i, i + 1))
        # disjoint from the scalar tuples: second column is constant 0
        cols = [np.arange(64, dtype=np.uint64), np.zeros(64, dtype=np.uint64)]
        mix_tokens(cols)
    finally:
        seen = disable_token_audit()
    assert seen == 500 + 64


def test_audit_raises_on_forced_collision():
    from dshlab import _tokens

    enable_token_audit()
    try:
        _tokens._audit_one((1, 2), 99)
        with pytest.raises(AssertionError):
            _tokens._audit_one((3, 4), 99)
    finally:
        disable_token_audit()
