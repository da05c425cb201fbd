"""64-bit hash tokens and tuple mixing.

Tokens are plain 64-bit integers (np.uint64 in vectorized code, Python int
at the API surface). Composite families need to fold a tuple of component
tokens into a single 64-bit token; we use an order-sensitive splitmix64
chain seeded with the tuple length:

    acc_0 = splitmix64(GAMMA ^ len)
    acc_{i+1} = splitmix64(acc_i ^ splitmix64(token_i + (i+1)*GAMMA))

splitmix64 is a bijection on 64-bit words, so single tokens never collide
and chains only collide through genuine 64-bit mixing accidents. A debug
audit mode records every (tuple -> mixed) pair and raises on an injectivity
violation, which is how tests certify that no mixing collision occurred on
the tuples actually produced in a run.
"""

from __future__ import annotations

import threading

import numpy as np

_MASK_INT = 0xFFFFFFFFFFFFFFFF
_GAMMA_INT = 0x9E3779B97F4A7C15
_M1_INT = 0xBF58476D1CE4E5B9
_M2_INT = 0x94D049BB133111EB

_MASK = np.uint64(_MASK_INT)
_GAMMA = np.uint64(_GAMMA_INT)
_M1 = np.uint64(_M1_INT)
_M2 = np.uint64(_M2_INT)

# Debug audit registry: mixed token -> tuple of component tokens.
_audit_lock = threading.Lock()
_audit_enabled = False
_audit_seen: dict[int, tuple] = {}


def splitmix64(x: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """splitmix64 finalizer; operates elementwise on uint64 arrays."""
    with np.errstate(over="ignore"):
        z = (np.asarray(x, dtype=np.uint64) + _GAMMA) & _MASK
        z = ((z ^ (z >> np.uint64(30))) * _M1) & _MASK
        z = ((z ^ (z >> np.uint64(27))) * _M2) & _MASK
        return z ^ (z >> np.uint64(31))


def mix_tokens(columns: list[np.ndarray]) -> np.ndarray:
    """Fold per-component token columns into one uint64 token per row.

    Args:
        columns: list of uint64 arrays of equal shape, one per component,
            in component order.

    Returns:
        uint64 array of mixed tokens, same shape as the inputs.
    """
    if not columns:
        raise ValueError("mix_tokens needs at least one column")
    acc = splitmix64(_GAMMA ^ np.uint64(len(columns)))
    acc = np.broadcast_to(acc, columns[0].shape).copy()
    with np.errstate(over="ignore"):
        for i, col in enumerate(columns):
            col = np.asarray(col, dtype=np.uint64)
            salted = (col + np.uint64(i + 1) * _GAMMA) & _MASK
            acc = splitmix64(acc ^ splitmix64(salted))
    if _audit_enabled:
        _audit_record(columns, acc)
    return acc


def _splitmix64_int(x: int) -> int:
    z = (x + _GAMMA_INT) & _MASK_INT
    z = ((z ^ (z >> 30)) * _M1_INT) & _MASK_INT
    z = ((z ^ (z >> 27)) * _M2_INT) & _MASK_INT
    return z ^ (z >> 31)


def mix_token_tuple(tokens: tuple[int, ...]) -> int:
    """Scalar twin of mix_tokens on Python ints (hot path for per-point
    hashing in indexes; bit-identical to the array version)."""
    if not tokens:
        raise ValueError("mix_tokens needs at least one column")
    acc = _splitmix64_int(_GAMMA_INT ^ len(tokens))
    for i, t in enumerate(tokens):
        salted = (int(t) + (i + 1) * _GAMMA_INT) & _MASK_INT
        acc = _splitmix64_int(acc ^ _splitmix64_int(salted))
    if _audit_enabled:
        _audit_one(tuple(int(t) for t in tokens), acc)
    return acc


def enable_token_audit() -> None:
    """Turn on the tuple-injectivity audit (tests; global, thread-safe)."""
    global _audit_enabled
    with _audit_lock:
        _audit_seen.clear()
        _audit_enabled = True


def disable_token_audit() -> int:
    """Turn the audit off; returns the number of distinct tuples seen."""
    global _audit_enabled
    with _audit_lock:
        n = len(_audit_seen)
        _audit_enabled = False
        _audit_seen.clear()
    return n


def _audit_one(tup: tuple, m: int) -> None:
    with _audit_lock:
        prev = _audit_seen.get(m)
        if prev is None:
            _audit_seen[m] = tup
        elif prev != tup:
            raise AssertionError(
                f"token mixing collision: {prev} and {tup} both map to {m:#x}"
            )


def _audit_record(columns: list[np.ndarray], mixed: np.ndarray) -> None:
    flat = [np.asarray(c, dtype=np.uint64).ravel() for c in columns]
    out = mixed.ravel()
    for row in range(out.shape[0]):
        _audit_one(tuple(int(c[row]) for c in flat), int(out[row]))
