"""Permutations as integer image arrays: p[i] is the image of point i."""

from __future__ import annotations

from math import lcm

import numpy as np

IDX_DTYPE = np.int16


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=IDX_DTYPE)


def is_permutation(images, n: int | None = None) -> bool:
    arr = np.asarray(images)
    if arr.ndim != 1 or arr.size == 0:
        return False
    size = arr.size if n is None else n
    if arr.size != size:
        return False
    if not np.issubdtype(arr.dtype, np.integer):
        return False
    if arr.min() < 0 or arr.max() >= size:
        return False
    return np.unique(arr).size == size


def compose(p, q) -> np.ndarray:
    """Image array of p applied after q, i.e. i -> p[q[i]]."""
    p = np.asarray(p)
    q = np.asarray(q)
    return p[q].astype(IDX_DTYPE, copy=False)


def inverse_perm(p) -> np.ndarray:
    p = np.asarray(p)
    out = np.empty(p.size, dtype=IDX_DTYPE)
    out[p] = np.arange(p.size, dtype=IDX_DTYPE)
    return out


def perm_power(p, k: int) -> np.ndarray:
    """k-th compositional power; negative k uses the inverse."""
    p = np.asarray(p)
    if k < 0:
        p = inverse_perm(p)
        k = -k
    result = identity_perm(p.size)
    base = p.astype(IDX_DTYPE, copy=True)
    while k:
        if k & 1:
            result = compose(base, result)
        base = compose(base, base)
        k >>= 1
    return result


def cycles(p) -> list[list[int]]:
    """Cycle decomposition, fixed points included, each cycle led by its minimum."""
    p = np.asarray(p)
    seen = np.zeros(p.size, dtype=bool)
    out = []
    for start in range(p.size):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = int(p[x])
        out.append(cycle)
    return out


def cycle_type(p) -> tuple[int, ...]:
    """Sorted multiset of cycle lengths (fixed points count as 1)."""
    return tuple(sorted(len(c) for c in cycles(p)))


def perm_order(p) -> int:
    lengths = [len(c) for c in cycles(p)]
    return lcm(*lengths) if lengths else 1
