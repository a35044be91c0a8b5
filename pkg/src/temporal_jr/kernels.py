"""Bitmask kernels over all ``2**n`` voter groups.

Group ``g`` is the integer whose bit ``i`` is set iff voter ``i`` belongs to
it. Every table is filled by the subset recurrence ``T[g] = f(T[g - low], low)``
where ``low`` is the top voter of ``g``, which numpy evaluates one voter at a
time over contiguous slices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

# n above this is refused by every all-groups kernel
MAX_KERNEL_VOTERS = 30
_TWO_D_LIMIT = 1 << 24


def _mask_dtype(bits: int):
    return np.uint64 if bits <= 64 else object


def _full(bits: int):
    return np.uint64((1 << bits) - 1) if bits <= 64 else (1 << bits) - 1


def group_sizes(n: int) -> np.ndarray:
    size = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        size[1 << b: 2 << b] = size[: 1 << b] + 1
    return size


@dataclass(frozen=True)
class GroupTables:
    """Outcome-independent per-group quantities of one election."""

    n: int
    ell: int
    size: np.ndarray
    beta: np.ndarray
    alpha: np.ndarray


def build_group_tables(e) -> GroupTables:
    n, ell, m = e.n, e.ell, e.m
    if n > MAX_KERNEL_VOTERS:
        raise CapacityError(f"all-groups tables need n <= {MAX_KERNEL_VOTERS}, got n={n}")
    dtype = _mask_dtype(m)
    full = _full(m)
    approvals = np.array(e.masks, dtype=dtype).reshape(n, ell)
    size = 1 << n
    if size * ell <= _TWO_D_LIMIT:
        inter = np.empty((size, ell), dtype=dtype)
        inter[0] = full
        for b in range(n):
            inter[1 << b: 2 << b] = inter[: 1 << b] & approvals[b]
        beta = np.count_nonzero(inter != 0, axis=1).astype(np.int64)
    else:
        beta = np.zeros(size, dtype=np.int64)
        inter = np.empty(size, dtype=dtype)
        for t in range(ell):
            inter[0] = full
            for b in range(n):
                inter[1 << b: 2 << b] = inter[: 1 << b] & approvals[b, t]
            beta += inter != 0
    sizes = group_sizes(n)
    beta[0] = 0
    alpha = beta * sizes // n
    return GroupTables(n, ell, sizes, beta, alpha)


def group_max(values) -> np.ndarray:
    """``out[g] = max(values[i] for i in g)``; ``out[0] = -1``."""
    n = len(values)
    out = np.empty(1 << n, dtype=np.int64)
    out[0] = -1
    for b in range(n):
        out[1 << b: 2 << b] = np.maximum(out[: 1 << b], values[b])
    return out


def group_coverage(hit_rounds: list[int], ell: int) -> np.ndarray:
    """``out[g]`` = number of rounds hit by at least one member of ``g``.

    ``hit_rounds[i]`` is the bitmask of rounds in which voter ``i`` approves
    the chosen candidate.
    """
    n = len(hit_rounds)
    if ell <= 64:
        union = np.empty(1 << n, dtype=np.uint64)
        union[0] = 0
        for b in range(n):
            union[1 << b: 2 << b] = union[: 1 << b] | np.uint64(hit_rounds[b])
        return np.bitwise_count(union).astype(np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    hit = np.empty(1 << n, dtype=bool)
    for t in range(ell):
        hit[0] = False
        for b in range(n):
            hit[1 << b: 2 << b] = hit[: 1 << b] | bool(hit_rounds[b] >> t & 1)
        out += hit
    return out
