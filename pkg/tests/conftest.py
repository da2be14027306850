"""Shared oracles. These deliberately avoid boundary_codes.gf2 so they can check it."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from boundary_codes.lattice import build_disk, build_rectangle, build_torus
from boundary_codes.pauli import build_code


def dense_rank(matrix) -> int:
    """Plain row-echelon rank over GF(2) on a numpy array."""
    m = np.array(matrix, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def span_size(rows: list[int]) -> int:
    """Size of the GF(2) span by brute-force enumeration of all subset sums."""
    span = {0}
    for row in rows:
        span |= {s ^ row for s in span}
    return len(span)


def brute_force_distance(hx: np.ndarray, hz: np.ndarray, max_weight: int) -> int | None:
    """Smallest weight of a pure-X or pure-Z error that every check misses but
    is not in the span of the same-type checks. Flat enumeration, no tricks."""
    n = hx.shape[1]
    rank_x, rank_z = dense_rank(hx), dense_rank(hz)
    for w in range(1, max_weight + 1):
        for combo in combinations(range(n), w):
            e = np.zeros(n, dtype=np.uint8)
            e[list(combo)] = 1
            if not (hx @ e % 2).any() and dense_rank(np.vstack([hz, e])) > rank_z:
                return w
            if not (hz @ e % 2).any() and dense_rank(np.vstack([hx, e])) > rank_x:
                return w
    return None


@pytest.fixture(scope="session")
def rect23():
    return build_code(build_rectangle(2, 3))


@pytest.fixture(scope="session")
def small_codes():
    lattices = [build_rectangle(n, m) for n in range(1, 4) for m in range(1, 4)]
    lattices += [build_torus(2), build_torus(3)]
    lattices += [build_disk(k, s) for k in (1, 2, 3) for s in (1, 2)]
    return [build_code(lat) for lat in lattices]
