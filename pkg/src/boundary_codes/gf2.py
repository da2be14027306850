"""GF(2) linear algebra on bit-packed rows.

A vector of length ``n`` is a Python ``int`` whose bit ``i`` holds entry ``i``.
Row reduction then costs one word-level XOR per eliminated row.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np


def pack_row(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence into an int, entry ``i`` -> bit ``i``."""
    value = 0
    for i, bit in enumerate(bits):
        if int(bit) & 1:
            value |= 1 << i
    return value


def pack_rows(matrix) -> list[int]:
    """Pack every row of a 2-D 0/1 array-like."""
    arr = np.asarray(matrix, dtype=np.uint8) & 1
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    packed = np.packbits(arr, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def unpack_row(value: int, length: int) -> np.ndarray:
    """Inverse of :func:`pack_row`; returns a uint8 array of ``length``."""
    if value >> length:
        raise ValueError(f"value has bits beyond length {length}")
    raw = np.frombuffer(value.to_bytes((length + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length].copy()


def unpack_rows(rows: Sequence[int], length: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, length), dtype=np.uint8)
    return np.stack([unpack_row(r, length) for r in rows])


def support(value: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while value:
        low = value & -value
        out.append(low.bit_length() - 1)
        value ^= low
    return out


def from_support(indices: Iterable[int]) -> int:
    value = 0
    for i in indices:
        value ^= 1 << i
    return value


def rank_rows(rows: Iterable[int]) -> int:
    """Rank of a set of packed rows."""
    return len(RowSpace(rows))


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a 2-D 0/1 array-like (or a list of packed ints)."""
    if isinstance(matrix, (list, tuple)) and all(isinstance(r, int) for r in matrix):
        return rank_rows(matrix)
    arr = np.asarray(matrix)
    if arr.size == 0:
        return 0
    return rank_rows(pack_rows(arr))


class RowSpace:
    """Echelon basis of the span of some packed rows.

    Each basis row is stored under its lowest set bit (its pivot) and no other
    basis row has that bit set, so reducing a vector is a single pass.
    Optionally remembers, for each basis row, which input rows were combined to
    produce it (``track=True``); this is what :meth:`solve` needs.
    """

    def __init__(self, rows: Iterable[int] = (), *, track: bool = False) -> None:
        self._basis: dict[int, int] = {}
        self._combo: dict[int, int] | None = {} if track else None
        self._count = 0
        for row in rows:
            self.add(row)

    def __len__(self) -> int:
        return len(self._basis)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._basis)

    def basis(self) -> list[int]:
        return [self._basis[p] for p in sorted(self._basis)]

    def _reduce(self, value: int) -> tuple[int, int]:
        # basis rows are zero at every other pivot, so one pass suffices
        combo = 0
        for pivot, row in self._basis.items():
            if (value >> pivot) & 1:
                value ^= row
                if self._combo is not None:
                    combo ^= self._combo[pivot]
        return value, combo

    def reduce(self, value: int) -> int:
        """Canonical representative of ``value`` modulo the span."""
        return self._reduce(value)[0]

    def __contains__(self, value: int) -> bool:
        return self.reduce(value) == 0

    def add(self, value: int) -> bool:
        """Insert a row; returns True if it enlarged the span."""
        index = self._count
        self._count += 1
        residue, combo = self._reduce(value)
        if self._combo is not None:
            combo ^= 1 << index
        if residue == 0:
            return False
        pivot = (residue & -residue).bit_length() - 1
        # keep every other basis row clear of the new pivot
        for p, row in self._basis.items():
            if (row >> pivot) & 1:
                self._basis[p] = row ^ residue
                if self._combo is not None:
                    self._combo[p] ^= combo
        self._basis[pivot] = residue
        if self._combo is not None:
            self._combo[pivot] = combo
        return True

    def solve(self, value: int) -> int | None:
        """Packed mask of input rows whose XOR equals ``value``, or None."""
        if self._combo is None:
            raise RuntimeError("RowSpace was built without track=True")
        residue, combo = self._reduce(value)
        return None if residue else combo


def nullspace(rows: Sequence[int], num_cols: int) -> list[int]:
    """Basis of ``{v : popcount(row & v) even for every row}``.

    Row-reduce to RREF, then emit one kernel vector per free column in
    ascending column order.
    """
    space = RowSpace(rows)
    pivots = space._basis  # pivot column -> row with that pivot, others cleared
    pivot_set = set(pivots)
    kernel = []
    for free in range(num_cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for p, row in pivots.items():
            if (row >> free) & 1:
                vec |= 1 << p
        kernel.append(vec)
    return kernel


def inverse(rows: Sequence[int], size: int) -> list[int]:
    """Inverse of a square GF(2) matrix given as packed rows."""
    if len(rows) != size:
        raise ValueError("matrix is not square")
    work = [(rows[i], 1 << i) for i in range(size)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if (work[r][0] >> col) & 1), None)
        if pivot is None:
            raise np.linalg.LinAlgError("matrix is singular over GF(2)")
        work[col], work[pivot] = work[pivot], work[col]
        prow, pinv = work[col]
        for r in range(size):
            if r != col and (work[r][0] >> col) & 1:
                work[r] = (work[r][0] ^ prow, work[r][1] ^ pinv)
    return [inv for _, inv in work]


def transpose(rows: Sequence[int], num_cols: int) -> list[int]:
    out = [0] * num_cols
    for i, row in enumerate(rows):
        for j in support(row):
            out[j] |= 1 << i
    return out


def matmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of packed matrices: ``a`` rows index into rows of ``b``."""
    out = []
    for row in a:
        acc = 0
        for j in support(row):
            acc ^= b[j]
        out.append(acc)
    return out
