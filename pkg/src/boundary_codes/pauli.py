"""Pauli operators in binary symplectic form and the stabilizer code of a lattice.

Qubits are the lattice edges. Phases are not tracked: every quantity computed
here (commutation, syndromes, ranks, distances) is phase independent.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gf2 import RowSpace, from_support, gf2_rank, pack_row, support, unpack_row, unpack_rows
from .lattice import Lattice

__all__ = [
    "PauliOperator",
    "StabilizerCode",
    "build_code",
    "commutes",
    "gf2_rank",
    "logical_count",
    "syndrome",
]


@dataclass(frozen=True)
class PauliOperator:
    """A Pauli product modulo phase: bit ``i`` of ``x``/``z`` is the X/Z part on qubit ``i``."""

    num_qubits: int
    x: int = 0
    z: int = 0

    def __post_init__(self) -> None:
        if (self.x | self.z) >> self.num_qubits:
            raise ValueError("mask has bits beyond num_qubits")

    @classmethod
    def from_support(
        cls, num_qubits: int, x: Iterable[int] = (), z: Iterable[int] = ()
    ) -> PauliOperator:
        return cls(num_qubits, from_support(x), from_support(z))

    @classmethod
    def from_masks(cls, x_mask, z_mask) -> PauliOperator:
        x_mask, z_mask = np.asarray(x_mask), np.asarray(z_mask)
        if x_mask.shape != z_mask.shape:
            raise ValueError("x and z masks differ in length")
        return cls(len(x_mask), pack_row(x_mask), pack_row(z_mask))

    @classmethod
    def identity(cls, num_qubits: int) -> PauliOperator:
        return cls(num_qubits)

    @property
    def x_mask(self) -> np.ndarray:
        return unpack_row(self.x, self.num_qubits)

    @property
    def z_mask(self) -> np.ndarray:
        return unpack_row(self.z, self.num_qubits)

    @property
    def support(self) -> list[int]:
        return support(self.x | self.z)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_identity(self) -> bool:
        return not (self.x or self.z)

    @property
    def symplectic(self) -> int:
        """Packed ``(x | z)`` row of length ``2 * num_qubits``."""
        return self.x | (self.z << self.num_qubits)

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        _check_same_size(self, other)
        return PauliOperator(self.num_qubits, self.x ^ other.x, self.z ^ other.z)

    def commutes_with(self, other: PauliOperator) -> bool:
        return commutes(self, other)

    def __str__(self) -> str:
        chars = []
        for q in range(self.num_qubits):
            bx, bz = (self.x >> q) & 1, (self.z >> q) & 1
            chars.append("IXZY"[bx + 2 * bz])
        return "".join(chars)


def _check_same_size(a: PauliOperator, b: PauliOperator) -> None:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"operators act on {a.num_qubits} and {b.num_qubits} qubits")


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic form <a.x, b.z> + <a.z, b.x> vanishes over GF(2)."""
    _check_same_size(a, b)
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() % 2 == 0


@dataclass(frozen=True)
class StabilizerCode:
    """CSS code of a lattice: X checks on vertices, Z checks on faces.

    Generators are ordered vertex checks first (by vertex index) then face
    checks (by face index); check matrices and syndromes use this order.
    """

    lattice: Lattice
    vertex_generators: tuple[PauliOperator, ...]
    face_generators: tuple[PauliOperator, ...]

    @property
    def num_qubits(self) -> int:
        return self.lattice.edge_count

    @property
    def generators(self) -> tuple[PauliOperator, ...]:
        return self.vertex_generators + self.face_generators

    @cached_property
    def x_rows(self) -> list[int]:
        """Packed rows of H_X (edge masks of the vertex checks)."""
        return [g.x for g in self.vertex_generators]

    @cached_property
    def z_rows(self) -> list[int]:
        """Packed rows of H_Z (edge masks of the face checks)."""
        return [g.z for g in self.face_generators]

    @cached_property
    def hx(self) -> np.ndarray:
        return unpack_rows(self.x_rows, self.num_qubits)

    @cached_property
    def hz(self) -> np.ndarray:
        return unpack_rows(self.z_rows, self.num_qubits)

    @cached_property
    def x_stabilizers(self) -> RowSpace:
        """Span of the vertex checks, as edge masks."""
        return RowSpace(self.x_rows)

    @cached_property
    def z_stabilizers(self) -> RowSpace:
        return RowSpace(self.z_rows)

    @cached_property
    def stabilizer_rank(self) -> int:
        return gf2_rank([g.symplectic for g in self.generators])

    def in_stabilizer_group(self, op: PauliOperator) -> bool:
        return op.x in self.x_stabilizers and op.z in self.z_stabilizers


def build_code(lattice: Lattice) -> StabilizerCode:
    """One X check per interior vertex (its star), one Z check per face (its existing edges)."""
    n = lattice.edge_count
    vertex_gens = tuple(PauliOperator.from_support(n, x=star) for star in lattice.vertex_stars)
    face_gens = tuple(PauliOperator.from_support(n, z=edges) for edges in lattice.face_edges)
    return StabilizerCode(lattice, vertex_gens, face_gens)


def syndrome(code: StabilizerCode, error: PauliOperator) -> np.ndarray:
    """One bit per generator (generator order), set where ``error`` anticommutes."""
    if error.num_qubits != code.num_qubits:
        raise ValueError(
            f"error acts on {error.num_qubits} qubits, code has {code.num_qubits}"
        )
    bits = [(error.z & row).bit_count() & 1 for row in code.x_rows]
    bits += [(error.x & row).bit_count() & 1 for row in code.z_rows]
    return np.array(bits, dtype=np.uint8)


def syndrome_int(rows: Sequence[int], mask: int) -> int:
    """Packed syndrome of an edge mask against packed check rows."""
    value = 0
    for i, row in enumerate(rows):
        if (row & mask).bit_count() & 1:
            value |= 1 << i
    return value


def logical_count(code: StabilizerCode) -> int:
    """Number of encoded qubits: qubits minus the rank of the stacked generators."""
    return code.num_qubits - code.stabilizer_rank
