"""Code distance, computed two independent ways.

``distance_by_path`` uses the geometry: on a surface with boundary the
lightest logical is a shortest primal path between two different x-segments
or a shortest dual path between two different z-segments.

``distance_exhaustive`` ignores geometry. For each CSS sector it enumerates
edge sets by increasing weight, keeps those with zero syndrome and reports the
first one that is not a product of stabilizers. Pure X and pure Z errors
suffice: a mixed logical is at least as heavy as its nontrivial half.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

from .gf2 import RowSpace, from_support, transpose
from .homology import DUAL, PRIMAL, is_trivial, relative_complex, shortest_boundary_path
from .lattice import Lattice, dual
from .pauli import PauliOperator, StabilizerCode, logical_count, syndrome_int

PATH = "path"
EXHAUSTIVE = "exhaustive"


class DistanceUnsupportedError(ValueError):
    """The path method needs two boundary segments of the same type."""


class DistanceBoundError(RuntimeError):
    """No logical of weight <= cap exists; ``lower_bound`` is cap + 1."""

    def __init__(self, lower_bound: int) -> None:
        super().__init__(f"no logical operator up to weight {lower_bound - 1}; d >= {lower_bound}")
        self.lower_bound = lower_bound


class NoLogicalQubitsError(ValueError):
    """The code encodes nothing, so its distance is undefined."""


@dataclass(frozen=True)
class DistanceResult:
    d: int
    witness: PauliOperator
    method: str


def default_weight_cap(lattice: Lattice) -> int:
    if lattice.family == "rectangle" and len(lattice.params) == 2:
        return min(lattice.params) + 2
    return max(1, lattice.edge_count // 2)


def _shortest_between_segments(lattice: Lattice) -> list[int] | None:
    labels = [s.label for s in lattice.x_segments]
    best = None
    for i, label in enumerate(labels):
        others = labels[:i] + labels[i + 1 :]
        path = shortest_boundary_path(lattice, label, others)
        if path is not None and (best is None or len(path) < len(best)):
            best = path
    return best


def distance_by_path(code: StabilizerCode) -> DistanceResult:
    lattice = code.lattice
    n = code.num_qubits
    if len(lattice.x_segments) < 2 and len(lattice.z_segments) < 2:
        raise DistanceUnsupportedError(
            f"{lattice.name} has no two boundary segments of the same type"
        )
    candidates = []
    if len(lattice.x_segments) >= 2:
        path = _shortest_between_segments(lattice)
        if path is not None:
            candidates.append((len(path), 0, PauliOperator.from_support(n, z=path), PRIMAL))
    if len(lattice.z_segments) >= 2:
        path = _shortest_between_segments(dual(lattice))
        if path is not None:
            candidates.append((len(path), 1, PauliOperator.from_support(n, x=path), DUAL))
    if not candidates:
        raise DistanceUnsupportedError(f"{lattice.name}: boundary segments are not connected")
    d, _, witness, side = min(candidates, key=lambda c: c[:2])
    mask = witness.z if side == PRIMAL else witness.x
    if is_trivial(relative_complex(lattice, side), mask):
        raise RuntimeError(f"shortest {side} boundary path is homologically trivial")
    return DistanceResult(d, witness, PATH)


def _lightest_in_sector(
    columns: list[int], stabilizers: RowSpace, weight: int
) -> tuple[int, ...] | None:
    """Lexicographically smallest zero-syndrome, non-stabilizer edge set of
    exactly ``weight`` edges, or None.

    Meet in the middle: the set splits into its ``ceil(w/2)`` smallest edges
    and the rest; the two halves must have equal syndromes.
    """
    n = len(columns)
    lo, hi = (weight + 1) // 2, weight // 2
    upper: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for combo in combinations(range(n), hi):
        s = 0
        for e in combo:
            s ^= columns[e]
        upper[s].append(combo)
    for head in combinations(range(n), lo):
        s = 0
        for e in head:
            s ^= columns[e]
        tails = upper.get(s)
        if not tails:
            continue
        last = head[-1]
        for tail in tails:
            if tail and tail[0] <= last:
                continue
            edges = head + tail
            if from_support(edges) not in stabilizers:
                return edges
    return None


def distance_exhaustive(code: StabilizerCode, weight_cap: int | None = None) -> DistanceResult:
    """Exact distance by enumeration up to ``weight_cap`` (default from the lattice)."""
    if logical_count(code) == 0:
        raise NoLogicalQubitsError(f"{code.lattice.name} encodes no logical qubits")
    n = code.num_qubits
    cap = default_weight_cap(code.lattice) if weight_cap is None else weight_cap
    if cap < 1:
        raise ValueError("weight_cap must be positive")
    # per-edge syndrome columns: Z errors are seen by vertex checks, X by faces
    z_columns = transpose(code.x_rows, n)
    x_columns = transpose(code.z_rows, n)
    for w in range(1, min(cap, n) + 1):
        found = []
        z_set = _lightest_in_sector(z_columns, code.z_stabilizers, w)
        if z_set is not None:
            found.append((z_set, 0, PauliOperator.from_support(n, z=z_set)))
        x_set = _lightest_in_sector(x_columns, code.x_stabilizers, w)
        if x_set is not None:
            found.append((x_set, 1, PauliOperator.from_support(n, x=x_set)))
        if found:
            return DistanceResult(w, min(found, key=lambda f: f[:2])[2], EXHAUSTIVE)
    raise DistanceBoundError(min(cap, n) + 1)


def undetected_nontrivial(code: StabilizerCode, error: PauliOperator) -> bool:
    """True iff ``error`` has zero syndrome but is not a stabilizer product."""
    if syndrome_int(code.x_rows, error.z) or syndrome_int(code.z_rows, error.x):
        return False
    return not code.in_stabilizer_group(error)
