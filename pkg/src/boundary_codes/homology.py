"""Relative Z2 homology of a lattice and logical operator bases.

The primal complex is ``faces --d2--> edges --d1--> interior vertices``. Free
ends have no row in ``d1``, so ``ker d1`` is exactly the set of edge chains
whose boundary lies on free ends: the relative 1-cycles. The dual complex is
the primal complex of the dual lattice, with the same edge indices.

A Z-type Pauli commutes with every vertex check iff its edge mask is a primal
relative cycle; it is a product of face checks iff the mask is a boundary.
The X side is the same statement on the dual lattice.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Collection
from dataclasses import dataclass
from functools import cached_property
from itertools import chain

import numpy as np

from . import gf2
from .gf2 import RowSpace, from_support, nullspace
from .lattice import Lattice, dual
from .pauli import PauliOperator, StabilizerCode, logical_count, syndrome_int

PRIMAL = "primal"
DUAL = "dual"


class NotACycleError(ValueError):
    """The chain has boundary away from the free ends."""


class HomologyError(RuntimeError):
    """Internal inconsistency in a chain complex or logical basis."""


@dataclass(frozen=True)
class ChainComplex:
    lattice: Lattice
    side: str

    @cached_property
    def vertex_rows(self) -> list[int]:
        """Rows of d1 as packed edge masks (one per interior vertex)."""
        return [from_support(star) for star in self.lattice.vertex_stars]

    @cached_property
    def face_rows(self) -> list[int]:
        """Columns of d2 as packed edge masks (one per face)."""
        return [from_support(edges) for edges in self.lattice.face_edges]

    @property
    def num_edges(self) -> int:
        return self.lattice.edge_count

    @property
    def d1(self) -> np.ndarray:
        return gf2.unpack_rows(self.vertex_rows, self.num_edges)

    @property
    def d2(self) -> np.ndarray:
        return gf2.unpack_rows(self.face_rows, self.num_edges).T.copy()

    @cached_property
    def boundaries(self) -> RowSpace:
        return RowSpace(self.face_rows)

    def check(self) -> None:
        """Raise HomologyError unless d1 . d2 = 0."""
        product = (self.d1.astype(np.int64) @ self.d2.astype(np.int64)) % 2
        if product.any():
            bad = np.argwhere(product)[0]
            raise HomologyError(
                f"{self.side} complex: d1.d2 != 0 at vertex {bad[0]}, face {bad[1]}"
            )

    def boundary_of(self, chain: int) -> int:
        """Packed d1(chain) over interior vertices."""
        return syndrome_int(self.vertex_rows, chain)


def relative_complex(lattice: Lattice, side: str = PRIMAL) -> ChainComplex:
    if side == PRIMAL:
        return ChainComplex(lattice, PRIMAL)
    if side == DUAL:
        return ChainComplex(dual(lattice), DUAL)
    raise ValueError(f"side must be {PRIMAL!r} or {DUAL!r}, got {side!r}")


def homology_dim(complex_: ChainComplex) -> int:
    """dim ker d1 - rank d2."""
    complex_.check()
    kernel = complex_.num_edges - gf2.rank_rows(complex_.vertex_rows)
    return kernel - len(complex_.boundaries)


def _as_mask(cycle, num_edges: int) -> int:
    if isinstance(cycle, (int, np.integer)):
        mask = int(cycle)
    else:
        arr = np.asarray(cycle)
        if arr.shape != (num_edges,):
            raise ValueError(f"chain has shape {arr.shape}, expected ({num_edges},)")
        mask = gf2.pack_row(arr)
    if mask < 0 or mask >> num_edges:
        raise ValueError("chain has bits beyond the edge count")
    return mask


def is_trivial(complex_: ChainComplex, cycle) -> bool:
    """True iff the relative cycle is a sum of face boundaries."""
    mask = _as_mask(cycle, complex_.num_edges)
    if complex_.boundary_of(mask):
        raise NotACycleError("chain is not a relative cycle")
    return mask in complex_.boundaries


@dataclass(frozen=True)
class RelativeCycleClass:
    representative: int
    lattice_side: str
    num_edges: int

    @property
    def edges(self) -> list[int]:
        return gf2.support(self.representative)

    def is_trivial(self, complex_: ChainComplex) -> bool:
        if complex_.side != self.lattice_side:
            raise ValueError("complex is on the other side")
        return is_trivial(complex_, self.representative)


@dataclass(frozen=True)
class LogicalBasis:
    z_logicals: tuple[PauliOperator, ...]
    x_logicals: tuple[PauliOperator, ...]

    def __len__(self) -> int:
        return len(self.z_logicals)

    def pairing_matrix(self) -> np.ndarray:
        """P[i, j] = 1 iff z_logicals[i] anticommutes with x_logicals[j]."""
        return np.array(
            [[int(not z.commutes_with(x)) for x in self.x_logicals] for z in self.z_logicals],
            dtype=np.uint8,
        ).reshape(len(self.z_logicals), len(self.x_logicals))


def shortest_boundary_path(
    lattice: Lattice, source: str, targets: Collection[str]
) -> list[int] | None:
    """Edges of a shortest path from a free end of x-segment ``source`` to a
    free end of any x-segment in ``targets``, found by multi-source BFS.

    Interior vertices are the only intermediate nodes. Returns None if no
    such path exists.
    """
    target_ends = {
        m for seg in lattice.x_segments if seg.label in targets for m in seg.members
    }
    start = lattice.segment(source)
    adjacency: list[list[tuple[int, object]]] = [[] for _ in range(lattice.vertex_count)]
    for e, (a, b) in enumerate(lattice.edge_endpoints):
        if not a.is_free:
            adjacency[a.index].append((e, b))
        if not b.is_free:
            adjacency[b.index].append((e, a))

    parent: dict[int, tuple[int, int | None]] = {}  # vertex -> (edge, previous vertex)
    queue: deque[int] = deque()
    for f in start.members:
        e = lattice.free_end_edges[f]
        a, b = lattice.edge_endpoints[e]
        other = b if (a.is_free and a.index == f) else a
        if other.is_free:
            if other.index in target_ends:
                return [e]
            continue
        if other.index not in parent:
            parent[other.index] = (e, None)
            queue.append(other.index)

    while queue:
        u = queue.popleft()
        for e, other in adjacency[u]:
            if other.is_free:
                if other.index in target_ends:
                    path = [e]
                    node: int | None = u
                    while node is not None:
                        edge, prev = parent[node]
                        path.append(edge)
                        node = prev
                    return sorted(path)
            elif other.index not in parent:
                parent[other.index] = (e, u)
                queue.append(other.index)
    return None


def _select_classes(
    candidates, boundary_rows: list[int], check_rows: list[int], k: int
) -> list[int]:
    space = RowSpace(boundary_rows)
    chosen = []
    for cand in candidates:
        if len(chosen) == k:
            break
        if cand is None or syndrome_int(check_rows, cand):
            continue
        if space.add(cand):
            chosen.append(cand)
    return chosen


def logical_basis(code: StabilizerCode) -> LogicalBasis:
    """Paired Z/X logical operators, one pair per encoded qubit.

    Z logicals come from primal relative cycles and X logicals from dual ones.
    Path representatives are tried first: Z_i joins x-segment i to segment
    i + 1, X_i joins z-segment i to the last z-segment. Kernel vectors fill in
    whatever homology the paths miss (all of it on closed surfaces). The X
    side is then recombined so the pairing matrix is the identity.
    """
    lattice = code.lattice
    n = code.num_qubits
    k = logical_count(code)

    xs = [s.label for s in lattice.x_segments]
    z_paths = (
        _path_mask(lattice, xs[i], [xs[i + 1]]) for i in range(len(xs) - 1)
    )
    z_cands = chain(z_paths, nullspace(code.x_rows, n))
    z_reps = _select_classes(z_cands, code.z_rows, code.x_rows, k)

    zs = [s.label for s in lattice.z_segments]
    dual_lattice = dual(lattice) if zs else None
    x_paths = (
        _path_mask(dual_lattice, zs[i], [zs[-1]]) for i in range(len(zs) - 1)
    )
    x_cands = chain(x_paths, nullspace(code.z_rows, n))
    x_reps = _select_classes(x_cands, code.x_rows, code.z_rows, k)

    if len(z_reps) != k or len(x_reps) != k:
        raise HomologyError(
            f"found {len(z_reps)} Z and {len(x_reps)} X logical classes, expected {k}"
        )
    pairing = [
        sum((((z & x).bit_count() & 1) << j) for j, x in enumerate(x_reps)) for z in z_reps
    ]
    try:
        inv = gf2.inverse(pairing, k)
    except np.linalg.LinAlgError as exc:
        raise HomologyError("logical pairing matrix is singular") from exc
    # x'_j = sum_l inv[l][j] x_l gives Z . X'^T = P . inv = identity
    inv_t = gf2.transpose(inv, k)
    x_paired = []
    for j in range(k):
        acc = 0
        for l in gf2.support(inv_t[j]):
            acc ^= x_reps[l]
        x_paired.append(acc)
    return LogicalBasis(
        tuple(PauliOperator(n, 0, z) for z in z_reps),
        tuple(PauliOperator(n, x, 0) for x in x_paired),
    )


def _path_mask(lattice: Lattice, source: str, targets) -> int | None:
    path = shortest_boundary_path(lattice, source, targets)
    return None if path is None else from_support(path)
