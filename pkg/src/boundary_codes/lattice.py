"""Combinatorial 2-D lattices with typed boundaries, and their duals.

A lattice is a set of edges whose endpoints are either interior vertices or
*free ends*. Interior vertices carry vertex (X) checks, faces carry face (Z)
checks, free ends carry nothing. Faces may be truncated: a face that lacks some
of its edges lists only the edges that exist, and its boundary then runs
between free ends instead of closing up.

Each edge sits on at most two faces. Every missing face slot of an edge is a
*dual free end*: the place where the dual edge leaves the dual lattice.
Dual free ends are numbered canonically by walking the edges in index order
and giving each missing slot the next id, so a lattice determines its dual
free ends without extra data.

Free ends are grouped into x-boundary segments and dual free ends into
z-boundary segments. Distinct free ends are never identified with each other;
segment membership is all that matters downstream.

Rectangle indexing (``build_rectangle(n, m)``)
----------------------------------------------
Interior vertices sit on ``n + 1`` rows of ``m`` columns; vertex ``(r, c)`` has
index ``r * m + c``. Row ``r`` owns the edge block starting at
``r * (2m + 1)``: first its ``m + 1`` horizontal edges left to right (the
first and last end in free ends on the left and right), then the ``m``
vertical edges down to row ``r + 1`` (absent on the last row). Between rows
``r`` and ``r + 1`` there are ``m + 1`` faces, index ``r * (m + 1) + j``; the
faces ``j = 0`` and ``j = m`` miss the edge that would join two free ends.
The left and right free ends form x-segments ``V1`` and ``V2``; the open
edges of the top and bottom rows give z-segments ``V*1`` and ``V*2``.
For ``n = 2, m = 3`` this reproduces the operator list s1..s9, p1..p8 of the
classic 2x3 example with vertex ``s_i`` at index ``i - 1`` and ``p_j`` at
face index ``j - 1``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import networkx as nx

X_BOUNDARY = "x"
Z_BOUNDARY = "z"


class LatticeError(ValueError):
    """Raised for lattices with inconsistent incidence or boundary data."""


class Endpoint(NamedTuple):
    kind: str  # "v" (interior vertex) or "free"
    index: int

    @property
    def is_free(self) -> bool:
        return self.kind == "free"

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def vertex(index: int) -> Endpoint:
    return Endpoint("v", index)


def free_end(index: int) -> Endpoint:
    return Endpoint("free", index)


class CellId(NamedTuple):
    kind: str  # "vertex", "edge" or "face"
    index: int


@dataclass(frozen=True)
class BoundarySegment:
    """A contiguous piece of boundary of one type.

    ``members`` are free-end ids for an x-segment and dual free-end ids for a
    z-segment.
    """

    segment_type: str
    label: str
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.segment_type not in (X_BOUNDARY, Z_BOUNDARY):
            raise LatticeError(f"unknown segment type {self.segment_type!r}")
        object.__setattr__(self, "members", tuple(int(m) for m in self.members))


@dataclass(frozen=True)
class Lattice:
    vertex_count: int
    edge_endpoints: tuple[tuple[Endpoint, Endpoint], ...]
    face_edges: tuple[tuple[int, ...], ...]
    free_end_count: int
    boundary_segments: tuple[BoundarySegment, ...] = ()
    family: str = field(default="generic", compare=False)
    params: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "edge_endpoints",
            tuple((Endpoint(*a), Endpoint(*b)) for a, b in self.edge_endpoints),
        )
        object.__setattr__(self, "face_edges", tuple(tuple(f) for f in self.face_edges))
        object.__setattr__(self, "boundary_segments", tuple(self.boundary_segments))
        self.validate()

    @property
    def edge_count(self) -> int:
        return len(self.edge_endpoints)

    @property
    def face_count(self) -> int:
        return len(self.face_edges)

    @property
    def name(self) -> str:
        if not self.params:
            return self.family
        return f"{self.family}({','.join(map(str, self.params))})"

    @property
    def x_segments(self) -> tuple[BoundarySegment, ...]:
        return tuple(s for s in self.boundary_segments if s.segment_type == X_BOUNDARY)

    @property
    def z_segments(self) -> tuple[BoundarySegment, ...]:
        return tuple(s for s in self.boundary_segments if s.segment_type == Z_BOUNDARY)

    @property
    def is_closed(self) -> bool:
        return self.free_end_count == 0 and self.dual_free_end_count == 0

    @cached_property
    def vertex_stars(self) -> tuple[tuple[int, ...], ...]:
        """Incident edges of every interior vertex, ascending."""
        stars: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for e, ends in enumerate(self.edge_endpoints):
            for end in ends:
                if not end.is_free:
                    stars[end.index].append(e)
        return tuple(tuple(s) for s in stars)

    @cached_property
    def edge_faces(self) -> tuple[tuple[int, ...], ...]:
        faces: list[list[int]] = [[] for _ in range(self.edge_count)]
        for f, edges in enumerate(self.face_edges):
            for e in edges:
                faces[e].append(f)
        return tuple(tuple(f) for f in faces)

    @cached_property
    def free_end_edges(self) -> tuple[int, ...]:
        """The edge each free end is attached to."""
        owner = [-1] * self.free_end_count
        for e, ends in enumerate(self.edge_endpoints):
            for end in ends:
                if end.is_free:
                    owner[end.index] = e
        return tuple(owner)

    @cached_property
    def dual_free_ends(self) -> tuple[tuple[int, ...], ...]:
        """Canonical dual free-end ids of every edge (one per missing face slot)."""
        out = []
        next_id = 0
        for faces in self.edge_faces:
            missing = 2 - len(faces)
            out.append(tuple(range(next_id, next_id + missing)))
            next_id += missing
        return tuple(out)

    @cached_property
    def dual_free_end_count(self) -> int:
        return sum(len(d) for d in self.dual_free_ends)

    @cached_property
    def dual_free_end_edges(self) -> tuple[int, ...]:
        owner = []
        for e, ids in enumerate(self.dual_free_ends):
            owner.extend([e] * len(ids))
        return tuple(owner)

    def validate(self) -> None:
        """Check incidence and boundary invariants; raise LatticeError on violation."""
        if self.vertex_count < 0 or self.free_end_count < 0:
            raise LatticeError("negative cell count")
        used_free = Counter()
        degree = [0] * self.vertex_count
        for e, ends in enumerate(self.edge_endpoints):
            if len(ends) != 2:
                raise LatticeError(f"edge {e} does not have two endpoints")
            for end in ends:
                if end.kind == "v":
                    if not 0 <= end.index < self.vertex_count:
                        raise LatticeError(f"edge {e}: vertex {end.index} out of range")
                    degree[end.index] += 1
                elif end.kind == "free":
                    if not 0 <= end.index < self.free_end_count:
                        raise LatticeError(f"edge {e}: free end {end.index} out of range")
                    used_free[end.index] += 1
                else:
                    raise LatticeError(f"edge {e}: unknown endpoint kind {end.kind!r}")
            a, b = ends
            if not a.is_free and a == b:
                raise LatticeError(f"edge {e} is a loop at vertex {a.index}")
        for f_id in range(self.free_end_count):
            if used_free[f_id] != 1:
                raise LatticeError(f"free end {f_id} is attached to {used_free[f_id]} edges")
        for v, deg in enumerate(degree):
            if deg == 0:
                raise LatticeError(f"vertex {v} has no incident edges")

        on_faces = [0] * self.edge_count
        for f, edges in enumerate(self.face_edges):
            if not edges:
                raise LatticeError(f"face {f} has no edges")
            if len(set(edges)) != len(edges):
                raise LatticeError(f"face {f} lists an edge twice")
            parity = Counter()
            for e in edges:
                if not 0 <= e < self.edge_count:
                    raise LatticeError(f"face {f}: edge {e} out of range")
                on_faces[e] += 1
                for end in self.edge_endpoints[e]:
                    if not end.is_free:
                        parity[end.index] += 1
            odd = sorted(v for v, c in parity.items() if c % 2)
            if odd:
                raise LatticeError(
                    f"face {f} boundary is not closed at interior vertices {odd}"
                )
        for e, count in enumerate(on_faces):
            if count > 2:
                raise LatticeError(f"edge {e} lies on {count} faces")

        labels = [s.label for s in self.boundary_segments]
        if len(set(labels)) != len(labels):
            raise LatticeError("duplicate boundary segment labels")
        self._check_cover(X_BOUNDARY, self.free_end_count, "free end")
        self._check_cover(Z_BOUNDARY, self.dual_free_end_count, "dual free end")

    def _check_cover(self, kind: str, count: int, what: str) -> None:
        seen = Counter()
        for seg in self.boundary_segments:
            if seg.segment_type != kind:
                continue
            if not seg.members:
                raise LatticeError(f"segment {seg.label} is empty")
            for m in seg.members:
                if not 0 <= m < count:
                    raise LatticeError(f"segment {seg.label}: {what} {m} out of range")
                seen[m] += 1
        for i in range(count):
            if seen[i] != 1:
                raise LatticeError(f"{what} {i} belongs to {seen[i]} {kind}-segments")

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def segment(self, label: str) -> BoundarySegment:
        for seg in self.boundary_segments:
            if seg.label == label:
                return seg
        raise KeyError(label)


def _with_segments(
    vertex_count: int,
    edges: Sequence[tuple[Endpoint, Endpoint]],
    faces: Sequence[Sequence[int]],
    free_count: int,
    x_groups: Sequence[tuple[str, Sequence[int]]],
    z_groups: Sequence[tuple[str, Sequence[int]]],
    family: str,
    params: tuple[int, ...],
) -> Lattice:
    """Assemble a lattice; z-groups are given as edge lists.

    Each occurrence of an edge in a z-group consumes its next unused dual free
    end, so an edge on no face can be listed in two groups.
    """
    bare = Lattice(vertex_count, tuple(edges), tuple(map(tuple, faces)), free_count,
                   _placeholder_segments(vertex_count, edges, faces, free_count))
    cursor = Counter()
    segments = [BoundarySegment(X_BOUNDARY, label, tuple(m)) for label, m in x_groups]
    for label, edge_list in z_groups:
        members = []
        for e in edge_list:
            members.append(bare.dual_free_ends[e][cursor[e]])
            cursor[e] += 1
        segments.append(BoundarySegment(Z_BOUNDARY, label, tuple(members)))
    return Lattice(vertex_count, tuple(edges), tuple(map(tuple, faces)), free_count,
                   tuple(segments), family=family, params=params)


def _placeholder_segments(vertex_count, edges, faces, free_count) -> tuple[BoundarySegment, ...]:
    # one catch-all segment per type, only so the bare lattice validates
    on_faces = Counter(e for f in faces for e in f)
    dual_count = sum(2 - on_faces[e] for e in range(len(edges)))
    segs = []
    if free_count:
        segs.append(BoundarySegment(X_BOUNDARY, "_x", tuple(range(free_count))))
    if dual_count > 0:
        segs.append(BoundarySegment(Z_BOUNDARY, "_z", tuple(range(dual_count))))
    return tuple(segs)


def build_rectangle(n: int, m: int) -> Lattice:
    """Planar n x m lattice: x-boundary left/right, z-boundary top/bottom.

    It has ``2nm + n + m + 1`` edges, ``(n + 1) m`` vertices and ``n (m + 1)``
    faces; see the module docstring for the indexing.
    """
    if n < 1 or m < 1:
        raise LatticeError(f"rectangle needs n >= 1 and m >= 1, got {n} x {m}")
    stride = 2 * m + 1

    def h(r: int, j: int) -> int:
        return r * stride + j

    def vert(r: int, c: int) -> int:
        return r * stride + m + 1 + c

    edges: list[tuple[Endpoint, Endpoint]] = []
    free = 0
    left, right = [], []
    for r in range(n + 1):
        row = [vertex(r * m + c) for c in range(m)]
        edges.append((free_end(free), row[0]))
        left.append(free)
        free += 1
        edges.extend((row[c - 1], row[c]) for c in range(1, m))
        edges.append((row[-1], free_end(free)))
        right.append(free)
        free += 1
        if r < n:
            edges.extend((vertex(r * m + c), vertex((r + 1) * m + c)) for c in range(m))

    faces = []
    for r in range(n):
        for j in range(m + 1):
            if j == 0:
                faces.append((h(r, 0), vert(r, 0), h(r + 1, 0)))
            elif j == m:
                faces.append((h(r, m), vert(r, m - 1), h(r + 1, m)))
            else:
                faces.append((h(r, j), vert(r, j), h(r + 1, j), vert(r, j - 1)))

    top = [h(0, j) for j in range(m + 1)]
    bottom = [h(n, j) for j in range(m + 1)]
    return _with_segments(
        (n + 1) * m, edges, faces, free,
        [("V1", left), ("V2", right)],
        [("V*1", top), ("V*2", bottom)],
        "rectangle", (n, m),
    )


def build_disk(piece_count_k: int, scale: int) -> Lattice:
    """Disk whose boundary alternates ``k`` x-segments and ``k`` z-segments.

    Vertices form ``scale + 1`` rows of ``(2k - 1) * scale`` columns. Along the
    top row, x-segment ``V_i`` is a run of ``scale`` vertices with free ends
    sticking up (consecutive ones closed by truncated faces); runs are
    separated by ``scale`` plain boundary vertices. Going clockwise the
    boundary reads ``V1, V*1, V2, V*2, ..., Vk, V*k``: ``V*i`` is the gap
    after ``V_i`` and ``V*k`` is the rest of the perimeter.
    """
    k, s = piece_count_k, scale
    if k < 1:
        raise LatticeError(f"disk needs at least one boundary piece of each type, got k={k}")
    if s < 1:
        raise LatticeError(f"disk scale must be positive, got {s}")
    rows, cols = s + 1, (2 * k - 1) * s
    runs = [(2 * i * s, 2 * i * s + s - 1) for i in range(k)]

    def vid(r: int, c: int) -> int:
        return r * cols + c

    edges: list[tuple[Endpoint, Endpoint]] = []
    dangle: dict[int, int] = {}
    for a, b in runs:
        for c in range(a, b + 1):
            edges.append((free_end(len(dangle)), vertex(vid(0, c))))
            dangle[c] = len(edges) - 1
    horiz: dict[tuple[int, int], int] = {}
    vert: dict[tuple[int, int], int] = {}
    for r in range(rows):
        for c in range(cols - 1):
            horiz[r, c] = len(edges)
            edges.append((vertex(vid(r, c)), vertex(vid(r, c + 1))))
        if r < rows - 1:
            for c in range(cols):
                vert[r, c] = len(edges)
                edges.append((vertex(vid(r, c)), vertex(vid(r + 1, c))))

    faces = []
    for r in range(rows - 1):
        for c in range(cols - 1):
            faces.append((horiz[r, c], vert[r, c + 1], horiz[r + 1, c], vert[r, c]))
    for a, b in runs:
        for c in range(a, b):
            faces.append((dangle[c], horiz[0, c], dangle[c + 1]))

    x_groups = []
    for i, (a, b) in enumerate(runs):
        x_groups.append((f"V{i + 1}", [edges[dangle[c]][0].index for c in range(a, b + 1)]))

    z_edges: list[list[int]] = [[] for _ in range(k)]
    last = k - 1
    for i, (a, b) in enumerate(runs):
        z_edges[last if i == 0 else i - 1].append(dangle[a])  # bare left side
        z_edges[i].append(dangle[b])  # bare right side
        if i < last:
            z_edges[i].extend(horiz[0, c] for c in range(b, runs[i + 1][0]))
    z_edges[last].extend(vert[r, 0] for r in range(rows - 1))
    z_edges[last].extend(horiz[rows - 1, c] for c in range(cols - 1))
    z_edges[last].extend(vert[r, cols - 1] for r in range(rows - 1))
    return _with_segments(
        rows * cols, edges, faces, len(dangle),
        x_groups,
        [(f"V*{i + 1}", z_edges[i]) for i in range(k)],
        "disk", (k, s),
    )


def build_torus(n: int) -> Lattice:
    """n x n square lattice on the torus: 2n^2 edges, n^2 vertices, n^2 faces."""
    if n < 2:
        raise LatticeError(f"torus needs n >= 2, got {n}")

    def vid(r: int, c: int) -> int:
        return (r % n) * n + (c % n)

    def h(r: int, c: int) -> int:
        return 2 * vid(r, c)

    def v(r: int, c: int) -> int:
        return 2 * vid(r, c) + 1

    edges = []
    for r in range(n):
        for c in range(n):
            edges.append((vertex(vid(r, c)), vertex(vid(r, c + 1))))
            edges.append((vertex(vid(r, c)), vertex(vid(r + 1, c))))
    faces = [(h(r, c), v(r, c + 1), h(r + 1, c), v(r, c)) for r in range(n) for c in range(n)]
    return Lattice(n * n, tuple(edges), tuple(faces), 0, (), family="torus", params=(n,))


def dual(lattice: Lattice) -> Lattice:
    """Dual lattice sharing the edge indices of ``lattice``.

    Faces become vertices (same index), interior vertices become faces (same
    index), dual free ends become free ends (same id). Segment types swap.
    """
    edges = []
    for e, faces in enumerate(lattice.edge_faces):
        ends = [vertex(f) for f in faces]
        ends.extend(free_end(d) for d in lattice.dual_free_ends[e])
        edges.append(tuple(ends))
    faces = lattice.vertex_stars

    # free ends of the original become dual free ends of the dual, numbered
    # by the dual's canonical walk: edge order, then endpoint order
    relabel: dict[int, int] = {}
    for e, ends in enumerate(lattice.edge_endpoints):
        for end in ends:
            if end.is_free:
                relabel[end.index] = len(relabel)
    segments = []
    for seg in lattice.boundary_segments:
        if seg.segment_type == Z_BOUNDARY:
            segments.append(BoundarySegment(X_BOUNDARY, seg.label, seg.members))
        else:
            segments.append(
                BoundarySegment(Z_BOUNDARY, seg.label, tuple(relabel[m] for m in seg.members))
            )
    segments.sort(key=lambda s: s.segment_type)
    family = lattice.family[5:] if lattice.family.startswith("dual-") else f"dual-{lattice.family}"
    return Lattice(
        lattice.face_count,
        tuple(edges),
        faces,
        lattice.dual_free_end_count,
        tuple(segments),
        family=family,
        params=lattice.params,
    )


def incidence_graph(lattice: Lattice, *, with_segments: bool = True) -> nx.Graph:
    """Coloured incidence graph; isomorphic lattices give isomorphic graphs."""
    g = nx.Graph()
    for v in range(lattice.vertex_count):
        g.add_node(("v", v), kind="vertex")
    for f in range(lattice.free_end_count):
        g.add_node(("free", f), kind="free")
    for e, ends in enumerate(lattice.edge_endpoints):
        g.add_node(("e", e), kind="edge")
        for end in ends:
            g.add_edge(("e", e), ("v" if not end.is_free else "free", end.index))
        for d in lattice.dual_free_ends[e]:
            g.add_node(("dfree", d), kind="dfree")
            g.add_edge(("e", e), ("dfree", d))
    for f, edges in enumerate(lattice.face_edges):
        g.add_node(("f", f), kind="face")
        for e in edges:
            g.add_edge(("f", f), ("e", e))
    if with_segments:
        for seg in lattice.boundary_segments:
            node = ("seg", seg.label)
            g.add_node(node, kind=f"seg-{seg.segment_type}")
            member_kind = "free" if seg.segment_type == X_BOUNDARY else "dfree"
            for m in seg.members:
                g.add_edge(node, (member_kind, m))
    return g


def is_isomorphic(a: Lattice, b: Lattice, *, with_segments: bool = True) -> bool:
    """Isomorphism up to relabelling of every kind of cell and of segment labels."""
    if (a.vertex_count, a.edge_count, a.face_count, a.free_end_count) != (
        b.vertex_count, b.edge_count, b.face_count, b.free_end_count
    ):
        return False
    ga = incidence_graph(a, with_segments=with_segments)
    gb = incidence_graph(b, with_segments=with_segments)
    match = nx.algorithms.isomorphism.categorical_node_match("kind", None)
    if nx.weisfeiler_lehman_graph_hash(ga, node_attr="kind") != nx.weisfeiler_lehman_graph_hash(
        gb, node_attr="kind"
    ):
        return False
    return nx.is_isomorphic(ga, gb, node_match=match)


def closed_components(lattice: Lattice) -> Iterable[frozenset[int]]:
    """Connected components (as vertex sets) of the primal graph with no free end."""
    g = nx.Graph()
    g.add_nodes_from(range(lattice.vertex_count))
    anchored = set()
    for ends in lattice.edge_endpoints:
        a, b = ends
        if a.is_free or b.is_free:
            anchored.update(x.index for x in ends if not x.is_free)
        else:
            g.add_edge(a.index, b.index)
    for comp in nx.connected_components(g):
        if not comp & anchored:
            yield frozenset(comp)
