"""Text formats: lattice files and check-matrix / logical-basis exports.

Lattice file (``lattice v1``)
-----------------------------
Line oriented; ``#`` starts a comment, blank lines are ignored. The first
non-comment line must be ``lattice v1``. Then, in any order::

    edge <id> <endpoint> <endpoint>    endpoint = v<index> | free<index>
    face <id> <edge-id> [<edge-id> ...]
    xseg <label> free<index> [free<index> ...]
    zseg <label> dfree<index> [dfree<index> ...]

Edge and face ids must be exactly ``0 .. count-1``. The vertex count is one
more than the largest vertex index, the free-end count one more than the
largest free-end index. ``dfree<i>`` names the ``i``-th dual free end: walk
the edges in id order and number every missing face slot (an edge on one face
has one, an edge on no face has two).

Sparse check/logical format
---------------------------
One row per line, ``X <row>: <edge> <edge> ...`` for X-type rows and
``Z <row>: ...`` for Z-type rows, edges ascending; a header comment gives the
qubit count as ``# qubits <n>``.

Dense format
------------
MatrixMarket ``array integer general`` (column-major, one entry per line),
one file per check type.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from .lattice import BoundarySegment, Endpoint, Lattice, LatticeError, X_BOUNDARY, Z_BOUNDARY

HEADER = "lattice v1"
_ENDPOINT = re.compile(r"^(v|free)(\d+)$")
_MEMBER = {X_BOUNDARY: re.compile(r"^free(\d+)$"), Z_BOUNDARY: re.compile(r"^dfree(\d+)$")}
_SPARSE_ROW = re.compile(r"^([XZ])\s+(\d+)\s*:\s*(.*)$")


class LatticeFormatError(LatticeError):
    """Parse or validation failure, with the offending line number when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def dumps_lattice(lattice: Lattice) -> str:
    out = [HEADER, f"# {lattice.name}: {lattice.vertex_count} vertices, "
           f"{lattice.edge_count} edges, {lattice.face_count} faces"]
    for e, (a, b) in enumerate(lattice.edge_endpoints):
        out.append(f"edge {e} {a} {b}")
    for f, edges in enumerate(lattice.face_edges):
        out.append(f"face {f} " + " ".join(map(str, edges)))
    for seg in lattice.boundary_segments:
        prefix = "free" if seg.segment_type == X_BOUNDARY else "dfree"
        out.append(f"{seg.segment_type}seg {seg.label} "
                   + " ".join(f"{prefix}{m}" for m in seg.members))
    return "\n".join(out) + "\n"


def _parse_int(token: str, lineno: int, what: str) -> int:
    if not token.isdigit():
        raise LatticeFormatError(f"bad {what} {token!r}", lineno)
    return int(token)


def loads_lattice(text: str) -> Lattice:
    """Parse and validate a lattice file."""
    edges: dict[int, tuple[tuple[Endpoint, Endpoint], int]] = {}
    faces: dict[int, tuple[tuple[int, ...], int]] = {}
    segments: list[tuple[BoundarySegment, int]] = []
    seen_header = False
    max_vertex = max_free = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                raise LatticeFormatError(f"expected header {HEADER!r}", lineno)
            seen_header = True
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "edge":
            if len(tokens) != 4:
                raise LatticeFormatError("edge needs an id and two endpoints", lineno)
            eid = _parse_int(tokens[1], lineno, "edge id")
            ends = []
            for tok in tokens[2:]:
                match = _ENDPOINT.match(tok)
                if not match:
                    raise LatticeFormatError(f"bad endpoint {tok!r}", lineno)
                end = Endpoint(match.group(1), int(match.group(2)))
                if end.is_free:
                    max_free = max(max_free, end.index)
                else:
                    max_vertex = max(max_vertex, end.index)
                ends.append(end)
            if eid in edges:
                raise LatticeFormatError(f"edge {eid} defined twice", lineno)
            edges[eid] = (tuple(ends), lineno)
        elif kind == "face":
            if len(tokens) < 3:
                raise LatticeFormatError("face needs an id and at least one edge", lineno)
            fid = _parse_int(tokens[1], lineno, "face id")
            if fid in faces:
                raise LatticeFormatError(f"face {fid} defined twice", lineno)
            faces[fid] = (tuple(_parse_int(t, lineno, "edge id") for t in tokens[2:]), lineno)
        elif kind in ("xseg", "zseg"):
            seg_type = kind[0]
            if len(tokens) < 3:
                raise LatticeFormatError(f"{kind} needs a label and members", lineno)
            members = []
            for tok in tokens[2:]:
                match = _MEMBER[seg_type].match(tok)
                if not match:
                    raise LatticeFormatError(f"bad {kind} member {tok!r}", lineno)
                members.append(int(match.group(1)))
            segments.append((BoundarySegment(seg_type, tokens[1], tuple(members)), lineno))
        else:
            raise LatticeFormatError(f"unknown directive {kind!r}", lineno)
    if not seen_header:
        raise LatticeFormatError("empty lattice file")
    for what, table in (("edge", edges), ("face", faces)):
        if sorted(table) != list(range(len(table))):
            missing = sorted(set(range(max(table, default=-1) + 1)) - set(table))
            raise LatticeFormatError(f"{what} ids are not contiguous; missing {missing}")
    for fid, (face, lineno) in faces.items():
        for e in face:
            if e not in edges:
                raise LatticeFormatError(f"face {fid} uses undefined edge {e}", lineno)

    edge_list = tuple(edges[e][0] for e in range(len(edges)))
    face_list = tuple(faces[f][0] for f in range(len(faces)))
    try:
        return Lattice(max_vertex + 1, edge_list, face_list, max_free + 1,
                       tuple(s for s, _ in segments))
    except LatticeError as exc:
        raise LatticeFormatError(str(exc), _blame_line(str(exc), edges, faces, segments)) from exc


def _blame_line(message: str, edges, faces, segments) -> int | None:
    # point at the line of the first cell named in the validation message
    for pattern, table in ((r"^face (\d+)", faces), (r"^edge (\d+)", edges)):
        match = re.match(pattern, message)
        if match and int(match.group(1)) in table:
            return table[int(match.group(1))][1]
    match = re.match(r"^segment (\S+):", message)
    if match:
        for seg, lineno in segments:
            if seg.label == match.group(1):
                return lineno
    return None


def load_lattice(path: str | Path) -> Lattice:
    return loads_lattice(Path(path).read_text())


def save_lattice(lattice: Lattice, path: str | Path) -> None:
    Path(path).write_text(dumps_lattice(lattice))


def sparse_rows(x_rows: Sequence[Iterable[int]], z_rows: Sequence[Iterable[int]],
                num_qubits: int, title: str = "") -> str:
    out = []
    if title:
        out.append(f"# {title}")
    out.append(f"# qubits {num_qubits}")
    for i, row in enumerate(x_rows):
        out.append(f"X {i}: " + " ".join(map(str, sorted(row))))
    for i, row in enumerate(z_rows):
        out.append(f"Z {i}: " + " ".join(map(str, sorted(row))))
    return "\n".join(out) + "\n"


def parse_sparse(text: str) -> tuple[list[list[int]], list[list[int]], int | None]:
    """Inverse of :func:`sparse_rows`: (X rows, Z rows, qubit count or None)."""
    rows: dict[str, dict[int, list[int]]] = {"X": {}, "Z": {}}
    num_qubits = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            match = re.match(r"^#\s*qubits\s+(\d+)", stripped)
            if match:
                num_qubits = int(match.group(1))
            continue
        if not stripped:
            continue
        match = _SPARSE_ROW.match(stripped)
        if not match:
            raise ValueError(f"line {lineno}: not a sparse row: {stripped!r}")
        kind, idx, rest = match.group(1), int(match.group(2)), match.group(3)
        rows[kind][idx] = [int(t) for t in rest.split()]
    out = []
    for kind in "XZ":
        table = rows[kind]
        if sorted(table) != list(range(len(table))):
            raise ValueError(f"{kind} rows are not numbered 0..{len(table) - 1}")
        out.append([table[i] for i in range(len(table))])
    return out[0], out[1], num_qubits


def matrix_market(matrix: np.ndarray, comment: str = "") -> str:
    matrix = np.asarray(matrix, dtype=np.uint8)
    out = ["%%MatrixMarket matrix array integer general"]
    if comment:
        out.append(f"% {comment}")
    out.append(f"{matrix.shape[0]} {matrix.shape[1]}")
    out.extend(str(v) for v in matrix.T.reshape(-1))
    return "\n".join(out) + "\n"


def parse_matrix_market(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("%")]
    rows, cols = map(int, lines[0].split())
    values = np.array([int(v) for v in lines[1:]], dtype=np.uint8)
    if values.size != rows * cols:
        raise ValueError("entry count does not match the declared shape")
    return values.reshape(cols, rows).T.copy()


def dense_csv(matrix: np.ndarray) -> str:
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in np.asarray(matrix))
