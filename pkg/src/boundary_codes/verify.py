"""Structural self-checks for a lattice code, as run by ``boundary-codes verify``."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import networkx as nx
import numpy as np

from . import gf2
from .distance import (
    DistanceBoundError,
    DistanceUnsupportedError,
    distance_by_path,
    distance_exhaustive,
)
from .formats import parse_sparse
from .homology import DUAL, PRIMAL, HomologyError, homology_dim, logical_basis, relative_complex
from .lattice import closed_components, dual, is_isomorphic
from .pauli import StabilizerCode, logical_count
from .sim import DecoderSizeError, correction_failures

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL


def load_golden() -> tuple[list[list[int]], list[list[int]], int]:
    """Reference vertex/face supports of the 2x3 rectangle."""
    text = resources.files("boundary_codes").joinpath("data/golden_2x3.txt").read_text()
    x_rows, z_rows, n = parse_sparse(text)
    return x_rows, z_rows, n


def stabilizer_graph(x_rows, z_rows, num_qubits: int) -> nx.Graph:
    """Bipartite generator/qubit graph with generators coloured by type."""
    g = nx.Graph()
    g.add_nodes_from((("q", q) for q in range(num_qubits)), kind="qubit")
    for kind, rows in (("X", x_rows), ("Z", z_rows)):
        for i, row in enumerate(rows):
            g.add_node((kind, i), kind=kind)
            g.add_edges_from(((kind, i), ("q", q)) for q in row)
    return g


def same_stabilizers(a: nx.Graph, b: nx.Graph) -> bool:
    match = nx.algorithms.isomorphism.categorical_node_match("kind", None)
    return nx.is_isomorphic(a, b, node_match=match)


def matches_golden(code: StabilizerCode) -> bool:
    x_rows, z_rows, n = load_golden()
    ours = stabilizer_graph(
        [g.support for g in code.vertex_generators],
        [g.support for g in code.face_generators],
        code.num_qubits,
    )
    return same_stabilizers(ours, stabilizer_graph(x_rows, z_rows, n))


def _result(name: str, ok: bool, detail: str = "") -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, detail)


def run_checks(code: StabilizerCode, *, weight_cap: int | None = None) -> list[CheckResult]:
    """Every structural invariant of the code; failures never raise."""
    lattice = code.lattice
    results: list[CheckResult] = []

    def attempt(name, fn):
        try:
            results.append(fn())
        except (HomologyError, ArithmeticError, ValueError, RuntimeError) as exc:
            results.append(CheckResult(name, FAIL, f"{type(exc).__name__}: {exc}"))

    def css():
        ok = all(g.z == 0 for g in code.vertex_generators) and all(
            g.x == 0 for g in code.face_generators
        )
        return _result("css", ok, f"{len(code.vertex_generators)} X, {len(code.face_generators)} Z")

    def commutation():
        clash = (code.hx.astype(np.int64) @ code.hz.T.astype(np.int64)) % 2
        return _result("commutation", not clash.any(), f"{int(clash.sum())} anticommuting pairs")

    def dependencies():
        # products over closed components are the only relations
        closed_primal = list(closed_components(lattice))
        closed_dual = list(closed_components(dual(lattice)))
        rx, rz = gf2.rank_rows(code.x_rows), gf2.rank_rows(code.z_rows)
        expect_x = len(code.vertex_generators) - len(closed_primal)
        expect_z = len(code.face_generators) - len(closed_dual)
        products_vanish = all(
            _xor(code.x_rows[v] for v in comp) == 0 for comp in closed_primal
        ) and all(_xor(code.z_rows[f] for f in comp) == 0 for comp in closed_dual)
        ok = rx == expect_x and rz == expect_z and products_vanish
        return _result(
            "dependencies", ok,
            f"rank H_X {rx}/{len(code.vertex_generators)}, rank H_Z {rz}/{len(code.face_generators)}, "
            f"relations {len(closed_primal)}+{len(closed_dual)}",
        )

    def complexes():
        relative_complex(lattice, PRIMAL).check()
        relative_complex(lattice, DUAL).check()
        return _result("chain-complex", True, "d1.d2 = 0 on both sides")

    def duality():
        hp = homology_dim(relative_complex(lattice, PRIMAL))
        hd = homology_dim(relative_complex(lattice, DUAL))
        k = logical_count(code)
        return _result("homology-duality", hp == hd == k, f"primal {hp}, dual {hd}, k {k}")

    def involution():
        return _result("dual-involution", is_isomorphic(dual(dual(lattice)), lattice))

    def logicals():
        basis = logical_basis(code)
        k = len(basis)
        pairing_ok = np.array_equal(basis.pairing_matrix(), np.eye(k, dtype=np.uint8))
        ops = basis.z_logicals + basis.x_logicals
        commute_ok = all(op.commutes_with(g) for op in ops for g in code.generators)
        full = code.stabilizer_rank + 2 * k
        stacked = gf2.rank_rows([g.symplectic for g in code.generators] + [op.symplectic for op in ops])
        return _result(
            "logical-basis", pairing_ok and commute_ok and stacked == full,
            f"k={k}, pairing {'identity' if pairing_ok else 'NOT identity'}",
        )

    for name, fn in (
        ("css", css), ("commutation", commutation), ("dependencies", dependencies),
        ("chain-complex", complexes), ("homology-duality", duality),
        ("dual-involution", involution), ("logical-basis", logicals),
    ):
        attempt(name, fn)

    attempt("family-counts", lambda: _family_counts(code))

    d = None
    if logical_count(code) == 0:
        results.append(CheckResult("distance", SKIP, "no logical qubits"))
    else:
        try:
            exhaustive = distance_exhaustive(code, weight_cap)
            d = exhaustive.d
            try:
                by_path = distance_by_path(code)
                results.append(_result(
                    "distance", by_path.d == d, f"path {by_path.d}, exhaustive {d}"))
            except DistanceUnsupportedError:
                results.append(CheckResult("distance", PASS, f"exhaustive {d} (no path method)"))
        except DistanceBoundError as exc:
            results.append(CheckResult("distance", SKIP, str(exc)))
        if d is not None and lattice.family == "rectangle":
            n, m = lattice.params
            results.append(_result("distance-closed-form", d == min(n + 1, m + 1),
                                   f"d={d}, min(n+1,m+1)={min(n + 1, m + 1)}"))

    if d is not None:
        t = (d - 1) // 2
        try:
            witness = next(correction_failures(code, t), None)
            results.append(_result(
                "protection", witness is None,
                f"all errors of weight <= {t} corrected" if witness is None
                else f"uncorrected error {witness.support}",
            ))
        except DecoderSizeError as exc:
            results.append(CheckResult("protection", SKIP, str(exc)))

    if lattice.family == "rectangle" and lattice.params == (2, 3):
        attempt("golden-2x3", lambda: _result("golden-2x3", matches_golden(code),
                                              "17 generators vs reference list"))
    return results


def _family_counts(code: StabilizerCode) -> CheckResult:
    lat = code.lattice
    ngen = len(code.generators)
    if lat.family == "rectangle":
        n, m = lat.params
        ok = (
            lat.edge_count == 2 * n * m + n + m + 1
            and len(code.vertex_generators) == (n + 1) * m
            and len(code.face_generators) == n * (m + 1)
        )
        detail = f"edges {lat.edge_count}, generators {ngen} (expect {2 * n * m + n + m})"
    elif lat.family == "torus":
        (n,) = lat.params
        ok = (lat.edge_count, lat.vertex_count, lat.face_count) == (2 * n * n, n * n, n * n)
        ok = ok and lat.euler_characteristic() == 0
        detail = f"E={lat.edge_count} V={lat.vertex_count} F={lat.face_count}"
    elif lat.family == "disk":
        k, _ = lat.params
        ok = len(lat.x_segments) == len(lat.z_segments) == k
        detail = f"{len(lat.x_segments)} x-segments, {len(lat.z_segments)} z-segments"
    else:
        ok = ngen == lat.vertex_count + lat.face_count
        detail = f"{ngen} generators on {lat.vertex_count} vertices + {lat.face_count} faces"
    return _result("family-counts", ok, detail)


def _xor(values) -> int:
    acc = 0
    for v in values:
        acc ^= v
    return acc
