import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundary_codes.gf2 import from_support
from boundary_codes.homology import (
    DUAL,
    PRIMAL,
    NotACycleError,
    homology_dim,
    is_trivial,
    logical_basis,
    relative_complex,
    shortest_boundary_path,
)
from boundary_codes.lattice import build_disk, build_rectangle, build_torus, dual
from boundary_codes.pauli import build_code, logical_count
from conftest import dense_rank

FAMILIES = (
    [build_rectangle(n, m) for n in range(1, 5) for m in range(1, 5)]
    + [build_torus(n) for n in (2, 3, 4)]
    + [build_disk(k, s) for k in range(1, 5) for s in (1, 2)]
)


@pytest.mark.parametrize("lattice", FAMILIES, ids=lambda lat: lat.name)
def test_boundary_of_boundary_vanishes(lattice):
    for side in (PRIMAL, DUAL):
        cx = relative_complex(lattice, side)
        assert not ((cx.d1.astype(int) @ cx.d2.astype(int)) % 2).any()
        cx.check()


@pytest.mark.parametrize("lattice", FAMILIES, ids=lambda lat: lat.name)
def test_homology_matches_rank_nullity_and_logical_count(lattice):
    cx = relative_complex(lattice, PRIMAL)
    oracle = lattice.edge_count - dense_rank(cx.d1) - dense_rank(cx.d2.T)
    assert homology_dim(cx) == oracle
    assert homology_dim(relative_complex(lattice, DUAL)) == oracle
    assert logical_count(build_code(lattice)) == oracle


def test_family_homology_dimensions():
    assert homology_dim(relative_complex(build_rectangle(2, 3))) == 1
    assert homology_dim(relative_complex(dual(build_rectangle(2, 3)))) == 1
    assert homology_dim(relative_complex(build_torus(3))) == 2
    for k in range(1, 5):
        assert homology_dim(relative_complex(build_disk(k, 2))) == k - 1


def test_is_trivial_examples():
    lat = build_rectangle(2, 3)
    cx = relative_complex(lat)
    assert is_trivial(cx, 0)
    for f in range(lat.face_count):
        assert is_trivial(cx, from_support(lat.face_edges[f]))
    path = shortest_boundary_path(lat, "V1", ["V2"])
    assert len(path) == 4
    assert not is_trivial(cx, from_support(path))
    # a path plus a face boundary is in the same class
    moved = from_support(path) ^ from_support(lat.face_edges[1])
    assert not is_trivial(cx, moved)
    arr = np.zeros(lat.edge_count, dtype=np.uint8)
    arr[path] = 1
    assert not is_trivial(cx, arr)


def test_is_trivial_rejects_non_cycles():
    lat = build_rectangle(2, 3)
    cx = relative_complex(lat)
    with pytest.raises(NotACycleError):
        is_trivial(cx, from_support([4]))  # an interior edge has two real endpoints


def test_shortest_path_lengths():
    for n in range(1, 5):
        for m in range(1, 5):
            lat = build_rectangle(n, m)
            assert len(shortest_boundary_path(lat, "V1", ["V2"])) == m + 1
            assert len(shortest_boundary_path(dual(lat), "V*1", ["V*2"])) == n + 1


def test_shortest_path_none_when_unreachable():
    lat = build_rectangle(2, 2)
    assert shortest_boundary_path(lat, "V1", []) is None


@pytest.mark.parametrize("lattice", FAMILIES, ids=lambda lat: lat.name)
def test_logical_basis_properties(lattice):
    code = build_code(lattice)
    basis = logical_basis(code)
    k = logical_count(code)
    assert len(basis) == k
    assert np.array_equal(basis.pairing_matrix(), np.eye(k, dtype=np.uint8))
    primal, dual_cx = relative_complex(lattice, PRIMAL), relative_complex(lattice, DUAL)
    for z in basis.z_logicals:
        assert z.x == 0 and all(z.commutes_with(g) for g in code.generators)
        assert not is_trivial(primal, z.z)
    for x in basis.x_logicals:
        assert x.z == 0 and all(x.commutes_with(g) for g in code.generators)
        assert not is_trivial(dual_cx, x.x)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_disk_logicals_follow_boundary_paths(k):
    # Z_i connects x-segments i and i+1; X_i connects z-segment i to the last
    lat = build_disk(k, 2)
    basis = logical_basis(build_code(lat))
    xs, zs = lat.x_segments, lat.z_segments
    for i, z in enumerate(basis.z_logicals):
        touched = {seg.label for seg in xs if any(lat.free_end_edges[f] in z.support
                                                   for f in seg.members)}
        assert touched == {xs[i].label, xs[i + 1].label}
    dl = dual(lat)
    for i in range(k - 1):
        path = shortest_boundary_path(dl, zs[i].label, [zs[-1].label])
        assert path is not None
    # the pairing is the identity; the unpaired path classes must pair diagonally too
    assert np.array_equal(basis.pairing_matrix(), np.eye(k - 1, dtype=np.uint8))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_adding_boundaries_preserves_class(n, m, data):
    lat = build_rectangle(n, m)
    cx = relative_complex(lat)
    path = from_support(shortest_boundary_path(lat, "V1", ["V2"]))
    faces = data.draw(st.lists(st.integers(0, lat.face_count - 1), max_size=6))
    chain = 0
    for f in faces:
        chain ^= from_support(lat.face_edges[f])
    assert is_trivial(cx, chain)
    assert not is_trivial(cx, path ^ chain)


def test_operator_commutant_equals_relative_cycles():
    # operators commuting with all stabilizers, per sector, are exactly the
    # relative cycles: kernel dimensions agree on both sides
    for lat in FAMILIES:
        code = build_code(lat)
        for side, checks in ((PRIMAL, code.hx), (DUAL, code.hz)):
            cx = relative_complex(lat, side)
            r = dense_rank(checks)
            assert r == dense_rank(cx.d1) == dense_rank(np.vstack([checks, cx.d1]))
