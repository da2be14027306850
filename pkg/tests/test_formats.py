import numpy as np
import pytest

from boundary_codes.formats import (
    LatticeFormatError,
    dense_csv,
    dumps_lattice,
    load_lattice,
    loads_lattice,
    matrix_market,
    parse_matrix_market,
    parse_sparse,
    save_lattice,
    sparse_rows,
)
from boundary_codes.lattice import build_disk, build_rectangle, build_torus, is_isomorphic
from boundary_codes.pauli import build_code


@pytest.mark.parametrize("lattice", [
    build_rectangle(1, 1), build_rectangle(2, 3), build_torus(2), build_disk(3, 2),
], ids=lambda lat: lat.name)
def test_lattice_round_trip(lattice, tmp_path):
    text = dumps_lattice(lattice)
    back = loads_lattice(text)
    assert back == lattice
    assert is_isomorphic(back, lattice)
    assert dumps_lattice(back).splitlines()[2:] == text.splitlines()[2:]
    path = tmp_path / "lat.txt"
    save_lattice(lattice, path)
    assert load_lattice(path) == lattice


def test_torus_round_trip_keeps_euler_characteristic():
    back = loads_lattice(dumps_lattice(build_torus(2)))
    assert back.euler_characteristic() == 0
    assert back.is_closed


def test_comments_and_blank_lines():
    text = "# header comment\n\n" + dumps_lattice(build_rectangle(1, 1)) + "\n# trailing\n"
    assert loads_lattice(text) == build_rectangle(1, 1)


def _corrupt(lines, old, new):
    return "\n".join(new if ln == old else ln for ln in lines) + "\n"


@pytest.mark.parametrize("mutate,fragment", [
    (lambda ls: ["lattice v2"] + ls[1:], "header"),
    (lambda ls: ls + ["edge 99 v0"], "two endpoints"),
    (lambda ls: ls + ["bogus 1"], "unknown directive"),
    (lambda ls: ls + ["edge x v0 v1"], "bad edge id"),
    (lambda ls: ls + ["edge 0 v0 v1"], "defined twice"),
    (lambda ls: ls + ["xseg W foo"], "bad xseg member"),
])
def test_malformed_lines_report_line_number(mutate, fragment):
    lines = dumps_lattice(build_rectangle(1, 1)).splitlines()
    text = "\n".join(mutate(lines)) + "\n"
    with pytest.raises(LatticeFormatError) as info:
        loads_lattice(text)
    assert fragment in str(info.value)
    assert info.value.line is not None
    assert str(info.value).startswith(f"line {info.value.line}:")


def test_validation_failure_points_at_face_line():
    lines = dumps_lattice(build_rectangle(2, 3)).splitlines()
    idx = next(i for i, ln in enumerate(lines) if ln.startswith("face 1 "))
    parts = lines[idx].split()
    lines[idx] = " ".join(parts[:-1])  # drop one edge: the face is no longer closed
    with pytest.raises(LatticeFormatError) as info:
        loads_lattice("\n".join(lines) + "\n")
    assert info.value.line == idx + 1
    assert "not closed" in str(info.value)


def test_missing_ids_and_undefined_edges():
    lines = dumps_lattice(build_rectangle(1, 1)).splitlines()
    with pytest.raises(LatticeFormatError, match="not contiguous"):
        loads_lattice("\n".join(ln for ln in lines if not ln.startswith("edge 2 ")) + "\n")
    with pytest.raises(LatticeFormatError, match="undefined edge"):
        loads_lattice("\n".join(lines + ["face 2 0 77"]) + "\n")
    with pytest.raises(LatticeFormatError, match="empty"):
        loads_lattice("# nothing\n")


def test_sparse_round_trip(rect23):
    xs = [g.support for g in rect23.vertex_generators]
    zs = [g.support for g in rect23.face_generators]
    text = sparse_rows(xs, zs, 18, "title")
    assert text.startswith("# title\n# qubits 18\n")
    assert parse_sparse(text) == (xs, zs, 18)
    with pytest.raises(ValueError):
        parse_sparse("X 0: 1 2\nY 1: 3\n")
    with pytest.raises(ValueError):
        parse_sparse("X 1: 1 2\n")


def test_dense_formats(rect23):
    text = matrix_market(rect23.hx, "H_X")
    lines = text.splitlines()
    assert lines[0].startswith("%%MatrixMarket matrix array")
    assert lines[2] == "9 18"
    assert len(lines) == 3 + 9 * 18
    assert np.array_equal(parse_matrix_market(text), rect23.hx)
    rows = dense_csv(rect23.hz).splitlines()
    assert len(rows) == 8 and all(len(r.split(",")) == 18 for r in rows)
    with pytest.raises(ValueError):
        parse_matrix_market("%%MatrixMarket\n2 2\n1\n0\n")


def test_golden_file_parses():
    from boundary_codes.verify import load_golden

    xs, zs, n = load_golden()
    assert (len(xs), len(zs), n) == (9, 8, 18)
    assert sorted(len(r) for r in xs) == [3, 3, 3, 3, 3, 3, 4, 4, 4]
    code = build_code(build_rectangle(2, 3))
    assert sorted(len(r) for r in zs) == sorted(g.weight for g in code.face_generators)
