"""Command-line front end.

Exit codes: 0 success, 2 usage or invalid parameters, 3 path and exhaustive
distances disagree, 4 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .distance import (
    DistanceBoundError,
    DistanceUnsupportedError,
    NoLogicalQubitsError,
    distance_by_path,
    distance_exhaustive,
)
from .formats import (
    LatticeFormatError,
    dense_csv,
    dumps_lattice,
    load_lattice,
    matrix_market,
    sparse_rows,
)
from .homology import logical_basis
from .lattice import Lattice, LatticeError, build_disk, build_rectangle, build_torus
from .pauli import build_code, logical_count
from .sim import NoiseModel, build_decoder, format_csv, report_row, run_trials
from .verify import FAIL, run_checks

EXIT_OK, EXIT_USAGE, EXIT_INCONSISTENT, EXIT_CHECK_FAILED = 0, 2, 3, 4
FAMILIES = ("rectangle", "disk", "torus", "file")
SUBCOMMANDS = ("build", "params", "distance", "export", "simulate", "verify")


class UsageError(Exception):
    pass


@dataclass
class CommandConfig:
    subcommand: str
    family: str
    n: int | None = None
    m: int | None = None
    k: int | None = None
    scale: int = 2
    file: Path | None = None
    out: Path | None = None
    seed: int = 0
    trials: int = 10_000
    px: tuple[float, ...] = (0.01,)
    pz: tuple[float, ...] = (0.01,)
    weight_cap: int | None = None
    format: str = "sparse"
    workers: int = 1

    def build_lattice(self) -> Lattice:
        if self.family == "rectangle":
            if self.n is None or self.m is None:
                raise UsageError("rectangle needs -n and -m")
            return build_rectangle(self.n, self.m)
        if self.family == "disk":
            if self.k is None:
                raise UsageError("disk needs -k")
            return build_disk(self.k, self.scale)
        if self.family == "torus":
            if self.n is None:
                raise UsageError("torus needs -n")
            return build_torus(self.n)
        if self.family == "file":
            if self.file is None:
                raise UsageError("file family needs --file")
            return load_lattice(self.file)
        raise UsageError(f"unknown family {self.family!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError(f"probabilities must lie in [0, 1]: {text!r}")
    return values


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundary-codes",
        description="Stabilizer codes on lattices with mixed x/z boundaries.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("family_pos", nargs="?", choices=FAMILIES, metavar="FAMILY",
                        help="lattice family: rectangle, disk, torus or file")
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("-n", type=int)
    common.add_argument("-m", type=int)
    common.add_argument("-k", type=int, help="boundary pieces of each type (disk)")
    common.add_argument("--scale", type=int, default=2, help="disk arc length in edges")
    common.add_argument("--file", type=Path, help="lattice file (family 'file')")
    common.add_argument("--out", type=Path)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--px", type=_float_list, default=(0.01,),
                        help="X flip probability; comma-separated for a sweep")
    common.add_argument("--pz", type=_float_list, default=(0.01,))
    common.add_argument("--weight-cap", type=int)
    common.add_argument("--format", choices=("sparse", "dense", "csv"), default=None)
    common.add_argument("--workers", type=int, default=1,
                        help="simulation worker processes (capped by $BOUNDARY_CODES_THREADS)")
    helps = {
        "build": "write the lattice file",
        "params": "print [[n, k, d]]",
        "distance": "distance by path and by exhaustive search",
        "export": "write check matrices, logical basis and lattice file",
        "simulate": "Monte-Carlo logical failure rates as CSV",
        "verify": "run every structural check",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_config(argv: list[str] | None) -> CommandConfig:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.family and args.family_pos and args.family != args.family_pos:
        parser.error("conflicting family arguments")
    family = args.family or args.family_pos or ("file" if args.file else None)
    if family is None:
        parser.error("a lattice family is required")
    fmt = args.format or ("csv" if args.subcommand == "simulate" else "sparse")
    return CommandConfig(
        subcommand=args.subcommand, family=family, n=args.n, m=args.m, k=args.k,
        scale=args.scale, file=args.file, out=args.out, seed=args.seed, trials=args.trials,
        px=args.px, pz=args.pz, weight_cap=args.weight_cap, format=fmt, workers=args.workers,
    )


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_build(cfg: CommandConfig) -> int:
    lattice = cfg.build_lattice()
    _emit(dumps_lattice(lattice), cfg.out)
    if cfg.out is not None:
        print(f"wrote {lattice.name} ({lattice.edge_count} edges) to {cfg.out}")
    return EXIT_OK


def _distances(code, weight_cap):
    """(path result or None, exhaustive result or None, consistent?)."""
    by_path = exhaustive = None
    try:
        by_path = distance_by_path(code)
    except DistanceUnsupportedError:
        pass
    cap = by_path.d if by_path is not None else weight_cap
    try:
        exhaustive = distance_exhaustive(code, cap)
    except DistanceBoundError:
        if by_path is not None:
            return by_path, None, False
    consistent = by_path is None or exhaustive is None or by_path.d == exhaustive.d
    return by_path, exhaustive, consistent


def cmd_params(cfg: CommandConfig) -> int:
    lattice = cfg.build_lattice()
    code = build_code(lattice)
    n, k = code.num_qubits, logical_count(code)
    print(f"lattice: {lattice.name}")
    print(f"qubits: {n}")
    print(f"generators: {len(code.generators)} "
          f"(x-type {len(code.vertex_generators)}, z-type {len(code.face_generators)})")
    print(f"logical qubits: {k}")
    if k == 0:
        print("distance: undefined (no logical qubits)")
        print(f"[[{n},0,-]]")
        return EXIT_OK
    by_path, exhaustive, consistent = _distances(code, cfg.weight_cap)
    if not consistent:
        print(f"distance: INCONSISTENT (path {by_path.d}, exhaustive "
              f"{exhaustive.d if exhaustive else 'none up to ' + str(by_path.d)})")
        return EXIT_INCONSISTENT
    if by_path is not None and exhaustive is not None:
        d, how = by_path.d, "path; exhaustive agrees"
    elif exhaustive is not None:
        d, how = exhaustive.d, "exhaustive"
    else:
        print(f"distance: > {cfg.weight_cap} (exhaustive search capped)")
        print(f"[[{n},{k},>{cfg.weight_cap}]]")
        return EXIT_OK
    print(f"distance: {d} ({how})")
    if lattice.family == "rectangle":
        rn, rm = lattice.params
        closed = min(rn + 1, rm + 1)
        print(f"closed form min(n+1, m+1): {closed} ({'ok' if closed == d else 'MISMATCH'})")
        if closed != d:
            return EXIT_INCONSISTENT
    print(f"[[{n},{k},{d}]]")
    return EXIT_OK


def cmd_distance(cfg: CommandConfig) -> int:
    code = build_code(cfg.build_lattice())
    if logical_count(code) == 0:
        print("distance: undefined (no logical qubits)")
        return EXIT_OK
    by_path, exhaustive, consistent = _distances(code, cfg.weight_cap)
    for label, res in (("path", by_path), ("exhaustive", exhaustive)):
        if res is None:
            print(f"{label}: n/a")
        else:
            kind = "Z" if res.witness.z else "X"
            print(f"{label}: d={res.d} witness {kind} on edges {res.witness.support}")
    return EXIT_OK if consistent else EXIT_INCONSISTENT


def cmd_export(cfg: CommandConfig) -> int:
    lattice = cfg.build_lattice()
    code = build_code(lattice)
    outdir = cfg.out or Path(".")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def write(name: str, text: str) -> None:
        (outdir / name).write_text(text)
        written.append(name)

    write("lattice.txt", dumps_lattice(lattice))
    if cfg.format == "sparse":
        write("checks.txt", sparse_rows(
            [g.support for g in code.vertex_generators],
            [g.support for g in code.face_generators],
            code.num_qubits, f"check matrices of {lattice.name}",
        ))
    elif cfg.format == "dense":
        write("hx.mtx", matrix_market(code.hx, f"H_X of {lattice.name}"))
        write("hz.mtx", matrix_market(code.hz, f"H_Z of {lattice.name}"))
    else:
        write("hx.csv", dense_csv(code.hx))
        write("hz.csv", dense_csv(code.hz))
    basis = logical_basis(code)
    write("logicals.txt", sparse_rows(
        [op.support for op in basis.x_logicals],
        [op.support for op in basis.z_logicals],
        code.num_qubits, f"logical basis of {lattice.name}; X i pairs with Z i",
    ))
    for name in written:
        print(outdir / name)
    return EXIT_OK


def cmd_simulate(cfg: CommandConfig) -> int:
    lattice = cfg.build_lattice()
    code = build_code(lattice)
    k = logical_count(code)
    d = None
    if k:
        by_path, exhaustive, _ = _distances(code, cfg.weight_cap)
        d = (by_path or exhaustive).d if (by_path or exhaustive) else None
    if len(cfg.px) != len(cfg.pz) and 1 not in (len(cfg.px), len(cfg.pz)):
        raise UsageError("--px and --pz lists must have equal length or length 1")
    count = max(len(cfg.px), len(cfg.pz))
    pxs = cfg.px * count if len(cfg.px) == 1 else cfg.px
    pzs = cfg.pz * count if len(cfg.pz) == 1 else cfg.pz
    decoder = build_decoder(code)
    rows = []
    for px, pz in zip(pxs, pzs):
        report = run_trials(code, NoiseModel(px, pz), cfg.trials, cfg.seed,
                            decoder=decoder, workers=cfg.workers)
        rows.append(report_row(lattice.name, code.num_qubits, k, d, report))
    _emit(format_csv(rows), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: CommandConfig) -> int:
    try:
        lattice = cfg.build_lattice()
    except LatticeFormatError as exc:
        print(f"FAIL lattice-file: {exc}")
        print(json.dumps({"passed": False, "failed": ["lattice-file"], "line": exc.line}))
        return EXIT_CHECK_FAILED
    code = build_code(lattice)
    results = run_checks(code, weight_cap=cfg.weight_cap)
    for r in results:
        print(f"{r.status.upper():4} {r.name}" + (f": {r.detail}" if r.detail else ""))
    failed = [r.name for r in results if r.status == FAIL]
    print(json.dumps({"lattice": lattice.name, "passed": not failed, "failed": failed,
                      "checks": len(results)}))
    return EXIT_CHECK_FAILED if failed else EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "params": cmd_params,
    "distance": cmd_distance,
    "export": cmd_export,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    cfg = parse_config(argv)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (UsageError, LatticeError, NoLogicalQubitsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
