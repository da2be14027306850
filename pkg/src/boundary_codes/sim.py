"""Monte-Carlo and exhaustive checks of error correction.

Decoding is per CSS sector with a minimum-weight lookup table: Z errors are
decoded from the vertex-check syndrome, X errors from the face-check syndrome.
A trial fails when the residual (error times correction) in some sector is a
nontrivial relative cycle.

Randomness: trials are grouped in blocks of ``BLOCK_SIZE``. Block ``b`` draws
from ``numpy.random.PCG64`` seeded with ``SeedSequence(seed, spawn_key=(b,))``
(the ``b``-th child of ``SeedSequence(seed)``), X flips first, then Z flips.
Blocks are independent, so any number of workers gives identical totals.
"""

from __future__ import annotations

import csv
import io
import os
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gf2 import RowSpace, from_support, transpose
from .homology import DUAL, PRIMAL, is_trivial, relative_complex
from .pauli import PauliOperator, StabilizerCode, syndrome_int

BLOCK_SIZE = 4096
THREADS_ENV = "BOUNDARY_CODES_THREADS"
LOOKUP = "lookup"
EXACT = "exact_min_weight"

CSV_COLUMNS = (
    "lattice", "n_qubits", "k", "d", "p_x", "p_z", "trials", "failures", "failure_rate", "seed",
)


class DecoderSizeError(RuntimeError):
    """The lookup table would exceed its entry cap before reaching the requested radius."""


@dataclass(frozen=True)
class NoiseModel:
    p_x: float
    p_z: float

    def __post_init__(self) -> None:
        for name, p in (("p_x", self.p_x), ("p_z", self.p_z)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


class SectorDecoder:
    """Syndrome -> minimum-weight correction for one CSS sector.

    The table is grown by breadth-first search over syndromes, one error
    weight per layer, so every entry holds a lightest error with that
    syndrome. If all reachable syndromes fit under ``max_entries`` the table
    is complete; otherwise it stops at the last full layer (``radius``) and
    other syndromes get some consistent, not necessarily lightest, correction
    from a linear solve.
    """

    def __init__(self, columns: Sequence[int], *, min_radius: int = 0,
                 max_entries: int = 1 << 17) -> None:
        self.columns = list(columns)
        self._solver = RowSpace(self.columns, track=True)
        reachable = 1 << len(self._solver)
        table = {0: 0}
        frontier = [0]
        radius = 0
        while frontier and len(table) < reachable:
            layer: dict[int, int] = {}
            for s in frontier:
                base = table[s]
                for q, col in enumerate(self.columns):
                    t = s ^ col
                    if t not in table and t not in layer:
                        layer[t] = base | (1 << q)
                if len(table) + len(layer) > max_entries:
                    break
            if len(table) + len(layer) > max_entries:
                if radius < min_radius:
                    raise DecoderSizeError(
                        f"table exceeds {max_entries} entries before weight {min_radius}"
                    )
                break
            table.update(layer)
            frontier = list(layer)
            radius += 1
        self.table = table
        self.complete = len(table) == reachable
        self.radius = len(self.columns) if self.complete else radius

    def decode(self, syndrome: int) -> int:
        correction = self.table.get(syndrome)
        if correction is not None:
            return correction
        combo = self._solver.solve(syndrome)
        if combo is None:
            raise ValueError("syndrome is not produced by any error")
        return combo


@dataclass
class LookupDecoder:
    code: StabilizerCode
    z_sector: SectorDecoder  # corrects Z errors from vertex-check syndromes
    x_sector: SectorDecoder  # corrects X errors from face-check syndromes

    @property
    def name(self) -> str:
        return EXACT if self.z_sector.complete and self.x_sector.complete else LOOKUP

    @property
    def radius(self) -> int:
        return min(self.z_sector.radius, self.x_sector.radius)

    def decode(self, syndrome_bits) -> PauliOperator:
        """Correction for a full syndrome (vertex bits first, then face bits)."""
        bits = np.asarray(syndrome_bits, dtype=np.uint8)
        nv = len(self.code.vertex_generators)
        if bits.shape != (nv + len(self.code.face_generators),):
            raise ValueError("syndrome length does not match the generator count")
        sz = from_support(np.flatnonzero(bits[:nv]).tolist())
        sx = from_support(np.flatnonzero(bits[nv:]).tolist())
        return PauliOperator(self.code.num_qubits, self.x_sector.decode(sx), self.z_sector.decode(sz))


def build_decoder(code: StabilizerCode, *, min_radius: int = 0,
                  max_entries: int = 1 << 17) -> LookupDecoder:
    n = code.num_qubits
    return LookupDecoder(
        code,
        SectorDecoder(transpose(code.x_rows, n), min_radius=min_radius, max_entries=max_entries),
        SectorDecoder(transpose(code.z_rows, n), min_radius=min_radius, max_entries=max_entries),
    )


@dataclass
class TrialReport:
    trials: int
    logical_failures: dict[str, int]  # per sector: "x" (X residuals), "z" (Z residuals)
    failures: int  # trials with a failure in at least one sector
    decoder: str
    noise: NoiseModel
    seed: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0


def _pack(bool_rows: np.ndarray) -> list[int]:
    if bool_rows.shape[1] == 0:
        return [0] * bool_rows.shape[0]
    packed = np.packbits(bool_rows.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


class _Trialer:
    def __init__(self, code: StabilizerCode, decoder: LookupDecoder) -> None:
        self.code = code
        self.decoder = decoder
        self.primal = relative_complex(code.lattice, PRIMAL)
        self.dual = relative_complex(code.lattice, DUAL)
        self.hx = code.hx.astype(np.int32)
        self.hz = code.hz.astype(np.int32)

    def run_block(self, noise: NoiseModel, seed: int, block: int, size: int) -> tuple[int, int, int]:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))
        n = self.code.num_qubits
        ex = rng.random((size, n)) < noise.p_x
        ez = rng.random((size, n)) < noise.p_z
        x_errs, z_errs = _pack(ex), _pack(ez)
        # Z errors trip vertex checks, X errors trip face checks
        z_syn = _pack(((ez.astype(np.int32) @ self.hx.T) & 1).astype(bool))
        x_syn = _pack(((ex.astype(np.int32) @ self.hz.T) & 1).astype(bool))
        fx = fz = both = 0
        for xe, ze, xs, zs in zip(x_errs, z_errs, x_syn, z_syn):
            bad_x = bool(xe) and not is_trivial(self.dual, xe ^ self.decoder.x_sector.decode(xs))
            bad_z = bool(ze) and not is_trivial(self.primal, ze ^ self.decoder.z_sector.decode(zs))
            fx += bad_x
            fz += bad_z
            both += bad_x or bad_z
        return fx, fz, both


_WORKER: _Trialer | None = None


def _init_worker(code: StabilizerCode, decoder: LookupDecoder) -> None:
    global _WORKER
    _WORKER = _Trialer(code, decoder)


def _worker_block(args) -> tuple[int, int, int]:
    return _WORKER.run_block(*args)


def worker_count(requested: int | None) -> int:
    """Requested workers, capped by $BOUNDARY_CODES_THREADS when set."""
    count = requested if requested is not None else 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        count = min(count, max(1, int(cap)))
    return max(1, count)


def run_trials(
    code: StabilizerCode,
    noise: NoiseModel,
    trials: int,
    seed: int,
    *,
    decoder: LookupDecoder | None = None,
    workers: int | None = None,
) -> TrialReport:
    """Sample, decode and score ``trials`` independent errors; deterministic in ``seed``."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    decoder = decoder or build_decoder(code)
    blocks = [
        (noise, seed, b, min(BLOCK_SIZE, trials - b * BLOCK_SIZE))
        for b in range((trials + BLOCK_SIZE - 1) // BLOCK_SIZE)
    ]
    nworkers = min(worker_count(workers), max(1, len(blocks)))
    if nworkers == 1:
        trialer = _Trialer(code, decoder)
        results = [trialer.run_block(*blk) for blk in blocks]
    else:
        with ProcessPoolExecutor(nworkers, initializer=_init_worker,
                                 initargs=(code, decoder)) as pool:
            results = list(pool.map(_worker_block, blocks))
    fx = sum(r[0] for r in results)
    fz = sum(r[1] for r in results)
    both = sum(r[2] for r in results)
    return TrialReport(trials, {"x": fx, "z": fz}, both, decoder.name, noise, seed)


def correction_failures(
    code: StabilizerCode, t: int, *, decoder: LookupDecoder | None = None
) -> Iterator[PauliOperator]:
    """Every pure-X or pure-Z error of weight <= t that the decoder gets wrong.

    Decoding is per sector, so a mixed error of weight <= t fails iff one of
    its pure parts (each of weight <= t) does; pure errors cover all cases.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    decoder = decoder or build_decoder(code, min_radius=t)
    if decoder.radius < t:
        raise DecoderSizeError(f"decoder radius {decoder.radius} is below t={t}")
    n = code.num_qubits
    sectors = (
        ("z", code.x_rows, decoder.z_sector, relative_complex(code.lattice, PRIMAL)),
        ("x", code.z_rows, decoder.x_sector, relative_complex(code.lattice, DUAL)),
    )
    for w in range(1, t + 1):
        for kind, checks, sector, complex_ in sectors:
            for edges in combinations(range(n), w):
                err = from_support(edges)
                residual = err ^ sector.decode(syndrome_int(checks, err))
                if not is_trivial(complex_, residual):
                    yield (PauliOperator(n, z=err) if kind == "z" else PauliOperator(n, x=err))


def exhaustive_correction_check(
    code: StabilizerCode, t: int, *, decoder: LookupDecoder | None = None
) -> bool:
    """True iff every error of weight <= t is corrected exactly."""
    return next(correction_failures(code, t, decoder=decoder), None) is None


def report_row(code_name: str, n: int, k: int, d: int | None, report: TrialReport) -> dict:
    return {
        "lattice": code_name,
        "n_qubits": n,
        "k": k,
        "d": "" if d is None else d,
        "p_x": repr(report.noise.p_x),
        "p_z": repr(report.noise.p_z),
        "trials": report.trials,
        "failures": report.failures,
        "failure_rate": f"{report.failure_rate:.6g}",
        "seed": report.seed,
    }


def format_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


__all__ = [
    "BLOCK_SIZE",
    "DecoderSizeError",
    "LookupDecoder",
    "NoiseModel",
    "SectorDecoder",
    "TrialReport",
    "build_decoder",
    "correction_failures",
    "exhaustive_correction_check",
    "format_csv",
    "run_trials",
]
