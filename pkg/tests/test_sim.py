import csv
import io

import numpy as np
import pytest

from boundary_codes.homology import DUAL, PRIMAL, is_trivial, relative_complex
from boundary_codes.lattice import build_disk, build_rectangle, build_torus
from boundary_codes.pauli import PauliOperator, build_code, syndrome
from boundary_codes.sim import (
    CSV_COLUMNS,
    EXACT,
    LOOKUP,
    THREADS_ENV,
    DecoderSizeError,
    NoiseModel,
    SectorDecoder,
    build_decoder,
    correction_failures,
    exhaustive_correction_check,
    format_csv,
    report_row,
    run_trials,
    worker_count,
)


def test_decoder_zero_syndrome_and_single_errors(rect23):
    dec = build_decoder(rect23)
    assert dec.name == EXACT
    n = rect23.num_qubits
    nsyn = len(rect23.generators)
    assert dec.decode(np.zeros(nsyn, dtype=np.uint8)).is_identity
    for q in range(n):
        for err in (PauliOperator.from_support(n, x=[q]), PauliOperator.from_support(n, z=[q])):
            corr = dec.decode(syndrome(rect23, err))
            assert corr.weight == 1
            assert not syndrome(rect23, err * corr).any()


def test_decoder_rejects_wrong_length(rect23):
    with pytest.raises(ValueError):
        build_decoder(rect23).decode(np.zeros(3, dtype=np.uint8))


def test_truncated_table_still_returns_consistent_corrections():
    code = build_code(build_rectangle(3, 3))
    dec = build_decoder(code, max_entries=40)
    assert dec.name == LOOKUP
    assert dec.radius >= 1
    rng = np.random.default_rng(7)
    n = code.num_qubits
    for _ in range(50):
        z = int(rng.integers(0, 1 << n))
        x = int(rng.integers(0, 1 << n))
        err = PauliOperator(n, x, z)
        residual = err * dec.decode(syndrome(code, err))
        assert not syndrome(code, residual).any()


def test_table_too_small_for_radius():
    code = build_code(build_rectangle(3, 3))
    with pytest.raises(DecoderSizeError):
        build_decoder(code, min_radius=3, max_entries=40)


def test_sector_table_is_minimum_weight():
    # every entry is no heavier than any error with the same syndrome (brute force)
    code = build_code(build_rectangle(1, 2))
    from boundary_codes.gf2 import transpose

    cols = transpose(code.x_rows, code.num_qubits)
    sector = SectorDecoder(cols)
    assert sector.complete
    best: dict[int, int] = {}
    for mask in range(1 << code.num_qubits):
        s = 0
        for q in range(code.num_qubits):
            if mask >> q & 1:
                s ^= cols[q]
        w = mask.bit_count()
        best[s] = min(best.get(s, w), w)
    assert {s: sector.table[s].bit_count() for s in sector.table} == best


@pytest.mark.parametrize("lattice,t", [
    (build_rectangle(2, 3), 1), (build_rectangle(3, 3), 1), (build_rectangle(4, 4), 2),
    (build_torus(3), 1), (build_disk(3, 3), 1), (build_disk(1, 2), 1),
], ids=lambda v: getattr(v, "name", str(v)))
def test_corrects_up_to_half_distance(lattice, t):
    assert exhaustive_correction_check(build_code(lattice), t)


def test_weight_two_fails_on_2x3(rect23):
    witness = next(correction_failures(rect23, 2))
    assert witness.weight == 2
    dec = build_decoder(rect23)
    residual = witness * dec.decode(syndrome(rect23, witness))
    assert not syndrome(rect23, residual).any()
    side, mask = (PRIMAL, residual.z) if residual.z else (DUAL, residual.x)
    assert not is_trivial(relative_complex(rect23.lattice, side), mask)


def test_negative_t():
    with pytest.raises(ValueError):
        exhaustive_correction_check(build_code(build_rectangle(1, 1)), -1)


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(-0.1, 0.0)
    with pytest.raises(ValueError):
        NoiseModel(0.0, 1.5)


def test_zero_noise_never_fails(rect23):
    report = run_trials(rect23, NoiseModel(0.0, 0.0), 20_000, seed=3)
    assert report.failures == 0 and report.failure_rate == 0.0


def test_seed_determinism_and_workers(rect23):
    noise = NoiseModel(0.05, 0.05)
    a = run_trials(rect23, noise, 9000, seed=11)
    b = run_trials(rect23, noise, 9000, seed=11)
    c = run_trials(rect23, noise, 9000, seed=11, workers=3)
    d = run_trials(rect23, noise, 9000, seed=12)
    assert (a.failures, a.logical_failures) == (b.failures, b.logical_failures)
    assert (a.failures, a.logical_failures) == (c.failures, c.logical_failures)
    assert a.failures != d.failures


def test_block_prefix_is_stable(rect23):
    # trials in one block do not depend on how many trials follow
    noise = NoiseModel(0.1, 0.0)
    small = run_trials(rect23, noise, 4096, seed=5)
    large = run_trials(rect23, noise, 8192, seed=5)
    assert large.failures >= small.failures


def test_failure_rate_grows_with_noise():
    code = build_code(build_rectangle(3, 3))
    dec = build_decoder(code)
    rates = [run_trials(code, NoiseModel(p, p), 8000, seed=1, decoder=dec).failure_rate
             for p in (0.01, 0.05, 0.1)]
    assert rates[0] < rates[1] < rates[2]


def test_worker_count_env_cap(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert worker_count(None) == 1
    assert worker_count(4) == 4
    monkeypatch.setenv(THREADS_ENV, "2")
    assert worker_count(4) == 2


def test_csv_format(rect23):
    report = run_trials(rect23, NoiseModel(0.02, 0.01), 100, seed=0)
    text = format_csv([report_row("rectangle(2,3)", 18, 1, 3, report)])
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 2
    assert tuple(rows[0]) == CSV_COLUMNS
    fields = dict(zip(CSV_COLUMNS, rows[1]))
    assert fields["lattice"] == "rectangle(2,3)"
    assert fields["p_x"] == "0.02" and fields["trials"] == "100"
