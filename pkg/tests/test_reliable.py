"""Encoder/noisy-device/decoder pipeline and Monte Carlo estimation."""
import math

import pytest

import noisycomp as nk
from noisycomp.errors import CapacityExceededError


def make_codec(instance, k, n, eps, *, best_effort=False, expand=True):
    hk = nk.ProductHookup(instance.code_source, instance.nc, n)
    code = nk.greedy_construct(hk, eps, eps, expand=expand)
    return nk.build_codec(instance, k, code, hk, best_effort=best_effort)


def test_wilson_interval_properties():
    lo, hi = nk.wilson_interval(0, 100)
    assert lo == 0.0 and 0 < hi < 0.05
    lo, hi = nk.wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert 0.0 <= lo and hi <= 1.0


def test_codec_round_trip(reference_instance):
    codec = make_codec(reference_instance, 2, 6, 0.4)
    assert codec.uncovered_typical_mass == 0.0
    g2 = reference_instance.g.extended(2)
    f6 = nk.and_pairs().extended(6)
    for xp, word in codec.encode.items():
        # noiseless pass through the device then decode
        y = f6(word)
        assert codec.decode[codec.region_of[y]] == g2(xp)
    ok, witness = nk.is_compatible(codec, g2, f6)
    assert ok and witness is None


def test_rate_guard_without_best_effort(reference_instance):
    with pytest.raises(CapacityExceededError):
        make_codec(reference_instance, 5, 6, 0.4)  # k ln4 / n > attainable rate


def test_best_effort_reports_uncovered_mass(reference_instance):
    codec = make_codec(reference_instance, 5, 6, 0.4, best_effort=True)
    assert codec.uncovered_typical_mass > 0
    assert len(codec.uncovered_fibers) > 0


def test_simulation_deterministic(reference_instance):
    codec = make_codec(reference_instance, 2, 6, 0.4)
    a = nk.simulate(codec, reference_instance, 500, 3)
    b = nk.simulate(codec, reference_instance, 500, 3)
    c = nk.simulate(codec, reference_instance, 500, 4)
    assert (a.failures, a.p_hat) == (b.failures, b.p_hat)
    assert a.trials == 500
    assert a.wilson_interval[0] <= a.p_hat <= a.wilson_interval[1]
    assert a.failures != c.failures  # different stream


def test_sweep_rows_schema_and_seeding(reference_instance):
    rows = nk.rate_sweep(reference_instance, [0.5], [6], 200, 9)
    rows2 = nk.rate_sweep(reference_instance, [0.5], [6], 200, 9)
    assert rows == rows2
    (row,) = rows
    assert row["k"] == max(1, math.floor(0.5 * 6 / math.log(4) + 1e-9))
    assert row["trials"] == 200
    assert 0.0 <= row["ci_lo"] <= row["p_hat"] <= row["ci_hi"] <= 1.0


def test_logical_fibers_scale_without_enumeration(reference_instance):
    # k = 11 logical blocks (4^11 > 2^20) must still build in best-effort mode
    codec = make_codec(reference_instance, 11, 12, 0.25, best_effort=True)
    assert codec.k == 11 and codec.n == 12
    assert codec.uncovered_typical_mass > 0.5
