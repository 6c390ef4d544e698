"""Typical input rates and capacity optimization."""
import math

import numpy as np
import pytest

import noisycomp as nk

from conftest import (AND_BSC_CAPACITY, AND_BSC_UNIFORM_RATE, BSC01_CAPACITY)

FAST = nk.CapacityOptions(restarts=5)


def test_single_letter_rate_oracle(and_bsc, uniform4):
    rep = nk.typical_input_rate(uniform4, and_bsc)
    assert rep.rate_nats == pytest.approx(AND_BSC_UNIFORM_RATE, abs=1e-9)
    h_in, h_cond = rep.components
    assert h_in == pytest.approx(math.log(4), abs=1e-12)
    assert rep.rate_nats == pytest.approx(h_in - h_cond, abs=1e-12)


def test_rate_is_additive_over_blocks(and_bsc, uniform4):
    per_n = [nk.typical_input_rate_n(uniform4, and_bsc, n).rate_nats
             for n in (1, 2, 3, 4)]
    assert max(per_n) - min(per_n) < 1e-9


def test_bsc_channel_capacity_closed_form():
    rep = nk.channel_capacity(nk.bsc(0.1))
    assert rep.value_nats == pytest.approx(BSC01_CAPACITY, abs=1e-9)
    assert rep.argmax.probs[0] == pytest.approx(0.5, abs=1e-6)


def test_reference_capacity_value(and_bsc):
    rep = nk.capacity(and_bsc)
    assert rep.value_nats == pytest.approx(AND_BSC_CAPACITY, abs=1e-6)
    assert rep.bracket[0] <= rep.value_nats <= rep.bracket[1]
    # argmax puts equal mass on the three AND-preimages of 0
    p = rep.argmax.probs
    assert max(p[:3]) - min(p[:3]) < 1e-3
    assert p[3] < p[0]


def test_totally_noisy_instance_rate_is_input_entropy_of_image():
    # output independent of everything: usable inputs limited only by the
    # number of distinguishable f-values the decoder can recover for free
    f = nk.and_pairs()
    nc = nk.product(f, nk.memoryless([[0.5, 0.5]] * 4))
    rep = nk.capacity(nc, opts=FAST)
    assert rep.value_nats == pytest.approx(math.log(3), abs=0.011)


def test_bijective_f_reduces_to_channel_capacity():
    rng = np.random.default_rng(5)
    m = rng.random((3, 3))
    m /= m.sum(axis=1, keepdims=True)
    kernel = nk.memoryless(m.tolist())
    nc = nk.product(nk.identity_fn(3), kernel)
    assert (nk.capacity(nc, opts=FAST).value_nats
            == pytest.approx(nk.channel_capacity(kernel).value_nats, abs=1e-4))


def test_noisy_input_never_beats_design_point():
    nu = nk.memoryless([[0.8, 0.1, 0.05, 0.05],
                        [0.1, 0.8, 0.05, 0.05],
                        [0.05, 0.05, 0.8, 0.1],
                        [0.05, 0.05, 0.1, 0.8]])
    low, high = nk.compare_noisy_input(nu, nk.and_pairs(), opts=FAST)
    assert low.value_nats <= high.value_nats + 1e-6 + 0.01


def test_capacity_report_is_labeled_lower_bound(and_bsc):
    rep = nk.capacity(and_bsc, opts=FAST)
    assert "lower bound" in rep.label


def test_markov_family_runs(and_bsc):
    rep = nk.capacity(and_bsc, family="markov1",
                      opts=nk.CapacityOptions(restarts=2, markov_n=4))
    assert rep.family == "markov1"
    assert rep.value_nats > 0
