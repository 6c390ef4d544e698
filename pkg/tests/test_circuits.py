"""Noisy circuit kernels and redundancy accounting."""
import itertools
import math

import numpy as np
import pytest

import noisycomp as nk
from noisycomp.errors import DomainError, ValidationError


def test_majority3_truth_table():
    c = nk.majority3(0.0)
    for bits in itertools.product((0, 1), repeat=3):
        assert c.eval(bits) == (1 if sum(bits) >= 2 else 0,)


def test_noiseless_kernel_equals_truth_table():
    c = nk.majority3(0.0)
    k = nk.circuit_to_kernel(c)
    det = nk.deterministic(c.truth_table_fn())
    for v in range(8):
        np.testing.assert_array_equal(k.law_vector((v,)), det.law_vector((v,)))


def test_kernel_rows_stochastic():
    k = nk.circuit_to_kernel(nk.majority3(0.05))
    m = np.array([k.law_vector((v,)) for v in range(8)])
    np.testing.assert_allclose(m.sum(axis=1), 1.0, atol=1e-12)
    assert (m >= 0).all()


def test_monte_carlo_approximates_exact():
    c = nk.majority3(0.1)
    exact = np.array([nk.circuit_to_kernel(c).law_vector((v,)) for v in range(8)])
    mc = nk.circuit_to_kernel(c, mode="monte_carlo", rng_seed=1, samples=20000)
    approx = np.array([mc.law_vector((v,)) for v in range(8)])
    assert np.abs(exact - approx).max() < 0.02


def test_single_gate_flip_probability():
    c = nk.CircuitSpec(2, (nk.Gate("AND", (0, 1)),), (2,), flip_prob=0.05)
    k = nk.circuit_to_kernel(c)
    assert k.law((3,))[(1,)] == pytest.approx(0.95, abs=1e-12)
    assert k.law((0,))[(1,)] == pytest.approx(0.05, abs=1e-12)


def test_capacity_degrades_with_gate_noise():
    values = []
    opts = nk.CapacityOptions(restarts=4)
    for xi in (0.0, 0.05, 0.1, 0.2):
        c = nk.majority3(xi)
        nc = nk.product(c.truth_table_fn(), nk.circuit_to_kernel(c))
        values.append(nk.capacity(nc, opts=opts).value_nats)
    assert all(a >= b - 1e-6 for a, b in zip(values, values[1:]))
    # a perfect device makes every input sequence usable
    assert values[0] == pytest.approx(math.log(8), abs=1e-6)


def test_design_error_channel_is_deterministic_but_wrong():
    nc = nk.design_error_channel(nk.and_pairs(), nk.or_pairs())
    law = nc.kernel.law((1,))  # bits (0, 1): AND = 0 but OR outputs 1
    assert law == {(1,): 1.0}


def test_blowup_bracket_oracle():
    rep = nk.blowup(0.3680642071684971, math.log(2), 0.05)
    assert rep.bounds[0] == pytest.approx(1.8832235437732407, abs=1e-9)
    assert rep.bounds[1] == pytest.approx(2.179268100395669, abs=1e-9)
    assert (rep.k, rep.n) == (9, 17)
    assert rep.bounds[0] < rep.lam <= rep.bounds[1]


def test_blowup_at_capacity_bracket_starts_at_one():
    rep = nk.blowup(1.0, 1.0, 0.2)
    assert rep.bounds[0] == pytest.approx(1.0, abs=1e-12)


def test_blowup_domain_errors():
    with pytest.raises(DomainError):
        nk.blowup(0.1, 1.0, 0.2)  # epsilon >= capacity
    with pytest.raises(DomainError):
        nk.blowup(1.0, 0.0, 0.2)


def test_circuit_validation():
    with pytest.raises(ValidationError):
        nk.CircuitSpec(2, (nk.Gate("AND", (0, 5)),), (2,))  # undriven wire
    with pytest.raises(ValidationError):
        nk.CircuitSpec(2, (nk.Gate("AND", (0, 1)),), (2,), flip_prob=0.5)
    with pytest.raises(ValidationError):
        nk.Gate("NOT", (0, 1))  # wrong arity


def test_netlist_round_trip():
    c = nk.majority3(0.07)
    back = nk.circuit_from_json(nk.circuit_to_json(c))
    assert back == c
