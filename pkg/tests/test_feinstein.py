"""Greedy block-code construction, verification, and maximality."""
import math

import numpy as np
import pytest

import noisycomp as nk
from noisycomp.errors import CapacityExceededError, ValidationError


def test_frozen_small_code(and_bsc, uniform4):
    hk = nk.hookup(uniform4, and_bsc, 2)
    code = nk.greedy_construct(hk, 0.25, 0.25)
    assert code.m == 4
    assert [e.y for e in code.entries] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [e.a.size(hk) for e in code.entries] == [7, 3, 3, 1]
    assert [set(e.gamma) for e in code.entries] == [
        {(0, 0)}, {(0, 1)}, {(1, 0)}, {(1, 1)}]
    rep = nk.verify(code, hk)
    assert rep.ok and not rep.violations
    assert all(s >= 0 for pair in rep.entry_slacks for s in pair)


def test_parameter_domain():
    with pytest.raises(ValidationError):
        nk.FeinsteinCode(n=1, epsilon=0.6, lam=0.25, entries=())
    with pytest.raises(ValidationError):
        nk.FeinsteinCode(n=1, epsilon=0.25, lam=0.0, entries=())


def test_overlapping_regions_rejected(and_bsc, uniform4):
    hk = nk.hookup(uniform4, and_bsc, 1)
    e1 = nk.CodeEntry(y=(0,), a=nk.InputSet("fiber", ((0,),), (0,)),
                      gamma=frozenset({(0,)}))
    e2 = nk.CodeEntry(y=(1,), a=nk.InputSet("fiber", ((3,),), (1,)),
                      gamma=frozenset({(0,)}))
    with pytest.raises(ValidationError):
        nk.FeinsteinCode(n=1, epsilon=0.25, lam=0.25, entries=(e1, e2))


def test_greedy_codes_are_inextensible(and_bsc, uniform4):
    for n, eps in [(1, 0.25), (2, 0.25), (3, 0.2), (4, 0.3)]:
        hk = nk.hookup(uniform4, and_bsc, n)
        code = nk.greedy_construct(hk, eps, eps)
        rep = nk.maximality_check(code, hk)
        assert not rep.extensible
        assert rep.statement1_ok and rep.statement2_ok


def test_json_round_trip(and_bsc, uniform4):
    hk = nk.hookup(uniform4, and_bsc, 3)
    code = nk.greedy_construct(hk, 0.2, 0.2)
    back = nk.code_from_json(nk.code_to_json(code))
    assert back.n == code.n and back.m == code.m
    assert [e.y for e in back.entries] == [e.y for e in code.entries]
    assert [e.gamma for e in back.entries] == [e.gamma for e in code.entries]
    assert nk.verify(back, hk).ok


def test_product_hookup_matches_dense_greedy(and_bsc, uniform4):
    for eps in (0.15, 0.25):
        dense = nk.greedy_construct(nk.hookup(uniform4, and_bsc, 3), eps, eps)
        lazy = nk.greedy_construct(nk.ProductHookup(uniform4, and_bsc, 3),
                                   eps, eps)
        assert dense.m == lazy.m
        assert [e.y for e in dense.entries] == [e.y for e in lazy.entries]
        assert [e.gamma for e in dense.entries] == [e.gamma for e in lazy.entries]


def test_expanded_code_still_verifies(and_bsc, uniform4):
    hk = nk.hookup(uniform4, and_bsc, 4)
    code = nk.greedy_construct(hk, 0.25, 0.25, expand=True)
    rep = nk.verify(code, hk)
    assert rep.ok
    covered = set().union(*(e.gamma for e in code.entries))
    assert len(covered) == 2 ** 4  # expansion assigns every output block


def test_rate_size_and_capacity_guard(and_bsc, uniform4):
    hk = nk.hookup(uniform4, and_bsc, 2)
    rate = nk.typical_input_rate_n(uniform4, and_bsc, 2).rate_nats
    # per-symbol uncertainty inside a fiber: H(X | f(X)) = (3/4) ln 3
    h_fiber = 0.75 * math.log(3)
    assert nk.feinstein_rate_size(hk, 1.0) == math.floor(
        math.exp(2 * (1.0 - h_fiber)))
    assert nk.feinstein_rate_size(hk, h_fiber) == 1
    with pytest.raises(CapacityExceededError):
        nk.feinstein_rate_size(hk, rate + 0.01)


def test_random_kernel_battery_verifies():
    rng = np.random.default_rng(11)
    src = nk.Source.iid([1 / 3] * 3)
    f = nk.per_symbol_fn((0, 0, 1), 2)
    for trial in range(10):
        m = rng.random((3, 3)) + 0.05
        m /= m.sum(axis=1, keepdims=True)
        nc = nk.product(f, nk.memoryless(m.tolist()))
        hk = nk.hookup(src, nc, 2)
        eps = float(rng.uniform(0.1, 0.45))
        lam = float(rng.uniform(0.1, 0.45))
        code = nk.greedy_construct(hk, eps, lam)
        assert nk.verify(code, hk).ok
