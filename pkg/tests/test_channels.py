"""Kernels, cascades, hookups, and domain lifting."""
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import noisycomp as nk
from noisycomp.errors import BlockOverflowError, ValidationError


def test_pair_fns_truth_tables():
    # bit-pair symbols: s = (s >> 1, s & 1)
    assert [nk.and_pairs()((s,))[0] for s in range(4)] == [0, 0, 0, 1]
    assert [nk.or_pairs()((s,))[0] for s in range(4)] == [0, 1, 1, 1]
    assert [nk.xor_pairs()((s,))[0] for s in range(4)] == [0, 1, 1, 0]


def test_bsc_rows_stochastic():
    k = nk.bsc(0.1)
    for x in ((0,), (1,)):
        law = k.law(x)
        assert sum(law.values()) == pytest.approx(1.0, abs=1e-12)
        assert law[x] == pytest.approx(0.9, abs=1e-12)


def test_cascade_of_bscs_composes_flip_probabilities():
    a, b = 0.1, 0.2
    combined = nk.cascade(nk.bsc(a), nk.bsc(b))
    expect = a * (1 - b) + (1 - a) * b
    assert combined.law((0,))[(1,)] == pytest.approx(expect, abs=1e-12)


def test_deterministic_kernel_is_one_hot():
    k = nk.deterministic(nk.and_pairs())
    assert k.law((3,)) == {(1,): 1.0}
    assert k.law((2,)) == {(0,): 1.0}


def test_per_symbol_extension_acts_coordinatewise():
    f = nk.and_pairs().extended(3)
    assert f((3, 2, 3)) == (1, 0, 1)


def test_memoryless_extension_factorizes():
    k = nk.bsc(0.25).extended(2)
    assert k.law((0, 1))[(1, 0)] == pytest.approx(0.25 * 0.25, abs=1e-12)
    assert sum(k.law((0, 1)).values()) == pytest.approx(1.0, abs=1e-12)


def test_product_hookup_matches_dense_hookup(and_bsc, uniform4):
    n = 2
    dense = nk.hookup(uniform4, and_bsc, n)
    lazy = nk.ProductHookup(uniform4, and_bsc, n)
    np.testing.assert_allclose(lazy.p_y, dense.p_y, atol=1e-12)
    np.testing.assert_allclose(lazy.p_z, dense.p_z, atol=1e-12)
    for yi in range(len(dense.p_y)):
        y = dense.y_block(yi)
        got = lazy.cond_z_given_y(y)
        joint_row = dense.joint_yz[yi]
        if dense.p_y[yi] > 0:
            np.testing.assert_allclose(got, joint_row / dense.p_y[yi], atol=1e-12)
        assert lazy.fiber_size(y) == int(np.count_nonzero(
            [nk.and_pairs().extended(n)(dense.x_block(i)) == y
             for i in range(4 ** n)]))


def test_hookup_joint_marginals_consistent(and_bsc, uniform4):
    hk = nk.hookup(uniform4, and_bsc, 2)
    np.testing.assert_allclose(hk.joint_yz.sum(axis=1), hk.p_y, atol=1e-12)
    np.testing.assert_allclose(hk.joint_yz.sum(axis=0), hk.p_z, atol=1e-12)


def test_fiber_top_orders_by_mass():
    src = nk.Source.iid([0.1, 0.2, 0.3, 0.4])
    f = nk.and_pairs()
    nc = nk.product(f, nk.cascade(nk.deterministic(f), nk.bsc(0.1)))
    ph = nk.ProductHookup(src, nc, 3)
    top = ph.fiber_top((0, 1, 0), 5)
    masses = [math.exp(ph.log_p_x(x)) for x in top]
    assert masses == sorted(masses, reverse=True)
    assert all(ph.fiber_contains((0, 1, 0), x) for x in top)


# --- lifting a partial function to fixed-width padded blocks ----------------

def reverse_inner(block):
    """Reverse strings of length <= 3; undefined on longer inputs."""
    return tuple(reversed(block)) if len(block) <= 3 else None


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=1), min_size=0, max_size=3))
def test_lift_round_trip(bits):
    block = tuple(bits)
    lifted = nk.lift_finite_fn(reverse_inner, blank_in=2, blank_out=2, n=5,
                               in_size=2, out_size=2)
    padded = block + (2,) * (5 - len(block))
    out = lifted(padded)
    assert nk.unpad(out, 2) == reverse_inner(block)


def test_lift_out_of_domain_yields_all_blank():
    lifted = nk.lift_finite_fn(reverse_inner, blank_in=2, blank_out=2, n=5,
                               in_size=2, out_size=2)
    assert lifted((0, 1, 0, 1, 2)) == (2,) * 5  # length 4 > inner domain


def test_lift_overflow_raises():
    grow = nk.lift_finite_fn(lambda b: b + b, blank_in=2, blank_out=2, n=3,
                             in_size=2, out_size=2)
    with pytest.raises(BlockOverflowError):
        grow((0, 1, 2))


def test_cascade_memoryless_pair_is_matrix_product():
    k1 = nk.memoryless([[0.7, 0.3], [0.4, 0.6]])
    k2 = nk.memoryless([[0.9, 0.1], [0.2, 0.8]])
    combined = nk.cascade(k1, k2)
    m = np.array([[0.7, 0.3], [0.4, 0.6]]) @ np.array([[0.9, 0.1], [0.2, 0.8]])
    for x in range(2):
        np.testing.assert_allclose(combined.law_vector((x,)), m[x], atol=1e-12)


def test_bad_matrix_rejected():
    with pytest.raises(ValidationError):
        nk.memoryless([[0.5, 0.6], [0.5, 0.5]])
