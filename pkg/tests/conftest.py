"""Shared fixtures: the AND+BSC(0.1) reference instance used throughout."""
import pytest

import noisycomp as nk


@pytest.fixture(scope="session")
def and_bsc():
    """AND-of-bit-pairs computed perfectly, observed through a BSC(0.1)."""
    f = nk.and_pairs()
    return nk.product(f, nk.cascade(nk.deterministic(f), nk.bsc(0.1)))


@pytest.fixture(scope="session")
def uniform4():
    return nk.Source.iid([0.25, 0.25, 0.25, 0.25])


@pytest.fixture(scope="session")
def reference_instance(and_bsc, uniform4):
    return nk.ReliableInstance(xprime=uniform4, g=nk.and_pairs(), nc=and_bsc,
                               code_source=uniform4)


# frozen reference values (independently derived, see package docs)
BSC01_CAPACITY = 0.3680642071684971
AND_BSC_CAPACITY = 1.1366188185143922
AND_BSC_UNIFORM_RATE = 1.1097405451645275
H_03_07 = 0.6108643020548935
