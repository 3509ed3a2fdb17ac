import numpy as np
import pytest

from voronoi_bounds import kernels


@pytest.mark.parametrize("p", [37, 101, 691, 1009])
def test_bernoulli_twins_agree(p):
    a = kernels.bernoulli_table_mod_p(p, p - 3)
    b = kernels.py_bernoulli_table_mod_p(p, p - 3)
    assert np.array_equal(a, b)


def test_bernoulli_kmax_guard():
    with pytest.raises(ValueError):
        kernels.bernoulli_table_mod_p(37, 36)


@pytest.mark.parametrize("full", [False, True])
def test_power_residue_twins_agree(full):
    p, k, q = 37, 32, 149
    eta = pow(2, (q - 1) // p, q)
    assert kernels.power_residue_product(p, k, q, eta, full) == kernels.py_power_residue_product(p, k, q, eta, full)


def test_sieve_twins_agree():
    assert np.array_equal(kernels.prime_sieve(10_000), kernels.py_prime_sieve(10_000))


def test_box_twins_agree():
    g = np.array([[2, 1, 0], [1, 3, 1], [0, 1, 2]])
    p1, v1 = kernels.box_short_vectors(g, 2)
    p2, v2 = kernels.py_box_short_vectors(g, 2)
    assert np.array_equal(p1, p2) and np.array_equal(v1, v2)


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")
    assert kernels.BACKEND == ("numba" if kernels.HAS_NUMBA else "numpy")
