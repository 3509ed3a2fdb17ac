import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voronoi_bounds import kernels
from voronoi_bounds.forms import SymForm, act, bareiss_det, canonical_sign, evaluate, identity, rational_inverse
from voronoi_bounds.minima import (
    MinVecSet,
    bounded_basis,
    coordinate_ratio,
    is_perfect,
    minimum,
    prop1_check,
    short_vectors,
    shortest_vectors,
)
from voronoi_bounds.voronoi import initial_form

from _util import random_pd


def test_a2_minimal_vectors(a2):
    mv = shortest_vectors(a2)
    assert mv.mu == 2
    assert mv.vectors == ((0, 1), (1, -1), (1, 0))
    assert is_perfect(a2)


@pytest.mark.parametrize("n,pairs", [(3, 6), (4, 10), (5, 15), (6, 21)])
def test_root_lattice_pair_counts(n, pairs):
    mv = shortest_vectors(initial_form(n))
    assert mv.mu == 2 and mv.pair_count == pairs
    assert is_perfect(initial_form(n))


def test_identity_is_not_perfect():
    assert not is_perfect(identity(3))
    assert shortest_vectors(identity(3)).pair_count == 3


def test_minvecset_json():
    mv = shortest_vectors(SymForm([["3/2", "1/2"], ["1/2", "3/2"]]))
    again = MinVecSet.from_json(mv.to_json())
    assert again == mv
    assert mv.to_json()["mu"] == "3/2"


def _box_oracle(a: SymForm, bound: int, c: int):
    pts, vals = kernels.box_short_vectors(np.array([[int(x) for x in r] for r in a.rows]), c)
    out = set()
    for p, v in zip(pts, vals):
        if 0 < v <= bound:
            out.add(canonical_sign(tuple(int(x) for x in p)))
    return out


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_enumeration_matches_box_search(seed, n):
    a = random_pd(random.Random(seed), n, spread=2)
    bound = max(a.rows[i][i] for i in range(n))
    # every vector of value <= bound has |x_i|^2 <= bound * (A^-1)_ii <= bound * adj_ii
    c = 1
    inv = rational_inverse([list(r) for r in a.rows])
    while c * c < bound * max(inv[i][i] for i in range(n)):
        c += 1
    if (2 * c + 1) ** n > 400_000:
        return
    got = {v for _, v in short_vectors(a, bound)}
    assert got == _box_oracle(a, int(bound), c)


def test_short_vectors_values_sorted(a2):
    sv = short_vectors(a2, 6)
    assert [v for v, _ in sv] == sorted(v for v, _ in sv)
    assert all(evaluate(a2, x) == val for val, x in sv)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bounded_basis_postcondition(n):
    a = initial_form(n)
    g = bounded_basis(a)
    assert bareiss_det(g) == 1
    mu = minimum(a)
    assert all(evaluate(a, [g[i][j] for i in range(n)]) <= n * n * mu for j in range(n))


def test_bounded_basis_on_d4():
    d4 = SymForm([[2, 0, 0, -1], [0, 2, 0, -1], [0, 0, 2, -1], [-1, -1, -1, 2]])
    g = bounded_basis(d4)
    assert bareiss_det(g) == 1
    assert all(evaluate(d4, [g[i][j] for i in range(4)]) <= 16 * 2 for j in range(4))


def test_prop1_reports():
    r3 = prop1_check(initial_form(3))
    assert r3.ok and r3.bound == 21
    r4 = prop1_check(initial_form(4))
    assert r4.ok and r4.bound == 256
    assert max(r4.max_coords) <= r4.bound


def test_coordinate_ratio_is_square_of_coordinate(a2):
    g = bounded_basis(a2)
    ag = act(a2, g)
    for v in shortest_vectors(ag).vectors:
        for i in range(2):
            assert coordinate_ratio(ag, v, i) == Fraction(v[i] ** 2)
