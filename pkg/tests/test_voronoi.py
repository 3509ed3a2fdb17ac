import pytest

from voronoi_bounds.constants import c_const, f_const, s_bound
from voronoi_bounds.forms import FormError, SymForm, act, evaluate, rank_one_coords
from voronoi_bounds.minima import is_perfect, shortest_vectors
from voronoi_bounds.torsion import homology, prime_support, prop3_bound
from voronoi_bounds.voronoi import (
    canonical_form,
    enumerate_perfect,
    facets,
    initial_form,
    is_equivalent,
    neighbor,
)
from voronoi_bounds.voronoi.complex import Cell, build_complex, count_bounds_ok, local_dd, stabilizer
from voronoi_bounds.voronoi.cones import extreme_rays, facets_of_cone
from voronoi_bounds.voronoi.isometry import isometries
from voronoi_bounds.voronoi.perfect import PerfectFormRecord, facet_orbits, neighbor_is_symmetric


def test_initial_form():
    assert initial_form(2) == SymForm([[2, 1], [1, 2]])
    with pytest.raises(FormError):
        initial_form(1)


def test_extreme_rays_of_orthant():
    rays = extreme_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert sorted(r for r, _ in rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_square_cone_facets():
    # cone over a square: 4 facets, each with 2 generators
    gens = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]
    fs = facets_of_cone(gens)
    assert len(fs) == 4 and all(len(f.incident) == 2 for f in fs)


def test_lower_dimensional_cone():
    gens = [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)]
    fs = facets_of_cone(gens)
    assert sorted(sorted(f.incident) for f in fs) == [[0], [1]]


def test_a2_facets():
    fs = facets(initial_form(2))
    assert len(fs) == 3 and all(len(f.vectors) == 2 for f in fs)


def test_facet_functionals_are_exact():
    a = initial_form(3)
    mv = shortest_vectors(a).vectors
    fs = facets(a)
    assert fs
    for f in fs:
        assert len(f.vectors) < len(mv)
        assert all(evaluate(f.normal, v) == 0 for v in f.vectors)
        assert all(evaluate(f.normal, v) > 0 for v in mv if v not in f.vectors)


@pytest.mark.parametrize("n", [2, 3])
def test_neighbors_single_class(n):
    a = initial_form(n)
    for f in facets(a):
        nb = neighbor(a, f)
        assert is_perfect(nb)
        assert shortest_vectors(nb).mu == shortest_vectors(a).mu
        assert is_equivalent(canonical_form(nb), canonical_form(a)) is not None


def test_n4_has_a_neighbor_with_12_pairs():
    a = initial_form(4)
    counts = {shortest_vectors(neighbor(a, f)).pair_count for f in facets(a)}
    assert 12 in counts and counts <= {10, 12}


def test_neighbor_symmetry():
    for n in (2, 3, 4):
        rec = PerfectFormRecord.build(initial_form(n))
        for f in facet_orbits(rec, facets(rec)):
            assert neighbor_is_symmetric(rec, f)


def test_is_equivalent_examples(a2):
    g = is_equivalent(a2, act(a2, [[0, 1], [1, 0]]))
    assert g is not None and act(a2, g) == act(a2, [[0, 1], [1, 0]])
    assert is_equivalent(SymForm([[1, 0], [0, 1]]), a2) is None
    recs = enumerate_perfect(4)
    assert is_equivalent(recs[0].form, recs[1].form) is None


def test_is_equivalent_finds_hidden_transform():
    a = initial_form(4)
    g = [[1, 2, 0, -1], [0, 1, 3, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    b = act(a, g)
    h = is_equivalent(a, b)
    assert h is not None and act(a, h) == b


def test_automorphism_orders():
    assert len(isometries(initial_form(2), initial_form(2))) == 12
    assert len(isometries(initial_form(3), initial_form(3))) == 48


@pytest.mark.parametrize("n,pairs", [(2, [3]), (3, [6]), (4, [10, 12])])
def test_enumerate_small(n, pairs):
    recs = enumerate_perfect(n)
    assert sorted(r.pair_count for r in recs) == pairs
    for r in recs:
        assert is_perfect(r.form)
        assert r.minvecs == shortest_vectors(r.form)
        assert r.pair_count <= s_bound(n)


@pytest.mark.slow
def test_enumerate_five():
    recs = enumerate_perfect(5)
    assert len(recs) == 3
    assert sorted(r.pair_count for r in recs) == [15, 15, 20]


def test_enumerate_range():
    with pytest.raises(FormError):
        enumerate_perfect(1)
    with pytest.raises(FormError):
        enumerate_perfect(6)


def test_record_json():
    j = enumerate_perfect(2)[0].to_json()
    assert j["pair_count"] == 3 and j["aut_order"] == 12 and j["provenance"] == "exact"


def test_stabilizer_top_a2():
    cell = Cell(shortest_vectors(initial_form(2)).vectors)
    assert stabilizer(cell) == (12, False)
    order, faithful = stabilizer(cell, "sl")
    assert (order, faithful) == (6, True)


def test_stabilizer_conjugate_cells_same_order():
    vecs = shortest_vectors(initial_form(3)).vectors
    g = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    moved = [tuple(sum(g[i][j] * v[j] for j in range(3)) for i in range(3)) for v in vecs]
    assert stabilizer(Cell(vecs))[0] == stabilizer(Cell(moved))[0]


def test_non_faithful_edge_dropped():
    edge = Cell([(1, 0), (0, 1)])
    assert edge.dim == 1 and not edge.in_boundary
    assert stabilizer(edge, "sl")[1] is False


def test_cell_dims():
    c = Cell([(1, 0, 0)])
    assert c.dim == 0 and c.in_boundary


@pytest.mark.parametrize("n", [2, 3, 4])
def test_local_incidences_square_to_zero(n):
    for r in enumerate_perfect(n):
        assert set(local_dd(Cell(r.minvecs.vectors)).values()) == {0}


@pytest.mark.parametrize("group", ["sl", "gl"])
def test_complex_n2(group):
    cx = build_complex(2, group)
    assert cx.check_dd()
    assert cx.meta["orbits"] == {"1": 1, "2": 1}
    for k in cx.degrees:
        assert prime_support(homology(cx, k).torsion) <= {2, 3}


def test_complex_n3():
    cx = build_complex(3)
    assert cx.check_dd()
    assert min(cx.meta["orbits"]) >= "2" and max(int(k) for k in cx.meta["orbits"]) == 5
    assert all(count_bounds_ok(cx).values())
    betti = {k: homology(cx, k).betti for k in cx.degrees}
    assert betti == {5: 1}


@pytest.mark.slow
def test_complex_n4_sl():
    cx = build_complex(4, "sl")
    assert cx.check_dd()
    hom = {k: homology(cx, k) for k in cx.degrees}
    assert {k: h.betti for k, h in hom.items() if h.betti} == {6: 1, 9: 1}
    assert all(p <= 5 for h in hom.values() for p in prime_support(h.torsion))
    for k in cx.degrees:
        assert prop3_bound(cx, k).bound >= hom[k].torsion_order
    assert all(count_bounds_ok(cx).values())


def test_orbit_counts_below_c():
    cx = build_complex(3)
    for d, count in cx.meta["orbits"].items():
        assert count <= c_const(int(d), 3)
        assert cx.meta["max_face_count"][d] <= f_const(int(d), 3)


def test_complex_rejects_large_n():
    with pytest.raises(Exception):
        build_complex(5)


def test_rank_one_coords_span_for_perfect():
    vecs = shortest_vectors(initial_form(3)).vectors
    from voronoi_bounds.forms import rank

    assert rank(rank_one_coords(v) for v in vecs) == 6
