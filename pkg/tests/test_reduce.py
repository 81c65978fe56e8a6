from fractions import Fraction

import pytest

from builders import mcmullen_variant, mcmullen_with_covering_gap
from tms import catalog
from tms.reduce import adversarial_point, reduce_to_irreducible, subdivide_at, subdivide_edge
from tms.surgery import godillon_scheme
from tms.tree import TreeError, Vertex
from tms.treemap import eval_point, periodic_points
from tms.scheme import compose_cycle
from tms.validate import check_hpcf, full_report, is_irreducible, vertex_cycles_all

NAMES = catalog.names()


@pytest.mark.parametrize("name", NAMES)
def test_idempotent_on_catalog(name):
    s = catalog.get(name).scheme
    assert reduce_to_irreducible(s) == s


@pytest.mark.parametrize("name", [n for n in NAMES if n != "degenerate"])
def test_every_subdivision_is_undone(name):
    s = catalog.get(name).scheme
    for e in s.tree.E0:
        t = subdivide_edge(s, e)
        assert t.tree.n_vertices > s.tree.n_vertices
        assert check_hpcf(t).ok and not is_irreducible(t)
        r = reduce_to_irreducible(t)
        assert r == s
        assert reduce_to_irreducible(r) == r


def test_subdivision_point_maps_to_a_vertex(schemes):
    s = schemes["mcmullen"]
    # [B', A'] is stretched threefold over the whole interval, starting
    # from A'; B' is the first vertex met, a third of the way along
    t = adversarial_point(s, 3)
    assert t == Fraction(1, 9)
    y = eval_point(s.tree, s.map, s.tree.point(3, t))
    assert y == Vertex(s.meta["vertex_names"].index("B'"))


def test_subdivision_must_hit_a_vertex(schemes):
    with pytest.raises(TreeError):
        subdivide_at(schemes["mcmullen"], 0, "1/7")


def test_reduction_keeps_cycles_and_first_returns(schemes):
    s = schemes["surgery-k1"]
    t = subdivide_edge(subdivide_edge(s, 0), 3)
    r = reduce_to_irreducible(t)
    names_s = [s.meta["vertex_names"][c[0]] for c in vertex_cycles_all(s)]
    names_r = [r.meta["vertex_names"][c[0]] for c in vertex_cycles_all(r)]
    assert names_s == names_r
    for cyc in vertex_cycles_all(r):
        assert compose_cycle(r, cyc[0], len(cyc)).same_as(compose_cycle(s, cyc[0], len(cyc)))
    assert len(periodic_points(r.tree, r.map, 2).orbits) == len(periodic_points(s.tree, s.map, 2).orbits)


def test_covering_gap_is_filled():
    s = mcmullen_with_covering_gap(witness=False)
    r = reduce_to_irreducible(s)
    assert full_report(r).ok
    assert r == catalog.get("mcmullen").scheme


def test_dead_leaf_is_trimmed():
    s = mcmullen_variant(leaf=True)
    r = reduce_to_irreducible(s)
    assert r.tree.n_vertices == s.tree.n_vertices - 1
    assert full_report(r).ok


def test_literal_godillon_reduces_to_the_shipped_one():
    assert reduce_to_irreducible(godillon_scheme(3)) == catalog.get("godillon-3").scheme
