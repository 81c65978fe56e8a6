import dataclasses
import json
from collections import Counter
from fractions import Fraction as Q

import pytest

from builders import star_scheme_with_invariant_edge
from tms import catalog, io
from tms.components import (JORDAN, VERTEX, Census, JuliaComponentModel, census, fatou_count,
                            local_model, post_critical_count_map, scheme_degree, verify_bound,
                            vertex_census)
from tms.rational import RationalMap
from tms.scheme import compose_cycle, critical_points
from tms.tree import Vertex
from tms.treemap import ItineraryOrbit, VertexCycle
from tms.values import INF, Exact, same_point

NAMES = catalog.names()
ZETA8 = complex(2 ** -0.5, 2 ** -0.5)


def vid(s, name):
    return s.meta["vertex_names"].index(name)


def relabel(s, perm):
    """The same scheme with vertex ``v`` renamed ``perm[v]``."""
    doc = io.to_dict(s)
    r = lambda v: perm[int(v)]
    doc["tree"]["vertices"] = [{"id": r(x["id"]), "in_t0": x["in_t0"]} for x in doc["tree"]["vertices"]]
    for e in doc["tree"]["edges"]:
        e["a"], e["b"] = r(e["a"]), r(e["b"])
    tm = doc["tree_map"]
    tm["vertex_images"] = {str(r(k)): r(v) for k, v in tm["vertex_images"].items()}
    tm["vertex_degrees"] = {str(r(k)): v for k, v in tm["vertex_degrees"].items()}
    doc["spheres"] = {str(r(k)): v for k, v in doc["spheres"].items()}
    doc["maps"] = {str(r(k)): v for k, v in doc["maps"].items()}
    for p in doc["portrait"]["points"]:
        p["sphere"] = r(p["sphere"])
    names = doc.get("notes", {}).get("vertex_names")
    if names:
        new = [None] * len(names)
        for v, n in enumerate(names):
            new[perm[v]] = n
        doc["notes"]["vertex_names"] = new
    return io.parse(json.dumps(doc))


def signature(c):
    return Counter((m.period, m.N, m.kind, m.model_degree) for m in c.models)


class TestCensusExamples:
    def test_mcmullen_fixed(self, schemes):
        s = schemes["mcmullen"]
        c = census(s, 1)
        a, j = c.models
        assert a.point == Vertex(vid(s, "A")) and a.kind == VERTEX and a.N == 2
        assert j.kind == JORDAN and j.N == 2 and j.multiplier == -3
        assert Q(2, 3) + j.point.offset == Q(3, 4)
        assert c.complex_count == 0

    def test_surgery_level_one(self, schemes):
        s = schemes["surgery-k1"]
        c = census(s, 1)
        by_vertex = {m.point.id: m for m in c.models if m.kind == VERTEX}
        assert by_vertex[vid(s, "A")].N == 2
        a0 = by_vertex[vid(s, "A0")]
        assert a0.N == 3 and a0.complex_type
        f = a0.model
        assert f.degree == 3 and same_point(f(INF), ZETA8)[0] and f(Exact(0)) is INF

    def test_degenerate_basilica(self, schemes):
        s = schemes["degenerate"]
        (m,) = census(s, 1).models
        assert m.N == 3 and m.complex_type
        assert m.model.same_as(RationalMap.from_coeffs([-1, 2, 1], [1]))


class TestLocalModel:
    def orbit(self, mult):
        return ItineraryOrbit(1, None, (0,), mult, ())

    def test_negative_multiplier(self):
        assert local_model(None, self.orbit(-3)).same_as(RationalMap.monomial(-3))

    def test_positive_multiplier(self):
        assert local_model(None, self.orbit(2)).same_as(RationalMap.monomial(2))

    def test_vertex_two_cycle_composes(self):
        s = star_scheme_with_invariant_edge()
        s = dataclasses.replace(
            s, map=dataclasses.replace(s.map, vertex_image={0: 1, 1: 0}),
            maps={0: RationalMap.monomial(2), 1: RationalMap.monomial(-3)})
        f = local_model(s, VertexCycle(2, (0, 1)))
        assert f.same_as(RationalMap.monomial(-6))


class TestPostCriticalCount:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_monomial(self, d):
        assert post_critical_count_map(RationalMap.monomial(d), [Exact(0), INF]) == 2

    def test_surgery_model(self, schemes):
        s = schemes["surgery-k1"]
        f = compose_cycle(s, vid(s, "A0"), 1)
        assert post_critical_count_map(f, [Exact(0), INF]) == 3

    def test_basilica(self):
        f = RationalMap.from_coeffs([-1, 2, 1], [1])
        assert post_critical_count_map(f, [Exact(-1), INF]) == 3

    @pytest.mark.parametrize("name", NAMES)
    def test_matches_direct_iteration(self, name):
        # N from the portrait against N from iterating the composed map on its
        # own (numerically located) critical points
        s = catalog.get(name).scheme
        for m in vertex_census(s).models:
            f = compose_cycle(s, m.point.id, m.period)
            crit = [z for z, _ in critical_points(f, [p.value for p in s.portrait.points])]
            assert post_critical_count_map(f, crit) == m.N


class TestCensusProperties:
    @pytest.mark.parametrize("name", NAMES)
    def test_complex_type_only_at_vertices(self, name):
        s = catalog.get(name).scheme
        for m in census(s, 4).models:
            if m.kind == JORDAN:
                assert m.N == 2 and not m.complex_type
            else:
                assert m.point.id in s.tree.V0

    @pytest.mark.parametrize("name", NAMES)
    def test_monotone_in_period(self, name):
        s = catalog.get(name).scheme
        prev = []
        for p in range(1, 5):
            cur = [(m.period, m.point) for m in census(s, p).models]
            assert cur[:len(prev)] == prev
            prev = cur

    @pytest.mark.parametrize("name", NAMES)
    def test_bound(self, name):
        s = catalog.get(name).scheme
        c = census(s, len(s.tree.V0))
        holds, slack = verify_bound(c)
        assert holds and slack == c.fatou_count - 2 - c.excess
        assert c.complex_count <= c.fatou_count - 2

    @pytest.mark.parametrize("name", ["mcmullen", "surgery-k1", "buried-sierpinski"])
    def test_relabelling(self, name):
        s = catalog.get(name).scheme
        n = s.tree.n_vertices
        perm = [(3 * v + 1) % n if n % 3 else (n - 1 - v) for v in range(n)]
        t = relabel(s, perm)
        assert sorted(perm) == list(range(n)) and t.tree.n_vertices == n
        assert signature(census(t, 3)) == signature(census(s, 3))
        assert fatou_count(t) == fatou_count(s)

    def test_periodic_counts_stay_below_degree_power(self, schemes):
        s = schemes["cantor-z3"]
        for p in range(1, 6):
            c = census(s, p)
            assert sum(1 for m in c.models if m.period == p) * p <= 6 ** p


class TestFatouCount:
    @pytest.mark.parametrize("name", NAMES)
    def test_catalog_values(self, name):
        e = catalog.get(name)
        assert fatou_count(e.scheme) == e.expected.fatou_count
        assert scheme_degree(e.scheme) == e.expected.degree

    def test_degree_agrees_with_family(self, schemes):
        # z^2 + 1/(n z^3) has degree 5
        assert scheme_degree(schemes["mcmullen"]) == 5

    def test_too_small_is_flagged(self):
        m = JuliaComponentModel(Vertex(0), 1, VERTEX, 3, 2)
        assert verify_bound(Census(1, [m], 1)) == (False, -2)
        assert verify_bound(Census(1, [], 2)) == (True, 0)

    def test_table_and_json(self, schemes):
        c = census(schemes["surgery-k1"], 2)
        d = json.loads(json.dumps(c.to_json()))
        assert {"period", "kind", "model_degree", "N", "complex_type"} <= set(d["models"][0])
        assert d["bound_slack"] == c.bound_slack
        assert c.table().splitlines()[-1].startswith("N_f = 3")
