from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import mcmullen_with_covering_gap, star_scheme_with_invariant_edge
from oracles import periodic_oracle, vertex_cycle_oracle
from tms import catalog
from tms.tree import Interior, TreePair, Vertex
from tms.treemap import (BRANCHED, COVERING, GENERAL, CaseA, CaseB, DegenerateImage,
                         ExpansionViolation, NotABranchedCovering, NotExtendable, PointOutsideDomain,
                         TreeMap, check_degree_function, covering_type_at,
                         degree_of_branched_covering, escape_check, eval_point,
                         extend_on_component, gap_dynamics, image_arc, is_geometric,
                         omega_orbit_eventually_collapses, periodic_points)

NAMES = catalog.names()


def vid(s, name):
    return s.meta["vertex_names"].index(name)


class TestEvaluation:
    def test_vertex_goes_to_its_image(self, schemes):
        s = schemes["mcmullen"]
        assert eval_point(s.tree, s.map, Vertex(vid(s, "B"))) == Vertex(vid(s, "A'"))

    def test_mcmullen_quarter_maps_to_half(self, schemes):
        s = schemes["mcmullen"]
        assert eval_point(s.tree, s.map, Interior(0, Q(1, 4))) == Vertex(vid(s, "B"))

    def test_tent_fixes_three_quarters(self, schemes):
        s = schemes["cantor-z3"]
        x = s.tree.point(3, Q(1, 12))          # 2/3 + 1/12 = 3/4
        assert eval_point(s.tree, s.map, x) == x

    def test_gap_points_are_outside_the_domain(self, schemes):
        s = schemes["mcmullen"]
        with pytest.raises(PointOutsideDomain):
            eval_point(s.tree, s.map, Interior(1, Q(1, 24)))

    @pytest.mark.parametrize("name", NAMES)
    @given(data=st.data())
    @settings(max_examples=25, deadline=None)
    def test_edges_are_stretched_by_their_degree(self, name, data):
        s = catalog.get(name).scheme
        if not s.tree.E0:
            return
        e = data.draw(st.sampled_from(s.tree.E0))
        L = s.tree.length(e)
        t1 = data.draw(st.fractions(0, L, max_denominator=50))
        t2 = data.draw(st.fractions(0, L, max_denominator=50))
        x, y = s.tree.point(e, t1), s.tree.point(e, t2)
        fx, fy = eval_point(s.tree, s.map, x), eval_point(s.tree, s.map, y)
        assert s.tree.distance(fx, fy) == s.map.edge_degree[e] * s.tree.distance(x, y)


class TestImageArc:
    def test_identity_edge(self):
        s = star_scheme_with_invariant_edge()
        assert image_arc(s.tree, s.map, 0) == [(0, 1)]

    def test_mcmullen_right_branch_covers_everything_backwards(self, schemes):
        s = schemes["mcmullen"]
        assert image_arc(s.tree, s.map, 3) == [(3, -1), (2, -1), (1, -1), (0, -1)]

    def test_surgery_leaf_edge_is_isometric(self, schemes):
        s = schemes["surgery-k1"]
        A0, D, Ap = vid(s, "A0"), vid(s, "D"), vid(s, "A'")
        e = next(i for i, x in enumerate(s.tree.edges) if {x.a, x.b} == {A0, D})
        target = next(i for i, x in enumerate(s.tree.edges) if {x.a, x.b} == {A0, Ap})
        assert [t for t, _ in image_arc(s.tree, s.map, e)] == [target]
        assert s.map.edge_degree[e] == 1

    def test_collapsed_edge(self):
        tp = TreePair([True, True], [(0, 1, 1, True)])
        F = TreeMap({0: 0, 1: 0}, {0: 1}, {0: 1, 1: 1})
        with pytest.raises(DegenerateImage):
            image_arc(tp, F, 0)


class TestDegreeFunction:
    def test_homeomorphism(self):
        s = star_scheme_with_invariant_edge()
        assert check_degree_function(s.tree, s.map).ok

    def test_too_many_critical_edges(self):
        tp = TreePair([True] * 4, [(0, i, 1, True) for i in (1, 2, 3)])
        F = TreeMap({0: 0, 1: 1, 2: 2, 3: 3}, {0: 2, 1: 2, 2: 2}, {0: 2, 1: 2, 2: 2, 3: 2})
        chk = check_degree_function(tp, F)
        assert not chk.ok and any("0" in n for n in chk.notes)

    def test_mcmullen(self, schemes):
        s = schemes["mcmullen"]
        assert check_degree_function(s.tree, s.map).ok
        assert s.map.edge_degree == {0: 2, 3: 3}


class TestGeometric:
    def test_identity(self):
        s = star_scheme_with_invariant_edge()
        assert is_geometric(s.tree, s.map).ok

    def test_mcmullen(self, schemes):
        s = schemes["mcmullen"]
        assert is_geometric(s.tree, s.map).ok

    def test_length_perturbation_is_reported(self, schemes):
        s = schemes["mcmullen"]
        edges = [(e.a, e.b, e.length + (Q(1, 7) if i == 0 else 0), e.in_t0)
                 for i, e in enumerate(s.tree.edges)]
        tp = TreePair(s.tree.in_t0, edges)
        chk = is_geometric(tp, s.map)
        assert not chk.ok and 0 in chk.witnesses


class TestCoveringType:
    def test_local_homeomorphism(self):
        s = star_scheme_with_invariant_edge()
        assert covering_type_at(s.tree, s.map, 0) == COVERING

    def test_branched_not_covering(self):
        tp = TreePair([True, True, True], [(0, 1, 1, True), (1, 2, 2, True)])
        F = TreeMap({0: 1, 1: 2, 2: 0}, {0: 2, 1: 1}, {0: 2, 1: 2, 2: 1})
        assert covering_type_at(tp, F, 0) == BRANCHED

    def test_strict_inequality_in_one_direction(self):
        tp = TreePair([True, True, True], [(0, 1, 1, True), (0, 2, 1, True)])
        F = TreeMap({0: 0, 1: 1, 2: 1}, {0: 1, 1: 1}, {0: 3, 1: 1, 2: 1})
        assert covering_type_at(tp, F, 0) == GENERAL


class TestBranchedDegree:
    def test_identity(self):
        s = star_scheme_with_invariant_edge()
        assert degree_of_branched_covering(s.tree, s.map) == 1

    def test_mcmullen_branches_add_up_to_five(self, schemes):
        s = schemes["mcmullen"]
        assert degree_of_branched_covering(s.tree, s.map, [0, 3]) == 5

    def test_single_edge_of_degree_three(self):
        tp = TreePair([True, True, True], [(0, 1, 1, True), (1, 2, 3, True)])
        F = TreeMap({0: 1, 1: 2, 2: 0}, {0: 3, 1: 1}, {0: 3, 1: 3, 2: 1})
        assert degree_of_branched_covering(tp, F, [0]) == 3

    def test_general_map_is_rejected(self):
        tp = TreePair([True, True, True], [(0, 1, 1, True), (0, 2, 1, True)])
        F = TreeMap({0: 0, 1: 1, 2: 1}, {0: 1, 1: 1}, {0: 3, 1: 1, 2: 1})
        with pytest.raises(NotABranchedCovering):
            degree_of_branched_covering(tp, F, [0, 1])


class TestEscape:
    def test_invariant_edge_is_trapped(self):
        s = star_scheme_with_invariant_edge()
        chk = escape_check(s.tree, s.map)
        assert not chk.ok and (0,) in chk.witnesses

    def test_mcmullen(self, schemes):
        s = schemes["mcmullen"]
        assert escape_check(s.tree, s.map).ok

    def test_degenerate_vacuous(self, schemes):
        s = schemes["degenerate"]
        assert escape_check(s.tree, s.map).ok


class TestGaps:
    def test_mcmullen_gap_collapses_to_a_prime(self, schemes):
        s = schemes["mcmullen"]
        (g,) = s.tree.omega_components()
        assert extend_on_component(s.tree, s.map, g) == CaseB(vid(s, "A'"))

    def test_covering_gap(self):
        s = mcmullen_with_covering_gap()
        res = gap_dynamics(s.tree, s.map, s.gap_degrees())
        a = res[1]
        assert isinstance(a, CaseA) and a.center_degree == 2 and a.covering
        assert a.center_image == vid(s, "G") and isinstance(res[4], CaseB)

    def test_boundary_split_between_gaps(self):
        # two gaps; the first one's boundary lands on one vertex of each
        tp = TreePair([True, False, True, False, True],
                      [(0, 1, 1, False), (1, 2, 1, False), (2, 3, 1, False), (3, 4, 1, False)])
        F = TreeMap({0: 0, 2: 4, 4: 4}, {}, {0: 1, 2: 1, 4: 1})
        g = tp.omega_components()[0]
        # boundary {0, 2} -> {0, 4}: not the boundary of one gap
        assert isinstance(extend_on_component(tp, F, g, {0: 1, 1: 1}), NotExtendable)

    def test_all_collapse(self, schemes):
        s = schemes["mcmullen"]
        assert omega_orbit_eventually_collapses(s.tree, s.map).ok

    def test_chain_then_collapse(self):
        s = mcmullen_with_covering_gap()
        assert omega_orbit_eventually_collapses(s.tree, s.map, s.gap_degrees()).ok

    def test_two_gaps_swapped(self):
        # P1 -H1- Q1 == P2 -H2- Q2, gaps swapped by F
        tp = TreePair([True, False, True, True, False, True],
                      [(0, 1, 1, False), (1, 2, 1, False), (2, 3, 1, True),
                       (3, 4, 1, False), (4, 5, 1, False)])
        F = TreeMap({0: 3, 2: 5, 3: 0, 5: 2}, {2: 1}, {0: 1, 2: 1, 3: 1, 5: 1})
        chk = omega_orbit_eventually_collapses(tp, F, {0: 1, 1: 1, 3: 1, 4: 1})
        assert not chk.ok and chk.witnesses


class TestPeriodicPoints:
    def test_tent_fixed_points(self, schemes):
        s = schemes["cantor-z3"]
        ps = periodic_points(s.tree, s.map, 1)
        assert [c.vertices for c in ps.vertex_cycles] == [(vid(s, "A"),)]
        (o,) = ps.orbits
        assert o.point == s.tree.point(3, Q(1, 12)) and o.multiplier == -3

    def test_tent_period_two(self, schemes):
        s = schemes["cantor-z3"]
        ps = periodic_points(s.tree, s.map, 2)
        (o,) = ps.orbits
        pts = {x.offset if x.edge == 0 else Q(2, 3) + x.offset for x in o.orbit}
        assert pts == {Q(3, 10), Q(9, 10)} and o.multiplier == -9
        assert not ps.vertex_cycles

    def test_degenerate_fixed_vertex(self, schemes):
        s = schemes["degenerate"]
        ps = periodic_points(s.tree, s.map, 1)
        assert ps.points() == {Vertex(vid(s, "A"))}

    def test_interval_of_fixed_points_is_an_error(self):
        s = star_scheme_with_invariant_edge()
        with pytest.raises(ExpansionViolation):
            periodic_points(s.tree, s.map, 1)

    @pytest.mark.parametrize("name", NAMES)
    def test_matches_bisection_oracle(self, name):
        s = catalog.get(name).scheme
        total = 0
        for p in range(1, 7):
            ps = periodic_points(s.tree, s.map, p)
            mine = {x for o in ps.orbits for x in o.orbit}
            assert mine == periodic_oracle(s.tree, s.map, p), f"period {p}"
            cyc = {v for c in ps.vertex_cycles for v in c.vertices}
            assert cyc == vertex_cycle_oracle(s.map, set(s.tree.V0), p)
            total += len(mine)
        assert total > 0 or not s.tree.E0

    def test_output_is_sorted(self, schemes):
        s = schemes["surgery-k1"]
        ps = periodic_points(s.tree, s.map, 4)
        keys = [(o.point.edge, o.point.offset) for o in ps.orbits]
        assert keys == sorted(keys)
