"""Piecewise-linear tree maps ``F: T0 -> T1`` given by their vertex maps.

Only the images of the vertices of ``T0`` are stored.  On an edge ``[a, b]``
the map is the affine parametrisation of the unique arc ``[F(a), F(b)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Mapping

import networkx as nx

from .report import Check
from .tree import Gap, Interior, TreePair, TreePoint, Vertex


class PointOutsideDomain(ValueError):
    """The point is not in ``T0``."""


class DegenerateImage(ValueError):
    """Both ends of an edge have the same image."""


class ExpansionViolation(ArithmeticError):
    """A whole interval of periodic points; contradicts the escape test."""


class NotABranchedCovering(ValueError):
    pass


class InconsistentDegree(ValueError):
    pass


class NotStarShaped(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TreeMap:
    """Vertex map with local degrees on ``V0`` and ``E0``."""

    vertex_image: Mapping[int, int]
    edge_degree: Mapping[int, int]
    vertex_degree: Mapping[int, int]
    _arcs: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_image", dict(self.vertex_image))
        object.__setattr__(self, "edge_degree", dict(self.edge_degree))
        object.__setattr__(self, "vertex_degree", dict(self.vertex_degree))

    def __call__(self, v: int) -> int:
        return self.vertex_image[v]

    def structure(self) -> tuple:
        return (tuple(sorted(self.vertex_image.items())),
                tuple(sorted(self.edge_degree.items())),
                tuple(sorted(self.vertex_degree.items())))

    def __eq__(self, other):
        return isinstance(other, TreeMap) and self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def check_fields(self, tp: TreePair) -> list[str]:
        """Structural problems (missing or stray keys, bad ranges)."""
        out = []
        V0, E0 = set(tp.V0), set(tp.E0)
        if set(self.vertex_image) != V0:
            out.append("vertex images must be given exactly on V0")
        if set(self.vertex_degree) != V0:
            out.append("vertex degrees must be given exactly on V0")
        if set(self.edge_degree) != E0:
            out.append("edge degrees must be given exactly on E0")
        for v, w in self.vertex_image.items():
            if not 0 <= w < tp.n_vertices:
                out.append(f"vertex {v} maps to missing vertex {w}")
        for k, d in list(self.edge_degree.items()) + list(self.vertex_degree.items()):
            if int(d) < 1:
                out.append(f"degree of {k} must be positive")
        for e in E0 & set(self.edge_degree):
            ed = tp.edges[e]
            if self.vertex_image.get(ed.a) == self.vertex_image.get(ed.b):
                out.append(f"edge {e} is collapsed (not injective)")
        return out


# ---------------------------------------------------------------------------
# images

def image_arc(tp: TreePair, F: TreeMap, e: int) -> list[tuple[int, int]]:
    """Arc ``[F(a), F(b)]`` as ``(edge, sign)`` pieces of ``T1``."""
    key = (id(tp), e)
    hit = F._arcs.get(key)
    if hit is not None and hit[0] is tp:
        return hit[1]
    ed = tp.edges[e]
    if not ed.in_t0:
        raise PointOutsideDomain(f"edge {e} is not in T0")
    fa, fb = F(ed.a), F(ed.b)
    if fa == fb:
        raise DegenerateImage(f"edge {e} has both ends mapped to vertex {fa}")
    arc = tp.vertex_arc(fa, fb)
    F._arcs[key] = (tp, arc)
    return arc


def arc_length(tp: TreePair, arc) -> Fraction:
    return sum((tp.length(e) for e, _ in arc), Fraction(0))


def eval_point(tp: TreePair, F: TreeMap, x: TreePoint) -> TreePoint:
    """``F(x)`` for ``x`` in ``T0``.

    >>> tp = TreePair([True, True], [(0, 1, 1, True)])
    >>> F = TreeMap({0: 0, 1: 1}, {0: 1}, {0: 1, 1: 1})
    >>> eval_point(tp, F, tp.point(0, Fraction(1, 2)))
    Interior(edge=0, offset=Fraction(1, 2))
    """
    if not tp.in_T0(x):
        raise PointOutsideDomain(f"{x} is not in T0")
    if isinstance(x, Vertex):
        return Vertex(F(x.id))
    ed = tp.edges[x.edge]
    arc = image_arc(tp, F, x.edge)
    total = arc_length(tp, arc)
    r = x.offset / ed.length * total
    return tp.point_along(F(ed.a), F(ed.b), r)


def direction_image(tp: TreePair, F: TreeMap, a: int, e: int) -> int:
    """``D_aF``: the first edge of the image of edge ``e`` leaving ``F(a)``."""
    ed = tp.edges[e]
    arc = tp.vertex_arc(F(a), F(ed.other(a)))
    return arc[0][0]


# ---------------------------------------------------------------------------
# local degree function

def check_degree_function(tp: TreePair, F: TreeMap) -> Check:
    """Both Riemann-Hurwitz type inequalities at every vertex of ``T0``."""
    chk = Check("degree-function", True)
    for a in tp.V0:
        da = F.vertex_degree[a]
        t0_edges = [e for e in tp.adj[a] if tp.edges[e].in_t0]
        lhs = 2 * da - 2
        rhs = sum(F.edge_degree[e] - 1 for e in t0_edges)
        if lhs < rhs:
            chk.fail(("2.1", a), f"vertex {a}: 2*{da}-2 = {lhs} < {rhs}")
        fibres: dict = {}
        for e in t0_edges:
            fibres.setdefault(direction_image(tp, F, a, e), []).append(e)
        for target, es in fibres.items():
            s = sum(F.edge_degree[e] for e in es)
            if s > da:
                chk.fail(("2.2", a, target),
                         f"vertex {a}: edges {es} into direction {target} carry {s} > {da}")
    return chk


def is_geometric(tp: TreePair, F: TreeMap) -> Check:
    chk = Check("geometric", True)
    for e in tp.E0:
        want = F.edge_degree[e] * tp.length(e)
        got = arc_length(tp, image_arc(tp, F, e))
        if got != want:
            chk.fail(e, f"edge {e}: image length {got} != {F.edge_degree[e]} * {tp.length(e)}")
    return chk


GENERAL, BRANCHED, COVERING = "GeneralMap", "BranchedCovering", "Covering"


def covering_type_at(tp: TreePair, F: TreeMap, a: int, edges=None) -> str:
    """Classify ``a`` by which of the degree (in)equalities are equalities.

    ``edges`` restricts the tangent directions considered (default: T0 edges).
    """
    da = F.vertex_degree[a]
    es = [e for e in tp.adj[a] if (tp.edges[e].in_t0 if edges is None else e in edges)]
    fibres: dict = {}
    for e in es:
        fibres.setdefault(direction_image(tp, F, a, e), []).append(e)
    if not fibres or any(sum(F.edge_degree[e] for e in g) != da for g in fibres.values()):
        return GENERAL
    if 2 * da - 2 == sum(F.edge_degree[e] - 1 for e in es):
        return COVERING
    return BRANCHED


def degree_of_branched_covering(tp: TreePair, F: TreeMap, edges=None) -> int:
    """Degree of ``F`` restricted to ``edges`` (default ``E0``).

    Sums the degrees of the domain edges over every covered target edge and
    over every target vertex, and insists they all agree.
    """
    dom = sorted(tp.E0 if edges is None else edges)
    dom_vertices = {v for e in dom for v in (tp.edges[e].a, tp.edges[e].b)}
    for a in dom_vertices:
        if covering_type_at(tp, F, a, set(dom)) == GENERAL:
            raise NotABranchedCovering(f"degree equality fails at vertex {a}")
    per_edge: dict = {}
    per_vertex: dict = {}
    for e in dom:
        d = F.edge_degree[e]
        arc = image_arc(tp, F, e)
        for t, _ in arc:
            per_edge[t] = per_edge.get(t, 0) + d
        # interior vertices of the image arc are hit at interior points
        cur = F(tp.edges[e].a)
        for t, sgn in arc[:-1]:
            cur = tp.edges[t].b if sgn > 0 else tp.edges[t].a
            per_vertex[cur] = per_vertex.get(cur, 0) + d
    for a in dom_vertices:
        per_vertex[F(a)] = per_vertex.get(F(a), 0) + F.vertex_degree[a]
    values = set(per_edge.values()) | set(per_vertex.values())
    if len(values) != 1:
        raise InconsistentDegree(f"fibre sums disagree: edges {per_edge}, vertices {per_vertex}")
    return values.pop()


# ---------------------------------------------------------------------------
# escape test

def cover_graph(tp: TreePair, F: TreeMap) -> nx.DiGraph:
    """``e -> e'`` when the image of ``e`` contains ``e'`` (``e`` in ``E0``)."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(tp.edges)))
    for e in tp.E0:
        for t, _ in image_arc(tp, F, e):
            g.add_edge(e, t)
    return g


def escape_check(tp: TreePair, F: TreeMap) -> Check:
    """Every edge of ``T0`` eventually covers an edge outside ``T0``."""
    chk = Check("escape", True)
    E0 = set(tp.E0)
    if not E0:
        chk.notes.append("T0 has no edges")
        return chk
    g = cover_graph(tp, F)
    escaping = set()
    outside = [e for e in range(len(tp.edges)) if e not in E0]
    rev = g.reverse(copy=False)
    for t in outside:
        escaping |= nx.descendants(rev, t)
    trapped = sorted(E0 - escaping)
    if trapped:
        sub = g.subgraph(trapped)
        for comp in nx.strongly_connected_components(sub):
            c = sorted(comp)
            if len(c) > 1 or sub.has_edge(c[0], c[0]):
                chk.fail(tuple(c), f"edges {c} never leave T0")
        if chk.ok:
            chk.fail(tuple(trapped), f"edges {trapped} never leave T0")
    return chk


# ---------------------------------------------------------------------------
# gaps

@dataclass(frozen=True)
class CaseA:
    """Gap mapped onto another gap by a geometric branched covering."""

    target: Gap
    center_image: int
    degrees: tuple  # ((edge, degree), ...)
    center_degree: int
    covering: bool


@dataclass(frozen=True)
class CaseB:
    """Whole boundary mapped to one vertex."""

    vertex: int


@dataclass(frozen=True)
class NotExtendable:
    reason: str


def extend_on_component(tp: TreePair, F: TreeMap, gap: Gap,
                        gap_degrees: Mapping[int, int] | None = None):
    """Decide how ``F`` extends over a star-shaped gap.

    ``gap_degrees`` gives the degree of each edge ``[p, a]`` of the gap,
    read off the sphere at ``a``; it is needed only when the boundary maps
    onto the boundary of another gap.
    """
    if gap.center is None:
        raise NotStarShaped(f"gap with edges {sorted(gap.edges)} has no center vertex")
    images = {F(a) for a in gap.boundary}
    if len(images) == 1:
        return CaseB(images.pop())
    targets = [w for w in tp.omega_components() if w.boundary == frozenset(images)]
    if not targets:
        return NotExtendable("boundary images are not the boundary of a single gap")
    W = targets[0]
    if W.center is None:
        return NotExtendable("target gap is not star-shaped")
    if gap_degrees is None or any(e not in gap_degrees for e in gap.edges):
        return NotExtendable("edge degrees inside the gap are not available")
    p, c = gap.center, W.center
    fibres: dict = {}
    degs = []
    for e in sorted(gap.edges):
        a = tp.edges[e].other(p)
        d = int(gap_degrees[e])
        degs.append((e, d))
        arc = tp.vertex_arc(c, F(a))
        if len(arc) != 1:
            return NotExtendable(f"boundary vertex {F(a)} is not adjacent to the target center")
        if tp.length(arc[0][0]) != d * tp.length(e):
            return NotExtendable(f"edge {e} is not mapped with derivative {d}")
        fibres.setdefault(arc[0][0], []).append(d)
    w_edges = set(W.edges)
    if set(fibres) != w_edges:
        return NotExtendable("extension does not cover every edge of the target gap")
    sums = {sum(v) for v in fibres.values()}
    if len(sums) != 1:
        return NotExtendable(f"unequal fibre sums {sorted(sums)} at the center")
    n = sums.pop()
    covering = (2 * n - 2 == sum(d - 1 for _, d in degs))
    if 2 * n - 2 < sum(d - 1 for _, d in degs):
        return NotExtendable("center degree too small for the edge degrees")
    return CaseA(W, c, tuple(degs), n, covering)


def gap_dynamics(tp: TreePair, F: TreeMap, gap_degrees=None) -> dict:
    """``{gap key: extension result}`` for every gap."""
    out = {}
    for g in tp.omega_components():
        try:
            out[g.key] = extend_on_component(tp, F, g, gap_degrees)
        except NotStarShaped as exc:
            out[g.key] = NotExtendable(str(exc))
    return out


def omega_orbit_eventually_collapses(tp: TreePair, F: TreeMap, gap_degrees=None) -> Check:
    chk = Check("gap-collapse", True)
    dyn = gap_dynamics(tp, F, gap_degrees)
    for key in sorted(dyn):
        seen = []
        k = key
        while True:
            r = dyn[k]
            if isinstance(r, CaseB):
                break
            if isinstance(r, NotExtendable):
                chk.fail(k, f"gap {k}: {r.reason}")
                break
            seen.append(k)
            k = r.target.key
            if k in seen:
                cyc = tuple(seen[seen.index(k):])
                if cyc not in chk.witnesses:
                    chk.fail(cyc, f"gaps {list(cyc)} map among themselves forever")
                break
    return chk


# ---------------------------------------------------------------------------
# periodic points

@dataclass(frozen=True)
class ItineraryOrbit:
    period: int
    point: TreePoint
    edge_itinerary: tuple
    multiplier: int
    orbit: tuple = ()


@dataclass(frozen=True)
class VertexCycle:
    period: int
    vertices: tuple  # starts at the least id

    @property
    def point(self) -> Vertex:
        return Vertex(self.vertices[0])


@dataclass
class PeriodicSet:
    period: int
    vertex_cycles: list
    orbits: list

    def points(self) -> set:
        out = set()
        for c in self.vertex_cycles:
            out.update(Vertex(v) for v in c.vertices)
        for o in self.orbits:
            out.update(o.orbit)
        return out


def _cover_pieces(tp: TreePair, F: TreeMap) -> dict:
    """Affine pieces ``s -> alpha*s + beta`` from ``e`` into each covered ``e'``."""
    pieces: dict = {}
    E0 = set(tp.E0)
    for e in tp.E0:
        arc = image_arc(tp, F, e)
        k = arc_length(tp, arc) / tp.length(e)
        out = []
        o = Fraction(0)
        for t, sgn in arc:
            Lt = tp.length(t)
            if t in E0:
                if sgn > 0:
                    out.append((t, k, -o, sgn))
                else:
                    out.append((t, -k, Lt + o, sgn))
            o += Lt
        pieces[e] = out
    return pieces


def vertex_cycles(tp: TreePair, F: TreeMap, p: int) -> list[VertexCycle]:
    out = set()
    V0 = set(tp.V0)
    for v in tp.V0:
        orbit = [v]
        ok = True
        for _ in range(p):
            w = orbit[-1]
            if w not in V0:
                ok = False
                break
            orbit.append(F(w))
        if not ok or orbit[-1] != v:
            continue
        cyc = orbit[:-1]
        if any(cyc[d] == v for d in range(1, p)):
            continue
        i = cyc.index(min(cyc))
        out.add(tuple(cyc[i:] + cyc[:i]))
    return [VertexCycle(p, c) for c in sorted(out)]


def periodic_points(tp: TreePair, F: TreeMap, p: int) -> PeriodicSet:
    """All points of minimal period ``p`` of ``F``.

    Interior points are found by solving the affine return map along every
    closed walk of length ``p`` in the edge-cover graph; orbits meeting a
    vertex are left to the vertex cycles.
    """
    if p < 1:
        raise ValueError("period must be positive")
    pieces = _cover_pieces(tp, F)
    E0 = tp.E0
    # steps needed to come back to each start edge, for pruning
    rev = nx.DiGraph()
    rev.add_nodes_from(E0)
    for e, lst in pieces.items():
        for t, *_ in lst:
            rev.add_edge(t, e)
    found: dict = {}
    for e0 in E0:
        back = nx.single_source_shortest_path_length(rev, e0)
        stack = [(e0, (e0,), Fraction(1), Fraction(0), 1)]
        while stack:
            e, itin, A, B, sign = stack.pop()
            steps = len(itin) - 1
            for t, al, be, _sg in pieces[e]:
                A2, B2 = al * A, al * B + be
                if steps + 1 == p:
                    if t != e0:
                        continue
                    _solve(tp, F, pieces, itin, A2, B2, p, found)
                elif back.get(t, p + 1) <= p - steps - 1:
                    stack.append((t, itin + (t,), A2, B2, sign))
    orbits = sorted(found.values(), key=lambda o: (o.point.edge, o.point.offset))
    return PeriodicSet(p, vertex_cycles(tp, F, p), orbits)


def _solve(tp, F, pieces, itin, A, B, p, found):
    e0 = itin[0]
    if A == 1:
        if B == 0:
            raise ExpansionViolation(f"itinerary {itin} returns with slope +1")
        return
    s = B / (1 - A)
    if not 0 < s < tp.length(e0):
        return
    pts = [Interior(e0, s)]
    cur = s
    for i in range(p):
        e, t = itin[i], itin[(i + 1) % p]
        al, be = next((a, b) for tt, a, b, _ in pieces[e] if tt == t)
        cur = al * cur + be
        if not 0 < cur < tp.length(t):
            return
        if i < p - 1:
            pts.append(Interior(t, cur))
    for d in range(1, p):
        if p % d == 0 and pts[d] == pts[0]:
            return
    key = frozenset(pts)
    if key in found:
        return
    degs = prod(F.edge_degree[e] for e in itin)
    mult = degs if A > 0 else -degs
    j = min(range(p), key=lambda i: (pts[i].edge, pts[i].offset))
    rot_itin = itin[j:] + itin[:j]
    found[key] = ItineraryOrbit(p, pts[j], rot_itin, mult, tuple(pts[j:] + pts[:j]))


def orbit_of(tp: TreePair, F: TreeMap, x: TreePoint, limit: int = 10_000) -> list[TreePoint]:
    """Forward orbit until it repeats or leaves ``T0``; the last entry may be outside."""
    out = [x]
    seen = {x}
    cur = x
    for _ in range(limit):
        if not tp.in_T0(cur):
            break
        cur = eval_point(tp, F, cur)
        out.append(cur)
        if cur in seen:
            break
        seen.add(cur)
    return out


def minimal_period(tp: TreePair, F: TreeMap, x: TreePoint, limit: int = 100_000) -> int | None:
    """Exact period of ``x`` by iteration, or None if it escapes or exceeds ``limit``."""
    cur = x
    for n in range(1, limit + 1):
        if not tp.in_T0(cur):
            return None
        cur = eval_point(tp, F, cur)
        if cur == x:
            return n
    return None
