"""Edge subdivision and reduction to the irreducible form of a scheme."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction

from .rational import RationalMap
from .scheme import MarkedSphere, TreeMappingScheme, derive_portrait
from .tree import TreeError, TreePair, Vertex
from .treemap import CaseA, TreeMap, image_arc
from .values import INF, ONE, ZERO, Exact


@dataclass
class _Raw:
    """Mutable copy of a scheme used while editing its combinatorics."""

    in_t0: list
    edges: list          # [a, b, length, in_t0]
    images: dict
    edeg: dict
    marks: dict          # vertex -> {edge: value}
    maps: dict
    crit: dict           # vertex -> critical points to seed the portrait with
    extra: dict = field(default_factory=dict)
    names: list | None = None

    @classmethod
    def of(cls, s: TreeMappingScheme) -> "_Raw":
        crit: dict = {}
        for p in s.portrait.points:
            if p.local_degree > 1 and p.sphere in s.maps:
                crit.setdefault(p.sphere, []).append(p.value)
        names = s.meta.get("vertex_names")
        return cls(list(s.tree.in_t0), [[e.a, e.b, e.length, e.in_t0] for e in s.tree.edges],
                   dict(s.map.vertex_image), dict(s.map.edge_degree),
                   {v: dict(sph.markings) for v, sph in s.spheres.items()},
                   dict(s.maps), crit, {}, list(names) if names else None)

    def tree(self) -> TreePair:
        return TreePair(self.in_t0, [tuple(e) for e in self.edges])

    def build(self, template: TreeMappingScheme) -> TreeMappingScheme:
        tree = self.tree()
        V0 = set(tree.V0)
        maps = {v: f for v, f in self.maps.items() if v in V0 or v in self.marks}
        F = TreeMap(self.images, self.edeg, {v: maps[v].degree for v in V0})
        spheres = {v: MarkedSphere(v, m) for v, m in self.marks.items()}
        crit = {v: self.crit.get(v, []) for v in V0}
        portrait = derive_portrait(tree, F, spheres, maps, crit, self.extra)
        meta = copy.deepcopy(template.meta)
        if self.names is not None:
            meta["vertex_names"] = self.names
        return TreeMappingScheme(tree, F, spheres, maps, portrait, template.name, meta)

    def adj(self, v: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if v in (e[0], e[1])]

    def insert(self, e: int, t: Fraction) -> tuple[int, int]:
        """Split ``T0`` edge ``e`` at offset ``t``; returns (new vertex, new edge).

        The new vertex has no image, sphere or map yet.
        """
        a, b, L, _ = self.edges[e]
        n, m = len(self.in_t0), len(self.edges)
        self.in_t0.append(True)
        self.edges[e] = [a, n, t, True]
        self.edges.append([n, b, L - t, True])
        self.edeg[m] = self.edeg[e]
        if b in self.marks and e in self.marks[b]:
            self.marks[b][m] = self.marks[b].pop(e)
        if self.names is not None:
            self.names.append(f"x{n}")
        return n, m

    def compact(self, drop_vertices: set, drop_edges: set) -> None:
        """Delete vertices/edges and renumber the rest preserving order."""
        vmap, k = {}, 0
        for v in range(len(self.in_t0)):
            if v not in drop_vertices:
                vmap[v] = k
                k += 1
        emap, k = {}, 0
        for e in range(len(self.edges)):
            if e not in drop_edges:
                emap[e] = k
                k += 1
        self.in_t0 = [f for v, f in enumerate(self.in_t0) if v in vmap]
        self.edges = [[vmap[a], vmap[b], L, t] for i, (a, b, L, t) in enumerate(self.edges) if i in emap]
        for v, w in self.images.items():
            if v in vmap and w not in vmap:
                raise TreeError(f"vertex {v} maps to removed vertex {w}")
        self.images = {vmap[v]: vmap[w] for v, w in self.images.items() if v in vmap}
        self.edeg = {emap[e]: d for e, d in self.edeg.items() if e in emap}
        marks = {}
        for v, m in self.marks.items():
            if v not in vmap:
                continue
            kept = {}
            for e, z in m.items():
                if e in emap:
                    kept[emap[e]] = z
                else:
                    self.extra.setdefault(v, []).append(z)
            marks[vmap[v]] = kept
        self.marks = marks
        self.maps = {vmap[v]: f for v, f in self.maps.items() if v in vmap}
        self.crit = {vmap[v]: c for v, c in self.crit.items() if v in vmap}
        self.extra = {vmap[v]: c for v, c in self.extra.items() if v in vmap}
        if self.names is not None:
            self.names = [n for v, n in enumerate(self.names) if v in vmap]


# ---------------------------------------------------------------------------
# Moebius helpers

def _mobius_to(w0, winf) -> RationalMap:
    """Moebius map sending 0 to ``w0`` and infinity to ``winf``."""
    if winf is INF:
        return RationalMap.from_coeffs([w0, ONE], [ONE], 1)
    if w0 is INF:
        return RationalMap.from_coeffs([ONE, winf], [ZERO, ONE], 1)
    return RationalMap.from_coeffs([w0, winf], [ONE, ONE], 1)


def _mobius_from(u0, uinf) -> RationalMap:
    """Moebius map sending ``u0`` to 0 and ``uinf`` to infinity."""
    if uinf is INF:
        return RationalMap.from_coeffs([-u0, ONE], [ONE], 1)
    if u0 is INF:
        return RationalMap.from_coeffs([ONE], [-uinf, ONE], 1)
    return RationalMap.from_coeffs([-u0, ONE], [-uinf, ONE], 1)


def two_point_cover(u0, uinf, w0, winf, d: int) -> RationalMap:
    """Degree-``d`` map fully ramified at ``u0 -> w0`` and ``uinf -> winf``."""
    return _mobius_to(w0, winf).compose(RationalMap.monomial(d).compose(_mobius_from(u0, uinf)))


# ---------------------------------------------------------------------------
# subdivision

def subdivide_at(s: TreeMappingScheme, e: int, t) -> TreeMappingScheme:
    """Insert a vertex at offset ``t`` of the ``T0`` edge ``e``.

    ``F`` of the new point must be a vertex.  The new vertex gets the next
    vertex id, the piece towards ``b`` the next edge id.
    """
    t = Fraction(t)
    tp, F = s.tree, s.map
    ed = tp.edges[e]
    if not ed.in_t0:
        raise TreeError(f"edge {e} is not in T0")
    if not 0 < t < ed.length:
        raise TreeError("subdivision point must be interior")
    from .treemap import eval_point
    y = eval_point(tp, F, tp.point(e, t))
    if not isinstance(y, Vertex):
        raise TreeError("the image of a new vertex must be a vertex")
    w = y.id
    raw = _Raw.of(s)
    a, b = ed.a, ed.b
    n, m = raw.insert(e, t)
    d = F.edge_degree[e]
    raw.images[n] = w
    raw.marks[n] = {e: INF, m: ZERO}
    w_a = s.marking(w, tp.vertex_arc(w, F(a))[0][0])
    w_b = s.marking(w, tp.vertex_arc(w, F(b))[0][0])
    raw.maps[n] = two_point_cover(ZERO, INF, w_b, w_a, d)
    raw.crit[n] = [ZERO, INF] if d > 1 else []
    return raw.build(s)


def adversarial_point(s: TreeMappingScheme, e: int) -> Fraction | None:
    """Offset on ``e`` whose image is the first vertex inside the image arc."""
    tp = s.tree
    arc = image_arc(tp, s.map, e)
    if len(arc) < 2:
        return None
    first, _ = arc[0]
    total = sum((tp.length(x) for x, _ in arc), Fraction(0))
    return tp.length(first) * tp.length(e) / total


def subdivide_edge(s: TreeMappingScheme, e: int, depth: int = 8) -> TreeMappingScheme:
    """Subdivide ``e`` at a point that is eventually mapped onto a vertex.

    If the image of ``e`` is a single edge, that edge is subdivided first so
    that the image acquires an interior vertex.
    """
    t = adversarial_point(s, e)
    if t is not None:
        return subdivide_at(s, e, t)
    if depth == 0:
        raise TreeError(f"edge {e}: no vertex preimage found")
    (target, _), = image_arc(s.tree, s.map, e)
    if target == e or not s.tree.edges[target].in_t0:
        raise TreeError(f"edge {e} maps onto a single edge {target} that cannot be subdivided")
    s2 = subdivide_edge(s, target, depth - 1)
    t = adversarial_point(s2, e)
    if t is None:
        raise TreeError(f"edge {e}: no vertex preimage found")
    return subdivide_at(s2, e, t)


# ---------------------------------------------------------------------------
# reduction

def _merge(raw: _Raw, v: int) -> None:
    e1, e2 = sorted(raw.adj(v))
    far = raw.edges[e2][0] if raw.edges[e2][1] == v else raw.edges[e2][1]
    slot = 0 if raw.edges[e1][0] == v else 1
    raw.edges[e1][slot] = far
    raw.edges[e1][2] = raw.edges[e1][2] + raw.edges[e2][2]
    raw.marks[far][e1] = raw.marks[far].pop(e2)
    raw.marks.pop(v, None)
    raw.maps.pop(v, None)
    raw.crit.pop(v, None)
    raw.images.pop(v, None)
    raw.extra.pop(v, None)
    raw.compact({v}, {e2})


def _removable(s: TreeMappingScheme, data) -> list[int]:
    tp = s.tree
    cand = {v for v in tp.V0
            if v not in data.P and v not in data.B0 and tp.valence(v) == 2
            and all(tp.edges[e].in_t0 for e in tp.adj[v])}
    # a vertex can only go if everything mapping onto it goes too
    changed = True
    while changed:
        changed = False
        for v in sorted(cand):
            if any(s.map(u) == v and u not in cand for u in tp.V0):
                cand.discard(v)
                changed = True
    return sorted(cand)


def _trim(s: TreeMappingScheme, data) -> TreeMappingScheme | None:
    tp = s.tree
    if not data.Q:
        return None
    hull = tp.convex_hull([Vertex(v) for v in data.Q])
    drop_e = set(range(len(tp.edges))) - set(hull.edges)
    drop_v = set(range(tp.n_vertices)) - set(hull.vertices)
    if not drop_e and not drop_v:
        return None
    raw = _Raw.of(s)
    raw.compact(drop_v, drop_e)
    return raw.build(s)


def _fillable(s: TreeMappingScheme, data) -> list:
    from .validate import gap_extensions
    crit = {g.key for g in data.critical}
    out = []
    for key, (g, r) in sorted(gap_extensions(s).items()):
        if (isinstance(r, CaseA) and r.covering and g.key in {x.key for x in data.primitive}
                and key not in crit and g.center not in data.B1 and len(g.boundary) == 2):
            out.append((g, r))
    return out


def _fill(s: TreeMappingScheme, g, r: CaseA) -> TreeMappingScheme:
    tp = s.tree
    p = g.center
    raw = _Raw.of(s)
    raw.in_t0[p] = True
    (e1, d1), (e2, d2) = r.degrees
    for e, d in r.degrees:
        raw.edges[e][3] = True
        raw.edeg[e] = d
    c = r.center_image
    targets = []
    for e in (e1, e2):
        a = tp.edges[e].other(p)
        targets.append(s.marking(c, tp.vertex_arc(c, s.map(a))[0][0]))
    u1, u2 = s.marking(p, e1), s.marking(p, e2)
    raw.maps[p] = two_point_cover(u1, u2, targets[0], targets[1], r.center_degree)
    raw.images[p] = c
    raw.crit[p] = [u1, u2] if r.center_degree > 1 else []
    return raw.build(s)


def reduce_to_irreducible(s: TreeMappingScheme, max_rounds: int = 100) -> TreeMappingScheme:
    """Remove inessential vertices and edges until the scheme is irreducible.

    Returns ``s`` itself when nothing needs to change.
    """
    from .validate import irreducibility_data
    cur = s
    for _ in range(max_rounds):
        data = irreducibility_data(cur)
        nxt = _trim(cur, data)
        if nxt is None:
            fill = _fillable(cur, data)
            if fill:
                nxt = _fill(cur, *fill[0])
        if nxt is None:
            rem = _removable(cur, data)
            if rem:
                raw = _Raw.of(cur)
                _merge(raw, rem[-1])
                nxt = raw.build(cur)
        if nxt is None:
            return cur
        cur = nxt
    raise RuntimeError("reduction did not terminate")


__all__ = ["subdivide_at", "subdivide_edge", "adversarial_point", "reduce_to_irreducible",
           "two_point_cover", "Exact"]
