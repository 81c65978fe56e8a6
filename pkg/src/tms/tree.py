"""Finite metric trees with exact rational edge lengths and a marked subforest.

A :class:`TreePair` stores the big tree ``T1`` together with the flags saying
which vertices and edges belong to the subforest ``T0``.  The complement
``T1 - T0`` is an open forest whose components are the *gaps*.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class TreeError(ValueError):
    """The vertex/edge data do not describe a valid tree pair."""


@dataclass(frozen=True)
class Vertex:
    id: int


@dataclass(frozen=True)
class Interior:
    edge: int
    offset: Fraction


TreePoint = Vertex | Interior


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    length: Fraction
    in_t0: bool

    def other(self, v: int) -> int:
        return self.b if v == self.a else self.a


@dataclass(frozen=True)
class Gap:
    """One component of ``T1 - T0``.

    ``inner`` holds the vertices not in ``T0`` (the component is open, so
    its boundary vertices are excluded).  ``center`` is set only when the
    closure is star-shaped.
    """

    edges: frozenset
    inner: frozenset
    boundary: frozenset
    center: int | None

    @property
    def key(self) -> int:
        return min(self.edges)


@dataclass(frozen=True)
class Hull:
    vertices: frozenset
    edges: frozenset
    segments: tuple = ()  # (edge, lo, hi) pieces of partially covered edges


class TreePair:
    """``T0`` inside ``T1``.

    Parameters
    ----------
    vertices:
        ``in_t0`` flag per vertex; the id of a vertex is its index.
    edges:
        ``(a, b, length, in_t0)`` per edge; the id of an edge is its index and
        ``(a, b)`` fixes its orientation.
    """

    def __init__(self, vertices: Sequence[bool], edges: Iterable[tuple]):
        self.in_t0 = tuple(bool(f) for f in vertices)
        self.edges = tuple(Edge(int(a), int(b), Fraction(L), bool(t)) for a, b, L, t in edges)
        self._check()
        self.adj: tuple = tuple(
            tuple(i for i, e in enumerate(self.edges) if v in (e.a, e.b))
            for v in range(len(self.in_t0)))
        self._parent_cache: dict = {}

    # basic data -------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.in_t0)

    @property
    def V0(self) -> list[int]:
        return [v for v, f in enumerate(self.in_t0) if f]

    @property
    def E0(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.in_t0]

    def valence(self, v: int) -> int:
        return len(self.adj[v])

    def valence_t0(self, v: int) -> int:
        return sum(1 for e in self.adj[v] if self.edges[e].in_t0)

    def length(self, e: int) -> Fraction:
        return self.edges[e].length

    def neighbours(self, v: int) -> list[tuple[int, int]]:
        """``(edge, other endpoint)`` for each edge at ``v``."""
        return [(e, self.edges[e].other(v)) for e in self.adj[v]]

    def leaves(self) -> list[int]:
        return [v for v in range(self.n_vertices) if self.valence(v) == 1]

    def branch_points(self, t0_only: bool = False) -> list[int]:
        if t0_only:
            return [v for v in self.V0 if self.valence_t0(v) >= 3]
        return [v for v in range(self.n_vertices) if self.valence(v) >= 3]

    def structure(self) -> tuple:
        return (self.in_t0, self.edges)

    def __eq__(self, other):
        return isinstance(other, TreePair) and self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def __repr__(self):
        return f"TreePair(vertices={len(self.in_t0)}, edges={len(self.edges)})"

    # validation -------------------------------------------------------
    def _check(self):
        n = len(self.in_t0)
        if n == 0:
            raise TreeError("a tree needs at least one vertex")
        if len(self.edges) != n - 1:
            raise TreeError(f"{n} vertices need {n - 1} edges, got {len(self.edges)}")
        seen_pairs = set()
        for i, e in enumerate(self.edges):
            if not (0 <= e.a < n and 0 <= e.b < n):
                raise TreeError(f"edge {i} references a missing vertex")
            if e.a == e.b:
                raise TreeError(f"edge {i} is a loop")
            if e.length <= 0:
                raise TreeError(f"edge {i} has non-positive length")
            if e.in_t0 and not (self.in_t0[e.a] and self.in_t0[e.b]):
                raise TreeError(f"edge {i} is in T0 but an endpoint is not")
            pair = frozenset((e.a, e.b))
            if pair in seen_pairs:
                raise TreeError(f"edge {i} duplicates another edge")
            seen_pairs.add(pair)
        # connectivity (with |E| = |V|-1 this also rules out cycles)
        adj = {v: [] for v in range(n)}
        for e in self.edges:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        seen, todo = {0}, [0]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != n:
            raise TreeError("the edge graph is not connected")

    # points -----------------------------------------------------------
    def point(self, edge: int, offset) -> TreePoint:
        """Point at distance ``offset`` from the ``a`` end of ``edge``."""
        offset = Fraction(offset)
        e = self.edges[edge]
        if offset == 0:
            return Vertex(e.a)
        if offset == e.length:
            return Vertex(e.b)
        if not 0 < offset < e.length:
            raise TreeError(f"offset {offset} outside edge {edge}")
        return Interior(edge, offset)

    def in_T0(self, x: TreePoint) -> bool:
        if isinstance(x, Vertex):
            return self.in_t0[x.id]
        return self.edges[x.edge].in_t0

    # arcs -------------------------------------------------------------
    def _parents(self, root: int) -> dict:
        if root not in self._parent_cache:
            par = {root: None}
            q = deque([root])
            while q:
                v = q.popleft()
                for e, w in self.neighbours(v):
                    if w not in par:
                        par[w] = (e, v)
                        q.append(w)
            self._parent_cache[root] = par
        return self._parent_cache[root]

    def vertex_arc(self, u: int, v: int) -> list[tuple[int, int]]:
        """Edges from vertex ``u`` to vertex ``v`` as ``(edge, sign)``.

        ``sign`` is +1 when the edge is traversed from its ``a`` end to its
        ``b`` end.
        """
        par = self._parents(u)
        out = []
        w = v
        while w != u:
            e, p = par[w]
            out.append((e, 1 if self.edges[e].a == p else -1))
            w = p
        out.reverse()
        return out

    def vertex_distance(self, u: int, v: int) -> Fraction:
        return sum((self.edges[e].length for e, _ in self.vertex_arc(u, v)), Fraction(0))

    def path(self, x: TreePoint, y: TreePoint) -> tuple[list, Fraction]:
        """Unique arc from ``x`` to ``y``.

        Returns ``(pieces, distance)`` where each piece is
        ``(edge, sign, start_offset, end_offset)`` measured from the edge's
        ``a`` end.

        >>> t = TreePair([True, True], [(0, 1, 1, True)])
        >>> t.path(Vertex(0), t.point(0, Fraction(1, 3)))
        ([(0, 1, Fraction(0, 1), Fraction(1, 3))], Fraction(1, 3))
        """
        if x == y:
            return [], Fraction(0)
        if isinstance(x, Interior) and isinstance(y, Interior) and x.edge == y.edge:
            s, t = x.offset, y.offset
            return [(x.edge, 1 if t > s else -1, s, t)], abs(t - s)
        best = None
        for ux, dx, head in self._exits(x):
            for uy, dy, tail in self._exits(y, reverse=True):
                d = dx + self.vertex_distance(ux, uy) + dy
                if best is None or d < best[0]:
                    best = (d, head, ux, uy, tail)
        d, head, ux, uy, tail = best
        pieces = list(head)
        for e, sgn in self.vertex_arc(ux, uy):
            L = self.edges[e].length
            pieces.append((e, sgn, Fraction(0) if sgn > 0 else L, L if sgn > 0 else Fraction(0)))
        pieces.extend(tail)
        return pieces, d

    def _exits(self, x: TreePoint, reverse: bool = False):
        if isinstance(x, Vertex):
            yield x.id, Fraction(0), []
            return
        e = self.edges[x.edge]
        s, L = x.offset, e.length
        # towards a
        piece = (x.edge, -1, s, Fraction(0)) if not reverse else (x.edge, 1, Fraction(0), s)
        yield e.a, s, [piece]
        piece = (x.edge, 1, s, L) if not reverse else (x.edge, -1, L, s)
        yield e.b, L - s, [piece]

    def distance(self, x: TreePoint, y: TreePoint) -> Fraction:
        return self.path(x, y)[1]

    def point_along(self, u: int, v: int, dist) -> TreePoint:
        """Point at distance ``dist`` from vertex ``u`` on the arc to ``v``."""
        dist = Fraction(dist)
        acc = Fraction(0)
        for e, sgn in self.vertex_arc(u, v):
            L = self.edges[e].length
            if dist <= acc + L:
                r = dist - acc
                return self.point(e, r if sgn > 0 else L - r)
            acc += L
        if dist == acc:
            return Vertex(v)
        raise TreeError("distance exceeds arc length")

    # gaps ---------------------------------------------------------------
    def omega_components(self) -> list[Gap]:
        """Components of ``T1 - T0`` ordered by their least edge id."""
        rest = [i for i, e in enumerate(self.edges) if not e.in_t0]
        parent = {i: i for i in rest}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for v in range(self.n_vertices):
            if self.in_t0[v]:
                continue
            es = [e for e in self.adj[v] if not self.edges[e].in_t0]
            for e in es[1:]:
                parent[find(e)] = find(es[0])
        groups: dict = {}
        for i in rest:
            groups.setdefault(find(i), []).append(i)
        out = []
        for es in groups.values():
            verts = {self.edges[e].a for e in es} | {self.edges[e].b for e in es}
            inner = frozenset(v for v in verts if not self.in_t0[v])
            boundary = frozenset(v for v in verts if self.in_t0[v])
            gap = Gap(frozenset(es), inner, boundary, None)
            c = self._star_center(gap)
            out.append(Gap(gap.edges, inner, boundary, c))
        out.sort(key=lambda g: g.key)
        return out

    def _star_center(self, gap: Gap) -> int | None:
        deg: dict = {}
        for e in gap.edges:
            for v in (self.edges[e].a, self.edges[e].b):
                deg[v] = deg.get(v, 0) + 1
        non_end = [v for v, k in deg.items() if k >= 2]
        return non_end[0] if len(non_end) == 1 else None

    def is_star_shaped(self, gap: Gap) -> bool:
        return gap.center is not None

    def gap_of_edge(self, e: int) -> Gap | None:
        for g in self.omega_components():
            if e in g.edges:
                return g
        return None

    # hulls -------------------------------------------------------------
    def convex_hull(self, points: Iterable[TreePoint]) -> Hull:
        pts = list(points)
        if not pts:
            raise TreeError("convex hull of an empty set")
        verts, edges, partial = set(), set(), {}
        for p in pts:
            if isinstance(p, Vertex):
                verts.add(p.id)
        base = pts[0]
        for p in pts[1:]:
            pieces, _ = self.path(base, p)
            for e, _sgn, s, t in pieces:
                lo, hi = min(s, t), max(s, t)
                if lo == 0 and hi == self.edges[e].length:
                    edges.add(e)
                    verts.update((self.edges[e].a, self.edges[e].b))
                else:
                    plo, phi = partial.get(e, (lo, hi))
                    partial[e] = (min(plo, lo), max(phi, hi))
                    if lo == 0:
                        verts.add(self.edges[e].a)
                    if hi == self.edges[e].length:
                        verts.add(self.edges[e].b)
        segs = tuple(sorted((e, lo, hi) for e, (lo, hi) in partial.items() if e not in edges))
        return Hull(frozenset(verts), frozenset(edges), segs)

    def tree_defect_sum(self) -> int:
        return sum(max(self.valence(v) - 2, 0) for v in range(self.n_vertices))

    def boundary_count(self) -> int:
        return len(self.leaves())


def omega_components(tree: TreePair) -> list[Gap]:
    return tree.omega_components()


def is_star_shaped(tree: TreePair, gap: Gap) -> bool:
    return tree.is_star_shaped(gap)


def convex_hull(tree: TreePair, points: Iterable[TreePoint]) -> Hull:
    return tree.convex_hull(points)


def tree_defect_sum(tree: TreePair) -> int:
    return tree.tree_defect_sum()


def path(tree: TreePair, x: TreePoint, y: TreePoint):
    return tree.path(x, y)
