"""Marked spheres, orbit portraits and the tree mapping scheme aggregate."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .rational import RationalMap, ToleranceAmbiguity
from .report import Check
from .tree import TreePair
from .treemap import TreeMap, direction_image
from .values import INF, Approx, Exact, as_value, is_exact, same_point


class NotPeriodic(ValueError):
    pass


class NonFinitePortrait(ValueError):
    """A critical orbit did not close up within the search limit."""


@dataclass(frozen=True)
class MarkedSphere:
    vertex: int
    markings: Mapping[int, object]  # adjacent edge id -> sphere point

    def __post_init__(self):
        object.__setattr__(self, "markings", dict(self.markings))

    def __eq__(self, other):
        return (isinstance(other, MarkedSphere) and self.vertex == other.vertex
                and sorted(self.markings.items(), key=repr) == sorted(other.markings.items(), key=repr))

    def __hash__(self):
        return hash((self.vertex, tuple(sorted(self.markings))))

    def edge_at(self, z) -> int | None:
        """Edge whose marking equals ``z`` (tolerance aware), else None."""
        for e, w in self.markings.items():
            if same_point(z, w)[0]:
                return e
        return None


@dataclass(frozen=True)
class PortraitPoint:
    sphere: int
    value: object
    labels: frozenset
    local_degree: int

    @property
    def exposed(self) -> bool:
        return "exposed" in self.labels

    @property
    def critical(self) -> bool:
        return any(l.startswith("critical") for l in self.labels)

    @property
    def marked_edge(self) -> int | None:
        for l in self.labels:
            if l.startswith("marked:"):
                return int(l.split(":")[1])
        return None

    def declared_multiplicity(self) -> int | None:
        for l in self.labels:
            if l.startswith("critical:"):
                return int(l.split(":")[1])
        return None


@dataclass
class OrbitPortrait:
    points: list
    successors: dict  # point index -> point index

    def __eq__(self, other):
        return (isinstance(other, OrbitPortrait) and self.points == other.points
                and self.successors == other.successors)

    def find(self, sphere: int, z) -> int | None:
        for i, p in enumerate(self.points):
            if p.sphere == sphere and same_point(p.value, z)[0]:
                return i
        return None

    def on_sphere(self, sphere: int) -> list[int]:
        return [i for i, p in enumerate(self.points) if p.sphere == sphere]

    def orbit(self, i: int) -> list[int]:
        """Indices visited from ``i`` until a repeat or a point without successor."""
        out, seen = [i], {i}
        while out[-1] in self.successors:
            j = self.successors[out[-1]]
            if j in seen:
                out.append(j)
                break
            out.append(j)
            seen.add(j)
        return out

    def cycles(self) -> list[tuple]:
        """All cycles of the successor map, each starting at its least index."""
        found = set()
        for i in range(len(self.points)):
            orb = self.orbit(i)
            last = orb[-1]
            if last in orb[:-1]:
                cyc = orb[orb.index(last):-1]
                k = cyc.index(min(cyc))
                found.add(tuple(cyc[k:] + cyc[:k]))
        return sorted(found)


@dataclass(eq=False)
class TreeMappingScheme:
    """Tree pair, tree map, marked spheres, rational maps and portrait.

    ``maps`` is keyed by the vertices of ``T0``.  A map attached to a gap
    center is an explicit witness for the branched-covering extension over
    that gap and is verified when present.
    """

    tree: TreePair
    map: TreeMap
    spheres: dict
    maps: dict
    portrait: OrbitPortrait
    name: str = ""
    meta: dict = field(default_factory=dict)

    def structure(self):
        sph = tuple((v, tuple(sorted((e, _key(z)) for e, z in s.markings.items())))
                    for v, s in sorted(self.spheres.items()))
        mps = tuple((v, tuple(map(_key, m.num)), tuple(map(_key, m.den)), m.degree)
                    for v, m in sorted(self.maps.items()))
        pts = tuple((p.sphere, _key(p.value), tuple(sorted(p.labels)), p.local_degree)
                    for p in self.portrait.points)
        return (self.tree.structure(), self.map.structure(), sph, mps, pts,
                tuple(sorted(self.portrait.successors.items())))

    def __eq__(self, other):
        return isinstance(other, TreeMappingScheme) and self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def marking(self, v: int, e: int):
        return self.spheres[v].markings[e]

    def f(self, v: int) -> RationalMap:
        return self.maps[v]

    @property
    def numeric(self) -> bool:
        """True if any stored value is approximate."""
        vals = [z for s in self.spheres.values() for z in s.markings.values()]
        vals += [p.value for p in self.portrait.points]
        return (any(isinstance(z, Approx) for z in vals)
                or any(not m.exact for m in self.maps.values()))

    def gap_degrees(self) -> dict:
        """Degree of each gap edge ``[p, a]`` read off the sphere at ``a``."""
        out = {}
        for g in self.tree.omega_components():
            for e in g.edges:
                ed = self.tree.edges[e]
                ends = [v for v in (ed.a, ed.b) if v in g.boundary and v in self.maps]
                if ends:
                    a = ends[0]
                    try:
                        out[e] = self.maps[a].local_degree(self.marking(a, e))
                    except (KeyError, ToleranceAmbiguity):
                        pass
        return out


def _key(z):
    if z is INF:
        return ("inf",)
    if isinstance(z, Exact):
        return ("e", z.re, z.im)
    return ("a", z.re, z.im, z.tol)


# ---------------------------------------------------------------------------
# portrait construction

def snap_value(z: complex, candidates=(), tol: float = 1e-7):
    """Replace a numerically found point by a known or simple exact one."""
    for c in candidates:
        if same_point(as_value(z), c, tol)[0]:
            return c
    re = Fraction(z.real).limit_denominator(64)
    im = Fraction(z.imag).limit_denominator(64)
    if abs(complex(float(re), float(im)) - z) < 1e-9 * max(1.0, abs(z)):
        return Exact(re, im)
    return Approx.of(z)


def critical_points(f: RationalMap, candidates=()) -> list:
    """Critical points of ``f`` with local degree, snapped to known points."""
    out = []
    for z, _ in f.critical_points_numeric():
        if z is not INF:
            z = snap_value(complex(z), candidates)
        k = f.local_degree(z)
        if k > 1 and not any(same_point(z, w)[0] for w, _ in out):
            out.append((z, k))
    return out


def derive_portrait(tree: TreePair, F: TreeMap, spheres: Mapping, maps: Mapping,
                    critical: Mapping | None = None, extra: Mapping | None = None,
                    limit: int = 500) -> OrbitPortrait:
    """Forward closure of markings and critical points on the spheres of ``T0``.

    ``critical`` optionally lists the critical points per vertex; otherwise
    they are located numerically and snapped onto markings or short exact
    values.  ``extra`` adds further points to follow (per vertex).
    """
    V0 = set(tree.V0)
    pts: list = []
    crit_deg: dict = {}

    def add(v, z):
        for i, (w, zz) in enumerate(pts):
            if w == v and same_point(zz, z)[0]:
                return i
        pts.append((v, z))
        return len(pts) - 1

    todo = []
    for v in sorted(V0):
        for e in sorted(spheres[v].markings):
            todo.append(add(v, spheres[v].markings[e]))
    for v in sorted(V0):
        f = maps[v]
        known = list(spheres[v].markings.values())
        cps = (critical or {}).get(v)
        if cps is None:
            cps = [z for z, _ in critical_points(f, known)]
        for z in cps:
            i = add(v, z)
            crit_deg[i] = f.local_degree(z)
            todo.append(i)
        for z in (extra or {}).get(v, []):
            todo.append(add(v, z))
    succ: dict = {}
    steps = 0
    while todo:
        i = todo.pop(0)
        v, z = pts[i]
        if v not in V0 or i in succ:
            continue
        steps += 1
        if steps > limit:
            raise NonFinitePortrait("portrait did not close")
        w = maps[v](z)
        n = len(pts)
        j = add(F(v), w)
        succ[i] = j
        if j == n:
            todo.append(j)
    points = []
    for i, (v, z) in enumerate(pts):
        labels = set()
        e = spheres[v].edge_at(z) if v in spheres else None
        if e is not None:
            labels.add(f"marked:{e}")
        else:
            labels.add("exposed")
        ld = maps[v].local_degree(z) if v in V0 else 1
        if ld > 1:
            labels.add(f"critical:{ld}")
        points.append(PortraitPoint(v, z, frozenset(labels), ld))
    return OrbitPortrait(points, succ)


# ---------------------------------------------------------------------------
# checks

def eval_rational(R: RationalMap, z):
    return R(z)


def local_degree_at(R: RationalMap, z) -> int:
    return R.local_degree(z)


def compose_cycle(s: TreeMappingScheme, v: int, p: int) -> RationalMap:
    """``f^p`` on the sphere at ``v`` as a single rational map."""
    V0 = set(s.tree.V0)
    cur, out = v, None
    for _ in range(p):
        if cur not in V0:
            raise NotPeriodic(f"orbit of {v} leaves V0 at {cur}")
        f = s.maps[cur]
        out = f if out is None else f.compose(out)
        cur = s.map(cur)
    if cur != v:
        raise NotPeriodic(f"F^{p}({v}) = {cur}")
    return out


def check_markings(s: TreeMappingScheme) -> Check:
    chk = Check("markings", True)
    tp = s.tree
    for v in range(tp.n_vertices):
        sph = s.spheres.get(v)
        if sph is None:
            chk.fail(("sphere", v), f"vertex {v} has no marked sphere")
            continue
        if set(sph.markings) != set(tp.adj[v]):
            chk.fail(("markings", v), f"vertex {v}: markings must cover exactly its edges")
        vals = list(sph.markings.items())
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                eq, num = same_point(vals[i][1], vals[j][1])
                chk.numeric |= num
                if eq:
                    chk.fail(("injective", v), f"vertex {v}: edges {vals[i][0]} and {vals[j][0]} share a marking")
    if not chk.ok:
        return chk
    for a in tp.V0:
        f = s.maps.get(a)
        if f is None:
            chk.fail(("map", a), f"vertex {a} has no rational map")
            continue
        for e in tp.adj[a]:
            if not tp.edges[e].in_t0:
                continue
            fa = s.map(a)
            target = direction_image(tp, s.map, a, e)
            want = s.marking(fa, target)
            got = f(s.marking(a, e))
            eq, num = same_point(got, want)
            chk.numeric |= num
            if not eq:
                chk.fail((a, e), f"f_{a}(z_{a},{e}) = {got!r}, expected marking of edge {target} at {fa}")
    return chk


def check_compatible_degrees(s: TreeMappingScheme) -> Check:
    chk = Check("compatible-degrees", True)
    tp, F = s.tree, s.map
    for a in tp.V0:
        f = s.maps.get(a)
        if f is None:
            chk.fail(("map", a), f"vertex {a} has no rational map")
            continue
        chk.numeric |= not f.exact
        try:
            ok, msg = f.check_degree()
        except ToleranceAmbiguity as exc:
            ok, msg = False, str(exc)
        if not ok:
            chk.fail(("degree", a), f"vertex {a}: {msg}")
        cop, num = f.check_coprime()
        chk.numeric |= num
        if not cop:
            chk.fail(("coprime", a), f"vertex {a}: numerator and denominator share a root")
        if F.vertex_degree.get(a) != f.degree:
            chk.fail(("vertex-degree", a),
                     f"vertex {a}: deg {F.vertex_degree.get(a)} but map degree {f.degree}")
    for e in tp.E0:
        ed = tp.edges[e]
        want = F.edge_degree.get(e)
        for v in (ed.a, ed.b):
            if v not in s.maps:
                continue
            z = s.marking(v, e)
            try:
                k = s.maps[v].local_degree(z)
            except ToleranceAmbiguity as exc:
                chk.fail(("ambiguous", v, e), str(exc))
                continue
            chk.numeric |= not (s.maps[v].exact and is_exact(z))
            if k != want:
                chk.fail((e, v), f"edge {e}: local degree {k} at vertex {v}, edge degree {want}")
    return chk


def portrait_closure_check(s: TreeMappingScheme) -> Check:
    chk = Check("portrait", True)
    P, tp = s.portrait, s.tree
    V0 = set(tp.V0)
    n = len(P.points)
    for i, j in P.successors.items():
        if not (0 <= i < n and 0 <= j < n):
            chk.fail(("index", i), f"successor pair ({i}, {j}) out of range")
            return chk
    for i, p in enumerate(P.points):
        if p.sphere not in V0:
            continue
        f = s.maps.get(p.sphere)
        if f is None:
            continue
        if i not in P.successors:
            chk.fail(("closure", i), f"point {i} on sphere {p.sphere} has no successor")
            continue
        q = P.points[P.successors[i]]
        if q.sphere != s.map(p.sphere):
            chk.fail(("sphere", i), f"successor of point {i} lies on sphere {q.sphere}, not {s.map(p.sphere)}")
        eq, num = same_point(f(p.value), q.value)
        chk.numeric |= num
        if not eq:
            chk.fail(("successor", i), f"f({p.value!r}) does not match successor point {P.successors[i]}")
        try:
            ld = f.local_degree(p.value)
        except ToleranceAmbiguity as exc:
            chk.fail(("ambiguous", i), str(exc))
            continue
        chk.numeric |= not (f.exact and is_exact(p.value))
        if ld != p.local_degree:
            chk.fail(("local-degree", i), f"point {i}: declared local degree {p.local_degree}, actual {ld}")
        m = p.declared_multiplicity()
        if (m is not None) != (ld > 1) or (m is not None and m != ld):
            chk.fail(("critical-label", i), f"point {i}: critical label disagrees with local degree {ld}")
        edge = s.spheres[p.sphere].edge_at(p.value)
        if (edge is None) != p.exposed or (edge is not None and p.marked_edge != edge):
            chk.fail(("marked-label", i), f"point {i}: marked/exposed label is wrong")
    for a in sorted(V0):
        f = s.maps.get(a)
        if f is None:
            continue
        for e, z in s.spheres[a].markings.items():
            if P.find(a, z) is None:
                chk.fail(("missing-marking", a, e), f"marking of edge {e} at {a} not in the portrait")
        total = sum(p.local_degree - 1 for i, p in enumerate(P.points)
                    if p.sphere == a and p.local_degree > 1)
        if total != 2 * f.degree - 2:
            chk.fail(("riemann-hurwitz", a),
                     f"sphere {a}: critical multiplicities sum to {total}, need {2 * f.degree - 2}")
    return chk


@dataclass
class ExposedSets:
    exposed: list   # portrait indices
    critical: list  # EC
    cycles: list    # exposed critical cycles (tuples of indices)


def exposed_sets(s: TreeMappingScheme) -> ExposedSets:
    P = s.portrait
    V0 = set(s.tree.V0)
    exposed = [i for i, p in enumerate(P.points) if p.exposed]
    ec = [i for i in exposed if P.points[i].sphere in V0 and P.points[i].local_degree > 1]
    cycles = [c for c in P.cycles()
              if all(P.points[i].exposed for i in c) and any(P.points[i].local_degree > 1 for i in c)]
    return ExposedSets(exposed, ec, cycles)
