"""Grafting complex-type components onto periodic points, and the towers built that way."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .build import Builder
from .catalog_build import cantor_z3
from .rational import RationalMap
from .reduce import _Raw
from .scheme import NonFinitePortrait, NotPeriodic, TreeMappingScheme
from .tree import Interior, TreePoint, Vertex
from .treemap import eval_point, minimal_period
from .values import INF, ZERO, root_of_unity, same_point


class SurgeryError(ValueError):
    pass


class TargetIsVertex(SurgeryError):
    pass


class BranchPointOnOrbit(SurgeryError):
    pass


class ParameterNotPostcriticallyClosing(SurgeryError):
    pass


class ScheduleUnsatisfiable(ValueError):
    pass


@dataclass(frozen=True)
class SurgerySpec:
    """Where and how to graft.

    ``end`` is the leaf bounding the segment ``S = [target, end]`` that the
    last attached edge is mapped onto; ``attach_length`` defaults to its
    length.  ``base`` is the vertex the unbranched markings point towards.
    """

    target: TreePoint
    a: object
    end: int
    attach_length: Fraction | None = None
    base: int = 0


def _orbit(tp, F, x: TreePoint) -> list[TreePoint]:
    q = minimal_period(tp, F, x, limit=100_000)
    if q is None:
        raise NotPeriodic(f"{x} is not periodic")
    out = [x]
    for _ in range(q - 1):
        out.append(eval_point(tp, F, out[-1]))
    return out


def _side_toward(tp, base: int, x: Interior) -> int:
    """The endpoint of ``x``'s edge lying towards ``base``."""
    ed = tp.edges[x.edge]
    return ed.a if tp.vertex_distance(base, ed.a) < tp.vertex_distance(base, ed.b) else ed.b


def _dist_from(tp, v: int, x: Interior) -> Fraction:
    ed = tp.edges[x.edge]
    return x.offset if v == ed.a else ed.length - x.offset


def graft(s: TreeMappingScheme, spec: SurgerySpec) -> TreeMappingScheme:
    """Attach a cycle of edges along the orbit of ``spec.target``.

    The orbit points become vertices ``X_j`` with edges ``S_j`` attached;
    ``S_j`` maps isometrically onto ``S_{j+1}`` and the last one onto
    ``[X_0, end]``.  Every vertex that used to map into that segment is
    redirected onto ``S_0``.  The first-return map at ``X_0`` becomes
    ``H + a``; its critical orbit must close up through the new markings.
    """
    tp, F = s.tree, s.map
    x0 = spec.target
    if isinstance(x0, Vertex):
        raise TargetIsVertex(f"target {x0} is a vertex")
    orbit = _orbit(tp, F, x0)
    for x in orbit:
        if isinstance(x, Vertex):
            raise BranchPointOnOrbit(f"orbit of {x0} meets vertex {x.id}")
        if not tp.edges[x.edge].in_t0:
            raise SurgeryError(f"orbit point {x} lies in a gap")
    q = len(orbit)
    base, end = spec.base, spec.end
    if tp.valence(end) != 1:
        raise SurgeryError(f"end vertex {end} is not a leaf")
    e0 = tp.edges[x0.edge]
    if end not in (e0.a, e0.b) or _side_toward(tp, base, x0) == end:
        raise SurgeryError("the segment [target, end] must be an edge piece pointing away from the base")
    seg_len = _dist_from(tp, end, x0)
    L = Fraction(spec.attach_length) if spec.attach_length is not None else seg_len

    # unbranched step maps: z^d, or z^-d when the base-ward side is sent
    # away from the base
    steps = []
    for j, x in enumerate(orbit):
        near = _side_toward(tp, base, x)
        y = tp.edges[orbit[(j + 1) % q].edge]
        y_near = _side_toward(tp, base, orbit[(j + 1) % q])
        y_far = y.b if y_near == y.a else y.a
        keep = tp.vertex_distance(F(near), y_near) < tp.vertex_distance(F(near), y_far)
        steps.append((F.edge_degree[x.edge], keep))
    h = [RationalMap.monomial(d if keep else -d) for d, keep in steps]
    h[-1] = h[-1].shifted(spec.a)

    marks = [spec.a]
    for j in range(q - 1):
        marks.append(h[j](marks[-1]))
    closing = h[-1](marks[-1])
    if not same_point(closing, ZERO)[0]:
        raise ParameterNotPostcriticallyClosing(
            f"the last attached edge lands at {closing!r}, not at the marking 0 of [X_0, end]")

    raw = _Raw.of(s)
    end_mark = s.marking(end, tp.adj[end][0])
    # split edges at the orbit points
    where = {j: (x.edge, x.offset) for j, x in enumerate(orbit)}
    xv = {}
    for j in range(q):
        e, t = where[j]
        n, m = raw.insert(e, t)
        xv[j] = n
        for k in range(j + 1, q):
            e2, t2 = where[k]
            if e2 == e and t2 > t:
                where[k] = (m, t2 - t)
        a_end, b_end = raw.edges[e][0], raw.edges[m][1]
        toward, away = (e, m) if _closer(raw, base, a_end, b_end) else (m, e)
        raw.marks[n] = {toward: INF, away: ZERO}
        raw.maps[n] = h[j]
        raw.crit[n] = [ZERO, INF] if steps[j][0] > 1 else []
    # attach the S_j
    yv = {}
    for j in range(q):
        n = len(raw.in_t0)
        raw.in_t0.append(True)
        m = len(raw.edges)
        raw.edges.append([xv[j], n, L, True])
        raw.edeg[m] = 1
        raw.marks[xv[j]][m] = marks[j]
        raw.marks[n] = {m: end_mark}
        raw.maps[n] = RationalMap.identity()
        raw.crit[n] = []
        yv[j] = n
        if raw.names is not None:
            raw.names.append(f"s{n}")
    # the tree map
    for v, w in list(raw.images.items()):
        if w == end:
            raw.images[v] = yv[0]
    for j in range(q):
        raw.images[xv[j]] = xv[(j + 1) % q]
        raw.images[yv[j]] = yv[j + 1] if j < q - 1 else end
    try:
        return raw.build(s)
    except NonFinitePortrait as exc:
        raise ParameterNotPostcriticallyClosing(str(exc)) from exc


def _closer(raw: _Raw, base: int, a: int, b: int) -> bool:
    tp = raw.tree()
    return tp.vertex_distance(base, a) < tp.vertex_distance(base, b)


# ---------------------------------------------------------------------------
# the Cantor tower

def _coordinates(s: TreeMappingScheme, a: int, b: int) -> dict:
    """Distance from ``a`` of every vertex on the arc ``[a, b]``."""
    tp = s.tree
    out, acc, v = {a: Fraction(0)}, Fraction(0), a
    for e, _ in tp.vertex_arc(a, b):
        acc += tp.length(e)
        v = tp.edges[e].other(v)
        out[v] = acc
    return out


def _interval_pieces(s: TreeMappingScheme, a: int, b: int) -> list:
    """The tree map on a path ``[a, b]`` as affine pieces ``(lo, hi, slope, shift)``."""
    c = _coordinates(s, a, b)
    out = []
    for e in s.tree.E0:
        ed = s.tree.edges[e]
        u, v = ed.a, ed.b
        if u not in c or v not in c or s.map(u) not in c or s.map(v) not in c:
            raise SurgeryError("the tree map does not preserve the path")
        slope = (c[s.map(v)] - c[s.map(u)]) / (c[v] - c[u])
        out.append((min(c[u], c[v]), max(c[u], c[v]), slope, c[s.map(u)] - slope * c[u]))
    return sorted(out)


def smallest_periodic_point(pieces, period: int, lower: Fraction) -> Fraction | None:
    """Least point ``> lower`` of exact period ``period`` for an expanding interval map.

    Depth-first over cylinders in increasing order, so the first fixed point
    of the ``period``-fold composition found is the smallest one.
    """
    def image(x):
        for lo, hi, al, be in pieces:
            if lo <= x <= hi:
                return al * x + be
        return None

    def exact(x):
        for d in range(1, period):
            if period % d:
                continue
            y = x
            for _ in range(d):
                y = image(y)
                if y is None:
                    break
            if y == x:
                return False
        return True

    stack = [(Fraction(-10**9), Fraction(10**9), Fraction(1), Fraction(0), 0)]
    while stack:
        lo, hi, al, be, depth = stack.pop()
        if depth == period:
            if al != 1:
                x = be / (1 - al)
                if lo <= x <= hi and x > lower and exact(x):
                    return x
            continue
        kids = []
        g_lo, g_hi = sorted((al * lo + be, al * hi + be))
        for p_lo, p_hi, pa, pb in pieces:
            j_lo, j_hi = max(g_lo, p_lo), min(g_hi, p_hi)
            if j_lo >= j_hi:
                continue
            c_lo, c_hi = sorted(((j_lo - be) / al, (j_hi - be) / al))
            if c_hi <= lower:
                continue
            kids.append((c_lo, c_hi, pa * al, pa * be + pb, depth + 1))
        kids.sort(reverse=True)
        stack.extend(kids)
    return None


def tower_points(count: int, s: TreeMappingScheme | None = None) -> list[Fraction]:
    """``A_0 < A_1 < ...``: ``A_m`` is the least point of period ``2^m`` above ``A_{m-1}``.

    Coordinates are distances from ``A`` along ``[A, A']`` in the base
    Cantor scheme (``A_0 = 3/4``).
    """
    s = s or cantor_z3()
    a, b = _vertex(s, "A"), _vertex(s, "A'")
    pieces = _interval_pieces(s, a, b)
    out, lower = [], Fraction(0)
    for m in range(count):
        x = smallest_periodic_point(pieces, 2 ** m, lower)
        if x is None:
            raise SurgeryError(f"no point of period {2 ** m} above {lower}")
        out.append(x)
        lower = x
    return out


def _vertex(s: TreeMappingScheme, name: str) -> int:
    return s.meta["vertex_names"].index(name)


def tower_parameter(m: int):
    """Root of ``a^(D+1) = -1`` with least positive argument, ``D = 3^(2^m)``."""
    D = 3 ** (2 ** m)
    return root_of_unity(1, 2 * (D + 1))


def tower_period(k: int, m: int) -> int:
    return 3 ** m if m <= k else 2 ** (m - k) * 3 ** k


@dataclass
class TowerLevel:
    k: int
    scheme: TreeMappingScheme
    complex_cycle_periods: list
    targets: list = field(default_factory=list)
    parameters: list = field(default_factory=list)

    def point(self, m: int) -> TreePoint:
        """The point ``A_m`` in this level's tree (``m < len(targets)``)."""
        s = self.scheme
        return s.tree.point_along(_vertex(s, "A"), _vertex(s, "A'"), self.targets[m])


def cantor_tower(k: int, extra: int = 3) -> TowerLevel:
    """Level ``k``: the base Cantor scheme grafted at ``A_0, ..., A_{k-1}``.

    ``extra`` further points ``A_k, ..., A_{k+extra-1}`` are located for
    period checks.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    s = cantor_z3()
    end = _vertex(s, "A'")
    pts = tower_points(k + extra, s)
    params = []
    for m in range(k):
        a = tower_parameter(m)
        params.append(a)
        target = s.tree.point_along(_vertex(s, "A"), end, pts[m])
        s = graft(s, SurgerySpec(target, a, end))
        names = s.meta["vertex_names"]
        for v in range(len(names)):
            if names[v].startswith(("x", "s")) and names[v][1:].isdigit():
                names[v] = f"{'X' if names[v][0] == 'x' else 'S'}{m}.{v}"
    s.name = f"cantor-tower-{k}"
    return TowerLevel(k, s, [3 ** m for m in range(k)], pts, params)


# ---------------------------------------------------------------------------
# the degree-d Godillon type schemes

def godillon_scheme(d: int = 3) -> TreeMappingScheme:
    """Degree ``d`` scheme with a buried ``1/(z-1)^2`` component at ``A``.

    For ``d > 3`` the map at ``X3`` becomes ``z^k/(z^k - (z-1)^k)`` with
    ``k = d - 2``.  The returned scheme keeps the unbranched vertex ``A'``
    and so is not irreducible; reducing it gives the catalogued form.
    """
    if d < 3:
        raise ValueError("degree must be at least 3")
    k = d - 2
    b = Builder(f"godillon-{d}")
    for v in ("A", "B"):
        b.vertex(v)
    b.vertex("G", t0=False)
    for v in ("B'", "A'", "X3", "X1", "X2", "X4"):
        b.vertex(v)
    b.edge("A", "B", 1, degree=1)
    b.edge("B", "G", Fraction(1, 2)); b.edge("G", "B'", Fraction(1, 2))
    b.edge("B'", "A'", 1, degree=1)
    b.edge("A'", "X3", 1, degree=1)
    b.edge("A", "X1", 1, degree=2)
    b.edge("A", "X2", 2, degree=2)
    b.edge("A", "X4", 1, degree=1)
    for v, w in [("A", "A"), ("B", "X1"), ("B'", "X1"), ("A'", "A"), ("X1", "X2"), ("X2", "X3"),
                 ("X3", "X4"), ("X4", "X1")]:
        b.image(v, w)
    b.mark("A", "B", 0); b.mark("A", "X1", 1); b.mark("A", "X2", INF); b.mark("A", "X4", 2)
    b.mark("B", "A", INF); b.mark("B", "G", 0)
    b.mark("G", "B", INF); b.mark("G", "B'", 0)
    b.mark("B'", "G", INF); b.mark("B'", "A'", 0)
    b.mark("A'", "B'", INF); b.mark("A'", "X3", 0)
    b.mark("X3", "A'", INF)
    for v in ("X1", "X2", "X4"):
        b.mark(v, "A", INF)
    b.fmap("A", [1], [1, -2, 1])           # 1/(z-1)^2
    b.fmap("B", [0, 1], [1])
    b.fmap("B'", [1], [0, 1])
    b.fmap("A'", [2, -1], [1, -1])         # 1 + 1/(1-z)
    b.fmap("X1", [0, 0, 1], [1]); b.fmap("X2", [0, 0, 1], [1])
    b.fmap("X4", [0, 1], [1])
    if k == 1:
        b.fmap("X3", [0, 1], [1])
        return b.build()
    den = [(1 if i == k else 0) - comb(k, i) * (-1) ** (k - i) for i in range(k + 1)]
    b.fmap("X3", [0] * k + [1], den, k)
    # 0 and 1 are the only critical points, each of multiplicity k-1
    return b.build(critical={"X3": [0, 1]})


# ---------------------------------------------------------------------------
# diagonal bookkeeping

class Schedule(list):
    """``n(k)`` per level, with the table of distances that certifies it."""

    def __init__(self, values, certificate):
        super().__init__(values)
        self.certificate = certificate


def diagonal_schedule(levels: Sequence, samples: Sequence,
                      tolerance: Callable[[int], float] = lambda k: 1 / k) -> Schedule:
    """Least sampled ``n`` per level with every distance below ``tolerance(k)``.

    ``levels`` holds ``(k, d)`` with ``d`` a callable ``n -> distance`` or a
    list of them (one per rescaling and region considered at that level).
    """
    samples = sorted(samples)
    if not samples:
        raise ScheduleUnsatisfiable("no samples")
    out, cert = [], []
    for k, ds in levels:
        ds = list(ds) if isinstance(ds, (list, tuple)) else [ds]
        tol = tolerance(k)
        for n in samples:
            vals = [float(d(n)) for d in ds]
            if max(vals) < tol:
                out.append(n)
                cert.append({"k": k, "n": n, "tolerance": tol, "distances": vals})
                break
        else:
            raise ScheduleUnsatisfiable(f"level {k}: no sampled n reaches tolerance {tol}")
    return Schedule(out, cert)
