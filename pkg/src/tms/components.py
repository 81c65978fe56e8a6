"""Periodic Julia components: census, local models, post-critical counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .rational import RationalMap
from .report import jsonable
from .scheme import NonFinitePortrait, TreeMappingScheme, compose_cycle, exposed_sets
from .tree import Vertex
from .treemap import CaseA, CaseB, ItineraryOrbit, VertexCycle, periodic_points
from .validate import critical_gaps, first_return_orbits, gap_extensions
from .values import same_point

VERTEX, JORDAN = "VertexModel", "JordanModel"


@dataclass
class JuliaComponentModel:
    point: object
    period: int
    kind: str
    N: int
    model_degree: int
    _scheme: TreeMappingScheme | None = field(default=None, repr=False)
    multiplier: int | None = None

    @property
    def complex_type(self) -> bool:
        return self.N >= 3

    @cached_property
    def model(self) -> RationalMap:
        return local_model(self._scheme, self)

    def to_json(self) -> dict:
        return {"point": jsonable(self.point), "period": self.period, "kind": self.kind,
                "model_degree": self.model_degree, "N": self.N, "complex_type": self.complex_type}


@dataclass
class Census:
    max_period: int
    models: list
    fatou_count: int
    notes: list = field(default_factory=list)

    @property
    def complex_count(self) -> int:
        return sum(1 for m in self.models if m.complex_type)

    @property
    def excess(self) -> int:
        """``sum(N - 2)`` over the models."""
        return sum(m.N - 2 for m in self.models)

    @property
    def bound_slack(self) -> int:
        return (self.fatou_count - 2) - self.excess

    def to_json(self) -> dict:
        return {"max_period": self.max_period, "models": [m.to_json() for m in self.models],
                "complex_type_count": self.complex_count, "sum_N_minus_2": self.excess,
                "fatou_count": self.fatou_count, "bound_slack": self.bound_slack,
                "notes": list(self.notes)}

    def table(self) -> str:
        rows = [f"{'period':>6} {'kind':<12} {'degree':>7} {'N':>3} complex  point"]
        for m in self.models:
            rows.append(f"{m.period:>6} {m.kind:<12} {m.model_degree:>7} {m.N:>3} "
                        f"{'yes' if m.complex_type else 'no':<8} {_show_point(m.point)}")
        rows.append(f"N_f = {self.fatou_count}, sum(N-2) = {self.excess}, slack = {self.bound_slack}")
        return "\n".join(rows)


def _show_point(p) -> str:
    if isinstance(p, Vertex):
        return f"vertex {p.id}"
    return f"edge {p.edge} + {p.offset}"


# ---------------------------------------------------------------------------

def post_critical_count(s: TreeMappingScheme, v: int, p: int) -> int:
    """``N`` for the first return to the sphere at the periodic vertex ``v``."""
    post, _ = first_return_orbits(s, v, p)
    return len(post)


def post_critical_count_map(R: RationalMap, critical, limit: int = 1000) -> int:
    """``N`` for a single map by iterating the given critical points."""
    post: list = []
    for c in critical:
        z = R(c)
        for _ in range(limit):
            if any(same_point(z, w)[0] for w in post):
                break
            post.append(z)
            z = R(z)
        else:
            raise NonFinitePortrait(f"orbit of {c!r} did not close within {limit} steps")
    return len(post)


def local_model(s: TreeMappingScheme, orbit) -> RationalMap:
    """First-return model at a periodic point."""
    if isinstance(orbit, JuliaComponentModel):
        if orbit.kind == VERTEX:
            return compose_cycle(s, orbit.point.id, orbit.period)
        mult = orbit.multiplier
    elif isinstance(orbit, VertexCycle):
        return compose_cycle(s, orbit.vertices[0], orbit.period)
    elif isinstance(orbit, ItineraryOrbit):
        mult = orbit.multiplier
    else:
        raise TypeError(f"not a periodic orbit: {orbit!r}")
    e = abs(mult)
    return RationalMap.monomial(e if mult > 0 else -e)


def _vertex_model(s, cyc: VertexCycle) -> JuliaComponentModel:
    v, p = cyc.vertices[0], cyc.period
    deg = 1
    for w in cyc.vertices:
        deg *= s.maps[w].degree
    return JuliaComponentModel(Vertex(v), p, VERTEX, post_critical_count(s, v, p), deg, s)


def census(s: TreeMappingScheme, max_period: int) -> Census:
    models = []
    for p in range(1, max_period + 1):
        ps = periodic_points(s.tree, s.map, p)
        for c in ps.vertex_cycles:
            models.append(_vertex_model(s, c))
        for o in ps.orbits:
            models.append(JuliaComponentModel(o.point, p, JORDAN, 2, abs(o.multiplier), s, o.multiplier))
    nf, notes = fatou_count(s, with_notes=True)
    return Census(max_period, models, nf, notes)


def vertex_census(s: TreeMappingScheme) -> Census:
    """Vertex models only (every complex-type component is one of these)."""
    from .validate import vertex_cycles_all
    models = [_vertex_model(s, VertexCycle(len(c), c)) for c in vertex_cycles_all(s)]
    models.sort(key=lambda m: (m.period, m.point.id))
    nf, notes = fatou_count(s, with_notes=True)
    return Census(len(s.tree.V0), models, nf, notes)


def fatou_count(s: TreeMappingScheme, with_notes: bool = False):
    """Post-critical Fatou components counted from the scheme.

    Disk components: distinct points of the forward orbits of the exposed
    critical points, plus for each critical gap the exposed point where its
    collapse lands, with that point's forward orbit.  Multiply connected
    components: gaps that are images (through extensions) of critical gaps.
    """
    P = s.portrait
    ex = exposed_sets(s)
    disks: set = set()
    for i in ex.critical:
        disks.update(P.orbit(i)[1:])
    ext = gap_extensions(s)
    gaps: set = set()
    notes = []
    chains = {}
    for g in critical_gaps(s):
        k, chain = g.key, []
        while isinstance(ext[k][1], CaseA):
            k = ext[k][1].target.key
            if k in chain:
                break
            chain.append(k)
            gaps.add(k)
        chains[g.key] = chain
        gap, r = ext[k]
        if isinstance(r, CaseB):
            e = min(gap.edges)
            a = next(v for v in (s.tree.edges[e].a, s.tree.edges[e].b) if v in gap.boundary)
            i = P.find(a, s.marking(a, e))
            if i is not None and i in P.successors:
                disks.update(P.orbit(P.successors[i]))
    keys = sorted(chains)
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            if set(chains[keys[x]]) & set(chains[keys[y]]):
                notes.append(f"critical gaps {keys[x]} and {keys[y]} have merging forward orbits")
    n = len(disks) + len(gaps)
    return (n, notes) if with_notes else n


def verify_bound(c: Census) -> tuple[bool, int]:
    return c.bound_slack >= 0, c.bound_slack


def scheme_degree(s: TreeMappingScheme) -> int:
    """Degree of the rational maps the scheme models, by Riemann-Hurwitz:
    exposed critical points plus the critical points hidden in each gap."""
    P = s.portrait
    total = sum(P.points[i].local_degree - 1 for i in exposed_sets(s).critical)
    degs = s.gap_degrees()
    for key, (g, r) in gap_extensions(s).items():
        nb = len(g.boundary)
        if isinstance(r, CaseB):
            total += sum(degs[e] for e in g.edges if e in degs) + nb - 2
        elif isinstance(r, CaseA):
            total += r.center_degree * (2 - len(r.target.boundary)) - (2 - nb)
    return 1 + total // 2


__all__ = ["JuliaComponentModel", "Census", "census", "vertex_census", "local_model",
           "post_critical_count", "post_critical_count_map", "fatou_count", "verify_bound",
           "scheme_degree", "VERTEX", "JORDAN"]
