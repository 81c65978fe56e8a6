"""The six hyperbolic post-critically finite conditions and irreducibility."""

from __future__ import annotations

from dataclasses import dataclass, field

from .hurwitz import HurwitzData, NotRealizable, SearchExceeded, hurwitz_realizable
from .report import Check
from .scheme import (TreeMappingScheme, check_compatible_degrees, check_markings,
                     exposed_sets, portrait_closure_check)
from .tree import Gap, Vertex
from .treemap import (CaseA, CaseB, NotExtendable, check_degree_function,
                      escape_check, extend_on_component, is_geometric)
from .values import same_point

CONDITIONS = ("i", "ii", "iii", "iv", "v", "vi")


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.entries)

    def __bool__(self):
        return self.ok

    def __getitem__(self, cond: str) -> Check:
        for c in self.entries:
            if c.name == cond:
                return c
        raise KeyError(cond)

    def get(self, cond: str):
        try:
            return self[cond]
        except KeyError:
            return None

    def failed(self) -> list[str]:
        return [c.name for c in self.entries if not c.ok]

    def to_json(self) -> list:
        return [c.to_json() for c in self.entries]

    def text(self) -> str:
        lines = []
        for c in self.entries:
            line = f"{c.name:<14} {c.status}"
            if c.notes:
                line += "  " + "; ".join(c.notes[:3])
                if len(c.notes) > 3:
                    line += f" (+{len(c.notes) - 3} more)"
            lines.append(line)
        return "\n".join(lines)


def _guard(name, fn, *args) -> Check:
    try:
        chk = fn(*args)
    except Exception as exc:  # a broken scheme must still produce a report line
        chk = Check(name, False)
        chk.fail(type(exc).__name__, f"{type(exc).__name__}: {exc}")
    chk.name = name
    return chk


# ---------------------------------------------------------------------------
# individual conditions

def condition_i(s: TreeMappingScheme) -> Check:
    chk = Check("i", True)
    for msg in s.map.check_fields(s.tree):
        chk.fail("tree_map", msg)
    if not chk.ok:
        return chk
    chk.merge(check_markings(s))
    if chk.ok:
        chk.merge(check_degree_function(s.tree, s.map))
        chk.merge(check_compatible_degrees(s))
    return chk


def condition_ii(s: TreeMappingScheme) -> Check:
    return is_geometric(s.tree, s.map)


def gap_extensions(s: TreeMappingScheme) -> dict:
    """``{gap key: (gap, CaseA | CaseB | NotExtendable)}``."""
    degs = s.gap_degrees()
    out = {}
    for g in s.tree.omega_components():
        if g.center is None:
            out[g.key] = (g, NotExtendable("gap has no center vertex (not star-shaped)"))
        else:
            out[g.key] = (g, extend_on_component(s.tree, s.map, g, degs))
    return out


def hurwitz_data_for(s: TreeMappingScheme, g: Gap, ext: CaseA) -> HurwitzData:
    """Branch data of the extension: the fibres over the target's markings,
    topped up with simple branch points to reach ``2n - 2``."""
    n = ext.center_degree
    fibres: dict = {}
    for e, d in ext.degrees:
        a = s.tree.edges[e].other(g.center)
        t = s.tree.vertex_arc(ext.center_image, s.map(a))[0][0]
        fibres.setdefault(t, []).append(d)
    parts = [tuple(v) for _, v in sorted(fibres.items())]
    used = sum(n - len(p) for p in parts)
    extra = (2 * n - 2) - used
    if extra < 0 or n < 2:
        return HurwitzData.of(n, parts)
    return HurwitzData.of(n, parts + [(2,) + (1,) * (n - 2)] * extra)


def _verify_witness(s, g: Gap, ext: CaseA, chk: Check) -> bool:
    f = s.maps[g.center]
    p, c = g.center, ext.center_image
    ok = f.degree == ext.center_degree
    for e, d in ext.degrees:
        a = s.tree.edges[e].other(p)
        t = s.tree.vertex_arc(c, s.map(a))[0][0]
        z = s.marking(p, e)
        eq, num = same_point(f(z), s.marking(c, t))
        chk.numeric |= num or not f.exact
        ok = ok and eq and f.local_degree(z) == d
    return ok


def condition_iii(s: TreeMappingScheme) -> Check:
    chk = Check("iii", True)
    ext = gap_extensions(s)
    for key, (g, r) in sorted(ext.items()):
        if isinstance(r, NotExtendable):
            chk.fail(("gap", key), f"gap {key}: {r.reason}")
        elif isinstance(r, CaseA):
            if g.center in s.maps:
                if not _verify_witness(s, g, r, chk):
                    chk.fail(("witness", key), f"gap {key}: supplied extension map is not compatible")
                continue
            try:
                h = hurwitz_realizable(hurwitz_data_for(s, g, r))
            except SearchExceeded as exc:
                chk.fail(("hurwitz", key), f"gap {key}: {exc}")
                continue
            if isinstance(h, NotRealizable):
                chk.fail(("hurwitz", key), f"gap {key}: branch data not realizable ({h.reason})")
            else:
                chk.numeric = True
                chk.notes.append(f"gap {key}: necessary conditions only (no extension map supplied)")
    # every chain of gaps must end in a collapse
    for key, (g, r) in sorted(ext.items()):
        seen, k = [], key
        while isinstance(ext[k][1], CaseA):
            seen.append(k)
            k = ext[k][1].target.key
            if k in seen:
                cyc = tuple(seen[seen.index(k):])
                if ("cycle", cyc) not in chk.witnesses and ("cycle", cyc[::-1]) not in chk.witnesses:
                    chk.fail(("cycle", cyc), f"gaps {list(cyc)} never collapse")
                break
    return chk


def _reaches_exposed_cycle(s: TreeMappingScheme, orbit: list, cycles: set) -> tuple[bool, str]:
    P = s.portrait
    last = orbit[-1]
    if last not in P.successors and last not in orbit[:-1]:
        return False, f"orbit stops at point {last} without a successor"
    for i in orbit:
        if not P.points[i].exposed:
            return False, f"orbit meets marked point {i}"
    if not any(i in cycles for i in orbit):
        return False, "orbit does not reach an exposed critical cycle"
    return True, ""


def condition_iv(s: TreeMappingScheme) -> Check:
    chk = portrait_closure_check(s)
    chk.name = "iv"
    if not chk.ok:
        return chk
    ex = exposed_sets(s)
    cyc_pts = {i for c in ex.cycles for i in c}
    for i in ex.critical:
        ok, why = _reaches_exposed_cycle(s, s.portrait.orbit(i), cyc_pts)
        if not ok:
            p = s.portrait.points[i]
            chk.fail(("critical", p.sphere, p.value), f"critical point {i} on sphere {p.sphere}: {why}")
    return chk


def condition_v(s: TreeMappingScheme) -> Check:
    chk = Check("v", True)
    pc = portrait_closure_check(s)
    chk.numeric = pc.numeric
    if not pc.ok:
        chk.fail("portrait", "orbit portrait is invalid")
        return chk
    P, tp = s.portrait, s.tree
    ex = exposed_sets(s)
    cyc_pts = {i for c in ex.cycles for i in c}
    for g in tp.omega_components():
        for e in sorted(g.edges):
            ed = tp.edges[e]
            for a in (ed.a, ed.b):
                if a not in g.boundary or a not in s.maps:
                    continue
                i = P.find(a, s.marking(a, e))
                if i is None:
                    chk.fail(("marking", a, e), f"marking of gap edge {e} at {a} missing from portrait")
                    continue
                orbit = P.orbit(i)
                k = 0
                while k < len(orbit):
                    m = P.points[orbit[k]].marked_edge
                    if m is None or tp.edges[m].in_t0:
                        break
                    k += 1
                rest = orbit[k:]
                if not rest or (len(rest) == 1 and rest[0] in orbit[:k]):
                    chk.fail(("marking", a, e), f"gap marking at {a} stays on gap markings forever")
                    continue
                ok, why = _reaches_exposed_cycle(s, rest, cyc_pts)
                if not ok:
                    chk.fail(("marking", a, e), f"gap edge {e} at vertex {a}: {why}")
    return chk


def condition_vi(s: TreeMappingScheme) -> Check:
    return escape_check(s.tree, s.map)


RUNNERS = {"i": condition_i, "ii": condition_ii, "iii": condition_iii,
           "iv": condition_iv, "v": condition_v, "vi": condition_vi}


def check_hpcf(s: TreeMappingScheme, strict: bool = True) -> ValidationReport:
    """Run the six conditions.  Lenient mode stops at the first failure."""
    rep = ValidationReport()
    for name in CONDITIONS:
        chk = _guard(name, RUNNERS[name], s)
        rep.entries.append(chk)
        if not strict and not chk.ok:
            break
    return rep


# ---------------------------------------------------------------------------
# consequences for first-return maps

def first_return_orbits(s: TreeMappingScheme, v: int, p: int) -> tuple[list, list]:
    """Post-critical points of ``f^p`` on the sphere at ``v`` and the local
    degree of ``f^p`` at each portrait point there.

    Returns ``(postcritical indices, [(index, local degree)])``.
    """
    P = s.portrait
    cycle = [v]
    for _ in range(p - 1):
        cycle.append(s.map(cycle[-1]))

    def step(i, k):
        for _ in range(k):
            i = P.successors[i]
        return i

    post = set()
    for j, a in enumerate(cycle):
        for i in P.on_sphere(a):
            if P.points[i].local_degree > 1:
                post.add(step(i, p - j))
    # close up under the return map
    todo = list(post)
    while todo:
        i = step(todo.pop(), p)
        if i not in post:
            post.add(i)
            todo.append(i)
    degs = []
    for i in P.on_sphere(v):
        d, k = 1, i
        for _ in range(p):
            d *= P.points[k].local_degree
            k = P.successors[k]
        degs.append((i, d))
    return sorted(post), degs


def vertex_cycles_all(s: TreeMappingScheme) -> list[tuple]:
    V0 = set(s.tree.V0)
    out = set()
    for v in V0:
        seen, cur = [], v
        while cur in V0 and cur not in seen:
            seen.append(cur)
            cur = s.map(cur)
        if cur == v:
            k = seen.index(min(seen))
            out.add(tuple(seen[k:] + seen[:k]))
    return sorted(out)


def check_first_return_consequences(s: TreeMappingScheme) -> Check:
    chk = Check("first-return", True)
    cycles = vertex_cycles_all(s)
    if not cycles:
        chk.fail("no-cycle", "no periodic vertex in V0")
        return chk
    P = s.portrait
    for cyc in cycles:
        v, p = cyc[0], len(cyc)
        post, degs = first_return_orbits(s, v, p)
        deg = dict(degs)

        def step(i):
            for _ in range(p):
                i = P.successors[i]
            return i

        for i in post:
            seen, k = [], i
            while k not in seen:
                seen.append(k)
                k = step(k)
            loop = seen[seen.index(k):]
            if not any(deg.get(j, 1) > 1 for j in loop):
                chk.fail(("cycle", v), f"vertex {v}: post-critical orbit ends in a non-superattracting cycle")
                break
    return chk


# ---------------------------------------------------------------------------
# irreducibility

def _forward_closure(s: TreeMappingScheme, seed) -> set:
    V0 = set(s.tree.V0)
    out, todo = set(seed), list(seed)
    while todo:
        v = todo.pop()
        if v in V0:
            w = s.map(v)
            if w not in out:
                out.add(w)
                todo.append(w)
    return out


def critical_gaps(s: TreeMappingScheme) -> list:
    out = []
    for key, (g, r) in sorted(gap_extensions(s).items()):
        if isinstance(r, CaseB) or (isinstance(r, CaseA) and not r.covering):
            out.append(g)
    return out


@dataclass
class IrreducibilityData:
    Q: set
    P: set
    B0: set
    B1: set
    critical: list
    primitive: list


def irreducibility_data(s: TreeMappingScheme) -> IrreducibilityData:
    tp = s.tree
    ex = exposed_sets(s)
    crit = critical_gaps(s)
    seed = {s.portrait.points[i].sphere for i in ex.critical}
    for g in crit:
        seed |= set(g.boundary)
    Q = _forward_closure(s, seed)
    boundary = set()
    for g in tp.omega_components():
        boundary |= set(g.boundary)
    P = _forward_closure(s, boundary | Q)
    ext = gap_extensions(s)
    images = {r.target.key for _, r in ext.values() if isinstance(r, CaseA)}
    primitive = [g for g in tp.omega_components() if g.key not in images]
    return IrreducibilityData(Q, P, set(tp.branch_points(t0_only=True)), set(tp.branch_points()),
                              crit, primitive)


def check_irreducible(s: TreeMappingScheme) -> list[Check]:
    tp = s.tree
    d = irreducibility_data(s)
    c1, c2, c3 = Check("irreducible.1", True), Check("irreducible.2", True), Check("irreducible.3", True)
    if not d.Q:
        c1.fail("Q", "Q is empty")
    else:
        hull = tp.convex_hull([Vertex(v) for v in d.Q])
        missing = sorted(set(range(len(tp.edges))) - set(hull.edges))
        if missing:
            c1.fail(("outside-hull", tuple(missing)), f"edges {missing} lie outside the hull of Q")
    extra = sorted(set(tp.V0) - (d.P | d.B0))
    if extra:
        c2.fail(("removable", tuple(extra)), f"vertices {extra} are neither in P nor branch points of T0")
    crit_keys = {g.key for g in d.critical}
    for g in d.primitive:
        if g.key in crit_keys:
            continue
        if g.center is not None and g.center in d.B1:
            continue
        c3.fail(("gap", g.key), f"primitive gap {g.key} is not critical and has no branch point")
    return [c1, c2, c3]


def is_irreducible(s: TreeMappingScheme) -> bool:
    return all(c.ok for c in check_irreducible(s))


def full_report(s: TreeMappingScheme, strict: bool = True) -> ValidationReport:
    rep = check_hpcf(s, strict)
    if rep.ok:
        rep.entries.extend(check_irreducible(s))
    return rep


__all__ = ["ValidationReport", "check_hpcf", "check_irreducible", "check_first_return_consequences",
           "full_report", "is_irreducible", "irreducibility_data", "gap_extensions",
           "hurwitz_data_for"]
