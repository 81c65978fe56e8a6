"""Named-vertex builder for tree mapping schemes."""

from __future__ import annotations

from fractions import Fraction

from .rational import RationalMap
from .scheme import MarkedSphere, TreeMappingScheme, derive_portrait
from .tree import TreePair
from .treemap import TreeMap
from .values import INF, Approx, Exact


def val(x):
    """Loose sphere-point input: int, Fraction, Exact, complex or "inf"."""
    if x is INF or x == "inf":
        return INF
    if isinstance(x, (Exact, Approx)):
        return x
    if isinstance(x, complex):
        return Approx.of(x)
    if isinstance(x, float):
        return Approx.of(complex(x))
    return Exact(Fraction(x))


def coeff(x):
    if isinstance(x, (Exact, Approx)):
        return x
    if isinstance(x, (complex, float)):
        return Approx.of(complex(x))
    return Exact(Fraction(x))


class Builder:
    """Collects vertices, edges, markings and maps by name.

    >>> b = Builder("toy")
    >>> A = b.vertex("A"); B = b.vertex("B")
    >>> e = b.edge("A", "B", 1, degree=1)
    >>> b.image("A", "A"); b.image("B", "B")
    >>> b.mark("A", e, 0); b.mark("B", e, "inf")
    >>> b.fmap("A", [0, 1], [1]); b.fmap("B", [0, 1], [1])
    >>> b.build().tree.n_vertices
    2
    """

    def __init__(self, name: str = ""):
        self.name = name
        self.names: list[str] = []
        self.t0: list[bool] = []
        self.edges: list[tuple] = []
        self.degrees: dict = {}
        self.images: dict = {}
        self.marks: dict = {}
        self.maps: dict = {}
        self.meta: dict = {}

    def id(self, v) -> int:
        return v if isinstance(v, int) else self.names.index(v)

    def vertex(self, name: str, t0: bool = True) -> int:
        self.names.append(name)
        self.t0.append(t0)
        self.marks[len(self.names) - 1] = {}
        return len(self.names) - 1

    def edge(self, a, b, length, degree: int | None = None) -> int:
        """Edge in ``T0`` iff a degree is given."""
        a, b = self.id(a), self.id(b)
        self.edges.append((a, b, Fraction(length), degree is not None))
        e = len(self.edges) - 1
        if degree is not None:
            self.degrees[e] = degree
        return e

    def edge_between(self, a, b) -> int:
        a, b = self.id(a), self.id(b)
        for i, (x, y, _, _) in enumerate(self.edges):
            if {x, y} == {a, b}:
                return i
        raise KeyError((a, b))

    def image(self, a, b) -> None:
        self.images[self.id(a)] = self.id(b)

    def mark(self, v, e, z) -> None:
        if not isinstance(e, int):
            e = self.edge_between(v, e)
        self.marks[self.id(v)][e] = val(z)

    def fmap(self, v, num, den, degree: int | None = None) -> None:
        self.maps[self.id(v)] = RationalMap.from_coeffs([coeff(c) for c in num],
                                                        [coeff(c) for c in den], degree)

    def set_map(self, v, f: RationalMap) -> None:
        self.maps[self.id(v)] = f

    def build(self, critical: dict | None = None) -> TreeMappingScheme:
        tree = TreePair(self.t0, self.edges)
        vdeg = {v: f.degree for v, f in self.maps.items() if self.t0[v]}
        F = TreeMap(self.images, self.degrees, vdeg)
        spheres = {v: MarkedSphere(v, m) for v, m in self.marks.items()}
        crit = None
        if critical is not None:
            crit = {self.id(k): [val(z) for z in zs] for k, zs in critical.items()}
        portrait = derive_portrait(tree, F, spheres, self.maps, crit)
        meta = dict(self.meta)
        meta.setdefault("vertex_names", list(self.names))
        return TreeMappingScheme(tree, F, spheres, dict(self.maps), portrait, self.name, meta)
