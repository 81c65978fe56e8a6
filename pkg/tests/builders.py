"""Hand-built schemes used by several test modules."""

from fractions import Fraction as Q

from tms.build import Builder
from tms.values import INF


def mcmullen_with_covering_gap(witness=True):
    """McMullen's interval with (1/4, 1/3) removed from T0.

    The removed piece maps onto the main gap (1/2, 2/3) with slope 2, so it
    is a gap whose extension is a degree-2 covering of the main gap (which
    itself collapses to A').  ``witness`` supplies z^2 at the new center,
    or any ``(num, den)`` pair.
    """
    b = Builder("mcmullen-covering-gap")
    for name, t0 in [("A", True), ("P", True), ("H", False), ("P'", True), ("B", True),
                     ("G", False), ("B'", True), ("A'", True)]:
        b.vertex(name, t0=t0)
    b.edge("A", "P", Q(1, 4), degree=2)
    b.edge("P", "H", Q(1, 24))
    b.edge("H", "P'", Q(1, 24))
    b.edge("P'", "B", Q(1, 6), degree=2)
    b.edge("B", "G", Q(1, 12))
    b.edge("G", "B'", Q(1, 12))
    b.edge("B'", "A'", Q(1, 3), degree=3)
    for v, w in [("A", "A"), ("P", "B"), ("P'", "B'"), ("B", "A'"), ("B'", "A'"), ("A'", "A")]:
        b.image(v, w)
    b.mark("A", "P", 0)
    b.mark("P", "A", INF); b.mark("P", "H", 0)
    b.mark("H", "P", INF); b.mark("H", "P'", 0)
    b.mark("P'", "H", INF); b.mark("P'", "B", 0)
    b.mark("B", "P'", INF); b.mark("B", "G", 0)
    b.mark("G", "B", INF); b.mark("G", "B'", 0)
    b.mark("B'", "G", INF); b.mark("B'", "A'", 0)
    b.mark("A'", "B'", INF)
    for v in ("A", "P", "P'", "B"):
        b.fmap(v, [0, 0, 1], [1])
    for v in ("B'", "A'"):
        b.fmap(v, [1], [0, 0, 0, 1])
    if witness is True:
        b.fmap("H", [0, 0, 1], [1])
    elif witness:
        b.fmap("H", *witness)
    return b.build()


def star_scheme_with_invariant_edge():
    """Two T0 vertices joined by an edge mapped to itself by the identity."""
    b = Builder("invariant-edge")
    b.vertex("A"); b.vertex("B")
    b.edge("A", "B", 1, degree=1)
    b.image("A", "A"); b.image("B", "B")
    b.mark("A", "B", 0); b.mark("B", "A", INF)
    b.fmap("A", [0, 1], [1]); b.fmap("B", [0, 1], [1])
    return b.build()


MCMULLEN_MAPS = {
    "A": ([0, 0, 1], [1]),
    "B": ([0, 0, 1], [1]),
    "B'": ([1], [0, 0, 0, 1]),
    "A'": ([1], [0, 0, 0, 1]),
}


def mcmullen_variant(maps=None, leaf=False, gap_path=False, critical=None):
    """McMullen's interval scheme with optional mutations.

    ``maps`` overrides rational maps by vertex name.  ``leaf`` hangs an
    extra T0 leaf L off A (mapped isometrically onto [A, B]; A becomes the
    cubic -z^2(z-3)/2 whose third critical point 2 is fixed).  ``gap_path``
    replaces the gap center by two non-T0 vertices in a row.
    """
    fm = dict(MCMULLEN_MAPS)
    fm.update(maps or {})
    b = Builder("mcmullen-variant")
    b.vertex("A"); b.vertex("B")
    inner = ["G1", "G2"] if gap_path else ["C"]
    for g in inner:
        b.vertex(g, t0=False)
    b.vertex("B'"); b.vertex("A'")
    b.edge("A", "B", Q(1, 2), degree=2)
    chain = ["B", *inner, "B'"]
    for u, w in zip(chain, chain[1:]):
        b.edge(u, w, Q(1, 6) / (len(chain) - 1))
    b.edge("B'", "A'", Q(1, 3), degree=3)
    for v, w in [("A", "A"), ("B", "A'"), ("B'", "A'"), ("A'", "A")]:
        b.image(v, w)
    b.mark("A", "B", 0)
    for u, w in zip(chain, chain[1:]):
        b.mark(u, w, 0)
    b.mark("B", "A", INF)
    for u, w in zip(chain[1:], chain):
        b.mark(u, w, INF)
    b.mark("B'", "A'", 0)
    b.mark("A'", "B'", INF)
    if leaf:
        b.vertex("L")
        b.edge("A", "L", Q(1, 2), degree=1)
        b.image("L", "B")
        b.mark("A", "L", 3)
        b.mark("L", "A", INF)
        b.fmap("L", [0, 1], [1])
        fm["A"] = ([0, 0, Q(3, 2), Q(-1, 2)], [1])
    for v, (num, den) in fm.items():
        b.fmap(v, num, den)
    return b.build(critical)


def swapped_pair():
    """A and C exchanged across a fixed middle vertex by degree-one maps."""
    b = Builder("swap")
    b.vertex("A"); b.vertex("B"); b.vertex("C")
    b.edge("A", "B", 1, degree=1)
    b.edge("B", "C", 1, degree=1)
    b.image("A", "C"); b.image("B", "B"); b.image("C", "A")
    b.mark("A", "B", 0); b.mark("C", "B", 0)
    b.mark("B", "A", 0); b.mark("B", "C", INF)
    b.fmap("A", [0, 1], [1]); b.fmap("C", [0, 1], [1])
    b.fmap("B", [1], [0, 1])
    return b.build()
