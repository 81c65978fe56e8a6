"""Hand transcriptions of the example schemes.

Each function returns a freshly built scheme; the shipped files under
``tms/data`` are these schemes serialized (see ``regenerate``).
Marking convention unless noted: the direction towards the base vertex
``A`` is ``inf`` and the direction away from it is ``0``.
"""

from __future__ import annotations

from fractions import Fraction as Q
from pathlib import Path

from . import io
from .build import Builder
from .values import INF, Approx, Exact, root_of_unity

ZETA8 = root_of_unity(1, 8)


def _two_branch(name, cuts, deg_left, deg_right, center="C") -> Builder:
    b = Builder(name)
    b.vertex("A"); b.vertex("B"); b.vertex(center, t0=False); b.vertex("B'"); b.vertex("A'")
    x = [Q(0), *cuts, Q(1)]
    b.edge("A", "B", x[1], degree=deg_left)
    b.edge("B", center, x[2] - x[1])
    b.edge(center, "B'", x[3] - x[2])
    b.edge("B'", "A'", 1 - x[3], degree=deg_right)
    b.image("A", "A"); b.image("B", "A'"); b.image("B'", "A'"); b.image("A'", "A")
    b.mark("A", 0, 0)
    b.mark("B", 0, INF); b.mark("B", 1, 0)
    b.mark(center, 1, INF); b.mark(center, 2, 0)
    b.mark("B'", 2, INF); b.mark("B'", 3, 0)
    b.mark("A'", 3, INF)
    return b


def degenerate():
    b = Builder("degenerate")
    b.vertex("A"); b.vertex("C", t0=False); b.vertex("A'")
    b.edge("A", "C", 1); b.edge("C", "A'", 1)
    b.image("A", "A"); b.image("A'", "A")
    b.mark("A", 0, 0); b.mark("C", 0, INF); b.mark("C", 1, 0); b.mark("A'", 1, INF)
    b.fmap("A", [-1, 2, 1], [1])          # (z+1)^2 - 2
    b.fmap("A'", [1, -1], [0, 1])         # -1 + 1/z
    return b.build()


def mcmullen():
    b = _two_branch("mcmullen", (Q(1, 2), Q(7, 12), Q(2, 3)), 2, 3)
    b.fmap("A", [0, 0, 1], [1])
    b.fmap("B", [0, 0, 1], [1])
    b.fmap("B'", [1], [0, 0, 0, 1])
    b.fmap("A'", [1], [0, 0, 0, 1])
    return b.build()


def basilica_cantor():
    b = _two_branch("basilica-cantor", (Q(1, 2), Q(7, 12), Q(2, 3)), 2, 3)
    b.fmap("A", [0, 0, 1], [-1, 0, 1])    # z^2/(z^2-1)
    b.fmap("B", [0, 0, 1], [1])
    b.fmap("B'", [1], [0, 0, 0, 1])
    b.fmap("A'", [1], [0, 0, 0, 1])
    return b.build()


def cubic_two_cycle():
    b = _two_branch("cubic-two-cycle", (Q(1, 2), Q(7, 12), Q(2, 3)), 2, 3)
    c = Approx.of(-3j / 2 ** 0.5)
    b.fmap("A", [0, 0, c, 1], [1], 3)     # z^3 - (3i/sqrt2) z^2
    b.fmap("B", [0, 0, 1], [1])
    b.fmap("B'", [1], [0, 0, 0, 1])
    b.fmap("A'", [1], [0, 0, 0, 1])
    return b.build()


def cantor_z3():
    b = _two_branch("cantor-z3", (Q(1, 3), Q(1, 2), Q(2, 3)), 3, 3, center="G")
    b.fmap("A", [0, 0, 0, 1], [1])
    b.fmap("B", [0, 0, 0, 1], [1])
    b.fmap("B'", [1], [0, 0, 0, 1])
    b.fmap("A'", [1], [0, 0, 0, 1])
    return b.build()


def quadruply():
    b = Builder("quadruply")
    b.meta["derived_from_figure"] = True
    b.vertex("C", t0=False)
    for j in range(4):
        b.vertex(f"A{j}"); b.vertex(f"B{j}")
    center_marks = [INF, 1, -1, 0]
    for j in range(4):
        e = b.edge(f"A{j}", f"B{j}", 1, degree=3)
        g = b.edge(f"B{j}", "C", Q(1, 2))
        b.image(f"A{j}", "A0"); b.image(f"B{j}", "A3")
        b.mark("C", g, center_marks[j])
        if j == 0:
            b.mark("A0", e, 0); b.mark("B0", e, INF); b.mark("B0", g, 0)
            b.fmap("A0", [0, 0, 0, 1], [1]); b.fmap("B0", [0, 0, 0, 1], [1])
        else:
            b.mark(f"A{j}", e, INF); b.mark(f"B{j}", e, 0); b.mark(f"B{j}", g, INF)
            b.fmap(f"A{j}", [1], [0, 0, 0, 1]); b.fmap(f"B{j}", [1], [0, 0, 0, 1])
    return b.build()


def buried_sierpinski():
    b = Builder("buried-sierpinski")
    b.vertex("A"); b.vertex("B"); b.vertex("G", t0=False); b.vertex("B'"); b.vertex("Y"); b.vertex("X")
    b.vertex("D1"); b.vertex("D2")
    for i in range(1, 5):
        b.vertex(f"C{i}")
    b.edge("A", "B", 8, degree=2)
    b.edge("B", "G", 1); b.edge("G", "B'", 1)
    b.edge("B'", "Y", 6, degree=4)
    b.edge("A", "X", 8, degree=2)
    for j in (1, 2):
        b.edge("A", f"D{j}", 8, degree=1)
    for i in range(1, 5):
        b.edge("A", f"C{i}", 4, degree=2)
    for v, w in [("A", "A"), ("B", "Y"), ("B'", "Y"), ("Y", "X"), ("X", "Y"), ("D1", "X"), ("D2", "X"),
                 ("C1", "D1"), ("C2", "D2"), ("C3", "D1"), ("C4", "D2")]:
        b.image(v, w)
    b.mark("A", "B", 0); b.mark("A", "X", INF)
    b.mark("A", "D1", Exact(0, 2)); b.mark("A", "D2", Exact(0, -2))
    for i, k in zip(range(1, 5), (1, 3, 5, 7)):
        b.mark("A", f"C{i}", Approx.of(2 * complex(root_of_unity(k, 8))))
    b.mark("B", "A", INF); b.mark("B", "G", 0)
    b.mark("G", "B", INF); b.mark("G", "B'", 0)
    b.mark("B'", "G", 0); b.mark("B'", "Y", INF)
    for v in ("Y", "X", "D1", "D2", "C1", "C2", "C3", "C4"):
        b.mark(v, _only_edge(b, v), INF)
    b.fmap("A", [0, 0, 16], [16, 0, 0, 0, -1])   # z^2 / (1 - z^4/16)
    for v in ("B", "X", "C1", "C2", "C3", "C4"):
        b.fmap(v, [0, 0, 1], [1])
    for v in ("B'", "Y"):
        b.fmap(v, [0, 0, 0, 0, 1], [1])
    for v in ("D1", "D2"):
        b.fmap(v, [0, 1], [1])
    return b.build()


def _only_edge(b: Builder, v) -> int:
    i = b.id(v)
    es = [k for k, (x, y, _, _) in enumerate(b.edges) if i in (x, y)]
    assert len(es) == 1
    return es[0]


def godillon_reduced():
    """Degree-3 scheme with the valence-2 vertex between ``B'`` and ``X3`` removed."""
    b = Builder("godillon-3")
    for v in ("A", "B"):
        b.vertex(v)
    b.vertex("G", t0=False)
    for v in ("B'", "X3", "X1", "X2", "X4"):
        b.vertex(v)
    b.edge("A", "B", 1, degree=1)
    b.edge("B", "G", Q(1, 2)); b.edge("G", "B'", Q(1, 2))
    b.edge("B'", "X3", 2, degree=1)
    b.edge("A", "X1", 1, degree=2)
    b.edge("A", "X2", 2, degree=2)
    b.edge("A", "X4", 1, degree=1)
    for v, w in [("A", "A"), ("B", "X1"), ("B'", "X1"), ("X1", "X2"), ("X2", "X3"), ("X3", "X4"), ("X4", "X1")]:
        b.image(v, w)
    b.mark("A", "B", 0); b.mark("A", "X1", 1); b.mark("A", "X2", INF); b.mark("A", "X4", 2)
    b.mark("B", "A", INF); b.mark("B", "G", 0)
    b.mark("G", "B", INF); b.mark("G", "B'", 0)
    b.mark("B'", "G", INF); b.mark("B'", "X3", 0)
    for v in ("X1", "X2", "X3", "X4"):
        b.mark(v, _only_edge(b, v), INF)
    b.fmap("A", [1], [1, -2, 1])           # 1/(z-1)^2
    b.fmap("B", [0, 1], [1])
    b.fmap("B'", [1], [0, 1])
    b.fmap("X1", [0, 0, 1], [1]); b.fmap("X2", [0, 0, 1], [1])
    b.fmap("X3", [0, 1], [1]); b.fmap("X4", [0, 1], [1])
    return b.build()


def surgery_k1():
    """Cantor scheme with a complex-type fixed component grafted at 3/4."""
    b = Builder("surgery-k1")
    b.vertex("A"); b.vertex("B"); b.vertex("G", t0=False); b.vertex("B'"); b.vertex("A'")
    b.vertex("A0"); b.vertex("D")
    b.edge("A", "B", Q(1, 3), degree=3)
    b.edge("B", "G", Q(1, 6)); b.edge("G", "B'", Q(1, 6))
    b.edge("B'", "A0", Q(1, 12), degree=3)
    b.edge("A0", "A'", Q(1, 4), degree=3)
    b.edge("A0", "D", Q(1, 4), degree=1)
    for v, w in [("A", "A"), ("B", "D"), ("B'", "D"), ("A'", "A"), ("A0", "A0"), ("D", "A'")]:
        b.image(v, w)
    b.mark("A", "B", 0)
    b.mark("B", "A", INF); b.mark("B", "G", 0)
    b.mark("G", "B", INF); b.mark("G", "B'", 0)
    b.mark("B'", "G", INF); b.mark("B'", "A0", 0)
    b.mark("A0", "B'", INF); b.mark("A0", "A'", 0); b.mark("A0", "D", ZETA8)
    b.mark("A'", "A0", INF); b.mark("D", "A0", INF)
    b.fmap("A", [0, 0, 0, 1], [1]); b.fmap("B", [0, 0, 0, 1], [1])
    b.fmap("B'", [1], [0, 0, 0, 1]); b.fmap("A'", [1], [0, 0, 0, 1])
    b.fmap("A0", [1, 0, 0, ZETA8], [0, 0, 0, 1])   # 1/z^3 + zeta8
    b.fmap("D", [0, 1], [1])
    return b.build()


BUILDERS = {
    "degenerate": degenerate,
    "mcmullen": mcmullen,
    "basilica-cantor": basilica_cantor,
    "cubic-two-cycle": cubic_two_cycle,
    "quadruply": quadruply,
    "buried-sierpinski": buried_sierpinski,
    "cantor-z3": cantor_z3,
    "surgery-k1": surgery_k1,
    "godillon-3": godillon_reduced,
}

DATA_DIR = Path(__file__).parent / "data"


def regenerate(directory: Path = DATA_DIR) -> list[Path]:
    """Write every built scheme to ``<name>.tms``."""
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, fn in BUILDERS.items():
        p = directory / f"{name}.tms"
        io.save(fn(), p)
        out.append(p)
    return out
