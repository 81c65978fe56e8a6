"""The shipped example schemes, their realizing families and the facts to check.

Each entry pairs a scheme file under ``tms/data`` with the closed-form family
that realizes it, the census facts the scheme should produce, and numeric
convergence checks comparing the family against the scheme's vertex maps.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from . import io
from .catalog_build import DATA_DIR
from .components import census, scheme_degree
from .numerics import (FAMILIES, ZETA8, Annulus, Disk, LimitReport, MoebiusMap, ParamFamily,
                       algebraic_limit_check, rescaling_check)
from .scheme import TreeMappingScheme, exposed_sets
from .validate import full_report


class UnknownEntry(KeyError):
    pass


NO_RESCALING_NOTE = "no rescaling supplied; identity only"


@dataclass(frozen=True)
class Expected:
    complex_cycle_count: int
    fixed_models: tuple                  # (vertex name, model degree, N) for period-1 vertices
    exposed_critical_cycles: tuple       # periods of the exposed critical cycles, sorted
    fatou_count: int | None = None
    degree: int | None = None

    def to_json(self) -> dict:
        return {"complex_cycle_count": self.complex_cycle_count,
                "fixed_models": [list(m) for m in self.fixed_models],
                "exposed_critical_cycles": list(self.exposed_critical_cycles),
                "fatou_count": self.fatou_count, "degree": self.degree}


@dataclass(frozen=True)
class NumericCheck:
    """A limit (``period == 1`` and identity rescaling) or rescaling check."""

    id: str
    family: str
    limit: Callable
    limit_formula: str
    region: object
    ns: tuple
    bound: float
    holes: tuple = ()
    M: Callable | None = None          # n -> MoebiusMap
    M_formula: str = "identity"
    period: int = 1

    def run(self, ns=None, bound: float | None = None, extended: bool = False) -> LimitReport:
        fam = FAMILIES[self.family]
        ns = tuple(ns) if ns is not None else self.ns
        bound = self.bound if bound is None else bound
        name = f"{self.family}/{self.id}"
        if self.M is None and self.period == 1:
            rep = algebraic_limit_check(fam, self.limit, self.holes, [self.region], ns, bound,
                                       name=name, extended=extended)
        else:
            M = self.M or (lambda n: MoebiusMap.identity())
            rep = rescaling_check(fam, M, self.period, self.limit, self.region, ns,
                                  self.holes, bound, name=name, extended=extended)
        rep.notes.append(f"f_n = {fam.formula}; limit {self.limit_formula}; M(n) = {self.M_formula}")
        return rep

    def describe(self) -> dict:
        return {"id": self.id, "limit": self.limit_formula, "rescaling": self.M_formula,
                "period": self.period, "region": self.region.describe(),
                "ns": list(self.ns), "bound": self.bound}


@dataclass(frozen=True)
class View:
    """Default rendering window and parameter."""

    n: float
    center: complex = 0j
    scale: float = 1.5


@dataclass
class CatalogEntry:
    name: str
    family: ParamFamily | None
    expected: Expected
    numeric_checks: tuple
    figure_refs: tuple
    view: View
    notes: tuple = ()

    def __post_init__(self):
        if not any(c.M is not None for c in self.numeric_checks):
            self.notes = tuple(self.notes) + (NO_RESCALING_NOTE,)

    @property
    def path(self):
        return DATA_DIR / f"{self.name}.tms"

    @cached_property
    def scheme(self) -> TreeMappingScheme:
        return io.load(self.path)

    def check(self, check_id: str) -> NumericCheck:
        for c in self.numeric_checks:
            if c.id == check_id:
                return c
        raise UnknownEntry(f"{self.name} has no check {check_id!r} "
                           f"(have {', '.join(c.id for c in self.numeric_checks)})")


def _ring(r0=1.0, r1=2.0):
    return Annulus(0j, r0, r1)


def _scaling(alpha: float, formula: str):
    return (lambda n: MoebiusMap.scaling(n ** alpha)), formula


_SURGERY_M, _SURGERY_MF = _scaling(-0.25, "n^(-1/4) w")
_NS = (1e3, 1e4, 1e5, 1e6)

_ENTRIES = [
    CatalogEntry(
        "degenerate", FAMILIES["degenerate"],
        Expected(1, (("A", 2, 3),), (1, 2), 3, 3),
        (NumericCheck("fixed", "degenerate", lambda z: (z + 1) ** 2 - 2, "(z+1)^2 - 2",
                      _ring(), _NS, 1e-4, (0j,)),),
        ("degenerate example",), View(1e4, -0.5 + 0j, 2.0)),
    CatalogEntry(
        "mcmullen", FAMILIES["mcmullen"],
        Expected(0, (("A", 2, 2),), (1,), 2, 5),
        (NumericCheck("fixed", "mcmullen", lambda z: z ** 2, "z^2", _ring(), _NS, 1e-4, (0j,)),),
        ("Fig. 3", "Fig. 4(a)"), View(1e4, 0j, 1.5)),
    CatalogEntry(
        "basilica-cantor", FAMILIES["basilica-cantor"],
        Expected(1, (("A", 2, 3),), (2,), 3, 5),
        (NumericCheck("fixed", "basilica-cantor", lambda z: z ** 2 / (z ** 2 - 1), "z^2/(z^2-1)",
                      _ring(1.2, 2.0), _NS, 1e-4, (0j,)),),
        ("Fig. 4(b)",), View(1e4, 0j, 2.0)),
    CatalogEntry(
        "cubic-two-cycle", FAMILIES["cubic-two-cycle"],
        Expected(1, (("A", 3, 3),), (1, 1), 3, 6),
        (NumericCheck("fixed", "cubic-two-cycle", lambda z: z ** 3 - 3j / 2 ** 0.5 * z ** 2,
                      "z^3 - (3i/sqrt2) z^2", _ring(), _NS, 1e-4, (0j,)),),
        ("Fig. 4(c)",), View(1e4, 0.7j, 2.0)),
    CatalogEntry(
        "quadruply", FAMILIES["quadruply"],
        Expected(0, (("A0", 3, 2),), (1,), 2, 12),
        (NumericCheck("fixed", "quadruply", lambda z: z ** 3, "z^3", _ring(), (2, 4, 8, 16), 1e-6, (0j,)),),
        ("Fig. 8",), View(10, 0j, 1.5),
        ("tree edge degrees reconstructed from the figure",)),
    CatalogEntry(
        "buried-sierpinski", FAMILIES["buried-sierpinski"],
        Expected(1, (("A", 4, 4),), (2,), 4, 8),
        (NumericCheck("fixed", "buried-sierpinski", lambda z: z ** 2 / (1 - z ** 4 / 16),
                      "z^2/(1 - z^4/16)", _ring(1.0, 1.5), _NS, 1e-4, (0j,)),),
        ("Fig. 2",), View(1e6, 0j, 3.0)),
    CatalogEntry(
        "cantor-z3", FAMILIES["cantor-z3"],
        Expected(0, (("A", 3, 2),), (1,), 2, 6),
        (NumericCheck("fixed", "cantor-z3", lambda z: z ** 3, "z^3", _ring(), _NS, 1e-4, (0j,)),),
        ("surgery base",), View(1e4, 0j, 1.5)),
    CatalogEntry(
        "surgery-k1", FAMILIES["surgery-k1"],
        Expected(1, (("A", 3, 2), ("A0", 3, 3)), (1,), 3, 6),
        (NumericCheck("fixed", "surgery-k1", lambda w: 1 / w ** 3 + ZETA8, "1/w^3 + zeta8",
                      Annulus(0j, 0.5, 2.0), (1e4, 1e6, 1e8), 1e-3, (), _SURGERY_M, _SURGERY_MF),
         NumericCheck("base", "surgery-k1", lambda z: z ** 3, "z^3", _ring(), (1e4, 1e6, 1e8), 2e-2, (0j,))),
        ("Fig. 7",), View(1e6, 0j, 1.5)),
    CatalogEntry(
        "godillon-3", FAMILIES["godillon-3"],
        Expected(1, (("A", 2, 3),), (4,), 4, 3),
        (NumericCheck("fixed", "godillon-3", lambda z: 1 / (z - 1) ** 2, "1/(z-1)^2",
                      Disk(1 + 0j, 1.0, holes=((0j, 0.1),)), _NS, 2e-5),),
        ("Fig. 10",), View(1e3, 1 + 0j, 3.0)),
]

ENTRIES = {e.name: e for e in _ENTRIES}


def names() -> list:
    return [e.name for e in _ENTRIES]


def get(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise UnknownEntry(f"unknown catalog entry {name!r}") from None


# ---------------------------------------------------------------------------
# verification

def measured_facts(s: TreeMappingScheme, c=None) -> dict:
    """The facts ``Expected`` records, measured on a scheme."""
    c = c if c is not None else census(s, len(s.tree.V0))
    names = s.meta.get("vertex_names") or [str(v) for v in s.tree.vertices]
    fixed = tuple((names[m.point.id], m.model_degree, m.N)
                  for m in c.models if m.kind == "VertexModel" and m.period == 1)
    return {"complex_cycle_count": c.complex_count, "fixed_models": fixed,
            "exposed_critical_cycles": tuple(sorted(len(x) for x in exposed_sets(s).cycles)),
            "fatou_count": c.fatou_count, "degree": scheme_degree(s)}


def compare(expected: Expected, measured: dict) -> list[str]:
    """Differences as ``field: expected X, measured Y`` lines."""
    diffs = []
    for key in ("complex_cycle_count", "fixed_models", "exposed_critical_cycles", "fatou_count",
                "degree"):
        want = getattr(expected, key)
        if want is None:
            continue
        got = measured[key]
        if tuple(want) != tuple(got) if isinstance(want, tuple) else want != got:
            diffs.append(f"{key}: expected {want}, measured {got}")
    return diffs


@dataclass
class EntryReport:
    name: str
    validation: object
    census: object
    diffs: list
    numeric: list
    bound_slack: int
    seconds: float
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (not self.errors and self.validation.ok and not self.diffs
                and self.bound_slack >= 0 and all(r.ok for r in self.numeric))

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "validation": self.validation.to_json() if self.validation else None,
                "census": self.census.to_json() if self.census else None,
                "diffs": self.diffs, "bound_slack": self.bound_slack,
                "numeric": [r.to_json() for r in self.numeric], "errors": self.errors}

    def text(self) -> str:
        lines = [f"== {self.name}: {'pass' if self.ok else 'FAIL'}"]
        if self.validation is not None:
            lines += ["  " + x for x in self.validation.text().splitlines()]
        lines.append(f"  census: complex {self.census.complex_count}, N_f {self.census.fatou_count}, "
                     f"slack {self.bound_slack}" if self.census else "  census: not run")
        lines += [f"  diff {d}" for d in self.diffs]
        for r in self.numeric:
            final = max(r.table[-1]) if r.table else float("nan")
            lines.append(f"  numeric {r.name}: {'pass' if r.ok else 'FAIL'} "
                         f"(last {final:.3e}, bound {r.bound:g}, monotone {r.monotone})")
        lines += [f"  error {e}" for e in self.errors]
        return "\n".join(lines)


@dataclass
class CatalogReport:
    entries: list

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_json(self) -> dict:
        return {"ok": self.ok, "entries": [e.to_json() for e in self.entries]}

    def text(self) -> str:
        body = "\n".join(e.text() for e in self.entries)
        n = sum(e.ok for e in self.entries)
        return f"{body}\n{n}/{len(self.entries)} entries pass"


def verify_entry(entry: CatalogEntry, expected: Expected | None = None,
                 numeric: bool = True, bound_override: float | None = None) -> EntryReport:
    t0 = time.perf_counter()
    expected = expected or entry.expected
    errors: list = []
    val = cen = None
    diffs: list = []
    slack = -1
    try:
        s = entry.scheme
        val = full_report(s)
        cen = census(s, len(s.tree.V0))
        slack = cen.bound_slack
        diffs = compare(expected, measured_facts(s, cen))
    except Exception as exc:  # reported, not raised
        errors.append(f"{type(exc).__name__}: {exc}")
    reports = []
    if numeric:
        for chk in entry.numeric_checks:
            try:
                reports.append(chk.run(bound=bound_override))
            except Exception as exc:
                errors.append(f"{chk.id}: {type(exc).__name__}: {exc}")
    return EntryReport(entry.name, val, cen, diffs, reports, slack, time.perf_counter() - t0, errors)


def verify_all(numeric: bool = True) -> CatalogReport:
    return CatalogReport([verify_entry(e, numeric=numeric) for e in _ENTRIES])


def __getattr__(attr):
    # ``catalog.list()`` without shadowing the builtin inside this module
    if attr == "list":
        return names
    raise AttributeError(f"module {__name__!r} has no attribute {attr!r}")


__all__ = ["CatalogEntry", "Expected", "NumericCheck", "View", "UnknownEntry", "get", "list", "names",
           "verify_all", "verify_entry", "measured_facts", "compare", "CatalogReport",
           "EntryReport", "ENTRIES", "NO_RESCALING_NOTE"]
