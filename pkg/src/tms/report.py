"""Small report records shared by the checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

PASS, FAIL, NUMERIC_PASS = "pass", "fail", "numeric-pass"


@dataclass
class Check:
    """Outcome of one check.

    ``numeric`` records that at least one comparison used a tolerance; a
    passing numeric check reports ``numeric-pass``.
    """

    name: str
    ok: bool
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    numeric: bool = False

    @property
    def status(self) -> str:
        if not self.ok:
            return FAIL
        return NUMERIC_PASS if self.numeric else PASS

    def __bool__(self):
        return self.ok

    def merge(self, other: "Check") -> "Check":
        self.ok = self.ok and other.ok
        self.witnesses.extend(other.witnesses)
        self.notes.extend(other.notes)
        self.numeric = self.numeric or other.numeric
        return self

    def fail(self, witness, note: str | None = None) -> None:
        self.ok = False
        self.witnesses.append(witness)
        if note:
            self.notes.append(note)

    def to_json(self) -> dict:
        return {"condition": self.name, "status": self.status,
                "witnesses": [jsonable(w) for w in self.witnesses],
                "notes": list(self.notes)}


def jsonable(x):
    """Convert witnesses (tuples, Fractions, tree points, values) to JSON data."""
    from .tree import Interior, Vertex
    from .values import Approx, Exact, format_value, INF
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Vertex):
        return {"vertex": x.id}
    if isinstance(x, Interior):
        return {"edge": x.edge, "offset": str(x.offset)}
    if x is INF or isinstance(x, (Exact, Approx)):
        return format_value(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    return repr(x)


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False)
