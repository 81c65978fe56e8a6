"""JSON scheme files (``tms_version`` 1)."""

from __future__ import annotations

import copy
import json
from pathlib import Path

from .rational import RationalMap
from .scheme import MarkedSphere, OrbitPortrait, PortraitPoint, TreeMappingScheme
from .tree import TreeError, TreePair
from .treemap import TreeMap
from .values import format_rational, format_value, parse_rational, parse_value

VERSION = 1

TOP = {"tms_version", "name", "notes", "tree", "tree_map", "spheres", "maps", "portrait"}


class ParseError(ValueError):
    def __init__(self, where: str, msg: str, line: int | None = None):
        self.where, self.line = where, line
        loc = f"line {line}: " if line else ""
        super().__init__(f"{loc}{where}: {msg}")


class SchemaVersionMismatch(ParseError):
    pass


def _fields(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object")
    extra = set(obj) - set(allowed)
    if extra:
        raise ParseError(where, f"unknown field(s) {sorted(extra)}")
    missing = set(required) - set(obj)
    if missing:
        raise ParseError(where, f"missing field(s) {sorted(missing)}")


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        try:
            if isinstance(x, str) and x.lstrip("-").isdigit():
                return int(x)
        except ValueError:
            pass
        raise ParseError(where, f"expected an integer, got {x!r}")
    return x


def _bool(x, where):
    if not isinstance(x, bool):
        raise ParseError(where, f"expected true/false, got {x!r}")
    return x


def _value(x, where):
    if not isinstance(x, str):
        raise ParseError(where, f"expected a complex string, got {x!r}")
    try:
        return parse_value(x)
    except ValueError as exc:
        raise ParseError(where, str(exc)) from None


def _rational(x, where):
    try:
        return parse_rational(str(x))
    except ValueError as exc:
        raise ParseError(where, str(exc)) from None


def parse(data: bytes | str) -> TreeMappingScheme:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError("document", exc.msg, exc.lineno) from None
    _fields(doc, TOP, {"tms_version", "tree", "tree_map", "spheres", "maps", "portrait"}, "document")
    if doc["tms_version"] != VERSION:
        raise SchemaVersionMismatch("tms_version", f"expected {VERSION}, got {doc['tms_version']!r}")

    t = doc["tree"]
    _fields(t, {"vertices", "edges"}, {"vertices", "edges"}, "tree")
    verts = {}
    for k, v in enumerate(t["vertices"]):
        w = f"tree.vertices[{k}]"
        _fields(v, {"id", "in_t0"}, {"id", "in_t0"}, w)
        vid = _int(v["id"], w + ".id")
        if vid in verts:
            raise ParseError(w, f"duplicate vertex id {vid}")
        verts[vid] = _bool(v["in_t0"], w + ".in_t0")
    if sorted(verts) != list(range(len(verts))):
        raise ParseError("tree.vertices", "vertex ids must be 0..n-1")
    edges = []
    for k, e in enumerate(t["edges"]):
        w = f"tree.edges[{k}]"
        _fields(e, {"a", "b", "length", "in_t0"}, {"a", "b", "length", "in_t0"}, w)
        a, b = _int(e["a"], w + ".a"), _int(e["b"], w + ".b")
        for end in (a, b):
            if end not in verts:
                raise ParseError(w, f"references missing vertex {end}")
        edges.append((a, b, _rational(e["length"], w + ".length"), _bool(e["in_t0"], w + ".in_t0")))
    try:
        tree = TreePair([verts[i] for i in range(len(verts))], edges)
    except TreeError as exc:
        raise ParseError("tree", str(exc)) from None

    m = doc["tree_map"]
    _fields(m, {"vertex_images", "edge_degrees", "vertex_degrees"},
            {"vertex_images", "edge_degrees", "vertex_degrees"}, "tree_map")

    def intmap(obj, where):
        if not isinstance(obj, dict):
            raise ParseError(where, "expected an object")
        return {_int(k, where): _int(v, f"{where}.{k}") for k, v in obj.items()}

    F = TreeMap(intmap(m["vertex_images"], "tree_map.vertex_images"),
                intmap(m["edge_degrees"], "tree_map.edge_degrees"),
                intmap(m["vertex_degrees"], "tree_map.vertex_degrees"))
    problems = F.check_fields(tree)
    hard = [p for p in problems if "missing vertex" in p]
    if hard:
        raise ParseError("tree_map", hard[0])

    spheres = {}
    if not isinstance(doc["spheres"], dict):
        raise ParseError("spheres", "expected an object")
    for k, sph in doc["spheres"].items():
        w = f"spheres.{k}"
        v = _int(k, w)
        if v not in verts:
            raise ParseError(w, f"no vertex {v}")
        _fields(sph, {"markings"}, {"markings"}, w)
        marks = {}
        for ek, z in sph["markings"].items():
            e = _int(ek, f"{w}.markings")
            if not 0 <= e < len(edges):
                raise ParseError(f"{w}.markings.{ek}", "references a missing edge")
            marks[e] = _value(z, f"{w}.markings.{ek}")
        spheres[v] = MarkedSphere(v, marks)

    maps = {}
    if not isinstance(doc["maps"], dict):
        raise ParseError("maps", "expected an object")
    for k, f in doc["maps"].items():
        w = f"maps.{k}"
        v = _int(k, w)
        if v not in verts:
            raise ParseError(w, f"no vertex {v}")
        _fields(f, {"num", "den", "degree"}, {"num", "den", "degree"}, w)
        num = [_value(c, f"{w}.num[{i}]") for i, c in enumerate(f["num"])]
        den = [_value(c, f"{w}.den[{i}]") for i, c in enumerate(f["den"])]
        try:
            maps[v] = RationalMap(tuple(num), tuple(den), _int(f["degree"], w + ".degree"))
        except ValueError as exc:
            raise ParseError(w, str(exc)) from None

    p = doc["portrait"]
    _fields(p, {"points", "successors"}, {"points", "successors"}, "portrait")
    pts = []
    for k, q in enumerate(p["points"]):
        w = f"portrait.points[{k}]"
        _fields(q, {"sphere", "value", "labels", "local_degree"}, {"sphere", "value", "labels", "local_degree"}, w)
        s = _int(q["sphere"], w + ".sphere")
        if s not in verts:
            raise ParseError(w, f"no sphere {s}")
        labels = q["labels"]
        if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
            raise ParseError(w + ".labels", "expected a list of strings")
        for l in labels:
            if not (l == "exposed" or l.startswith("marked:") or l.startswith("critical:")):
                raise ParseError(w + ".labels", f"unknown label {l!r}")
        pts.append(PortraitPoint(s, _value(q["value"], w + ".value"), frozenset(labels),
                                 _int(q["local_degree"], w + ".local_degree")))
    succ = {}
    for k, pair in enumerate(p["successors"]):
        w = f"portrait.successors[{k}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(w, "expected [from, to]")
        i, j = _int(pair[0], w), _int(pair[1], w)
        if not (0 <= i < len(pts) and 0 <= j < len(pts)):
            raise ParseError(w, "point index out of range")
        if i in succ:
            raise ParseError(w, f"point {i} has two successors")
        succ[i] = j
    notes = doc.get("notes", {})
    return TreeMappingScheme(tree, F, spheres, maps, OrbitPortrait(pts, succ),
                             name=doc.get("name", ""), meta=notes if isinstance(notes, dict) else {})


def to_dict(s: TreeMappingScheme) -> dict:
    tp, F = s.tree, s.map
    doc = {"tms_version": VERSION}
    if s.name:
        doc["name"] = s.name
    if s.meta:
        doc["notes"] = copy.deepcopy(s.meta)    # callers may edit the document
    doc["tree"] = {
        "vertices": [{"id": i, "in_t0": f} for i, f in enumerate(tp.in_t0)],
        "edges": [{"a": e.a, "b": e.b, "length": format_rational(e.length), "in_t0": e.in_t0}
                  for e in tp.edges],
    }
    doc["tree_map"] = {
        "vertex_images": {str(k): v for k, v in sorted(F.vertex_image.items())},
        "edge_degrees": {str(k): v for k, v in sorted(F.edge_degree.items())},
        "vertex_degrees": {str(k): v for k, v in sorted(F.vertex_degree.items())},
    }
    doc["spheres"] = {str(v): {"markings": {str(e): format_value(z) for e, z in sorted(sph.markings.items())}}
                      for v, sph in sorted(s.spheres.items())}
    doc["maps"] = {str(v): {"num": [format_value(c) for c in f.num],
                            "den": [format_value(c) for c in f.den],
                            "degree": f.degree}
                   for v, f in sorted(s.maps.items())}
    doc["portrait"] = {
        "points": [{"sphere": p.sphere, "value": format_value(p.value),
                    "labels": sorted(p.labels), "local_degree": p.local_degree}
                   for p in s.portrait.points],
        "successors": [[i, j] for i, j in sorted(s.portrait.successors.items())],
    }
    return doc


def serialize(s: TreeMappingScheme) -> bytes:
    return (json.dumps(to_dict(s), indent=1) + "\n").encode("utf-8")


def load(path) -> TreeMappingScheme:
    return parse(Path(path).read_bytes())


def save(s: TreeMappingScheme, path) -> None:
    Path(path).write_bytes(serialize(s))


__all__ = ["ParseError", "SchemaVersionMismatch", "parse", "serialize", "load", "save", "to_dict"]
