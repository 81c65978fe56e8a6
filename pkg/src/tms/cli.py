"""Command line: ``tms <subcommand> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error, 3 internal
error.  Every subcommand accepts ``--json``; ``--report DIR`` (where offered)
writes CSV/JSON data and matplotlib figures into DIR.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, io
from .components import census, verify_bound
from .report import dumps, jsonable
from .validate import check_hpcf, check_irreducible

OK, FAILED, USAGE, INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str, data) -> None:
    if args.json:
        print(dumps(jsonable(data) if not isinstance(data, dict) else data))
    else:
        print(text)


def _report_dir(args) -> Path | None:
    if getattr(args, "report", None) is None:
        return None
    d = Path(args.report)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _load(path: str):
    try:
        return io.load(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except io.ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("values must be positive")
    return vals


def _positive(kind):
    def parse(text):
        try:
            v = kind(float(text)) if kind is int else kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return parse


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like 512x512, got {text!r}") from None
    if w <= 0 or h <= 0:
        raise argparse.ArgumentTypeError("size must be positive")
    return w, h


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    s = _load(args.file)
    rep = check_hpcf(s, strict=not args.lenient)
    if args.irreducible and rep.ok:
        rep.entries.extend(check_irreducible(s))
    _emit(args, rep.text(), {"file": args.file, "ok": rep.ok, "checks": rep.to_json()})
    if (d := _report_dir(args)) is not None:
        from .plotting import tree_figure
        (d / "validation.json").write_text(dumps({"ok": rep.ok, "checks": rep.to_json()}) + "\n")
        tree_figure(s, d / "tree.png")
    return OK if rep.ok else FAILED


def cmd_reduce(args) -> int:
    from .reduce import reduce_to_irreducible
    s = _load(args.file)
    r = reduce_to_irreducible(s)
    io.save(r, args.output)
    before, after = s.tree.n_vertices, r.tree.n_vertices
    _emit(args, f"{args.file}: {before} vertices -> {after} vertices, written to {args.output}",
          {"file": args.file, "output": args.output, "vertices_before": before,
           "vertices_after": after, "changed": r != s})
    return OK


def cmd_periodic(args) -> int:
    from .treemap import periodic_points
    s = _load(args.file)
    names = s.meta.get("vertex_names") or [str(v) for v in range(s.tree.n_vertices)]
    lines, data = [], []
    for p in range(1, args.max_period + 1):
        ps = periodic_points(s.tree, s.map, p)
        row = {"period": p,
               "vertex_cycles": [[names[v] for v in c.vertices] for c in ps.vertex_cycles],
               "orbits": [{"point": jsonable(o.point), "multiplier": o.multiplier,
                           "orbit": jsonable(list(o.orbit))} for o in ps.orbits]}
        data.append(row)
        lines.append(f"period {p}: {len(ps.vertex_cycles)} vertex cycle(s), {len(ps.orbits)} interior orbit(s)")
        for c in row["vertex_cycles"]:
            lines.append("  vertices " + " -> ".join(c))
        for o in ps.orbits:
            lines.append(f"  edge {o.point.edge} + {o.point.offset}  multiplier {o.multiplier}")
    _emit(args, "\n".join(lines), {"file": args.file, "periods": data})
    return OK


def cmd_census(args) -> int:
    s = _load(args.file)
    c = census(s, args.max_period)
    _emit(args, c.table(), c.to_json())
    if (d := _report_dir(args)) is not None:
        (d / "census.json").write_text(dumps(c.to_json()) + "\n")
        rows = ["period,kind,model_degree,N,complex_type"]
        rows += [f"{m.period},{m.kind},{m.model_degree},{m.N},{int(m.complex_type)}" for m in c.models]
        (d / "census.csv").write_text("\n".join(rows) + "\n")
    return OK


def cmd_bound(args) -> int:
    s = _load(args.file)
    c = census(s, args.max_period or len(s.tree.V0))
    holds, slack = verify_bound(c)
    text = (f"sum(N-2) = {c.excess}, N_f - 2 = {c.fatou_count - 2}, "
            f"slack = {slack}: {'holds' if holds else 'VIOLATED'}")
    _emit(args, text, {"file": args.file, "holds": holds, "slack": slack,
                       "sum_N_minus_2": c.excess, "fatou_count": c.fatou_count,
                       "complex_type_count": c.complex_count})
    return OK if holds else FAILED


def cmd_surgery(args) -> int:
    from .surgery import cantor_tower, godillon_scheme
    if args.tower == "cantor":
        if args.level is None:
            raise UsageError("--level is required for the cantor tower")
        level = cantor_tower(args.level)
        s = level.scheme
        info = {"tower": "cantor", "level": args.level,
                "complex_cycle_periods": list(level.complex_cycle_periods),
                "targets": [str(t) for t in level.targets]}
    else:
        d = args.degree or 3
        if d < 3:
            raise UsageError("--degree must be at least 3")
        s = godillon_scheme(d)
        info = {"tower": "godillon", "degree": d}
    io.save(s, args.output)
    c = census(s, len(s.tree.V0))
    holds, slack = verify_bound(c)
    info.update({"output": args.output, "vertices": s.tree.n_vertices,
                 "complex_type_count": c.complex_count, "fatou_count": c.fatou_count,
                 "bound_slack": slack})
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    _emit(args, text, info)
    return OK


def _render_target(args):
    """(rational map, view defaults, label) for a catalog name or a map file."""
    if args.target in catalog.names():
        e = catalog.get(args.target)
        n = args.n if args.n is not None else e.view.n
        return e.family.rational(n), e.view.center, e.view.scale, f"{e.name} n={n:g}"
    from .numerics import FAMILIES
    if args.target in FAMILIES:
        fam = FAMILIES[args.target]
        if args.n is None:
            raise UsageError(f"--n is required for {args.target}")
        return fam.rational(args.n), 0j, 1.5, f"{fam.name} {fam.parameter}={args.n:g}"
    path = Path(args.target)
    if not path.exists():
        raise UsageError(f"{args.target} is neither a catalog entry nor a file")
    return _map_file(path) + (path.stem,)


def _map_file(path: Path):
    """JSON ``{"numerator": [...], "denominator": [...]}``, ascending
    coefficients, complex entries as ``[re, im]``."""
    from .rational import RationalMap
    try:
        data = json.loads(path.read_text())
        conv = [lambda c: complex(*c) if isinstance(c, list) else complex(c)] * 2
        num = [conv[0](c) for c in data["numerator"]]
        den = [conv[1](c) for c in data["denominator"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: not a map file ({exc})") from None
    center = complex(*data.get("center", [0, 0]))
    return RationalMap.from_coeffs(num, den), center, float(data.get("scale", 1.5))


def cmd_render(args) -> int:
    from .render import RenderConfig, render_julia
    R, center, scale, label = _render_target(args)
    w, h = args.size
    cfg = RenderConfig(center=complex(args.center) if args.center else center,
                       scale=args.scale or scale, width=w, height=h, max_iter=args.max_iter)
    img = render_julia(R, cfg, threads=args.threads)
    img.save(args.output)
    info = {"target": args.target, "label": label, "output": args.output, "width": w, "height": h,
            "center": [cfg.center.real, cfg.center.imag], "scale": cfg.scale,
            "julia_fraction": round(img.julia_fraction, 6),
            "cycles": [c.to_json() for c in img.cycles]}
    text = (f"{label}: {w}x{h}, Julia pixels {100 * img.julia_fraction:.2f}%, "
            f"{len(img.cycles)} attracting cycle(s), written to {args.output}")
    _emit(args, text, info)
    if (d := _report_dir(args)) is not None:
        from .plotting import julia_figure
        (d / "render.json").write_text(dumps(info) + "\n")
        julia_figure(img, d / "julia.png", label)
    return OK


def cmd_rescale(args) -> int:
    try:
        e = catalog.get(args.name)
        chk = e.check(args.check)
    except catalog.UnknownEntry as exc:
        raise UsageError(str(exc.args[0])) from None
    rep = chk.run(args.n_list, args.bound, extended=args.extended)
    _emit(args, rep.text(), rep.to_json())
    if (d := _report_dir(args)) is not None:
        from .plotting import convergence_figure
        (d / "errors.csv").write_text(rep.csv())
        (d / "errors.json").write_text(dumps(rep.to_json()) + "\n")
        convergence_figure(rep, d / "convergence.png")
    return OK if rep.ok else FAILED


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [{"name": n, "formula": catalog.get(n).family.formula,
                 "figures": list(catalog.get(n).figure_refs)} for n in catalog.names()]
        _emit(args, "\n".join(f"{r['name']:<18} {r['formula']}" for r in rows), {"entries": rows})
        return OK
    rep = catalog.verify_all(numeric=not args.no_numeric)
    _emit(args, rep.text(), rep.to_json())
    if (d := _report_dir(args)) is not None:
        from .plotting import convergence_figure, tree_figure
        (d / "catalog.json").write_text(dumps(rep.to_json()) + "\n")
        for er in rep.entries:
            tree_figure(catalog.get(er.name).scheme, d / f"{er.name}-tree.png", er.name)
            for r in er.numeric:
                stem = r.name.replace("/", "-")
                (d / f"{stem}.csv").write_text(r.csv())
                convergence_figure(r, d / f"{stem}.png")
    return OK if rep.ok else FAILED


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    reportable = argparse.ArgumentParser(add_help=False)
    reportable.add_argument("--report", metavar="DIR", help="write CSV/JSON data and figures here")

    p = argparse.ArgumentParser(prog="tms", description="Tree mapping schemes: validation, census, "
                                "surgery and numerical checks.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", parents=[common, reportable], help="check the six conditions")
    q.add_argument("file")
    q.add_argument("--lenient", action="store_true", help="stop at the first failing condition")
    q.add_argument("--irreducible", action="store_true", help="also check irreducibility")
    q.set_defaults(run=cmd_validate)

    q = sub.add_parser("reduce", parents=[common], help="reduce to an irreducible scheme")
    q.add_argument("file")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(run=cmd_reduce)

    for name, fn, helptext in (("periodic", cmd_periodic, "periodic points by period"),
                               ("census", cmd_census, "periodic Julia component census")):
        q = sub.add_parser(name, parents=[common] + ([reportable] if name == "census" else []),
                           help=helptext)
        q.add_argument("file")
        q.add_argument("--max-period", type=_positive(int), required=True)
        q.set_defaults(run=fn)

    q = sub.add_parser("bound", parents=[common], help="sum(N-2) <= N_f - 2 with slack")
    q.add_argument("file")
    q.add_argument("--max-period", type=_positive(int), default=None,
                   help="census depth (default: number of T0 vertices)")
    q.set_defaults(run=cmd_bound)

    q = sub.add_parser("surgery", parents=[common], help="build a surgery tower level")
    q.add_argument("--tower", choices=("cantor", "godillon"), required=True)
    q.add_argument("--level", type=int, default=None)
    q.add_argument("--degree", type=int, default=None)
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(run=cmd_surgery)

    q = sub.add_parser("render", parents=[common, reportable], help="render a Julia set")
    q.add_argument("target", help="catalog name, family name or map file")
    q.add_argument("--n", type=_positive(float), default=None)
    q.add_argument("--size", type=_size, default=(512, 512))
    q.add_argument("--center", default=None, help="e.g. 0.5+1j")
    q.add_argument("--scale", type=_positive(float), default=None, help="half-width of the view")
    q.add_argument("--max-iter", type=_positive(int), default=500)
    q.add_argument("--threads", type=_positive(int), default=None)
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(run=cmd_render)

    q = sub.add_parser("rescale", parents=[common, reportable], help="run a catalog limit check")
    q.add_argument("name")
    q.add_argument("--check", required=True)
    q.add_argument("--n-list", type=_float_list, default=None)
    q.add_argument("--bound", type=_positive(float), default=None)
    q.add_argument("--extended", action="store_true", help="long double evaluation, for n >= 1e10")
    q.set_defaults(run=cmd_rescale)

    q = sub.add_parser("catalog", parents=[common, reportable], help="list or verify the catalog")
    q.add_argument("action", choices=("list", "verify"))
    q.add_argument("--no-numeric", action="store_true")
    q.set_defaults(run=cmd_catalog)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"tms {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"tms {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
