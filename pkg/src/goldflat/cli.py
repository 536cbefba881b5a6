"""Command-line front end: ``goldflat describe|cylinders|surgery|check|render|catalog``.

Every number on the command line or in a surgery script is a field literal
such as ``3/2 + 1/2*rt(5)``.  The default crossing budget comes from the
GOLDFLAT_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path

from . import catalog
from .catalog import CatalogError, SlitTag, TaggedSurface, make_named
from .checklist import ClaimError, claim_ids, exit_status, reports_to_text, run_checklist
from .cylinders import cylinder_decomposition
from .flow import DEFAULT_BUDGET, Direction
from .linalg import parse_matrix, parse_vec
from .qfield import as_element, format_literal
from .render import render_svg
from .serialize import SpecError, canonical_json, decomposition_report, dump_surface, load_surface
from .surface import SurfaceError, apply_matrix, components, genus, stratum
from .surgery import SurgeryError, collapse_diagram, diagram_from_decomposition, glue_diagram, shear_diagram


class UsageError(Exception):
    pass


def _params(items: list[str] | None) -> dict[str, str]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} should look like name=value")
        out[key.strip()] = value.strip()
    return out


def _load(target: str, params: dict | None = None) -> TaggedSurface:
    if target in catalog.CONSTRUCTORS:
        return make_named(target, params)
    path = Path(target)
    if not path.exists():
        raise UsageError(f"{target!r} is neither a catalog name nor a file")
    if params:
        raise UsageError("parameters only apply to catalog names")
    return TaggedSurface(path.name, load_surface(path.read_text()), {})


def _summary(t: TaggedSurface) -> dict:
    s = t.surface
    return {
        "name": t.name,
        "params": {k: format_literal(v) for k, v in sorted(t.params.items())},
        "stratum": str(stratum(s)),
        "genus": genus(s),
        "components": len(components(s)),
        "area": format_literal(s.area()),
        "polygons": len(s.polygons),
        "constraints": [{"equation": text, "holds": ok} for text, ok in t.check_constraints()],
        "classes": [
            {"name": c.name, "direction": [format_literal(c.direction.x), format_literal(c.direction.y)], "role": c.role}
            for c in t.classes
        ],
    }


# -- subcommands -----------------------------------------------------------------------------


def cmd_describe(args) -> int:
    t = _load(args.target, _params(args.param))
    sys.stdout.write(canonical_json(_summary(t)))
    return 0


def cmd_cylinders(args) -> int:
    t = _load(args.target, _params(args.param))
    d = Direction.of(parse_vec(args.direction))
    dec = cylinder_decomposition(t.surface, d, args.budget)
    tags = {}
    if dec.complete:
        for cls in t.classes:
            if Direction.of(cls.direction) != d:
                continue
            try:
                for c in cls.locate(dec):
                    tags[c.id] = cls.name
            except CatalogError:
                pass
    sys.stdout.write(canonical_json(decomposition_report(dec, tags)))
    return 0


class _Session:
    """State of a surgery script: the surface, its tags and a current direction."""

    def __init__(self, budget: int):
        self.budget = budget
        self.tagged: TaggedSurface | None = None
        self.surface = None
        self.direction: Direction | None = None
        self.log: list[dict] = []

    def decomposition(self):
        if self.surface is None:
            raise UsageError("no surface loaded (use 'surface NAME' or 'load FILE')")
        if self.direction is None:
            raise UsageError("no direction chosen (use 'decompose DX,DY')")
        dec = cylinder_decomposition(self.surface, self.direction, self.budget)
        if not dec.complete:
            raise UsageError(f"direction {self.direction} undecided within budget {self.budget}")
        return dec

    def cylinders(self, spec: str, dec) -> list[int]:
        """A declared class name, or comma-separated cylinder ids."""
        if self.tagged is not None:
            for cls in self.tagged.classes:
                if cls.name == spec:
                    return [dec.cylinders.index(c) for c in cls.locate(dec)]
        try:
            ids = [int(x) for x in spec.split(",")]
        except ValueError:
            raise UsageError(f"{spec!r} is neither a class name nor cylinder ids") from None
        for i in ids:
            if not 0 <= i < len(dec.cylinders):
                raise UsageError(f"no cylinder {i} in this direction")
        return ids

    def slit(self, spec: str, dec):
        if self.tagged is not None and spec in self.tagged.tags:
            tag = self.tagged.tags[spec]
            if not isinstance(tag, SlitTag):
                raise UsageError(f"tag {spec!r} is not a saddle connection")
            return tag.resolve(dec)
        try:
            return dec.saddles[int(spec)]
        except (ValueError, IndexError):
            raise UsageError(f"{spec!r} is neither a slit tag nor a saddle id") from None

    def set_surface(self, s, step: str):
        self.surface = s
        self.tagged = self.tagged if step in ("surface", "load") else None
        self.log.append(
            {
                "step": step,
                "stratum": str(stratum(s)),
                "genus": genus(s),
                "components": len(components(s)),
                "area": format_literal(s.area()),
            }
        )

    def run(self, words: list[str]):
        op, rest = words[0], words[1:]
        if op == "surface":
            if not rest:
                raise UsageError("surface needs a catalog name")
            self.tagged = make_named(rest[0], _params(rest[1:]))
            self.set_surface(self.tagged.surface, "surface")
        elif op == "load":
            self.tagged = None
            self.set_surface(load_surface(Path(rest[0]).read_text()), "load")
        elif op == "decompose":
            self.direction = Direction.of(parse_vec(rest[0]))
            dec = self.decomposition()
            self.log.append({"step": "decompose", "direction": rest[0], "cylinders": len(dec.cylinders)})
        elif op == "collapse":
            dec = self.decomposition()
            idx = self.cylinders(rest[0], dec)
            self.set_surface(collapse_diagram(diagram_from_decomposition(dec), idx).realize(), "collapse")
        elif op == "shear":
            dec = self.decomposition()
            idx = self.cylinders(rest[0], dec)
            self.set_surface(shear_diagram(diagram_from_decomposition(dec), idx, as_element(rest[1])).realize(), "shear")
        elif op == "glue":
            # glue TAG[,TAG...] HEIGHT [TWIST]: each slit gets its own cylinder,
            # height and twist scaled by slit length so all moduli agree
            dec = self.decomposition()
            slits = [self.slit(x, dec) for x in rest[0].split(",")]
            height = as_element(rest[1])
            twist = as_element(rest[2]) if len(rest) > 2 else as_element(0)
            diagram = diagram_from_decomposition(dec)
            first = slits[0].length
            for k, sc in enumerate(slits):
                r = sc.length / first
                diagram = glue_diagram(diagram, sc.id, height * r, twist * r, f"G{k}")
            self.set_surface(diagram.realize(), "glue")
        elif op == "matrix":
            self.set_surface(apply_matrix(self.surface, parse_matrix(rest[0])), "matrix")
        else:
            raise UsageError(f"unknown surgery step {op!r}")


def cmd_surgery(args) -> int:
    session = _Session(args.budget)
    text = Path(args.script).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        words = shlex.split(line, comments=True)
        if not words:
            continue
        try:
            session.run(words)
        except (UsageError, CatalogError, SurgeryError, SurfaceError, ValueError, IndexError) as exc:
            raise UsageError(f"{args.script}:{lineno}: {exc}") from None
    if session.surface is None:
        raise UsageError("script produced no surface")
    doc = {"steps": session.log}
    sys.stdout.write(canonical_json(doc))
    if args.out:
        Path(args.out).write_text(dump_surface(session.surface))
    return 0


def cmd_check(args) -> int:
    ids = args.ids or ["all"]
    selector = "all" if ids == ["all"] else ids
    reports = run_checklist(selector, args.budget, args.jobs)
    sys.stdout.write(reports_to_text(reports, args.timings))
    return exit_status(reports, args.strict)


def cmd_render(args) -> int:
    t = _load(args.target, _params(args.param))
    direction = parse_vec(args.direction) if args.direction else None
    Path(args.out).write_text(render_svg(t, direction, args.budget, title=t.name))
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.NAMES:
            print(f"{name}({', '.join(catalog.parameters(name))})")
        return 0
    if not args.name:
        raise UsageError("catalog emit needs a surface name")
    t = make_named(args.name, _params(args.params))
    sys.stdout.write(dump_surface(t.surface))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="goldflat", description="Exact computations on translation surfaces over real quadratic fields."
    )
    sub = p.add_subparsers(dest="command", required=True)

    def budget(sp):
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="edge crossings per separatrix")

    def params(sp):
        sp.add_argument("--param", "-p", action="append", metavar="NAME=VALUE", help="catalog parameter")

    sp = sub.add_parser("describe", help="stratum, genus, constraints and classes")
    sp.add_argument("target", help="catalog name or surface spec file")
    params(sp)
    sp.set_defaults(func=cmd_describe)

    sp = sub.add_parser("cylinders", help="cylinder decomposition report in one direction")
    sp.add_argument("target")
    sp.add_argument("--direction", required=True, metavar="DX,DY")
    params(sp)
    budget(sp)
    sp.set_defaults(func=cmd_cylinders)

    sp = sub.add_parser("surgery", help="run a surgery script")
    sp.add_argument("script")
    sp.add_argument("--out", help="write the final surface spec here")
    budget(sp)
    sp.set_defaults(func=cmd_surgery)

    sp = sub.add_parser("check", help="run checklist claims")
    sp.add_argument("ids", nargs="*", help=f"claim ids or 'all' ({len(claim_ids())} claims)")
    sp.add_argument("--strict", action="store_true", help="treat unknown as failure")
    sp.add_argument("--timings", action="store_true", help="include elapsed seconds (output no longer reproducible)")
    sp.add_argument("--jobs", type=int, default=1)
    budget(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("render", help="write an SVG picture")
    sp.add_argument("target")
    sp.add_argument("--out", required=True)
    sp.add_argument("--direction", metavar="DX,DY", help="shade cylinders in this direction")
    params(sp)
    budget(sp)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("catalog", help="list or emit catalog surfaces")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--params", nargs="*", metavar="NAME=VALUE")
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CatalogError, ClaimError, SpecError, SurgeryError, SurfaceError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"goldflat: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
