"""Command line interface: ``dptangle <command> ...``.

Exit codes: 0 success, 1 usage error, 2 unreadable, malformed or invalid
motif, 3 inapplicable transform, 4 fuzz failure.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import catalog, fileformat, svg
from .compounds import CROSSING, LINKING
from .directions import axis_motif, invariant_report
from .motif import DiagramError, TorusDiagram, validate
from .moves import MoveError, MoveSite, apply_move, cover, fuzz_walk, gauge_shift, rebase

EXIT_USAGE, EXIT_INPUT, EXIT_MOVE, EXIT_FUZZ = 1, 2, 3, 4


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load(target: str, check: bool = True) -> fileformat.MotifFile:
    """Read a motif file, or fetch a built-in motif when ``target`` names one and no such file exists."""
    path = Path(target)
    if path.exists():
        try:
            return fileformat.read(path, validate=check)
        except OSError as exc:
            raise InputError(f"cannot read {target}: {exc.strerror}") from None
    if target in catalog.ENTRIES:
        return fileformat.MotifFile(catalog.get(target), catalog.source(target))
    raise InputError(f"no such file or catalog motif: {target}")


def _matrix(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise UsageError(f"expected four integers 'm11 m12 m21 m22', got {text!r}")
    try:
        a, b, c, d = (int(x) for x in parts)
    except ValueError:
        raise UsageError(f"expected four integers 'm11 m12 m21 m22', got {text!r}") from None
    return (a, b), (c, d)


def _gauge(text: str) -> dict[str, tuple[int, int]]:
    """Parse ``c1=1,0;c2=0,-1``."""
    out = {}
    for item in filter(None, (x.strip() for x in text.split(";"))):
        cid, sep, vec = item.partition("=")
        try:
            du, dv = (int(x) for x in vec.split(","))
        except ValueError:
            raise UsageError(f"bad gauge entry {item!r}; expected crossing=du,dv") from None
        if not sep or not cid:
            raise UsageError(f"bad gauge entry {item!r}; expected crossing=du,dv")
        out[cid.strip()] = (du, dv)
    if not out:
        raise UsageError("empty gauge: expected crossing=du,dv entries")
    return out


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# -- commands -----------------------------------------------------------------------

def cmd_validate(args) -> int:
    motif = load(args.file, check=False)
    report = validate(motif.diagram)
    if report.ok:
        print(f"{motif.name}: ok")
        return 0
    print(str(report), file=sys.stderr)
    return EXIT_INPUT


def cmd_report(args) -> int:
    motif = load(args.file)
    report = invariant_report(motif.diagram, args.policy)
    _emit(report.to_json() if args.format == "structured" else report.text(), args.output)
    return 0


def cmd_axis(args) -> int:
    motif = load(args.file)
    axis = axis_motif(motif.diagram, args.policy)
    if args.svg:
        _emit(svg.render(axis, motif.name), args.svg)
    else:
        print(axis)
    return 0


def cmd_transform(args) -> int:
    motif = load(args.file)
    d: TorusDiagram = motif.diagram
    if args.rebase is not None:
        d = rebase(d, _matrix(args.rebase), allow_reflection=args.allow_reflection)
    elif args.cover is not None:
        d = cover(d, _matrix(args.cover))
    elif args.gauge is not None:
        d = gauge_shift(d, _gauge(args.gauge))
    else:
        try:
            site = MoveSite.parse(args.move)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        d = apply_move(d, site)
    _emit(fileformat.dumps(d, motif.source), args.output)
    return 0


def _walk(job):
    name, diagram, length, seed, policy = job
    r = fuzz_walk(diagram, length, seed, policy)
    return name, seed, r.passed, r.failures


def cmd_fuzz(args) -> int:
    if args.walks < 1 or args.length < 0:
        raise UsageError("--walks must be positive and --length nonnegative")
    if args.target == "catalog":
        targets = [(n, catalog.get(n)) for n in catalog.names()]
    else:
        motif = load(args.target)
        targets = [(args.target, motif.diagram)]
    jobs = [(name, d, args.length, args.seed + w, args.policy)
            for name, d in targets for w in range(args.walks)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_walk, jobs, chunksize=8))
    else:
        results = [_walk(j) for j in jobs]
    failed = 0
    for name in dict.fromkeys(n for n, *_ in results):
        mine = [r for r in results if r[0] == name]
        bad = [r for r in mine if not r[2]]
        failed += len(bad)
        print(f"{name}: {len(mine) - len(bad)}/{len(mine)} walks passed")
        for _, seed, _, failures in bad:
            for f in failures:
                print(f"  seed {seed}: {f}")
            print(f"  reproduce: dptangle fuzz {name} --walks 1 --length {args.length} "
                  f"--seed {seed} --policy {args.policy}")
    print(f"total: {len(results) - failed}/{len(results)} walks passed")
    return EXIT_FUZZ if failed else 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        print(f"catalog version {catalog.CATALOG_VERSION}")
        for n in catalog.names():
            print(f"{n}\t{catalog.source(n)}")
        return 0
    if args.action == "show":
        if not args.name:
            raise UsageError("catalog show needs a motif name")
        if args.name not in catalog.ENTRIES:
            raise InputError(f"no catalog motif named {args.name!r}")
        sys.stdout.write(fileformat.dumps(catalog.get(args.name), catalog.source(args.name)))
        return 0
    if not args.name:
        raise UsageError("catalog export needs a directory")
    out = Path(args.name)
    out.mkdir(parents=True, exist_ok=True)
    for n in catalog.names():
        fileformat.write(out / f"{n}.json", catalog.get(n), catalog.source(n))
    print(f"wrote {len(catalog.names())} motifs to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dptangle", description="Invariants of doubly periodic tangle motifs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def policy(sp):
        sp.add_argument("--policy", choices=(LINKING, CROSSING), default=LINKING,
                        help="which crossings tie two components together (default: linking)")

    sp = sub.add_parser("validate", help="check a motif file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("report", help="print the invariant report")
    sp.add_argument("file", help="motif file or catalog name")
    policy(sp)
    sp.add_argument("--format", choices=("text", "structured"), default="text")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("axis", help="print or draw the axis-motif")
    sp.add_argument("file")
    policy(sp)
    sp.add_argument("--svg", help="write an SVG drawing to this path ('-' for stdout)")
    sp.set_defaults(func=cmd_axis)

    sp = sub.add_parser("transform", help="apply one equivalence move")
    sp.add_argument("file")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--rebase", metavar="'m11 m12 m21 m22'")
    group.add_argument("--cover", metavar="'l11 l12 l21 l22'")
    group.add_argument("--gauge", metavar="'c1=du,dv;c2=du,dv'")
    group.add_argument("--move", metavar="SITE", help="e.g. R1+:e1:+1:over, R2-:c1,c2, R3:c1,c2,c3")
    sp.add_argument("--allow-reflection", action="store_true",
                    help="accept a rebase matrix of determinant -1")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("fuzz", help="random move walks checking invariance")
    sp.add_argument("target", help="motif file, catalog name, or 'catalog' for every built-in motif")
    sp.add_argument("--walks", type=int, default=100)
    sp.add_argument("--length", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    policy(sp)
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("catalog", help="built-in motifs")
    sp.add_argument("action", choices=("list", "show", "export"))
    sp.add_argument("name", nargs="?", help="motif name (show) or output directory (export)")
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dptangle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MoveError as exc:
        print(f"dptangle: cannot apply: {exc}", file=sys.stderr)
        return EXIT_MOVE
    except (InputError, DiagramError) as exc:
        print(f"dptangle: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
