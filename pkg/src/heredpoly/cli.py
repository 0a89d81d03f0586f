"""Command-line driver.

Exit codes: 0 success, 1 a check or verification failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog, constructions, symmetry
from .io import FormatError, format_poset, read_poset
from .poset import PolytopeError, dual, poset_from_flag_graph, validate
from .presentation import (CosetLimitError, DEFAULT_LIMIT, PresentationError, build_flag_graph,
                           coset_enumerate, read_presentation)


class InputError(Exception):
    pass


def load(source: str, check: bool = True):
    """A polytope from an ``.apoly`` file, a ``.grp`` presentation, or a catalog name."""
    path = Path(source)
    if path.exists():
        if path.suffix == ".grp":
            return poset_from_flag_graph(build_flag_graph(read_presentation(path)))
        return read_poset(path)
    try:
        return catalog.catalog_get(source, check=check)
    except catalog.CatalogError as exc:
        raise InputError(f"{source}: no such file or catalog entry ({exc})") from None


def _emit(p, out):
    text = format_poset(p)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_validate(args):
    report = validate(load(args.input, check=False))
    print("\n".join(report.lines()))
    return 0 if report.ok else 1


def cmd_analyze(args):
    p = load(args.input)
    if not validate(p).ok:
        print("\n".join(validate(p).lines()))
        return 1
    print("\n".join(symmetry.analysis_lines(p, args.report_format)))
    return 0


OPERATIONS = {
    "medial": lambda p, a: constructions.medial(p),
    "halved": lambda p, a: constructions.halved(p, check=not a.no_check),
    "twopower": lambda p, a: constructions.two_power(p, check=not a.no_check, max_vertices=a.max_vertices),
    "extension": lambda p, a: constructions.chiral_extension(p, check=not a.no_check,
                                                             max_vertices=a.max_vertices),
    "alternating": lambda p, a: constructions.alternating(p),
    "dual": lambda p, a: dual(p),
}


def cmd_construct(args):
    p = load(args.input)
    if args.operation == "alternating":
        report = constructions.alternating_preconditions(p)
        if not report.ok:
            print("\n".join(report.lines()), file=sys.stderr)
            return 1
    _emit(OPERATIONS[args.operation](p, args), args.output)
    return 0


def cmd_group(args):
    pres = read_presentation(args.file)
    if args.build:
        fg = build_flag_graph(pres, limit=args.limit)
        _emit(poset_from_flag_graph(fg), args.output)
        return 0
    table = coset_enumerate(pres, limit=args.limit)
    print(f"order {table.coset_count}")
    if pres.order is not None and pres.order != table.coset_count:
        print(f"expected order {pres.order}", file=sys.stderr)
        return 1
    return 0


def cmd_catalog(args):
    if args.action == "list":
        for name, entry in catalog.catalog_entries().items():
            print(f"{name}\t{entry.source}")
        return 0
    if args.action == "show":
        if not args.name:
            raise InputError("catalog show needs a name")
        _emit(load(args.name), args.output)
        return 0
    failed = 0
    for name in ([args.name] if args.name else catalog.catalog_names()):
        problems = catalog.check_entry(name)
        print(f"{name}: " + ("ok" if not problems else "; ".join(problems)))
        failed += bool(problems)
    return 1 if failed else 0


def cmd_verify(args):
    from . import verify

    ok = True
    for num, *_ in verify.CRITERIA:
        result = verify.run_criterion(num, slow=args.slow)
        print(result.line(), flush=True)
        if args.verbose:
            for c in result.checks:
                print(f"    {'ok  ' if c.passed else 'FAIL'} {c.label}")
        ok &= result.passed
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="heredpoly", description="Finite abstract polytope toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the polytope axioms")
    s.add_argument("input", help=".apoly file, .grp file, or catalog name")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("analyze", help="symmetry and hereditary report")
    s.add_argument("input")
    s.add_argument("--report-format", choices=("text", "machine"), default="machine")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("construct", help="apply a construction")
    s.add_argument("operation", choices=sorted(OPERATIONS))
    s.add_argument("input")
    s.add_argument("-o", "--output", help="output .apoly (default stdout)")
    s.add_argument("--no-check", action="store_true", help="skip group-order self-checks")
    s.add_argument("--max-vertices", type=int, help="vertex limit for twopower/extension")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("group", help="coset enumeration of a .grp presentation")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--order", action="store_true", help="print the group order")
    mode.add_argument("--build", action="store_true", help="build the polytope and write .apoly")
    s.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="coset limit")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("catalog", help="list, show, or check catalog entries")
    s.add_argument("action", choices=("list", "show", "check"), nargs="?", default="list")
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("verify", help="run the acceptance criteria")
    s.add_argument("suite", choices=("paper",))
    s.add_argument("--slow", action="store_true", help="include the long-running checks")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, PresentationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PolytopeError, CosetLimitError, catalog.CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
