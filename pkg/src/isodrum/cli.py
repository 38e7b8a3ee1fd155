"""Command line entry point: the ``drum`` tool.

One binary with seven subcommands (validate, table, classify, unfold,
spectrum, compare, search), each honoring ``--json`` for a
machine-readable record with a versioned schema.

Exit codes: 0 success (or comparison passed), 1 computed but failed
verification, 2 usage or input error, 3 budget or resource limit.
Config precedence: flags, then ``DRUM_*`` environment variables, then
defaults.  Output bytes are deterministic for fixed inputs and config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from isodrum import __version__
from isodrum.fixtures import fixture_digests
from isodrum.permgroup import GroupTooLargeError
from isodrum.search import (
    DEFAULT_ENUMERATION_BUDGET,
    BudgetExceededError,
    build_pair_catalog,
    enumerate_tree_tilings,
)
from isodrum.tiling import (
    TilingParseError,
    TilingValidationError,
    group_table,
    group_table_at,
    read_tiling_file,
)
from isodrum.transplant import classify_pair
from isodrum.unfold import BaseTile, UnfoldError, read_polygon_file, unfold_domain

SCHEMA_VERSION = 1

EPILOG = """\
environment fallbacks (used when the matching flag is absent):
  DRUM_H        grid spacing, a positive rational like 1/64
  DRUM_K        eigenvalue count
  DRUM_TILE     base tile: default | regular | file:<polygon>
  DRUM_REL_TOL  compare tolerance, rational or decimal
  DRUM_BUDGET   search work budget
  DRUM_THREADS  cap on numerical worker threads
"""


@dataclass(frozen=True)
class CommandResult:
    """Outcome of one invocation: exit code, human text, optional record."""

    exit_code: int
    human_text: str
    machine_record: dict | None = None
    emit_json: bool = False

    @property
    def output(self) -> str:
        if self.emit_json and self.machine_record is not None:
            return json.dumps(self.machine_record, indent=2, sort_keys=True)
        return self.human_text


class _UsageError(Exception):
    pass


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _fraction_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _positive_int_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _setting(flag_value, env_name, parse, default):
    """Config precedence: explicit flag, then environment, then default."""
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(env_name)
    if raw is None:
        return default
    try:
        return parse(raw)
    except (ValueError, ZeroDivisionError, argparse.ArgumentTypeError):
        raise _CliError(2, f"bad {env_name} value: {raw!r}")


def _apply_thread_cap(threads: int | None) -> None:
    if threads is None:
        return
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ[var] = str(threads)


def _read_spec(path):
    try:
        return read_tiling_file(path)
    except TilingParseError as err:
        raise _CliError(2, f"{path}: {err}") from err
    except TilingValidationError as err:
        raise _CliError(2, f"{path}: {err}") from err


def _resolve_tile(option: str, spec):
    if option == "default":
        return None
    if option == "regular":
        return BaseTile.regular(spec.color_count)
    if option.startswith("file:"):
        return BaseTile.from_file(option[len("file:"):])
    raise _CliError(
        2, f"unknown tile option {option!r} (use default, regular, or file:<polygon>)"
    )


def _spectral():
    from isodrum import spectral

    return spectral


def _report():
    from isodrum import report

    return report


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> CommandResult:
    path = str(args.file)
    try:
        spec = read_tiling_file(args.file)
    except TilingParseError as err:
        record = {
            "schema": SCHEMA_VERSION,
            "command": "validate",
            "file": path,
            "valid": False,
            "stage": "parse",
            "line": err.line,
            "error": str(err),
        }
        return CommandResult(2, f"error: {path}: {err}", record, args.json)
    except TilingValidationError as err:
        record = {
            "schema": SCHEMA_VERSION,
            "command": "validate",
            "file": path,
            "valid": False,
            "stage": "semantic",
            "error": str(err),
        }
        return CommandResult(1, f"invalid: {path}: {err}", record, args.json)
    fixed = [p.fixed_point_count() for p in spec.involutions()]
    record = {
        "schema": SCHEMA_VERSION,
        "command": "validate",
        "file": path,
        "valid": True,
        "tiles": spec.tile_count,
        "colors": spec.color_count,
        "edgeCount": len(spec.edges),
        "connected": spec.is_connected(),
        "tree": spec.is_tree(),
        "fixedPointEquation": spec.fixed_point_equation_holds(),
        "fixedPointCounts": fixed,
    }
    text = "\n".join([
        f"{path}: valid",
        f"tiles {spec.tile_count}, colors {spec.color_count}, "
        f"edges {len(spec.edges)}",
        f"connected: {_yes_no(record['connected'])}   "
        f"tree: {_yes_no(record['tree'])}   "
        f"fixed-point equation: "
        f"{'holds' if record['fixedPointEquation'] else 'fails'}",
        "fixed points per color: " + " ".join(map(str, fixed)),
    ])
    return CommandResult(0, text, record, args.json)


def _table_cells(row) -> tuple:
    if row.is_family:
        return (
            str(row.case), row.name, row.phi_formula, row.points_formula,
            "-", row.q_constraint,
        )
    return (
        str(row.case), row.name, str(row.phi), str(row.module_points),
        str(row.c_bound), "",
    )


def _cmd_table(args) -> CommandResult:
    rows = group_table() if args.q is None else group_table_at(args.q)
    cells = [_table_cells(r) for r in rows]
    header = ("case", "group", "phi", "points", "bound", "notes")

    record = {
        "schema": SCHEMA_VERSION,
        "command": "table",
        "q": args.q,
        "rows": [
            {
                "case": r.case,
                "name": r.name,
                "phi": r.phi if not r.is_family else r.phi_formula,
                "modulePoints": (
                    r.module_points if not r.is_family else r.points_formula
                ),
                "cBound": None if r.is_family else str(r.c_bound),
                "isFamily": r.is_family,
                "constraint": r.q_constraint,
            }
            for r in rows
        ],
    }

    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        return CommandResult(0, buf.getvalue().rstrip("\n"), record, args.json)

    widths = [
        max(len(header[c]), *(len(row[c]) for row in cells))
        for c in range(len(header))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return CommandResult(0, "\n".join(lines), record, args.json)


def _cmd_classify(args) -> CommandResult:
    spec_a = _read_spec(args.file_a)
    spec_b = _read_spec(args.file_b)
    result = classify_pair(spec_a, spec_b)
    record = {
        "schema": SCHEMA_VERSION,
        "command": "classify",
        "fileA": str(args.file_a),
        "fileB": str(args.file_b),
        **result.as_dict(),
    }
    lines = [
        f"verdict: {result.verdict.value}",
        f"intertwiner dimension: {result.intertwiner_dimension}",
        f"certified: {_yes_no(result.certified)}",
    ]
    if result.witness is not None:
        lines.append("witness:")
        for row in result.witness.data:
            lines.append("  " + " ".join(str(x) for x in row))
    return CommandResult(0, "\n".join(lines), record, args.json)


def _cmd_unfold(args) -> CommandResult:
    spec = _read_spec(args.file)
    if not 0 <= args.root < spec.tile_count:
        raise _CliError(
            2, f"root {args.root} out of range for {spec.tile_count} tiles"
        )
    tile_option = _setting(args.tile, "DRUM_TILE", str, "default")
    base = _resolve_tile(tile_option, spec)
    domain = unfold_domain(spec, base=base, root=args.root)

    record = {
        "schema": SCHEMA_VERSION,
        "command": "unfold",
        "file": str(args.file),
        "tile": tile_option,
        "root": args.root,
        "placements": len(domain.placements),
        "embedded": domain.embedded,
        "area": str(domain.area()) if domain.embedded else None,
        "boundary": (
            [[str(x), str(y)] for x, y in domain.boundary]
            if domain.boundary is not None
            else None
        ),
    }

    lines = []
    if domain.embedded:
        lines.append(
            f"{args.file}: embedded, {len(domain.placements)} tiles, "
            f"area {domain.area()}"
        )
        lines.append("boundary:")
        lines.extend(f"  {x} {y}" for x, y in domain.boundary)
    else:
        lines.append(f"{args.file}: tiles overlap; no embedded domain")

    if args.svg:
        if domain.embedded:
            from isodrum.unfold import export_svg

            export_svg(domain, args.svg)
            lines.append(f"wrote {args.svg}")
        else:
            lines.append(f"svg skipped (no boundary): {args.svg}")
    if args.plot:
        _report().draw_domain(domain, args.plot, title=str(args.file))
        lines.append(f"wrote {args.plot}")

    return CommandResult(
        0 if domain.embedded else 1, "\n".join(lines), record, args.json
    )


def _run_solver(polygon, h, k):
    spectral = _spectral()
    try:
        mask = spectral.rasterize(polygon, h)
        return mask, spectral.dirichlet_eigenvalues(mask, k=k)
    except spectral.GridTooLargeError as err:
        raise _CliError(3, str(err)) from err
    except spectral.SolverConvergenceError as err:
        raise _CliError(3, str(err)) from err


def _cmd_spectrum(args) -> CommandResult:
    polygon = read_polygon_file(args.file)
    h = _setting(args.h, "DRUM_H", Fraction, Fraction(1, 64))
    k = _setting(args.k, "DRUM_K", int, 6)
    if h <= 0 or k <= 0:
        raise _CliError(2, "h and k must be positive")
    mask, spectrum = _run_solver(polygon, h, k)

    record = {
        "schema": SCHEMA_VERSION,
        "command": "spectrum",
        "file": str(args.file),
        "h": str(h),
        "k": k,
        "interiorNodes": mask.interior_count,
        "eigenvalues": list(spectrum.eigenvalues),
    }
    lines = [
        f"{args.file}: h = {h}, k = {k}, interior nodes {mask.interior_count}"
    ]
    lines.extend(
        f"{i:4d}  {v:.12g}" for i, v in enumerate(spectrum.eigenvalues, start=1)
    )
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("index,eigenvalue\n")
            for i, v in enumerate(spectrum.eigenvalues, start=1):
                fh.write(f"{i},{v:.12g}\n")
        lines.append(f"wrote {args.csv}")
    if args.plot:
        _report().plot_spectrum(spectrum, args.plot, label=str(args.file))
        lines.append(f"wrote {args.plot}")
    return CommandResult(0, "\n".join(lines), record, args.json)


def _cmd_compare(args) -> CommandResult:
    spec_a = _read_spec(args.file_a)
    spec_b = _read_spec(args.file_b)
    h = _setting(args.h, "DRUM_H", Fraction, Fraction(1, 64))
    k = _setting(args.k, "DRUM_K", int, 6)
    rel_tol = float(
        _setting(args.rel_tol, "DRUM_REL_TOL", Fraction, Fraction(1, 100))
    )
    if h <= 0 or k <= 0 or rel_tol <= 0:
        raise _CliError(2, "h, k, and the tolerance must be positive")
    tile_option = _setting(args.tile, "DRUM_TILE", str, "default")
    base = _resolve_tile(tile_option, spec_a)

    domains = {}
    for label, spec, path in (
        ("A", spec_a, args.file_a), ("B", spec_b, args.file_b),
    ):
        dom = unfold_domain(spec, base=base)
        if not dom.embedded:
            return CommandResult(
                1,
                f"{path}: tiles overlap; no drum to compare",
                {
                    "schema": SCHEMA_VERSION,
                    "command": "compare",
                    "error": f"{path}: not embedded",
                },
                args.json,
            )
        domains[label] = dom

    mask_a, spectrum_a = _run_solver(domains["A"].boundary, h, k)
    mask_b, spectrum_b = _run_solver(domains["B"].boundary, h, k)
    comparison = _spectral().compare_spectra(spectrum_a, spectrum_b, rel_tol)

    record = {
        "schema": SCHEMA_VERSION,
        "command": "compare",
        "fileA": str(args.file_a),
        "fileB": str(args.file_b),
        "h": str(h),
        "k": k,
        "tile": tile_option,
        "interiorNodesA": mask_a.interior_count,
        "interiorNodesB": mask_b.interior_count,
        "eigenvaluesA": list(spectrum_a.eigenvalues),
        "eigenvaluesB": list(spectrum_b.eigenvalues),
        **comparison.as_dict(),
    }
    lines = [f"h = {h}, k = {k}, tile = {tile_option}"]
    lines.append(f"{'index':>5}  {'A':>16}  {'B':>16}  {'rel diff':>9}")
    for i, (va, vb, d) in enumerate(
        zip(spectrum_a.eigenvalues, spectrum_b.eigenvalues, comparison.rel_diffs),
        start=1,
    ):
        lines.append(f"{i:5d}  {va:16.10g}  {vb:16.10g}  {d:9.2e}")
    verdict = "PASS" if comparison.passed else "FAIL"
    lines.append(
        f"max relative difference {comparison.max_rel_diff:.3e} "
        f"(tolerance {rel_tol:.3e}): {verdict}"
    )
    lines.append(
        "note: agreement on a finite grid is numerical evidence of "
        "isospectrality, not a proof"
    )
    if args.plot:
        _report().plot_comparison(
            spectrum_a, spectrum_b, comparison, args.plot,
            labels=(str(args.file_a), str(args.file_b)),
        )
        lines.append(f"wrote {args.plot}")
    return CommandResult(
        0 if comparison.passed else 1, "\n".join(lines), record, args.json
    )


def _cmd_search(args) -> CommandResult:
    budget = _setting(
        args.budget, "DRUM_BUDGET", _positive_int_arg, DEFAULT_ENUMERATION_BUDGET
    )
    try:
        specs = enumerate_tree_tilings(
            args.tiles, args.colors, mod_colors=args.mod_colors, budget=budget
        )
    except BudgetExceededError as err:
        partial = len(err.partial) if err.partial is not None else 0
        noun = "class" if partial == 1 else "classes"
        raise _CliError(
            3,
            f"enumeration budget {budget} exhausted "
            f"({partial} {noun} found so far); raise --budget",
        ) from err
    catalog = build_pair_catalog(specs, mod_colors=args.mod_colors)
    entries = [e.as_dict() for e in catalog.entries]

    record = {
        "schema": SCHEMA_VERSION,
        "command": "search",
        "tiles": args.tiles,
        "colors": args.colors,
        "modColors": args.mod_colors,
        "specClasses": len(specs),
        "pairs": entries,
    }
    mode = " (mod colors)" if args.mod_colors else ""
    lines = [
        f"{args.tiles} tiles, {args.colors} colors{mode}: "
        f"{len(specs)} spec classes, {len(catalog)} transplantable "
        f"noncongruent pairs"
    ]
    for idx, entry in enumerate(catalog.entries, start=1):
        trans = "2-transitive" if entry.two_transitive else "not 2-transitive"
        lines.append(
            f"pair {idx}: group order {entry.group_order}, {trans}, "
            f"intertwiner dimension {entry.result.intertwiner_dimension}"
        )
    if args.catalog:
        with open(args.catalog, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(entries, indent=2, sort_keys=True) + "\n")
        lines.append(f"wrote {args.catalog}")
    return CommandResult(0, "\n".join(lines), record, args.json)


# ---------------------------------------------------------------------------
# Parser assembly and dispatch
# ---------------------------------------------------------------------------


def _version_text() -> str:
    lines = [f"drum {__version__}", "fixtures:"]
    for name, digest in sorted(fixture_digests().items()):
        lines.append(f"  {name}  sha256:{digest}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true",
        help="emit a machine-readable record instead of text",
    )
    common.add_argument(
        "--threads", type=_positive_int_arg, default=None,
        help="cap numerical worker threads",
    )

    parser = _Parser(
        prog="drum",
        description="Construct, verify, and search transplantable "
        "isospectral planar drums.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=_version_text())
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser(
        "validate", parents=[common],
        help="check a tiling file and report its structure",
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser(
        "table", parents=[common],
        help="print the 2-transitive group table behind the side-count bound",
    )
    p.add_argument("--q", type=_positive_int_arg, default=None,
                   help="evaluate the parameterized family rows at q")
    p.add_argument("--csv", action="store_true", help="emit CSV")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser(
        "classify", parents=[common],
        help="decide transplantability of two tiling files",
    )
    p.add_argument("file_a", metavar="fileA")
    p.add_argument("file_b", metavar="fileB")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser(
        "unfold", parents=[common],
        help="unfold a tree tiling into a planar polygon",
    )
    p.add_argument("file")
    p.add_argument("--tile", default=None,
                   help="base tile: default | regular | file:<polygon>")
    p.add_argument("--root", type=int, default=0,
                   help="tile receiving the identity placement")
    p.add_argument("--svg", default=None, metavar="OUT",
                   help="write the domain as an SVG file")
    p.add_argument("--plot", default=None, metavar="OUT",
                   help="render the domain with matplotlib")
    p.set_defaults(handler=_cmd_unfold)

    p = sub.add_parser(
        "spectrum", parents=[common],
        help="lowest Dirichlet eigenvalues of a polygon file",
    )
    p.add_argument("file")
    p.add_argument("--h", type=_fraction_arg, default=None,
                   help="grid spacing, e.g. 1/64")
    p.add_argument("--k", type=_positive_int_arg, default=None,
                   help="number of eigenvalues")
    p.add_argument("--csv", default=None, metavar="OUT",
                   help="write index,eigenvalue rows to a CSV file")
    p.add_argument("--plot", default=None, metavar="OUT",
                   help="plot the spectrum with matplotlib")
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser(
        "compare", parents=[common],
        help="unfold two tilings and compare their spectra",
    )
    p.add_argument("file_a", metavar="fileA")
    p.add_argument("file_b", metavar="fileB")
    p.add_argument("--h", type=_fraction_arg, default=None,
                   help="grid spacing, e.g. 1/32")
    p.add_argument("--k", type=_positive_int_arg, default=None,
                   help="number of eigenvalues")
    p.add_argument("--rel-tol", type=_fraction_arg, default=None,
                   help="relative tolerance for PASS (default 1/100)")
    p.add_argument("--tile", default=None,
                   help="base tile used for both domains")
    p.add_argument("--plot", default=None, metavar="OUT",
                   help="plot both spectra and their differences")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser(
        "search", parents=[common],
        help="enumerate tree tilings and catalog transplantable pairs",
    )
    p.add_argument("--tiles", type=_positive_int_arg, required=True)
    p.add_argument("--colors", type=_positive_int_arg, required=True)
    p.add_argument("--mod-colors", action="store_true",
                   help="identify tilings differing by a color permutation")
    p.add_argument("--catalog", default=None, metavar="OUT",
                   help="write the pair catalog as a JSON array")
    p.add_argument("--budget", type=_positive_int_arg, default=None,
                   help="enumeration work budget")
    p.set_defaults(handler=_cmd_search)

    return parser


def run(argv=None) -> CommandResult:
    """Parse ``argv`` and execute; never raises on expected error paths."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        return CommandResult(2, f"error: {err}")
    except SystemExit as exc:
        # argparse prints help/version itself before exiting
        return CommandResult(int(exc.code or 0), "")
    emit_json = getattr(args, "json", False)
    try:
        _apply_thread_cap(
            _setting(args.threads, "DRUM_THREADS", _positive_int_arg, None)
        )
        return args.handler(args)
    except _CliError as err:
        record = {"schema": SCHEMA_VERSION, "error": str(err)}
        return CommandResult(err.code, f"error: {err}", record, emit_json)
    except BudgetExceededError as err:
        record = {"schema": SCHEMA_VERSION, "error": str(err)}
        return CommandResult(3, f"error: {err}", record, emit_json)
    except (GroupTooLargeError,) as err:
        record = {"schema": SCHEMA_VERSION, "error": str(err)}
        return CommandResult(3, f"error: {err}", record, emit_json)
    except (TilingParseError, TilingValidationError, UnfoldError) as err:
        record = {"schema": SCHEMA_VERSION, "error": str(err)}
        return CommandResult(2, f"error: {err}", record, emit_json)
    except OSError as err:
        record = {"schema": SCHEMA_VERSION, "error": str(err)}
        return CommandResult(2, f"error: {err}", record, emit_json)
    except ValueError as err:
        record = {"schema": SCHEMA_VERSION, "error": str(err)}
        return CommandResult(2, f"error: {err}", record, emit_json)


def main(argv=None) -> int:
    result = run(argv)
    if result.output:
        stream = sys.stderr if result.exit_code >= 2 else sys.stdout
        print(result.output, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
