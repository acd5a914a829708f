"""Command-line interface.

Exit codes: 0 success, 1 failed verification (or nothing found), 2 usage
error, 3 window too small.  Errors are reported on stderr as a single
``error: <reason>: <message>`` line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import warnings
from typing import Callable, Optional

from . import blocks as blk
from . import engine, probes, regularity, verify
from .errors import (
    CorruptCache,
    EqualityViolation,
    InsufficientWindow,
    KolakoskiError,
    NotFoundWithin,
    StructureViolation,
    WindowTooLarge,
)
from .subrows import SubrowRef

log = logging.getLogger("kolakoski")

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_WINDOW = 0, 1, 2, 3
DEFAULT_MAX_WINDOW = 10**7


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text}")
    if not values or min(values) < 0:
        raise argparse.ArgumentTypeError(f"expected non-negative integers, got {text}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", default=os.environ.get("KOLA_CACHE"), help="window cache file (default: $KOLA_CACHE)")
    common.add_argument(
        "--max-window",
        type=_positive,
        default=DEFAULT_MAX_WINDOW,
        help="largest window generated on the fly (default: %(default)s)",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="kolakoski", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="print or cache a prefix of S")
    p.add_argument("--length", type=_positive, required=True)
    p.add_argument("--out", help="write a cache file instead of printing digits")
    p.add_argument("--format", choices=("text", "csv"), default="text")

    p = sub.add_parser("classify", parents=[common], help="parity history of a prefix or subrow")
    p.add_argument("--prefix-length", type=_positive)
    p.add_argument("--start", type=_positive)
    p.add_argument("--end", type=_positive)
    p.add_argument("--depth", type=_non_negative, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("search", parents=[common], help="shortest k-regular or k-minimal prefix")
    p.add_argument("kind", choices=("shortest-regular", "minimal"))
    p.add_argument("--k", type=_non_negative, required=True)
    p.add_argument("--limit", type=_positive, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("blocks", parents=[common], help="blocks generated by a prefix")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--prefix", help="the generating prefix as digits, e.g. 12")
    g.add_argument("--prefix-length", type=_positive)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("decompose", parents=[common], help="cover S by k-regular subrows")
    p.add_argument("--level", type=_non_negative, required=True)
    p.add_argument("--window", type=_positive, required=True)
    p.add_argument("--offset", type=_non_negative, default=0)
    p.add_argument("--groups", type=_non_negative, default=20, help="number of groups listed (default: %(default)s)")

    p = sub.add_parser("recurrent", parents=[common], help="coinciding words from a decomposition")
    p.add_argument("--level", type=_non_negative, required=True)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--offset", type=_non_negative, default=0)

    p = sub.add_parser("density", parents=[common], help="block versus chunk frequencies for k-minimal prefixes")
    p.add_argument("--minimal-k", type=_int_list, required=True)
    p.add_argument("--blocks", type=_positive, required=True)
    p.add_argument("--chunk", type=_positive, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("probe", parents=[common], help="report-only probes")
    probe_sub = p.add_subparsers(dest="probe", required=True)
    q = probe_sub.add_parser("infty", parents=[common], help="largest normality order among prefixes")
    q.add_argument("--max-length", type=_positive, required=True)
    q.add_argument("--cap", type=_non_negative, required=True)
    q = probe_sub.add_parser("collisions", parents=[common], help="subrows sharing a parity history")
    q.add_argument("--limit", type=_positive, required=True)
    q.add_argument("--max-length", type=_positive, required=True)
    q.add_argument("--depth", type=_non_negative, required=True)
    q.add_argument("--rows", type=_non_negative, default=50)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=("all", "lemmas", "sequence", "structure"), default="all")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


# ---------------------------------------------------------------------------
# window handling
# ---------------------------------------------------------------------------

def _load(args) -> Optional[engine.SequenceWindow]:
    if args.cache and os.path.exists(args.cache):
        return engine.load_cache(args.cache)
    return None


def with_window(args, fn: Callable, initial: int):
    """Run ``fn(window)``, growing the window on InsufficientWindow up to --max-window."""
    win = _load(args)
    size = initial
    if win is not None:
        try:
            return fn(win)
        except InsufficientWindow as exc:
            size = max(size, exc.required)
    while True:
        size = min(max(size, 64), args.max_window)
        (log.warning if size > 10**6 else log.info)("no usable cache; generating a window of %d elements", size)
        win = engine.generate(size)
        try:
            return fn(win)
        except InsufficientWindow as exc:
            if size >= args.max_window:
                raise InsufficientWindow(max(exc.required, size + 1), args.max_window, exc.what) from exc
            size = max(2 * size, exc.required + exc.required // 4)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> tuple[int, str]:
    win = engine.generate(args.length)
    if args.out:
        engine.save_cache(win, args.out)
        return EXIT_OK, f"wrote {win.length} elements to {args.out}"
    if args.format == "csv":
        return EXIT_OK, _csv(("index", "digit"), enumerate(win.digits.tolist(), start=1))
    return EXIT_OK, str(win.prefix(win.length))


def cmd_classify(args) -> tuple[int, str]:
    if args.prefix_length is not None:
        if args.start is not None or args.end is not None:
            raise UsageError("use either --prefix-length or --start/--end")
        r = SubrowRef(1, args.prefix_length)
    elif args.start is not None and args.end is not None:
        if args.end < args.start:
            raise UsageError("--end must not be smaller than --start")
        r = SubrowRef(args.start, args.end)
    else:
        raise UsageError("classify needs --prefix-length or both --start and --end")
    rep = with_window(args, lambda w: regularity.classify(w, r, args.depth), r.end)
    if args.format == "text":
        bits = "".join(map(str, rep.history.bits))
        return EXIT_OK, f"{r} history={bits} order={rep.normality_order}"
    return EXIT_OK, _json(rep.as_dict())


def cmd_search(args) -> tuple[int, str]:
    find = (
        regularity.find_shortest_k_regular_prefix if args.kind == "shortest-regular" else regularity.find_k_minimal_prefix
    )
    n = with_window(args, lambda w: find(w, args.k, args.limit), args.limit)
    if args.format == "json":
        return EXIT_OK, _json({"search": args.kind, "k": args.k, "limit": args.limit, "length": n})
    return EXIT_OK, str(n)


def cmd_blocks(args) -> tuple[int, str]:
    def run(win):
        n = blk.prefix_length_of(win, args.prefix) if args.prefix else args.prefix_length
        return blk.block_report(win, blk.blocks(win, n, args.count))

    if args.prefix is not None and (not args.prefix or set(args.prefix) - {"1", "2"}):
        raise UsageError("--prefix must be a word over the digits 1 and 2")
    size = len(args.prefix) if args.prefix else args.prefix_length
    rows = with_window(args, run, size)
    if args.format == "json":
        return EXIT_OK, _json([dict(zip(blk.CSV_COLUMNS, r)) for r in blk.csv_rows(rows)])
    return EXIT_OK, _csv(blk.CSV_COLUMNS, blk.csv_rows(rows))


def _decomposition_dict(win, dec, listed: int) -> dict:
    groups = []
    for i in range(min(listed, len(dec))):
        cert = dec.certificate(i)
        groups.append({"subrow": [cert.subrow.start, cert.subrow.end], "history": list(cert.history.bits)})
    return {**dec.summary(), "window_length": win.length, "listed_groups": groups, "warnings": dec.warnings}


def cmd_decompose(args) -> tuple[int, str]:
    win = _load(args)
    if win is None or win.length < args.window:
        win = engine.generate(args.window)
    elif win.length > args.window:
        win = engine.SequenceWindow(win.digits[: args.window])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", probes.UnresolvedTail)
        dec = probes.cover_decompose(win, args.level, args.offset)
    failures = probes.verify_decomposition(win, dec)
    out = _decomposition_dict(win, dec, args.groups)
    out["certificate_failures"] = failures
    return (EXIT_FAILED if failures else EXIT_OK), _json(out)


def cmd_recurrent(args) -> tuple[int, str]:
    def run(win):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", probes.UnresolvedTail)
            return probes.recurrent_words(win, args.level, args.count, args.offset)

    fam = with_window(args, run, 10**5)
    out = {
        "level": fam.level,
        "offset": args.offset,
        "word": str(fam.word),
        "word_length": len(fam.word),
        "occurrences": [[ref.start, ref.end] for ref, _ in fam.occurrences],
        "decomposition": fam.base.summary(),
    }
    return EXIT_OK, _json(out)


def cmd_density(args) -> tuple[int, str]:
    rep = with_window(args, lambda w: probes.density_probe(w, args.minimal_k, args.blocks, args.chunk), 10**5)
    if args.format == "csv":
        header = ("k", "prefix_length", "block", "block_length", "f_block", "f_chunk", "difference", "difference_decimal")
        rows = [
            (r["k"], r["prefix_length"], r["block"], r["block_length"], "/".join(map(str, r["f_block"])),
             "/".join(map(str, r["f_chunk"])), "/".join(map(str, r["difference"])), r["difference_decimal"])
            for r in rep["rows"]
        ]
        for note in rep["warnings"]:
            print(f"warning: {note}", file=sys.stderr)
        return EXIT_OK, _csv(header, rows)
    return EXIT_OK, _json(rep)


def cmd_probe(args) -> tuple[int, str]:
    if args.probe == "infty":
        rep = with_window(args, lambda w: probes.infty_probe(w, args.max_length, args.cap), args.max_length)
    else:
        rep = with_window(
            args, lambda w: probes.collision_probe(w, args.limit, args.max_length, args.depth, args.rows), args.limit
        )
    return EXIT_OK, _json(rep)


def cmd_verify(args) -> tuple[int, str]:
    results = verify.run_suite(args.suite)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    if args.format == "json":
        body = [
            {"check": r.name, "checked": r.checked, "failures": r.failures, "passed": r.passed} for r in results
        ]
        return code, _json({"suite": args.suite, "checks": body})
    lines = [r.line().split(" time=")[0] for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return code, "\n".join(lines)


COMMANDS = {
    "generate": cmd_generate,
    "classify": cmd_classify,
    "search": cmd_search,
    "blocks": cmd_blocks,
    "decompose": cmd_decompose,
    "recurrent": cmd_recurrent,
    "density": cmd_density,
    "probe": cmd_probe,
    "verify": cmd_verify,
}


def parse(argv=None) -> argparse.Namespace:
    """Parse argv; argparse exits with status 2 on usage errors."""
    return build_parser().parse_args(argv)


def execute(args) -> tuple[int, str]:
    return COMMANDS[args.command](args)


def _error(reason: str, message: str) -> None:
    print(f"error: {reason}: {' '.join(str(message).split())}", file=sys.stderr)


def main(argv=None) -> int:
    args = parse(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        code, output = execute(args)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        _error("usage", exc)
        return EXIT_USAGE
    except (InsufficientWindow, WindowTooLarge) as exc:
        print(f"error: {exc.machine_reason()}", file=sys.stderr)
        return EXIT_WINDOW
    except (EqualityViolation, StructureViolation, NotFoundWithin) as exc:
        _error(exc.reason, exc)
        return EXIT_FAILED
    except CorruptCache as exc:
        _error(exc.reason, exc)
        return EXIT_USAGE
    except (KolakoskiError, ValueError) as exc:
        _error(getattr(exc, "reason", "invalid"), exc)
        return EXIT_USAGE
    if output:
        print(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
