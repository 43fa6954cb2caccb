"""Command-line interface: ``cohomrips run`` and ``cohomrips verify``."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import CapacityError, ResourceRefusal
from .ingest import FORMATS, ParseError, enumerate_edges, read_input
from .oracle import (
    DEFAULT_CAP, drop_zero, oracle_enumerate, oracle_reduce_cohomology, oracle_reduce_column,
    oracle_reduce_row,
)
from .pipeline import Options, assemble_output, compute_diagrams

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3

BENCHMARK_LABELS = (
    ("filtration", "Creating F1"),
    ("neighborhoods", "Creating N^v, E^v"),
    ("H0", "H0"),
    ("H1", "H1*"),
    ("H2", "H2*"),
)


def format_value(x: float) -> str:
    """Shortest round-trip decimal; integral values lose their ``.0``."""
    if math.isinf(x):
        return "inf"
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def format_pairs(pairs) -> str:
    return "".join(f"{format_value(b)} {format_value(d)}\n" for b, d in pairs)


def read_diagram_file(path) -> list[tuple[float, float]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                b, d = line.split()
                out.append((float(b), float(d)))
    return out


def benchmark_report(timings: dict) -> str:
    return "".join(f"{label}: {timings.get(key, 0.0):.3f}\n" for key, label in BENCHMARK_LABELS)


def _threshold(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("threshold must be positive or inf")
    return x


def _positive(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return x


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="cloud")
    p.add_argument("--threshold", type=_threshold, default=math.inf,
                   help="largest edge length kept (default: inf)")
    p.add_argument("--maxdim", type=int, choices=(0, 1, 2), default=2)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--batch-dim2", type=_positive, default=100,
                   help="batch size while reducing triangles")
    p.add_argument("--batch-h0", type=_positive, default=1000,
                   help="batch size while reducing edges")
    p.add_argument("--engine", choices=("fastcol", "row"), default="fastcol")
    p.add_argument("--mode", choices=("sparse", "dense"), default="sparse",
                   help="edge lookup by binary search or by an n x n table")
    p.add_argument("--keep-zero", action="store_true", help="keep pairs with birth = death")
    p.add_argument("--no-clearing", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohomrips",
        description="Vietoris-Rips persistence diagrams in dimensions 0-2.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute diagrams and write them to files")
    run.add_argument("--input", required=True)
    run.add_argument("--output", help="output prefix (default: input path without suffix)")
    run.add_argument("--benchmark", action="store_true", help="print phase timings")
    _add_common(run)

    ver = sub.add_parser("verify", help="compare against brute-force reductions")
    src = ver.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--random-points", type=_positive, metavar="N")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--ambient-dim", type=_positive, default=3)
    ver.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    ver.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    _add_common(ver)
    return parser


def _options(args) -> Options:
    return Options(maxdim=args.maxdim, clearing=not args.no_clearing, engine=args.engine,
                   threads=args.threads, batch_dim1=args.batch_h0, batch_dim2=args.batch_dim2,
                   keep_zero=args.keep_zero, mode=args.mode)


def cmd_run(args) -> int:
    source = read_input(args.input, args.format)
    result = compute_diagrams(source, args.threshold, _options(args))
    out = assemble_output(result.diagrams, args.keep_zero)
    prefix = args.output or str(Path(args.input).with_suffix(""))
    for dim in sorted(out):
        Path(f"{prefix}_H{dim}.txt").write_text(format_pairs(out[dim]), encoding="utf-8")
    if args.benchmark:
        sys.stdout.write(benchmark_report(result.timings))
    return EXIT_OK


def _diff(name: str, got: dict, want: dict) -> list[str]:
    from collections import Counter

    lines = []
    for dim in sorted(set(got) | set(want)):
        g, w = Counter(got.get(dim, [])), Counter(want.get(dim, []))
        for p in sorted((g - w).elements()):
            lines.append(f"{name} H{dim}: pipeline has extra {format_value(p[0])} {format_value(p[1])}")
        for p in sorted((w - g).elements()):
            lines.append(f"{name} H{dim}: pipeline misses {format_value(p[0])} {format_value(p[1])}")
    return lines


def cmd_verify(args) -> int:
    if args.random_points:
        rng = np.random.default_rng(args.seed)
        source = rng.random((args.random_points, args.ambient_dim))
    else:
        source = read_input(args.input, args.format)
    opts = _options(args)
    D = oracle_enumerate(enumerate_edges(source, args.threshold), cap=args.cap)
    result = compute_diagrams(source, args.threshold, opts)
    got = assemble_output(result.diagrams, opts.keep_zero)
    if args.inject_fault:
        # negative control: a duplicated H0 pair must be reported
        got[0] = got[0] + got[0][:1]
    dims = range(opts.maxdim + 1)
    problems = []
    for name, fn in (("column", oracle_reduce_column), ("row", oracle_reduce_row),
                     ("cohomology", oracle_reduce_cohomology)):
        want = fn(D)
        if not opts.keep_zero:
            want = drop_zero(want)
        want = assemble_output({d: want[d] for d in dims}, keep_zero=True)
        problems += _diff(name, {d: got.get(d, []) for d in dims}, want)
    if problems:
        sys.stdout.write("\n".join(problems) + "\n")
        return EXIT_MISMATCH
    sys.stdout.write(f"ok: {len(D)} simplices, diagrams match in dimensions 0-{opts.maxdim}\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_verify(args)
    except ParseError as exc:
        print(f"cohomrips: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceRefusal, CapacityError) as exc:
        print(f"cohomrips: refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"cohomrips: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
