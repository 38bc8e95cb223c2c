"""Command line interface: ``gapfill inpaint | bench | summarize``.

Exit codes: 0 success, 1 usage, 2 I/O, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from . import harness
from .inpaint import OFFSETS, Method, Settings, inpaint
from .methods import ALL_SCHEMES
from .solvers import SolverConfig

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gapfill", description="Sparsity-based audio gap inpainting.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("inpaint", help="fill gaps in a WAV file")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--gap", action="append", default=[], metavar="START:LENGTH",
                   help="1-based start sample and length; repeatable")
    p.add_argument("--gap-file", help="JSON sidecar with the gap list")
    p.add_argument("--model", choices=("syn", "ana"), default="ana")
    p.add_argument("--weights", choices=ALL_SCHEMES, default="none")
    p.add_argument("--offset", choices=OFFSETS, default="half")
    p.add_argument("--gradual-step", type=float, metavar="FRACTION")
    p.add_argument("--tdc", action="store_true")
    p.add_argument("--tdc-gaps", type=int, default=4)
    p.add_argument("--tdc-segments", type=int, default=10)
    p.add_argument("--method", choices=("l1", "janssen"), default="l1")
    p.add_argument("--max-iterations", type=int, default=1000)
    p.add_argument("--tolerance", type=float, default=1e-4)

    b = sub.add_parser("bench", help="run an experiment description")
    b.add_argument("spec")
    b.add_argument("-o", "--output")
    b.add_argument("--workers", type=int)

    s = sub.add_parser("summarize", help="mean SNR per gap length and method")
    s.add_argument("results")
    return parser


def _inpaint(args) -> int:
    gaps = [harness.parse_gap(g) for g in args.gap]
    if args.gap_file:
        try:
            more, _ = harness.load_gap_file(args.gap_file)
        except OSError as exc:
            print(f"gapfill: cannot read gap file: {exc}", file=sys.stderr)
            return EXIT_IO
        gaps.extend(more)
    if not gaps:
        raise UsageError("gapfill inpaint: give at least one --gap or a --gap-file")
    gaps = sorted(set(gaps))
    for g, h in zip(gaps, gaps[1:]):
        if g.overlaps(h):
            raise UsageError(f"gapfill inpaint: gaps {g} and {h} overlap")
    model = "janssen" if args.method == "janssen" else args.model
    method = Method(model, args.weights, args.offset, args.gradual_step, args.tdc,
                    args.tdc_gaps, args.tdc_segments)
    settings = Settings(solver=SolverConfig(tolerance=args.tolerance,
                                            max_iterations=args.max_iterations))
    try:
        signal, rate = harness.read_wav(args.input)
        sample_format = harness.wav_format(args.input)
    except (OSError, ValueError) as exc:
        print(f"gapfill: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    if gaps[-1].end > len(signal):
        raise UsageError(f"gapfill inpaint: gap {gaps[-1]} exceeds the signal "
                         f"({len(signal)} samples)")
    restored, outcomes = inpaint(signal, gaps, method, settings)
    if not np.all(np.isfinite(restored)):
        print("gapfill: the method produced non-finite samples", file=sys.stderr)
        return EXIT_NUMERICAL
    for o in outcomes:
        logging.info("gap %d..%d: %d iterations, converged=%s", o.gap.start, o.gap.end,
                     o.iterations, o.converged)
    try:
        harness.write_wav(args.output, restored, rate, sample_format)
    except OSError as exc:
        print(f"gapfill: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _bench(args) -> int:
    try:
        spec = harness.load_spec(args.spec)
    except OSError as exc:
        print(f"gapfill: cannot read {args.spec}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.workers is not None:
        spec = replace(spec, workers=args.workers)
    output = args.output or spec.output
    if output is None:
        raise UsageError("gapfill bench: no output path (-o or 'output' in the spec)")
    try:
        rows = harness.run_experiment(spec, output)
    except OSError as exc:
        print(f"gapfill: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = sum(r["status"] != "ok" for r in rows)
    print(f"{len(rows)} rows written to {output}" + (f" ({failed} failed)" if failed else ""),
          file=sys.stderr)
    return EXIT_OK


def _summarize(args) -> int:
    try:
        rows = harness.summarize(args.results)
    except OSError as exc:
        print(f"gapfill: cannot read {args.results}: {exc}", file=sys.stderr)
        return EXIT_IO
    except harness.MalformedCsvError as exc:
        print(f"gapfill: {exc}", file=sys.stderr)
        return EXIT_IO
    harness.write_summary(rows, sys.stdout)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        handler = {"inpaint": _inpaint, "bench": _bench, "summarize": _summarize}[args.command]
        return handler(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (FloatingPointError, np.linalg.LinAlgError, harness.NumericalError) as exc:
        print(f"gapfill: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"gapfill: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
