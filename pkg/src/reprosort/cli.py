"""Command-line surface: sort, gen, metrics, and verify subcommands.

Output discipline: every result line on stdout is machine parsable
``key=value`` (plus the bare IDENTICAL / DIFFER verdict of verify);
diagnostics go to stderr.  Nothing on stdout varies between runs except
the wall_time_s line, which is documented as volatile and excluded from
golden comparisons.

Exit codes: 0 success, 1 differing files (verify), 2 format errors,
3 I/O errors, 64 usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import datagen, fileio, metrics
from .core import sort_with_trace
from .errors import FormatError, ReproSortError, UsageError
from .external import ExternalConfig, external_sort
from .order import Width
from .parallel import parallel_sort
from .repro import digest_file

EXIT_OK = 0
EXIT_DIFFER = 1
EXIT_FORMAT = 2
EXIT_IO = 3
EXIT_USAGE = 64

THREADS_ENV_VAR = "REPROSORT_THREADS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_width(parser) -> None:
    parser.add_argument(
        "--width", required=True, choices=["f32", "f64"],
        help="element width of the binary file (mandatory, never sniffed)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reprosort", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_sort = sub.add_parser("sort", help="sort a binary float file")
    p_sort.add_argument("--input", required=True, type=Path)
    p_sort.add_argument("--output", required=True, type=Path)
    _add_width(p_sort)
    p_sort.add_argument(
        "--threads", type=int, default=None,
        help=f"worker threads for the in-memory path (default: ${THREADS_ENV_VAR} "
        "or the hardware thread count)",
    )
    p_sort.add_argument(
        "--memory-budget", type=int, default=None, metavar="BYTES",
        help="spill to disk when the input exceeds this many bytes",
    )
    p_sort.add_argument("--fan-in", type=int, default=16)
    p_sort.add_argument("--spill-dir", type=Path, default=None)

    p_gen = sub.add_parser("gen", help="generate a deterministic corpus")
    p_gen.add_argument("--output", required=True, type=Path)
    _add_width(p_gen)
    p_gen.add_argument("--n", required=True, type=int)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument(
        "--dist", default="uniform",
        help="gaussian | uniform | dup:FRAC | special",
    )

    p_met = sub.add_parser("metrics", help="report disorder metrics for a file")
    p_met.add_argument("--input", required=True, type=Path)
    _add_width(p_met)
    p_met.add_argument(
        "--curve", action="append", choices=sorted(metrics.CURVES_BY_LABEL),
        default=None, help="curved metric to include (repeatable; default unit)",
    )
    p_met.add_argument(
        "--trace", action="store_true",
        help="also run the instrumented sort and print the potential per pass",
    )
    p_met.add_argument(
        "--figures", type=Path, default=None, metavar="DIR",
        help="render figures for the report (and trace) into DIR",
    )

    p_ver = sub.add_parser("verify", help="compare two binary files element-wise")
    p_ver.add_argument("a", type=Path)
    p_ver.add_argument("b", type=Path)
    _add_width(p_ver)

    return parser


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}")
        if value < 1:
            raise UsageError(f"{THREADS_ENV_VAR} must be at least 1")
        return value
    return os.cpu_count() or 1


def _parse_distribution(text: str) -> datagen.Distribution:
    if text == "gaussian":
        return datagen.Gaussian()
    if text == "uniform":
        return datagen.Uniform()
    if text == "special":
        return datagen.SpecialValues()
    if text.startswith("dup:"):
        try:
            fraction = float(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad tie fraction in {text!r}") from None
        return datagen.DuplicateHeavy(fraction)
    raise UsageError(f"unknown distribution {text!r}")


def _cmd_sort(args) -> int:
    width = Width.from_flag(args.width)
    n = fileio.element_count(args.input, width)
    input_bytes = n * width.nbytes
    threads = args.threads if args.threads is not None else _default_threads()
    if threads < 1:
        raise UsageError("--threads must be at least 1")

    started = time.perf_counter()
    if args.memory_budget is not None and input_bytes > args.memory_budget:
        spill = args.spill_dir or args.output.parent / (args.output.name + ".spill")
        cfg = ExternalConfig(
            memory_budget_bytes=args.memory_budget,
            spill_dir=spill,
            fan_in=args.fan_in,
        )
        summary = external_sort(args.input, args.output, width, cfg)
        mode, runs, passes = "external", summary.runs, summary.passes
    else:
        data = fileio.read_array(args.input, width)
        fileio.write_array(args.output, parallel_sort(data, threads))
        mode, runs, passes = "in-memory", 1, 0
    elapsed = time.perf_counter() - started

    digest = digest_file(args.output, width)
    print(f"elements={n}")
    print(f"mode={mode}")
    print(f"runs={runs}")
    print(f"passes={passes}")
    print(f"wall_time_s={elapsed:.6f}")
    print(f"digest={digest}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    width = Width.from_flag(args.width)
    spec = datagen.CorpusSpec(
        distribution=_parse_distribution(args.dist),
        n=args.n,
        seed=args.seed,
        width=width,
    )
    digest = datagen.write_corpus(spec, args.output)
    print(f"elements={spec.n}")
    print(f"digest={digest}")
    print(f"sidecar={args.output}.meta")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    width = Width.from_flag(args.width)
    data = fileio.read_array(args.input, width)
    labels = args.curve or ["unit"]
    curves = tuple(metrics.CURVES_BY_LABEL[label] for label in dict.fromkeys(labels))
    report = metrics.compute_report(data, curves)
    for line in report.lines():
        print(line)

    trace = None
    if args.trace:
        _, trace = sort_with_trace(data)
        print(f"trace.passes={len(trace.passes)}")
        for index, value in trace.passes:
            print(f"trace.{index}={value:.12g}")

    if args.figures is not None:
        from . import plotting  # pulls in matplotlib only when asked

        args.figures.mkdir(parents=True, exist_ok=True)
        written = [plotting.save_report_figure(report, args.figures / "disorder.png")]
        if trace is not None:
            written.append(
                plotting.save_trace_figure(trace, args.figures / "trace.png")
            )
        for path in written:
            print(f"figure={path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    width = Width.from_flag(args.width)
    n_a = fileio.element_count(args.a, width)
    n_b = fileio.element_count(args.b, width)
    if n_a == n_b and digest_file(args.a, width) == digest_file(args.b, width):
        print("IDENTICAL")
        return EXIT_OK
    block = 1 << 18
    with open(args.a, "rb") as fa, open(args.b, "rb") as fb:
        index = 0
        while True:
            xa = fileio.read_block(fa, width, block)
            xb = fileio.read_block(fb, width, block)
            shared = min(xa.size, xb.size)
            if shared:
                mismatch = (xa[:shared] != xb[:shared]).nonzero()[0]
                if mismatch.size:
                    index += int(mismatch[0])
                    break
            if xa.size != xb.size or xa.size == 0:
                index += shared  # first element one file lacks
                break
            index += shared
    print(f"DIFFER at element {index}")
    return EXIT_DIFFER


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sort": _cmd_sort,
        "gen": _cmd_gen,
        "metrics": _cmd_metrics,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ReproSortError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
