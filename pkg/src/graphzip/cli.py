"""Command-line interface.

Exit codes: 0 success, 1 parse/profile/config failure, 2 I/O failure,
3 corrupt frame, 4 unsupported frame version. Results go to standard output
as stable ``key=value`` lines; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import Optional, Sequence

import graphzip
from graphzip.codecs import registry
from graphzip.errors import (
    ConfigError,
    CsvError,
    FrameError,
    GraphzipError,
    TrainingError,
    UnsupportedVersionError,
)
from graphzip.format import DecodeLimits, inspect_frame
from graphzip.graphs.config import CONFIG_SUFFIX, CompressorConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CORRUPT = 3
EXIT_VERSION = 4

MAX_OUTPUT_ENV = "GRAPHZIP_MAX_OUTPUT"


def _fail(code: int, message: str) -> int:
    print(f"graphzip: {message}", file=sys.stderr)
    return code


def _emit(rows: Sequence[tuple[str, object]], pretty: bool) -> None:
    """Print result rows: stable ``key=value`` lines, or an aligned table."""
    if not rows:
        return
    if pretty:
        width = max(len(key) for key, _ in rows)
        for key, value in rows:
            print(f"{key.ljust(width)}  {value}")
    else:
        for key, value in rows:
            print(f"{key}={value}")


def _read_file(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write_file(path: str, data: bytes) -> None:
    """Write via a sibling temp file + rename so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".graphzip-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _decode_limits() -> DecodeLimits:
    env = os.environ.get(MAX_OUTPUT_ENV)
    if not env:
        return DecodeLimits()
    try:
        cap = int(env)
    except ValueError:
        raise ConfigError(f"{MAX_OUTPUT_ENV} must be an integer, got {env!r}")
    if cap <= 0:
        raise ConfigError(f"{MAX_OUTPUT_ENV} must be positive, got {cap}")
    return DecodeLimits(max_total_stream_bytes=cap)


def _load_config(args: argparse.Namespace) -> CompressorConfig:
    if args.compressor is not None:
        try:
            return CompressorConfig.load(args.compressor)
        except OSError as exc:
            raise _IoError(f"cannot read compressor {args.compressor!r}: {exc}")
    return CompressorConfig(profile=args.profile)


class _IoError(Exception):
    """Internal marker: the wrapped message should exit with EXIT_IO."""


def cmd_compress(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args)
    except _IoError as exc:
        return _fail(EXIT_IO, str(exc))
    except GraphzipError as exc:
        return _fail(EXIT_USAGE, str(exc))

    try:
        data = _read_file(args.input)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read input {args.input!r}: {exc}")

    try:
        frame = graphzip.compress(data, config, checksum=args.checksum)
    except CsvError as exc:
        if args.compressor is None:
            # The profile was asked for explicitly; a non-conforming file is
            # the user's problem to see, not to paper over.
            return _fail(EXIT_USAGE, f"csv profile cannot parse {args.input!r}: {exc}")
        print(
            f"graphzip: warning: {exc}; falling back to the raw profile",
            file=sys.stderr,
        )
        try:
            frame = graphzip.compress(
                data, CompressorConfig(profile="raw"), checksum=args.checksum
            )
        except GraphzipError as inner:
            return _fail(EXIT_USAGE, str(inner))
    except GraphzipError as exc:
        return _fail(EXIT_USAGE, str(exc))

    try:
        _write_file(args.output, frame)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write output {args.output!r}: {exc}")

    ratio = len(data) / len(frame) if frame else 0.0
    _emit(
        [
            ("original_size", len(data)),
            ("compressed_size", len(frame)),
            ("ratio", f"{ratio:.2f}"),
        ],
        args.pretty,
    )
    return EXIT_OK


def cmd_decompress(args: argparse.Namespace) -> int:
    try:
        limits = _decode_limits()
    except ConfigError as exc:
        return _fail(EXIT_USAGE, str(exc))
    try:
        frame = _read_file(args.input)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read input {args.input!r}: {exc}")

    try:
        data = graphzip.decompress(frame, limits=limits)
    except UnsupportedVersionError as exc:
        return _fail(EXIT_VERSION, f"unsupported frame version: {exc}")
    except GraphzipError as exc:
        return _fail(EXIT_CORRUPT, f"corrupt frame: {exc}")

    try:
        _write_file(args.output, data)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write output {args.output!r}: {exc}")

    _emit([("decompressed_size", len(data))], args.pretty)
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    from graphzip.trainer import CandidateSet, SampleCorpus, train_detailed

    try:
        corpus = SampleCorpus.from_dir(args.samples)
    except TrainingError as exc:
        return _fail(EXIT_USAGE, str(exc))

    seed = CompressorConfig(profile=args.profile)
    try:
        candidates = CandidateSet(depth=args.depth)
        result = train_detailed(seed, corpus, candidates)
    except GraphzipError as exc:
        return _fail(EXIT_USAGE, str(exc))

    try:
        result.config.save(args.output)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write config {args.output!r}: {exc}")

    if args.pretty:
        width = max(len(name) for name, _, _ in result.report.sample_sizes)
        print(f"{'sample'.ljust(width)}  {'seed':>10}  {'trained':>10}")
        for name, seed_size, trained_size in result.report.sample_sizes:
            print(f"{name.ljust(width)}  {seed_size:>10}  {trained_size:>10}")
        print(f"{'total'.ljust(width)}  {result.report.seed_total:>10}  "
              f"{result.report.trained_total:>10}")
        print(f"improved: {'yes' if result.improved else 'no'}")
    else:
        for name, seed_size, trained_size in result.report.sample_sizes:
            print(f"sample={name} seed_size={seed_size} trained_size={trained_size}")
        print(f"seed_total={result.report.seed_total}")
        print(f"trained_total={result.report.trained_total}")
        print(f"improved={'yes' if result.improved else 'no'}")
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    try:
        frame = _read_file(args.input)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read input {args.input!r}: {exc}")

    try:
        info = inspect_frame(frame)
    except UnsupportedVersionError as exc:
        return _fail(EXIT_VERSION, f"unsupported frame version: {exc}")
    except GraphzipError as exc:
        return _fail(EXIT_CORRUPT, f"malformed frame: {exc}")

    _emit(
        [
            ("frame_bytes", info.frame_bytes),
            ("version", info.version),
            ("checksum", "yes" if info.checksum else "no"),
            ("roots", ",".join(str(t) for t in info.root_types)),
            ("nodes", info.node_count),
        ],
        args.pretty,
    )
    for node in info.nodes:
        inputs = ",".join(str(i) for i in node.inputs)
        outputs = ",".join(str(o) for o in node.outputs)
        if args.pretty:
            print(f"  node {node.wire_id:>3} {node.name:<20} "
                  f"header {node.header_bytes}B  [{inputs}] -> [{outputs}]")
        else:
            print(
                f"node wire_id={node.wire_id} name={node.name} "
                f"header_bytes={node.header_bytes} inputs=[{inputs}] outputs=[{outputs}]"
            )
    _emit(
        [("leaves", info.leaf_count), ("leaf_bytes", info.leaf_bytes)],
        args.pretty,
    )
    return EXIT_OK


def cmd_list_codecs(args: argparse.Namespace) -> int:
    for spec in registry:
        ports = " ".join(str(p) for p in spec.inputs)
        variadic = "..." if spec.variadic else ""
        if args.pretty:
            print(f"{spec.wire_id:>3}  {spec.name:<20} {ports}{variadic:<4} {spec.summary}")
        else:
            print(
                f"wire_id={spec.wire_id} name={spec.name} "
                f"inputs={ports}{variadic} summary={spec.summary!r}"
            )
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(EXIT_USAGE, message))


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="graphzip",
        description="Graph-structured lossless compression with self-describing frames.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pretty(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--pretty", action="store_true", help="aligned tables instead of key=value lines"
        )

    p_comp = sub.add_parser("compress", help="compress a file into a frame")
    source = p_comp.add_mutually_exclusive_group(required=True)
    source.add_argument("--profile", help="ingestion profile (raw, csv, numeric-le:8, ...)")
    source.add_argument(
        "--compressor", help=f"trained compressor config ({CONFIG_SUFFIX} file)"
    )
    p_comp.add_argument("--checksum", action="store_true", help="append a content checksum")
    p_comp.add_argument("-o", "--output", required=True, help="output frame path")
    p_comp.add_argument("input", help="file to compress")
    add_pretty(p_comp)
    p_comp.set_defaults(fn=cmd_compress)

    p_dec = sub.add_parser(
        "decompress", help="decode a frame (no config needed; frames are self-describing)"
    )
    p_dec.add_argument("-o", "--output", required=True, help="output file path")
    p_dec.add_argument("input", help="frame to decode")
    add_pretty(p_dec)
    p_dec.set_defaults(fn=cmd_decompress)

    p_train = sub.add_parser("train", help="train a compressor config over a sample directory")
    p_train.add_argument("--profile", required=True, help="seed ingestion profile")
    p_train.add_argument("--samples", required=True, help="directory of sample files")
    p_train.add_argument("--depth", type=int, default=3, help="max pipeline depth (default 3)")
    p_train.add_argument("-o", "--output", required=True, help=f"output config path ({CONFIG_SUFFIX})")
    add_pretty(p_train)
    p_train.set_defaults(fn=cmd_train)

    p_ins = sub.add_parser("inspect", help="describe a frame without decoding it")
    p_ins.add_argument("input", help="frame to inspect")
    add_pretty(p_ins)
    p_ins.set_defaults(fn=cmd_inspect)

    p_list = sub.add_parser("list-codecs", help="list the codecs this build provides")
    add_pretty(p_list)
    p_list.set_defaults(fn=cmd_list_codecs)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
