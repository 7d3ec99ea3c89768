"""Command-line front end.

Exit codes: 0 success, 1 I/O or unreadable index, 2 build error or invalid
parameters, 3 malformed pattern input, 4 extraction window out of range.
Metrics go to stdout as tab-separated values, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import statistics
import struct
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import corpora
from .builder import BuildOptions, build
from .errors import EmptyPattern, FormatError, GCISError, OutOfRange
from .grammar import Grammar
from .index_file import ENCODINGS, convert, load, save
from .locate import LocateReport, locate

log = logging.getLogger("gcis_index")

EXIT_IO = 1
EXIT_BUILD = 2
EXIT_PATTERN = 3
EXIT_RANGE = 4


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str) -> Grammar:
    try:
        return load(path)
    except OSError as e:
        raise CLIError(EXIT_IO, f"cannot read index {path}: {e.strerror or e}") from e
    except FormatError as e:
        raise CLIError(EXIT_IO, f"cannot load index {path}: {type(e).__name__}: {e}") from e


def _stats_line(G: Grammar) -> str:
    s = G.stats()
    return f"{s.table_row()}\t{s.heights}\t{s.text_len}"


def read_patterns(path: str, binary: bool) -> list[bytes]:
    """Newline-delimited patterns, or u32-length-prefixed records with ``binary``."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CLIError(EXIT_IO, f"cannot read pattern file {path}: {e.strerror or e}") from e
    if not binary:
        lines = data.split(b"\n")
        if lines and lines[-1] == b"":
            lines.pop()
        if any(not p for p in lines):
            raise CLIError(EXIT_PATTERN, f"{path}: empty pattern line")
        return lines
    out = []
    pos = 0
    while pos < len(data):
        if pos + 4 > len(data):
            raise CLIError(EXIT_PATTERN, f"{path}: truncated record header at byte {pos}")
        (m,) = struct.unpack_from("<I", data, pos)
        pos += 4
        if m == 0 or pos + m > len(data):
            raise CLIError(EXIT_PATTERN, f"{path}: bad record of length {m} at byte {pos - 4}")
        out.append(data[pos:pos + m])
        pos += m
    return out


def cmd_build(args) -> int:
    try:
        text = Path(args.input).read_bytes()
    except OSError as e:
        raise CLIError(EXIT_IO, f"cannot read {args.input}: {e.strerror or e}") from e
    opts = BuildOptions(abort_heuristic=not args.no_abort_heuristic, max_height=args.max_height,
                        end_sentinel=args.end_sentinel)
    t0 = time.perf_counter()
    try:
        G = build(text, opts)
        store = convert(G.store, args.encoding)
    except GCISError as e:
        raise CLIError(EXIT_BUILD, f"build failed: {type(e).__name__}: {e}") from e
    G = Grammar(store)
    try:
        size = save(G, args.output)
    except OSError as e:
        raise CLIError(EXIT_IO, f"cannot write {args.output}: {e.strerror or e}") from e
    log.info("built %s index of %d bytes in %.2fs (%s), %d bytes on disk", args.encoding,
             len(text), time.perf_counter() - t0, store.info.stop_reason, size)
    print(_stats_line(G))
    return 0


def _patterns(args) -> list[bytes]:
    if args.pattern is not None:
        if not args.pattern:
            raise CLIError(EXIT_PATTERN, "empty pattern")
        # argv bytes come back unchanged through the filesystem encoding
        return [os.fsencode(args.pattern)]
    return read_patterns(args.patterns, args.binary)


def _run_queries(G: Grammar, patterns: list[bytes], threads: int,
                 fast_path: bool) -> list[tuple[LocateReport, float]]:
    def one(p: bytes) -> tuple[LocateReport, float]:
        t = time.perf_counter()
        r = locate(p, G, prefix_fast_path=fast_path)
        return r, time.perf_counter() - t

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, patterns))
    return [one(p) for p in patterns]


def cmd_locate(args) -> int:
    patterns = _patterns(args)
    G = _load(args.index)
    out = sys.stdout
    for r, dt in _run_queries(G, patterns, args.threads, args.prefix_fast_path):
        line = str(r.occ) if args.count_only else " ".join(map(str, r.positions))
        if args.report_metrics:
            line += f"\t{r.occ}\t{r.occ_c}\t{r.visited_nodes}\t{dt * 1e6:.1f}"
        out.write(line + "\n")
    return 0


def cmd_count(args) -> int:
    args.count_only = True
    return cmd_locate(args)


def cmd_extract(args) -> int:
    G = _load(args.index)
    try:
        data = G.extract(G.start, args.pos, args.len)
    except OutOfRange as e:
        raise CLIError(EXIT_RANGE, str(e)) from e
    sys.stdout.buffer.write(data)
    sys.stdout.flush()
    return 0


def cmd_stats(args) -> int:
    G = _load(args.index)
    print(_stats_line(G))
    info = G.store.info
    log.info("encoding %s, %d bytes in memory, stop reason %s, heuristic %s",
             G.store.encoding, G.store.size_in_bytes(), info.stop_reason,
             "on" if info.abort_heuristic else "off")
    return 0


def cmd_gen(args) -> int:
    try:
        text = corpora.generate(args.family, args.order, args.length, args.sigma, args.seed)
    except ValueError as e:
        raise CLIError(EXIT_BUILD, str(e)) from e
    try:
        Path(args.output).write_bytes(text)
    except OSError as e:
        raise CLIError(EXIT_IO, f"cannot write {args.output}: {e.strerror or e}") from e
    log.info("wrote %d bytes to %s", len(text), args.output)
    return 0


def sample_patterns(G: Grammar, length: int, queries: int, rng: np.random.Generator) -> list[bytes]:
    """``queries`` substrings of the text of the given length at random positions."""
    n = G.text_len
    if length > n:
        return []
    starts = rng.integers(1, n - length + 2, size=queries)
    return [G.extract(G.start, int(j), length) for j in starts]


def cmd_bench(args) -> int:
    G = _load(args.index)
    try:
        lengths = [int(x) for x in args.pattern_lengths.split(",") if x]
    except ValueError as e:
        raise CLIError(EXIT_BUILD, f"bad --pattern-lengths: {e}") from e
    if not lengths or min(lengths) < 1 or args.queries < 1:
        raise CLIError(EXIT_BUILD, "pattern lengths and --queries must be positive")
    rng = np.random.default_rng(args.seed)
    print("length\tqueries\tmean_us\tmedian_us\tmean_occ\tmean_occ_c\tmean_visited\tmean_tau_p")
    times, visited = [], []
    for m in lengths:
        patterns = sample_patterns(G, m, args.queries, rng)
        if not patterns:
            log.warning("pattern length %d exceeds the text length %d", m, G.text_len)
            continue
        runs = _run_queries(G, patterns, 1, args.prefix_fast_path)
        us = [dt * 1e6 for _, dt in runs]
        reps = [r for r, _ in runs]
        times += us
        visited += [r.visited_nodes for r in reps]
        print(f"{m}\t{len(reps)}\t{statistics.fmean(us):.1f}\t{statistics.median(us):.1f}\t"
              f"{statistics.fmean(r.occ for r in reps):.2f}\t"
              f"{statistics.fmean(r.occ_c for r in reps):.2f}\t"
              f"{statistics.fmean(r.visited_nodes for r in reps):.2f}\t"
              f"{statistics.fmean(r.tau_p for r in reps):.2f}")
    if len(times) > 2 and len(set(visited)) > 1:
        r = float(np.corrcoef(times, visited)[0, 1])
        log.info("correlation of query time with visited nodes: %.3f", r)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gcis-index", description="GCIS grammar-compressed self-index")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="build an index file from a text file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--encoding", choices=ENCODINGS, default="nep")
    p.add_argument("--no-abort-heuristic", action="store_true",
                   help="keep factorizing even when a level would grow the grammar")
    p.add_argument("--max-height", type=int, default=None)
    p.add_argument("--end-sentinel", action="store_true",
                   help="type level strings as if a smallest symbol followed them")
    p.set_defaults(func=cmd_build)

    for name, func in (("locate", cmd_locate), ("count", cmd_count)):
        p = sub.add_parser(name, help=f"{name} pattern occurrences")
        p.add_argument("index")
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--pattern")
        src.add_argument("--patterns", help="file of patterns, one per line")
        p.add_argument("--binary", action="store_true",
                       help="pattern file holds u32 length + bytes records")
        if name == "locate":
            p.add_argument("--count-only", action="store_true")
        p.add_argument("--report-metrics", action="store_true",
                       help="append occ, occ_C, visited nodes and microseconds")
        p.add_argument("--prefix-fast-path", action="store_true")
        p.add_argument("--threads", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("extract", help="write a text substring to stdout")
    p.add_argument("index")
    p.add_argument("--pos", type=int, required=True, help="1-based start")
    p.add_argument("--len", type=int, required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="print |Gamma|, g, start length, heights, n")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gen", help="write a synthetic corpus")
    p.add_argument("--family", choices=corpora.FAMILIES, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--sigma", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time locate on patterns sampled from the text")
    p.add_argument("index")
    p.add_argument("--pattern-lengths", default="10,20,50,100")
    p.add_argument("--queries", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prefix-fast-path", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except EmptyPattern as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PATTERN


if __name__ == "__main__":
    sys.exit(main())
