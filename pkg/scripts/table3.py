"""Grammar sizes for the repetitive benchmark texts.

Builds fib41 and tm29 under each construction convention and prints one
row per build, then g against the Fibonacci order.  Takes a few minutes and
about 2 GB of memory for the full-size texts.
"""

import argparse
import time

from gcis_index import BuildOptions, build
from gcis_index.corpora import fibonacci, thue_morse

CONVENTIONS = {
    "heuristic-off": BuildOptions(abort_heuristic=False),
    "heuristic-on": BuildOptions(abort_heuristic=True),
    "heuristic-on+sentinel": BuildOptions(abort_heuristic=True, end_sentinel=True),
    "heuristic-off+sentinel": BuildOptions(abort_heuristic=False, end_sentinel=True),
}


def row(name: str, text: bytes, conv: str) -> None:
    t = time.perf_counter()
    G = build(text, CONVENTIONS[conv])
    s = G.stats()
    print(f"{name}\t{conv}\t{len(text)}\t{s.num_nonterminals}\t{s.total_rhs_size}\t"
          f"{s.start_rhs_len}\t{s.heights}\t{G.store.info.stop_reason}\t{time.perf_counter() - t:.1f}",
          flush=True)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fib", type=int, default=41)
    ap.add_argument("--tm", type=int, default=29)
    ap.add_argument("--growth-from", type=int, default=20)
    ap.add_argument("--conventions", nargs="*", default=list(CONVENTIONS), choices=list(CONVENTIONS))
    args = ap.parse_args()

    print("text\tconvention\tn\t|Gamma|\tg\tstart\ttau\tstop\tseconds")
    for conv in args.conventions:
        row(f"fib{args.fib}", fibonacci(args.fib), conv)
    for conv in args.conventions:
        row(f"tm{args.tm}", thue_morse(args.tm), conv)

    print("\norder\tn\tg")
    for k in range(args.growth_from, args.fib + 1):
        T = fibonacci(k)
        print(f"{k}\t{len(T)}\t{build(T, BuildOptions(abort_heuristic=False)).total_rhs_size}", flush=True)


if __name__ == "__main__":
    main()
