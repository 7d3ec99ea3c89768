"""Query-time trends: mean tau_P against |P| and time against occ_C'."""

import argparse

import numpy as np

from gcis_index import build
from gcis_index.corpora import generate
from gcis_index.locate import locate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="fib")
    ap.add_argument("--length", type=int, default=1_000_000)
    ap.add_argument("--lengths", type=int, nargs="*", default=[10, 30, 100, 300, 1000, 3000])
    ap.add_argument("--queries", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    T = generate(args.family, length=args.length)
    G = build(T)
    rng = np.random.default_rng(args.seed)
    times, visited = [], []
    print("m\tmean_tau_p\tmean_us\tmean_occ\tmean_visited")
    for m in args.lengths:
        if m > len(T):
            break
        rows = []
        for _ in range(args.queries):
            j = int(rng.integers(0, len(T) - m + 1))
            r = locate(T[j:j + m], G)
            us = sum(r.timings.values()) * 1e6
            rows.append((r.tau_p, us, r.occ, r.visited_nodes))
            times.append(us)
            visited.append(r.visited_nodes)
        a = np.mean(rows, axis=0)
        print(f"{m}\t{a[0]:.2f}\t{a[1]:.1f}\t{a[2]:.1f}\t{a[3]:.1f}")
    print(f"\ncorr(time, occ_C') = {np.corrcoef(times, visited)[0, 1]:.3f}")


if __name__ == "__main__":
    main()
