"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.  Lines tagged INFO are reported
measurements that carry no pass/fail verdict.
"""

from __future__ import annotations

import math
import os
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gcis_index import BuildOptions, Grammar, build, convert, count, dumps, load, loads, locate, save
from gcis_index.corpora import fibonacci, fibonacci_length, run_rich, thue_morse, worst_case
from gcis_index.locate import choose_core, parse_pattern
from gcis_index.validate import violations

from conftest import ACCEPTANCE_LINES
from oracles import naive_search

FIB41_LENGTH = 267_914_296  # fib41 input size of the benchmark table


def report(ok: bool | None, name: str, detail: str) -> None:
    tag = "INFO" if ok is None else ("PASS" if ok else "FAIL")
    line = f"[{tag}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)


def random_text(rng: np.random.Generator, n: int, sigma: int) -> bytes:
    base = 0 if sigma == 256 else ord("a")
    return (rng.integers(0, sigma, size=n) + base).astype(np.uint8).tobytes()


def random_pattern(rng: np.random.Generator, T: bytes, sigma: int, m: int, from_text: bool) -> bytes:
    if from_text and m <= len(T):
        j = int(rng.integers(0, len(T) - m + 1))
        return T[j:j + m]
    return random_text(rng, m, sigma)


def find_large_file(minimum: int = 10 * 2**20) -> Path | None:
    candidates = [Path(sys.base_prefix) / "lib" / f"python{sys.version_info.major}.{sys.version_info.minor}"
                  / f"config-{sys.version_info.major}.{sys.version_info.minor}-x86_64-linux-gnu"
                  / f"libpython{sys.version_info.major}.{sys.version_info.minor}.a"]
    for root in ("/usr/lib", "/usr/local/lib", "/usr/share"):
        for dirpath, _, files in os.walk(root):
            for f in sorted(files):
                candidates.append(Path(dirpath) / f)
            if len(candidates) > 20000:
                break
    for p in candidates:
        try:
            if p.is_file() and not p.is_symlink() and minimum <= p.stat().st_size <= 64 * 2**20:
                return p
        except OSError:
            continue
    return None


def corpus_grammars() -> list[tuple[str, bytes, BuildOptions]]:
    rng = np.random.default_rng(11)
    texts = [
        ("fib20", fibonacci(20)),
        ("tm15", thue_morse(15)),
        ("runrich10", run_rich(10)),
        ("random4", random_text(rng, 5000, 4)),
        ("random256", random_text(rng, 5000, 256)),
        ("a", b"a"),
    ]
    out = []
    for name, T in texts:
        for opts in (BuildOptions(), BuildOptions(abort_heuristic=False)):
            out.append((name, T, opts))
    return out


def test_oracle_equivalence():
    """1,000 trials per alphabet size, texts up to 10^4, patterns of length
    1..200, half sampled from the text; exact match with a naive scan in
    under a minute."""
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    bad = []
    trials = 0
    for sigma in (2, 4, 256):
        for trial in range(1000):
            n = int(rng.integers(1, 10_001))
            T = random_text(rng, n, sigma)
            G = build(T, BuildOptions(abort_heuristic=trial % 2 == 0))
            m = int(rng.integers(1, 201))
            P = random_pattern(rng, T, sigma, m, from_text=trial % 4 < 2)
            if locate(P, G).positions != naive_search(T, P):
                bad.append((sigma, n, P[:20]))
            trials += 1
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    report(ok, "oracle equivalence",
           f"{trials} trials, {len(bad)} mismatches, {elapsed:.1f}s (limit 60s)")
    assert ok


def test_round_trip():
    rng = np.random.default_rng(7)
    texts = [T for _, T, _ in corpus_grammars()]
    texts += [random_text(rng, int(rng.integers(1, 20_000)), s) for s in (2, 4, 256) for _ in range(30)]
    texts.append(worst_case(300))
    bad = 0
    for T in texts:
        for opts in (BuildOptions(), BuildOptions(abort_heuristic=False)):
            if build(T, opts).decompress() != T:
                bad += 1
    path = find_large_file()
    if path is None:
        report(False, "round trip", f"{len(texts)} test texts ok={bad == 0}; no file >= 10 MB found")
        assert False, "no real file of at least 10 MB available"
    data = path.read_bytes()
    t = time.perf_counter()
    G = build(data)
    real_ok = G.decompress() == data
    uni_ok = Grammar(loads(dumps(convert(G.store, "uni")))).decompress() == data
    ok = bad == 0 and real_ok and uni_ok
    report(ok, "round trip",
           f"{2 * len(texts)} builds of test texts, {bad} failures; {path} ({len(data):,} bytes) "
           f"nep={real_ok} uni={uni_ok} in {time.perf_counter() - t:.1f}s")
    assert ok


def test_store_equivalence(tmp_path):
    rng = random.Random(5)
    queries = 0
    mismatches = []
    serial_ok = True
    grammars = corpus_grammars()
    per_grammar = math.ceil(10_000 / len(grammars))
    for name, T, opts in grammars:
        nep = build(T, opts)
        uni = Grammar(convert(nep.store, "uni"))
        for x in range(256, nep.start + 1):
            if nep.rhs(x) != uni.rhs(x) or nep.expansion_length(x) != uni.expansion_length(x):
                mismatches.append((name, "rule", x))
            h = nep.height_of(x)
            if uni.lookup(nep.rhs(x), h) != x or nep.lookup(nep.rhs(x), h) != x:
                mismatches.append((name, "lookup", x))
        for _ in range(per_grammar):
            kind = rng.randrange(3)
            m = rng.randint(1, min(len(T), 60))
            j = rng.randint(0, len(T) - m)
            P = T[j:j + m] if rng.random() < 0.7 else bytes(rng.choice(T) for _ in range(m))
            if kind == 0:
                same = locate(P, nep).positions == locate(P, uni).positions
            elif kind == 1:
                same = count(P, nep) == count(P, uni)
            else:
                same = nep.extract(nep.start, j + 1, m) == uni.extract(uni.start, j + 1, m)
            queries += 1
            if not same:
                mismatches.append((name, kind, P[:10]))
        for G in (nep, uni):
            data = dumps(G.store)
            path = tmp_path / "g.idx"
            save(G, path)
            serial_ok &= dumps(loads(data)) == data
            serial_ok &= path.read_bytes() == data and dumps(load(path).store) == data
    ok = not mismatches and serial_ok
    report(ok, "store equivalence",
           f"{len(grammars)} grammars, {queries} randomized queries, {len(mismatches)} mismatches, "
           f"serialization bit-exact={serial_ok}")
    assert ok


def test_structural_invariants():
    rng = np.random.default_rng(3)
    cases = [(name, T, opts) for name, T, opts in corpus_grammars()]
    for k in range(200):
        sigma = (2, 4, 256)[k % 3]
        T = random_text(rng, int(rng.integers(1, 5000)), sigma)
        cases.append((f"random{sigma}", T, BuildOptions(abort_heuristic=k % 2 == 0)))
    cases.append(("worst", worst_case(200), BuildOptions(abort_heuristic=False)))
    broken = []
    for name, T, opts in cases:
        v = violations(build(T, opts))
        if v:
            broken.append((name, v[:2]))
    ok = not broken
    report(ok, "structural invariants",
           f"{len(cases)} builds checked (bitonic, lex order, additivity, reduced, height bound), "
           f"{len(broken)} with violations {broken[:2]}")
    assert ok


@pytest.fixture(scope="module")
def fib41() -> bytes:
    return fibonacci(41)


@pytest.mark.slow
def test_table3_fib41(fib41):
    """fib41 with the heuristic off must give |Gamma| = 67, g = 173 and a
    start rule of length 22."""
    assert len(fib41) == FIB41_LENGTH == fibonacci_length(41)
    t = time.perf_counter()
    G = build(fib41, BuildOptions(abort_heuristic=False))
    s = G.stats()
    elapsed = time.perf_counter() - t
    del G
    got = (s.num_nonterminals, s.total_rhs_size, s.start_rhs_len)
    ok = got == (67, 173, 22)
    report(ok, "table 3 fib41 (heuristic off)",
           f"n={len(fib41):,} |Gamma|={got[0]} g={got[1]} start={got[2]} tau={s.heights} "
           f"in {elapsed:.0f}s; expected 67/173/22")
    # the only construction found to give the published row: heuristic on,
    # every level typed as if a smallest sentinel followed it, start rule
    # not counted in |Gamma|
    V = build(fib41, BuildOptions(abort_heuristic=True, end_sentinel=True)).stats()
    report(None, "table 3 fib41 variant (heuristic on, end sentinel)",
           f"|Gamma|={V.num_nonterminals} (without start {V.num_nonterminals - 1}) "
           f"g={V.total_rhs_size} start={V.start_rhs_len}")
    fallback_ok = s.num_nonterminals <= 100 and s.total_rhs_size <= 300
    report(None, "table 3 fallback bounds (not triggered, length matches)",
           f"|Gamma|<=100 and g<=300 on n>=2e8: {fallback_ok}")
    assert ok, f"fib41 gives {got}, published 67/173/22"


def test_fib_growth_logarithmic():
    """Informational: g across Fibonacci orders grows linearly in the order."""
    orders = list(range(20, 36))
    g = [build(fibonacci(k), BuildOptions(abort_heuristic=False)).total_rhs_size for k in orders]
    slope, icpt = np.polyfit(orders, g, 1)
    resid = np.max(np.abs(np.polyval([slope, icpt], orders) - g))
    report(None, "fib g growth (orders 20..35, heuristic off)",
           f"g={g[0]}..{g[-1]}, linear fit in the order (i.e. in log n) slope={slope:.2f} "
           f"max residual {resid:.1f}")


def test_worst_case():
    T = worst_case(1000)
    G = build(T, BuildOptions(abort_heuristic=False))
    g = G.total_rhs_size
    ok = g >= len(T)
    report(ok, "worst case non-compression", f"m=1000 |T|={len(T)} g={g} (need g >= |T|)")
    assert ok


def test_degenerate_paths():
    rng = np.random.default_rng(99)
    short = fallback = bad = 0
    for sigma in (2, 4, 256):
        for _ in range(40):
            T = random_text(rng, int(rng.integers(1, 5000)), sigma)
            G = build(T)
            for m in (1, 2, 3):
                for from_text in (True, False):
                    P = random_pattern(rng, T, sigma, m, from_text)
                    short += 1
                    bad += locate(P, G, check=True).positions != naive_search(T, P)
            for _ in range(30):
                P = random_pattern(rng, T, sigma, int(rng.integers(2, 16)), True)
                pp = parse_pattern(P, G)
                if pp is not None and choose_core(pp, G).fallback:
                    fallback += 1
                    bad += locate(P, G, check=True).positions != naive_search(T, P)
    ok = bad == 0 and fallback > 0
    report(ok, "degenerate paths",
           f"{short} patterns of length 1..3 and {fallback} fallback patterns, {bad} mismatches")
    assert ok


def test_bench_trends():
    """Informational: mean tau_P against |P| and time against visited nodes."""
    T = fibonacci(27)
    G = build(T)
    rng = np.random.default_rng(0)
    taus, times, visited = [], [], []
    for m in (10, 30, 100, 300, 1000):
        tp = []
        for _ in range(40):
            j = int(rng.integers(0, len(T) - m + 1))
            t = time.perf_counter()
            r = locate(T[j:j + m], G)
            times.append(time.perf_counter() - t)
            visited.append(r.visited_nodes)
            tp.append(r.tau_p)
        taus.append(float(np.mean(tp)))
    corr = float(np.corrcoef(times, visited)[0, 1])
    monotone = all(a <= b for a, b in zip(taus, taus[1:]))
    report(None, "bench trend on fib27",
           f"mean tau_P for |P|=10,30,100,300,1000: {', '.join(f'{t:.2f}' for t in taus)} "
           f"(non-decreasing: {monotone}); corr(time, occ_C') = {corr:.2f}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
