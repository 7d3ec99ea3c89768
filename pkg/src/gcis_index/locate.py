"""Pattern search: parse the pattern with the text's non-terminals, pick a
core, find the core inside right-hand sides and verify the surrounding window.

A pattern is parsed with the same LMS factorization as the text.  Inside an
occurrence of P in T, only the factors that are cut on both sides by
boundaries P determines on its own are certain to be factors of the text too:
the first factor may start further left in T, and the last one may extend
to the right.  A boundary at the head of the last character run is also
uncertain when that run is smaller than the run before it, because whether
it is S* depends on what follows P.  Those factors are left out (the fringe)
and only the inner ones are replaced by the text's ids, which makes every
inner factor a real text factor, so a failed lookup proves P does not occur.

The core is the part of the top-level parse that is guaranteed to sit inside
one right-hand side of the next height.  Each core occurrence is extended by
climbing parent edges until the node covers the whole pattern window, the
window is checked by extraction, and the node's text positions are emitted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import EmptyPattern
from .grammar import Grammar
from .lms import factorize, run_length_encode


@dataclass(frozen=True)
class ParsedPattern:
    """Parse of a pattern down to height ``height`` (tau_P).

    ``fringes[h]`` holds the (left, right) symbols dropped at height h;
    ``p_len``/``s_len`` count the characters left/right of the core.  The
    core split is filled in by ``choose_core``.
    """

    pattern: bytes
    height: int
    top: tuple[int, ...]
    fringes: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    p_len: int = 0
    s_len: int = 0
    core_prefix: tuple[int, ...] = ()
    core: tuple[int, ...] = ()
    core_suffix: tuple[int, ...] = ()
    fallback: bool = False
    # height the parse reached, kept when the fallback resets ``height`` to 0
    parse_height: int = 0


@dataclass
class LocateReport:
    positions: list[int]
    occ: int
    occ_c: int
    visited_nodes: int
    tau_p: int = 0
    fallback: bool = False
    timings: dict[str, float] = field(default_factory=dict)


def _expanded(G: Grammar, symbols: Sequence[int]) -> int:
    return sum(G.expansion_length(x) for x in symbols)


def _last_run_unstable(s: Sequence[int]) -> bool:
    """True if the last run is smaller than the run before it."""
    k = len(s) - 1
    while k > 0 and s[k - 1] == s[k]:
        k -= 1
    return k > 0 and s[k] < s[k - 1]


def parse_pattern(P: bytes, G: Grammar) -> ParsedPattern | None:
    """Parse ``P`` with borrowed ids; None means P cannot occur in the text."""
    if len(P) == 0:
        raise EmptyPattern("pattern must not be empty")
    s = list(P)
    h = 0
    p_len = s_len = 0
    fringes = []
    # the core is sought in rules of height h + 1, and the start rule has
    # height tau, so the parse may go up to tau - 1
    while h + 1 <= G.heights - 1:
        f = factorize(s)
        z = len(f)
        if z <= 2:
            break
        factors = f.factors
        hi = z - 2 if _last_run_unstable(s) else z - 1
        inner = factors[1:hi]
        if not inner:
            break
        ids = []
        for fac in inner:
            x = G.lookup(fac, h + 1)
            if x is None:
                return None
            ids.append(x)
        left = factors[0]
        right = tuple(c for fac in factors[hi:] for c in fac)
        p_len += _expanded(G, left)
        s_len += _expanded(G, right)
        fringes.append((left, right))
        s = ids
        h += 1
    return ParsedPattern(bytes(P), h, tuple(s), tuple(fringes), p_len, s_len, parse_height=h)


def choose_core(pp: ParsedPattern, G: Grammar) -> ParsedPattern:
    """Split the top string into C_p C C_s and widen p_len/s_len accordingly."""
    top = pp.top
    if pp.height == G.heights - 1:
        # every factor of T^(tau-1) lies in the start rule, so all of it is a core
        cp, cs = (), ()
    else:
        # the parse stopped with at most two factors, or three when the last
        # boundary is uncertain; either way F_2 starts at a certain boundary
        f = factorize(top)
        cp = f.factors[0] if len(f) >= 2 else ()
        runs = run_length_encode(top)
        cs = ()
        if len(runs) >= 2 and runs[-1][0] < runs[-2][0]:
            cs = (runs[-1][0],) * runs[-1][1]
    if len(cp) + len(cs) >= len(top):
        return degenerate_core_fallback(pp.pattern, G, pp.height)
    core = top[len(cp):len(top) - len(cs)]
    return replace(pp, p_len=pp.p_len + _expanded(G, cp), s_len=pp.s_len + _expanded(G, cs),
                   core_prefix=cp, core=core, core_suffix=cs)


def degenerate_core_fallback(P: bytes, G: Grammar, parse_height: int = 0) -> ParsedPattern:
    """Use the character of P that is rarest in the height-1 rules as core."""
    freq = G.char_frequencies()
    i = min(range(len(P)), key=lambda k: (freq[P[k]], k))
    return ParsedPattern(bytes(P), 0, tuple(P), (), i, len(P) - i - 1,
                         tuple(P[:i]), (P[i],), tuple(P[i + 1:]), fallback=True,
                         parse_height=parse_height)


def kmp_table(pat: Sequence[int]) -> list[int]:
    fail = [0] * len(pat)
    k = 0
    for i in range(1, len(pat)):
        while k and pat[i] != pat[k]:
            k = fail[k - 1]
        if pat[i] == pat[k]:
            k += 1
        fail[i] = k
    return fail


def kmp_search(text: Sequence[int], pat: Sequence[int], fail: list[int] | None = None) -> list[int]:
    """0-based start of every (possibly overlapping) occurrence of pat."""
    if fail is None:
        fail = kmp_table(pat)
    out = []
    m = len(pat)
    k = 0
    for i, c in enumerate(text):
        while k and c != pat[k]:
            k = fail[k - 1]
        if c == pat[k]:
            k += 1
            if k == m:
                out.append(i - m + 1)
                k = fail[k - 1]
    return out


def find_core_occurrences(core: Sequence[int], height: int, G: Grammar,
                          prefix_only: bool = False) -> list[tuple[int, int]]:
    """(rule id, 1-based index) of every occurrence of ``core`` in the
    right-hand sides of height ``height + 1``."""
    core = list(core)
    if prefix_only:
        return [(x, 1) for x in G.prefix_candidates(core, height + 1)]
    fail = kmp_table(core)
    m = len(core)
    out = []
    for x, rhs in G.store.iter_height(height + 1):
        if len(rhs) >= m:
            out.extend((x, i + 1) for i in kmp_search(rhs, core, fail))
    return out


@dataclass
class _Scratch:
    """Per-query memo tables; nothing here outlives one locate call."""

    text_offsets: dict = field(default_factory=dict)
    child_offsets: dict = field(default_factory=dict)
    verified: dict = field(default_factory=dict)
    expansions: dict = field(default_factory=dict)
    visited: int = 0

    def offsets(self, G: Grammar, x: int) -> list[int]:
        if x not in self.child_offsets:
            self.child_offsets[x] = G.child_offsets(x)
        return self.child_offsets[x]


def verify_and_collect(occ: tuple[int, int], pp: ParsedPattern, G: Grammar,
                       scratch: _Scratch | None = None) -> list[int]:
    """Text positions (1-based) of the pattern occurrences around one core
    occurrence."""
    if scratch is None:
        scratch = _Scratch()
    x, i = occ
    m = len(pp.pattern)
    w0 = scratch.offsets(G, x)[i - 1] - pp.p_len
    out: list[int] = []
    stack = [(x, w0)]
    while stack:
        node, w = stack.pop()
        scratch.visited += 1
        if w >= 0 and w + m <= G.expansion_length(node):
            key = (node, w)
            ok = scratch.verified.get(key)
            if ok is None:
                ok = scratch.verified[key] = (
                    G.extract(node, w + 1, m, scratch.child_offsets, scratch.expansions) == pp.pattern)
            if ok:
                out.extend(o + w + 1 for o in G.text_offsets(node, scratch.text_offsets,
                                                             scratch.child_offsets))
            continue
        for parent, j in G.parents(node):
            stack.append((parent, w + scratch.offsets(G, parent)[j - 1]))
    return out


def locate(P: bytes, G: Grammar, prefix_fast_path: bool = False, check: bool = False) -> LocateReport:
    """Sorted 1-based positions of every occurrence of ``P`` in the text.

    ``prefix_fast_path`` looks the core up as a right-hand side prefix when
    C_p is non-empty instead of scanning; ``check`` extracts the text at every
    reported position and asserts it equals P.
    """
    P = bytes(P)
    t0 = time.perf_counter()
    pp = parse_pattern(P, G)
    timings = {"parse": time.perf_counter() - t0}
    if pp is None:
        return LocateReport([], 0, 0, 0, timings=timings)
    pp = choose_core(pp, G)
    t1 = time.perf_counter()
    timings["parse"] = t1 - t0
    use_prefix = prefix_fast_path and bool(pp.core_prefix) and not pp.fallback
    cores = find_core_occurrences(pp.core, pp.height, G, prefix_only=use_prefix)
    t2 = time.perf_counter()
    timings["scan"] = t2 - t1
    scratch = _Scratch()
    positions: list[int] = []
    for occ in cores:
        positions.extend(verify_and_collect(occ, pp, G, scratch))
    positions.sort()
    timings["verify"] = time.perf_counter() - t2
    assert all(a < b for a, b in zip(positions, positions[1:])), "duplicate positions"
    if check:
        for p in positions:
            assert G.extract(G.start, p, len(P), scratch.child_offsets, scratch.expansions) == P, f"false hit at {p}"
    return LocateReport(positions, len(positions), len(cores), scratch.visited,
                        tau_p=pp.parse_height, fallback=pp.fallback, timings=timings)


def count(P: bytes, G: Grammar) -> int:
    return locate(P, G).occ
