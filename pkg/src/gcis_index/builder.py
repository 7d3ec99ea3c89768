"""Grammar construction by repeated LMS factorization.

Each round factorizes the current level string, gives every distinct factor a
non-terminal id, and replaces the factors by those ids.  Ids of one height are
assigned in lexicographic order of the factor content, directly after the ids
of the previous height, so the final numbering is (height, content) order
without a renumbering pass.

Level strings are numpy arrays and the per-factor work is vectorised: factors
are bucketed by length, deduplicated with ``np.unique`` on fixed-width byte
rows, and only the distinct factors reach Python.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, TypeVar

import numpy as np

from .errors import EmptyInput, Overflow
from .grammar import Grammar
from .lms import lms_starts
from .nep import NepStore
from .store import FIRST_NONTERMINAL, BuildInfo

log = logging.getLogger(__name__)

# factors handled per deduplication batch
FACTOR_BATCH = 1 << 22

K = TypeVar("K")


@dataclass(frozen=True)
class BuildOptions:
    abort_heuristic: bool = True
    max_height: int | None = None
    # type every level string as if followed by a smallest sentinel
    end_sentinel: bool = False

    def __post_init__(self):
        if self.max_height is not None and self.max_height < 1:
            raise ValueError("max_height must be at least 1")


def should_stop(level_len: int, next_len: int, new_rules_size: int, new_rules_count: int,
                opts: BuildOptions, height: int = 0) -> bool:
    """Decide whether to keep ``T^(h)`` as the start rule instead of reducing it.

    ``height`` is h, the height of the symbols in the level string.  The size
    test charges every new rule its right-hand side plus one offset and one
    length entry, as in the plain store.
    """
    if opts.max_height is not None and height + 2 > opts.max_height:
        return True
    if not opts.abort_heuristic:
        return False
    return next_len + new_rules_size + 2 * new_rules_count >= level_len


def rank_factors(factors: Iterable[K]) -> dict[K, int]:
    """Rank distinct factors by lexicographic order of their content."""
    return {f: r for r, f in enumerate(sorted(set(factors)))}


@dataclass
class LevelParse:
    """One reduction step: ``T^(h)`` factorized into ``T^(h+1)``.

    ``rules`` is the concatenated content of the new rules in rank order and
    ``rule_lens`` their lengths; ``next_level`` uses final symbol ids.
    """

    starts: np.ndarray
    rules: np.ndarray
    rule_lens: np.ndarray
    next_level: np.ndarray

    @property
    def count(self) -> int:
        return len(self.rule_lens)

    @property
    def size(self) -> int:
        return len(self.rules)


def _key_view(level: np.ndarray) -> tuple[np.ndarray, int]:
    # big-endian fixed width keeps byte order equal to symbol order
    if level.dtype == np.uint8:
        return level, 1
    return level.astype(">u4"), 4


def reduce_level(level: np.ndarray, first_id: int, starts: np.ndarray | None = None,
                 end_sentinel: bool = False) -> LevelParse:
    """Factorize ``level`` and name its distinct factors ``first_id, ...``."""
    if starts is None:
        starts = lms_starts(level, end_sentinel)
    keys, width = _key_view(level)
    n = len(level)
    nf = len(starts)
    provisional = np.empty(nf, dtype=np.int32 if nf < 2**31 else np.int64)
    distinct: dict[bytes, int] = {}
    for a in range(0, nf, FACTOR_BATCH):
        b = min(a + FACTOR_BATCH, nf)
        st = starts[a:b].astype(np.int64)
        en = np.empty_like(st)
        en[:-1] = st[1:]
        en[-1] = starts[b] if b < nf else n
        flen = en - st
        order = np.argsort(flen, kind="stable")
        sorted_len = flen[order]
        cuts = np.flatnonzero(np.diff(sorted_len)) + 1
        for grp in np.split(order, cuts):
            m = int(flen[grp[0]])
            rows = keys[st[grp][:, None] + np.arange(m)]
            rows = np.ascontiguousarray(rows).view(np.dtype((np.void, m * width))).ravel()
            uniq, inverse = np.unique(rows, return_inverse=True)
            local = np.fromiter(
                (distinct.setdefault(u.tobytes(), len(distinct)) for u in uniq),
                dtype=np.int64, count=len(uniq))
            provisional[a + grp] = local[inverse.ravel()]
    if first_id + len(distinct) > 1 << 32:
        raise Overflow("symbol ids exceed 32 bits")
    ranks = rank_factors(distinct)
    # provisional id -> final symbol id
    final = np.empty(len(distinct), dtype=np.uint32)
    for key, prov in distinct.items():
        final[prov] = first_id + ranks[key]
    ordered = sorted(distinct, key=ranks.__getitem__)
    dtype = ">u1" if width == 1 else ">u4"
    rules = np.frombuffer(b"".join(ordered), dtype=dtype).astype(np.uint32)
    rule_lens = np.fromiter((len(k) // width for k in ordered), dtype=np.int64, count=len(ordered))
    next_level = final[provisional]
    return LevelParse(starts, rules, rule_lens, next_level)


def build(text: bytes | bytearray | memoryview | np.ndarray, opts: BuildOptions = BuildOptions()) -> Grammar:
    """Build the grammar of ``text`` (bytes, or a uint8 array)."""
    if isinstance(text, np.ndarray):
        level = np.asarray(text, dtype=np.uint8)
    else:
        level = np.frombuffer(text, dtype=np.uint8)
    n = len(level)
    if n == 0:
        raise EmptyInput("cannot build a grammar of an empty text")
    if n >= 1 << 64:
        raise Overflow("text too long")

    sym_len = np.ones(FIRST_NONTERMINAL, dtype=np.uint64)  # expansion length by symbol id
    R_parts: list[np.ndarray] = []
    lens_parts: list[np.ndarray] = []
    L_parts: list[np.ndarray] = []
    counts: list[int] = []
    next_id = FIRST_NONTERMINAL
    height = 0
    reason = "single"
    while True:
        if height >= 1 and len(level) == counts[-1]:
            reason = "unique"
            break
        if opts.max_height is not None and height + 2 > opts.max_height:
            reason = "max_height"
            break
        starts = lms_starts(level, opts.end_sentinel)
        if len(starts) <= 2:
            reason = "two_factors" if n > 1 else "single"
            break
        parse = reduce_level(level, next_id, starts)
        if should_stop(len(level), len(parse.next_level), parse.size, parse.count, opts, height):
            reason = "heuristic"
            break
        heads = np.zeros(parse.count, dtype=np.int64)
        np.cumsum(parse.rule_lens[:-1], out=heads[1:])
        L = np.add.reduceat(sym_len[parse.rules.astype(np.int64)], heads)
        R_parts.append(parse.rules)
        lens_parts.append(parse.rule_lens)
        L_parts.append(L)
        counts.append(parse.count)
        sym_len = np.concatenate([sym_len, L])
        next_id += parse.count
        level = parse.next_level
        height += 1
        log.debug("height %d: %d rules, level length %d", height, parse.count, len(level))

    start_rhs = level.astype(np.uint32)
    R_parts.append(start_rhs)
    lens_parts.append(np.array([len(start_rhs)], dtype=np.int64))
    L_parts.append(np.array([n], dtype=np.uint64))
    counts.append(1)
    lens = np.concatenate(lens_parts)
    Q = np.zeros(len(lens) + 1, dtype=np.uint64)
    np.cumsum(lens, out=Q[1:])
    store = NepStore(np.concatenate(R_parts), Q, np.concatenate(L_parts).astype(np.uint64), n,
                     counts, BuildInfo(reason, opts.abort_heuristic, opts.end_sentinel))
    return Grammar(store)
