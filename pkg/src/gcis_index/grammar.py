"""Encoding-independent view of a grammar held by a rule store."""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .nep import NepStore
from .store import FIRST_NONTERMINAL, RuleStore

# symbols expanding to at most this many characters are cached whole by extract
SMALL_EXPANSION = 256


@dataclass(frozen=True)
class GrammarStats:
    num_nonterminals: int
    total_rhs_size: int
    start_rhs_len: int
    heights: int
    text_len: int

    def table_row(self) -> str:
        """|Gamma|, g and the start rule length, tab separated."""
        return f"{self.num_nonterminals}\t{self.total_rhs_size}\t{self.start_rhs_len}"


class Grammar:
    """A built grammar: the store plus lazily derived reverse edges.

    Symbol ids below 256 are characters; ``256 + i`` is the i-th rule in
    (height, right-hand side) order and the start symbol is the largest id.
    Read-only after construction; the only mutation is the one-time creation
    of the parent index, which is idempotent.
    """

    def __init__(self, store: RuleStore):
        self.store = store
        self._parents: tuple[list[int], np.ndarray, np.ndarray] | None = None
        self._char_freq: list[int] | None = None

    # basic shape -------------------------------------------------------------
    @property
    def text_len(self) -> int:
        return self.store.text_len

    @property
    def heights(self) -> int:
        return self.store.heights

    @property
    def start(self) -> int:
        return self.store.start

    def height_of(self, x: int) -> int:
        if 0 <= x < FIRST_NONTERMINAL:
            return 0
        return self.store.height_of_rule(self.store.check_rule(x))

    def height_ids(self, h: int) -> range:
        r = self.store.height_range(h)
        return range(FIRST_NONTERMINAL + r.start, FIRST_NONTERMINAL + r.stop)

    # rules -------------------------------------------------------------------
    def rhs(self, x: int) -> list[int]:
        return self.store.rhs(x)

    def expansion_length(self, x: int) -> int:
        return self.store.expansion_length(x)

    def lookup(self, s, h: int) -> int | None:
        return self.store.lookup(s, h)

    def prefix_candidates(self, s, h: int) -> range:
        return self.store.prefix_candidates(s, h)

    def child_offsets(self, x: int) -> list[int]:
        """Character offset of every child of ``x`` inside its expansion,
        followed by the expansion length of ``x``."""
        out = [0]
        length = self.store.expansion_length
        acc = 0
        for c in self.rhs(x):
            acc += length(c)
            out.append(acc)
        return out

    # text access -------------------------------------------------------------
    def extract(self, x: int, start: int, length: int,
                offsets: dict[int, list[int]] | None = None,
                expansions: dict[int, bytes] | None = None) -> bytes:
        """``length`` characters of the expansion of ``x`` from 1-based ``start``.

        ``offsets`` optionally memoizes ``child_offsets`` across calls, and
        ``expansions`` the full expansion of symbols of at most
        ``SMALL_EXPANSION`` characters.
        """
        total = self.expansion_length(x)
        if start < 1 or length < 0 or start + length - 1 > total:
            raise OutOfRange(f"window [{start}, {start + length - 1}] outside 1..{total}")
        if offsets is None:
            offsets = {}
        out = bytearray()
        if length:
            self._emit(x, start - 1, start - 1 + length, out, offsets, expansions)
        return bytes(out)

    def _emit(self, x: int, a: int, b: int, out: bytearray, offsets: dict[int, list[int]],
              expansions: dict[int, bytes] | None) -> None:
        # characters [a, b) of the expansion of x
        if x < FIRST_NONTERMINAL:
            out.append(x)
            return
        if expansions is not None and self.store.expansion_length(x) <= SMALL_EXPANSION:
            e = expansions.get(x)
            if e is None:
                full = bytearray()
                for c in self.rhs(x):
                    self._emit(c, 0, self.store.expansion_length(c), full, offsets, expansions)
                e = expansions[x] = bytes(full)
            out += e[a:b]
            return
        off = offsets.get(x)
        if off is None:
            off = offsets[x] = self.child_offsets(x)
        rhs = self.rhs(x)
        k = bisect.bisect_right(off, a) - 1
        while k < len(rhs) and off[k] < b:
            c = rhs[k]
            if c < FIRST_NONTERMINAL:
                out.append(c)
            else:
                self._emit(c, max(a - off[k], 0), min(b, off[k + 1]) - off[k], out, offsets,
                           expansions)
            k += 1

    def decompress(self) -> bytes:
        R, Q, _ = self.store.plain_arrays()
        R = R.astype(np.int64)
        Q = Q.astype(np.int64)
        s = self.start - FIRST_NONTERMINAL
        level = R[Q[s]:Q[s + 1]]
        for _ in range(self.heights - 1):
            idx = level - FIRST_NONTERMINAL
            lo = Q[idx]
            lens = Q[idx + 1] - lo
            shift = np.repeat(lo - (np.cumsum(lens) - lens), lens)
            level = R[shift + np.arange(len(shift))]
        return level.astype(np.uint8).tobytes()

    # reverse edges ----------------------------------------------------------
    def _parent_index(self) -> tuple[list[int], np.ndarray, np.ndarray]:
        if self._parents is None:
            R, Q, _ = self.store.plain_arrays()
            R = R.astype(np.int64)
            Q = Q.astype(np.int64)
            owner = np.repeat(np.arange(len(Q) - 1), np.diff(Q)) + FIRST_NONTERMINAL
            index = np.arange(len(R)) - np.repeat(Q[:-1], np.diff(Q)) + 1
            order = np.argsort(R, kind="stable")
            ptr = np.searchsorted(R[order], np.arange(FIRST_NONTERMINAL + len(Q)))
            self._parents = (ptr.tolist(), owner[order], index[order])
        return self._parents

    def parents(self, x: int) -> list[tuple[int, int]]:
        """(parent id, 1-based position in the parent's right-hand side) of
        every occurrence of ``x`` in a right-hand side."""
        ptr, owner, index = self._parent_index()
        if not 0 <= x < len(ptr) - 1:
            self.store.rhs(x)  # raises UnknownSymbol
            return []
        a, b = ptr[x], ptr[x + 1]
        return list(zip(owner[a:b].tolist(), index[a:b].tolist()))

    def text_offsets(self, x: int, memo: dict[int, list[int]] | None = None,
                     offsets: dict[int, list[int]] | None = None) -> list[int]:
        """0-based start offsets in the text of every occurrence of ``x``
        in the derivation tree, one per root path (unsorted)."""
        if memo is None:
            memo = {}
        if offsets is None:
            offsets = {}
        stack = [x]
        while stack:
            y = stack[-1]
            if y in memo:
                stack.pop()
                continue
            if y == self.start:
                memo[y] = [0]
                stack.pop()
                continue
            ps = self.parents(y)
            pending = [p for p, _ in ps if p not in memo]
            if pending:
                stack.extend(pending)
                continue
            acc: list[int] = []
            for p, j in ps:
                if p not in offsets:
                    offsets[p] = self.child_offsets(p)
                shift = offsets[p][j - 1]
                acc.extend(o + shift for o in memo[p])
            memo[y] = acc
            stack.pop()
        return memo[x]

    def occurrences_in_text(self, x: int) -> list[int]:
        self.rhs(x)  # validate the id
        return sorted(o + 1 for o in self.text_offsets(x))

    def char_frequencies(self) -> list[int]:
        """Occurrences of every byte value in the right-hand sides of height 1."""
        if self._char_freq is None:
            store = self.store
            ids = store.height_range(1)
            if isinstance(store, NepStore):
                flat = store.R[store._q[ids.start]:store._q[ids.stop]]
            else:
                flat = np.fromiter((c for _, rhs in store.iter_height(1) for c in rhs), dtype=np.int64)
            freq = np.bincount(flat.astype(np.int64), minlength=FIRST_NONTERMINAL)
            self._char_freq = freq[:FIRST_NONTERMINAL].tolist()
        return self._char_freq

    # summaries ---------------------------------------------------------------
    @property
    def total_rhs_size(self) -> int:
        store = self.store
        if isinstance(store, NepStore):
            return store.total_size
        return sum(len(store.rule(i)) for i in range(store.num_rules))

    @property
    def alphabet_size(self) -> int:
        bottom = self.store.iter_height(1)
        return len({c for _, rhs in bottom for c in rhs})

    def stats(self) -> GrammarStats:
        return GrammarStats(
            num_nonterminals=self.store.num_rules,
            total_rhs_size=self.total_rhs_size,
            start_rhs_len=len(self.rhs(self.start)),
            heights=self.heights,
            text_len=self.text_len,
        )

    def __repr__(self) -> str:
        return f"Grammar({self.store!r})"
