"""Behaviour shared by the plain and the succinct rule stores.

A store numbers its rules 0..|Gamma|-1 in (height, right-hand side) order;
rule ``i`` is the non-terminal with symbol id ``256 + i``.  The last rule is
the start rule.  Subclasses provide ``rule(i)``, ``first(i)`` and
``length(i)``; everything height-aware lives here.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import UnknownSymbol

FIRST_NONTERMINAL = 256

STOP_REASONS = ("unique", "two_factors", "heuristic", "max_height", "single")


@dataclass(frozen=True)
class BuildInfo:
    """How construction ended; kept in the index flags byte."""

    stop_reason: str = "two_factors"
    abort_heuristic: bool = True
    end_sentinel: bool = False

    def to_flags(self) -> int:
        return (STOP_REASONS.index(self.stop_reason) | (0x8 if self.abort_heuristic else 0)
                | (0x10 if self.end_sentinel else 0))

    @classmethod
    def from_flags(cls, flags: int) -> BuildInfo:
        code = flags & 0x7
        reason = STOP_REASONS[code] if code < len(STOP_REASONS) else "unknown"
        return cls(reason, bool(flags & 0x8), bool(flags & 0x10))


class RuleStore:
    encoding = "abstract"

    def __init__(self, text_len: int, rule_counts: Sequence[int], info: BuildInfo):
        self.text_len = int(text_len)
        self.rule_counts = [int(c) for c in rule_counts]
        self.info = info
        starts = [0]
        for c in self.rule_counts:
            starts.append(starts[-1] + c)
        # _height_start[h - 1] is the first rule index of height h
        self._height_start = starts
        self._num_rules = starts[-1]

    # subclass hooks ------------------------------------------------------
    def rule(self, i: int) -> list[int]:
        raise NotImplementedError

    def first(self, i: int) -> int:
        raise NotImplementedError

    def length(self, i: int) -> int:
        raise NotImplementedError

    def plain_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(R, Q, L) in the plain layout."""
        raise NotImplementedError

    # shared ----------------------------------------------------------------
    @property
    def num_rules(self) -> int:
        return self._num_rules

    @property
    def heights(self) -> int:
        return len(self.rule_counts)

    @property
    def start(self) -> int:
        return FIRST_NONTERMINAL + self.num_rules - 1

    def height_range(self, h: int) -> range:
        """Rule indices of height ``h`` (1-based heights)."""
        if not 1 <= h <= self.heights:
            return range(0)
        return range(self._height_start[h - 1], self._height_start[h])

    def height_of_rule(self, i: int) -> int:
        return bisect.bisect_right(self._height_start, i)

    def check_rule(self, x: int) -> int:
        i = x - FIRST_NONTERMINAL
        if not 0 <= i < self._num_rules:
            raise UnknownSymbol(x)
        return i

    def rhs(self, x: int) -> list[int]:
        if 0 <= x < FIRST_NONTERMINAL:
            return [x]
        return self.rule(self.check_rule(x))

    def expansion_length(self, x: int) -> int:
        i = x - FIRST_NONTERMINAL
        if 0 <= i < self._num_rules:
            return self.length(i)
        if 0 <= x < FIRST_NONTERMINAL:
            return 1
        raise UnknownSymbol(x)

    def _first_range(self, s: Sequence[int], h: int) -> range:
        ids = self.height_range(h)
        lo = bisect.bisect_left(ids, s[0], key=self.first)
        hi = bisect.bisect_right(ids, s[0], lo=lo, key=self.first)
        return ids[lo:hi]

    def lookup(self, s: Sequence[int], h: int) -> int | None:
        """Id of the height-``h`` non-terminal whose right-hand side is ``s``."""
        if not s:
            return None
        key = list(s)
        ids = self._first_range(key, h)
        k = bisect.bisect_left(ids, key, key=self.rule)
        if k < len(ids) and self.rule(ids[k]) == key:
            return FIRST_NONTERMINAL + ids[k]
        return None

    def prefix_candidates(self, s: Sequence[int], h: int) -> range:
        """Ids of height-``h`` non-terminals whose right-hand side starts with ``s``."""
        if not s:
            return range(0)
        key = list(s)
        m = len(key)
        ids = self._first_range(key, h)
        lo = bisect.bisect_left(ids, key, key=self.rule)
        hi = bisect.bisect_right(ids, key, lo=lo, key=lambda i: self.rule(i)[:m])
        if hi <= lo:
            return range(0)
        return range(FIRST_NONTERMINAL + ids[lo], FIRST_NONTERMINAL + ids[hi - 1] + 1)

    def iter_height(self, h: int) -> Iterator[tuple[int, list[int]]]:
        for i in self.height_range(h):
            yield FIRST_NONTERMINAL + i, self.rule(i)

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(n={self.text_len}, rules={self.num_rules}, "
                f"heights={self.heights})")
