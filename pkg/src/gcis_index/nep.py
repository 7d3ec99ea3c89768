"""Plain rule store: 32-bit symbols in R, offsets in Q, expansion lengths in L."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .errors import Overflow
from .store import FIRST_NONTERMINAL, BuildInfo, RuleStore


class NepStore(RuleStore):
    """Right-hand sides concatenated in id order without delimiters.

    ``R[Q[i]:Q[i+1]]`` is the right-hand side of rule ``i`` and ``L[i]`` its
    expansion length.
    """

    encoding = "nep"

    def __init__(self, R: np.ndarray, Q: np.ndarray, L: np.ndarray, text_len: int,
                 rule_counts: Sequence[int], info: BuildInfo = BuildInfo()):
        super().__init__(text_len, rule_counts, info)
        if len(R) and int(np.max(R)) >= 1 << 32:
            raise Overflow("symbol id does not fit 32 bits")
        self.R = np.asarray(R, dtype=np.uint32)
        self.Q = np.asarray(Q, dtype=np.uint64)
        self.L = np.asarray(L, dtype=np.uint64)
        # python-int copies of the small per-rule arrays make scalar access cheap
        self._q = self.Q.tolist()
        self._first = self.R[self.Q[:-1].astype(np.int64)].tolist() if len(self.R) else []
        self._len = self.L.tolist()

    def rule(self, i: int) -> list[int]:
        return self.R[self._q[i]:self._q[i + 1]].tolist()

    def first(self, i: int) -> int:
        return self._first[i]

    def length(self, i: int) -> int:
        return self._len[i]

    def rule_len(self, i: int) -> int:
        return self._q[i + 1] - self._q[i]

    @property
    def total_size(self) -> int:
        return self._q[-1]

    def plain_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.R, self.Q, self.L

    def iter_height(self, h: int) -> Iterator[tuple[int, list[int]]]:
        ids = self.height_range(h)
        if not ids:
            return
        base = self._q[ids.start]
        flat = self.R[base:self._q[ids.stop]].tolist()
        for i in ids:
            yield FIRST_NONTERMINAL + i, flat[self._q[i] - base:self._q[i + 1] - base]

    def size_in_bytes(self) -> int:
        return 4 * len(self.R) + 8 * len(self.Q) + 8 * len(self.L)

    @classmethod
    def from_store(cls, store: RuleStore) -> NepStore:
        if isinstance(store, NepStore):
            return store
        R, Q, L = store.plain_arrays()
        return cls(R, Q, L, store.text_len, store.rule_counts, store.info)
