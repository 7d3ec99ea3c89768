"""Structural checks of a built grammar.

``violations`` returns human-readable descriptions of every broken
invariant (an empty list for a well-formed grammar).  The start rule is the
level string left over when construction stopped, so it is exempt from the
bitonic shape that every factor has.
"""

from __future__ import annotations

import numpy as np

from .grammar import Grammar
from .store import FIRST_NONTERMINAL
from .uni import is_bitonic


def violations(G: Grammar) -> list[str]:
    store = G.store
    R, Q, L = store.plain_arrays()
    R = R.astype(np.int64)
    Q = Q.astype(np.int64)
    L = L.astype(np.int64)
    count = store.num_rules
    out: list[str] = []
    if np.any(np.diff(Q) < 1):
        out.append("empty right-hand side")
        return out
    rules = [R[Q[i]:Q[i + 1]].tolist() for i in range(count)]

    # heights: children of a height-h rule have height h - 1
    height = np.zeros(FIRST_NONTERMINAL + count, dtype=np.int64)
    for h in range(1, store.heights + 1):
        r = store.height_range(h)
        height[FIRST_NONTERMINAL + r.start:FIRST_NONTERMINAL + r.stop] = h
    owner_h = np.repeat(height[FIRST_NONTERMINAL:], np.diff(Q))
    if np.any(R >= FIRST_NONTERMINAL + count) or np.any(height[R] != owner_h - 1):
        out.append("a right-hand side mixes heights")

    for h in range(1, store.heights + 1):
        r = store.height_range(h)
        for i in range(r.start + 1, r.stop):
            if not rules[i - 1] < rules[i]:
                out.append(f"rules {i - 1} and {i} are not in strict lexicographic order")
    for i in range(count - 1):
        if not is_bitonic(rules[i]):
            out.append(f"rule {i} is not bitonic")

    sym_len = np.concatenate([np.ones(FIRST_NONTERMINAL, dtype=np.int64), L])
    sums = np.add.reduceat(sym_len[R], Q[:-1])
    if np.any(sums != L):
        out.append("expansion lengths are not additive")
    if int(L[-1]) != store.text_len:
        out.append("start rule does not expand to n characters")

    used = np.zeros(count, dtype=bool)
    used[-1] = True
    nt = R[R >= FIRST_NONTERMINAL] - FIRST_NONTERMINAL
    used[nt] = True
    if not used.all():
        out.append(f"{int((~used).sum())} unreachable non-terminals")

    if not store.info.abort_heuristic and store.info.stop_reason != "max_height":
        bound = int(np.floor(np.log2(store.text_len))) + 1
        if store.heights > bound:
            out.append(f"{store.heights} heights exceed floor(lg n) + 1 = {bound}")
    return out
