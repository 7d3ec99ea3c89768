"""Synthetic corpora.

Orders follow the dataset names of the Pizza&Chili artificial corpus: the word
of order 1 is ``a`` and order k applies the morphism k - 1 times, so ``fib41``
has length F(42) = 267,914,296 and ``tm29`` has length 2**28.

* ``fibonacci(k)``: morphism a -> ab, b -> a, i.e. f_k = f_{k-1} f_{k-2}.
* ``thue_morse(k)``: morphism a -> ab, b -> ba, i.e. t_k = t_{k-1} ~t_{k-1}.
* ``run_rich(k)``: r_1 = a, r_2 = aab, r_k = r_{k-1} r_{k-1} r_{k-2}; every
  step adds a square, which keeps the number of runs high.
* ``random_text(n, sigma, seed)``: i.i.d. uniform over the first ``sigma``
  byte values starting at ``a`` (or all 256 byte values when sigma == 256).
"""

from __future__ import annotations

import numpy as np

FAMILIES = ("fib", "thue-morse", "run-rich", "random")


def _check_order(k: int) -> None:
    if k < 1:
        raise ValueError(f"order must be at least 1, got {k}")


def fibonacci(k: int) -> bytes:
    _check_order(k)
    prev, cur = b"", b"a"
    if k >= 2:
        prev, cur = b"a", b"ab"
    for _ in range(k - 2):
        prev, cur = cur, cur + prev
    return cur


def fibonacci_length(k: int) -> int:
    a, b = 1, 1  # F(1), F(2)
    for _ in range(k):
        a, b = b, a + b
    return a


def thue_morse(k: int) -> bytes:
    _check_order(k)
    flip = bytes.maketrans(b"ab", b"ba")
    t = b"a"
    for _ in range(k - 1):
        t = t + t.translate(flip)
    return t


def run_rich(k: int) -> bytes:
    _check_order(k)
    prev, cur = b"", b"a"
    if k >= 2:
        prev, cur = b"a", b"aab"
    for _ in range(k - 2):
        prev, cur = cur, cur + cur + prev
    return cur


def random_text(n: int, sigma: int = 4, seed: int = 0) -> bytes:
    if n < 1:
        raise ValueError("length must be at least 1")
    if not 1 <= sigma <= 256:
        raise ValueError("alphabet size must be in 1..256")
    rng = np.random.default_rng(seed)
    base = 0 if sigma == 256 else ord("a")
    if base + sigma > 256:
        base = 256 - sigma
    return (rng.integers(0, sigma, size=n, dtype=np.uint8) + base).astype(np.uint8).tobytes()


def worst_case(m: int) -> bytes:
    """b . ab . aab . ... . a^m b: one rule per block, so no compression."""
    return b"".join(b"a" * i + b"b" for i in range(m + 1))


def order_for_length(family: str, length: int) -> int:
    """Smallest order whose word has at least ``length`` symbols."""
    if length < 1:
        raise ValueError("length must be at least 1")
    sizes = {
        "fib": fibonacci_length,
        "thue-morse": lambda k: 1 << (k - 1),
        # |r_k| = 2|r_{k-1}| + |r_{k-2}|
        "run-rich": _run_rich_length,
    }[family]
    k = 1
    while sizes(k) < length:
        k += 1
    return k


def _run_rich_length(k: int) -> int:
    a, b = 1, 3
    if k == 1:
        return 1
    for _ in range(k - 2):
        a, b = b, 2 * b + a
    return b


def generate(family: str, order: int | None = None, length: int | None = None,
             sigma: int = 4, seed: int = 0) -> bytes:
    if family == "random":
        if length is None:
            raise ValueError("random needs a length")
        return random_text(length, sigma, seed)
    makers = {"fib": fibonacci, "thue-morse": thue_morse, "run-rich": run_rich}
    if family not in makers:
        raise ValueError(f"unknown family {family!r}")
    if order is None:
        if length is None:
            raise ValueError(f"{family} needs an order or a length")
        order = order_for_length(family, length)
    text = makers[family](order)
    if length is not None:
        if length < 1 or length > len(text):
            raise ValueError("length must be in 1..len(word of the given order)")
        text = text[:length]
    return text
