"""Independent oracles used by the tests.

These recompute quantities from their defining formulas without going
through the package code paths they check.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import product


def raw_pair(k: int, a: int, b: int) -> list[int]:
    top = min(a + b, 4 * k + 2 - a - b) - 1
    return list(range(abs(a - b) + 1, top + 1, 2))


def norm(k: int, i: int) -> int:
    return min(i, 2 * k + 1 - i)


def fuse(k: int, labels) -> Counter:
    """Left fold of the displayed raw fusion rule, normalizing after each step."""
    acc = Counter({1: 1})
    for a in labels:
        nxt = Counter()
        for c, m in acc.items():
            for r in raw_pair(k, c, a):
                nxt[norm(k, r)] += m
        acc = nxt
    return acc


def rank0(k: int, labels) -> int:
    return fuse(k, labels)[1]


def rank_handles(k: int, g: int, labels) -> int:
    total = 0
    for hs in product(range(1, k + 1), repeat=g):
        total += rank0(k, list(labels) + [h for h in hs for _ in (0, 1)])
    return total


def weight(k: int, a: int) -> Fraction:
    return Fraction(-(2 * k - a) * (a - 1), 2 * (2 * k + 1))


def fib(m: int) -> int:
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
