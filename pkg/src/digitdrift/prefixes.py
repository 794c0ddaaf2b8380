"""Summation tree walk: explicit prefix sets and brute-force counts.

This module is the independent check on :mod:`digitdrift.distribution`.
It never touches the operator matrices; instead it follows the
digit-by-digit addition of ``a`` to ``x`` along the tree whose vertices
are ``(residual addend, counter)``.

From ``(k, c)``: an even ``k`` has the single child ``(k/2, c)`` under both
edge symbols; an odd ``k`` goes to ``((k-1)/2, c+1)`` on a 0 and to
``((k+1)/2, c-1)`` on a 1.  Label 0 freezes the counter.  Label 1 is the
only way into label 0, and from ``(1, c)`` the words reaching ``(0, d)``
are exactly ``1**(c+1-d) 0``, so the walk stops at the first label 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .digits import BinaryWord, format_word
from .exactnum import DyadicRational, dyadic_sum


@dataclass(frozen=True)
class TreeState:
    label: int
    counter: int
    path: BinaryWord = ()


def children(v: TreeState) -> list[tuple[int, TreeState]]:
    """Edges leaving ``v`` as ``(symbol, child)`` pairs."""
    k, c, p = v.label, v.counter, v.path
    if k % 2 == 0:
        return [(0, TreeState(k // 2, c, p + (0,))), (1, TreeState(k // 2, c, p + (1,)))]
    return [(0, TreeState((k - 1) // 2, c + 1, p + (0,))),
            (1, TreeState((k + 1) // 2, c - 1, p + (1,)))]


@lru_cache(maxsize=4096)
def _frontier(a: int) -> tuple[tuple[BinaryWord, int, int], ...]:
    """Every path from ``(a, 0)`` to its first vertex with label <= 1.

    Returns ``(path, label, counter)`` triples; labels only shrink, so all
    paths end within ``bitlen(a)`` levels.
    """
    out = []
    stack = [TreeState(a, 0)]
    while stack:
        v = stack.pop()
        assert abs(v.counter) <= len(v.path)
        if v.label <= 1:
            out.append((v.path, v.label, v.counter))
            continue
        for _, child in reversed(children(v)):
            stack.append(child)
    return tuple(out)


@dataclass(frozen=True)
class PrefixSet:
    a: int
    d: int
    words: tuple[BinaryWord, ...]

    def as_strings(self) -> list[str]:
        return [format_word(w) for w in self.words]


def enumerate_prefixes(a: int, d: int) -> PrefixSet:
    """Minimal set of LSB-first words whose cylinders are the solutions
    of ``s2(x + a) - s2(x) = d``."""
    if a < 0:
        raise ValueError("a must be non-negative")
    words = []
    for path, label, c in _frontier(a):
        if label == 0:
            if c == d:
                words.append(path)
        else:
            ones = c + 1 - d
            if ones >= 0:
                words.append(path + (1,) * ones + (0,))
    words.sort(key=format_word)
    return PrefixSet(a, d, tuple(words))


def prefix_measure(ps: PrefixSet) -> DyadicRational:
    return dyadic_sum(DyadicRational.pow2(-len(w)) for w in ps.words)


# -- brute force -------------------------------------------------------------

_CHUNK = 1 << 22


def drift_counts(a: int, m: int) -> dict[int, int]:
    """``#{x < 2**m : s2(x + a) - s2(x) = d}`` for every ``d``, by enumeration."""
    if a < 0:
        raise ValueError("a must be non-negative")
    if m < a.bit_length() + 2:
        raise ValueError(f"m={m} too small for a={a}; need m >= bitlen(a) + 2")
    lo = -m - 1
    counts = np.zeros(2 * m + 3 + a.bit_length(), dtype=np.int64)
    for start in range(0, 1 << m, _CHUNK):
        x = np.arange(start, min(start + _CHUNK, 1 << m), dtype=np.uint64)
        drift = np.bitwise_count(x + np.uint64(a)).astype(np.int64) - np.bitwise_count(x)
        counts += np.bincount(drift - lo, minlength=counts.size)
    return {i + lo: int(c) for i, c in enumerate(counts) if c}


def empirical_frequency(a: int, d: int, m: int) -> DyadicRational:
    return DyadicRational(drift_counts(a, m).get(d, 0), m)


# -- text dumps -----------------------------------------------------------------

INDENT = "  "


def dump_tree(a: int, depth: int) -> str:
    """Plain-text listing of the summation tree and its collapsed graph."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    lines = [f"tree a={a} depth={depth}", f"({a},0)"]

    def walk(v: TreeState, level: int):
        if level == depth:
            return
        kids = children(v)
        if kids[0][1].label == kids[1][1].label:
            child = kids[0][1]
            lines.append(f"{INDENT * (level + 1)}0,1 -> ({child.label},{child.counter})")
            walk(child, level + 1)
            return
        for sym, child in kids:
            lines.append(f"{INDENT * (level + 1)}{sym} -> ({child.label},{child.counter})")
            walk(child, level + 1)

    walk(TreeState(a, 0), 0)
    lines.append(f"collapsed a={a} depth={depth}")
    for n in range(depth):
        q = a >> n
        lines.append(f"{INDENT * n}level {n}: {q} {q + 1}")
        for src, sym, dst, inc in _collapsed_edges(q):
            lines.append(f"{INDENT * (n + 1)}{src} -{sym}-> {dst} ({inc:+d})")
    q = a >> depth
    lines.append(f"{INDENT * depth}level {depth}: {q} {q + 1}")
    return "\n".join(lines) + "\n"


def _collapsed_edges(q: int) -> list[tuple[int, str, int, int]]:
    even, odd = (q, q + 1) if q % 2 == 0 else (q + 1, q)
    return sorted([
        (even, "0,1", even // 2, 0),
        (odd, "0", (odd - 1) // 2, 1),
        (odd, "1", (odd + 1) // 2, -1),
    ])


def collapsed_labels(a: int, level: int) -> tuple[int, int]:
    q = a >> level
    return q, q + 1
