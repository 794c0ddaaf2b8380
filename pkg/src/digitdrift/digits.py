"""Bit-level helpers: digit sums, LSB-first words, and run-length blocks.

All words here are read least significant bit first, so ``word[j]`` is
the coefficient of ``2**j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

BinaryWord = tuple[int, ...]


def s2(x: int) -> int:
    """Number of 1 digits in the binary expansion of ``x``."""
    if x < 0:
        raise ValueError("s2 is defined on non-negative integers")
    return x.bit_count()


def to_word(x: int) -> BinaryWord:
    """Canonical LSB-first word of ``x``; empty for 0."""
    if x < 0:
        raise ValueError("x must be non-negative")
    return tuple((x >> j) & 1 for j in range(x.bit_length()))


def word_value(word) -> int:
    return sum(int(b) << j for j, b in enumerate(word))


def parse_word(text: str) -> BinaryWord:
    """Parse an LSB-first bit string such as ``"00110"``."""
    if any(c not in "01" for c in text):
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text)


def format_word(word) -> str:
    return "".join(str(b) for b in word)


def pattern_count_l(a: int) -> int:
    """Count of "01" subwords in the LSB-first word of ``a``.

    Equivalently the number of positions j with a_j = 0 and a_{j+1} = 1.
    """
    if a < 0:
        raise ValueError("a must be non-negative")
    # bit j clear and bit j+1 set  <=>  bit j of (~a & (a >> 1))
    return s2(~a & (a >> 1) & ((1 << a.bit_length()) - 1))


@dataclass(frozen=True)
class BlockDecomposition:
    """Runs of equal digits in the canonical word of ``a``.

    ``b1[j]`` is the length of the run of ``a_j`` ending at ``j``;
    ``b2[j]`` is the length of the block preceding the one holding ``j``
    (0 inside the first block).
    """

    a: int
    blocks: tuple[tuple[int, int], ...]
    l: int
    b1: tuple[int, ...]
    b2: tuple[int, ...]

    @property
    def word(self) -> BinaryWord:
        return tuple(d for d, n in self.blocks for _ in range(n))

    @property
    def k(self) -> int:
        return len(self.blocks)


def block_decomposition(a: int) -> BlockDecomposition:
    if a < 1:
        raise ValueError("block decomposition needs a >= 1")
    word = to_word(a)
    blocks = tuple((d, sum(1 for _ in run)) for d, run in groupby(word))
    b1: list[int] = []
    b2: list[int] = []
    prev_len = 0
    for _, length in blocks:
        b1.extend(range(1, length + 1))
        b2.extend([prev_len] * length)
        prev_len = length
    return BlockDecomposition(
        a=a,
        blocks=blocks,
        l=pattern_count_l(a),
        b1=tuple(b1),
        b2=tuple(b2),
    )
