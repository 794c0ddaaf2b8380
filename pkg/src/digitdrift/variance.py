"""Quadratic Taylor coefficient ``V(a)`` of the characteristic function.

Near ``theta = 0`` each bit matrix expands as ``I_k + theta alpha_k +
theta**2 beta_k``.  Left multiplication by ``(1, 1)`` fixes every ``I_k``
and kills every ``alpha_k``, so only single ``beta`` insertions survive in
the quadratic term:

    V(a) = (1,1) (beta_inf v_{N+1} + sum_j beta_{a_j} v_j),
    v_0 = (1, 0),  v_{j+1} = I_{a_j} v_j.

The variance of ``mu_a`` is ``-2 V(a)`` and everything is exact.
"""

from __future__ import annotations

import csv
import io
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .digits import BinaryWord, block_decomposition, pattern_count_l, to_word, word_value
from .exactnum import HALF, ONE, ZERO, DyadicRational

Matrix = tuple[tuple[DyadicRational, DyadicRational], tuple[DyadicRational, DyadicRational]]
Vector = tuple[DyadicRational, DyadicRational]

_Q = DyadicRational(1, 2)


def _m(a, b, c, d) -> Matrix:
    return ((a, b), (c, d))


I0 = _m(ONE, HALF, ZERO, HALF)
I1 = _m(HALF, ZERO, HALF, ONE)
I_INF = _m(ONE, ONE, ZERO, ZERO)
BETA0 = _m(ZERO, -_Q, ZERO, -_Q)
BETA1 = _m(-_Q, ZERO, -_Q, ZERO)
BETA_INF = _m(ZERO, -ONE, ZERO, ZERO)
# alpha_k = i * ALPHA_k; they never reach V(a), kept so the annihilation can be checked.
ALPHA0 = _m(ZERO, -HALF, ZERO, HALF)
ALPHA1 = _m(-HALF, ZERO, HALF, ZERO)

IDENTITY_PART = {0: I0, 1: I1, "inf": I_INF}
QUADRATIC_PART = {0: BETA0, 1: BETA1, "inf": BETA_INF}
LINEAR_PART = {0: ALPHA0, 1: ALPHA1}


def matvec(M: Matrix, v: Vector) -> Vector:
    return (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])


def row_sum(M: Matrix) -> tuple[DyadicRational, DyadicRational]:
    """``(1, 1) M``."""
    return (M[0][0] + M[1][0], M[0][1] + M[1][1])


def trajectory(word: Sequence[int]) -> list[Vector]:
    """``v_0 .. v_{N+1}`` for the bits of ``word``."""
    v: Vector = (ONE, ZERO)
    out = [v]
    for bit in word:
        v = matvec(IDENTITY_PART[bit], v)
        out.append(v)
    return out


def _contributions(word: Sequence[int]) -> tuple[list[DyadicRational], DyadicRational]:
    """Per-position values ``-(1,1) beta_{a_j} v_j`` and the closing ``-(1,1) beta_inf v_{N+1}``."""
    vs = trajectory(word)
    # (1,1) beta_0 = -(0, 1/2), (1,1) beta_1 = -(1/2, 0), (1,1) beta_inf = -(0, 1)
    per = [vs[j][1].half() if bit == 0 else vs[j][0].half() for j, bit in enumerate(word)]
    return per, vs[-1][1]


def V_of_word(word: Sequence[int]) -> DyadicRational:
    if not word or word[-1] != 1:
        raise ValueError("word must be canonical and non-empty")
    per, closing = _contributions(word)
    total = closing
    for c in per:
        total += c
    return -total


def V(a: int) -> DyadicRational:
    """Exact quadratic coefficient; the variance of ``mu_a`` is ``-2 V(a)``."""
    if a < 1:
        raise ValueError("V(a) needs a >= 1 (mu_0 is a point mass with variance 0)")
    return V_of_word(to_word(a))


def variance(a: int) -> DyadicRational:
    return ZERO if a == 0 else -V(a).scale_pow2(1)


@dataclass(frozen=True)
class PositionBound:
    j: int
    lower: DyadicRational
    value: DyadicRational
    upper: DyadicRational

    @property
    def ok(self) -> bool:
        return self.lower <= self.value <= self.upper


@dataclass(frozen=True)
class PositionBounds:
    a: int
    positions: tuple[PositionBound, ...]
    closing_value: DyadicRational
    closing_upper: DyadicRational

    @property
    def ok(self) -> bool:
        """Every per-position sandwich holds (the closing term is reported separately)."""
        return all(p.ok for p in self.positions)

    @property
    def closing_ok(self) -> bool:
        """``closing_value <= 2**-(b1_N - 1)``; this fails for many ``a`` (``a = 3``)."""
        return self.closing_value <= self.closing_upper

    @property
    def closing_le_one(self) -> bool:
        """The weaker closing bound ``<= 1``, which always holds."""
        return self.closing_value <= ONE


def per_position_bounds(a: int) -> PositionBounds:
    """Block-length sandwich for each ``-(1,1) beta_{a_j} v_j``:
    ``2**-b1 (1 - 2**-b2) <= value <= 2**-b1``; the closing term is at most
    ``2**-(b1_N - 1)``."""
    blocks = block_decomposition(a)
    per, closing = _contributions(blocks.word)
    rows = []
    for j, (b1, b2, value) in enumerate(zip(blocks.b1, blocks.b2, per)):
        upper = DyadicRational.pow2(-b1)
        lower = upper * (ONE - DyadicRational.pow2(-b2))
        rows.append(PositionBound(j, lower, value, upper))
    return PositionBounds(a, tuple(rows), closing, DyadicRational.pow2(1 - blocks.b1[-1]))


def block_weight(a: int) -> DyadicRational:
    """``sum_j 2**-b1_j``, which lies in ``[l(a), 2 l(a) + 1]``."""
    total = ZERO
    for b in block_decomposition(a).b1:
        total += DyadicRational.pow2(-b)
    return total


@dataclass(frozen=True)
class VarianceReport:
    a: int
    l: int
    neg2V: DyadicRational
    lower: int
    stated_upper: int
    proof_upper: int

    @property
    def lower_ok(self) -> bool:
        return self.lower <= self.neg2V

    @property
    def stated_upper_ok(self) -> bool:
        return self.neg2V <= self.stated_upper

    @property
    def proof_upper_ok(self) -> bool:
        return self.neg2V <= self.proof_upper

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "l": self.l,
            "neg2V": self.neg2V.to_json(),
            "neg2V_decimal": self.neg2V.to_decimal(12),
            "lower": self.lower,
            "stated_upper": self.stated_upper,
            "proof_upper": self.proof_upper,
            "lower_ok": self.lower_ok,
            "stated_upper_ok": self.stated_upper_ok,
            "proof_upper_ok": self.proof_upper_ok,
        }


def variance_bounds_check(a: int) -> VarianceReport:
    l = pattern_count_l(a)
    return VarianceReport(a, l, variance(a), l - 1, 2 * (2 * l + 1), 2 * (2 * l + 2))


def bound_thresholds(reports: Iterable[VarianceReport]) -> dict[str, int | None]:
    """Smallest ``L`` such that each bound holds for every report with ``l >= L``.

    ``None`` means the bound fails at the largest ``l`` seen.
    """
    reports = list(reports)
    out: dict[str, int | None] = {}
    for name in ("lower_ok", "stated_upper_ok", "proof_upper_ok"):
        failing = [r.l for r in reports if not getattr(r, name)]
        if not failing:
            out[name[:-3]] = min((r.l for r in reports), default=0)
        elif max(failing) >= max(r.l for r in reports):
            out[name[:-3]] = None
        else:
            out[name[:-3]] = max(failing) + 1
    return out


# -- families ----------------------------------------------------------------


def _family_a(n: int) -> BinaryWord:
    return (1,) + (0, 1) * n


def _family_b(n: int) -> BinaryWord:
    return (1, 1, 0, 0) * n + (1, 1)


def _family_c(n: int) -> BinaryWord:
    return (1, 1, 1, 0, 0, 0) * n + (1, 1, 1)


def _family_d(n: int) -> BinaryWord:
    word: list[int] = []
    for k in range(1, n + 1):
        if k > 1:
            word.extend([0] * (k - 1))
        word.extend([1] * k)
    return tuple(word)


FAMILIES: dict[str, tuple[Callable[[int], BinaryWord], int, str]] = {
    "A": (_family_a, 0, "sum_{k<=n} 2^(2k)"),
    "B": (_family_b, 0, "sum_{k<=n} 2^(4k) + 2^(4k+1)"),
    "C": (_family_c, 0, "sum_{k<=n} 2^(6k) + 2^(6k+1) + 2^(6k+2)"),
    "D": (_family_d, 1, "word 1 0 1^2 0^2 ... 1^n"),
}

DEFAULT_BIT_BUDGET = 10 ** 6
_MAX_DECIMAL_BITS = 4096


@dataclass(frozen=True)
class ScanRow:
    n: int
    word: BinaryWord
    l: int
    neg2V: DyadicRational

    @property
    def bitlen(self) -> int:
        return len(self.word)

    @property
    def a(self) -> int:
        return word_value(self.word)

    @property
    def ratio(self) -> Fraction | None:
        return None if self.l == 0 else self.neg2V.to_fraction() / self.l

    def ratio_decimal(self, digits: int = 12) -> str | None:
        r = self.ratio
        if r is None:
            return None
        with localcontext() as ctx:
            ctx.prec = digits + 40
            q = Decimal(r.numerator) / Decimal(r.denominator)
            return f"{q.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN):f}"

    def to_json(self) -> dict:
        r = self.ratio
        return {
            "n": self.n,
            "a": str(self.a) if self.bitlen <= _MAX_DECIMAL_BITS else None,
            "bitlen": self.bitlen,
            "l": self.l,
            "neg2V": self.neg2V.to_json(),
            "ratio": None if r is None else {"num": str(r.numerator), "den": str(r.denominator)},
            "ratio_decimal": self.ratio_decimal(),
        }


def _resolve_family(family) -> tuple[Callable[[int], Sequence[int]], int]:
    if callable(family):
        return family, 0
    try:
        gen, start, _ = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return gen, start


def ratio_scan(family, n_max: int, bit_budget: int = DEFAULT_BIT_BUDGET,
               n_min: int | None = None) -> list[ScanRow]:
    """Exact ``-2V(a(n))`` and ``-2V/l`` along a family of words.

    ``family`` is a key of :data:`FAMILIES` or a callable mapping ``n`` to an
    LSB-first bit sequence (or to an integer ``a(n)``).
    """
    gen, start = _resolve_family(family)
    if n_min is not None:
        start = n_min
    rows = []
    for n in range(start, n_max + 1):
        word = gen(n)
        if isinstance(word, int):
            word = to_word(word)
        word = tuple(int(b) for b in word)
        while word and word[-1] == 0:
            word = word[:-1]
        if len(word) > bit_budget:
            raise ValueError(f"n={n}: word of {len(word)} bits exceeds budget {bit_budget}")
        if not word:
            raise ValueError(f"n={n}: family produced a = 0")
        l = sum(1 for j in range(len(word) - 1) if word[j] == 0 and word[j + 1] == 1)
        rows.append(ScanRow(n, word, l, -V_of_word(word).scale_pow2(1)))
    return rows


def scan_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "bitlen", "l", "neg2V_num", "neg2V_exp", "ratio_decimal"])
    for r in rows:
        dec = r.ratio_decimal()
        w.writerow([r.n, r.bitlen, r.l, r.neg2V.numerator, r.neg2V.exponent,
                    "" if dec is None else dec])
    return buf.getvalue()
