"""Exact law of the drift ``s2(x + a) - s2(x)`` for uniformly random ``x``.

The computation follows the collapsed summation graph: at level ``n``
the two live vertices carry residual addends ``q = a >> n`` and ``q + 1``,
and a pair of measures ``(eta1, eta2)`` records where the counter sits on
each of them.  One bit of ``a`` advances the pair by one of two operator
matrices; once every bit is consumed the pair sits on labels ``(0, 1)``
and the remaining mass on label 1 drains into label 0 with a geometric
spread, which ``close_distribution`` sums in closed form.

Every ``mu_a`` with ``a >= 1`` therefore has a finite exact part plus a
left tail ``mu(d) = mu(D) * 2**(d - D)`` for ``d < D``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .digits import to_word
from .exactnum import ONE, ZERO, DyadicRational, dyadic_sum

Measure = Mapping[int, DyadicRational]


def _clean(m: Mapping[int, DyadicRational]) -> dict[int, DyadicRational]:
    out = {}
    for d in sorted(m):
        v = m[d]
        if v < 0:
            raise ValueError(f"negative mass {v} at d={d}")
        if v:
            out[d] = v
    return out


def _mass(m: Measure) -> DyadicRational:
    return dyadic_sum(m.values())


@dataclass(frozen=True)
class StateVector:
    """Level-``n`` pair of counter measures on the collapsed graph.

    ``label`` is the smaller residual addend ``a >> level`` when known;
    the larger vertex is always ``label + 1``.
    """

    eta1: dict[int, DyadicRational]
    eta2: dict[int, DyadicRational]
    level: int = 0
    label: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "eta1", _clean(self.eta1))
        object.__setattr__(self, "eta2", _clean(self.eta2))

    @classmethod
    def initial(cls, a: int | None = None) -> StateVector:
        return cls({0: ONE}, {}, 0, a)

    @property
    def mass(self) -> DyadicRational:
        return _mass(self.eta1) + _mass(self.eta2)


def step(state: StateVector, bit: int) -> StateVector:
    """Apply the operator matrix for one bit of ``a``.

    bit 0: eta1'(d) = eta1(d) + eta2(d-1)/2,  eta2'(d) = eta2(d+1)/2
    bit 1: eta1'(d) = eta1(d-1)/2,            eta2'(d) = eta1(d+1)/2 + eta2(d)
    """
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    label = state.label
    if label is not None:
        if label & 1 != bit:
            raise ValueError(f"bit {bit} does not match vertex label {label}")
        label >>= 1
    e1, e2 = state.eta1, state.eta2
    n1: dict[int, DyadicRational]
    n2: dict[int, DyadicRational]
    if bit == 0:
        n1 = dict(e1)
        for d, v in e2.items():
            n1[d + 1] = n1.get(d + 1, ZERO) + v.half()
        n2 = {d - 1: v.half() for d, v in e2.items()}
    else:
        n2 = dict(e2)
        for d, v in e1.items():
            n2[d - 1] = n2.get(d - 1, ZERO) + v.half()
        n1 = {d + 1: v.half() for d, v in e1.items()}
    return StateVector(n1, n2, state.level + 1, label)


def run_bits(a: int) -> StateVector:
    """Push the initial state ``(delta_0, 0)`` through every bit of ``a``."""
    if a < 0:
        raise ValueError("a must be non-negative")
    state = StateVector.initial(a)
    for bit in to_word(a):
        state = step(state, bit)
    return state


class TailedMeasure:
    """Non-negative measure on Z: exact values on ``[D, d_max]`` plus,
    when ``tail`` is set, ``m(d) = m(D) * 2**(d - D)`` for every ``d < D``.

    Instances are normalized on construction: zero entries are dropped and
    ``D`` is raised as far as the geometric rule allows, so structurally
    equal objects are equal measures.
    """

    __slots__ = ("finite", "D", "tail")

    def __init__(self, finite: Mapping[int, DyadicRational], D: int | None = None,
                 tail: bool = False):
        values = _clean(finite)
        if tail:
            if D is None:
                raise ValueError("a tailed measure needs a threshold D")
            if not values.get(D):
                raise ValueError("tail anchor mu(D) must be positive")
            if any(d < D for d in values):
                raise ValueError("finite entries below D")
            while values.get(D + 1) == values[D].scale_pow2(1):
                del values[D]
                D += 1
        else:
            D = min(values) if values else 0
        self.finite = values
        self.D = D
        self.tail = tail

    def __call__(self, d: int) -> DyadicRational:
        if self.tail and d < self.D:
            return self.finite[self.D].scale_pow2(d - self.D)
        return self.finite.get(d, ZERO)

    @property
    def d_max(self) -> int:
        return max(self.finite)

    @property
    def tail_anchor(self) -> DyadicRational:
        return self.finite[self.D] if self.tail else ZERO

    def expanded(self, min_d: int) -> dict[int, DyadicRational]:
        """Values on ``[min(min_d, D), d_max]`` with the tail written out."""
        lo = min(min_d, self.D)
        return {d: self(d) for d in range(lo, self.d_max + 1) if self(d)}

    def total_mass(self) -> DyadicRational:
        return _mass(self.finite) + self.tail_anchor

    def shift(self, k: int) -> TailedMeasure:
        """Translate by ``k``: the result at ``d`` is ``self(d - k)``."""
        return TailedMeasure({d + k: v for d, v in self.finite.items()},
                             self.D + k, self.tail)

    def scale_pow2(self, k: int) -> TailedMeasure:
        return TailedMeasure({d: v.scale_pow2(k) for d, v in self.finite.items()},
                             self.D, self.tail)

    def __add__(self, other: TailedMeasure) -> TailedMeasure:
        if not isinstance(other, TailedMeasure):
            return NotImplemented
        if not self.finite:
            return other
        if not other.finite:
            return self
        lo = min(self.D, other.D)
        hi = max(self.d_max, other.d_max)
        values = {d: self(d) + other(d) for d in range(lo, hi + 1)}
        tail = self.tail or other.tail
        return TailedMeasure(values, lo if tail else None, tail)

    def _key(self):
        return (self.D, self.tail, tuple(self.finite.items()))

    def __eq__(self, other):
        if not isinstance(other, TailedMeasure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        body = ", ".join(f"{d}: {v}" for d, v in self.finite.items())
        return f"{type(self).__name__}({{{body}}}, D={self.D}, tail={self.tail})"


class TailedDistribution(TailedMeasure):
    """A :class:`TailedMeasure` of total mass exactly one."""

    __slots__ = ()

    def __init__(self, finite, D=None, tail=False):
        super().__init__(finite, D, tail)
        if self.total_mass() != ONE:
            raise ValueError(f"total mass {self.total_mass()} != 1")

    @classmethod
    def of(cls, m: TailedMeasure) -> TailedDistribution:
        return cls(m.finite, m.D, m.tail)


def close_distribution(state: StateVector) -> TailedDistribution:
    """Exact limit of infinitely many zero-bit steps, summed over both vertices.

    mu(d) = eta1(d) + sum_{j>=0} 2**-(j+1) * eta2(d + j - 1)
    """
    if state.label is not None and state.label != 0:
        raise ValueError(f"state sits on labels ({state.label}, {state.label + 1}); "
                         "closing needs labels (0, 1)")
    e1, e2 = state.eta1, state.eta2
    if not e2:
        return TailedDistribution(e1)
    low = min(e2) + 1
    if e1:
        low = min(low, min(e1) - 1)
    top = max(max(e2) + 1, max(e1) if e1 else low)
    # drained(d) = (drained(d + 1) + eta2(d - 1)) / 2, zero above max(eta2) + 1
    values: dict[int, DyadicRational] = {}
    drained = ZERO
    for d in range(top, low - 1, -1):
        drained = (drained + e2.get(d - 1, ZERO)).half()
        values[d] = e1.get(d, ZERO) + drained
    return TailedDistribution(values, low, True)


@lru_cache(maxsize=8192)
def mu(a: int) -> TailedDistribution:
    """The exact drift distribution for adding ``a``."""
    return close_distribution(run_bits(a))


def moment(dist: TailedMeasure, order: int) -> DyadicRational:
    """Exact ``sum_d d**order * dist(d)``, tail included in closed form.

    With t = dist(D), the tail below D contributes t, t*(D - 2) and
    t*(D**2 - 4*D + 6) to orders 0, 1, 2.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    total = dyadic_sum(v * (d ** order) for d, v in dist.finite.items())
    if dist.tail:
        D, t = dist.D, dist.tail_anchor
        total += t * (1, D - 2, D * D - 4 * D + 6)[order]
    return total


def recursion_check(a: int) -> bool:
    """Both halving identities, as exact equalities of measures:
    mu(2a) = mu(a) and mu(2a+1)(d) = mu(a)(d-1)/2 + mu(a+1)(d+1)/2."""
    if a < 0:
        raise ValueError("a must be non-negative")
    even_ok = mu(2 * a) == mu(a)
    combined = mu(a).shift(1).scale_pow2(-1) + mu(a + 1).shift(-1).scale_pow2(-1)
    return even_ok and combined == mu(2 * a + 1)


def support_range(dist: TailedMeasure, min_mass: DyadicRational) -> range:
    """Integers ``d`` from ``d_max`` downward while ``dist(d)`` may reach ``min_mass``.

    Below ``D`` values halve each step, so the scan stops at the first tail
    value under the threshold.
    """
    lo = dist.D
    if dist.tail:
        t = dist.tail_anchor
        while t.scale_pow2(lo - 1 - dist.D) >= min_mass:
            lo -= 1
    return range(lo, dist.d_max + 1)


# -- export -------------------------------------------------------------------


def to_json(dist: TailedMeasure, a: int | None = None) -> dict:
    return {
        "a": a,
        "D": dist.D,
        "finite": [[d, v.to_json()] for d, v in dist.finite.items()],
        "tail": dist.tail,
    }


def from_json(obj: dict) -> TailedDistribution:
    finite = {int(d): DyadicRational.from_json(v) for d, v in obj["finite"]}
    return TailedDistribution(finite, obj["D"], obj["tail"])


def to_csv(dist: TailedMeasure, digits: int = 12, min_d: int | None = None) -> str:
    rows = dist.finite if min_d is None else dist.expanded(min_d)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "exact_num", "exact_exp", "decimal"])
    for d in sorted(rows, reverse=True):
        v = rows[d]
        w.writerow([d, v.numerator, v.exponent, v.to_decimal(digits)])
    return buf.getvalue()
