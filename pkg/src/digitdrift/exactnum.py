"""Exact dyadic rationals ``num / 2**exp``.

Every probability produced by the drift recursion is a finite sum of
powers of one half, so a numerator/exponent pair is a lossless and
cheap representation.  Values are kept normalized: the numerator is odd
or zero, and zero always carries exponent 0.

Negative numerators are allowed so that signed moments can be formed;
probability containers check non-negativity themselves.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from numbers import Integral


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


class DyadicRational:
    """Immutable exact value ``numerator / 2**exponent`` with ``exponent >= 0``."""

    __slots__ = ("_num", "_exp")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        if not isinstance(numerator, Integral) or not isinstance(exponent, Integral):
            raise TypeError("numerator and exponent must be integers")
        numerator = int(numerator)
        exponent = int(exponent)
        if numerator == 0:
            exponent = 0
        else:
            if exponent < 0:
                numerator <<= -exponent
                exponent = 0
            tz = min(_trailing_zeros(numerator), exponent)
            numerator >>= tz
            exponent -= tz
        self._num = numerator
        self._exp = exponent

    @classmethod
    def _raw(cls, numerator: int, exponent: int) -> DyadicRational:
        obj = object.__new__(cls)
        obj._num = numerator
        obj._exp = exponent
        return obj

    @classmethod
    def pow2(cls, k: int) -> DyadicRational:
        """Return ``2**k`` for any integer ``k``."""
        if k >= 0:
            return cls._raw(1 << k, 0)
        return cls._raw(1, -k)

    @classmethod
    def from_fraction(cls, q: Fraction) -> DyadicRational:
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, den.bit_length() - 1)

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> DyadicRational | None:
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, Integral):
            return DyadicRational._raw(int(other), 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._exp >= o._exp:
            return DyadicRational(self._num + (o._num << (self._exp - o._exp)), self._exp)
        return DyadicRational((self._num << (o._exp - self._exp)) + o._num, o._exp)

    __radd__ = __add__

    def __neg__(self) -> DyadicRational:
        return DyadicRational._raw(-self._num, self._exp)

    def __pos__(self) -> DyadicRational:
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DyadicRational(self._num * o._num, self._exp + o._exp)

    __rmul__ = __mul__

    def scale_pow2(self, k: int) -> DyadicRational:
        """Return ``self * 2**k`` exactly."""
        return DyadicRational(self._num, self._exp - k)

    def half(self) -> DyadicRational:
        return self.scale_pow2(-1)

    def __abs__(self) -> DyadicRational:
        return DyadicRational._raw(abs(self._num), self._exp)

    # -- comparison ---------------------------------------------------------

    def _cmp_key(self, o: DyadicRational) -> tuple[int, int]:
        e = max(self._exp, o._exp)
        return self._num << (e - self._exp), o._num << (e - o._exp)

    def __eq__(self, other):
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and self._exp == o._exp

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cmp_key(o)
        return a < b

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cmp_key(o)
        return a <= b

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cmp_key(o)
        return a > b

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._cmp_key(o)
        return a >= b

    def __bool__(self) -> bool:
        return self._num != 0

    # -- conversion ---------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self._num, 1 << self._exp)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def to_decimal(self, digits: int) -> str:
        """Correctly rounded decimal string with ``digits`` fractional digits.

        Dyadic values have terminating expansions, so trailing zeros are
        trimmed, keeping at least one fractional digit.
        """
        if digits < 1:
            raise ValueError("digits must be >= 1")
        # num / 2**e == num * 5**e / 10**e, exact as a Decimal.
        exact = Decimal(self._num * 5**self._exp).scaleb(-self._exp)
        with localcontext() as ctx:
            ctx.prec = max(len(str(abs(self._num * 5**self._exp))), 1) + digits + 5
            q = exact.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
        text = f"{q:f}"
        if "." in text:
            text = text.rstrip("0")
            if text.endswith("."):
                text += "0"
        else:
            text += ".0"
        if text in ("-0.0",):
            text = "0.0"
        return text

    def to_json(self) -> dict:
        return {"num": str(self._num), "exp": self._exp}

    @classmethod
    def from_json(cls, obj: dict) -> DyadicRational:
        value = cls(int(obj["num"]), int(obj["exp"]))
        if value._num != int(obj["num"]) or value._exp != int(obj["exp"]):
            raise ValueError(f"non-normalized dyadic payload: {obj!r}")
        return value

    def __repr__(self) -> str:
        return f"DyadicRational({self._num}, {self._exp})"

    def __str__(self) -> str:
        if self._exp == 0:
            return str(self._num)
        return f"{self._num}/2^{self._exp}"


ZERO = DyadicRational._raw(0, 0)
ONE = DyadicRational._raw(1, 0)
HALF = DyadicRational._raw(1, 1)


def add(x: DyadicRational, y: DyadicRational) -> DyadicRational:
    return x + y


def scale_pow2(x: DyadicRational, k: int) -> DyadicRational:
    return x.scale_pow2(k)


def to_decimal(x: DyadicRational, digits: int) -> str:
    return x.to_decimal(digits)


def dyadic_sum(values) -> DyadicRational:
    """Sum an iterable of dyadics with one normalization at the end."""
    values = list(values)
    if not values:
        return ZERO
    e = max(v._exp for v in values)
    return DyadicRational(sum(v._num << (e - v._exp) for v in values), e)
