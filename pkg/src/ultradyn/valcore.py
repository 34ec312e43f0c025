"""Exact extended rationals and p-adic valuations of integers and binomials.

Valuations are normalized so that ``v(p) = 1``; ``v(0)`` is ``+inf``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational

from .errors import (
    DegreeTooSmall,
    NotPrime,
    OutOfRange,
    UndefinedInfiniteSum,
    ZeroInput,
)

__all__ = [
    "ExtRat", "INF", "NEG_INF", "UnicritParams",
    "decompose", "is_prime", "vp_int", "vp_binom", "binom_valuations", "vp_fraction_den",
]

_FINITE, _POS_INF, _NEG_INF = "finite", "inf", "-inf"
_TEXT = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")


@total_ordering
class ExtRat:
    """A rational number, or one of ``+inf`` / ``-inf``.

    Finite values are stored as a reduced :class:`~fractions.Fraction`.
    Arithmetic with plain ``int`` and ``Fraction`` operands is supported;
    ``inf + (-inf)`` raises :class:`UndefinedInfiniteSum`.

    >>> ExtRat("3/8") + ExtRat("-1/4")
    ExtRat('1/8')
    >>> min(INF, ExtRat("5/2"))
    ExtRat('5/2')
    """

    __slots__ = ("kind", "value")

    def __init__(self, x=0):
        if type(x) is Fraction:
            object.__setattr__(self, "kind", _FINITE)
            object.__setattr__(self, "value", x)
            return
        if isinstance(x, ExtRat):
            kind, value = x.kind, x.value
        elif isinstance(x, str):
            kind, value = _parse(x)
        elif isinstance(x, bool):
            raise TypeError("bool is not a valuation")
        elif isinstance(x, (int, Fraction, Rational)):
            kind, value = _FINITE, Fraction(x)
        else:
            raise TypeError(f"cannot make an ExtRat from {type(x).__name__}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("ExtRat is immutable")

    @classmethod
    def _inf(cls, kind):
        obj = object.__new__(cls)
        object.__setattr__(obj, "kind", kind)
        object.__setattr__(obj, "value", None)
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == _FINITE

    @property
    def is_pos_inf(self) -> bool:
        return self.kind == _POS_INF

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == _NEG_INF

    @property
    def numerator(self) -> int:
        return self._finite().numerator

    @property
    def denominator(self) -> int:
        return self._finite().denominator

    def _finite(self) -> Fraction:
        if self.value is None:
            raise ValueError(f"{self} is not finite")
        return self.value

    def to_fraction(self) -> Fraction:
        return self._finite()

    # -- order --------------------------------------------------------------

    def _rank(self):
        if self.kind == _NEG_INF:
            return (-1, 0)
        if self.kind == _POS_INF:
            return (1, 0)
        return (0, self.value)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._rank() == other._rank()

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._rank() < other._rank()

    def __hash__(self):
        if self.kind == _FINITE:
            return hash(self.value)
        return hash(self.kind)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        if self.kind == _POS_INF:
            return NEG_INF
        if self.kind == _NEG_INF:
            return INF
        return ExtRat(-self.value)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_finite and other.is_finite:
            return ExtRat(self.value + other.value)
        kinds = {self.kind, other.kind} - {_FINITE}
        if len(kinds) == 2:
            raise UndefinedInfiniteSum("inf + (-inf) is undefined")
        return INF if kinds == {_POS_INF} else NEG_INF

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_finite and other.is_finite:
            return ExtRat(self.value * other.value)
        if not self.is_finite and not other.is_finite:
            raise ValueError("product of two infinities is not supported")
        inf, scalar = (self, other) if not self.is_finite else (other, self)
        if scalar.value == 0:
            raise ValueError("0 * inf is undefined")
        return inf if scalar.value > 0 else -inf

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.is_finite:
            raise ValueError("division by an infinite value")
        if other.value == 0:
            raise ZeroDivisionError("ExtRat division by zero")
        return self * ExtRat(1 / other.value)

    # -- text ---------------------------------------------------------------

    def __str__(self):
        if self.kind != _FINITE:
            return self.kind
        return str(self.value)

    def __repr__(self):
        return f"ExtRat({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "ExtRat":
        return cls(text)


def _parse(text: str):
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return _POS_INF, None
    if t == "-inf":
        return _NEG_INF, None
    m = _TEXT.match(t)
    if not m:
        raise ValueError(f"not an extended rational: {text!r} (expected a/b, inf or -inf)")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return _FINITE, Fraction(num, den)


def _coerce(x):
    if isinstance(x, ExtRat):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ExtRat(x)
    return NotImplemented


INF = ExtRat._inf(_POS_INF)
NEG_INF = ExtRat._inf(_NEG_INF)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class UnicritParams:
    """Residue characteristic ``p`` and degree ``ell = N * p**k`` with ``p ∤ N``."""

    p: int
    ell: int
    bigN: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"p={self.p} is not prime")
        if self.ell < 2:
            raise DegreeTooSmall(f"ell={self.ell} must be at least 2")
        if self.bigN < 1 or self.k < 0 or self.bigN % self.p == 0:
            raise ValueError(f"invalid factorization N={self.bigN}, k={self.k} for p={self.p}")
        if self.bigN * self.p ** self.k != self.ell:
            raise ValueError(f"ell={self.ell} != {self.bigN}*{self.p}^{self.k}")

    @property
    def pk(self) -> int:
        return self.p ** self.k

    @property
    def wild(self) -> bool:
        """True when ``p`` divides ``ell``."""
        return self.k >= 1

    def __str__(self):
        return f"p={self.p}, ell={self.ell} (N={self.bigN}, k={self.k})"


def decompose(p: int, ell: int) -> UnicritParams:
    """Split ``ell`` as ``N * p**k`` with ``p`` not dividing ``N``."""
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if ell < 2:
        raise DegreeTooSmall(f"ell={ell} must be at least 2")
    n, k = ell, 0
    while n % p == 0:
        n //= p
        k += 1
    return UnicritParams(p, ell, n, k)


def vp_int(p: int, n: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ZeroInput("v_p(0) is +inf; use ExtRat for that")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def vp_binom(p: int, ell: int, n: int) -> int:
    """``v_p(binom(ell, n))``, counted as base-``p`` carries in ``n + (ell - n)`` (Kummer)."""
    if not 0 <= n <= ell:
        raise OutOfRange(f"n={n} not in [0, {ell}]")
    a, b = n, ell - n
    carry = carries = 0
    while a or b:
        carry = 1 if a % p + b % p + carry >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


@lru_cache(maxsize=256)
def binom_valuations(p: int, ell: int) -> tuple:
    """``(v_p(binom(ell, 0)), ..., v_p(binom(ell, ell)))``."""
    return tuple(vp_binom(p, ell, n) for n in range(ell + 1))


def vp_fraction_den(p: int, x) -> int:
    """Exponent of ``p`` in the reduced denominator of a finite rational."""
    den = ExtRat(x).denominator if not isinstance(x, Fraction) else x.denominator
    return vp_int(p, den)
