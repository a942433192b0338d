"""Truncated arithmetic in Q_p for odd p, and in its quadratic extensions.

A nonzero element is stored as ``p**valuation * unit`` with ``unit`` known
modulo ``p**precision``.  Zero is stored with ``valuation=None``; its
``precision`` field then holds the *absolute* precision (``O(p**precision)``),
or ``None`` for an exact zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2

from .errors import NoSolution, NotSquare, UnsupportedPrime, ZeroToPrecision

DEFAULT_PRECISION = 32

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def check_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p < 3 or not gmpy2.is_prime(p):
        raise UnsupportedPrime(f"{p!r} is not an odd prime")
    return p


def p_valuation(n: int, p: int) -> int:
    """Exponent of p in the nonzero integer n."""
    if n == 0:
        raise ZeroToPrecision("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion: 1, -1, or 0 when p | a."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def canonical_nonsquare_unit(p: int) -> int:
    """Smallest positive integer that is a quadratic nonresidue mod p."""
    check_odd_prime(p)
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


@dataclass(frozen=True)
class PAdicNumber:
    prime: int
    valuation: int | None
    unit: int
    precision: int | None

    def __post_init__(self):
        check_odd_prime(self.prime)
        if self.valuation is None:
            if self.unit != 0:
                raise ValueError("zero must have unit 0")
            return
        if self.precision is None or self.precision < 1:
            raise ValueError("nonzero p-adic numbers need a positive precision")
        if not 0 < self.unit < self.prime**self.precision or self.unit % self.prime == 0:
            raise ValueError(f"bad unit {self.unit} for p={self.prime}")

    # -- construction ---------------------------------------------------------

    @classmethod
    def zero(cls, p: int, absprec: int | None = None) -> "PAdicNumber":
        return cls(p, None, 0, absprec)

    @classmethod
    def from_rational(cls, x: Rational, p: int, precision: int = DEFAULT_PRECISION) -> "PAdicNumber":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        num, den = x.numerator, x.denominator
        vn, vd = p_valuation(num, p), p_valuation(den, p)
        num //= p**vn
        den //= p**vd
        mod = p**precision
        return cls(p, vn - vd, num * pow(den, -1, mod) % mod, precision)

    def _coerce(self, other) -> "PAdicNumber":
        if isinstance(other, PAdicNumber):
            if other.prime != self.prime:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            prec = self.precision if self.valuation is not None else DEFAULT_PRECISION
            return PAdicNumber.from_rational(other, self.prime, prec or DEFAULT_PRECISION)
        return NotImplemented

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def absprec(self) -> float:
        """Absolute precision, ``inf`` for an exact zero."""
        if self.valuation is None:
            return math.inf if self.precision is None else self.precision
        return self.valuation + self.precision

    def min_valuation(self) -> float:
        """Lower bound for the true valuation (``inf`` only for exact zero)."""
        return self.absprec if self.valuation is None else self.valuation

    def residue(self) -> int:
        """Leading unit digit mod p."""
        if self.valuation is None:
            raise ZeroToPrecision("residue of zero")
        return self.unit % self.prime

    def balanced_unit(self) -> int:
        mod = self.prime**self.precision
        return self.unit if 2 * self.unit < mod else self.unit - mod

    def to_fraction(self) -> Fraction:
        """Smallest rational congruent to the unit (exact for rationals of small height)."""
        if self.valuation is None:
            return Fraction(0)
        return _reconstruct(self.unit, self.prime**self.precision) * Fraction(self.prime) ** self.valuation

    def square_class(self) -> "LocalSquareClass":
        if self.valuation is None:
            raise ZeroToPrecision("square class of zero")
        return LocalSquareClass(legendre(self.unit, self.prime) == -1, self.valuation % 2 == 1)

    def __str__(self) -> str:
        return str(self.to_fraction())

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self) -> "PAdicNumber":
        if self.valuation is None:
            return self
        mod = self.prime**self.precision
        return PAdicNumber(self.prime, self.valuation, (-self.unit) % mod, self.precision)

    def __add__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.prime
        absprec = min(self.absprec, other.absprec)
        terms = [x for x in (self, other) if x.valuation is not None]
        if not terms:
            return PAdicNumber.zero(p, None if absprec == math.inf else int(absprec))
        v0 = min(x.valuation for x in terms)
        if v0 >= absprec:
            return PAdicNumber.zero(p, int(absprec))
        width = int(absprec) - v0
        mod = p**width
        raw = sum(x.unit * p ** (x.valuation - v0) for x in terms) % mod
        if raw == 0:
            return PAdicNumber.zero(p, int(absprec))
        k = p_valuation(raw, p)
        return PAdicNumber(p, v0 + k, (raw // p**k) % p ** (width - k), width - k)

    __radd__ = __add__

    def __sub__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "PAdicNumber":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.prime
        if self.valuation is None or other.valuation is None:
            if (self.valuation is None and self.precision is None) or (
                other.valuation is None and other.precision is None
            ):
                return PAdicNumber.zero(p)
            bound = self.min_valuation() + other.min_valuation()
            return PAdicNumber.zero(p, int(bound))
        prec = min(self.precision, other.precision)
        return PAdicNumber(p, self.valuation + other.valuation,
                           self.unit * other.unit % p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PAdicNumber":
        if self.valuation is None:
            raise ZeroToPrecision("division by zero-to-precision")
        mod = self.prime**self.precision
        return PAdicNumber(self.prime, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PAdicNumber":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PAdicNumber":
        if n < 0:
            return self.inverse() ** (-n)
        result = PAdicNumber.from_rational(1, self.prime, self.precision or DEFAULT_PRECISION)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


@dataclass(frozen=True)
class LocalSquareClass:
    """Element of Q_p*/Q_p*^2 = {1, u, p, up}."""
    unit_nonsquare: bool
    odd_valuation: bool

    def __mul__(self, other: "LocalSquareClass") -> "LocalSquareClass":
        return LocalSquareClass(self.unit_nonsquare ^ other.unit_nonsquare,
                                self.odd_valuation ^ other.odd_valuation)

    def is_trivial(self) -> bool:
        return not (self.unit_nonsquare or self.odd_valuation)

    def __str__(self) -> str:
        parts = [s for s, bit in (("u", self.unit_nonsquare), ("p", self.odd_valuation)) if bit]
        return "*".join(parts) or "1"


class ExtKind(enum.Enum):
    UNRAMIFIED = "unramified"          # Q_p(sqrt(u))
    RAMIFIED = "ramified"              # Q_p(sqrt(p))
    RAMIFIED_TWISTED = "ramified_twisted"  # Q_p(sqrt(u p))


@dataclass(frozen=True)
class QuadExtension:
    base_prime: int
    kind: ExtKind

    def __post_init__(self):
        check_odd_prime(self.base_prime)

    @classmethod
    def adjoining(cls, d: LocalSquareClass | "PAdicNumber", p: int | None = None) -> "QuadExtension":
        """The extension Q_p(sqrt(d)) for a nonsquare d."""
        if isinstance(d, PAdicNumber):
            p = d.prime
            d = d.square_class()
        if d.is_trivial():
            raise ValueError("d is a square; Q_p(sqrt(d)) is not a field")
        if not d.odd_valuation:
            kind = ExtKind.UNRAMIFIED
        elif not d.unit_nonsquare:
            kind = ExtKind.RAMIFIED
        else:
            kind = ExtKind.RAMIFIED_TWISTED
        return cls(p, kind)

    @property
    def residue_field_size(self) -> int:
        p = self.base_prime
        return p * p if self.kind is ExtKind.UNRAMIFIED else p

    def __str__(self) -> str:
        root = {ExtKind.UNRAMIFIED: "u", ExtKind.RAMIFIED: "p", ExtKind.RAMIFIED_TWISTED: "u*p"}
        return f"Q_{self.base_prime}(sqrt({root[self.kind]}))"


def embed_square_class(c: LocalSquareClass, p: int, ext: QuadExtension | None) -> tuple[bool, bool]:
    """Square class of a Q_p element inside ``ext`` as (unit_nonsquare, odd_valuation).

    Units and valuations are taken relative to a uniformizer of ``ext``:
    p itself when unramified, sqrt(p) or sqrt(u p) when ramified.
    """
    if ext is None:
        return c.unit_nonsquare, c.odd_valuation
    if ext.kind is ExtKind.UNRAMIFIED:
        # every unit of Z_p is a square in the quadratic residue extension
        return False, c.odd_valuation
    if ext.kind is ExtKind.RAMIFIED:
        return c.unit_nonsquare, False
    # p = pi^2 / u with pi^2 = u p
    return c.unit_nonsquare ^ c.odd_valuation, False


def is_square(x: PAdicNumber) -> bool:
    if x.valuation is None:
        raise ZeroToPrecision("cannot decide squareness of zero-to-precision")
    return x.valuation % 2 == 0 and legendre(x.unit, x.prime) == 1


def _lift_sqrt(a: int, r: int, p: int, n: int) -> int:
    """Newton-lift a root r of x^2 = a (mod p) to a root mod p**n."""
    k = 1
    while k < n:
        k = min(2 * k, n)
        mod = p**k
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r % p**n


def _sqrt_residue(a: int, p: int) -> int:
    """Smallest positive square root of a nonzero residue mod p."""
    a %= p
    for r in range(1, p):
        if r * r % p == a:
            return r
    raise NotSquare(f"{a} is not a square mod {p}")


def hensel_sqrt(x: PAdicNumber) -> PAdicNumber:
    """Square root whose leading digit is the smallest residue root."""
    if not is_square(x):
        raise NotSquare(f"{x} is not a square in Q_{x.prime}")
    p, n = x.prime, x.precision
    r = _lift_sqrt(x.unit, _sqrt_residue(x.unit, p), p, n)
    return PAdicNumber(p, x.valuation // 2, r, n)


def is_square_in_extension(x: PAdicNumber, ext: QuadExtension) -> bool:
    if x.valuation is None:
        raise ZeroToPrecision("cannot decide squareness of zero-to-precision")
    if x.prime != ext.base_prime:
        raise ValueError("prime mismatch")
    unit_bit, val_bit = embed_square_class(x.square_class(), x.prime, ext)
    return not unit_bit and not val_bit


def hilbert_symbol(a: PAdicNumber, b: PAdicNumber) -> int:
    if a.valuation is None or b.valuation is None:
        raise ZeroToPrecision("Hilbert symbol of zero")
    p = a.prime
    return hilbert_from_classes(a.square_class(), b.square_class(), p)


def hilbert_from_classes(a: LocalSquareClass, b: LocalSquareClass, p: int) -> int:
    """Tame Hilbert symbol on square classes of Q_p, p odd."""
    return tame_hilbert(a.unit_nonsquare, a.odd_valuation, b.unit_nonsquare, b.odd_valuation, p)


def tame_hilbert(ua: bool, va: bool, ub: bool, vb: bool, q: int) -> int:
    """(-1)^(va vb (q-1)/2) * chi(ua)^vb * chi(ub)^va over a field with residue size q."""
    sign = 1
    if va and vb and ((q - 1) // 2) % 2:
        sign = -sign
    if ua and vb:
        sign = -sign
    if ub and va:
        sign = -sign
    return sign


def solve_norm_equation(b: PAdicNumber, c: PAdicNumber) -> tuple[PAdicNumber, PAdicNumber]:
    """Solve x0^2 - b x1^2 = c for a nonsquare unit b.

    Searches (x0, x1) mod p for a smooth point (x1 outer, x0 inner), then
    Hensel-lifts one coordinate with the other held fixed.
    """
    p = b.prime
    if b.valuation != 0 or legendre(b.unit, p) != -1:
        raise ValueError("b must be a nonsquare unit")
    if c.valuation is None:
        raise ZeroToPrecision("norm equation with c = 0")
    if c.valuation % 2:
        raise NoSolution(f"{c} has odd valuation; not a norm from the unramified extension")
    n = min(b.precision, c.precision)
    mod = p**n
    bu, cu = b.unit % mod, c.unit % mod
    for x1 in range(p):
        for x0 in range(p):
            if (x0 * x0 - bu * x1 * x1 - cu) % p:
                continue
            if x0 % p:
                r0 = _lift_sqrt((cu + bu * x1 * x1) % mod, x0, p, n)
                r1 = x1
            else:
                # x1 is a unit here; solve x1^2 = (x0^2 - c) / b
                target = (x0 * x0 - cu) * pow(bu, -1, mod) % mod
                r1 = _lift_sqrt(target, x1, p, n)
                r0 = x0
            scale = PAdicNumber.from_rational(1, p, n) if c.valuation == 0 else \
                PAdicNumber(p, c.valuation // 2, 1, n)
            return (_from_int(r0, p, n) * scale, _from_int(r1, p, n) * scale)
    raise AssertionError("unit norm equation has no point mod p")  # pragma: no cover


def _reconstruct(a: int, mod: int) -> Fraction:
    """Rational r/s = a mod m with |r|, s <= sqrt(m/2) (half-extended Euclid)."""
    bound = math.isqrt(mod // 2)
    r0, r1, s0, s1 = mod, a % mod, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        mid = a % mod
        return Fraction(mid if 2 * mid < mod else mid - mod)
    return Fraction(r1, s1)


def _from_int(n_: int, p: int, precision: int) -> PAdicNumber:
    if n_ == 0:
        return PAdicNumber.zero(p)
    return PAdicNumber.from_rational(n_, p, precision)
