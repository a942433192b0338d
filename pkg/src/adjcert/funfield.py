"""Scalars of F = Q_p(t): Laurent polynomials with p-adic coefficients,
the monomial square-class group on (-1, u, p, t), and field tags."""
from __future__ import annotations

import dataclasses
import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import DegreeOverflow, FieldMismatch, NoSolution, NotMonomial, ZeroToPrecision
from .padic import (
    DEFAULT_PRECISION,
    LocalSquareClass,
    PAdicNumber,
    QuadExtension,
    canonical_nonsquare_unit,
    check_odd_prime,
    hensel_sqrt,
    is_square,
    legendre,
    p_valuation,
    solve_norm_equation,
)

MAX_DEGREE = 64

Scalar = Union[int, Fraction, PAdicNumber]


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c_k t^k.  ``floor`` bounds the p-adic valuation of
    coefficients that were pruned as zero-to-precision (``None`` if none)."""

    prime: int
    precision: int
    coeffs: tuple[tuple[int, PAdicNumber], ...] = ()
    floor: int | None = None

    def __post_init__(self):
        for k, c in self.coeffs:
            if abs(k) > MAX_DEGREE:
                raise DegreeOverflow(f"exponent {k} exceeds bound {MAX_DEGREE}")
            if c.is_zero():
                raise ValueError("zero coefficients must be pruned")

    # -- construction ---------------------------------------------------------

    @classmethod
    def build(cls, terms: Mapping[int, PAdicNumber], p: int, precision: int,
              floor: int | None = None) -> "LaurentPoly":
        kept = []
        for k in sorted(terms):
            c = terms[k]
            if c.is_zero():
                if c.precision is not None:
                    floor = c.precision if floor is None else min(floor, c.precision)
                continue
            kept.append((k, c))
        return cls(p, precision, tuple(kept), floor)

    @classmethod
    def constant(cls, c: Scalar, p: int, precision: int = DEFAULT_PRECISION) -> "LaurentPoly":
        return cls.monomial(c, 0, p, precision)

    @classmethod
    def monomial(cls, c: Scalar, k: int, p: int, precision: int = DEFAULT_PRECISION) -> "LaurentPoly":
        if not isinstance(c, PAdicNumber):
            c = PAdicNumber.from_rational(c, p, precision)
        return cls.build({k: c}, p, precision)

    @classmethod
    def t(cls, p: int, precision: int = DEFAULT_PRECISION) -> "LaurentPoly":
        return cls.monomial(1, 1, p, precision)

    @classmethod
    def zero(cls, p: int, precision: int = DEFAULT_PRECISION) -> "LaurentPoly":
        return cls(p, precision)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.prime != self.prime:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction, PAdicNumber)):
            return LaurentPoly.constant(other, self.prime, self.precision)
        return NotImplemented

    # -- queries --------------------------------------------------------------

    def terms(self) -> dict[int, PAdicNumber]:
        return dict(self.coeffs)

    def coefficient(self, k: int) -> PAdicNumber:
        return self.terms().get(k, PAdicNumber.zero(self.prime))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def lowest_valuation(self) -> float:
        vals = [c.valuation for _, c in self.coeffs]
        if self.floor is not None:
            vals.append(self.floor)
        return min(vals) if vals else math.inf

    def vanishes_to(self, k: int) -> bool:
        """True when every coefficient, kept or pruned, has valuation >= k."""
        return self.lowest_valuation() >= k

    def agrees_with(self, other, k: int) -> bool:
        return (self - other).vanishes_to(k)

    def as_monomial(self) -> tuple[PAdicNumber, int]:
        if not self.is_monomial():
            raise NotMonomial(f"{self} is not a single term c*t^k")
        k, c = self.coeffs[0]
        return c, k

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for k, c in self.coeffs:
            q = c.to_fraction()
            neg = q < 0
            q = abs(q)
            if k == 0:
                body = str(q)
            else:
                tpow = "t" if k == 1 else f"t^{k}"
                body = tpow if q == 1 else f"{q}*{tpow}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.prime, self.precision,
                           tuple((k, -c) for k, c in self.coeffs), self.floor)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = self.terms()
        for k, c in other.coeffs:
            acc[k] = acc[k] + c if k in acc else c
        return LaurentPoly.build(acc, self.prime, min(self.precision, other.precision),
                                 _min_opt(self.floor, other.floor))

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, PAdicNumber] = {}
        for k1, c1 in self.coeffs:
            for k2, c2 in other.coeffs:
                k = k1 + k2
                if abs(k) > MAX_DEGREE:
                    raise DegreeOverflow(f"product degree {k} exceeds bound {MAX_DEGREE}")
                prod = c1 * c2
                acc[k] = acc[k] + prod if k in acc else prod
        floor = None
        for f, poly in ((self.floor, other), (other.floor, self)):
            if f is not None:
                low = poly.lowest_valuation()
                bound = f + (0 if low == math.inf else low)
                floor = _min_opt(floor, int(bound) if low != math.inf else None)
        return LaurentPoly.build(acc, self.prime, min(self.precision, other.precision), floor)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            return LaurentPoly.constant(1, self.prime, self.precision).div_monomial(self) ** (-n)
        result = LaurentPoly.constant(1, self.prime, self.precision)
        for _ in range(n):
            result = result * self
        return result

    def div_monomial(self, m) -> "LaurentPoly":
        """Exact division by a single term."""
        m = self._coerce(m)
        c, k = m.as_monomial()
        inv = c.inverse()
        floor = None if self.floor is None else self.floor - c.valuation
        return LaurentPoly.build({e - k: a * inv for e, a in self.coeffs}, self.prime,
                                 self.precision, floor)

    __truediv__ = div_monomial


def _min_opt(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def laurent_arith(x: LaurentPoly, y: LaurentPoly, op: str) -> LaurentPoly:
    if x.prime != y.prime:
        raise ValueError("prime mismatch")
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op in ("*", "x", "×"):
        return x * y
    raise ValueError(f"unknown op {op!r}")


# -- monomial square classes --------------------------------------------------


@dataclass(frozen=True, eq=False)
class MonomialClass:
    """(-1)^s u^a p^b t^c modulo squares, u = canonical nonsquare unit.

    Stored un-reduced; equality and hashing use :meth:`reduced`, which folds the
    ``s`` bit into ``a`` (p = 3 mod 4, where -1 ~ u) or drops it (p = 1 mod 4).
    """

    prime: int
    s: int = 0
    a: int = 0
    b: int = 0
    c: int = 0

    def __post_init__(self):
        check_odd_prime(self.prime)
        for bit in (self.s, self.a, self.b, self.c):
            if bit not in (0, 1):
                raise ValueError("class bits must be 0 or 1")

    @property
    def bits(self) -> tuple[int, int, int, int]:
        return (self.s, self.a, self.b, self.c)

    def reduced(self) -> tuple[int, int, int]:
        a = self.a ^ self.s if self.prime % 4 == 3 else self.a
        return (a, self.b, self.c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialClass):
            return NotImplemented
        return self.prime == other.prime and self.reduced() == other.reduced()

    def __hash__(self) -> int:
        return hash((self.prime, self.reduced()))

    def __mul__(self, other: "MonomialClass") -> "MonomialClass":
        if self.prime != other.prime:
            raise ValueError("prime mismatch")
        return MonomialClass(self.prime, self.s ^ other.s, self.a ^ other.a,
                             self.b ^ other.b, self.c ^ other.c)

    def __neg__(self) -> "MonomialClass":
        return MonomialClass(self.prime, self.s ^ 1, self.a, self.b, self.c)

    def is_trivial(self) -> bool:
        return self.reduced() == (0, 0, 0)

    def has_t(self) -> bool:
        return self.c == 1

    def constant_part(self) -> "MonomialClass":
        return MonomialClass(self.prime, self.s, self.a, self.b, 0)

    def local_class(self) -> LocalSquareClass:
        """Square class in Q_p of the t-free part."""
        a, b, _ = self.reduced()
        return LocalSquareClass(bool(a), bool(b))

    def canonical(self) -> "MonomialClass":
        a, b, c = self.reduced()
        return MonomialClass(self.prime, 0, a, b, c)

    def sort_key(self) -> tuple[int, int, int]:
        a, b, c = self.reduced()
        return (c, b, a)

    def __str__(self) -> str:
        factors = [name for name, bit in (("u", self.a), ("p", self.b), ("t", self.c)) if bit]
        body = "*".join(factors) or "1"
        return ("-" + body) if self.s else body

    def __repr__(self) -> str:
        return f"MonomialClass({self}, p={self.prime})"

    # -- canonical generators -------------------------------------------------

    @classmethod
    def one(cls, p: int) -> "MonomialClass":
        return cls(p)

    @classmethod
    def minus_one(cls, p: int) -> "MonomialClass":
        return cls(p, s=1)

    @classmethod
    def u(cls, p: int) -> "MonomialClass":
        return cls(p, a=1)

    @classmethod
    def uniformizer(cls, p: int) -> "MonomialClass":
        return cls(p, b=1)

    @classmethod
    def t(cls, p: int) -> "MonomialClass":
        return cls(p, c=1)

    @classmethod
    def all_unreduced(cls, p: int) -> list["MonomialClass"]:
        return [cls(p, s, a, b, c) for s in (0, 1) for a in (0, 1) for b in (0, 1) for c in (0, 1)]

    @classmethod
    def all_reduced(cls, p: int) -> list["MonomialClass"]:
        return [cls(p, 0, a, b, c) for c in (0, 1) for b in (0, 1) for a in (0, 1)]


def class_of_rational(x: Union[int, Fraction], p: int) -> MonomialClass:
    x = Fraction(x)
    if x == 0:
        raise ZeroToPrecision("square class of 0")
    s = 1 if x < 0 else 0
    x = abs(x)
    v = p_valuation(x.numerator, p) - p_valuation(x.denominator, p)
    unit = x / Fraction(p) ** v
    res = unit.numerator * pow(unit.denominator, -1, p) % p
    return MonomialClass(p, s, 1 if legendre(res, p) == -1 else 0, v % 2, 0)


def class_of_padic(x: PAdicNumber) -> MonomialClass:
    """Class of a p-adic scalar; the sign bit comes from the balanced unit."""
    if x.is_zero():
        raise ZeroToPrecision("square class of zero-to-precision")
    w = x.balanced_unit()
    s = 1 if w < 0 else 0
    a = 1 if legendre(abs(w), x.prime) == -1 else 0
    return MonomialClass(x.prime, s, a, x.valuation % 2, 0)


def monomial_class(x: LaurentPoly) -> MonomialClass:
    c, k = x.as_monomial()
    base = class_of_padic(c)
    return MonomialClass(x.prime, base.s, base.a, base.b, k % 2)


_FACTOR = re.compile(r"^(?P<base>[a-z]+|\d+)(?:\^(?P<exp>-?\d+))?$")


def parse_monomial_class(text: str, p: int) -> MonomialClass:
    """Parse strings like ``-u*p*t``, ``t*b``, ``-5*t^3``, ``1``.

    ``b`` is an alias for the nonsquare unit ``u``.
    """
    text = text.strip().replace(" ", "").replace("·", "*")
    if not text:
        raise ValueError("empty monomial")
    result = MonomialClass(p)
    while text.startswith("-") or text.startswith("+"):
        if text[0] == "-":
            result = -result
        text = text[1:]
    for factor in text.split("*"):
        m = _FACTOR.match(factor)
        if not m:
            raise ValueError(f"cannot parse monomial factor {factor!r}")
        exp = int(m.group("exp") or 1)
        base = m.group("base")
        if base.isdigit():
            cls = class_of_rational(int(base), p)
        elif base in ("u", "b"):
            cls = MonomialClass.u(p)
        elif base == "p":
            cls = MonomialClass.uniformizer(p)
        elif base == "t":
            cls = MonomialClass.t(p)
        else:
            raise ValueError(f"unknown symbol {base!r}")
        if exp % 2:
            result = result * cls
    return result


def class_to_laurent(cls: MonomialClass, precision: int = DEFAULT_PRECISION) -> LaurentPoly:
    """A monomial representative (-1)^s u^a p^b t^c of the class."""
    p = cls.prime
    value = Fraction((-1) ** cls.s * canonical_nonsquare_unit(p) ** cls.a * p**cls.b)
    return LaurentPoly.monomial(value, cls.c, p, precision)


# -- field tags ---------------------------------------------------------------


class FieldKind(enum.Enum):
    QP = "Qp"
    QUAD_EXT = "QuadExt"
    LAURENT_QP = "LaurentQp"
    LAURENT_QUAD_EXT = "LaurentQuadExt"
    RATIONAL_FUNCTION = "RationalFunction"


@dataclass(frozen=True)
class FieldTag:
    kind: FieldKind
    prime: int
    ext: QuadExtension | None = None

    def __post_init__(self):
        check_odd_prime(self.prime)
        needs_ext = self.kind in (FieldKind.QUAD_EXT, FieldKind.LAURENT_QUAD_EXT)
        if needs_ext != (self.ext is not None):
            raise ValueError(f"{self.kind.value} {'requires' if needs_ext else 'forbids'} an extension")
        if self.ext is not None and self.ext.base_prime != self.prime:
            raise ValueError("extension over a different prime")

    @classmethod
    def qp(cls, p: int) -> "FieldTag":
        return cls(FieldKind.QP, p)

    @classmethod
    def quad_ext(cls, ext: QuadExtension) -> "FieldTag":
        return cls(FieldKind.QUAD_EXT, ext.base_prime, ext)

    @classmethod
    def laurent_qp(cls, p: int) -> "FieldTag":
        return cls(FieldKind.LAURENT_QP, p)

    @classmethod
    def laurent_quad_ext(cls, ext: QuadExtension) -> "FieldTag":
        return cls(FieldKind.LAURENT_QUAD_EXT, ext.base_prime, ext)

    @classmethod
    def rational_function(cls, p: int) -> "FieldTag":
        return cls(FieldKind.RATIONAL_FUNCTION, p)

    @property
    def is_local(self) -> bool:
        return self.kind in (FieldKind.QP, FieldKind.QUAD_EXT)

    @property
    def is_laurent(self) -> bool:
        return self.kind in (FieldKind.LAURENT_QP, FieldKind.LAURENT_QUAD_EXT)

    def residue_field(self) -> "FieldTag":
        if self.kind is FieldKind.LAURENT_QP:
            return FieldTag.qp(self.prime)
        if self.kind is FieldKind.LAURENT_QUAD_EXT:
            return FieldTag.quad_ext(self.ext)
        raise FieldMismatch(f"{self} has no t-adic residue field")

    def __str__(self) -> str:
        p = self.prime
        return {
            FieldKind.QP: f"Q_{p}",
            FieldKind.QUAD_EXT: str(self.ext),
            FieldKind.LAURENT_QP: f"Q_{p}((t))",
            FieldKind.LAURENT_QUAD_EXT: f"{self.ext}((t))",
            FieldKind.RATIONAL_FUNCTION: f"Q_{p}(t)",
        }[self.kind]


# embeddings allowed implicitly: sub -> super
_EMBEDS = {
    FieldKind.QP: (FieldKind.RATIONAL_FUNCTION, FieldKind.LAURENT_QP),
    FieldKind.RATIONAL_FUNCTION: (FieldKind.LAURENT_QP,),
    FieldKind.QUAD_EXT: (FieldKind.LAURENT_QUAD_EXT,),
}


def common_field(x: FieldTag, y: FieldTag) -> FieldTag:
    """The field over which objects tagged x and y can be combined."""
    if x == y:
        return x
    if x.prime == y.prime and x.ext == y.ext:
        if y.kind in _EMBEDS.get(x.kind, ()):
            return y
        if x.kind in _EMBEDS.get(y.kind, ()):
            return x
    raise FieldMismatch(f"cannot combine objects over {x} and {y}")


def specialize_to_laurent(obj):
    """Move a field-tagged object from Q_p(t) (or Q_p) to Q_p((t)).

    Objects without a field tag (Laurent polynomials, monomial classes) are
    returned unchanged: the inclusion does not alter values.
    """
    if isinstance(obj, FieldTag):
        if obj.kind in (FieldKind.RATIONAL_FUNCTION, FieldKind.QP, FieldKind.LAURENT_QP):
            return FieldTag.laurent_qp(obj.prime)
        if obj.kind in (FieldKind.QUAD_EXT, FieldKind.LAURENT_QUAD_EXT):
            return FieldTag.laurent_quad_ext(obj.ext)
        raise FieldMismatch(f"cannot specialize {obj}")  # pragma: no cover
    field = getattr(obj, "field", None)
    if field is None:
        return obj
    return dataclasses.replace(obj, field=specialize_to_laurent(field))


def base_change(obj, ext: QuadExtension):
    """Extend scalars to the quadratic extension: Q_p -> K, Q_p(t) or Q_p((t)) -> K((t))."""
    if isinstance(obj, FieldTag):
        if obj.kind is FieldKind.QP:
            return FieldTag.quad_ext(ext)
        if obj.kind in (FieldKind.RATIONAL_FUNCTION, FieldKind.LAURENT_QP):
            return FieldTag.laurent_quad_ext(ext)
        raise FieldMismatch(f"{obj} is already an extension field")
    return dataclasses.replace(obj, field=base_change(obj.field, ext))


# -- norm equations with monomial data ----------------------------------------


def solve_monomial_norm(kappa: LaurentPoly, c: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Find monomials x, y with x^2 - kappa*y^2 = c.

    For monomial kappa and c the search is complete over Q_p((t)): the leading
    terms of x^2 and kappa*y^2 cannot cancel unless kappa is a square, so a
    solution exists only with x = 0, y = 0, or both of equal t-degree with a
    constant norm equation.  NoSolution is therefore a proof of unsolvability.
    """
    p, n = kappa.prime, min(kappa.precision, c.precision)
    k0, k = kappa.as_monomial()
    c0, e = c.as_monomial()

    def mono(value: PAdicNumber, deg: int) -> LaurentPoly:
        return LaurentPoly.build({deg: value}, p, n)

    zero = LaurentPoly.zero(p, n)
    if e % 2 == 0 and is_square(c0):
        return mono(hensel_sqrt(c0), e // 2), zero
    if (e - k) % 2 == 0:
        ratio = -c0 / k0
        if is_square(ratio):
            return zero, mono(hensel_sqrt(ratio), (e - k) // 2)
    if k % 2 or e % 2:
        raise NoSolution(f"{c} is not a norm from F(sqrt({kappa})) over Q_{p}((t))")
    # k, e even: reduce to the constant equation x0^2 - k0 y0^2 = c0
    if is_square(k0):
        s = hensel_sqrt(k0)
        # (x - s y)(x + s y) = c0 with x - s y = 1
        x0 = (c0 + 1) / 2
        y0 = (c0 - 1) / (s * 2)
        return mono(x0, e // 2), mono(y0, (e - k) // 2)
    if k0.valuation % 2 == 0:
        unit = k0 / PAdicNumber(p, k0.valuation, 1, n)
        x0, y0 = solve_norm_equation(unit, c0)
        if not y0.is_zero():
            y0 = y0 / PAdicNumber(p, k0.valuation // 2, 1, n)
        return mono(x0, e // 2), mono(y0, (e - k) // 2)
    # ramified: the norm group mod squares is {1, -k0}; both covered above
    raise NoSolution(f"{c} is not a norm from F(sqrt({kappa}))")

