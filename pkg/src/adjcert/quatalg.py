"""Quaternion algebras over Q_p(t), matrices over them, involutions of the
first and second kind, discriminants, similitudes and their multipliers."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .brauer import SymbolSum, milnor_normalize
from .errors import (
    Inconclusive,
    MalformedInvolution,
    NotDiagonal,
    NotInvertible,
    NotPure,
    NotSimilitude,
    NrdUnsupported,
)
from .funfield import (
    FieldTag,
    LaurentPoly,
    MonomialClass,
    class_to_laurent,
    monomial_class,
    parse_monomial_class,
    solve_monomial_norm,
)
from .padic import DEFAULT_PRECISION, PAdicNumber

MAX_SIZE = 16
Coeff = Union[int, Fraction, PAdicNumber, LaurentPoly]


@dataclass(frozen=True)
class QuaternionAlgebra:
    """(a, b): basis 1, i, j, ij with i^2 = a, j^2 = b, ij = -ji."""

    a: LaurentPoly
    b: LaurentPoly
    field: FieldTag

    def __post_init__(self):
        for x in (self.a, self.b):
            if not x.is_monomial():
                raise NotInvertible(f"structure constant {x} must be a nonzero monomial")

    @classmethod
    def of(cls, a: Coeff | str, b: Coeff | str, p: int, precision: int = DEFAULT_PRECISION,
           field: FieldTag | None = None) -> "QuaternionAlgebra":
        return cls(_laurent(a, p, precision), _laurent(b, p, precision),
                   field or FieldTag.rational_function(p))

    @property
    def prime(self) -> int:
        return self.a.prime

    @property
    def precision(self) -> int:
        return min(self.a.precision, self.b.precision)

    def scalar(self, c: Coeff) -> LaurentPoly:
        return _laurent(c, self.prime, self.precision)

    def element(self, x0: Coeff = 0, x1: Coeff = 0, x2: Coeff = 0, x3: Coeff = 0) -> "QuaternionElement":
        return QuaternionElement(*(self.scalar(x) for x in (x0, x1, x2, x3)), algebra=self)

    def zero(self) -> "QuaternionElement":
        return self.element()

    def one(self) -> "QuaternionElement":
        return self.element(1)

    def i(self) -> "QuaternionElement":
        return self.element(0, 1)

    def j(self) -> "QuaternionElement":
        return self.element(0, 0, 1)

    def ij(self) -> "QuaternionElement":
        return self.element(0, 0, 0, 1)

    def basis(self) -> tuple["QuaternionElement", ...]:
        return (self.one(), self.i(), self.j(), self.ij())

    def brauer_class(self) -> SymbolSum:
        return SymbolSum(((monomial_class(self.a), monomial_class(self.b)),), self.field)

    def __str__(self) -> str:
        return f"({self.a}, {self.b})"


def _laurent(x: Coeff | str, p: int, precision: int) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, str):
        return class_to_laurent(parse_monomial_class(x, p), precision)
    return LaurentPoly.constant(x, p, precision)


def _paren(x: LaurentPoly) -> str:
    s = str(x)
    return f"({s})" if len(x.coeffs) > 1 else s


@dataclass(frozen=True)
class QuaternionElement:
    x0: LaurentPoly
    x1: LaurentPoly
    x2: LaurentPoly
    x3: LaurentPoly
    algebra: QuaternionAlgebra

    @property
    def coords(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly, LaurentPoly]:
        return (self.x0, self.x1, self.x2, self.x3)

    def _new(self, coords: Iterable[LaurentPoly]) -> "QuaternionElement":
        return QuaternionElement(*coords, algebra=self.algebra)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def is_pure(self) -> bool:
        return self.x0.is_zero()

    def vanishes_to(self, k: int) -> bool:
        return all(x.vanishes_to(k) for x in self.coords)

    def agrees_with(self, other: "QuaternionElement", k: int) -> bool:
        return (self - other).vanishes_to(k)

    def support(self) -> list[int]:
        return [s for s, x in enumerate(self.coords) if not x.is_zero()]

    def __add__(self, other: "QuaternionElement") -> "QuaternionElement":
        return self._new(x + y for x, y in zip(self.coords, other.coords))

    def __sub__(self, other: "QuaternionElement") -> "QuaternionElement":
        return self._new(x - y for x, y in zip(self.coords, other.coords))

    def __neg__(self) -> "QuaternionElement":
        return self._new(-x for x in self.coords)

    def __mul__(self, other) -> "QuaternionElement":
        if isinstance(other, QuaternionElement):
            return quat_mul(self, other)
        c = self.algebra.scalar(other)
        return self._new(x * c for x in self.coords)

    def __rmul__(self, other) -> "QuaternionElement":
        c = self.algebra.scalar(other)
        return self._new(c * x for x in self.coords)

    def conj(self) -> "QuaternionElement":
        return self._new((self.x0, -self.x1, -self.x2, -self.x3))

    def nrd(self) -> LaurentPoly:
        return nrd_quat(self)

    def inverse(self) -> "QuaternionElement":
        n = self.nrd()
        if not n.is_monomial():
            raise NotInvertible(f"reduced norm {n} of {self} is not a monomial")
        return self._new(x.div_monomial(n) for x in self.conj().coords)

    def __str__(self) -> str:
        parts = []
        for x, name in zip(self.coords, ("", " i", " j", " ij")):
            if not x.is_zero():
                parts.append(_paren(x) + name)
        return " + ".join(parts) if parts else "0"


def quat_mul(x: QuaternionElement, y: QuaternionElement) -> QuaternionElement:
    if x.algebra != y.algebra:
        raise ValueError("quaternions from different algebras")
    a, b = x.algebra.a, x.algebra.b
    ab = a * b
    x0, x1, x2, x3 = x.coords
    y0, y1, y2, y3 = y.coords
    z0 = x0 * y0 + a * (x1 * y1) + b * (x2 * y2) - ab * (x3 * y3)
    z1 = x0 * y1 + x1 * y0 - b * (x2 * y3) + b * (x3 * y2)
    z2 = x0 * y2 + x2 * y0 + a * (x1 * y3) - a * (x3 * y1)
    z3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1
    return QuaternionElement(z0, z1, z2, z3, x.algebra)


def nrd_quat(x: QuaternionElement) -> LaurentPoly:
    a, b = x.algebra.a, x.algebra.b
    x0, x1, x2, x3 = x.coords
    return x0 * x0 - a * (x1 * x1) - b * (x2 * x2) + (a * b) * (x3 * x3)


def conj(x: QuaternionElement) -> QuaternionElement:
    return x.conj()


# -- norm equations inside subfields ------------------------------------------


def _generator(H: QuaternionAlgebra, name: str) -> tuple[QuaternionElement, LaurentPoly]:
    if name == "i":
        return H.i(), H.a
    if name == "j":
        return H.j(), H.b
    if name == "ij":
        return H.ij(), -(H.a * H.b)
    raise ValueError(f"unknown generator {name!r}; expected i, j or ij")


def find_unit_with_nrd(H: QuaternionAlgebra, c: Coeff, generator: str = "i") -> QuaternionElement:
    """Element x + y*k of the subfield F(k) with nrd = c (k = i, j or ij)."""
    k, kappa = _generator(H, generator)
    x, y = solve_monomial_norm(kappa, H.scalar(c))
    return H.one() * x + k * y


def _axis(v: QuaternionElement) -> int:
    if not v.is_pure() or len(v.support()) != 1:
        raise NotPure(f"{v} must be a nonzero multiple of i, j or ij")
    return v.support()[0]


def find_pure_with_square(Q: QuaternionAlgebra, target: Coeff, anticommuting_with: QuaternionElement
                          ) -> QuaternionElement:
    """Pure w with w^2 = target and w v = -v w, where v lies on one basis axis.

    The pure quaternions anticommuting with v form a plane spanned by two basis
    elements e, f, and (x e + y f)^2 = e^2 (x^2 - kappa y^2) with kappa = -f^2/e^2.
    """
    axis = _axis(anticommuting_with)
    a, b = Q.a, Q.b
    if axis == 2:
        e, f, base, kappa = Q.i(), Q.ij(), a, b
    elif axis == 1:
        e, f, base, kappa = Q.j(), Q.ij(), b, a
    else:
        e, f, base, kappa = Q.i(), Q.j(), a, -(b.div_monomial(a))
    x, y = solve_monomial_norm(kappa, Q.scalar(target).div_monomial(base))
    return e * x + f * y


# -- matrices ------------------------------------------------------------------


@dataclass(frozen=True)
class QuatMatrix:
    rows: tuple[tuple[QuaternionElement, ...], ...]
    algebra: QuaternionAlgebra

    def __post_init__(self):
        n = len(self.rows)
        if n == 0 or n > MAX_SIZE or any(len(r) != n for r in self.rows):
            raise ValueError(f"need a square matrix of size 1..{MAX_SIZE}")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def diag(cls, entries: Sequence[QuaternionElement]) -> "QuatMatrix":
        alg = entries[0].algebra
        zero = alg.zero()
        n = len(entries)
        return cls(tuple(tuple(entries[k] if k == l else zero for l in range(n)) for k in range(n)), alg)

    @classmethod
    def identity(cls, alg: QuaternionAlgebra, n: int) -> "QuatMatrix":
        return cls.diag([alg.one()] * n)

    @classmethod
    def unit(cls, alg: QuaternionAlgebra, n: int, k: int, l: int, q: QuaternionElement) -> "QuatMatrix":
        """q placed at (k, l), zero elsewhere."""
        zero = alg.zero()
        return cls(tuple(tuple(q if (r, c) == (k, l) else zero for c in range(n)) for r in range(n)), alg)

    @classmethod
    def basis(cls, alg: QuaternionAlgebra, n: int) -> list["QuatMatrix"]:
        return [cls.unit(alg, n, k, l, e) for k in range(n) for l in range(n) for e in alg.basis()]

    def __getitem__(self, kl: tuple[int, int]) -> QuaternionElement:
        return self.rows[kl[0]][kl[1]]

    def is_diagonal(self) -> bool:
        return all(self.rows[k][l].is_zero() for k in range(self.n) for l in range(self.n) if k != l)

    def diagonal(self) -> list[QuaternionElement]:
        return [self.rows[k][k] for k in range(self.n)]

    def __add__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                          self.algebra)

    def __neg__(self) -> "QuatMatrix":
        return QuatMatrix(tuple(tuple(-x for x in r) for r in self.rows), self.algebra)

    def __sub__(self, other: "QuatMatrix") -> "QuatMatrix":
        return self + (-other)

    def __mul__(self, other: "QuatMatrix") -> "QuatMatrix":
        if other.n != self.n:
            raise ValueError("size mismatch")
        n = self.n
        zero = self.algebra.zero()
        out = []
        for k in range(n):
            row = []
            for l in range(n):
                acc = zero
                for m in range(n):
                    x, y = self.rows[k][m], other.rows[m][l]
                    if not (x.is_zero() or y.is_zero()):
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return QuatMatrix(tuple(out), self.algebra)

    def vanishes_to(self, k: int) -> bool:
        return all(x.vanishes_to(k) for r in self.rows for x in r)

    def agrees_with(self, other: "QuatMatrix", k: int) -> bool:
        return (self - other).vanishes_to(k)

    def __str__(self) -> str:
        if self.is_diagonal():
            return "diag(" + ", ".join(str(x) for x in self.diagonal()) + ")"
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"


@dataclass(frozen=True)
class ScalarMatrix:
    """Matrix over the centre, used for split factors M_n(F)."""

    rows: tuple[tuple[LaurentPoly, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def diag(cls, entries: Sequence[LaurentPoly]) -> "ScalarMatrix":
        n = len(entries)
        zero = LaurentPoly.zero(entries[0].prime, entries[0].precision)
        return cls(tuple(tuple(entries[k] if k == l else zero for l in range(n)) for k in range(n)))

    @classmethod
    def unit(cls, n: int, k: int, l: int, p: int, precision: int = DEFAULT_PRECISION) -> "ScalarMatrix":
        one, zero = LaurentPoly.constant(1, p, precision), LaurentPoly.zero(p, precision)
        return cls(tuple(tuple(one if (r, c) == (k, l) else zero for c in range(n)) for r in range(n)))

    def __mul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        n = self.n
        return ScalarMatrix(tuple(tuple(sum((self.rows[k][m] * other.rows[m][l] for m in range(n)),
                                            LaurentPoly.zero(self.rows[0][0].prime, self.rows[0][0].precision))
                                        for l in range(n)) for k in range(n)))

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        return ScalarMatrix(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def vanishes_to(self, k: int) -> bool:
        return all(x.vanishes_to(k) for r in self.rows for x in r)

    def is_diagonal(self) -> bool:
        return all(self.rows[k][l].is_zero() for k in range(self.n) for l in range(self.n) if k != l)

    def determinant(self) -> LaurentPoly:
        n = self.n
        if n > 6:
            raise NrdUnsupported("determinant expansion is limited to n <= 6")
        total = LaurentPoly.zero(self.rows[0][0].prime, self.rows[0][0].precision)
        for perm in itertools.permutations(range(n)):
            inversions = sum(1 for x, y in itertools.combinations(perm, 2) if x > y)
            term = LaurentPoly.constant(-1 if inversions % 2 else 1, total.prime, total.precision)
            for k in range(n):
                term = term * self.rows[k][perm[k]]
            total = total + term
        return total

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(tuple(zip(*self.rows)))


def kron(s: ScalarMatrix, q: QuaternionElement) -> QuatMatrix:
    """Image of s (x) q under M_n(F) (x) Q = M_n(Q)."""
    return QuatMatrix(tuple(tuple(q * c for c in r) for r in s.rows), q.algebra)


# -- involutions ------------------------------------------------------------


class InvolutionType(enum.Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    UNITARY = "unitary"


class InvolutionKind(enum.Enum):
    FIRST_KIND = "first_kind"
    UNITARY_TWIST = "unitary_twist"


@dataclass(frozen=True, eq=False)
class Involution:
    """X -> D conj(X)^T D^{-1} on M_n(H), optionally tensored with the
    nontrivial automorphism of F(sqrt d).  Only the M_n(H) part is modelled,
    where the automorphism acts trivially."""

    D: QuatMatrix
    kind: InvolutionKind = InvolutionKind.FIRST_KIND
    twist: MonomialClass | None = None

    def __post_init__(self):
        if not self.D.is_diagonal():
            raise MalformedInvolution("D must be diagonal")
        try:
            inv = tuple(d.inverse() for d in self.D.diagonal())
        except NotInvertible as exc:
            raise MalformedInvolution(f"D has a non-invertible entry: {exc}") from exc
        object.__setattr__(self, "_inv", inv)
        object.__setattr__(self, "_type", None)
        tol = self.tolerance
        for X in QuatMatrix.basis(self.algebra, self.n):
            if not self.apply(self.apply(X)).agrees_with(X, tol):
                raise MalformedInvolution(f"sigma^2 != id for D = {self.D}")

    @classmethod
    def first_kind(cls, D: QuatMatrix) -> "Involution":
        return cls(D)

    @classmethod
    def unitary_twist(cls, D: QuatMatrix, d: MonomialClass) -> "Involution":
        return cls(D, InvolutionKind.UNITARY_TWIST, d)

    @classmethod
    def adjoint(cls, h: "SkewHermitianForm") -> "Involution":
        """Adjoint involution of a diagonal (skew-)hermitian form: D = M(h)^{-1}."""
        return cls(QuatMatrix.diag([d.inverse() for d in h.entries]))

    @property
    def algebra(self) -> QuaternionAlgebra:
        return self.D.algebra

    @property
    def n(self) -> int:
        return self.D.n

    @property
    def degree(self) -> int:
        return 2 * self.n

    @property
    def tolerance(self) -> int:
        return self.algebra.precision - 2

    def underlying(self) -> "Involution":
        if self.kind is InvolutionKind.FIRST_KIND:
            return self
        return Involution(self.D)

    def apply(self, X: QuatMatrix) -> QuatMatrix:
        if X.n != self.n:
            raise ValueError("size mismatch")
        d, dinv = self.D.diagonal(), self._inv
        zero = self.algebra.zero()
        rows = []
        for k in range(self.n):
            row = []
            for l in range(self.n):
                x = X.rows[l][k]
                row.append(zero if x.is_zero() else d[k] * x.conj() * dinv[l])
            rows.append(tuple(row))
        return QuatMatrix(tuple(rows), self.algebra)

    __call__ = apply

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "D": [str(x) for x in self.D.diagonal()],
                "twist": None if self.twist is None else str(self.twist)}

    def __str__(self) -> str:
        base = f"Int({self.D}) o conj-transpose"
        return base if self.twist is None else f"{base} (x) gamma[sqrt({self.twist})]"


@dataclass(frozen=True)
class ScalarAdjointInvolution:
    """Adjoint involution X -> B^{-1} X^T B of a diagonal quadratic form on M_n(F)."""

    B: tuple[LaurentPoly, ...]

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def degree(self) -> int:
        return self.n

    @property
    def tolerance(self) -> int:
        return min(b.precision for b in self.B) - 2

    def apply(self, X: ScalarMatrix) -> ScalarMatrix:
        return ScalarMatrix(tuple(tuple((X.rows[l][k] * self.B[l]).div_monomial(self.B[k])
                                        for l in range(self.n)) for k in range(self.n)))

    __call__ = apply


AnyInvolution = Union[Involution, ScalarAdjointInvolution]


def involution_apply(sigma: AnyInvolution, X):
    return sigma.apply(X)


def _basis_image(sigma: Involution, k: int, l: int, s: int) -> tuple[tuple[int, int, int], LaurentPoly]:
    alg = sigma.algebra
    e = alg.basis()[s]
    img = sigma.D.diagonal()[l] * e.conj() * sigma._inv[k]
    sup = img.support()
    if len(sup) != 1:
        raise MalformedInvolution("sigma is not a monomial map on the standard basis")
    return (l, k, sup[0]), img.coords[sup[0]]


def involution_type(sigma: AnyInvolution) -> InvolutionType:
    if isinstance(sigma, ScalarAdjointInvolution):
        return InvolutionType.ORTHOGONAL
    if sigma.kind is InvolutionKind.UNITARY_TWIST:
        return InvolutionType.UNITARY
    if sigma._type is not None:
        return sigma._type
    tol = sigma.tolerance
    fixed = 0
    for k, l, s in itertools.product(range(sigma.n), range(sigma.n), range(4)):
        target, coeff = _basis_image(sigma, k, l, s)
        if target == (k, l, s):
            if coeff.agrees_with(1, tol):
                fixed += 1
            elif not coeff.agrees_with(-1, tol):
                raise MalformedInvolution(f"basis element fixed up to {coeff}")
        elif target > (k, l, s):
            fixed += 1  # each 2-cycle x <-> c y contributes x + c y
    deg = sigma.degree
    if fixed == deg * (deg + 1) // 2:
        kind = InvolutionType.ORTHOGONAL
    elif fixed == deg * (deg - 1) // 2:
        kind = InvolutionType.SYMPLECTIC
    else:
        raise MalformedInvolution(f"fixed space of dimension {fixed} fits no type for degree {deg}")
    object.__setattr__(sigma, "_type", kind)
    return kind


def _sign(n: int, p: int) -> MonomialClass:
    return MonomialClass.minus_one(p) if n % 2 else MonomialClass.one(p)


def involution_discriminant(sigma: AnyInvolution) -> MonomialClass:
    """(-1)^n prod nrd(d_i) for sigma = Int(diag(d_i)) o conj-transpose;
    (-1)^(n(n-1)/2) det B for the adjoint of <b_1,...,b_n> on M_n(F)."""
    if isinstance(sigma, ScalarAdjointInvolution):
        p = sigma.B[0].prime
        cls = _sign(sigma.n * (sigma.n - 1) // 2, p)
        for b in sigma.B:
            cls = cls * monomial_class(b)
        return cls
    sigma = sigma.underlying()
    for d in sigma.D.diagonal():
        if not d.is_pure():
            raise NotPure(f"diagonal entry {d} is not pure")
    if involution_type(sigma) is not InvolutionType.ORTHOGONAL:
        raise MalformedInvolution("discriminant is defined for orthogonal involutions")
    cls = _sign(sigma.n, sigma.algebra.prime)
    for d in sigma.D.diagonal():
        cls = cls * monomial_class(d.nrd())
    return cls


@dataclass(frozen=True)
class SkewHermitianForm:
    """Diagonal form <d_1,...,d_r> over (Q, canonical involution); sign -1 means skew."""

    entries: tuple[QuaternionElement, ...]
    sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ValueError("empty form")
        for d in self.entries:
            if self.sign == -1 and not d.is_pure():
                raise NotPure(f"skew-hermitian entry {d} must be pure")
            if self.sign == 1 and any(not x.is_zero() for x in d.coords[1:]):
                raise ValueError(f"hermitian entry {d} must be central")

    @property
    def algebra(self) -> QuaternionAlgebra:
        return self.entries[0].algebra

    @property
    def rank(self) -> int:
        return len(self.entries)

    def gram(self) -> QuatMatrix:
        return QuatMatrix.diag(list(self.entries))

    def __add__(self, other: "SkewHermitianForm") -> "SkewHermitianForm":
        if self.sign != other.sign:
            raise ValueError("sign mismatch")
        return SkewHermitianForm(self.entries + other.entries, self.sign)

    def scaled(self, c: Coeff) -> "SkewHermitianForm":
        return SkewHermitianForm(tuple(d * c for d in self.entries), self.sign)

    def adjoint_involution(self) -> Involution:
        return Involution.adjoint(self)

    def __str__(self) -> str:
        return "<" + ", ".join(str(d) for d in self.entries) + ">"


def hermitian_discriminant(h: SkewHermitianForm) -> MonomialClass:
    m = 2 * h.rank
    cls = _sign(m * (m - 1) // 2, h.algebra.prime)
    for d in h.entries:
        cls = cls * monomial_class(d.nrd())
    return cls


# -- similitudes -------------------------------------------------------------


def multiplier(sigma: AnyInvolution, g, tolerance: int | None = None) -> LaurentPoly:
    """mu(g) = sigma(g) g, checked to be a central scalar to the given p-adic precision."""
    tol = sigma.tolerance if tolerance is None else tolerance
    s = sigma.apply(g) * g
    n = s.n
    if isinstance(s, ScalarMatrix):
        lam = s.rows[0][0]
        for k in range(n):
            for l in range(n):
                expect = lam if k == l else LaurentPoly.zero(lam.prime, lam.precision)
                if not s.rows[k][l].agrees_with(expect, tol):
                    raise NotSimilitude(f"sigma(g) g has entry {s.rows[k][l]} at ({k},{l})")
        return lam
    lam = s.rows[0][0].x0
    scalar = s.algebra.element(lam)
    for k in range(n):
        for l in range(n):
            expect = scalar if k == l else s.algebra.zero()
            if not s.rows[k][l].agrees_with(expect, tol):
                raise NotSimilitude(f"sigma(g) g has entry {s.rows[k][l]} at ({k},{l})")
    return lam


def nrd_diag_matrix(X: QuatMatrix) -> LaurentPoly:
    if not X.is_diagonal():
        raise NotDiagonal("reduced norm is implemented for diagonal quaternion matrices")
    out = X.algebra.scalar(1)
    for x in X.diagonal():
        out = out * x.nrd()
    return out


def reduced_norm(X) -> LaurentPoly:
    if isinstance(X, ScalarMatrix):
        return X.determinant()
    if isinstance(X, QuatMatrix):
        try:
            return nrd_diag_matrix(X)
        except NotDiagonal as exc:
            raise NrdUnsupported(str(exc)) from exc
    raise NrdUnsupported(f"no reduced norm for {type(X).__name__}")


def is_proper_similitude(sigma: AnyInvolution, g, tolerance: int | None = None) -> bool:
    """Nrd(g) = +mu^m (proper) or -mu^m (improper), with deg A = 2m."""
    tol = sigma.tolerance if tolerance is None else tolerance
    mu = multiplier(sigma, g, tol)
    nrd = reduced_norm(g)
    m = sigma.degree // 2
    power = mu ** m
    if (nrd - power).vanishes_to(tol):
        return True
    if (nrd + power).vanishes_to(tol):
        return False
    raise Inconclusive(f"Nrd(g) = {nrd} is neither +mu^m nor -mu^m with mu = {mu}")


# -- Brauer classes attached to involutions --------------------------------------


def discriminant_algebra_class(n: int, H: QuaternionAlgebra | SymbolSum, d: MonomialClass,
                               disc_sigma: MonomialClass) -> SymbolSum:
    """Class of the discriminant algebra of sigma (x) gamma on M_n(H) (x) F(sqrt d):
    lambda^n M_n(H) ~ H^n, plus the symbol (d, disc sigma)."""
    h_class = H.brauer_class() if isinstance(H, QuaternionAlgebra) else H
    total = SymbolSum(((d, disc_sigma),), h_class.field)
    if n % 2:
        total = h_class + total
    return milnor_normalize(total)


def clifford_component_classes(disc1: MonomialClass, disc2: MonomialClass,
                               Q_class: SymbolSum) -> tuple[SymbolSum, SymbolSum]:
    first = SymbolSum(((disc1, disc2),), Q_class.field)
    return milnor_normalize(first), milnor_normalize(Q_class + first)
