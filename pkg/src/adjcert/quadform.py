"""Diagonal quadratic forms with monomial entries over tagged fields."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import FieldMismatch, UnsupportedField
from .funfield import (
    FieldKind,
    FieldTag,
    MonomialClass,
    common_field,
    parse_monomial_class,
    specialize_to_laurent,
)
from .padic import LocalSquareClass, QuadExtension, embed_square_class, tame_hilbert


class LocalField:
    """Square classes and Hilbert symbols of Q_p or a quadratic extension K,
    restricted to elements coming from Q_p."""

    def __init__(self, prime: int, ext: QuadExtension | None = None):
        self.prime = prime
        self.ext = ext
        self.q = prime if ext is None else ext.residue_field_size

    @classmethod
    def of(cls, field: FieldTag) -> "LocalField":
        if field.kind is FieldKind.QP:
            return _local_field(field.prime, None)
        if field.kind is FieldKind.QUAD_EXT:
            return _local_field(field.prime, field.ext)
        raise UnsupportedField(f"{field} is not a local field")

    def bits(self, x: MonomialClass) -> tuple[bool, bool]:
        if x.has_t():
            raise UnsupportedField(f"entry {x} involves t; not an element of {self}")
        return embed_square_class(x.local_class(), self.prime, self.ext)

    def square_class(self, x: MonomialClass) -> LocalSquareClass:
        return LocalSquareClass(*self.bits(x))

    def is_square(self, x: MonomialClass) -> bool:
        return self.bits(x) == (False, False)

    def hilbert(self, x: MonomialClass, y: MonomialClass) -> int:
        return _hilbert_bits(self.bits(x), self.bits(y), self.q)

    def __str__(self) -> str:
        return f"Q_{self.prime}" if self.ext is None else str(self.ext)


@lru_cache(maxsize=None)
def _local_field(prime: int, ext: QuadExtension | None) -> LocalField:
    return LocalField(prime, ext)


@lru_cache(maxsize=None)
def _hilbert_bits(x: tuple[bool, bool], y: tuple[bool, bool], q: int) -> int:
    return tame_hilbert(x[0], x[1], y[0], y[1], q)


@dataclass(frozen=True, eq=False)
class DiagonalForm:
    entries: tuple[MonomialClass, ...]
    field: FieldTag

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for e in self.entries:
            if e.prime != self.field.prime:
                raise FieldMismatch("entry prime differs from field prime")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def prime(self) -> int:
        return self.field.prime

    def _key(self):
        return sorted(e.sort_key() for e in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagonalForm):
            return NotImplemented
        return self.field == other.field and self._key() == other._key()

    def __hash__(self) -> int:
        return hash((self.field, tuple(self._key())))

    def perp(self, other: "DiagonalForm") -> "DiagonalForm":
        return DiagonalForm(self.entries + other.entries, common_field(self.field, other.field))

    __add__ = perp

    def tensor(self, other: "DiagonalForm") -> "DiagonalForm":
        field = common_field(self.field, other.field)
        return DiagonalForm(tuple(x * y for x in self.entries for y in other.entries), field)

    __mul__ = tensor

    def scaled(self, scalar: MonomialClass) -> "DiagonalForm":
        return DiagonalForm(tuple(scalar * e for e in self.entries), self.field)

    def __neg__(self) -> "DiagonalForm":
        return self.scaled(MonomialClass.minus_one(self.prime))

    def product(self) -> MonomialClass:
        out = MonomialClass.one(self.prime)
        for e in self.entries:
            out = out * e
        return out

    def signed_discriminant(self) -> MonomialClass:
        n = self.dim
        d = self.product()
        return -d if (n * (n - 1) // 2) % 2 else d

    def __str__(self) -> str:
        return "<" + ",".join(str(e) for e in self.entries) + ">"

    def __repr__(self) -> str:
        return f"DiagonalForm({self} over {self.field})"


def diagonal_form(entries: Iterable[MonomialClass | str], field: FieldTag) -> DiagonalForm:
    return DiagonalForm(tuple(parse_monomial_class(e, field.prime) if isinstance(e, str) else e
                              for e in entries), field)


def parse_form(text: str, field: FieldTag) -> DiagonalForm:
    """Parse ``<1,-t,-b,t*b>`` or the Pfister shorthand ``<<b,p>>``."""
    text = text.strip()
    m = re.fullmatch(r"<<(.*)>>", text)
    if m:
        return pfister([parse_monomial_class(s, field.prime) for s in m.group(1).split(",")], field)
    m = re.fullmatch(r"<(.*)>", text)
    if not m:
        raise ValueError(f"cannot parse form {text!r}")
    body = m.group(1).strip()
    return diagonal_form(body.split(",") if body else [], field)


def pfister(slots: Sequence[MonomialClass], field: FieldTag) -> DiagonalForm:
    """<<a1,...,an>> = <1,-a1> (x) ... (x) <1,-an>."""
    if not slots:
        raise ValueError("a Pfister form needs at least one slot")
    entries = [MonomialClass.one(field.prime)]
    for a in slots:
        entries = entries + [-(a * e) for e in entries]
    return DiagonalForm(tuple(entries), field)


@dataclass(frozen=True)
class LocalInvariants:
    dimension: int
    discriminant: LocalSquareClass
    hasse: int


def hasse_invariant(q: DiagonalForm) -> int:
    """prod_{i<j} (a_i, a_j) over the local field of q."""
    k = LocalField.of(q.field)
    h = 1
    for x, y in itertools.combinations(q.entries, 2):
        h *= k.hilbert(x, y)
    return h


def local_invariants(q: DiagonalForm) -> LocalInvariants:
    k = LocalField.of(q.field)
    return LocalInvariants(q.dim, k.square_class(q.signed_discriminant()), hasse_invariant(q))


def is_isotropic_local(q: DiagonalForm) -> bool:
    k = LocalField.of(q.field)
    p = q.prime
    n = q.dim
    if n <= 1:
        return False
    if n >= 5:
        return True
    minus_one = MonomialClass.minus_one(p)
    d = q.product()
    if n == 2:
        return k.is_square(-d)
    h = hasse_invariant(q)
    if n == 3:
        return h == k.hilbert(minus_one, -d)
    return not (k.is_square(d) and h == -k.hilbert(minus_one, minus_one))


def is_hyperbolic_local(q: DiagonalForm) -> bool:
    if q.dim % 2:
        return False
    if q.dim == 0:
        return True
    hyp = DiagonalForm((MonomialClass.one(q.prime), MonomialClass.minus_one(q.prime)) * (q.dim // 2),
                       q.field)
    return local_invariants(q) == local_invariants(hyp)


@lru_cache(maxsize=None)
def _anisotropic_kernels(p: int) -> dict[LocalInvariants, tuple[MonomialClass, ...]]:
    """Witt class invariants -> smallest anisotropic representative over Q_p."""
    field = FieldTag.qp(p)
    classes = [MonomialClass(p, 0, a, b, 0) for b in (0, 1) for a in (0, 1)]
    table: dict = {}
    for dim in range(5):
        for combo in itertools.combinations_with_replacement(classes, dim):
            form = DiagonalForm(combo, field)
            if dim >= 2 and is_isotropic_local(form):
                continue
            key = _witt_key(form)
            table.setdefault(key, combo)
    return table


def _witt_key(q: DiagonalForm):
    # Hasse is not a Witt invariant: pad with hyperbolic planes to dim 8 or 9 first
    p = q.prime
    pad = (8 + q.dim % 2 - q.dim) // 2 if q.dim <= 9 else 0
    hyp = (MonomialClass.one(p), MonomialClass.minus_one(p)) * max(pad, 0)
    padded = DiagonalForm(q.entries + hyp, q.field)
    return local_invariants(padded)


def witt_reduce_local(q: DiagonalForm) -> DiagonalForm:
    if q.field.kind is not FieldKind.QP:
        raise UnsupportedField("Witt reduction is implemented over Q_p tags only")
    if q.dim > 9:
        # strip to dimension <= 9 via the anisotropic kernel of pieces
        head = witt_reduce_local(DiagonalForm(q.entries[:8], q.field))
        return witt_reduce_local(DiagonalForm(head.entries + q.entries[8:], q.field))
    return DiagonalForm(_anisotropic_kernels(q.prime)[_witt_key(q)], q.field)


def springer_split(q: DiagonalForm) -> tuple[DiagonalForm, DiagonalForm]:
    """q = q1 + t*q2; both parts over the residue field with the t-bit cleared."""
    if not q.field.is_laurent:
        raise UnsupportedField(f"Springer decomposition needs a Laurent field, got {q.field}")
    res = q.field.residue_field()
    q1 = tuple(e for e in q.entries if not e.has_t())
    q2 = tuple(e.constant_part() for e in q.entries if e.has_t())
    return DiagonalForm(q1, res), DiagonalForm(q2, res)


def springer_join(q1: DiagonalForm, q2: DiagonalForm) -> DiagonalForm:
    """Inverse of :func:`springer_split`."""
    if q1.field != q2.field or not q1.field.is_local:
        raise FieldMismatch("residue forms must share a local field")
    field = specialize_to_laurent(q1.field)
    t = MonomialClass.t(q1.prime)
    return DiagonalForm(q1.entries + tuple(t * e for e in q2.entries), field)


def is_anisotropic_laurent(q: DiagonalForm) -> bool:
    q1, q2 = springer_split(q)
    return not is_isotropic_local(q1) and not is_isotropic_local(q2)


def witt_reduce_laurent(q: DiagonalForm) -> DiagonalForm:
    q1, q2 = springer_split(q)
    if q1.field.kind is not FieldKind.QP:
        raise UnsupportedField("Witt reduction is implemented over Q_p((t)) only")
    return springer_join(witt_reduce_local(q1), witt_reduce_local(q2))


def is_isotropic(q: DiagonalForm) -> bool:
    """Decide isotropy over a local or Laurent tag.  Forms over Q_p(t) must be
    specialized to Q_p((t)) first; anisotropy there implies anisotropy over F."""
    if q.field.is_local:
        return is_isotropic_local(q)
    if q.field.is_laurent:
        return not is_anisotropic_laurent(q)
    raise UnsupportedField(f"no isotropy decider over {q.field}; specialize to Q_p((t)) first")
