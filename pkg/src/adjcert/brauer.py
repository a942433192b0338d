"""2-torsion Brauer classes as sums of quaternion symbols, their residues over
Laurent completions, and nonvanishing of degree-3 cup products."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import FieldMismatch, InternalDeciderMismatch, UnsupportedField
from .funfield import FieldKind, FieldTag, MonomialClass, common_field, parse_monomial_class, specialize_to_laurent
from .padic import LocalSquareClass
from .quadform import DiagonalForm, LocalField, is_anisotropic_laurent, is_isotropic_local, pfister, springer_split

Pair = tuple[MonomialClass, MonomialClass]


def _pair_key(pair: Pair):
    x, y = sorted(pair, key=MonomialClass.sort_key)
    return (x.sort_key(), y.sort_key())


def _cancel(pairs: Iterable[Pair]) -> tuple[Pair, ...]:
    """Drop pairs that occur an even number of times (symbols are 2-torsion)."""
    pairs = list(pairs)
    counts = Counter(_pair_key(pr) for pr in pairs)
    kept, seen = [], set()
    for pr in sorted(pairs, key=_pair_key):
        key = _pair_key(pr)
        if counts[key] % 2 and key not in seen:
            seen.add(key)
            kept.append(tuple(sorted(pr, key=MonomialClass.sort_key)))
    return tuple(kept)


@dataclass(frozen=True, eq=False)
class SymbolSum:
    """Formal sum of quaternion symbols (a, b) in the 2-torsion of Br."""

    pairs: tuple[Pair, ...]
    field: FieldTag

    def __post_init__(self):
        object.__setattr__(self, "pairs", _cancel(self.pairs))

    @classmethod
    def of(cls, *pairs: Pair, field: FieldTag) -> "SymbolSum":
        return cls(tuple(pairs), field)

    @classmethod
    def parse(cls, text: str, field: FieldTag) -> "SymbolSum":
        """``(p,t*b) + (u,t)``; ``0`` for the trivial class."""
        text = text.strip()
        if text in ("0", ""):
            return cls((), field)
        pairs = []
        for chunk in text.split("+"):
            chunk = chunk.strip()
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ValueError(f"cannot parse symbol {chunk!r}")
            a, b = chunk[1:-1].split(",")
            pairs.append((parse_monomial_class(a, field.prime), parse_monomial_class(b, field.prime)))
        return cls(tuple(pairs), field)

    @property
    def prime(self) -> int:
        return self.field.prime

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        return SymbolSum(self.pairs + other.pairs, common_field(self.field, other.field))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolSum):
            return NotImplemented
        return self.field == other.field and [_pair_key(x) for x in self.pairs] == \
            [_pair_key(x) for x in other.pairs]

    def __hash__(self) -> int:
        return hash((self.field, tuple(_pair_key(x) for x in self.pairs)))

    def is_empty(self) -> bool:
        return not self.pairs

    def __str__(self) -> str:
        if not self.pairs:
            return "0"
        return " + ".join(f"({a},{b})" for a, b in self.pairs)

    def __repr__(self) -> str:
        return f"SymbolSum({self} over {self.field})"


# -- Milnor normalization -----------------------------------------------------

# reduced generators of the monomial group: u, p, t (index = bit position)
def _generators(p: int) -> tuple[MonomialClass, MonomialClass, MonomialClass]:
    return (MonomialClass.u(p), MonomialClass.uniformizer(p), MonomialClass.t(p))


def _support(x: MonomialClass) -> list[int]:
    return [i for i, bit in enumerate(x.reduced()) if bit]


def _minus_one_support(p: int) -> list[int]:
    # -1 is a square for p = 1 mod 4 and lies in the class of u for p = 3 mod 4
    return [0] if p % 4 == 3 else []


def _reduce_repeats(idx: tuple[int, ...], p: int) -> list[tuple[int, ...]]:
    """Rewrite (x, x, ...) as (-1, x, ...) until no rewrite applies."""
    idx = tuple(sorted(idx))
    for k in range(len(idx) - 1):
        if idx[k] == idx[k + 1]:
            minus = _minus_one_support(p)
            if not minus:
                return []
            if idx[k] == minus[0]:
                # (u, u) = (-1, u) = (u, u): fixed point of the rewrite
                continue
            new = idx[:k] + (minus[0],) + idx[k + 1:]
            return _reduce_repeats(new, p)
    return [idx]


def _expand(slots: Sequence[MonomialClass], p: int) -> Counter:
    counts: Counter = Counter()
    for combo in itertools.product(*(_support(x) for x in slots)):
        for term in _reduce_repeats(combo, p):
            counts[term] += 1
    return counts


def milnor_normalize(s: SymbolSum) -> SymbolSum:
    """Expand over the basis (u, p, t) by bilinearity, rewrite (x,x) = (-1,x),
    cancel mod 2 and sort."""
    p = s.prime
    gens = _generators(p)
    counts: Counter = Counter()
    for a, b in s.pairs:
        counts.update(_expand((a, b), p))
    pairs = tuple((gens[i], gens[j]) for (i, j), n in sorted(counts.items()) if n % 2)
    return SymbolSum(pairs, s.field)


@dataclass(frozen=True)
class TripleSymbol:
    """Normal form of a sum of cup products (a) u (b) u (c) in H^3(F, mu_2)."""

    prime: int
    triples: tuple[tuple[MonomialClass, MonomialClass, MonomialClass], ...]

    def is_empty(self) -> bool:
        return not self.triples

    def __str__(self) -> str:
        if not self.triples:
            return "0"
        return " + ".join("(" + ")u(".join(str(x) for x in tr) + ")" for tr in self.triples)


def normalize_triple(a: MonomialClass, b: MonomialClass, c: MonomialClass,
                     *more: tuple[MonomialClass, MonomialClass, MonomialClass]) -> TripleSymbol:
    """Normal form of (a)u(b)u(c) [+ further triples] over F = Q_p(t).

    Besides the Milnor relations this uses two facts about constants: a
    triple of elements of Q_p vanishes (cohomological dimension 2), and a
    triple containing two unit slots (u)u(u) vanishes since units pair
    trivially under the tame symbol for p odd.
    """
    p = a.prime
    counts: Counter = Counter()
    for tr in ((a, b, c),) + more:
        counts.update(_expand(tr, p))
    gens = _generators(p)
    kept = []
    for idx, n in sorted(counts.items()):
        if n % 2 == 0 or 2 not in idx or idx.count(0) >= 2:
            continue
        kept.append(tuple(gens[i] for i in idx))
    return TripleSymbol(p, tuple(kept))


# -- residues over Laurent completions --------------------------------------


@dataclass(frozen=True)
class BrauerResidueInvariants:
    """Class = A0 + (a, t) with A0 from the residue field: (Hilbert value of A0, class of a)."""

    unramified_part: int
    ramified_part: LocalSquareClass

    def is_trivial(self) -> bool:
        return self.unramified_part == 1 and self.ramified_part.is_trivial()

    def __mul__(self, other: "BrauerResidueInvariants") -> "BrauerResidueInvariants":
        return BrauerResidueInvariants(self.unramified_part * other.unramified_part,
                                       self.ramified_part * other.ramified_part)


def _laurent_field(field: FieldTag) -> FieldTag:
    if field.kind in (FieldKind.RATIONAL_FUNCTION, FieldKind.QP):
        return specialize_to_laurent(field)
    if field.kind is FieldKind.QUAD_EXT:
        return FieldTag.laurent_quad_ext(field.ext)
    return field


def symbol_residue(x: MonomialClass, y: MonomialClass) -> tuple[MonomialClass, MonomialClass, MonomialClass]:
    """Split (x0 t^e1, y0 t^e2) = (x0, y0) + (r, t).  Returns (x0, y0, r) with
    r = (-1)^(e1 e2) x0^e2 y0^e1 (the tame residue)."""
    x0, y0 = x.constant_part(), y.constant_part()
    r = MonomialClass.one(x.prime)
    if y.has_t():
        r = r * x0
    if x.has_t():
        r = r * y0
    if x.has_t() and y.has_t():
        r = -r
    return x0, y0, r


def brauer_residue_invariants(s: SymbolSum) -> BrauerResidueInvariants:
    field = _laurent_field(s.field)
    if not field.is_laurent:
        raise UnsupportedField(f"residue invariants need a Laurent field, got {s.field}")
    k = LocalField.of(field.residue_field())
    unram, ram = 1, MonomialClass.one(s.prime)
    for x, y in s.pairs:
        x0, y0, r = symbol_residue(x, y)
        unram *= k.hilbert(x0, y0)
        ram = ram * r
    return BrauerResidueInvariants(unram, k.square_class(ram))


def single_symbol_representative(s: SymbolSum) -> tuple[Pair, str]:
    """A single symbol with the same Milnor normal form as s, found by search.

    Falls back to matching residue invariants when no normal-form match exists.
    """
    if len(s.pairs) == 1:
        return s.pairs[0], "given"
    p = s.prime
    if not s.pairs:
        one = MonomialClass.one(p)
        return (one, one), "given"
    target = milnor_normalize(s)
    classes = MonomialClass.all_reduced(p)
    for x, y in itertools.combinations_with_replacement(classes, 2):
        if milnor_normalize(SymbolSum(((x, y),), s.field)) == target:
            return (x, y), "normal-form"
    inv = brauer_residue_invariants(s)
    for x, y in itertools.combinations_with_replacement(classes, 2):
        if brauer_residue_invariants(SymbolSum(((x, y),), s.field)) == inv:
            return (x, y), "residue-invariants"
    raise AssertionError("every 2-torsion class over the completion is a symbol")  # pragma: no cover


def norm_form(pair: Pair, field: FieldTag) -> DiagonalForm:
    return pfister(list(pair), field)


def is_nonsplit_over_completion(s: SymbolSum) -> bool:
    """Decide non-splitness over the Laurent completion by residue invariants,
    cross-checked against anisotropy of a norm form."""
    field = _laurent_field(s.field)
    s = SymbolSum(s.pairs, field)
    by_residue = not brauer_residue_invariants(s).is_trivial()
    pair, _ = single_symbol_representative(s)
    by_norm_form = is_anisotropic_laurent(norm_form(pair, field))
    if by_residue != by_norm_form:
        raise InternalDeciderMismatch(f"{s}: residue says {by_residue}, norm form says {by_norm_form}")
    return by_residue


# -- degree 3 ----------------------------------------------------------------


@dataclass(frozen=True)
class H3Class:
    nonzero: bool
    witness: dict = dc_field(default_factory=dict)


def _residue_triple(a: MonomialClass, b: MonomialClass, c: MonomialClass) -> list[Pair]:
    """t-adic residue of (a)u(b)u(c) in Br_2(Q_p), as a list of symbols.

    Each slot is x0 * t^e.  Expanding trilinearly, terms without t vanish in
    H^3(Q_p) = 0; (t)u(t) = (-1)u(t); the residue of (t)u(alpha) is alpha.
    """
    p = a.prime
    t = MonomialClass.t(p)
    minus_one = MonomialClass.minus_one(p)
    atoms = [[x.constant_part()] + ([t] if x.has_t() else []) for x in (a, b, c)]
    out: list[Pair] = []
    for term in itertools.product(*atoms):
        units = [x for x in term if not x.has_t()]
        n_t = 3 - len(units)
        if n_t == 0:
            continue
        # fold pairs of t into -1, keeping one t for the residue
        units += [minus_one] * (n_t - 1)
        out.append((units[0], units[1]))
    return out


def _pair_str(pair: Pair) -> str:
    return f"({pair[0]},{pair[1]})"


def h3_symbol_is_nonzero(a: MonomialClass, b: MonomialClass, c: MonomialClass) -> H3Class:
    """Decide (a)u(b)u(c) != 0 over Q_p((t)) by two independent routes."""
    p = a.prime
    if not (a.has_t() or b.has_t() or c.has_t()):
        return H3Class(False, {"route": "short-circuit", "reason": "all slots constant; H^3(Q_p) = 0",
                               "slots": [str(a), str(b), str(c)]})
    field = FieldTag.laurent_qp(p)
    qp = LocalField.of(FieldTag.qp(p))

    form = pfister([a, b, c], field)
    res1, res2 = springer_split(form)
    pfister_nonzero = not is_isotropic_local(res1) and not is_isotropic_local(res2)

    residue = _residue_triple(a, b, c)
    value = 1
    for x, y in residue:
        value *= qp.hilbert(x, y)
    residue_nonzero = value == -1

    if pfister_nonzero != residue_nonzero:
        raise InternalDeciderMismatch(f"({a})u({b})u({c}): Pfister route {pfister_nonzero}, "
                                      f"residue route {residue_nonzero}")
    witness = {
        "slots": [str(a), str(b), str(c)],
        "pfister_form": str(form),
        "pfister_residue_forms": [str(res1), str(res2)],
        "pfister_anisotropic": pfister_nonzero,
        "residue_symbols": [_pair_str(pr) for pr in residue],
        "residue_hilbert": value,
    }
    return H3Class(pfister_nonzero, witness)
