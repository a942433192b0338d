"""Exact verification of R-equivalence obstructions for adjoint classical groups over Q_p(t)."""
from .brauer import (
    BrauerResidueInvariants,
    H3Class,
    SymbolSum,
    brauer_residue_invariants,
    h3_symbol_is_nonzero,
    is_nonsplit_over_completion,
    milnor_normalize,
    normalize_triple,
)
from .funfield import FieldTag, LaurentPoly, MonomialClass, monomial_class, parse_monomial_class
from .harness import Certificate, Scenario, run_example_DD, run_prelim, run_scenario, run_theorem_A
from .padic import PAdicNumber, canonical_nonsquare_unit, hensel_sqrt, hilbert_symbol
from .quadform import DiagonalForm, is_isotropic, is_isotropic_local, parse_form, pfister
from .quatalg import (
    Involution,
    QuaternionAlgebra,
    QuaternionElement,
    QuatMatrix,
    SkewHermitianForm,
    involution_discriminant,
    involution_type,
    multiplier,
)

__all__ = [name for name in dir() if not name.startswith("_")]
