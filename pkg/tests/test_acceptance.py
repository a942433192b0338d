"""End-to-end acceptance criteria; each test prints one PASS/FAIL line."""
import contextlib
import itertools
import random
import subprocess
import sys
import time

import pytest

from adjcert.brauer import SymbolSum, h3_symbol_is_nonzero, is_nonsplit_over_completion, milnor_normalize
from adjcert.funfield import FieldTag, LaurentPoly, MonomialClass, parse_monomial_class
from adjcert.harness import run_example_DD, run_theorem_A
from adjcert.padic import ExtKind, PAdicNumber, QuadExtension, canonical_nonsquare_unit, hilbert_symbol, is_square_in_extension
from adjcert.quadform import DiagonalForm, is_anisotropic_laurent, is_isotropic_local, parse_form, pfister
from adjcert.quatalg import (
    QuaternionAlgebra,
    SkewHermitianForm,
    find_pure_with_square,
    find_unit_with_nrd,
    hermitian_discriminant,
    involution_discriminant,
    involution_type,
    InvolutionType,
    is_proper_similitude,
    multiplier,
    QuatMatrix,
    clifford_component_classes,
)

import test_brauer
import test_padic
import test_quadform
import test_quatalg
from oracles import is_isotropic_oracle, least_nonsquare

N = 32
GRID = [(p, m) for p in (3, 5, 7, 13) for m in (1, 2, 3)]


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number, title):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\nACCEPTANCE {number} ({title}): FAIL")
            raise
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} ({title}): PASS")
    return run


def C(text, p):
    return parse_monomial_class(text, p)


def check_named(cert, name, actual):
    found = [c for c in cert.checks if c.name == name]
    assert found and found[0].passed and found[0].actual == actual, (name, found)


def test_1_preliminaries(criterion):
    with criterion(1, "preliminaries"):
        for p in (3, 5, 7, 11, 13):
            start = time.perf_counter()
            b = canonical_nonsquare_unit(p)
            pp, pb = PAdicNumber.from_rational(p, p, N), PAdicNumber.from_rational(b, p, N)
            assert hilbert_symbol(pp, pb) == -1
            assert not is_isotropic_local(pfister([C("u", p), C("p", p)], FieldTag.qp(p)))
            assert not is_square_in_extension(pb, QuadExtension(p, ExtKind.RAMIFIED))
            K = FieldTag.laurent_quad_ext(QuadExtension(p, ExtKind.RAMIFIED))
            assert is_anisotropic_laurent(parse_form("<1,-t,-b,t*b>", K))
            H = QuaternionAlgebra.of(b, LaurentPoly.t(p, N), p, N)
            u = find_unit_with_nrd(H, -1, "i")
            assert (u.nrd() + 1).vanishes_to(30)
            elapsed = time.perf_counter() - start
            assert elapsed < 1.0, (p, elapsed)


def test_2_unitary_even_rank(criterion):
    with criterion(2, "case n = 2m"):
        for p, m in GRID:
            cert = run_theorem_A(1, p, m)
            assert cert.verdict
            check_named(cert, "sigma type (fixed-space count)", "orthogonal")
            assert cert.discriminants["disc_sigma"] == str(C("t*b", p).canonical()) == "u*t"
            assert cert.multiplier == "-t"
            check_named(cert, "mu(g) = sigma(g) g", "-t")
            F = FieldTag.laurent_qp(p)
            assert cert.discriminants["D(B,tau)"] == str(milnor_normalize(SymbolSum.parse("(p,t*b)", F)))
            assert cert.obstruction.nonzero
            assert [str(x) for x in cert.obstruction.witness["slots"]] == ["t", "p", "u"]
            assert cert.obstruction.witness["pfister_anisotropic"] and cert.obstruction.witness["residue_hilbert"] == -1
            # independent recomputation
            r = h3_symbol_is_nonzero(C("t", p), C("p", p), C("b", p))
            assert r.nonzero


def test_3_unitary_odd_rank(criterion):
    with criterion(3, "case n = 2m+1"):
        for p, m in GRID:
            cert = run_theorem_A(2, p, m)
            assert cert.verdict
            check_named(cert, "sigma type (fixed-space count)", "orthogonal")
            assert cert.discriminants["disc_sigma"] == "u"
            assert cert.multiplier == "t"
            F = FieldTag.laurent_qp(p)
            assert cert.discriminants["D(B,tau)"] == str(milnor_normalize(SymbolSum.parse("(b,t*p)", F)))
            assert cert.obstruction.nonzero
            assert [str(x) for x in cert.obstruction.witness["slots"]] == ["t", "u", "p"]
            assert h3_symbol_is_nonzero(C("t", p), C("b", p), C("p", p)).nonzero


def test_4_example(criterion):
    with criterion(4, "example of type 2D_3"):
        for p in (3, 5, 7, 13):
            cert = run_example_DD(p)
            assert cert.verdict
            F = FieldTag.laurent_qp(p)
            t = LaurentPoly.t(p, N)
            Q = QuaternionAlgebra.of(t * p, canonical_nonsquare_unit(p), p, N)
            first, second = clifford_component_classes(C("p", p), C("u", p), Q.brauer_class())
            assert first == milnor_normalize(SymbolSum.parse("(p,u)", Q.field))
            assert second == milnor_normalize(SymbolSum.parse("(t,u)", Q.field))
            assert is_nonsplit_over_completion(first) and is_nonsplit_over_completion(second)
            h = SkewHermitianForm((Q.j(), Q.j() * -p, Q.i()))
            s_h = h.adjoint_involution()
            assert involution_type(s_h) is InvolutionType.ORTHOGONAL
            assert involution_discriminant(s_h) == C("p*t", p) == hermitian_discriminant(h)
            pt = Q.a
            ip = find_pure_with_square(Q, -pt, Q.j())
            assert (ip * ip + Q.element(pt)).vanishes_to(30)
            assert (ip * Q.j() + Q.j() * ip).vanishes_to(30)
            g = QuatMatrix.diag([ip, ip, Q.i()])
            assert multiplier(s_h, g).agrees_with(-pt, 30)
            assert is_proper_similitude(s_h, g)
            assert cert.multiplier == f"-{p}*t"
            assert h3_symbol_is_nonzero(C("t", p), C("p", p), C("u", p)).nonzero
            q = parse_form("<1,-t>", F) * pfister([C("p", p), C("u", p)], F)
            assert is_anisotropic_laurent(q)


def test_5_decider_agreement(criterion):
    with criterion(5, "decider agreement on 4096 triples"):
        start = time.perf_counter()
        for p in (3, 5, 7, 13):
            classes = MonomialClass.all_unreduced(p)
            triples = list(itertools.product(classes, repeat=3))
            assert len(triples) == 4096
            for a, b, c in triples:
                r = h3_symbol_is_nonzero(a, b, c)
                if r.witness.get("route") == "short-circuit":
                    continue
                residue_nonzero = r.witness["residue_hilbert"] == -1
                assert residue_nonzero == r.witness["pfister_anisotropic"] == r.nonzero
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, elapsed


def test_6_oracle_equivalence(criterion):
    with criterion(6, "oracle equivalence for local isotropy"):
        for p in (3, 5, 7):
            classes = [MonomialClass(p, 0, a, b, 0) for b in (0, 1) for a in (0, 1)]
            forms = list(itertools.product(classes, repeat=4))
            assert len(forms) == 256
            u = least_nonsquare(p)
            for entries in forms:
                ints = [u**c.a * p**c.b for c in entries]
                assert is_isotropic_local(DiagonalForm(entries, FieldTag.qp(p))) == is_isotropic_oracle(ints, p)


def test_7_property_suites(criterion):
    with criterion(7, "property suites"):
        for p in (3, 5, 7, 11, 13):
            test_padic.test_hilbert_bilinear_symmetric(p)
        test_quatalg.test_nrd_multiplicative_and_conj()
        test_quatalg.test_multiplier_multiplicative()
        test_brauer.test_normalize_idempotent_additive_sound()
        for p in (3, 5, 7, 13):
            test_quadform.test_springer_roundtrip(p)


def test_8_determinism(criterion):
    with criterion(8, "byte-identical certificates"):
        cmd = [sys.executable, "-m", "adjcert", "verify", "--scenario", "dd", "--p", "5", "--format", "json"]
        first = subprocess.run(cmd, capture_output=True, check=True)
        second = subprocess.run(cmd, capture_output=True, check=True)
        assert first.stdout and first.stdout == second.stdout
