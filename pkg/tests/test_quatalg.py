import random
from fractions import Fraction

import pytest

from adjcert.brauer import SymbolSum, milnor_normalize
from adjcert.errors import (
    MalformedInvolution,
    NoSolution,
    NotDiagonal,
    NotPure,
    NotSimilitude,
)
from adjcert.funfield import FieldTag, LaurentPoly, MonomialClass, monomial_class, parse_monomial_class
from adjcert.padic import canonical_nonsquare_unit
from adjcert.quatalg import (
    Involution,
    InvolutionType,
    QuaternionAlgebra,
    QuatMatrix,
    ScalarAdjointInvolution,
    ScalarMatrix,
    SkewHermitianForm,
    clifford_component_classes,
    discriminant_algebra_class,
    find_pure_with_square,
    find_unit_with_nrd,
    hermitian_discriminant,
    involution_apply,
    involution_discriminant,
    involution_type,
    is_proper_similitude,
    multiplier,
    nrd_diag_matrix,
    nrd_quat,
    quat_mul,
)

N = 32
PRIMES = [3, 5, 7, 13]


def C(text, p):
    return parse_monomial_class(text, p)


def H_bt(p, n=N):
    """(b, t) with i^2 = b, j^2 = t."""
    return QuaternionAlgebra.of(canonical_nonsquare_unit(p), LaurentPoly.t(p, n), p, n)


def Q_ptu(p, n=N):
    """(pt, u) with i^2 = pt, j^2 = u."""
    t = LaurentPoly.t(p, n)
    return QuaternionAlgebra.of(t * p, canonical_nonsquare_unit(p), p, n)


def rand_laurent(rng, p, n=N):
    terms = {k: rng.randint(-30, 30) for k in range(-1, 2)}
    out = LaurentPoly.zero(p, n)
    for k, c in terms.items():
        if c:
            out = out + LaurentPoly.monomial(c, k, p, n)
    return out


def rand_quat(rng, alg):
    return alg.element(*(rand_laurent(rng, alg.prime, alg.precision) for _ in range(4)))


def test_basis_relations():
    H = H_bt(5)
    i, j = H.i(), H.j()
    assert quat_mul(i, j).agrees_with(H.ij(), N)
    assert (j * i).agrees_with(-H.ij(), N)
    assert (i * i).agrees_with(H.element(H.a), N)
    assert (j * j).agrees_with(H.element(H.b), N)
    x = H.element(3, 2)
    assert (x * x).agrees_with(H.element(9 + 4 * 2, 12), N)


def test_nrd_examples():
    p = 5
    H = H_bt(p)
    t = LaurentPoly.t(p, N)
    assert nrd_quat(H.i()).agrees_with(LaurentPoly.constant(-2, p), N)
    x = H.j() * t ** -1
    assert nrd_quat(x).agrees_with(-(t ** -1), N)
    assert monomial_class(nrd_quat(x)) == C("-t", p)


def test_nrd_multiplicative_and_conj():
    rng = random.Random(21)
    for k in range(500):
        p = PRIMES[k % 4]
        alg = H_bt(p) if k % 2 else Q_ptu(p)
        x, y = rand_quat(rng, alg), rand_quat(rng, alg)
        assert nrd_quat(x * y).agrees_with(nrd_quat(x) * nrd_quat(y), N - 2)
        assert (x * x.conj()).agrees_with(alg.element(nrd_quat(x)), N - 2)
        assert (x * y).conj().agrees_with(y.conj() * x.conj(), N - 2)


def test_find_unit_with_nrd_examples():
    p = 5
    H = QuaternionAlgebra.of(2, LaurentPoly.t(p, 2), p, 2)
    u = find_unit_with_nrd(H, -1, "i")
    assert u.x0.coefficient(0).unit == 7 and u.x1.is_zero()
    H = H_bt(p)
    assert find_unit_with_nrd(H, 1, "i").agrees_with(H.one(), N)
    with pytest.raises(NoSolution):
        find_unit_with_nrd(H, LaurentPoly.t(p, N), "i")


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_find_unit_verifies(p):
    H = H_bt(p)
    u = find_unit_with_nrd(H, -1, "i")
    assert (u.nrd() + 1).vanishes_to(N - 2)
    assert (u * H.i()).agrees_with(H.i() * u, N - 2)


def test_find_unit_in_j_needs_minus_one_square():
    # x^2 - t y^2 = -1 forces x0^2 = -1 in Q_p
    assert (find_unit_with_nrd(H_bt(5), -1, "j").nrd() + 1).vanishes_to(N - 2)
    for p in (3, 7, 11):
        with pytest.raises(NoSolution):
            find_unit_with_nrd(H_bt(p), -1, "j")


def test_find_pure_examples():
    p = 5
    t = LaurentPoly.t(p, N)
    Q = QuaternionAlgebra.of(t * 5, 2, p, N)
    w = find_pure_with_square(Q, -(t * 5), Q.j())
    assert w.is_pure() and (w * w).agrees_with(Q.element(-(t * 5)), N - 2)
    assert (w * Q.j()).agrees_with(-(Q.j() * w), N - 2)
    assert w.x1.coefficient(0).unit % 25 == 7 and w.x3.is_zero()
    assert find_pure_with_square(Q, Q.a, Q.j()).agrees_with(Q.i(), N)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_find_pure_class_obstruction(p):
    Q = Q_ptu(p)
    pt = Q.a
    u = LaurentPoly.constant(canonical_nonsquare_unit(p), p, N)
    # w^2 = pt (x^2 - u y^2): an odd p-valuation ratio is not a norm from the unramified extension
    with pytest.raises(NoSolution):
        find_pure_with_square(Q, pt * p, Q.j())
    # a unit ratio always is
    w = find_pure_with_square(Q, u * pt, Q.j())
    assert (w * w).agrees_with(Q.element(u * pt), N - 2)


def test_find_pure_requires_axis():
    Q = Q_ptu(5)
    with pytest.raises(NotPure):
        find_pure_with_square(Q, Q.a, Q.one())


def case1_sigma(p, m):
    H = H_bt(p)
    t = LaurentPoly.t(p, N)
    b = canonical_nonsquare_unit(p)
    D = QuatMatrix.diag([H.j() * t ** -1] + [H.i() * Fraction(1, b)] * (2 * m - 1))
    return H, Involution.first_kind(D)


def test_sigma_case1_example():
    p = 5
    H, s = case1_sigma(p, 2)
    X = QuatMatrix.diag([H.j()] + [H.i()] * 3)
    assert involution_apply(s, X).agrees_with(-X, N - 2)
    I = QuatMatrix.identity(H, 4)
    assert s(I).agrees_with(I, N - 2)


def test_sigma_involutive_antimultiplicative():
    rng = random.Random(2)
    H, s = case1_sigma(7, 1)
    for _ in range(50):
        X = QuatMatrix(tuple(tuple(rand_quat(rng, H) for _ in range(2)) for _ in range(2)), H)
        Y = QuatMatrix(tuple(tuple(rand_quat(rng, H) for _ in range(2)) for _ in range(2)), H)
        assert s(s(X)).agrees_with(X, N - 4)
        assert s(X * Y).agrees_with(s(Y) * s(X), N - 4)


def test_involution_types():
    p = 5
    H, s = case1_sigma(p, 1)
    assert involution_type(s) is InvolutionType.ORTHOGONAL
    canon = Involution.first_kind(QuatMatrix.identity(H, 1))
    assert involution_type(canon) is InvolutionType.SYMPLECTIC
    tau = Involution.unitary_twist(s.D, C("p", p))
    assert involution_type(tau) is InvolutionType.UNITARY


@pytest.mark.parametrize("deg", [4, 6, 8, 12])
def test_type_detection_pure_diagonal(deg):
    rng = random.Random(deg)
    for p in (3, 5):
        H = H_bt(p)
        choices = [H.i(), H.j(), H.ij(), H.i() * 3, H.j() * LaurentPoly.t(p, N) ** -1]
        D = QuatMatrix.diag([rng.choice(choices) for _ in range(deg // 2)])
        assert involution_type(Involution.first_kind(D)) is InvolutionType.ORTHOGONAL


def test_malformed_involution():
    H = H_bt(5)
    with pytest.raises(MalformedInvolution):
        Involution.first_kind(QuatMatrix.diag([H.one(), H.i()]))


def test_involution_discriminant_instances():
    p = 5
    H = H_bt(p)
    b = canonical_nonsquare_unit(p)
    t = LaurentPoly.t(p, N)
    s1 = Involution.first_kind(QuatMatrix.diag([H.j() * t ** -1, H.i() * Fraction(1, b)]))
    assert involution_discriminant(s1) == C("t*b", p)
    s2 = Involution.first_kind(QuatMatrix.diag([H.i(), H.j(), H.j()]))
    assert involution_discriminant(s2) == C("b", p)
    Q = Q_ptu(p)
    h = SkewHermitianForm((Q.j(), Q.j() * -p, Q.i()))
    assert involution_discriminant(h.adjoint_involution()) == C("p*t", p)
    with pytest.raises(NotPure):
        involution_discriminant(Involution.first_kind(QuatMatrix.diag([H.one(), H.one()])))


@pytest.mark.parametrize("p", PRIMES)
def test_hermitian_discriminant(p):
    Q = Q_ptu(p)
    h2 = SkewHermitianForm((Q.j(), Q.j() * -p))
    h3 = h2 + SkewHermitianForm((Q.i(),))
    assert hermitian_discriminant(h3) == C("p*t", p)
    assert hermitian_discriminant(h2).is_trivial()
    H = H_bt(p)
    assert hermitian_discriminant(SkewHermitianForm((H.i(),))) == C("b", p)
    # agreement with the involution discriminant on all three instances
    assert hermitian_discriminant(h3) == involution_discriminant(h3.adjoint_involution())
    with pytest.raises(NotPure):
        SkewHermitianForm((Q.one(),))


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_multiplier_case1(p):
    m = 2
    H, s = case1_sigma(p, m)
    u = find_unit_with_nrd(H, -1, "i")
    g = QuatMatrix.diag([H.j()] + [u * H.j()] * (2 * m - 1))
    mu = multiplier(s, g)
    assert mu.agrees_with(-LaurentPoly.t(p, N), N)
    assert multiplier(s, QuatMatrix.identity(H, 2 * m)).agrees_with(LaurentPoly.constant(1, p), N)


def test_multiplier_case2_and_fallback():
    for p in (5, 13, 3, 7):
        H = H_bt(p)
        s = Involution.first_kind(QuatMatrix.diag([H.i(), H.j(), H.j()]))
        try:
            u = find_unit_with_nrd(H, -1, "j")
            x = H.j() * u.conj()
        except NoSolution:
            x = H.j() * find_pure_with_square(H, -1, H.j())
        g = QuatMatrix.diag([H.j(), x, x])
        assert multiplier(s, g).agrees_with(LaurentPoly.t(p, N), N)


def test_not_similitude():
    H, s = case1_sigma(5, 1)
    g = QuatMatrix.diag([H.j(), H.one()])
    with pytest.raises(NotSimilitude):
        multiplier(s, g)


@pytest.mark.parametrize("p", PRIMES)
def test_example_similitude(p):
    Q = Q_ptu(p)
    pt = Q.a
    ip = find_pure_with_square(Q, -pt, Q.j())
    h = SkewHermitianForm((Q.j(), Q.j() * -p, Q.i()))
    s = h.adjoint_involution()
    g = QuatMatrix.diag([ip, ip, Q.i()])
    assert multiplier(s, g).agrees_with(-pt, N - 2)
    assert nrd_diag_matrix(g).agrees_with(-(pt ** 3), N - 2)
    assert is_proper_similitude(s, g)
    assert is_proper_similitude(s, QuatMatrix.identity(Q, 3))


def test_nrd_diag_examples():
    H = H_bt(5)
    assert nrd_diag_matrix(QuatMatrix.identity(H, 3)).agrees_with(LaurentPoly.constant(1, 5), N)
    assert nrd_diag_matrix(QuatMatrix.diag([H.j()])).agrees_with(-LaurentPoly.t(5, N), N)
    with pytest.raises(NotDiagonal):
        nrd_diag_matrix(QuatMatrix.unit(H, 2, 0, 1, H.one()) + QuatMatrix.identity(H, 2))


def test_improper_split_similitude():
    p = 5
    one, mp = LaurentPoly.constant(1, p), LaurentPoly.constant(-p, p)
    s = ScalarAdjointInvolution((one, mp))
    g = ScalarMatrix.diag([one, -one])
    assert multiplier(s, g).agrees_with(one, N)
    assert not is_proper_similitude(s, g)
    assert involution_discriminant(s) == C("p", p)


def test_multiplier_multiplicative():
    rng = random.Random(17)
    for k in range(100):
        p = PRIMES[k % 4]
        H = H_bt(p)
        n = 3
        s = Involution.first_kind(QuatMatrix.diag([H.i()] * n))

        def similitude():
            w = H.element(rand_laurent(rng, p), rand_laurent(rng, p))
            if w.nrd().is_zero():
                w = H.one()
            c = LaurentPoly.monomial(rng.choice([1, -1, 2, 3, p]), rng.randint(-1, 1), p, N)
            diag = QuatMatrix.diag([(w if rng.random() < 0.5 else w.conj()) * c for _ in range(n)])
            perm = list(range(n))
            rng.shuffle(perm)
            P = QuatMatrix(tuple(tuple(H.one() if perm[r] == col else H.zero() for col in range(n))
                                 for r in range(n)), H)
            return P * diag

        g, h = similitude(), similitude()
        assert multiplier(s, g * h).agrees_with(multiplier(s, g) * multiplier(s, h), N - 4)


def test_discriminant_algebra_examples():
    p = 5
    H = H_bt(p)
    F = H.field
    norm = lambda text: milnor_normalize(SymbolSum.parse(text, F))  # noqa: E731
    assert discriminant_algebra_class(2, H, C("p", p), C("t*b", p)) == norm("(p,t*b)")
    assert discriminant_algebra_class(3, H, C("p", p), C("b", p)) == norm("(b,t*p)")
    split = SymbolSum((), F)
    assert discriminant_algebra_class(3, split, C("p", p), C("u*t", p)) == norm("(p,u*t)")


def test_clifford_components():
    for p in PRIMES:
        Q = Q_ptu(p)
        F = Q.field
        norm = lambda text: milnor_normalize(SymbolSum.parse(text, F))  # noqa: E731
        first, second = clifford_component_classes(C("p", p), C("u", p), Q.brauer_class())
        assert first == norm("(p,u)") and second == norm("(t,u)")
        first, second = clifford_component_classes(C("1", p), C("u", p), Q.brauer_class())
        assert first.is_empty() and second == milnor_normalize(Q.brauer_class())
        assert clifford_component_classes(C("u", p), C("p", p), Q.brauer_class()) == (norm("(p,u)"), norm("(t,u)"))
