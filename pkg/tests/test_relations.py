import math
import random
from fractions import Fraction

import pytest

from siegel_twists.characters import DirichletChar, quadratic_chars
from siegel_twists.errors import (
    AlphabetMismatch,
    EmptySample,
    NotCoprime,
    NotInvariant,
    RamifiedPrime,
    UnsupportedCharacter,
    ZeroInputError,
)
from siegel_twists.heckedata import SiegelForm, normalized_eigenvalue
from siegel_twists.laurent import coprimality_vs_binomial, parse_poly, rewrite_invariant_pair
from siegel_twists.numtheory import primes_coprime_to
from siegel_twists.relations import (
    PrimeSample,
    angle_relation_test,
    distance_polynomial,
    distinctness_factors,
    lift_absolute_relation,
    lift_normalized_relation,
    pairwise_difference_product,
    root_of_unity_ratio_scan,
    satake_relation_numeric,
    satake_relation_test,
    shared_sample,
    square_eigenvalue_polynomial,
    test_relation as relation_report,
    test_trace_relation as trace_report,
    twist_search,
)
from siegel_twists.synthetic import (
    form_from_satake,
    ramanujan_siegel_form,
    rescaled_satake,
    synthetic_siegel_form,
    twist_form,
    with_eigen,
)

P = parse_poly
T1 = DirichletChar.trivial(1)
CHI4 = quadratic_chars(4)[1]
CHI8 = quadratic_chars(8)[3]


@pytest.fixture(scope="module")
def base():
    f, sat = synthetic_siegel_form(random.Random(2026), primes=primes_coprime_to(2, 40), bound=50)
    return f, sat


def negated(f):
    return with_eigen(f, {p: (-a, a2) for p, (a, a2) in f.eigen.items()})


# -- samples ----------------------------------------------------------------------------------------
def test_shared_sample(base):
    f, _ = base
    g = twist_form(f, CHI8)
    S = shared_sample(f, g)
    assert list(S) == sorted(S) and 2 not in S.primes and len(S) == 40
    assert len(shared_sample(f, g, limit=5)) == 5
    assert list(shared_sample(f, g, primes=[3, 5, 4, 2])) == [3, 5]


def test_sample_errors(base):
    f, _ = base
    g = twist_form(f, CHI8)
    with pytest.raises(RamifiedPrime):
        relation_report(P("a - a'"), f, g, sample=[2, 3])
    h, _ = synthetic_siegel_form(random.Random(1), primes=[1009, 1013])
    with pytest.raises(EmptySample):
        relation_report(P("a - a'"), f, h)
    with pytest.raises(AlphabetMismatch):
        relation_report(P("x1 - a"), f, f)
    with pytest.raises(AlphabetMismatch):
        trace_report(P("b - a"), f, f)


# -- trace-coordinate relations ------------------------------------------------------------------------
def test_identical_forms(base):
    f, _ = base
    rep = relation_report(P("a - a'"), f, f)
    assert rep.density == 1 and rep.vanishing_primes == list(shared_sample(f, f))
    assert trace_report(P("a - a'"), f, f).density == 1


def test_sign_flip_at_three_mod_four(base):
    f, _ = base
    g = twist_form(f, CHI4)
    rep = relation_report(P("a - a'"), f, g)
    expect = [p for p in shared_sample(f, g) if p % 4 == 1]
    assert rep.vanishing_primes == expect
    assert rep.density == Fraction(len(expect), rep.total)


def test_twist_relation_density_one(base):
    f, _ = base
    g = twist_form(f, CHI8)
    rep = relation_report(P("(a^2 - a'^2)*(b - b')"), f, g)
    assert rep.density == 1 and rep.warnings == []
    assert relation_report(P("b - b'"), f, g).density == 1


def test_relation_values_match_independent_recomputation(base):
    f, _ = base
    g = twist_form(f, CHI8)
    poly = P("s*a*b' - s'^2*b + a'^3 - 7")
    rep = relation_report(poly, f, g)
    for p in rep.values:
        (a, a2), (c, c2) = f.eigen[p], g.eigen[p]
        s, s2 = Fraction(p) ** f.u, Fraction(p) ** g.u
        b = (a * a - a2) / s - Fraction(1, p) - 1
        b2 = (c * c - c2) / s2 - Fraction(1, p) - 1
        direct = s * a * b2 - s2 ** 2 * b + c ** 3 - 7
        assert rep.values[p] == [str(direct)]


def test_coprimality_warning(base):
    f, _ = base
    rep = relation_report(P("s - s'"), f, f)
    assert rep.density == 1 and rep.warnings
    assert relation_report(P("a - a'"), f, f).warnings == []


def test_trace_relation_zeros(base):
    f, _ = base
    zeros = set(f.primes[::4])
    h = with_eigen(f, {p: (0 if p in zeros else a, a2) for p, (a, a2) in f.eigen.items()})
    rep = trace_report(P("a * a'"), h, f)
    assert set(rep.vanishing_primes) == zeros


def test_distance_polynomial():
    rng = random.Random(3)
    primes = primes_coprime_to(1, 30)
    f = SiegelForm(3, 3, 1, T1, {p: (rng.randint(-20, 20), 1) for p in primes})
    g = with_eigen(f, {p: (a + rng.randint(-2, 2), a2) for p, (a, a2) in f.eigen.items()})
    assert trace_report(distance_polynomial(2), f, g).density == 1
    far = with_eigen(f, {p: (a + 3, a2) for p, (a, a2) in f.eigen.items()})
    assert trace_report(distance_polynomial(2), f, far).density == 0
    assert distance_polynomial(0) == P("a - a'")


# -- angles -----------------------------------------------------------------------------------------------
@pytest.fixture(scope="module")
def unitary():
    primes = primes_coprime_to(1, 40)
    f = ramanujan_siegel_form(random.Random(11), primes)
    g = ramanujan_siegel_form(random.Random(12), primes)
    return f, g


def test_angle_examples(unitary):
    f, g = unitary
    assert angle_relation_test(1, -1, 0.0, f, f).density == 1
    assert angle_relation_test(1, 1, math.pi, f, negated(f)).density == 1
    assert angle_relation_test(1, -1, 0.0, f, g, tol=1e-6).density == 0
    with pytest.raises(ValueError):
        angle_relation_test(0, 1, 0.0, f, f)


def test_angle_skips_out_of_range(unitary, base):
    f, _ = unitary
    big = with_eigen(f, {p: (a if i % 2 else 5 * Fraction(p) ** 2, a2) for i, (p, (a, a2)) in enumerate(f.eigen.items())})
    rep = angle_relation_test(1, -1, 0.0, big, big)
    assert rep.total == len(f.primes) // 2 and rep.warnings
    g, _ = base
    with pytest.raises(EmptySample):
        angle_relation_test(1, -1, 0.0, g, g)


# -- Satake-level relations ---------------------------------------------------------------------------------
def test_distinctness_generic(base):
    f, _ = base
    g, _ = synthetic_siegel_form(random.Random(99), primes=f.primes, bound=50)
    assert satake_relation_test(distinctness_factors(), f, g).density == 0
    assert satake_relation_test(distinctness_factors(), f, f).density == 1


def test_distinctness_detects_coincidence():
    primes = primes_coprime_to(1, 6)
    sat = {p: (Fraction(p + 1), Fraction(p + 2), Fraction(p) ** 3) for p in primes}
    sat2 = {p: (Fraction(p + 1), Fraction(-1), Fraction(p) ** 3) for p in primes}
    f, g = form_from_satake(sat, 3, 3), form_from_satake(sat2, 3, 3)
    assert satake_relation_test(distinctness_factors(), f, g).density == 1


def test_square_polynomial_on_rescaled_pair(base):
    f, sat = base
    g = form_from_satake(rescaled_satake(sat, 1), 4, 4)
    assert (g.k1, g.k2) == (4, 4)
    assert satake_relation_test(square_eigenvalue_polynomial(), f, g).density == 1
    assert satake_relation_test(square_eigenvalue_polynomial(), f, g, normalized=True).density == 1
    h, _ = synthetic_siegel_form(random.Random(5), primes=f.primes, bound=50)
    assert satake_relation_test(square_eigenvalue_polynomial(), f, h).density == 0
    for p in f.primes[:10]:
        lam, lam2 = normalized_eigenvalue(f, p, 2), normalized_eigenvalue(g, p, 2)
        assert abs(lam - lam2) <= 1e-9 * max(1.0, abs(lam))


def test_satake_relation_errors(base):
    f, _ = base
    with pytest.raises(NotInvariant):
        satake_relation_test(P("x1 - x1'"), f, f)
    with pytest.raises(NotInvariant):
        satake_relation_test(pairwise_difference_product(), f, f)
    quartic = DirichletChar.from_images(5, [(4, 1)])
    g, _ = synthetic_siegel_form(random.Random(4), eps=quartic, count=10)
    with pytest.raises(UnsupportedCharacter):
        satake_relation_test(square_eigenvalue_polynomial(), g, g, normalized=True)
    assert satake_relation_test(square_eigenvalue_polynomial(), g, g).density == 1


def test_exact_matches_numeric(base):
    f, _ = base
    g, _ = synthetic_siegel_form(random.Random(7), primes=f.primes, bound=50)
    poly = P("x1 + s/x1 + x2 + s/x2 - 2*(x1' + s'/x1' + x2' + s'/x2') + s*s'")
    R = rewrite_invariant_pair(poly)
    rep = relation_report(R, f, g)
    for p in rep.values:
        exact = float(Fraction(rep.values[p][0]))
        numeric = satake_relation_numeric(poly, f, g, p)[0]
        assert abs(numeric - exact) <= 1e-6 * max(1.0, abs(exact))


# -- lifts ---------------------------------------------------------------------------------------------------
def test_lift_normalized_examples():
    lifted = lift_normalized_relation(P("x - y"), 1)
    target = P("a^2/s - a'^2/s'")
    assert lifted in (target, -target)
    mono = lift_normalized_relation(P("x"), 2)
    assert mono in (P("a^4/s^2"), -P("a^4/s^2"))
    with pytest.raises(ZeroInputError):
        lift_normalized_relation(P("x") - P("x"), 1)
    with pytest.raises(AlphabetMismatch):
        lift_normalized_relation(P("x - z"), 1)


def test_lift_normalized_random_coprime():
    rng = random.Random(21)
    for _ in range(20):
        text = " + ".join(f"{rng.randint(-3, 3)}*x^{rng.randint(0, 3)}*y^{rng.randint(0, 3)}" for _ in range(3))
        poly = P(text + " + 0*x*y")
        if poly.is_zero():
            continue
        for d in (1, 2):
            for k, k2 in [(1, 1), (2, 3), (2, 2)]:
                lifted = lift_normalized_relation(poly, d, k, k2)
                assert coprimality_vs_binomial(lifted, k, k2) == []


def test_lift_normalized_vanishes_where_p_does(base):
    f, _ = base
    g = twist_form(f, CHI8)
    lifted = lift_normalized_relation(P("x + y"), 1)
    rep = relation_report(lifted, f, g)
    for p in shared_sample(f, g):
        lam, lam2 = normalized_eigenvalue(f, p), normalized_eigenvalue(g, p)
        if abs(lam + lam2) < 1e-9:
            assert p in rep.vanishing_primes


def test_lift_absolute_examples(base):
    f, _ = base
    g = twist_form(f, CHI8)
    lifted = lift_absolute_relation(P("a - a'"), 1, 1)
    assert relation_report(lifted, f, g).density == 1
    assert relation_report(lifted, f, negated(f)).density == 1
    post = lift_absolute_relation(P("s - 1"), 1, 1)
    assert coprimality_vs_binomial(post, 1, 1) == []
    with pytest.raises(NotCoprime):
        lift_absolute_relation(P("s - s'"), 1, 1)
    twice = lift_absolute_relation(P("s*a - s'*a'"), 2, 1, 2, 2)
    assert coprimality_vs_binomial(twice, 2, 2) == []


def test_normalized_lift_on_negated_pair(base):
    f, _ = base
    lifted = lift_normalized_relation(P("x - y"), 1)
    assert relation_report(lifted, f, negated(f)).density == 1


# -- twists and ratios -------------------------------------------------------------------------------------
def test_twist_search_identical(base):
    f, _ = base
    certs = twist_search(f, f, 8, 2)
    assert certs and all(c.chi.is_trivial() for c in certs)
    assert certs[0].chi.modulus == 1 and certs[0].similitude_compatible


def test_twist_search_recovers_character(base):
    f, _ = base
    for chi in quadratic_chars(8)[1:]:
        g = twist_form(f, chi)
        certs = twist_search(f, g, 8, 2)
        mod8 = [c.chi for c in certs if c.chi.modulus == 8]
        assert mod8 == [chi]
        assert all(c.similitude_compatible for c in certs)
    g = twist_form(f, CHI4)
    assert [c.chi for c in twist_search(f, g, 4, 2)] == [CHI4]


def test_twist_search_generic(base):
    f, _ = base
    g, _ = synthetic_siegel_form(random.Random(123), primes=f.primes, bound=50)
    assert twist_search(f, g, 12, 4) == []


def test_twist_search_quartic():
    chi = DirichletChar.from_images(5, [(4, 1)])
    f, _ = synthetic_siegel_form(random.Random(6), primes=primes_coprime_to(10, 20), bound=50)
    g = twist_form(f, chi)
    found = [c.chi for c in twist_search(g, f, 5, 4)]
    assert found == [chi]


def test_ratio_scan(base):
    f, _ = base
    assert set(root_of_unity_ratio_scan(f, negated(f)).orders.values()) == {2}
    scan = root_of_unity_ratio_scan(f, f)
    assert set(scan.orders.values()) == {1} and scan.uniform_order == 1
    g, _ = synthetic_siegel_form(random.Random(8), primes=f.primes, bound=50)
    generic = root_of_unity_ratio_scan(f, g)
    assert sum(o is None for o in generic.orders.values()) >= 0.9 * len(generic.orders)


def test_report_json(base):
    f, _ = base
    rep = relation_report(P("a - a'"), f, f, sample=PrimeSample((3, 5, 7)))
    obj = rep.to_json(with_values=True)
    assert obj["density"] == "3/3" and obj["values"]["3"] == ["0"]
    assert "values" not in rep.to_json()
