"""The ten acceptance criteria, each at its stated size, tolerance and time limit."""
import json
import random
import time
from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from helpers import symmetrize
from siegel_twists.characters import (
    DirichletChar,
    enumerate_chars,
    kappa_pair,
    quadratic_chars,
    similitude_identity_holds,
)
from siegel_twists.cli import run
from siegel_twists.errors import NotDivisible
from siegel_twists.exactfield import zeta
from siegel_twists.gsp4 import (
    ComponentLabel,
    component_of,
    nonvanishing_witness,
    random_sp4_rational,
    similitude,
    std_trace,
    torus_element,
)
from siegel_twists.heckedata import (
    bp,
    rp,
    s_p,
    satake_numeric,
    spin_euler_factor,
    std_char,
    to_complex,
)
from siegel_twists.laurent import (
    CANONICAL,
    LaurentPoly,
    back_substitute,
    binomial_factor,
    coprimality_vs_binomial,
    exact_div,
    mu_norm,
    parse_poly,
    rewrite_invariant_pair,
    substitute,
)
from siegel_twists.numtheory import primes_coprime_to
from siegel_twists.relations import (
    angle_relation_test,
    satake_relation_numeric,
    satake_relation_test,
    shared_sample,
    square_eigenvalue_polynomial,
)
from siegel_twists.synthetic import (
    form_from_satake,
    ramanujan_siegel_form,
    rescaled_satake,
    synthetic_siegel_form,
    twist_form,
)

T1 = DirichletChar.trivial(1)


def expand(betas):
    c = [Fraction(1)]
    for b in betas:
        c = [x - b * y for x, y in zip(c + [0], [0] + c)]
    return tuple(c)


def synthetic_corpus(seed=1, forms=200, primes_per_form=5):
    """Forms with varied weights and characters, each with its Satake table."""
    rng = random.Random(seed)
    chars = [T1, quadratic_chars(4)[1], quadratic_chars(8)[2], DirichletChar.from_images(5, [(4, 1)]),
             DirichletChar.from_images(7, [(6, 1)])]
    out = []
    for _ in range(forms):
        k2 = rng.randint(2, 5)
        k1 = k2 + rng.randint(0, 3)
        eps = rng.choice(chars)
        start = rng.randint(2, 200)
        primes = primes_coprime_to(eps.modulus, primes_per_form, start)
        out.append(synthetic_siegel_form(rng, primes=primes, k1=k1, k2=k2, eps=eps, bound=30))
    return out


def random_poly(rng, names, terms, lo, hi, alphabet=CANONICAL, cyclotomic=False):
    out = LaurentPoly.zero(alphabet)
    for _ in range(terms):
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if cyclotomic and rng.random() < 0.3:
            c = c * zeta(rng.choice([3, 4, 5]), 1)
        out = out + LaurentPoly.monomial({n: rng.randint(lo, hi) for n in names}, c, alphabet)
    return out


@pytest.mark.criterion(1, "Euler factor equals the Satake expansion on 200 synthetic forms")
def test_euler_factor_identity():
    corpus = synthetic_corpus()
    start = time.perf_counter()
    checked = 0
    for f, sat in corpus:
        for p, (b1, b2, s) in sat.items():
            assert spin_euler_factor(f, p) == expand([b1, b2, s / b2, s / b1])
            checked += 1
    elapsed = time.perf_counter() - start
    assert checked == 1000
    assert elapsed < 5.0


@pytest.mark.criterion(2, "b_p formulas agree; rp(std) = b_p through the matrix route")
def test_bp_dual_formula_and_matrix_route():
    for f, _ in synthetic_corpus():
        for p in f.primes:
            a, a2 = f.eigen[p]
            s = s_p(f, p)
            b = bp(f, p)
            assert b == (a * a - a2) / s - Fraction(1, p) - 1
            assert (b + 1) * s == a * a - a2 - s / p
            assert rp(f, std_char(), p) == b
    rng = random.Random(2)
    f, sat = synthetic_siegel_form(rng, count=100, bound=30)
    for p, (b1, b2, s) in sat.items():
        g = torus_element(b1, b2, s)
        h = random_sp4_rational(rng)
        conj = h @ g @ h.inverse()
        assert std_trace(conj) == std_trace(g) == bp(f, p) == rp(f, std_char(), p)


def _squares_by_class(probes):
    """One representative eps per distinct eps^2 (compared on the probe primes) over moduli <= 8."""
    reps = {}
    for N in range(1, 9):
        for eps in enumerate_chars(N, 12):
            key = tuple((eps ** 2).angle(p) for p in probes)
            reps.setdefault(key, eps)
    return list(reps.values())


def _power_tables(eps, probes, top=9):
    """eps(p^2)^i for i = 0..top at each probe prime, as exact cyclotomic values."""
    tables = {}
    for p in probes:
        x = eps(p * p)
        row = [x ** 0]
        for _ in range(top):
            row.append(row[-1] * x)
        tables[p] = row
    return tables


def _identity_oracle(u, table, u2, table2, i, j, probes):
    if u * i != u2 * j:
        return False
    return all(table[p][i] == table2[p][j] for p in probes)


@pytest.mark.criterion(3, "kappa pair is minimal over 1296 weight and character cases")
def test_kappa_minimality():
    probes = primes_coprime_to(8 * 7 * 6 * 5, 20)
    reps = _squares_by_class(probes)
    assert len(reps) == 4
    start = time.perf_counter()
    tables = [_power_tables(eps, probes) for eps in reps]
    cases = 0
    for u, u2 in product(range(1, 10), repeat=2):
        for (eps, table), (eps2, table2) in product(zip(reps, tables), repeat=2):
            kp = kappa_pair((u + 1, 2, eps), (u2 + 1, 2, eps2))
            cases += 1
            valid = {(i, j) for i in range(1, 10) for j in range(1, 10)
                     if _identity_oracle(u, table, u2, table2, i, j, probes)}
            expect = {(t * kp.kappa, t * kp.kappa_prime) for t in range(1, 10)
                      if t * kp.kappa <= 9 and t * kp.kappa_prime <= 9}
            assert valid == expect, (u, u2, eps, eps2)
            assert similitude_identity_holds(u, eps ** 2, u2, eps2 ** 2, kp.kappa, kp.kappa_prime, probes)
    elapsed = time.perf_counter() - start
    assert cases == 1296
    assert elapsed < 10.0


@pytest.mark.criterion(4, "mu-norm gives F = Q(x^d) divisible by P on 100 random polynomials")
def test_mu_norm_construction():
    rng = random.Random(4)
    start = time.perf_counter()
    for _ in range(100):
        P = LaurentPoly.zero()
        while P.is_zero():
            P = random_poly(rng, ("s", "a"), rng.randint(1, 6), -1, 2, cyclotomic=True)
        var = rng.choice(["s", "a"])
        d = rng.randint(1, 6)
        F, Q = mu_norm(P, var, d)
        assert not Q.is_zero()
        assert substitute(Q, {var: LaurentPoly.monomial({var: d})}) == F
        exact_div(F, P)
    assert time.perf_counter() - start < 10.0


@pytest.mark.criterion(5, "invariant rewriting round-trips on 100 symmetrized polynomials")
def test_rewrite_round_trip():
    rng = random.Random(5)
    names = ("s", "s'", "x1", "x2", "x1'", "x2'")
    done = 0
    while done < 100:
        q = symmetrize(random_poly(rng, names, rng.randint(1, 3), -1, 2))
        if q.is_zero():
            continue
        R = rewrite_invariant_pair(q, verify=False)
        assert set(R.variables()) <= {"s", "s'", "a", "b", "a'", "b'"}
        assert back_substitute(R, CANONICAL) == q
        done += 1
    assert std_char().rewritten() == parse_poly("b")


def _random_coprime(rng, kappa, kappa_prime):
    names = ("s", "s'", "a", "b", "a'", "b'")
    while True:
        P = random_poly(rng, names, rng.randint(1, 4), 0, 2)
        if not P.is_zero() and not coprimality_vs_binomial(P, kappa, kappa_prime):
            return P


@pytest.mark.criterion(6, "witness lies in the requested component with phi != 0")
def test_nonvanishing_witness():
    rng = random.Random(6)
    for n in range(50):
        kappa, kappa_prime = [(1, 1), (2, 3), (2, 2)][n % 3]
        P = _random_coprime(rng, kappa, kappa_prime)
        d = gcd(kappa, kappa_prime)
        j = rng.randrange(d)
        w = nonvanishing_witness(P, kappa, kappa_prime, j)
        assert w.value != 0
        assert component_of(w.gamma, w.gamma_prime, kappa, kappa_prime) == ComponentLabel(d, j)
        for g, (A, B) in ((w.gamma, w.grid[:2]), (w.gamma_prime, w.grid[2:])):
            nu = similitude(g.rows)
            assert nu is not None and nu == g.nu
            a, b = -A, nu * (B + 1)
            assert g.charpoly() == (1, a, b, a * nu, nu * nu)


@pytest.mark.criterion(7, "coprimality oracle agrees with trial division, kappa, kappa' <= 4")
def test_coprimality_oracle():
    rng = random.Random(7)
    names = ("s", "s'", "a")
    polys = []
    for n in range(50):
        P = random_poly(rng, names, rng.randint(1, 3), -1, 2)
        while P.is_zero():
            P = random_poly(rng, names, 2, -1, 2)
        if n % 2:
            k, k2 = rng.randint(1, 4), rng.randint(1, 4)
            P = P * binomial_factor(k, k2, rng.randrange(gcd(k, k2)))
        polys.append(P)
    for kappa, kappa_prime in product(range(1, 5), repeat=2):
        d = gcd(kappa, kappa_prime)
        for P in polys:
            found = {S for _, S in coprimality_vs_binomial(P, kappa, kappa_prime)}
            for j in range(d):
                S = binomial_factor(kappa, kappa_prime, j)
                try:
                    exact_div(P, S)
                    divides = True
                except NotDivisible:
                    divides = False
                assert divides == (S in found)


@pytest.mark.criterion(8, "twist by a character mod 8 is detected end to end over 1000 primes")
def test_twist_detection(tmp_path, capsys):
    rng = random.Random(8)
    f, _ = synthetic_siegel_form(rng, primes=primes_coprime_to(2, 1000), bound=50)
    chi = quadratic_chars(8)[3]
    g = twist_form(f, chi)
    fp, gp = tmp_path / "f.json", tmp_path / "g.json"
    fp.write_text(json.dumps(f.to_json()))
    gp.write_text(json.dumps(g.to_json()))
    capsys.readouterr()
    start = time.perf_counter()
    assert run(["test-relation", "--poly", "(a^2 - a'^2)*(b - b')", "--form", str(fp), "--form2", str(gp)]) == 0
    rel = json.loads(capsys.readouterr().out)["result"]
    assert run(["twist-search", "--form", str(fp), "--form2", str(gp), "--modulus-bound", "8"]) == 0
    certs = json.loads(capsys.readouterr().out)["result"]["certificates"]
    elapsed = time.perf_counter() - start
    assert rel["density"] == "1000/1000"
    mod8 = [c["chi"] for c in certs if c["chi"]["modulus"] == 8]
    assert mod8 == [chi.to_json()]
    assert elapsed < 5.0


def _check_against_numeric(P, f, g, sample):
    rep = satake_relation_test(P, f, g, sample)
    factors = P if isinstance(P, list) else [P]
    for p in sample:
        numeric = satake_relation_numeric(factors, f, g, p)
        for exact_text, value in zip(rep.values[p], numeric):
            exact = float(Fraction(exact_text))
            if exact != 0:
                assert abs(value - exact) <= 1e-6 * abs(exact), (p, exact, value)
            else:
                assert abs(value) <= 1e-6 * _magnitude(factors[0], f, g, p)
    return rep


def _magnitude(F, f, g, p):
    """Sum of absolute term values: the scale against which cancellation to zero is judged."""
    A, B = satake_numeric(f, p), satake_numeric(g, p)
    vals = {"s": abs(to_complex(A.s_p)), "s'": abs(to_complex(B.s_p)),
            "x1": abs(A.betas[0]), "x2": abs(A.betas[1]), "x1'": abs(B.betas[0]), "x2'": abs(B.betas[1])}
    return F.evaluate(vals, coeff=lambda c: abs(to_complex(c)))


@pytest.mark.criterion(9, "exact Satake relations match numeric roots within 1e-6 on 100 primes")
def test_satake_cross_check():
    primes = primes_coprime_to(2, 100)
    f, sat = synthetic_siegel_form(random.Random(9), primes=primes, bound=50)
    g, _ = synthetic_siegel_form(random.Random(10), primes=primes, bound=50)
    sample = shared_sample(f, g)
    assert len(sample) == 100
    generic = parse_poly("x1 + s/x1 + x2 + s/x2 - 3*(x1' + s'/x1' + x2' + s'/x2')*s + s*s'^-1")
    _check_against_numeric(generic, f, g, sample)
    _check_against_numeric(square_eigenvalue_polynomial(), f, g, sample)
    rescaled = form_from_satake(rescaled_satake(sat, 1), 4, 4)
    rep = _check_against_numeric(square_eigenvalue_polynomial(), f, rescaled, sample)
    assert rep.density == 1
    chi = quadratic_chars(8)[3]
    twisted = twist_form(f, chi)
    _check_against_numeric(square_eigenvalue_polynomial(), f, twisted, shared_sample(f, twisted))


@pytest.mark.criterion(10, "angle test gives density 1 on (f, f) and 0 on independent data")
def test_angle_sanity():
    primes = primes_coprime_to(1, 100)
    f = ramanujan_siegel_form(random.Random(11), primes)
    g = ramanujan_siegel_form(random.Random(12), primes)
    assert angle_relation_test(1, -1, 0.0, f, f, tol=1e-6).density == 1
    assert angle_relation_test(1, -1, 0.0, f, g, tol=1e-6).density == 0
