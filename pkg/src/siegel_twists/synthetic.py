"""Synthetic Hecke data built from chosen Satake parameters.

Useful as ground truth: every quantity derived from (a_p, a_{p^2}) can be
compared with the same quantity computed straight from the betas.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .characters import DirichletChar, char_eval, char_lift, char_mul
from .exactfield import simplify
from .heckedata import SiegelForm
from .numtheory import lcm, primes_coprime_to


def random_rational(rng: random.Random, bound: int = 9, nonzero: bool = True) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def eigen_from_satake(b1, b2, s, p: int):
    """(a_p, a_{p^2}) for Satake roots (b1, b2, s/b2, s/b1) and similitude s."""
    betas = [b1, b2, s / b2, s / b1]
    e1 = sum(betas)
    e2 = sum(betas[i] * betas[j] for i in range(4) for j in range(i + 1, 4))
    h2 = e1 * e1 - e2
    return simplify(e1), simplify(h2 - s / p)


def similitude_value(eps: DirichletChar, u: int, p: int):
    return simplify(char_eval(eps, p * p) * Fraction(p) ** u)


def synthetic_siegel_form(rng: random.Random, primes=None, k1: int = 3, k2: int = 3,
                          eps: DirichletChar | None = None, bound: int = 9, count: int = 50):
    """Form with random rational Satake pairs at each prime.

    Returns ``(form, satake)`` where ``satake[p] = (b1, b2, s_p)``.
    """
    eps = eps or DirichletChar.trivial(1)
    if primes is None:
        primes = primes_coprime_to(eps.modulus, count)
    u = k1 + k2 - 3
    eigen, satake = {}, {}
    for p in primes:
        s = similitude_value(eps, u, p)
        b1, b2 = random_rational(rng, bound), random_rational(rng, bound)
        eigen[p] = eigen_from_satake(b1, b2, s, p)
        satake[p] = (b1, b2, s)
    return SiegelForm(k1, k2, eps.modulus, eps, eigen), satake


def form_from_satake(satake: dict, k1: int, k2: int, eps: DirichletChar | None = None) -> SiegelForm:
    """Form whose roots at p are (b1, b2, s/b2, s/b1) for ``satake[p] = (b1, b2, s)``."""
    eps = eps or DirichletChar.trivial(1)
    eigen = {p: eigen_from_satake(b1, b2, s, p) for p, (b1, b2, s) in satake.items()}
    return SiegelForm(k1, k2, eps.modulus, eps, eigen)


def rescaled_satake(satake: dict, shift: int) -> dict:
    """Multiply every root at p by p^shift (same normalized roots, weight u + 2*shift)."""
    out = {}
    for p, (b1, b2, s) in satake.items():
        c = Fraction(p) ** shift
        out[p] = (b1 * c, b2 * c, simplify(s * c * c))
    return out


def ramanujan_siegel_form(rng: random.Random, primes, k1: int = 4, k2: int = 3, den: int = 10**4):
    """Trivial-character form with unitary normalized roots and rational eigenvalues.

    Needs u = k1 + k2 - 3 even.  Normalized roots are exp(+-i t1), exp(+-i t2)
    with rational cosines, so a_p = 2 p^(u/2) (c1 + c2) is rational.
    """
    u = k1 + k2 - 3
    if u % 2:
        raise ValueError("ramanujan_siegel_form needs k1 + k2 - 3 even")
    eigen = {}
    for p in primes:
        c1 = Fraction(rng.randint(-den, den), den)
        c2 = Fraction(rng.randint(-den, den), den)
        h = Fraction(p) ** (u // 2)
        s = h * h
        a = 2 * h * (c1 + c2)
        e2 = s * (2 + 4 * c1 * c2)
        eigen[p] = (a, a * a - e2 - s / p)
    return SiegelForm(k1, k2, 1, DirichletChar.trivial(1), eigen)


def twist_form(f: SiegelForm, chi: DirichletChar) -> SiegelForm:
    """f twisted by chi: roots scale by chi(p), so a_p -> chi(p) a_p, a_{p^2} -> chi(p)^2 a_{p^2}."""
    L = lcm(f.level, chi.modulus)
    eps = char_mul(char_lift(f.eps, L), char_lift(chi, L))
    eigen = {}
    for p, (a, a2) in f.eigen.items():
        if L % p == 0:
            continue
        c = char_eval(chi, p)
        eigen[p] = (simplify(c * a), simplify(c * c * a2))
    return SiegelForm(f.k1, f.k2, L, eps, eigen)


def with_eigen(f: SiegelForm, eigen: dict) -> SiegelForm:
    return SiegelForm(f.k1, f.k2, f.level, f.eps, eigen)
