"""Hecke eigenvalue data for genus-2 Siegel and elliptic newforms.

A Siegel form carries exact (a_p, a_{p^2}) at finitely many unramified
primes.  From these we derive the similitude s_p = eps(p^2) p^u with
u = k1 + k2 - 3, the standard coefficient b_p, the spin Euler factor, the
Hecke quartic and its Satake roots.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import DirichletChar, char_eval
from .errors import (
    InvalidWeights,
    MissingPrime,
    PairingFailure,
    RamifiedPrime,
    SchemaViolation,
    UnsupportedIndex,
)
from .exactfield import CycNum, format_cyc, parse_rational, simplify
from .laurent import CANONICAL, LaurentPoly, parse_poly, rewrite_invariant_pair

DEFAULT_PAIRING_TOL = 1e-10


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, CycNum):
        return simplify(x)
    if isinstance(x, str):
        return parse_exact(x)
    raise TypeError(f"eigenvalues must be exact, got {type(x).__name__}")


def parse_exact(text: str):
    """A rational string, or a cyclotomic constant in polynomial text syntax."""
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        poly = parse_poly(text)
        if poly.variables():
            raise SchemaViolation(f"eigenvalue {text!r} is not a constant") from None
        return poly.constant_term()


def format_exact(x) -> str:
    return format_cyc(x)


def to_complex(x) -> complex:
    if isinstance(x, CycNum):
        return x.to_complex()
    return complex(x)


@dataclass(frozen=True)
class SiegelForm:
    k1: int
    k2: int
    level: int
    eps: DirichletChar
    eigen: dict = field(hash=False)  # p -> (a_p, a_{p^2})

    def __post_init__(self):
        if self.k2 < 2 or self.k1 < self.k2:
            raise InvalidWeights(f"need k1 >= k2 >= 2, got ({self.k1}, {self.k2})")
        if self.level < 1 or self.eps.modulus != self.level:
            raise SchemaViolation("character modulus must equal the level")
        clean = {}
        for p, (ap, ap2) in self.eigen.items():
            p = int(p)
            if self.level % p == 0:
                raise RamifiedPrime(f"prime {p} divides the level {self.level}")
            clean[p] = (_exact(ap), _exact(ap2))
        object.__setattr__(self, "eigen", dict(sorted(clean.items())))

    @property
    def u(self) -> int:
        return self.k1 + self.k2 - 3

    @property
    def primes(self) -> list[int]:
        return list(self.eigen)

    def _row(self, p):
        if self.level % p == 0:
            raise RamifiedPrime(f"prime {p} divides the level {self.level}")
        try:
            return self.eigen[p]
        except KeyError:
            raise MissingPrime(f"no eigenvalues at p = {p}") from None

    def ap(self, p: int):
        return self._row(p)[0]

    def ap2(self, p: int):
        return self._row(p)[1]

    def similitude(self, p: int):
        return s_p(self, p)

    def to_json(self) -> dict:
        return {
            "type": "siegel",
            "weights": [self.k1, self.k2],
            "level": self.level,
            "character": self.eps.to_json(),
            "eigenvalues": {
                str(p): {"ap": format_exact(a), "ap2": format_exact(b)} for p, (a, b) in self.eigen.items()
            },
        }


@dataclass(frozen=True)
class EllipticForm:
    k: int
    level: int
    eps: DirichletChar
    eigen: dict = field(hash=False)  # p -> a_p

    def __post_init__(self):
        if self.k < 2:
            raise InvalidWeights(f"elliptic weight must be >= 2, got {self.k}")
        if self.level < 1 or self.eps.modulus != self.level:
            raise SchemaViolation("character modulus must equal the level")
        clean = {}
        for p, ap in self.eigen.items():
            p = int(p)
            if self.level % p == 0:
                raise RamifiedPrime(f"prime {p} divides the level {self.level}")
            clean[p] = _exact(ap)
        object.__setattr__(self, "eigen", dict(sorted(clean.items())))

    @property
    def u(self) -> int:
        return self.k - 1

    @property
    def primes(self) -> list[int]:
        return list(self.eigen)

    def ap(self, p: int):
        if self.level % p == 0:
            raise RamifiedPrime(f"prime {p} divides the level {self.level}")
        try:
            return self.eigen[p]
        except KeyError:
            raise MissingPrime(f"no eigenvalue at p = {p}") from None

    def similitude(self, p: int):
        self.ap(p)
        return simplify(char_eval(self.eps, p) * Fraction(p) ** self.u)

    def to_json(self) -> dict:
        return {
            "type": "elliptic",
            "weights": [self.k],
            "level": self.level,
            "character": self.eps.to_json(),
            "eigenvalues": {str(p): {"ap": format_exact(a)} for p, a in self.eigen.items()},
        }


def form_from_json(obj):
    """Build a SiegelForm or EllipticForm from its JSON dict (unknown keys rejected)."""
    from .schemas import validate_form

    validate_form(obj)
    eps = DirichletChar.from_json(obj["character"])
    weights = obj["weights"]
    N = obj["level"]
    if obj["type"] == "siegel":
        if len(weights) != 2:
            raise SchemaViolation("siegel forms need two weights")
        eigen = {int(p): (parse_exact(v["ap"]), parse_exact(v["ap2"])) for p, v in obj["eigenvalues"].items()}
        return SiegelForm(weights[0], weights[1], N, eps, eigen)
    if len(weights) != 1:
        raise SchemaViolation("elliptic forms need one weight")
    eigen = {int(p): parse_exact(v["ap"]) for p, v in obj["eigenvalues"].items()}
    return EllipticForm(weights[0], N, eps, eigen)


# -- exact local data --------------------------------------------------------------------
def s_p(f: SiegelForm, p: int):
    """eps(p^2) p^u."""
    f._row(p)
    return simplify(char_eval(f.eps, p * p) * Fraction(p) ** f.u)


def bp(f: SiegelForm, p: int):
    """Standard coefficient b_p, computed by two algebraically equivalent routes."""
    a, a2 = f._row(p)
    s = s_p(f, p)
    direct = simplify((a * a - a2) / s - Fraction(1, p) - 1)
    via_product = simplify((a * a - a2 - s / p) / s - 1)
    if direct != via_product:
        raise AssertionError(f"b_p routes disagree at p = {p}")
    return direct


def spin_euler_factor(f: SiegelForm, p: int) -> tuple:
    """Coefficients (c0..c4) of 1 - a X + c2 X^2 - a s X^3 + s^2 X^4, X = p^{-s}."""
    a, a2 = f._row(p)
    s = s_p(f, p)
    c2 = simplify(a * a - a2 - s / p)
    return (Fraction(1), simplify(-a), c2, simplify(-a * s), simplify(s * s))


def hecke_polynomial(f: SiegelForm, p: int) -> tuple:
    """Monic quartic x^4 - a x^3 + c2 x^2 - a s x + s^2, highest degree first."""
    return spin_euler_factor(f, p)


# -- Satake roots --------------------------------------------------------------------------
@dataclass(frozen=True)
class SatakeSet:
    """Roots paired as beta1*beta4 = beta2*beta3 = s_p."""

    p: int
    betas: tuple
    s_p: object

    def normalized(self) -> tuple:
        scale = math.sqrt(abs(to_complex(self.s_p)))
        return tuple(b / scale for b in self.betas)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "s_p": format_exact(self.s_p),
            "betas": [[b.real, b.imag] for b in self.betas],
        }


def _beta_key(b: complex):
    return (-round(abs(b), 9), round(cmath.phase(b), 9))


def _order_pairs(pairs):
    """Label two (beta, s/beta) pairs as (b1, b2, b3, b4) with b1*b4 = b2*b3 = s."""
    labelled = []
    for x, y in pairs:
        labelled.append((x, y) if _beta_key(x) <= _beta_key(y) else (y, x))
    labelled.sort(key=lambda pr: _beta_key(pr[0]))
    (b1, b4), (b2, b3) = labelled
    return (b1, b2, b3, b4)


def _stable_quadratic(b: complex, c: complex):
    """Roots of x^2 - b x + c, the smaller one taken from the product to avoid cancellation."""
    r = cmath.sqrt(b * b - 4 * c)
    big = (b + r) / 2 if abs(b + r) >= abs(b - r) else (b - r) / 2
    if big == 0:
        return 0j, 0j
    return big, c / big


def _roots_palindromic(A: complex, B: complex, s: complex):
    """Roots of x^4 - A x^3 + B x^2 - A s x + s^2 via u = x + s/x."""
    return [_stable_quadratic(u, s) for u in _stable_quadratic(A, B - 2 * s)]


def _newton_polish(coeffs, x):
    c = np.asarray(coeffs, dtype=complex)
    dc = np.polyder(c)
    fx, dfx = np.polyval(c, x), np.polyval(dc, x)
    if dfx != 0:
        step = fx / dfx
        if abs(step) < 1e-3 * max(1.0, abs(x)):
            return x - step
    return x


def _pair_roots(roots, s, tol):
    """Split four roots into two pairs multiplying to s (relative tolerance)."""
    scale = max(abs(s), 1e-300)
    best, best_err = None, None
    for j in (1, 2, 3):
        rest = [k for k in (1, 2, 3) if k != j]
        e1 = abs(roots[0] * roots[j] - s) / scale
        e2 = abs(roots[rest[0]] * roots[rest[1]] - s) / scale
        err = max(e1, e2)
        if best_err is None or err < best_err:
            best_err = err
            best = [(roots[0], roots[j]), (roots[rest[0]], roots[rest[1]])]
    if best_err > tol:
        raise PairingFailure(f"no pairing with products within {tol} of s (best error {best_err:.3g})")
    return best


def satake_from_quartic(coeffs, s, tol: float = DEFAULT_PAIRING_TOL, p: int = 0) -> SatakeSet:
    """Paired roots of a monic quartic (highest degree first) with similitude s."""
    c = [to_complex(x) for x in coeffs]
    if c[0] != 1:
        raise ValueError("quartic must be monic")
    sc = to_complex(s)
    A, B = -c[1], c[2]
    scale = max(1.0, abs(sc) ** 2, abs(A * sc))
    symmetric = abs(c[3] + A * sc) <= tol * scale and abs(c[4] - sc * sc) <= tol * max(1.0, abs(sc) ** 2)
    if symmetric:
        pairs = _roots_palindromic(A, B, sc)
        _pair_check(pairs, sc, tol)
    else:
        roots = [_newton_polish(c, r) for r in np.roots(c)]
        pairs = _pair_roots(roots, sc, tol)
    return SatakeSet(p, _order_pairs(pairs), s)


def _pair_check(pairs, s, tol):
    scale = max(abs(s), 1e-300)
    for x, y in pairs:
        if abs(x * y - s) / scale > tol:
            raise PairingFailure("root pair does not multiply to s")


def satake_numeric(f: SiegelForm, p: int, tol: float = DEFAULT_PAIRING_TOL) -> SatakeSet:
    return satake_from_quartic(hecke_polynomial(f, p), s_p(f, p), tol, p)


# -- normalized values and angles --------------------------------------------------------
def _real_if_close(z: complex):
    return z.real if abs(z.imag) <= 1e-14 * max(1.0, abs(z)) else z


def normalized_eigenvalue(f, p: int, n: int = 1):
    """lambda_{p^n} = a_{p^n} / p^{n u / 2}."""
    if isinstance(f, EllipticForm):
        return _real_if_close(to_complex(apn(f, p, n)) / p ** (n * f.u / 2))
    if n == 1:
        return _real_if_close(to_complex(f.ap(p)) / p ** (f.u / 2))
    if n == 2:
        return _real_if_close(to_complex(f.ap2(p)) / p ** f.u)
    raise UnsupportedIndex("only a_p and a_{p^2} are available for Siegel forms")


def sato_tate_angle(f, p: int):
    """theta in [0, pi] with c*cos(theta) = lambda_p (c = 4 Siegel, 2 elliptic); None if out of range."""
    lam = normalized_eigenvalue(f, p, 1)
    if isinstance(lam, complex):
        return None
    bound = 2.0 if isinstance(f, EllipticForm) else 4.0
    x = lam / bound
    if abs(x) > 1 + 1e-12:
        return None
    return math.acos(max(-1.0, min(1.0, x)))


# -- representation characters -----------------------------------------------------------
@dataclass(frozen=True)
class RepChar:
    """Trace of a representation on diag(x1, x2, s/x1, s/x2)."""

    name: str
    poly: LaurentPoly

    def rewritten(self) -> LaurentPoly:
        return _rewrite_cached(self.poly)


@lru_cache(maxsize=64)
def _rewrite_cached(poly):
    return rewrite_invariant_pair(poly)


def _torus_letters(alphabet=CANONICAL):
    m = lambda e: LaurentPoly.monomial(e, 1, alphabet)
    return [m({"x1": 1}), m({"x2": 1}), m({"s": 1, "x1": -1}), m({"s": 1, "x2": -1})]


def complete_homogeneous(letters, m: int):
    """Sum of all degree-m monomials in the given letters."""
    if m == 0:
        return LaurentPoly.const(1, letters[0].alphabet)
    if not letters:
        raise ValueError("no letters")
    total = LaurentPoly.zero(letters[0].alphabet)
    head, rest = letters[0], letters[1:]
    for i in range(m + 1):
        tail = complete_homogeneous(rest, m - i) if rest else (
            LaurentPoly.const(1, head.alphabet) if m - i == 0 else None
        )
        if tail is not None:
            total = total + head**i * tail
    return total


def spin_char() -> RepChar:
    return RepChar("spin", sum(_torus_letters(), LaurentPoly.zero()))


def std_char() -> RepChar:
    y = _torus_letters()
    s = LaurentPoly.var("s")
    wedge = LaurentPoly.zero()
    for i in range(4):
        for j in range(i + 1, 4):
            wedge = wedge + y[i] * y[j]
    return RepChar("std", wedge * s.unit_inverse() - 1)


def sym_char(m: int) -> RepChar:
    if not 1 <= m <= 4:
        raise ValueError("sym_m is provided for 1 <= m <= 4")
    return RepChar(f"sym_{m}", complete_homogeneous(_torus_letters(), m))


def builtin_char(name: str) -> RepChar:
    if name == "spin":
        return spin_char()
    if name == "std":
        return std_char()
    if name.startswith("sym_"):
        return sym_char(int(name[4:]))
    raise ValueError(f"unknown representation {name!r}")


def rp(f: SiegelForm, r: RepChar, p: int):
    """Trace of r at Frobenius, from (s_p, a_p, b_p) without root finding."""
    R = r.rewritten()
    return R.evaluate({"s": s_p(f, p), "a": f.ap(p), "b": bp(f, p)})


# -- elliptic forms --------------------------------------------------------------------------
def elliptic_euler_factor(f: EllipticForm, p: int) -> tuple:
    """(1, -a_p, eps(p) p^(k-1)) in powers of p^{-s}."""
    return (Fraction(1), simplify(-f.ap(p)), f.similitude(p))


def apn(f: EllipticForm, p: int, n: int):
    """a_{p^n} by the Hecke recursion."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a, s = f.ap(p), f.similitude(p)
    prev, cur = Fraction(1), a
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, simplify(a * cur - s * prev)
    return cur


def elliptic_satake(f: EllipticForm, p: int) -> tuple:
    """Roots of x^2 - a_p x + eps(p) p^(k-1), larger modulus first."""
    a, s = to_complex(f.ap(p)), to_complex(f.similitude(p))
    r = cmath.sqrt(a * a - 4 * s)
    return tuple(sorted(((a + r) / 2, (a - r) / 2), key=_beta_key))
