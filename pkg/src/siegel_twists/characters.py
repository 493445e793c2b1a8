"""Dirichlet characters stored by their values on canonical generators.

The unit group (Z/NZ)* is split by CRT into prime-power parts in ascending
prime order.  The 2-part contributes no generator for 2, ``-1`` for 4 and
``(-1, 5)`` for 2^e with e >= 3; an odd part p^e contributes its smallest
primitive root.  Each local generator is lifted to be 1 modulo the other
prime powers.  A character value is kept as an angle in Q/Z, so
chi(g) = exp(2*pi*i*angle).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InvalidWeights, NonCoprimeArgument, SchemaViolation
from .exactfield import CycNum, zeta
from .numtheory import factorize, is_prime, lcm, primes_coprime_to

PROBE_COUNT = 20


@dataclass(frozen=True)
class _Part:
    prime: int
    modulus: int  # local prime power
    gen: int  # global generator (lifted by CRT)
    order: int


def _crt_lift(local: int, q: int, N: int) -> int:
    """x with x = local mod q and x = 1 mod N/q."""
    rest = N // q
    if rest == 1:
        return local % N
    # x = 1 + rest*t, need 1 + rest*t = local (mod q)
    t = ((local - 1) * pow(rest, -1, q)) % q
    return (1 + rest * t) % N


def _odd_primitive_root(p: int, e: int) -> int:
    phi = p - 1
    qs = [q for q, _ in factorize(phi)]
    for g in range(2, p * p):
        if g % p == 0:
            continue
        if any(pow(g, phi // q, p) == 1 for q in qs):
            continue
        if e >= 2 and pow(g, phi, p * p) == 1:
            continue
        return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def unit_group(N: int) -> tuple[_Part, ...]:
    """Canonical cyclic decomposition of (Z/NZ)*."""
    if N < 1:
        raise ValueError("modulus must be positive")
    parts = []
    for p, e in factorize(N):
        q = p**e
        if p == 2:
            if e == 2:
                parts.append(_Part(2, q, _crt_lift(-1, q, N), 2))
            elif e >= 3:
                parts.append(_Part(2, q, _crt_lift(-1, q, N), 2))
                parts.append(_Part(2, q, _crt_lift(5, q, N), 2 ** (e - 2)))
        else:
            g = _odd_primitive_root(p, e)
            parts.append(_Part(p, q, _crt_lift(g, q, N), (p - 1) * p ** (e - 1)))
    return tuple(parts)


def canonical_generators(N: int) -> list[int]:
    return [part.gen for part in unit_group(N)]


@lru_cache(maxsize=None)
def _log_tables(N: int):
    """Per prime power q | N: dict residue mod q -> exponent vector for its parts."""
    tables = {}
    parts = unit_group(N)
    for p, e in factorize(N):
        q = p**e
        local = [(i, part) for i, part in enumerate(parts) if part.modulus == q]
        table = {}
        if not local:
            table[1 % q] = ()
        elif p == 2 and e >= 3:
            for sgn in (0, 1):
                x = 1 if sgn == 0 else q - 1
                for k in range(2 ** (e - 2)):
                    table[x] = (sgn, k)
                    x = x * 5 % q
        else:
            (_, part), = local
            g = part.gen % q
            x = 1
            for k in range(part.order):
                table[x] = (k,)
                x = x * g % q
        tables[q] = (tuple(i for i, _ in local), table)
    return tables


def discrete_log(n: int, N: int) -> tuple[int, ...]:
    """Exponents of n in the canonical generators of (Z/NZ)*."""
    if gcd(n, N) != 1:
        raise NonCoprimeArgument(f"{n} is not coprime to the modulus {N}")
    out = [0] * len(unit_group(N))
    for q, (idx, table) in _log_tables(N).items():
        for i, k in zip(idx, table[n % q]):
            out[i] = k
    return tuple(out)


def _angle(x) -> Fraction:
    return Fraction(x) % 1


@dataclass(frozen=True)
class DirichletChar:
    """A character mod ``modulus``; ``images[i]`` is the angle of chi(gen_i)."""

    modulus: int
    images: tuple[Fraction, ...]

    def __post_init__(self):
        parts = unit_group(self.modulus)
        if len(self.images) != len(parts):
            raise ValueError(
                f"modulus {self.modulus} has {len(parts)} generators, got {len(self.images)} images"
            )
        imgs = tuple(_angle(x) for x in self.images)
        for img, part in zip(imgs, parts):
            if (img * part.order).denominator != 1:
                raise ValueError(f"image {img} has order not dividing {part.order}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def trivial(cls, N: int = 1) -> "DirichletChar":
        return cls(N, tuple(Fraction(0) for _ in unit_group(N)))

    @classmethod
    def from_images(cls, N: int, images) -> "DirichletChar":
        """Images given as (M, k) pairs meaning zeta_M^k, or as angles."""
        angles = [Fraction(x[1], x[0]) if isinstance(x, tuple) else Fraction(x) for x in images]
        return cls(N, tuple(angles))

    @property
    def gens(self) -> list[int]:
        return canonical_generators(self.modulus)

    def angle(self, n: int) -> Fraction:
        return char_angle(self, n)

    def __call__(self, n: int) -> CycNum:
        return char_eval(self, n)

    def __mul__(self, other):
        if not isinstance(other, DirichletChar):
            return NotImplemented
        return char_mul(self, other)

    def __pow__(self, k: int):
        return char_pow(self, k)

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.images)

    def __str__(self):
        imgs = ", ".join(f"{g}->{x}" for g, x in zip(self.gens, self.images))
        return f"chi mod {self.modulus} [{imgs}]"

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "gens": self.gens,
            "images": [{"M": x.denominator, "k": x.numerator} for x in self.images],
        }

    @classmethod
    def from_json(cls, obj) -> "DirichletChar":
        try:
            N = int(obj["modulus"])
            gens = [int(g) for g in obj["gens"]]
            imgs = [(int(i["M"]), int(i["k"])) for i in obj["images"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"malformed character: {exc}") from None
        if N < 1:
            raise SchemaViolation("modulus must be positive")
        if gens != canonical_generators(N):
            raise SchemaViolation(
                f"generators {gens} are not the canonical ones {canonical_generators(N)} for modulus {N}"
            )
        if any(M < 1 for M, _ in imgs):
            raise SchemaViolation("image conductor M must be positive")
        try:
            return cls.from_images(N, imgs)
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None


def char_angle(chi: DirichletChar, n: int) -> Fraction:
    """Angle of chi(n) in [0, 1)."""
    logs = discrete_log(n, chi.modulus)
    return sum((k * x for k, x in zip(logs, chi.images)), Fraction(0)) % 1


def char_eval(chi: DirichletChar, n: int) -> CycNum:
    a = char_angle(chi, n)
    return zeta(a.denominator, a.numerator)


def char_order(chi: DirichletChar) -> int:
    return lcm(*(x.denominator for x in chi.images))


def char_lift(chi: DirichletChar, M: int) -> DirichletChar:
    """The character mod a multiple M induced by chi."""
    if M % chi.modulus:
        raise ValueError(f"{M} is not a multiple of {chi.modulus}")
    if M == chi.modulus:
        return chi
    return DirichletChar(M, tuple(char_angle(chi, g % chi.modulus) for g in canonical_generators(M)))


def char_mul(chi: DirichletChar, psi: DirichletChar) -> DirichletChar:
    M = lcm(chi.modulus, psi.modulus)
    a, b = char_lift(chi, M), char_lift(psi, M)
    return DirichletChar(M, tuple(x + y for x, y in zip(a.images, b.images)))


def char_pow(chi: DirichletChar, k: int) -> DirichletChar:
    return DirichletChar(chi.modulus, tuple(k * x for x in chi.images))


def enumerate_chars(N: int, order_divides: int) -> list[DirichletChar]:
    """All characters mod N whose order divides ``order_divides``."""
    if N < 1 or order_divides < 1:
        raise ValueError("N and the order bound must be positive")
    choices = []
    for part in unit_group(N):
        g = gcd(order_divides, part.order)
        choices.append([Fraction(j, g) for j in range(g)])
    return [DirichletChar(N, tuple(c)) for c in itertools.product(*choices)]


def quadratic_chars(N: int) -> list[DirichletChar]:
    return enumerate_chars(N, 2)


# -- the compatibility pair --------------------------------------------------------------
@dataclass(frozen=True)
class KappaPair:
    kappa: int
    kappa_prime: int
    d: int
    n: int
    order: int
    probes: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "kappa_prime": self.kappa_prime,
            "d": self.d,
            "n": self.n,
            "order": self.order,
            "probes": list(self.probes),
        }


def similitude_identity_holds(u, psi, u2, psi2, i, j, primes) -> bool:
    """(psi(p)p^u)^i == (psi2(p)p^u2)^j at every prime given."""
    if u * i != u2 * j:
        return False
    return all((i * char_angle(psi, p) - j * char_angle(psi2, p)) % 1 == 0 for p in primes)


def kappa_from_similitudes(u: int, psi: DirichletChar, u2: int, psi2: DirichletChar,
                           probes: int = PROBE_COUNT) -> KappaPair:
    """Smallest (kappa, kappa') with (psi(p)p^u)^kappa = (psi2(p)p^u2)^kappa' for all p."""
    if u < 1 or u2 < 1:
        raise InvalidWeights("similitude exponents must be positive")
    n = gcd(u, u2)
    ratio = char_mul(char_pow(psi, u2 // n), char_pow(psi2, -(u // n)))
    order = char_order(ratio)
    kappa, kappa_prime = order * u2 // n, order * u // n
    primes = tuple(primes_coprime_to(psi.modulus * psi2.modulus, probes))
    if not similitude_identity_holds(u, psi, u2, psi2, kappa, kappa_prime, primes):
        raise AssertionError("kappa pair fails the probe check")
    return KappaPair(kappa, kappa_prime, gcd(kappa, kappa_prime), n, order, primes)


def _check_siegel_weights(k1, k2):
    if not (isinstance(k1, int) and isinstance(k2, int)) or k2 < 2 or k1 < k2:
        raise InvalidWeights(f"need k1 >= k2 >= 2, got ({k1}, {k2})")


def kappa_pair(meta, meta_prime, probes: int = PROBE_COUNT) -> KappaPair:
    """kappa pair for two Siegel forms given as (k1, k2, epsilon).

    The similitude at p is epsilon(p^2) p^(k1+k2-3).
    """
    (k1, k2, eps), (l1, l2, eps2) = meta, meta_prime
    _check_siegel_weights(k1, k2)
    _check_siegel_weights(l1, l2)
    return kappa_from_similitudes(k1 + k2 - 3, char_pow(eps, 2), l1 + l2 - 3, char_pow(eps2, 2), probes)


def kappa_pair_elliptic(meta, meta_prime, probes: int = PROBE_COUNT) -> KappaPair:
    """kappa pair for two elliptic forms (k, epsilon); similitude epsilon(p) p^(k-1)."""
    (k, eps), (l, eps2) = meta, meta_prime
    if k < 2 or l < 2:
        raise InvalidWeights("elliptic weights must be at least 2")
    return kappa_from_similitudes(k - 1, eps, l - 1, eps2, probes)


def legendre_char(p: int) -> DirichletChar:
    """The quadratic character mod an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError("legendre_char needs an odd prime")
    return DirichletChar(p, (Fraction(1, 2),))
