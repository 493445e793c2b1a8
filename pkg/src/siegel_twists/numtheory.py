"""Small integer helpers: primality, factorization, prime streams."""
from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization as ((p, e), ...) in ascending p."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def primes_from(start: int = 2):
    """Infinite ascending stream of primes >= start."""
    n = max(start, 2)
    while True:
        if is_prime(n):
            yield n
        n += 1


def primes_coprime_to(level: int, count: int, start: int = 2) -> list[int]:
    """The first ``count`` primes >= start not dividing ``level``."""
    out = []
    for p in primes_from(start):
        if level % p:
            out.append(p)
            if len(out) == count:
                return out
    return out


def primes_in_range(lo: int, hi: int, level: int = 1) -> list[int]:
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p) and gcd(p, level) == 1]


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p (also generates mod p^e for odd p)."""
    if p == 2:
        return 1
    phi = p - 1
    qs = [q for q, _ in factorize(phi)]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"no primitive root for {p}")
