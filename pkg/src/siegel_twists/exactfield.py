"""Exact rationals and cyclotomic numbers.

Rationals are :class:`fractions.Fraction`.  A :class:`CycNum` is an element of
``Q(zeta_M)`` stored in the power basis ``1, z, ..., z^(phi(M)-1)`` and reduced
modulo the M-th cyclotomic polynomial.  Binary operations embed both operands
at the lcm of their conductors.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import ConductorError, ZeroInputError

Rational = Fraction


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` (or an int) into a Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(q) -> str:
    return str(Fraction(q))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _poly_divexact_int(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num[: len(den) - 1])
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _poly_divexact_int(num, list(cyclotomic_poly(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds the power-basis coordinates of zeta_m^k, 0 <= k < m."""
    phi = totient(m)
    cyc = cyclotomic_poly(m)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    return tuple(rows)


def _reduce_conv(m: int, conv) -> tuple[Fraction, ...]:
    phi = totient(m)
    out = list(conv[:phi]) + [Fraction(0)] * max(0, phi - len(conv))
    table = _power_table(m)
    for k in range(phi, len(conv)):
        c = conv[k]
        if c:
            row = table[k % m]
            for i, r in enumerate(row):
                if r:
                    out[i] += c * r
    return tuple(out)


class CycNum:
    """Immutable element of the cyclotomic field ``Q(zeta_conductor)``."""

    __slots__ = ("conductor", "coords")

    def __init__(self, conductor: int, coords):
        conductor = int(conductor)
        if conductor < 1:
            raise ValueError("conductor must be positive")
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != totient(conductor):
            raise ValueError(
                f"expected {totient(conductor)} coordinates at conductor {conductor}"
            )
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    @classmethod
    def _raw(cls, conductor, coords):
        obj = object.__new__(cls)
        object.__setattr__(obj, "conductor", conductor)
        object.__setattr__(obj, "coords", coords)
        return obj

    @classmethod
    def from_rational(cls, q, conductor: int = 1) -> "CycNum":
        phi = totient(conductor)
        return cls._raw(conductor, (Fraction(q),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNum")

    # -- structure ---------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def embed(self, m_new: int) -> "CycNum":
        return cyc_embed(self, m_new)

    def minimal(self) -> "CycNum":
        """The same number at the smallest conductor that contains it."""
        if self.is_rational():
            return CycNum.from_rational(self.coords[0])
        m = self.conductor
        for mm in divisors(m)[1:-1]:
            sol = _solve_embedding(self, mm)
            if sol is not None:
                return CycNum._raw(mm, sol)
        return self

    def to_complex(self) -> complex:
        m = self.conductor
        return sum(
            (float(c) * cmath.exp(2j * math.pi * i / m) for i, c in enumerate(self.coords) if c),
            0j,
        )

    # -- arithmetic --------------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, CycNum):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                other = CycNum.from_rational(other, self.conductor)
            else:
                return None, None
        if other.conductor == self.conductor:
            return self, other
        m = math.lcm(self.conductor, other.conductor)
        return cyc_embed(self, m), cyc_embed(other, m)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNum._raw(a.conductor, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.conductor, tuple(-x for x in self.coords))

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNum._raw(a.conductor, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNum._raw(a.conductor, tuple(y - x for x, y in zip(a.coords, b.coords)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycNum._raw(self.conductor, tuple(x * other for x in self.coords))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if b.is_rational():
            c = b.coords[0]
            return CycNum._raw(a.conductor, tuple(x * c for x in a.coords))
        if a.is_rational():
            c = a.coords[0]
            return CycNum._raw(a.conductor, tuple(x * c for x in b.coords))
        phi = len(a.coords)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        conv[i + j] += x * y
        return CycNum._raw(a.conductor, _reduce_conv(a.conductor, conv))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycNum.from_rational(1 / self.coords[0], self.conductor)
        inv = _poly_inverse_mod(list(self.coords), [Fraction(c) for c in cyclotomic_poly(self.conductor)])
        phi = len(self.coords)
        inv = inv + [Fraction(0)] * (phi - len(inv))
        return CycNum._raw(self.conductor, tuple(inv[:phi]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycNum._raw(self.conductor, tuple(x / other for x in self.coords))
        if isinstance(other, CycNum):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self
        if n < 0:
            base, n = self.inverse(), -n
        result = CycNum.from_rational(1, self.conductor)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._pair(other)
        return a.coords == b.coords

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        m = self.minimal()
        return hash((m.conductor, m.coords))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycNum({self.conductor}, {[str(c) for c in self.coords]})"

    def __str__(self):
        return format_cyc(self)

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coords": [format_rational(c) for c in self.coords]}

    @classmethod
    def from_json(cls, obj) -> "CycNum":
        if not isinstance(obj, dict) or set(obj) != {"conductor", "coords"}:
            raise ValueError("CycNum JSON needs exactly 'conductor' and 'coords'")
        return cls(int(obj["conductor"]), [parse_rational(c) for c in obj["coords"]])


def _solve_embedding(x: CycNum, sub: int):
    """Coordinates of x in Q(zeta_sub) if x lies there, else None."""
    m = x.conductor
    step = m // sub
    table = _power_table(m)
    ncols = totient(sub)
    phi = len(x.coords)
    # augmented matrix rows = coordinates of Q(zeta_m)
    rows = [[Fraction(table[(i * step) % m][r]) for i in range(ncols)] + [x.coords[r]] for r in range(phi)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, phi) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(phi):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][-1] for i in range(r, phi)):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return tuple(sol)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = _poly_trim(a[:])
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


def _poly_inverse_mod(a, mod):
    """Inverse of a modulo mod over Q by the extended Euclidean algorithm."""
    r0, r1 = _poly_trim(mod[:]), _poly_trim(a[:])
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("not invertible")
    c = r1[0]
    _, rem = _poly_divmod([v / c for v in s1], mod)
    return rem


def cyc_embed(x: CycNum, m_new: int) -> CycNum:
    """Represent x at conductor ``m_new`` (a multiple of its conductor)."""
    m = x.conductor
    if m_new % m:
        raise ConductorError(f"{m_new} is not a multiple of conductor {m}")
    if m_new == m:
        return x
    step = m_new // m
    phi = totient(m_new)
    if x.is_rational():
        return CycNum._raw(m_new, (x.coords[0],) + (Fraction(0),) * (phi - 1))
    table = _power_table(m_new)
    out = [Fraction(0)] * phi
    for i, c in enumerate(x.coords):
        if c:
            row = table[(i * step) % m_new]
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
    return CycNum._raw(m_new, tuple(out))


def zeta(m: int, k: int = 1) -> CycNum:
    """zeta_m^k."""
    if m < 1:
        raise ValueError("M must be >= 1")
    return CycNum._raw(m, tuple(Fraction(v) for v in _power_table(m)[k % m]))


def order_of_unity(x) -> int | None:
    """Multiplicative order of x if it is a root of unity, else None."""
    x = CycNum.coerce(x)
    if x.is_zero():
        raise ZeroInputError("order_of_unity of zero")
    bound = math.lcm(2, x.conductor)
    for n in divisors(bound):
        if x ** n == 1:
            return n
    return None


def simplify(x):
    """Demote rational CycNums to Fraction; leave everything else alone."""
    if isinstance(x, CycNum) and x.is_rational():
        return x.coords[0]
    return x


def is_zero(x) -> bool:
    return x == 0


def format_cyc(x) -> str:
    """Text form: plain rational, or ``(c0 + c1*zM + c2*zM^2 ...)``."""
    if not isinstance(x, CycNum):
        return format_rational(x)
    x = x.minimal()
    if x.is_rational():
        return format_rational(x.coords[0])
    m = x.conductor
    parts = []
    for i, c in enumerate(x.coords):
        if not c:
            continue
        if i == 0:
            body = format_rational(abs(c))
        else:
            sym = f"z{m}" if i == 1 else f"z{m}^{i}"
            body = sym if abs(c) == 1 else f"{format_rational(abs(c))}*{sym}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "(" + "".join(parts) + ")"
