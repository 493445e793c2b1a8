"""Multivariate Laurent polynomials over cyclotomic coefficients.

A polynomial is a dict from exponent tuples (one integer per alphabet
variable, negatives allowed) to nonzero coefficients.  Coefficients are
``Fraction`` when rational and :class:`CycNum` otherwise.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from math import comb

from .errors import (
    AlphabetMismatch,
    NotDivisible,
    NotInvariant,
    ParseError,
    ZeroInputError,
    ZeroScalarImage,
)
from .exactfield import CycNum, format_cyc, simplify, zeta

Monomial = tuple  # tuple[int, ...] indexed by the alphabet

CANONICAL_NAMES = ("s", "s'", "a", "b", "a'", "b'", "x1", "x2", "x1'", "x2'", "t", "u")


class VarAlphabet:
    """Ordered list of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlphabetMismatch(f"variable {name!r} not in alphabet {list(self.names)}") from None

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarAlphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarAlphabet({list(self.names)})"

    def extend(self, extra) -> "VarAlphabet":
        return VarAlphabet(self.names + tuple(n for n in extra if n not in self._index))


CANONICAL = VarAlphabet(CANONICAL_NAMES)


def _norm_coeff(c):
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, (Fraction, CycNum)):
        return simplify(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _is_scalar(x):
    return isinstance(x, (int, Fraction, CycNum)) and not isinstance(x, bool)


def _madd(m1, m2):
    return tuple(x + y for x, y in zip(m1, m2))


class LaurentPoly:
    """Immutable Laurent polynomial; the zero polynomial has no terms."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: VarAlphabet, terms=None):
        clean = {}
        n = len(alphabet)
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != n:
                raise ValueError(f"monomial {m} has wrong length for alphabet of size {n}")
            c = _norm_coeff(c)
            if c != 0:
                clean[m] = c
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def _raw(cls, alphabet, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "alphabet", alphabet)
        object.__setattr__(obj, "terms", terms)
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, alphabet=CANONICAL):
        return cls._raw(alphabet, {})

    @classmethod
    def const(cls, c, alphabet=CANONICAL):
        return cls(alphabet, {(0,) * len(alphabet): c})

    @classmethod
    def var(cls, name: str, alphabet=CANONICAL):
        m = [0] * len(alphabet)
        m[alphabet.index(name)] = 1
        return cls._raw(alphabet, {tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, exps: dict, coeff=1, alphabet=CANONICAL):
        m = [0] * len(alphabet)
        for name, e in exps.items():
            m[alphabet.index(name)] += e
        return cls(alphabet, {tuple(m): coeff})

    @classmethod
    def parse(cls, text: str, alphabet=None):
        return parse_poly(text, alphabet)

    # -- inspection --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> list[str]:
        used = [False] * len(self.alphabet)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [n for n, u in zip(self.alphabet.names, used) if u]

    def degree_range(self, name: str) -> tuple[int, int]:
        i = self.alphabet.index(name)
        exps = [m[i] for m in self.terms]
        return (min(exps), max(exps)) if exps else (0, 0)

    def constant_term(self):
        return self.terms.get((0,) * len(self.alphabet), Fraction(0))

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"alphabets differ: {list(self.alphabet.names)} vs {list(other.alphabet.names)}"
                )
            return other
        if _is_scalar(other):
            return LaurentPoly.const(other, self.alphabet)
        return None

    def with_alphabet(self, alphabet: VarAlphabet) -> "LaurentPoly":
        """Re-express over another alphabet containing every used variable."""
        if alphabet == self.alphabet:
            return self
        idx = [alphabet.index(n) if n in alphabet else None for n in self.alphabet.names]
        size = len(alphabet)
        out = {}
        for m, c in self.terms.items():
            new = [0] * size
            for i, e in enumerate(m):
                if e:
                    if idx[i] is None:
                        raise AlphabetMismatch(
                            f"variable {self.alphabet.names[i]!r} missing from {list(alphabet.names)}"
                        )
                    new[idx[i]] = e
            out[tuple(new)] = c
        return LaurentPoly._raw(alphabet, out)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else simplify(v + c)
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return LaurentPoly._raw(self.alphabet, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.alphabet, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            c = _norm_coeff(other)
            if c == 0:
                return LaurentPoly.zero(self.alphabet)
            return LaurentPoly._raw(self.alphabet, {m: simplify(v * c) for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                k = _madd(m1, m2)
                v = out.get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return LaurentPoly(self.alphabet, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = LaurentPoly.const(1, self.alphabet)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise NotDivisible(f"{self} is not a unit")
        (m, c), = self.terms.items()
        return LaurentPoly._raw(self.alphabet, {tuple(-e for e in m): simplify(1 / c)})

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * simplify(1 / CycNum.coerce(other)) if isinstance(other, CycNum) else self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return exact_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return exact_div(other, self)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if _is_scalar(other):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * len(self.alphabet): _norm_coeff(other)}
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LaurentPoly({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    # -- evaluation --------------------------------------------------------
    def evaluate(self, values: dict, coeff=None):
        """Evaluate at ``values`` (name -> ring element).

        ``coeff`` maps each coefficient into the value ring (e.g. complex or a
        prime field); by default coefficients are used as they are.
        """
        names = self.alphabet.names
        powers = {}
        total = None
        for m, c in self.terms.items():
            term = coeff(c) if coeff is not None else c
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    pw = powers.get(key)
                    if pw is None:
                        try:
                            v = values[names[i]]
                        except KeyError:
                            raise AlphabetMismatch(f"no value supplied for {names[i]!r}") from None
                        pw = powers[key] = v ** e
                    term = term * pw
            total = term if total is None else total + term
        if total is None:
            return coeff(Fraction(0)) if coeff is not None else Fraction(0)
        return simplify(total)


# -- arithmetic front door ------------------------------------------------------------
def poly_arith(p: LaurentPoly, q: LaurentPoly, op: str) -> LaurentPoly:
    if p.alphabet != q.alphabet:
        raise AlphabetMismatch("poly_arith needs a common alphabet")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


# -- substitution --------------------------------------------------------------------
def compose(p: LaurentPoly, images: dict, target: VarAlphabet | None = None) -> LaurentPoly:
    """Ring homomorphism sending each mapped variable to a polynomial image.

    Unmapped variables go to the same-named variable of ``target``.  Negative
    exponents are only allowed on variables whose image is a monomial.
    """
    target = target or p.alphabet
    imgs = []
    for name in p.alphabet.names:
        img = images.get(name)
        if img is None:
            imgs.append(None)
            continue
        if _is_scalar(img):
            img = LaurentPoly.const(img, target)
        if img.alphabet != target:
            img = img.with_alphabet(target)
        imgs.append(img)
    cache = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            img = imgs[i]
            if img is None:
                img = LaurentPoly.var(p.alphabet.names[i], target)
            if e < 0 and not img.is_monomial():
                raise NotDivisible(
                    f"negative power of {p.alphabet.names[i]!r} needs a monomial image, got {img}"
                )
            cache[key] = img ** e
        return cache[key]

    out = LaurentPoly.zero(target)
    acc = {}
    for m, c in p.terms.items():
        term = LaurentPoly.const(c, target)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        for k, v in term.terms.items():
            w = acc.get(k)
            acc[k] = v if w is None else w + v
    return LaurentPoly(target, acc) if acc else out


def _monomial_image(img, target):
    if isinstance(img, tuple):
        scalar, exps = img
        img = LaurentPoly.monomial(exps, scalar, target)
    if _is_scalar(img):
        img = LaurentPoly.const(img, target)
    if img.is_zero():
        raise ZeroScalarImage("substitution image has zero scalar")
    if not img.is_monomial():
        raise ValueError(f"substitution image {img} is not scalar*monomial")
    return img


def substitute(p: LaurentPoly, mapping: dict, target: VarAlphabet | None = None) -> LaurentPoly:
    """Substitute scalar*monomial images for variables.

    Images are single-term LaurentPolys (or ``(scalar, {var: exp})`` pairs)
    over ``target`` (default: p's alphabet).
    """
    target = target or p.alphabet
    imgs = {name: _monomial_image(img, target) for name, img in mapping.items()}
    for name in imgs:
        p.alphabet.index(name)
    if target == p.alphabet:
        return _substitute_fast(p, imgs)
    return compose(p, imgs, target)


def _substitute_fast(p, imgs):
    alph = p.alphabet
    n = len(alph)
    table = []
    for name in alph.names:
        img = imgs.get(name)
        if img is None:
            table.append(None)
        else:
            (m, c), = img.terms.items()
            table.append((m, c))
    out = {}
    for mono, coef in p.terms.items():
        new = [0] * n
        c = coef
        for i, e in enumerate(mono):
            if not e:
                continue
            t = table[i]
            if t is None:
                new[i] += e
            else:
                m, sc = t
                for j, mj in enumerate(m):
                    if mj:
                        new[j] += mj * e
                if sc != 1:
                    c = c * sc ** e
        key = tuple(new)
        v = out.get(key)
        out[key] = c if v is None else v + c
    return LaurentPoly(alph, out)


# -- division ------------------------------------------------------------------------
def _min_exps(p):
    mins = None
    for m in p.terms:
        mins = list(m) if mins is None else [min(a, b) for a, b in zip(mins, m)]
    return tuple(mins)


def exact_div(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return r with q*r == p, or raise NotDivisible."""
    if p.alphabet != q.alphabet:
        raise AlphabetMismatch("exact_div needs a common alphabet")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    if q.is_monomial():
        return p * q.unit_inverse()
    mq, mp = _min_exps(q), _min_exps(p)
    q0 = {tuple(a - b for a, b in zip(m, mq)): c for m, c in q.terms.items()}
    rem = {tuple(a - b for a, b in zip(m, mp)): c for m, c in p.terms.items()}
    lead = max(q0)
    lead_c = q0[lead]
    quot = {}
    while rem:
        m = max(rem)
        diff = tuple(a - b for a, b in zip(m, lead))
        if any(e < 0 for e in diff):
            raise NotDivisible(f"{q} does not divide {p}")
        f = simplify(rem[m] / lead_c)
        quot[diff] = f
        for mm, cc in q0.items():
            k = _madd(diff, mm)
            v = simplify(rem.get(k, 0) - f * cc)
            if v == 0:
                rem.pop(k, None)
            else:
                rem[k] = v
    shift = tuple(a - b for a, b in zip(mp, mq))
    return LaurentPoly(p.alphabet, {_madd(m, shift): c for m, c in quot.items()})


def divides(q: LaurentPoly, p: LaurentPoly) -> bool:
    try:
        exact_div(p, q)
    except NotDivisible:
        return False
    return True


# -- mu_d norms ----------------------------------------------------------------------
def scale_variable(p: LaurentPoly, var: str, c) -> LaurentPoly:
    """p with ``var`` replaced by ``c*var``."""
    i = p.alphabet.index(var)
    return LaurentPoly(p.alphabet, {m: coef * (c ** m[i]) for m, coef in p.terms.items()})


def mu_norm(p: LaurentPoly, var: str, d: int):
    """F = prod_{z in mu_d} p(z*var) and Q with Q(var^d) = F."""
    if p.is_zero():
        raise ZeroInputError("mu_norm of the zero polynomial")
    if d < 1:
        raise ValueError("d must be positive")
    i = p.alphabet.index(var)
    if d == 1:
        return p, p
    F = p
    for j in range(1, d):
        F = F * scale_variable(p, var, zeta(d, j))
    qterms = {}
    for m, c in F.terms.items():
        if m[i] % d:
            raise AssertionError("mu_norm product is not a function of var^d")
        mm = list(m)
        mm[i] //= d
        qterms[tuple(mm)] = c
    return F, LaurentPoly(p.alphabet, qterms)


def is_function_of_power(p: LaurentPoly, var: str, d: int) -> bool:
    i = p.alphabet.index(var)
    return all(m[i] % d == 0 for m in p.terms)


# -- coprimality with s^kappa - s'^kappa' ----------------------------------------------
def binomial_factor(kappa: int, kappa_prime: int, j: int, alphabet=CANONICAL) -> LaurentPoly:
    """s^(kappa/d) - zeta_d^j * s'^(kappa'/d)."""
    d = math.gcd(kappa, kappa_prime)
    return LaurentPoly.monomial({"s": kappa // d}, 1, alphabet) - LaurentPoly.monomial(
        {"s'": kappa_prime // d}, simplify(zeta(d, j)), alphabet
    )


def coprimality_vs_binomial(p: LaurentPoly, kappa: int, kappa_prime: int):
    """Factors s^(k/d) - z*s'^(k'/d) of s^k - s'^k' that divide p.

    Returns a list of ``(zeta, factor)`` pairs; empty means coprime.  Each
    factor is irreducible, so it divides p exactly when p vanishes on its
    parametrization s = z''*u^(k'/d), s' = u^(k/d) with z''^(k/d) = z.
    """
    if kappa < 1 or kappa_prime < 1:
        raise ValueError("kappa and kappa' must be positive")
    if p.is_zero():
        raise ZeroInputError("coprimality test of the zero polynomial")
    d = math.gcd(kappa, kappa_prime)
    alpha, beta = kappa // d, kappa_prime // d
    used = set(p.variables())
    if "s" not in used and "s'" not in used:
        return []
    param = next((n for n in ("u", "t") if n not in used), None)
    if param is None:
        raise AlphabetMismatch("no free parameter variable (u or t) for the substitution test")
    target = p.alphabet if param in p.alphabet else p.alphabet.extend([param])
    pp = p.with_alphabet(target)
    found = []
    for j in range(d):
        mapping = {}
        if "s" in target:
            mapping["s"] = LaurentPoly.monomial({param: beta}, simplify(zeta(kappa, j)), target)
        if "s'" in target:
            mapping["s'"] = LaurentPoly.monomial({param: alpha}, 1, target)
        if substitute(pp, mapping).is_zero():
            found.append((simplify(zeta(d, j)), binomial_factor(kappa, kappa_prime, j, p.alphabet)))
    return found


# -- invariant rewriting ---------------------------------------------------------------
_PAIR_VARS = (("x1", "x2", "s"), ("x1'", "x2'", "s'"))
_WORK = VarAlphabet(
    ("s", "s'", "x1", "x2", "x1'", "x2'", "u1", "u2", "u1'", "u2'", "e1", "e2", "e1'", "e2'")
)


def invariance_failures(p: LaurentPoly) -> list[str]:
    """Names of the required symmetries that p fails."""
    failures = []
    for x1, x2, s in _PAIR_VARS:
        if x1 not in p.alphabet and x2 not in p.alphabet:
            continue
        if x1 not in p.alphabet or x2 not in p.alphabet or s not in p.alphabet:
            if any(v in p.variables() for v in (x1, x2)):
                failures.append(f"{x1}<->{x2}")
            continue
        one = lambda name: LaurentPoly.var(name, p.alphabet)
        if substitute(p, {x1: one(x2), x2: one(x1)}) != p:
            failures.append(f"{x1}<->{x2}")
        for x in (x1, x2):
            img = LaurentPoly.monomial({s: 1, x: -1}, 1, p.alphabet)
            if substitute(p, {x: img}) != p:
                failures.append(f"{x}->{s}/{x}")
    return failures


def _peel_inversion(work: dict, xi: int, ui: int, si: int) -> dict:
    """Rewrite the x-dependence through u = x + s/x."""
    out = {}
    work = dict(work)
    while work:
        k = max(m[xi] for m in work)
        if k <= 0:
            break
        top = {m: c for m, c in work.items() if m[xi] == k}
        for m, c in top.items():
            base = list(m)
            for j in range(k + 1):
                mm = base[:]
                mm[xi] = k - 2 * j
                mm[si] += j
                key = tuple(mm)
                v = simplify(work.get(key, 0) - c * comb(k, j))
                if v == 0:
                    work.pop(key, None)
                else:
                    work[key] = v
            mm = base[:]
            mm[xi] = 0
            mm[ui] += k
            key = tuple(mm)
            out[key] = simplify(out.get(key, 0) + c)
            if out[key] == 0:
                del out[key]
    for m, c in work.items():
        if m[xi] != 0:
            raise NotInvariant(f"residual term in {_WORK.names[xi]} after peeling", [_WORK.names[xi]])
        out[m] = simplify(out.get(m, 0) + c)
        if out[m] == 0:
            del out[m]
    return out


def _symmetric_reduce(work: dict, ua: int, ub: int, ea: int, eb: int) -> dict:
    """Rewrite a (ua, ub)-symmetric polynomial in e1 = ua + ub, e2 = ua*ub."""
    out = {}
    work = dict(work)
    while True:
        live = [m for m in work if m[ua] or m[ub]]
        if not live:
            break
        alpha, beta = max((m[ua], m[ub]) for m in live)
        if alpha < beta:
            raise NotInvariant("not symmetric in the u-coordinates", ["symmetry"])
        top = {m: c for m, c in work.items() if (m[ua], m[ub]) == (alpha, beta)}
        i, j = alpha - beta, beta
        for m, c in top.items():
            base = list(m)
            base[ua] = base[ub] = 0
            for l in range(i + 1):
                mm = base[:]
                mm[ua] = l + j
                mm[ub] = i - l + j
                key = tuple(mm)
                v = simplify(work.get(key, 0) - c * comb(i, l))
                if v == 0:
                    work.pop(key, None)
                else:
                    work[key] = v
            mm = base[:]
            mm[ea] += i
            mm[eb] += j
            key = tuple(mm)
            out[key] = simplify(out.get(key, 0) + c)
            if out[key] == 0:
                del out[key]
    for m, c in work.items():
        out[m] = simplify(out.get(m, 0) + c)
        if out[m] == 0:
            del out[m]
    return out


def trace_coordinates(alphabet=CANONICAL, primed: bool = False):
    """(a, b) expressed in s, x1, x2 (or the primed analogues) over ``alphabet``."""
    x1, x2, s = _PAIR_VARS[1 if primed else 0]
    m = lambda exps: LaurentPoly.monomial(exps, 1, alphabet)
    a = m({x1: 1}) + m({s: 1, x1: -1}) + m({x2: 1}) + m({s: 1, x2: -1})
    b = (
        m({x1: 1, x2: 1, s: -1})
        + m({x1: 1, x2: -1})
        + m({x2: 1, x1: -1})
        + m({s: 1, x1: -1, x2: -1})
        + 1
    )
    return a, b


def back_substitute(r: LaurentPoly, alphabet: VarAlphabet) -> LaurentPoly:
    """Replace a, b, a', b' in r by their torus-coordinate expressions."""
    images = {}
    for primed, (an, bn) in ((False, ("a", "b")), (True, ("a'", "b'"))):
        if an in r.alphabet or bn in r.alphabet:
            names = _PAIR_VARS[1 if primed else 0]
            if all(n in alphabet for n in names):
                a, b = trace_coordinates(alphabet, primed)
                images[an], images[bn] = a, b
    return compose(r, images, alphabet)


def rewrite_invariant_pair(p: LaurentPoly, verify: bool = True) -> LaurentPoly:
    """Rewrite an invariant p(s, s', x1, x2, x1', x2') as R(s, s', a, b, a', b').

    Requires symmetry under x1<->x2, x1'<->x2' and invariance under
    x_i -> s/x_i, x_i' -> s'/x_i'.  The x's are first traded for
    u_i = x_i + s/x_i by peeling the top x-degree, then the symmetric
    u-polynomial is reduced to e1 = u1 + u2 = a and e2 = u1*u2 = s*(b - 1).
    """
    allowed = {"s", "s'", "x1", "x2", "x1'", "x2'"}
    extra = set(p.variables()) - allowed
    if extra:
        raise AlphabetMismatch(f"unexpected variables {sorted(extra)} in invariant input")
    failures = invariance_failures(p)
    if failures:
        raise NotInvariant("input fails: " + ", ".join(failures), failures)
    idx = _WORK.index
    work = p.with_alphabet(_WORK).terms
    for x1, x2, s in _PAIR_VARS:
        u1, u2 = "u" + x1[1:], "u" + x2[1:]
        work = _peel_inversion(work, idx(x1), idx(u1), idx(s))
        work = _peel_inversion(work, idx(x2), idx(u2), idx(s))
    work = _symmetric_reduce(work, idx("u1"), idx("u2"), idx("e1"), idx("e2"))
    work = _symmetric_reduce(work, idx("u1'"), idx("u2'"), idx("e1'"), idx("e2'"))
    out_alph = CANONICAL
    v = lambda name: LaurentPoly.var(name, out_alph)
    images = {
        "e1": v("a"),
        "e2": v("s") * v("b") - v("s"),
        "e1'": v("a'"),
        "e2'": v("s'") * v("b'") - v("s'"),
    }
    R = compose(LaurentPoly(_WORK, work), images, out_alph)
    if verify:
        back = back_substitute(R, out_alph)
        if back != p.with_alphabet(out_alph):
            raise AssertionError("back-substitution does not reproduce the input")
    return R


# -- text format -----------------------------------------------------------------------
def _format_monomial(names, m):
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return parts


def to_text(p: LaurentPoly) -> str:
    """Signed sum of ``coef * var^e * ...`` terms in descending graded-lex order."""
    if p.is_zero():
        return "0"
    out = []
    names = p.alphabet.names
    for m, c in p.sorted_terms():
        mono = _format_monomial(names, m)
        if isinstance(c, CycNum):
            body = " * ".join([format_cyc(c)] + mono)
            sign = "+"
        else:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono and mag == 1:
                body = " * ".join(mono)
            else:
                body = " * ".join([str(mag)] + mono)
        if not out:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*'?)|(\*\*|[-+*/^()]))")
_ZETA = re.compile(r"^z(\d+)$")


def _tokenize(text):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif ident is not None:
            toks.append(("id", ident))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks, alphabet):
        self.toks, self.i, self.alph = toks, 0, alphabet

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ParseError(f"expected {val or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.factor()
            acc = acc * f if op == "*" else acc / f
        return acc

    def exponent(self):
        sign = 1
        if self.peek() == ("op", "("):
            self.take()
            e = self.exponent()
            self.take("op", ")")
            return e
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        return sign * self.take("num")[1]

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** self.exponent()
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return LaurentPoly.const(val, self.alph)
        if kind == "id":
            self.take()
            if val in self.alph:
                return LaurentPoly.var(val, self.alph)
            zm = _ZETA.match(val)
            if zm and int(zm.group(1)) > 0:
                return LaurentPoly.const(zeta(int(zm.group(1)), 1), self.alph)
            raise AlphabetMismatch(f"unknown variable {val!r}")
        if (kind, val) == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, alphabet: VarAlphabet | None = None) -> LaurentPoly:
    """Parse the text format; the alphabet defaults to the canonical one,
    extended by any other identifiers (sorted) that appear."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    if alphabet is None:
        ids = {v for k, v in toks if k == "id" and not _ZETA.match(v)}
        extra = sorted(ids - set(CANONICAL_NAMES))
        alphabet = CANONICAL.extend(extra) if extra else CANONICAL
    parser = _Parser(toks, alphabet)
    out = parser.expr()
    if parser.i != len(toks):
        raise ParseError(f"trailing input at token {parser.i}: {toks[parser.i][1]!r}")
    return out
