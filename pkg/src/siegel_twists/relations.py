"""Testing polynomial relations between the Hecke data of two forms.

A relation is a Laurent polynomial in (s, s', a, b, a', b') evaluated at
(s_p, s'_p, a_p, b_p, a'_p, b'_p) over a finite sample of shared unramified
primes; reports count the primes where it vanishes.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (
    DirichletChar,
    char_eval,
    char_order,
    enumerate_chars,
    kappa_pair,
)
from .errors import (
    AlphabetMismatch,
    EmptySample,
    NotCoprime,
    RamifiedPrime,
    UnsupportedCharacter,
    ZeroInputError,
)
from .exactfield import format_cyc, order_of_unity, simplify
from .heckedata import SiegelForm, bp, s_p, sato_tate_angle
from .laurent import (
    CANONICAL,
    LaurentPoly,
    compose,
    coprimality_vs_binomial,
    exact_div,
    is_function_of_power,
    mu_norm,
    rewrite_invariant_pair,
)
from .numtheory import lcm

TRACE_VARS = {"s", "s'", "a", "b", "a'", "b'"}


@dataclass(frozen=True)
class PrimeSample:
    primes: tuple

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(sorted(set(int(p) for p in self.primes))))

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)


def shared_sample(f, g, primes=None, limit: int | None = None) -> PrimeSample:
    """Primes in both tables (optionally restricted to ``primes``), unramified for both."""
    common = set(f.primes) & set(g.primes)
    if primes is not None:
        common &= set(primes)
    NN = f.level * g.level
    ps = sorted(p for p in common if NN % p)
    if limit is not None:
        ps = ps[:limit]
    return PrimeSample(tuple(ps))


@dataclass
class RelationReport:
    relation: str
    total: int
    vanishing: int
    vanishing_primes: list
    mode: str = "exact"
    warnings: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def density(self) -> Fraction:
        return Fraction(self.vanishing, self.total) if self.total else Fraction(0)

    def to_json(self, with_values: bool = False) -> dict:
        out = {
            "relation": self.relation,
            "total": self.total,
            "vanishing": self.vanishing,
            "vanishing_primes": list(self.vanishing_primes),
            "density": f"{self.vanishing}/{self.total}",
            "mode": self.mode,
            "warnings": list(self.warnings),
        }
        if with_values:
            out["values"] = {str(p): v for p, v in self.values.items()}
        return out


def _as_factors(P):
    factors = list(P) if isinstance(P, (list, tuple)) else [P]
    if not factors:
        raise ValueError("empty factor list")
    return factors


def _relation_text(factors):
    if len(factors) == 1:
        return str(factors[0])
    return " * ".join(f"({f})" for f in factors)


def _check_vars(factors, allowed):
    for F in factors:
        extra = set(F.variables()) - allowed
        if extra:
            raise AlphabetMismatch(f"relation uses unsupported variables {sorted(extra)}")


def _resolve_sample(f, g, sample):
    if sample is None:
        sample = shared_sample(f, g)
    elif not isinstance(sample, PrimeSample):
        sample = PrimeSample(tuple(sample))
    NN = f.level * g.level
    ramified = [p for p in sample if NN % p == 0]
    if ramified:
        raise RamifiedPrime(f"sample contains ramified primes {ramified}")
    if not len(sample):
        raise EmptySample("no shared unramified primes to test")
    return sample


def _local_values(f, g, p, needed):
    vals = {}
    if "s" in needed:
        vals["s"] = s_p(f, p)
    if "s'" in needed:
        vals["s'"] = s_p(g, p)
    if "a" in needed:
        vals["a"] = f.ap(p)
    if "a'" in needed:
        vals["a'"] = g.ap(p)
    if "b" in needed:
        vals["b"] = bp(f, p)
    if "b'" in needed:
        vals["b'"] = bp(g, p)
    return vals


def coprimality_warnings(factors, f: SiegelForm, g: SiegelForm) -> list[str]:
    kp = kappa_pair((f.k1, f.k2, f.eps), (g.k1, g.k2, g.eps))
    out = []
    for F in factors:
        shared = coprimality_vs_binomial(F, kp.kappa, kp.kappa_prime)
        if shared:
            names = ", ".join(str(S) for _, S in shared)
            out.append(
                f"relation factor {F} is divisible by {names}, a factor of "
                f"s^{kp.kappa} - s'^{kp.kappa_prime}; vanishing may be automatic"
            )
    return out


def _evaluate_sample(factors, f, g, sample, warnings, label):
    needed = set()
    for F in factors:
        needed |= set(F.variables())
    vanishing, values = [], {}
    for p in sample:
        vals = _local_values(f, g, p, needed)
        results = [F.evaluate(vals) for F in factors]
        values[p] = [format_cyc(simplify(r)) for r in results]
        if any(r == 0 for r in results):
            vanishing.append(p)
    return RelationReport(label, len(sample), len(vanishing), vanishing, "exact", warnings, values)


def test_relation(P, f: SiegelForm, g: SiegelForm, sample=None) -> RelationReport:
    """Vanishing of P(s_p, s'_p, a_p, b_p, a'_p, b'_p) over the sample.

    ``P`` may be a list of factors; the relation then vanishes where any factor does.
    """
    factors = _as_factors(P)
    _check_vars(factors, TRACE_VARS)
    sample = _resolve_sample(f, g, sample)
    warnings = coprimality_warnings(factors, f, g)
    return _evaluate_sample(factors, f, g, sample, warnings, _relation_text(factors))


def test_trace_relation(P, f, g, sample=None) -> RelationReport:
    """Vanishing of P(a_p, a'_p); works for Siegel and elliptic forms alike."""
    factors = _as_factors(P)
    _check_vars(factors, {"a", "a'"})
    sample = _resolve_sample(f, g, sample)
    return _evaluate_sample(factors, f, g, sample, [], _relation_text(factors))


def angle_relation_test(m: int, n: int, alpha: float, f, g, sample=None, tol: float = 1e-6) -> RelationReport:
    """Primes with |m*theta_p + n*theta'_p - alpha| <= tol."""
    if m == 0 or n == 0:
        raise ValueError("m and n must be nonzero")
    sample = _resolve_sample(f, g, sample)
    warnings, used, hits, values = [], 0, [], {}
    skipped = []
    for p in sample:
        t1, t2 = sato_tate_angle(f, p), sato_tate_angle(g, p)
        if t1 is None or t2 is None:
            skipped.append(p)
            continue
        used += 1
        gap = m * t1 + n * t2 - alpha
        values[p] = [repr(gap)]
        if abs(gap) <= tol:
            hits.append(p)
    if skipped:
        warnings.append(f"skipped {len(skipped)} primes with normalized eigenvalue out of range: {skipped[:10]}")
    if used == 0:
        raise EmptySample("no primes left after skipping out-of-range angles")
    label = f"{m}*theta + {n}*theta' = {alpha!r}"
    return RelationReport(label, used, len(hits), hits, f"numeric({tol!r})", warnings, values)


def _check_normalizable(f, g):
    for form in (f, g):
        if char_order(form.eps) > 2:
            raise UnsupportedCharacter(
                "normalized Satake relations need trivial or quadratic characters; "
                "use the unnormalized polynomial instead"
            )


def satake_relation_test(P, f: SiegelForm, g: SiegelForm, sample=None, normalized: bool = False) -> RelationReport:
    """Vanishing of an invariant P(s, s', x1, x2, x1', x2') at the Satake roots.

    Each factor is rewritten in (s, s', a, b, a', b') first, so no roots are
    computed.  With ``normalized`` the characters must be trivial or quadratic.
    """
    if normalized:
        _check_normalizable(f, g)
    factors = _as_factors(P)
    rewritten = [rewrite_invariant_pair(F) for F in factors]
    report = test_relation(rewritten, f, g, sample)
    report.relation = _relation_text(factors)
    return report


def satake_relation_numeric(P, f: SiegelForm, g: SiegelForm, p: int, tol: float = 1e-10):
    """Values of each factor of P at numerically computed Satake roots (complex)."""
    from .heckedata import satake_numeric, to_complex

    A, B = satake_numeric(f, p, tol), satake_numeric(g, p, tol)
    vals = {
        "s": to_complex(A.s_p), "s'": to_complex(B.s_p),
        "x1": A.betas[0], "x2": A.betas[1], "x1'": B.betas[0], "x2'": B.betas[1],
    }
    return [F.evaluate(vals, coeff=to_complex) for F in _as_factors(P)]


# -- lifting relations ---------------------------------------------------------------------
def _power_norm(P: LaurentPoly, var: str, e: int):
    """Q with Q(var^e) a multiple of P (skipping the norm when P already is a function of var^e)."""
    if var not in P.variables() or is_function_of_power(P, var, e):
        F = P
    else:
        F, _ = mu_norm(P, var, e)
    i = P.alphabet.index(var)
    return F, LaurentPoly(P.alphabet, {tuple(x // e if k == i else x for k, x in enumerate(m)): c
                                       for m, c in F.terms.items()})


def lift_normalized_relation(P: LaurentPoly, d: int, kappa: int = 1, kappa_prime: int = 1,
                             variables=("x", "y")) -> LaurentPoly:
    """Trace-coordinate relation implied by P(lambda_p, lambda'_p) = 0.

    With Q(x^{2d}, y^{2d}) a multiple of P, returns Q(a^{2d}/s^d, a'^{2d}/s'^d).
    """
    if P.is_zero():
        raise ZeroInputError("cannot lift the zero polynomial")
    if d < 1:
        raise ValueError("d must be positive")
    x, y = variables
    extra = set(P.variables()) - {x, y}
    if extra:
        raise AlphabetMismatch(f"expected a polynomial in {x}, {y}; found {sorted(extra)}")
    Q = P
    for var in (x, y):
        if var in Q.alphabet:
            _, Q = _power_norm(Q, var, 2 * d)
    images = {}
    if x in Q.alphabet:
        images[x] = LaurentPoly.monomial({"a": 2 * d, "s": -d})
    if y in Q.alphabet:
        images[y] = LaurentPoly.monomial({"a'": 2 * d, "s'": -d})
    lifted = compose(Q, images, CANONICAL)
    if coprimality_vs_binomial(lifted, kappa, kappa_prime):
        raise AssertionError("lifted relation unexpectedly shares a factor with the similitude binomial")
    return lifted


def lift_absolute_relation(P: LaurentPoly, d: int, m: int, kappa: int = 1, kappa_prime: int = 1) -> LaurentPoly:
    """Relation in signed data implied by P(p^u, p^u', |a_p|, |b_p|, |a'_p|, |b'_p|) = 0.

    Takes mu-norms in a, b, a', b' at 2m and in s, s' at d; any factor shared
    with s^kappa - s'^kappa' is divided out afterwards.
    """
    if P.is_zero():
        raise ZeroInputError("cannot lift the zero polynomial")
    _check_vars([P], TRACE_VARS)
    P = P.with_alphabet(CANONICAL)
    shared = coprimality_vs_binomial(P, kappa, kappa_prime)
    if shared:
        raise NotCoprime(f"input shares {', '.join(str(S) for _, S in shared)} with s^{kappa} - s'^{kappa_prime}")
    F = P
    for var in ("a", "b", "a'", "b'"):
        F, _ = _power_norm(F, var, 2 * m)
    for var in ("s", "s'"):
        F, _ = _power_norm(F, var, d)
    while True:
        shared = coprimality_vs_binomial(F, kappa, kappa_prime)
        if not shared:
            return F
        for _, S in shared:
            F = exact_div(F, S)


# -- polynomial builders -----------------------------------------------------------------------
def _m(exps, c=1):
    return LaurentPoly.monomial(exps, c, CANONICAL)


def torus_roots(primed: bool = False) -> list[LaurentPoly]:
    """[x1, x2, s/x1, s/x2] (or the primed analogue)."""
    q = "'" if primed else ""
    x1, x2, s = "x1" + q, "x2" + q, "s" + q
    return [_m({x1: 1}), _m({x2: 1}), _m({s: 1, x1: -1}), _m({s: 1, x2: -1})]


def distance_polynomial(X: int) -> LaurentPoly:
    """prod over integers |i| <= X of (a - a' + i)."""
    diff = _m({"a": 1}) - _m({"a'": 1})
    out = LaurentPoly.const(1)
    for i in range(-int(math.floor(X)), int(math.floor(X)) + 1):
        out = out * (diff + i)
    return out


def square_eigenvalue_polynomial() -> LaurentPoly:
    """Difference of normalized T(p^2) data through the roots.

    Each side is sum x_i^2/s + s/x_i^2 + x1 x2/s + x1/x2 + x2/x1 + s/(x1 x2),
    which equals h_2(roots)/s - 2.
    """
    def side(q):
        x1, x2, s = "x1" + q, "x2" + q, "s" + q
        terms = [
            {x1: 2, s: -1}, {x1: -2, s: 1}, {x2: 2, s: -1}, {x2: -2, s: 1},
            {x1: 1, x2: 1, s: -1}, {x1: 1, x2: -1}, {x1: -1, x2: 1}, {x1: -1, x2: -1, s: 1},
        ]
        return sum((_m(t) for t in terms), LaurentPoly.zero())

    return side("") - side("'")


def distinctness_factors() -> list[LaurentPoly]:
    """Invariant factors whose joint vanishing set is where two of
    {x1, x2, s/x1, s/x2, x1', x2', s'/x1', s'/x2'} coincide."""
    Y, Yp = torus_roots(False), torus_roots(True)

    def disc(roots):
        out = LaurentPoly.const(1)
        for i in range(4):
            for j in range(i + 1, 4):
                out = out * (roots[i] - roots[j]) ** 2
        return out

    res = LaurentPoly.const(1)
    for y in Y:
        for z in Yp:
            res = res * (y - z)
    return [disc(Y), disc(Yp), res]


def pairwise_difference_product() -> LaurentPoly:
    """Product over unordered pairs of the differences of the eight roots (not invariant)."""
    roots = torus_roots(False) + torus_roots(True)
    out = LaurentPoly.const(1)
    for i in range(8):
        for j in range(i + 1, 8):
            out = out * (roots[i] - roots[j])
    return out


# -- twists ---------------------------------------------------------------------------------
@dataclass(frozen=True)
class TwistCertificate:
    chi: DirichletChar
    checked_primes: int
    relation_verified: bool
    similitude_compatible: bool

    def to_json(self) -> dict:
        return {
            "chi": self.chi.to_json(),
            "order": char_order(self.chi),
            "checked_primes": self.checked_primes,
            "relation_verified": self.relation_verified,
            "similitude_compatible": self.similitude_compatible,
        }


def _certify(chi, f, g, sample):
    checked = 0
    compatible = True
    siegel = isinstance(f, SiegelForm) and isinstance(g, SiegelForm)
    for p in sample:
        if chi.modulus % p == 0:
            continue
        c = char_eval(chi, p)
        if f.ap(p) != simplify(c * g.ap(p)):
            return None
        checked += 1
        if siegel and compatible and s_p(f, p) != simplify(c * c * s_p(g, p)):
            compatible = False
    if checked == 0:
        return None
    return TwistCertificate(chi, checked, True, compatible)


def twist_search(f, g, modulus_bound: int, order_bound: int, sample=None) -> list[TwistCertificate]:
    """Characters chi (modulus and order bounded) with a_p = chi(p) a'_p on the sample."""
    sample = _resolve_sample(f, g, sample)
    exponent = lcm(*range(1, order_bound + 1))
    found = []
    for N in range(1, modulus_bound + 1):
        for chi in enumerate_chars(N, exponent):
            if char_order(chi) > order_bound:
                continue
            cert = _certify(chi, f, g, sample)
            if cert is not None:
                found.append(cert)
    return found


@dataclass
class RatioScan:
    orders: dict  # p -> int order, None (not a root of unity) or "zero"
    counts: dict
    uniform_order: int | None

    def to_json(self) -> dict:
        return {
            "orders": {str(p): o for p, o in self.orders.items()},
            "counts": {str(k): v for k, v in self.counts.items()},
            "uniform_order": self.uniform_order,
        }


def root_of_unity_ratio_scan(f, g, sample=None) -> RatioScan:
    """Order of a_p / a'_p as a root of unity at each sampled prime."""
    sample = _resolve_sample(f, g, sample)
    orders = {}
    for p in sample:
        a, b = f.ap(p), g.ap(p)
        if b == 0:
            orders[p] = "zero"
            continue
        if a == 0:
            orders[p] = None
            continue
        orders[p] = order_of_unity(simplify(a / b))
    counts = Counter("none" if o is None else o for o in orders.values())
    numeric = [(n, k) for k, n in counts.items() if isinstance(k, int)]
    uniform = max(numeric)[1] if numeric else None
    return RatioScan(orders, dict(sorted(counts.items(), key=lambda kv: str(kv[0]))), uniform)


# keep pytest from collecting these when imported into test modules
test_relation.__test__ = False
test_trace_relation.__test__ = False
