"""4x4 symplectic-similitude matrices over Q, cyclotomic fields and F_q.

The alternating form is
    J = [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]
and gamma lies in GSp4 when gamma^T J gamma = nu J for a unit nu.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import BadField, BudgetExhausted, NotCoprime, SchemaViolation
from .exactfield import CycNum, format_cyc, parse_rational, simplify, zeta
from .laurent import LaurentPoly, coprimality_vs_binomial, substitute
from .numtheory import is_prime, primitive_root

J = (
    (0, 0, 0, 1),
    (0, 0, 1, 0),
    (0, -1, 0, 0),
    (-1, 0, 0, 0),
)


# -- prime fields ------------------------------------------------------------------------------
class Fq:
    """Element of the prime field F_q."""

    __slots__ = ("v", "q")

    def __init__(self, v, q: int):
        if isinstance(v, Fraction):
            v = v.numerator * pow(v.denominator, -1, q)
        self.q = q
        self.v = int(v) % q

    def _lift(self, other):
        if isinstance(other, Fq):
            if other.q != self.q:
                raise ValueError("mixing different prime fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fq(other, self.q)
        if isinstance(other, CycNum):
            return cyc_to_fq(other, self.q)
        return None

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Fq(self.v + o.v, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Fq(self.v - o.v, self.q)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Fq(o.v - self.v, self.q)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Fq(self.v * o.v, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return Fq(-self.v, self.q)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return Fq(pow(self.v, -1, self.q), self.q)

    def __truediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Fq(pow(self.v, n, self.q), self.q)

    def __eq__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self.v == o.v

    def __hash__(self):
        return hash((self.v, self.q))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Fq({self.v}, {self.q})"

    def __str__(self):
        return str(self.v)


def check_field(q: int) -> None:
    if not (isinstance(q, int) and q > 2 and is_prime(q)):
        raise BadField(f"q = {q} must be an odd prime")


def unity_root_fq(q: int, M: int, k: int = 1) -> Fq:
    """Image of zeta_M^k under the fixed embedding zeta_M -> g^((q-1)/M)."""
    if (q - 1) % M:
        raise BadField(f"F_{q} has no primitive {M}-th root of unity")
    g = primitive_root(q)
    return Fq(pow(g, (q - 1) // M * k, q), q)


def cyc_to_fq(x, q: int) -> Fq:
    """Reduce a rational or cyclotomic number into F_q (denominators must be prime to q)."""
    if isinstance(x, CycNum):
        x = simplify(x.minimal())
    if not isinstance(x, CycNum):
        return Fq(Fraction(x), q)
    z = unity_root_fq(q, x.conductor)
    total, power = Fq(0, q), Fq(1, q)
    for c in x.coords:
        total = total + power * Fq(c, q)
        power = power * z
    return total


# -- matrix helpers -------------------------------------------------------------------------
def mat_mul(A, B):
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(1, 4)), A[i][0] * B[0][j]) for j in range(4))
        for i in range(4)
    )


def transpose(A):
    return tuple(tuple(A[j][i] for j in range(4)) for i in range(4))


def domain_one(sample):
    if isinstance(sample, Fq):
        return Fq(1, sample.q)
    return Fraction(1)


def identity(one=Fraction(1)):
    zero = one - one
    return tuple(tuple(one if i == j else zero for j in range(4)) for i in range(4))


def diag(*xs):
    zero = xs[0] - xs[0]
    return tuple(tuple(xs[i] if i == j else zero for j in range(4)) for i in range(4))


def _simplify_entries(A):
    return tuple(tuple(simplify(x) if isinstance(x, (Fraction, CycNum)) else x for x in row) for row in A)


def _form_product(A):
    """A^T J A."""
    one = domain_one(A[0][0])
    Jd = tuple(tuple(one * c for c in row) for row in J)
    return _simplify_entries(mat_mul(mat_mul(transpose(A), Jd), A))


def similitude(A):
    """nu with A^T J A = nu J, or None when A is not a similitude."""
    M = _form_product(A)
    nu = M[0][3]
    if nu == 0:
        return None
    for i in range(4):
        for j in range(4):
            if M[i][j] != nu * J[i][j]:
                return None
    return nu


def _det(A, rows, cols):
    n = len(rows)
    if n == 1:
        return A[rows[0]][cols[0]]
    total = None
    for k, c in enumerate(cols):
        entry = A[rows[0]][c]
        if entry == 0:
            continue
        minor = _det(A, rows[1:], cols[:k] + cols[k + 1:])
        term = entry * minor
        if k % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return A[rows[0]][cols[0]] - A[rows[0]][cols[0]]
    return total


def principal_minor_sums(A):
    """(e1, e2, e3, e4): sums of principal k x k minors."""
    out = []
    for k in range(1, 5):
        total = None
        for idx in itertools.combinations(range(4), k):
            m = _det(A, idx, idx)
            total = m if total is None else total + m
        out.append(simplify(total) if isinstance(total, (Fraction, CycNum)) else total)
    return tuple(out)


def charpoly(A):
    """Coefficients of det(x - A), highest degree first."""
    e1, e2, e3, e4 = principal_minor_sums(A)
    one = domain_one(A[0][0])
    return (one, -e1, e2, -e3, e4)


def trace(A):
    t = A[0][0] + A[1][1] + A[2][2] + A[3][3]
    return simplify(t) if isinstance(t, (Fraction, CycNum)) else t


def _tidy(x):
    return simplify(x) if isinstance(x, (Fraction, CycNum)) else x


@dataclass(frozen=True)
class GSpMatrix:
    rows: tuple
    nu: object = field(compare=False)

    @classmethod
    def from_rows(cls, rows) -> "GSpMatrix":
        rows = _simplify_entries(tuple(tuple(r) for r in rows))
        nu = similitude(rows)
        if nu is None:
            raise ValueError("matrix is not in GSp4")
        return cls(rows, nu)

    def __matmul__(self, other: "GSpMatrix") -> "GSpMatrix":
        rows = _simplify_entries(mat_mul(self.rows, other.rows))
        return GSpMatrix(rows, _tidy(self.nu * other.nu))

    def inverse(self) -> "GSpMatrix":
        # gamma^{-1} = -nu^{-1} J gamma^T J
        one = domain_one(self.rows[0][0])
        Jd = tuple(tuple(one * c for c in row) for row in J)
        inv_nu = 1 / self.nu
        prod = mat_mul(mat_mul(Jd, transpose(self.rows)), Jd)
        rows = _simplify_entries(tuple(tuple(-inv_nu * x for x in row) for row in prod))
        return GSpMatrix(rows, _tidy(inv_nu))

    def trace(self):
        return trace(self.rows)

    def std_trace(self):
        return std_trace(self)

    def charpoly(self):
        return charpoly(self.rows)

    def domain_tag(self) -> str:
        x = self.rows[0][0]
        if isinstance(x, Fq):
            return f"F{x.q}"
        if any(isinstance(e, CycNum) for row in self.rows for e in row):
            return "cyclotomic"
        return "Q"

    def to_json(self) -> dict:
        return {"domain": self.domain_tag(), "entries": [format_cyc(x) if not isinstance(x, Fq) else str(x)
                                                         for row in self.rows for x in row]}

    @classmethod
    def from_json(cls, obj) -> "GSpMatrix":
        from .heckedata import parse_exact
        from .schemas import validate_matrix

        validate_matrix(obj)
        dom = obj["domain"]
        if dom.startswith("F"):
            q = int(dom[1:])
            check_field(q)
            vals = [Fq(parse_rational(e), q) for e in obj["entries"]]
        else:
            vals = [parse_exact(e) for e in obj["entries"]]
        rows = tuple(tuple(vals[4 * i: 4 * i + 4]) for i in range(4))
        try:
            return cls.from_rows(rows)
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None


def std_trace(g: GSpMatrix):
    """tr(wedge^2 g)/nu - 1."""
    e2 = principal_minor_sums(g.rows)[1]
    return _tidy(e2 / g.nu - 1)


def companion_for(a, b, v) -> GSpMatrix:
    """Similitude matrix with nu = v^2 and char poly x^4 + a x^3 + b x^2 + a v^2 x + v^4."""
    if v == 0:
        raise ZeroDivisionError("companion_for needs v != 0")
    zero = v - v
    rows = (
        (zero, zero, -v, zero),
        (v, zero, -a, zero),
        (zero, zero, zero, v),
        (zero, v, -b / v, -a),
    )
    rows = _simplify_entries(rows)
    return GSpMatrix(rows, _tidy(v * v))


def companion_with_traces(A, B, v) -> GSpMatrix:
    """Companion matrix with trace A and std trace B (similitude v^2)."""
    s = v * v
    return companion_for(-A, s * (B + 1), v)


def torus_element(x1, x2, s) -> GSpMatrix:
    return GSpMatrix(_simplify_entries(diag(x1, x2, s / x2, s / x1)), _tidy(s))


# -- components of G_{kappa,kappa'} ------------------------------------------------------------
@dataclass(frozen=True)
class ComponentLabel:
    """The component zeta_d^j."""

    d: int
    j: int

    @property
    def zeta(self) -> CycNum:
        return zeta(self.d, self.j)

    def to_json(self) -> dict:
        return {"d": self.d, "j": self.j, "zeta": format_cyc(simplify(self.zeta))}


def component_of(g: GSpMatrix, h: GSpMatrix, kappa: int, kappa_prime: int):
    """Label zeta with nu(g)^(kappa/d) = zeta nu(h)^(kappa'/d), or None outside G_{kappa,kappa'}."""
    d = math.gcd(kappa, kappa_prime)
    ratio = _tidy(g.nu ** (kappa // d) / h.nu ** (kappa_prime // d))
    if isinstance(ratio, Fq):
        if ratio == 1:
            return ComponentLabel(d, 0)
        if (ratio.q - 1) % d:
            return None
        for j in range(1, d):
            if unity_root_fq(ratio.q, d, j) == ratio:
                return ComponentLabel(d, j)
        return None
    for j in range(d):
        if zeta(d, j) == ratio:
            return ComponentLabel(d, j)
    return None


@dataclass(frozen=True)
class InvariantFn:
    """phi(g, h) = P(nu(g), nu(h), tr g, std g, tr h, std h)."""

    poly: LaurentPoly

    def __call__(self, g, h):
        return eval_invariant(self, g, h)


def invariant_values(g: GSpMatrix, h: GSpMatrix) -> dict:
    return {
        "s": g.nu,
        "s'": h.nu,
        "a": g.trace(),
        "b": std_trace(g),
        "a'": h.trace(),
        "b'": std_trace(h),
    }


def eval_invariant(phi, g: GSpMatrix, h: GSpMatrix):
    poly = phi.poly if isinstance(phi, InvariantFn) else phi
    values = invariant_values(g, h)
    sample = g.rows[0][0]
    if isinstance(sample, Fq):
        q = sample.q
        return poly.evaluate(values, coeff=lambda c: cyc_to_fq(c, q))
    return poly.evaluate(values)


# -- witnesses -------------------------------------------------------------------------------
@dataclass(frozen=True)
class Witness:
    gamma: GSpMatrix
    gamma_prime: GSpMatrix
    value: object
    component: ComponentLabel
    w: int
    grid: tuple  # (A, B, A', B'): target traces and std traces

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma.to_json(),
            "gamma_prime": self.gamma_prime.to_json(),
            "value": format_cyc(self.value),
            "component": self.component.to_json(),
            "t": self.w * self.w,
            "grid": {"a": str(self.grid[0]), "b": str(self.grid[1]),
                     "a'": str(self.grid[2]), "b'": str(self.grid[3])},
        }


def _value_rank(v: int) -> int:
    return 2 * v - 1 if v > 0 else -2 * v


@lru_cache(maxsize=32)
def grid_shell(r: int) -> tuple:
    """Integer 4-tuples of max-norm r in search order."""
    if r == 0:
        return ((0, 0, 0, 0),)
    pts = [p for p in itertools.product(range(-r, r + 1), repeat=4) if max(map(abs, p)) == r]
    pts.sort(key=lambda p: tuple(_value_rank(v) for v in reversed(p)))
    return tuple(pts)


def nonvanishing_witness(P: LaurentPoly, kappa: int, kappa_prime: int, j: int = 0,
                         max_t: int = 8, max_radius: int = 4) -> Witness:
    """A pair in the component zeta_d^j of G_{kappa,kappa'} where P's invariant is nonzero.

    The pair is (companion(s), companion(s')) with s = zeta_kappa^j t^kappa',
    s' = t^kappa and t = w^2, so both similitudes have explicit square roots
    v = zeta_{2 kappa}^j w^kappa' and v' = w^kappa.
    """
    factors = coprimality_vs_binomial(P, kappa, kappa_prime)
    if factors:
        raise NotCoprime("polynomial shares the factor(s) " + ", ".join(str(f) for _, f in factors)
                         + f" with s^{kappa} - s'^{kappa_prime}")
    d = math.gcd(kappa, kappa_prime)
    j %= d
    label = ComponentLabel(d, j)
    zprime = simplify(zeta(kappa, j))
    eta = simplify(zeta(2 * kappa, j))
    alph = P.alphabet
    for w in range(1, max_t + 1):
        t = Fraction(w * w)
        s = _tidy(zprime * t**kappa_prime)
        s2 = t**kappa
        v = _tidy(eta * Fraction(w) ** kappa_prime)
        v2 = Fraction(w) ** kappa
        mapping = {}
        if "s" in alph:
            mapping["s"] = LaurentPoly.const(s, alph)
        if "s'" in alph:
            mapping["s'"] = LaurentPoly.const(s2, alph)
        Q = substitute(P, mapping) if mapping else P
        if Q.is_zero():
            continue
        for r in range(max_radius + 1):
            for A, B, A2, B2 in grid_shell(r):
                vals = {"a": Fraction(A), "b": Fraction(B), "a'": Fraction(A2), "b'": Fraction(B2),
                        "s": s, "s'": s2}
                try:
                    fast = Q.evaluate(vals)
                except ZeroDivisionError:
                    continue
                if fast == 0:
                    continue
                g = companion_with_traces(Fraction(A), Fraction(B), v)
                h = companion_with_traces(Fraction(A2), Fraction(B2), v2)
                value = eval_invariant(P, g, h)
                if value == 0 or component_of(g, h, kappa, kappa_prime) != label:
                    raise AssertionError("witness confirmation failed")
                return Witness(g, h, value, label, w, (A, B, A2, B2))
    raise BudgetExhausted(f"no witness with t <= {max_t ** 2} (w <= {max_t}) and grid radius <= {max_radius}")


# -- random elements over F_q and Q -----------------------------------------------------------
def transvection(vec, c):
    """x -> x + c <v, x> v with <v, x> = v^T J x."""
    Jv = [sum(vec[k] * J[k][i] for k in range(4)) for i in range(4)]  # (v^T J)_i
    one = domain_one(vec[0])
    rows = tuple(
        tuple((one if i == j else one - one) + c * vec[i] * Jv[j] for j in range(4)) for i in range(4)
    )
    return GSpMatrix(_simplify_entries(rows), one)


def _transvect_right(g, vec, c: int, q: int):
    """g @ transvection(vec, c) over Z/q, as a rank-one update g + c (g v)(v^T J)."""
    gv = [sum(g[i][k] * vec[k] for k in range(4)) % q for i in range(4)]
    vJ = [sum(vec[k] * J[k][j] for k in range(4)) for j in range(4)]
    return [[(g[i][j] + c * gv[i] * vJ[j]) % q for j in range(4)] for i in range(4)]


def random_sp4_fq(rng: random.Random, q: int, steps: int = 20) -> GSpMatrix:
    """Heuristic random element of Sp4(F_q): product of transvections and torus elements."""
    check_field(q)

    def walk(g, n):
        for _ in range(n):
            vec = [rng.randrange(q) for _ in range(4)]
            g = _transvect_right(g, vec, rng.randrange(1, q), q)
        return g

    g = walk([[int(i == j) for j in range(4)] for i in range(4)], steps)
    t1, t2 = rng.randrange(1, q), rng.randrange(1, q)
    scale = (t1, t2, pow(t2, -1, q), pow(t1, -1, q))
    g = walk([[g[i][j] * scale[j] % q for j in range(4)] for i in range(4)], 2)
    one = Fq(1, q)
    return GSpMatrix(tuple(tuple(Fq(x, q) for x in row) for row in g), one)


def random_sp4_rational(rng: random.Random, steps: int = 6, bound: int = 2) -> GSpMatrix:
    """Random element of Sp4(Q) with small entries."""
    g = GSpMatrix(identity(Fraction(1)), Fraction(1))
    for _ in range(steps):
        vec = [Fraction(rng.randint(-bound, bound)) for _ in range(4)]
        c = Fraction(rng.choice([-1, 1]) * rng.randint(1, bound), rng.randint(1, bound))
        g = g @ transvection(vec, c)
    return g


def similitude_scaler(lam) -> GSpMatrix:
    one = domain_one(lam)
    return GSpMatrix(_simplify_entries(diag(one, one, lam, lam)), _tidy(lam))


def _solve_linear_mod(a: int, r: int, n: int, rng):
    """A random x with a*x = r (mod n), or None."""
    g = math.gcd(a, n)
    if r % g:
        return None
    n2 = n // g
    x0 = (r // g) * pow(a // g, -1, n2) % n2 if n2 > 1 else 0
    return x0 + n2 * rng.randrange(g)


def random_component_pair(rng: random.Random, q: int, kappa: int, kappa_prime: int, j: int = 0):
    """Random (g, h) over F_q in the component zeta_d^j of G_{kappa,kappa'}."""
    check_field(q)
    d = math.gcd(kappa, kappa_prime)
    if (q - 1) % d:
        raise BadField(f"F_{q} lacks the {d}-th roots of unity (need d | q - 1)")
    n = q - 1
    gen = primitive_root(q)
    alpha, beta = kappa // d, kappa_prime // d
    rhs_shift = j * (n // d)
    while True:
        y = rng.randrange(n)
        x = _solve_linear_mod(alpha, (y * beta + rhs_shift) % n, n, rng)
        if x is not None:
            break
    lam, lam2 = Fq(pow(gen, x, q), q), Fq(pow(gen, y, q), q)
    g = random_sp4_fq(rng, q) @ similitude_scaler(lam)
    h = random_sp4_fq(rng, q) @ similitude_scaler(lam2)
    return g, h


@dataclass(frozen=True)
class ComponentSample:
    q: int
    trials: int
    vanishing: int
    component: ComponentLabel
    seed: int

    @property
    def fraction(self) -> float:
        return self.vanishing / self.trials if self.trials else 0.0

    def to_json(self) -> dict:
        return {"q": self.q, "trials": self.trials, "vanishing": self.vanishing,
                "fraction": self.fraction, "component": self.component.to_json(), "seed": self.seed}


def sample_component(phi, q: int, kappa: int, kappa_prime: int, j: int = 0,
                     trials: int = 1000, seed: int = 0) -> ComponentSample:
    """Fraction of random pairs in the component where phi vanishes."""
    check_field(q)
    d = math.gcd(kappa, kappa_prime)
    if (q - 1) % d:
        raise BadField(f"F_{q} lacks the {d}-th roots of unity (need d | q - 1)")
    rng = random.Random(seed)
    poly = phi.poly if isinstance(phi, InvariantFn) else phi
    label = ComponentLabel(d, j % d)
    vanishing = 0
    for _ in range(trials):
        g, h = random_component_pair(rng, q, kappa, kappa_prime, j)
        if eval_invariant(poly, g, h) == 0:
            vanishing += 1
    return ComponentSample(q, trials, vanishing, label, seed)
