"""Test-only constructions shared between modules."""
from siegel_twists.laurent import LaurentPoly, substitute


def _orbit(p, x1, x2, s):
    alph = p.alphabet
    m = lambda e: LaurentPoly.monomial(e, 1, alph)
    out = LaurentPoly.zero(alph)
    for swap in (False, True):
        for inv1 in (False, True):
            for inv2 in (False, True):
                y1 = m({s: 1, x1: -1}) if inv1 else m({x1: 1})
                y2 = m({s: 1, x2: -1}) if inv2 else m({x2: 1})
                img = {x1: y2, x2: y1} if swap else {x1: y1, x2: y2}
                out = out + substitute(p, img)
    return out


def symmetrize(p):
    """Sum over the order-8 symmetry group acting on (x1, x2), then on (x1', x2')."""
    return _orbit(_orbit(p, "x1", "x2", "s"), "x1'", "x2'", "s'")
