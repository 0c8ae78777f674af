from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st
import sympy as sp
from hypothesis import settings

from csdilog.lattice import FixedData
from csdilog.series import TruncatedSeries

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

Y = sp.symbols("y1:4")
T = sp.Symbol("t")


def rank2_pairs(bound: int = 4, sign: int = 1) -> list[FixedData]:
    """All rank-2 skew-symmetrizable (B, delta) with 0 < |b| <= bound and delta_i <= 4."""
    out = []
    for d1 in range(1, 5):
        for d2 in range(1, 5):
            for b12 in range(1, bound + 1):
                num = b12 * d2
                if num % d1 == 0 and num // d1 <= bound:
                    b21 = num // d1
                    out.append(FixedData(((0, -sign * b12), (sign * b21, 0)), (d1, d2)))
    return out


RANK2 = rank2_pairs()
rank2_data = st.sampled_from(RANK2)


@st.composite
def positive_vectors(draw, r: int = 2, max_deg: int = 4):
    d = draw(st.integers(1, max_deg))
    v = []
    for _ in range(r - 1):
        x = draw(st.integers(0, d - sum(v)))
        v.append(x)
    v.append(d - sum(v))
    return tuple(v)


fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def series(draw, nvars: int = 2, level: int = 4, constant=None, max_terms: int = 6):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, level)) for _ in range(nvars))
        if sum(e) <= level:
            terms[e] = draw(fractions)
    if constant is not None:
        terms[(0,) * nvars] = Fraction(constant)
    return TruncatedSeries(nvars, level, terms)


def to_sympy(s: TruncatedSeries):
    return sum((sp.Rational(c.numerator, c.denominator) * sp.prod([Y[i] ** k for i, k in enumerate(e)])
                for e, c in s.terms.items()), sp.Integer(0))


def from_sympy(expr, nvars: int, level: int) -> TruncatedSeries:
    """Truncate a sympy expression in y by expanding in a grading variable t."""
    ys = Y[:nvars]
    graded = expr.subs({y: T * y for y in ys}, simultaneous=True)
    ser = sp.series(graded, T, 0, level + 1).removeO()
    poly = sp.Poly(sp.expand(ser.subs(T, 1)), *ys)
    terms = {}
    for mon, c in poly.terms():
        c = sp.Rational(c)
        terms[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return TruncatedSeries(nvars, level, terms)
