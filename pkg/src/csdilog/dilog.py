"""Real dilogarithms and the Puiseux expansion of the modified Rogers dilogarithm.

Numeric functions work in double precision.  :func:`ltilde_symbolic` expands
``Ltilde(u)`` for a truncated series ``u = y^lead (1 + h)`` into a
:class:`~csdilog.series.LogSeries`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from scipy.special import spence

from .series import LogSeries, SeriesError, TruncatedSeries, log1p


class DomainError(ValueError):
    pass


def li2(x: float) -> float:
    """Euler dilogarithm for real ``x <= 1``.

    Li2(x) = spence(1 - x) in scipy's convention; accurate to a few ulp.
    """
    x = float(x)
    if not x <= 1.0:
        raise DomainError(f"li2 is real only for x <= 1, got {x}")
    return float(spence(1.0 - x))


def rogers_l(x: float) -> float:
    """Rogers dilogarithm ``L(x) = Li2(x) + log(x) log(1-x)/2`` on [0, 1]."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"rogers_l needs 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return li2(x)
    return li2(x) + 0.5 * math.log(x) * math.log1p(-x)


def ltilde(x: float) -> float:
    """Modified Rogers dilogarithm ``L(x/(1+x)) = -Li2(-x) - log(x) log(1+x)/2`` for x >= 0."""
    x = float(x)
    if not x >= 0.0:
        raise DomainError(f"ltilde needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.pi**2 / 6
    return -li2(-x) - 0.5 * math.log(x) * math.log1p(x)


def split_leading(u: TruncatedSeries, leading: Sequence[int] | None = None) -> tuple[tuple[int, ...], TruncatedSeries]:
    """Write ``u = y^lead (1 + h)`` and return ``(lead, h)``.

    ``lead`` defaults to the unique lowest-degree exponent of u.  The
    coefficient of ``y^lead`` must be 1.
    """
    if u.is_zero():
        raise SeriesError("ltilde of the zero series")
    if leading is None:
        d = u.lowest_degree()
        low = list(u.homogeneous_part(d))
        if len(low) != 1:
            raise SeriesError(f"no unique leading monomial in {u}")
        leading = low[0]
    lead = tuple(int(x) for x in leading)
    if len(lead) != u.nvars or any(x < 0 for x in lead) or sum(lead) == 0:
        raise SeriesError(f"leading exponent {lead} must be a positive vector")
    if u.coefficient(lead) != 1:
        raise SeriesError(f"leading coefficient of y^{lead} is {u.coefficient(lead)}, expected 1")
    d = sum(lead)
    # h lives at level - deg(lead): beyond that it only affects dropped terms
    terms = {}
    for e, c in u.terms.items():
        q = tuple(a - b for a, b in zip(e, lead))
        if any(x < 0 for x in q):
            raise SeriesError(f"term y^{e} of {u} is not divisible by y^{lead}")
        terms[q] = c
    h = TruncatedSeries(u.nvars, u.level - d, terms) - 1
    return lead, TruncatedSeries(u.nvars, u.level, h.terms)


def ltilde_symbolic(u: TruncatedSeries, leading: Sequence[int] | None = None) -> LogSeries:
    """Expansion of ``Ltilde(u)`` modulo F^{>level}_log.

    With ``u = y^lead (1 + h)``,
    ``Ltilde(u) = A2(u) - log(1+h) A1(u)/2 - sum_i lead_i log(y_i) A1(u)/2``
    where ``A_k(u) = sum_j (-1)^{j+1} u^j / j^k``.
    """
    lead, h = split_leading(u, leading)
    a1 = TruncatedSeries.zero(u.nvars, u.level)
    a2 = TruncatedSeries.zero(u.nvars, u.level)
    p = u
    j = 1
    while not p.is_zero():
        sgn = 1 if j % 2 else -1
        a1 = a1 + p.scale(Fraction(sgn, j))
        a2 = a2 + p.scale(Fraction(sgn, j * j))
        p = p * u
        j += 1
    f = a2 - (log1p(h) * a1).scale(Fraction(1, 2))
    g = tuple(a1.scale(Fraction(-k, 2)) for k in lead)
    return LogSeries(f, g)


def pentagon_residual(y1: float, y2: float) -> float:
    """Left minus right side of the five-term identity in Ltilde form."""
    lhs = ltilde(y2 * (1 + y1)) + ltilde(y1)
    rhs = ltilde(y1 / (1 + y2 + y1 * y2)) + ltilde(y1 * y2 / (1 + y2)) + ltilde(y2)
    return lhs - rhs
