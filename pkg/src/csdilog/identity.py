"""Dilogarithm identities attached to rank-2 scattering diagrams.

A term ``c * W(Ltilde(y^m))`` is stored with its operator word W, a list of
dilogarithm elements written left to right.  On series the rightmost one
acts first; on numeric points the leftmost one moves the point first.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dilog import ltilde, ltilde_symbolic
from .group import DilogFactor, apply_product
from .lattice import FixedData, NVector, degree, skew_form, unit_vector
from .scatter import Move, MoveTrace, Rank2CSD, TraceError, apply_move, loop_crossings
from .series import LogSeries, TruncatedSeries, series_to_json

log = logging.getLogger(__name__)

DEFAULT_SCALE_GRID = tuple(float(t) for t in np.geomspace(1e-3, 1e-1, 9))


@dataclass(frozen=True)
class DITerm:
    """``coefficient * Ltilde(argument)`` with ``argument = word(y^m)``."""

    coefficient: Fraction
    m: NVector
    word: tuple[DilogFactor, ...]
    argument: TruncatedSeries
    provenance: tuple = ()

    def same_shape(self, other: "DITerm") -> bool:
        return (self.coefficient, self.m, self.word) == (other.coefficient, other.m, other.word)

    def __str__(self):
        w = " ".join(f"Psi[{','.join(map(str, f.m))}]^{f.c}" for f in self.word)
        m = ",".join(map(str, self.m))
        return f"{self.coefficient} * {w + ' ' if w else ''}L(y^({m}))"

    def to_json(self) -> dict:
        return {
            "coefficient": str(self.coefficient),
            "m": list(self.m),
            "word": [{"m": list(f.m), "c": str(f.c)} for f in self.word],
            "argument": series_to_json(self.argument),
            "provenance": list(self.provenance),
        }


@dataclass
class DIReport:
    symbolic_residual: LogSeries | None = None
    numeric_samples: list[tuple[tuple[float, ...], float]] = field(default_factory=list)
    scaling_slope: float | None = None

    @property
    def symbolic_ok(self) -> bool:
        return self.symbolic_residual is not None and self.symbolic_residual.is_zero()

    def max_residual(self) -> float:
        return max((abs(r) for _, r in self.numeric_samples), default=0.0)

    def to_json(self) -> dict:
        return {
            "symbolic_residual": None if self.symbolic_residual is None else self.symbolic_residual.to_json(),
            "symbolic_zero": None if self.symbolic_residual is None else self.symbolic_ok,
            "numeric_samples": [{"point": list(p), "residual": r} for p, r in self.numeric_samples],
            "max_residual": self.max_residual() if self.numeric_samples else None,
            "scaling_slope": self.scaling_slope,
        }


def act(fd: FixedData, level: int, word: Sequence[DilogFactor], m: NVector) -> TruncatedSeries:
    return apply_product(fd, word, TruncatedSeries.monomial(m, level))


def _inv(f: DilogFactor) -> DilogFactor:
    return DilogFactor(f.m, -f.c)


def y_variable(csd: Rank2CSD, position: int, direction: str = "backward") -> TruncatedSeries:
    """y-variable of the factor crossed at ``position`` on the loop.

    ``backward`` transports through the crossings before it, ``forward``
    through the ones after it; they agree when the diagram is consistent.
    """
    cr = loop_crossings(csd)
    if not 0 <= position < len(cr):
        raise IndexError(f"crossing {position} out of range 0..{len(cr) - 1}")
    if direction == "backward":
        word = [DilogFactor(c.phi.m, -c.exponent) for c in cr[:position]]
    elif direction == "forward":
        word = [DilogFactor(c.phi.m, c.exponent) for c in reversed(cr[position + 1 :])]
    else:
        raise ValueError(f"direction must be 'backward' or 'forward', got {direction!r}")
    return act(csd.fd, csd.level, word, cr[position].phi.m)


def assemble_di(csd: Rank2CSD) -> list[DITerm]:
    """One term per crossing: coefficient = crossing sign times the factor's exponent."""
    fd, level = csd.fd, csd.level
    terms = []
    word: list[DilogFactor] = []
    for c in loop_crossings(csd):
        m = c.phi.m
        terms.append(DITerm(c.exponent, m, tuple(word), act(fd, level, word, m), (c.wall, c.factor, c.position)))
        word.append(DilogFactor(m, -c.exponent))
    return terms


def product_di_terms(fd: FixedData, level: int, factors: Sequence[DilogFactor]) -> list[DITerm]:
    """Terms of the product ``factors[0] factors[1] ...``.

    Factor a contributes ``c_a * Psi_last^{-c} ... Psi_{a+1}^{-c} (Ltilde(y^{m_a}))``.
    """
    out = []
    k = len(factors)
    for a, f in enumerate(factors):
        word = tuple(_inv(g) for g in reversed(factors[a + 1 :]))
        out.append(DITerm(f.c, f.m, word, act(fd, level, word, f.m), (a,)))
    assert len(out) == k
    return out


def verify_di_symbolic(terms: Sequence[DITerm], level: int, nvars: int | None = None) -> DIReport:
    """Sum ``coefficient * Ltilde(argument)`` as a LogSeries modulo F^{>level}_log."""
    if nvars is None:
        if not terms:
            raise ValueError("nvars is needed for an empty term list")
        nvars = terms[0].argument.nvars
    total = LogSeries.zero(nvars, level)
    for t in terms:
        if degree(t.m) > level:
            continue  # Ltilde(y^m (1+...)) lies in F^{>level}_log
        arg = t.argument.truncate(level) if t.argument.level != level else t.argument
        total = total + ltilde_symbolic(arg, t.m).scale(t.coefficient)
    return DIReport(symbolic_residual=total)


def point_map(fd: FixedData, f: DilogFactor, y: Sequence[float]) -> list[float]:
    """Image of a positive point under Psi[m]^c: ``y_j (1 + y^m)^{c {m, e_j}}``."""
    ym = math.prod(yi**k for yi, k in zip(y, f.m))
    base = math.log1p(ym)
    return [yj * math.exp(float(f.c * skew_form(fd, f.m, unit_vector(fd.r, j))) * base) for j, yj in enumerate(y)]


def evaluate_argument(term: DITerm, y: Sequence[float], fd: FixedData | None = None, mode: str = "exact") -> float:
    if mode == "series":
        return term.argument.evaluate(y)
    if mode != "exact":
        raise ValueError(f"mode must be 'exact' or 'series', got {mode!r}")
    if fd is None:
        raise ValueError("exact evaluation needs the fixed data")
    pt = list(y)
    for f in term.word:
        pt = point_map(fd, f, pt)
    return math.prod(p**k for p, k in zip(pt, term.m))


def di_value(terms: Sequence[DITerm], y: Sequence[float], fd: FixedData | None = None, mode: str = "exact") -> float:
    return math.fsum(float(t.coefficient) * ltilde(evaluate_argument(t, y, fd, mode)) for t in terms)


def verify_di_numeric(
    terms: Sequence[DITerm],
    points: Sequence[Sequence[float]],
    scale_grid: Sequence[float] | None = None,
    *,
    fd: FixedData | None = None,
    mode: str = "exact",
) -> DIReport:
    """Evaluate the identity at ``points``; optionally fit its scaling exponent.

    ``exact`` evaluates each argument through the point maps of its word;
    ``series`` evaluates the truncated argument series.  With ``scale_grid`` the
    slope of log|S(t y0)| against log t is fitted per point and averaged;
    points whose residual is exactly zero are skipped, and the slope is ``inf``
    when no point has a nonzero residual.
    """
    report = DIReport()
    if scale_grid is None:
        for p in points:
            p = tuple(float(x) for x in p)
            report.numeric_samples.append((p, di_value(terms, p, fd, mode)))
        return report
    ts = np.asarray(scale_grid, dtype=float)
    slopes = []
    for p in points:
        vals = []
        for t in ts:
            q = tuple(float(t * x) for x in p)
            v = di_value(terms, q, fd, mode)
            report.numeric_samples.append((q, v))
            vals.append(abs(v))
        vals = np.array(vals)
        if np.all(vals > 0):
            slopes.append(np.polyfit(np.log(ts), np.log(vals), 1)[0])
    report.scaling_slope = float(np.mean(slopes)) if slopes else math.inf
    return report


# trace replay -------------------------------------------------------------------


def _swap_in_words(
    terms: list[DITerm], p: int, old: Sequence[DilogFactor], new: Sequence[DilogFactor]
) -> list[DITerm]:
    """In the words of terms[:p], replace the inverses of factors p..p+len(old)-1 by ``new``.

    The word of term i lists the inverses of factors i+1..K-1 right to left,
    so those factors sit at the same offset from the start of every word.
    """
    old, new = tuple(old), tuple(new)
    K = len(terms)
    out = []
    for i, t in enumerate(terms[:p]):
        w = t.word
        j0, j = K - p - len(old), K - p
        if len(w) != K - 1 - i or w[j0:j] != old:
            raise TraceError(f"word of {t} does not hold {' '.join(map(str, old))} at offset {j0}")
        out.append(DITerm(t.coefficient, t.m, w[:j0] + new + w[j:], t.argument, t.provenance))
    return out


def _replay_move(fd: FixedData, level: int, factors: list[DilogFactor], terms: list[DITerm], mv: Move) -> list[DITerm]:
    p = mv.position
    if mv.kind == "pentagon":
        a, b = factors[p], factors[p + 1]
        c = skew_form(fd, a.m, b.m)
        ab = DilogFactor(tuple(x + y for x, y in zip(a.m, b.m)), b.c)
        R = terms[p + 1].word
        q = Fraction(1) / c
        new = [
            (q, b.m, R + (_inv(a), _inv(ab))),
            (q, ab.m, R + (_inv(a),)),
            (q, a.m, R),
        ]
        left = _swap_in_words(terms, p, [_inv(b), _inv(a)], [_inv(a), _inv(ab), _inv(b)])
    elif mv.kind == "commute":
        a, b = factors[p], factors[p + 1]
        R = terms[p + 1].word
        new = [(b.c, b.m, R + (_inv(a),)), (a.c, a.m, R)]
        left = _swap_in_words(terms, p, [_inv(b), _inv(a)], [_inv(a), _inv(b)])
    elif mv.kind == "split":
        f, k = factors[p], mv.k
        piece = DilogFactor(f.m, f.c / k)
        R = terms[p].word
        new = [(piece.c, f.m, R + (_inv(piece),) * (k - 1 - i)) for i in range(k)]
        left = _swap_in_words(terms, p, [_inv(f)], [_inv(piece)] * k)
    elif mv.kind == "merge":
        a, b = factors[p], factors[p + 1]
        merged = DilogFactor(a.m, a.c + b.c)
        R = terms[p + 1].word
        new = [(merged.c, a.m, R)]
        left = _swap_in_words(terms, p, [_inv(b), _inv(a)], [_inv(merged)])
    elif mv.kind == "truncate":
        new = []
        left = _swap_in_words(terms, p, [_inv(factors[p])], [])
    else:
        raise TraceError(f"unknown move kind {mv.kind!r}")
    span = {"pentagon": 2, "commute": 2, "merge": 2, "split": 1, "truncate": 1}[mv.kind]
    made = [DITerm(cf, m, w, act(fd, level, w, m)) for cf, m, w in new]
    # words to the left changed by a group relation, so their arguments agree mod the level
    left = [DITerm(t.coefficient, t.m, t.word, act(fd, level, t.word, t.m)) for t in left]
    return left + made + terms[p + span :]


def replay_trace_on_di(
    trace: MoveTrace, start_terms: Sequence[DITerm] | None = None, check: bool = True
) -> list[list[DITerm]]:
    """Carry the identity of ``trace.start`` through every move of the trace.

    Each move rewrites the affected terms directly (a pentagon turns two terms
    into three) and updates the words of the terms to its left.  With
    ``check`` the result is compared with the terms of the new product and the
    symbolic sum is checked unchanged.
    """
    fd, level = trace.fd, trace.level
    factors = list(trace.start)
    expected = product_di_terms(fd, level, factors)
    if start_terms is None:
        terms = expected
    else:
        terms = list(start_terms)
        if len(terms) != len(expected) or not all(t.same_shape(e) for t, e in zip(terms, expected)):
            raise TraceError("start terms do not belong to the trace's starting product")
    states = [terms]
    base = verify_di_symbolic(terms, level, fd.r).symbolic_residual if check else None
    for mv in trace.moves:
        terms = _replay_move(fd, level, factors, terms, mv)
        factors = apply_move(fd, level, factors, mv)
        if check:
            want = product_di_terms(fd, level, factors)
            if len(want) != len(terms) or not all(t.same_shape(w) for t, w in zip(terms, want)):
                raise TraceError(f"bookkeeping after {mv} disagrees with the product's own terms")
            res = verify_di_symbolic(terms, level, fd.r).symbolic_residual
            if res != base:
                raise TraceError(f"symbolic sum changed after {mv}")
        states.append(terms)
    return states
