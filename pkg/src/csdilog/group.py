"""The truncated structure group G^{<=l}, realized by its principal y-representation.

An element is stored as its action on the 2r principal generators
``ytilde_j -> ytilde_j * S_j(y_1..y_r)``.  Generators 1..r are the usual
y-variables (lattice part e_j); generators r+1..2r carry the M°-directions
f_i and make the representation faithful even when B is singular.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import FixedData, NVector, degree, is_positive, skew_form
from .series import TruncatedSeries, substitute

log = logging.getLogger(__name__)


class GroupError(ValueError):
    pass


class ExtractionError(RuntimeError):
    """A discrepancy that should be central of pure degree d is not."""


@dataclass(frozen=True)
class DilogFactor:
    """The symbol Psi[m]^c."""

    m: NVector
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "c", Fraction(self.c))
        if not is_positive(self.m):
            raise GroupError(f"dilogarithm factor needs a positive vector, got {self.m}")
        if self.c == 0:
            raise GroupError("dilogarithm factor exponent must be nonzero")

    @property
    def degree(self) -> int:
        return degree(self.m)

    def __pow__(self, k) -> "DilogFactor":
        return DilogFactor(self.m, self.c * Fraction(k))

    def __str__(self):
        return f"Psi[{','.join(map(str, self.m))}]^{self.c}"


@dataclass(frozen=True, eq=False)
class GroupAction:
    r: int
    level: int
    multipliers: tuple[TruncatedSeries, ...]
    # set when built from a factor that is trivial modulo G^{>level}
    out_of_level: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "multipliers", tuple(self.multipliers))
        if len(self.multipliers) != 2 * self.r:
            raise GroupError(f"need {2 * self.r} multipliers, got {len(self.multipliers)}")
        for S in self.multipliers:
            if S.nvars != self.r or S.level != self.level:
                raise GroupError("multiplier has wrong variable count or level")
            if S.constant_term() != 1:
                raise GroupError("multipliers must have constant term 1")

    @classmethod
    def identity(cls, r: int, level: int) -> "GroupAction":
        one = TruncatedSeries.one(r, level)
        return cls(r, level, (one,) * (2 * r))

    def is_identity(self) -> bool:
        return all(len(S.terms) == 1 for S in self.multipliers)

    def __eq__(self, other):
        if not isinstance(other, GroupAction):
            return NotImplemented
        return equals_mod_level(self, other)

    def __hash__(self):
        return hash(self.multipliers)

    def apply(self, s: TruncatedSeries) -> TruncatedSeries:
        """Action on a series in y_1..y_r."""
        return substitute(s, self.multipliers[: self.r])

    def apply_monomial(self, n: Sequence[int]) -> TruncatedSeries:
        S = TruncatedSeries.one(self.r, self.level)
        for i, k in enumerate(n):
            for _ in range(k):
                S = S * self.multipliers[i]
        return S.shift(n)


def _generator_exponent(fd: FixedData, m: NVector, j: int) -> Fraction:
    """Exponent q with Psi[m] sending generator j to itself times (1+y^m)^q."""
    r = fd.r
    if j < r:
        return skew_form(fd, m, tuple(1 if k == j else 0 for k in range(r)))
    i = j - r
    return -Fraction(m[i], fd.delta[i])


def dilog_action(fd: FixedData, level: int, phi: DilogFactor) -> GroupAction:
    if len(phi.m) != fd.r:
        raise GroupError(f"factor vector {phi.m} does not match rank {fd.r}")
    if phi.degree > level:
        log.debug("factor %s is trivial modulo G^{>%d}", phi, level)
        g = GroupAction.identity(fd.r, level)
        object.__setattr__(g, "out_of_level", True)
        return g
    mult = tuple(
        TruncatedSeries.binomial_power(phi.m, phi.c * _generator_exponent(fd, phi.m, j), level)
        for j in range(2 * fd.r)
    )
    return GroupAction(fd.r, level, mult)


def _same_shape(g: GroupAction, h: GroupAction) -> None:
    if g.r != h.r or g.level != h.level:
        raise GroupError(f"level mismatch: ({g.r}, {g.level}) vs ({h.r}, {h.level})")


def compose(g: GroupAction, h: GroupAction) -> GroupAction:
    """The action of the product g*h (h acts first on generators)."""
    _same_shape(g, h)
    first = g.multipliers[: g.r]
    mult = tuple(Sg * substitute(Sh, first) for Sg, Sh in zip(g.multipliers, h.multipliers))
    return GroupAction(g.r, g.level, mult)


def inverse(g: GroupAction) -> GroupAction:
    """Solve ``compose(g, h) = id`` for h by fixed-point iteration.

    Each pass raises the lowest degree of the error by one, so ``level``
    passes suffice.
    """
    first = g.multipliers[: g.r]
    T = [TruncatedSeries.one(g.r, g.level) for _ in g.multipliers]
    for _ in range(g.level + 1):
        err = [Sg * substitute(Tj, first) - 1 for Sg, Tj in zip(g.multipliers, T)]
        if all(e.is_zero() for e in err):
            break
        T = [Tj - e for Tj, e in zip(T, err)]
    return GroupAction(g.r, g.level, tuple(T))


def equals_mod_level(g: GroupAction, h: GroupAction) -> bool:
    _same_shape(g, h)
    return all(a == b for a, b in zip(g.multipliers, h.multipliers))


@dataclass(frozen=True)
class ProductExpr:
    """Signed ordered product; the rightmost factor acts first."""

    items: tuple[tuple[DilogFactor, int], ...] = ()

    def __post_init__(self):
        items = tuple((f, int(s)) for f, s in self.items)
        for _, s in items:
            if s not in (1, -1):
                raise GroupError(f"crossing sign must be +1 or -1, got {s}")
        object.__setattr__(self, "items", items)

    @classmethod
    def of(cls, factors: Iterable[DilogFactor | tuple], sign: int = 1) -> "ProductExpr":
        out = []
        for f in factors:
            if not isinstance(f, DilogFactor):
                f = DilogFactor(*f)
            out.append((f, sign))
        return cls(tuple(out))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __mul__(self, other: "ProductExpr") -> "ProductExpr":
        return ProductExpr(self.items + other.items)

    def inverse(self) -> "ProductExpr":
        return ProductExpr(tuple((f, -s) for f, s in reversed(self.items)))

    def signed_factors(self) -> list[DilogFactor]:
        return [DilogFactor(f.m, f.c * s) for f, s in self.items]

    def __str__(self):
        return " ".join(str(f) if s == 1 else f"({f})^-1" for f, s in self.items) or "id"

    def to_json(self) -> list[dict]:
        return [{"m": list(f.m), "c": str(f.c), "sign": s} for f, s in self.items]

    @classmethod
    def from_json(cls, obj: list[dict]) -> "ProductExpr":
        try:
            return cls(tuple((DilogFactor(tuple(t["m"]), Fraction(t["c"])), int(t.get("sign", 1))) for t in obj))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise GroupError(f"malformed product JSON: {exc}") from exc


def apply_factor(fd: FixedData, m: NVector, c: Fraction, s: TruncatedSeries) -> TruncatedSeries:
    """Action of Psi[m]^c on a series: ``y^n -> y^n (1+y^m)^{c {m,n}}``."""
    if degree(m) > s.level:
        return s
    groups: dict[Fraction, dict] = {}
    for e, a in s.terms.items():
        q = c * skew_form(fd, m, e)
        groups.setdefault(q, {})[e] = a
    out = TruncatedSeries.zero(s.nvars, s.level)
    for q, terms in groups.items():
        part = TruncatedSeries._raw(s.nvars, s.level, terms)
        if q:
            part = part * TruncatedSeries.binomial_power(m, q, s.level)
        out = out + part
    return out


def apply_product(fd: FixedData, factors: Sequence[DilogFactor], s: TruncatedSeries) -> TruncatedSeries:
    """Act on s by the product ``factors[0] * factors[1] * ...`` (rightmost first)."""
    for f in reversed(factors):
        s = apply_factor(fd, f.m, f.c, s)
    return s


def evaluate_product(fd: FixedData, level: int, p: ProductExpr) -> GroupAction:
    """Truncated path-ordered product, computed factor by factor on each generator."""
    factors = [f for f in p.signed_factors() if f.degree <= level]
    mult = []
    for j in range(2 * fd.r):
        S = TruncatedSeries.one(fd.r, level)
        for f in reversed(factors):
            own = TruncatedSeries.binomial_power(f.m, f.c * _generator_exponent(fd, f.m, j), level)
            S = own * apply_factor(fd, f.m, f.c, S)
        mult.append(S)
    return GroupAction(fd.r, level, tuple(mult))


def evaluate_product_by_composition(fd: FixedData, level: int, p: ProductExpr) -> GroupAction:
    """Same as :func:`evaluate_product` through generic :func:`compose`; used as an oracle."""
    g = GroupAction.identity(fd.r, level)
    for f in p.signed_factors():
        g = compose(g, dilog_action(fd, level, f))
    return g


def extract_degree(fd: FixedData, g: GroupAction, d: int) -> dict[NVector, Fraction]:
    """Lie coefficients c_n of ``g = exp(sum_{deg n = d} c_n X_n)`` modulo G^{>d}.

    Requires every multiplier to be 1 below degree d.  Reads c_n from the
    M°-block multipliers and cross-checks every block.
    """
    r = fd.r
    for j, S in enumerate(g.multipliers):
        for e in S.terms:
            if 0 < sum(e) < d:
                raise ExtractionError(f"multiplier {j} has a term of degree {sum(e)} < {d}: {S}")
    coeffs: dict[NVector, Fraction] = {}
    for i in range(r):
        for n, a in g.multipliers[r + i].homogeneous_part(d).items():
            if n[i] == 0:
                raise ExtractionError(f"multiplier {r + i} has term y^{n} with n_{i} = 0")
            c = -Fraction(fd.delta[i]) * a / n[i]
            if n in coeffs and coeffs[n] != c:
                raise ExtractionError(f"inconsistent coefficient for {n}: {coeffs[n]} vs {c}")
            coeffs[n] = c
    for i in range(r):
        part = g.multipliers[r + i].homogeneous_part(d)
        for n, c in coeffs.items():
            want = -c * Fraction(n[i], fd.delta[i])
            if part.get(n, 0) != want:
                raise ExtractionError(f"M-block {i} disagrees at {n}")
    for j in range(r):
        part = g.multipliers[j].homogeneous_part(d)
        want = {}
        for n, c in coeffs.items():
            q = c * skew_form(fd, n, tuple(1 if k == j else 0 for k in range(r)))
            if q:
                want[n] = q
        if part != want:
            raise ExtractionError(f"N-block multiplier {j} disagrees with extracted coefficients")
    return {n: c for n, c in coeffs.items() if c}
