"""Truncated multivariate power series over Q and Puiseux series with a log factor.

A :class:`TruncatedSeries` lives in Q[[y_1..y_r]] / F^{>level}: every term of
total degree above ``level`` is dropped as soon as it is produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class SeriesError(ValueError):
    pass


def _key(e: Exponent):
    return (sum(e), e)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def binomial(c: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient C(c, k) for rational c."""
    out = Fraction(1)
    for i in range(k):
        out = out * (c - i) / (i + 1)
    return out


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    nvars: int
    level: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 0:
            raise SeriesError("truncation level must be nonnegative")
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise SeriesError(f"bad exponent {e} for {self.nvars} variables")
            if sum(e) > self.level:
                continue
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    # construction -----------------------------------------------------------------
    @classmethod
    def _raw(cls, nvars: int, level: int, terms: dict) -> "TruncatedSeries":
        # trusted path: terms already truncated, nonzero, Fraction-valued
        obj = object.__new__(cls)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "level", level)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def zero(cls, nvars: int, level: int) -> "TruncatedSeries":
        return cls._raw(nvars, level, {})

    @classmethod
    def constant(cls, nvars: int, level: int, c=1) -> "TruncatedSeries":
        c = Fraction(c)
        return cls._raw(nvars, level, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int, level: int) -> "TruncatedSeries":
        return cls.constant(nvars, level, 1)

    @classmethod
    def monomial(cls, exp: Sequence[int], level: int, c=1) -> "TruncatedSeries":
        return cls(len(exp), level, {tuple(exp): Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, level: int, i: int) -> "TruncatedSeries":
        return cls.monomial(tuple(1 if k == i else 0 for k in range(nvars)), level)

    @classmethod
    def binomial_power(cls, m: Sequence[int], a, level: int) -> "TruncatedSeries":
        """``(1 + y^m)^a`` for a positive exponent vector m and rational a."""
        m = tuple(m)
        dm = sum(m)
        if dm <= 0:
            raise SeriesError("binomial_power needs a monomial of positive degree")
        a = Fraction(a)
        terms = {}
        coeff = Fraction(1)
        k = 0
        while k * dm <= level:
            if coeff:
                terms[tuple(k * x for x in m)] = coeff
            coeff = coeff * (a - k) / (k + 1)
            k += 1
        return cls._raw(len(m), level, terms)

    # inspection -------------------------------------------------------------------
    def items(self):
        """Terms ordered by (total degree, exponent)."""
        return sorted(self.terms.items(), key=lambda kv: _key(kv[0]))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def lowest_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def homogeneous_part(self, d: int) -> dict[Exponent, Fraction]:
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def truncate(self, level: int) -> "TruncatedSeries":
        if level > self.level:
            raise SeriesError("cannot raise the truncation level of a series")
        return TruncatedSeries._raw(
            self.nvars, level, {e: c for e, c in self.terms.items() if sum(e) <= level}
        )

    def evaluate(self, point: Sequence[float]) -> float:
        total = 0.0
        for e, c in self.terms.items():
            v = float(c)
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.level == other.level and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.level, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TruncatedSeries({self}, level={self.level})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                f"y{i + 1}" if k == 1 else f"y{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic -------------------------------------------------------------------
    def _check(self, other: "TruncatedSeries"):
        if self.level != other.level or self.nvars != other.nvars:
            raise SeriesError(
                f"level/variable mismatch: ({self.nvars}, {self.level}) vs ({other.nvars}, {other.level})"
            )

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(self.nvars, self.level, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return TruncatedSeries._raw(self.nvars, self.level, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.nvars, self.level, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        if not c:
            return TruncatedSeries.zero(self.nvars, self.level)
        return TruncatedSeries._raw(self.nvars, self.level, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        level = self.level
        right = sorted(((sum(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0])
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            da = sum(ea)
            for db, eb, cb in right:
                if da + db > level:
                    break
                e = _add_exp(ea, eb)
                v = out.get(e, 0) + ca * cb
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return TruncatedSeries._raw(self.nvars, level, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        if not isinstance(k, int) or k < 0:
            raise SeriesError("integer power must be a nonnegative int; use pow_rational")
        result = TruncatedSeries.one(self.nvars, self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exp: Sequence[int]) -> "TruncatedSeries":
        """Multiply by the monomial y^exp."""
        exp = tuple(exp)
        d = sum(exp)
        return TruncatedSeries._raw(
            self.nvars,
            self.level,
            {_add_exp(e, exp): c for e, c in self.terms.items() if sum(e) + d <= self.level},
        )


def _powers(v: TruncatedSeries) -> Iterable[TruncatedSeries]:
    """v, v^2, ... until truncation kills them (v without constant term)."""
    p = v
    while not p.is_zero():
        yield p
        p = p * v


def _require_unit(u: TruncatedSeries, what: str) -> TruncatedSeries:
    if u.constant_term() != 1:
        raise SeriesError(f"{what} needs constant term exactly 1, got {u.constant_term()}")
    return u - 1


def pow_rational(u: TruncatedSeries, c) -> TruncatedSeries:
    """``u^c = sum_k C(c, k) (u - 1)^k`` for u with constant term 1."""
    v = _require_unit(u, "pow_rational")
    c = Fraction(c)
    out = TruncatedSeries.one(u.nvars, u.level)
    if c == 0:
        return out
    for k, p in enumerate(_powers(v), start=1):
        b = binomial(c, k)
        if b:
            out = out + p.scale(b)
    return out


def log1p(v: TruncatedSeries) -> TruncatedSeries:
    """``log(1 + v) = sum_j (-1)^{j+1} v^j / j`` for v without constant term."""
    if v.constant_term() != 0:
        raise SeriesError("log1p needs zero constant term")
    out = TruncatedSeries.zero(v.nvars, v.level)
    for j, p in enumerate(_powers(v), start=1):
        out = out + p.scale(Fraction((-1) ** (j + 1), j))
    return out


def exp_series(v: TruncatedSeries) -> TruncatedSeries:
    """``exp(v)`` for v without constant term."""
    if v.constant_term() != 0:
        raise SeriesError("exp_series needs zero constant term")
    out = TruncatedSeries.one(v.nvars, v.level)
    fact = Fraction(1)
    for j, p in enumerate(_powers(v), start=1):
        fact /= j
        out = out + p.scale(fact)
    return out


def substitute(s: TruncatedSeries, multipliers: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Replace each y_i by ``y_i * S_i`` in s (every S_i with constant term 1)."""
    if len(multipliers) != s.nvars:
        raise SeriesError(f"need {s.nvars} multipliers, got {len(multipliers)}")
    for S in multipliers:
        s._check(S)
        if S.constant_term() != 1:
            raise SeriesError("substitution multipliers need constant term 1")
    if all(len(S.terms) == 1 for S in multipliers):
        return s
    level = s.level
    cache: list[list[TruncatedSeries]] = [[TruncatedSeries.one(s.nvars, level)] for _ in multipliers]

    def power(i: int, k: int) -> TruncatedSeries:
        pw = cache[i]
        while len(pw) <= k:
            pw.append(pw[-1] * multipliers[i])
        return pw[k]

    out = TruncatedSeries.zero(s.nvars, level)
    for e, c in s.terms.items():
        # y^e * prod S_i^{e_i}, computed at the reduced level level - deg(e)
        factor = TruncatedSeries.constant(s.nvars, level, c)
        for i, k in enumerate(e):
            if k:
                factor = factor * power(i, k)
        out = out + factor.shift(e)
    return out


@dataclass(frozen=True, eq=False)
class LogSeries:
    """``f + sum_i log(y_i) g_i`` modulo F^{>level}_log."""

    f: TruncatedSeries
    g: tuple[TruncatedSeries, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(self.g))
        if len(self.g) != self.f.nvars:
            raise SeriesError("LogSeries needs one log-coefficient per variable")
        for gi in self.g:
            self.f._check(gi)

    @property
    def level(self) -> int:
        return self.f.level

    @property
    def nvars(self) -> int:
        return self.f.nvars

    @classmethod
    def zero(cls, nvars: int, level: int) -> "LogSeries":
        z = TruncatedSeries.zero(nvars, level)
        return cls(z, (z,) * nvars)

    def __add__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.f + other.f, tuple(a + b for a, b in zip(self.g, other.g)))

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.f - other.f, tuple(a - b for a, b in zip(self.g, other.g)))

    def __neg__(self) -> "LogSeries":
        return LogSeries(-self.f, tuple(-a for a in self.g))

    def scale(self, c) -> "LogSeries":
        return LogSeries(self.f.scale(c), tuple(a.scale(c) for a in self.g))

    def is_zero(self) -> bool:
        return self.f.is_zero() and all(a.is_zero() for a in self.g)

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.f == other.f and self.g == other.g

    def __hash__(self):
        return hash((self.f, self.g))

    def evaluate(self, point: Sequence[float]) -> float:
        from math import log

        return self.f.evaluate(point) + sum(log(x) * gi.evaluate(point) for x, gi in zip(point, self.g))

    def __str__(self):
        parts = [str(self.f)] + [f"log(y{i + 1})*({gi})" for i, gi in enumerate(self.g)]
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"f": series_to_json(self.f), "g": [series_to_json(gi) for gi in self.g], "level": self.level}

    @classmethod
    def from_json(cls, obj: dict) -> "LogSeries":
        level = obj["level"]
        f = series_from_json(obj["f"], len(obj["g"]), level)
        return cls(f, tuple(series_from_json(gi, len(obj["g"]), level) for gi in obj["g"]))


def series_to_json(s: TruncatedSeries) -> list[dict]:
    return [
        {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)} for e, c in s.items()
    ]


def series_from_json(items: list[dict], nvars: int, level: int) -> TruncatedSeries:
    terms: dict[Exponent, Fraction] = {}
    for t in items:
        e = tuple(t["exp"])
        terms[e] = terms.get(e, Fraction(0)) + Fraction(int(t["num"]), int(t["den"]))
    return TruncatedSeries(nvars, level, terms)
