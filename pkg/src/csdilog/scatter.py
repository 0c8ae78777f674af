"""Rank-2 cluster scattering diagrams truncated at a degree.

All walls of a rank-2 diagram meet at the origin, so a diagram is a list of
rays (outgoing walls) plus the two incoming lines e_1^perp and e_2^perp.
The wall elements are found by ordering the anti-ordered product of the
incoming elements degree by degree.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .group import (
    DilogFactor,
    ProductExpr,
    evaluate_product,
    extract_degree,
    GroupAction,
)
from .lattice import (
    FixedData,
    FixedDataError,
    NVector,
    degree,
    normalization_factor,
    p_star,
    pairing,
    primitive_part,
    skew_form,
    unit_vector,
)

log = logging.getLogger(__name__)


class PositiveFormError(AssertionError):
    """A wall element is not of the form Psi[tn]^{s delta(tn)} with s a positive integer."""


class PentagonInapplicable(RuntimeError):
    pass


class TraceError(ValueError):
    pass


def _require_rank2(fd: FixedData) -> None:
    if fd.r != 2:
        raise FixedDataError(f"rank-2 construction called with rank {fd.r}")


def kappa(fd: FixedData) -> Fraction:
    """``{e_2, e_1}``; its sign fixes which products count as ordered."""
    return skew_form(fd, (0, 1), (1, 0))


def slope(n: Sequence[int]):
    return Fraction(n[1], n[0]) if n[0] else float("inf")


def ordering_key(fd: FixedData):
    """Sort key putting a rank-2 product in ordered form, left to right.

    Ordered means ``{n_left, n_right} <= 0`` for adjacent factors; with
    ``{e_2, e_1} > 0`` that is increasing slope n_2/n_1.
    """
    sign = -1 if kappa(fd) < 0 else 1

    def key(f: DilogFactor):
        s = slope(f.m)
        return (s if sign > 0 else -s, degree(f.m))

    return key


def is_ordered(fd: FixedData, factors: Sequence[DilogFactor]) -> bool:
    return all(skew_form(fd, a.m, b.m) <= 0 for a, b in zip(factors, factors[1:]))


@dataclass(frozen=True)
class FactorRecord:
    t: int
    s: int
    delta: Fraction


def positive_form(fd: FixedData, f: DilogFactor) -> FactorRecord:
    """Decompose ``f = Psi[t n0]^{s delta(t n0)}``; raise unless s is a positive integer."""
    t, _ = primitive_part(f.m)
    dn = normalization_factor(fd, f.m)
    s = f.c / dn
    if s.denominator != 1 or s <= 0:
        raise PositiveFormError(f"{f}: exponent {f.c} is {s} times delta({f.m}) = {dn}")
    return FactorRecord(t, int(s), dn)


def merge_adjacent(factors: Iterable[DilogFactor]) -> list[DilogFactor]:
    """Merge neighbouring factors with equal vector (they commute)."""
    out: list[DilogFactor] = []
    for f in factors:
        if out and out[-1].m == f.m:
            c = out[-1].c + f.c
            out.pop()
            if c:
                out.append(DilogFactor(f.m, c))
        else:
            out.append(f)
    return out


def order_product(
    fd: FixedData, level: int, C_in: ProductExpr, check_positive: bool = True
) -> ProductExpr:
    """Ordered product equal to ``C_in`` modulo G^{>level}.

    At degree d the discrepancy ``C_out^{-1} C_in`` is central of pure degree d,
    so its Lie coefficients can be read off and inserted as new factors at
    their slope positions.
    """
    _require_rank2(fd)
    key = ordering_key(fd)
    found: dict[NVector, Fraction] = {}
    for d in range(1, level + 1):
        current = ProductExpr.of(sorted((DilogFactor(m, c) for m, c in found.items()), key=key))
        D = evaluate_product(fd, d, current.inverse() * C_in)
        for n, c in extract_degree(fd, D, d).items():
            found[n] = found.get(n, Fraction(0)) + c
            log.debug("degree %d: factor Psi[%s]^%s", d, n, c)
    factors = sorted((DilogFactor(m, c) for m, c in found.items() if c), key=key)
    if check_positive:
        for f in factors:
            positive_form(fd, f)
    return ProductExpr.of(factors)


def incoming_product(fd: FixedData) -> ProductExpr:
    """Anti-ordered product of the incoming wall elements Psi[e_i]^{delta_i}."""
    _require_rank2(fd)
    e1 = DilogFactor((1, 0), fd.delta[0])
    e2 = DilogFactor((0, 1), fd.delta[1])
    return ProductExpr.of([e1, e2] if kappa(fd) < 0 else [e2, e1])


@dataclass(frozen=True)
class Wall2:
    normal: NVector
    factors: tuple[DilogFactor, ...]
    records: tuple[FactorRecord, ...] = ()

    @property
    def incoming(self) -> bool:
        return self.normal in ((1, 0), (0, 1))

    def directions(self, fd: FixedData) -> list[tuple[int, int]]:
        """Ray directions (f-coordinates) making up the support."""
        if self.incoming:
            return [(0, 1), (0, -1)] if self.normal == (1, 0) else [(1, 0), (-1, 0)]
        v = tuple(-x for x in p_star(fd, self.normal))
        if v == (0, 0):
            raise FixedDataError(f"outgoing wall with normal {self.normal} has degenerate support")
        return [v]


@dataclass(frozen=True)
class Crossing:
    position: int
    wall: int
    factor: int
    sign: int
    phi: DilogFactor

    @property
    def exponent(self) -> Fraction:
        return self.sign * self.phi.c


@dataclass
class Rank2CSD:
    fd: FixedData
    level: int
    walls: list[Wall2] = field(default_factory=list)

    def all_factors(self) -> list[DilogFactor]:
        return [f for w in self.walls for f in w.factors]

    def ordered_product(self) -> ProductExpr:
        return ProductExpr.of(sorted(self.all_factors(), key=ordering_key(self.fd)))

    def to_json(self) -> dict:
        walls = []
        for w in self.walls:
            recs = []
            for f in w.factors:
                t, _ = primitive_part(f.m)
                dn = normalization_factor(self.fd, f.m)
                s = f.c / dn
                recs.append({"t": t, "s": int(s) if s.denominator == 1 else str(s), "delta": str(dn)})
            walls.append({"normal": list(w.normal), "factors": recs})
        return {"fd": self.fd.to_json(), "level": self.level, "walls": walls}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict | str) -> "Rank2CSD":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            fd = FixedData.from_json(obj["fd"])
            _require_rank2(fd)
            level = int(obj["level"])
            walls = []
            for w in obj["walls"]:
                normal = tuple(int(x) for x in w["normal"])
                t0, n0 = primitive_part(normal)
                if t0 != 1 or min(normal) < 0:
                    raise FixedDataError(f"wall normal {normal} is not positive primitive")
                factors = []
                for rec in w["factors"]:
                    t = int(rec["t"])
                    m = tuple(t * x for x in normal)
                    dn = normalization_factor(fd, m)
                    if "delta" in rec and Fraction(rec["delta"]) != dn:
                        raise FixedDataError(f"stored delta {rec['delta']} for {m} differs from {dn}")
                    factors.append(DilogFactor(m, Fraction(rec["s"]) * dn))
                factors.sort(key=lambda f: degree(f.m))
                walls.append(Wall2(normal, tuple(factors)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FixedDataError):
                raise
            raise FixedDataError(f"malformed CSD JSON: {exc}") from exc
        walls.sort(key=lambda w: slope(w.normal))
        return cls(fd, level, walls)


def build_csd(fd: FixedData, level: int) -> Rank2CSD:
    _require_rank2(fd)
    if level < 1:
        raise FixedDataError("level must be at least 1")
    out = order_product(fd, level, incoming_product(fd), check_positive=False)
    by_ray: dict[NVector, list[DilogFactor]] = {}
    for f in out.signed_factors():
        by_ray.setdefault(primitive_part(f.m)[1], []).append(f)
    for i in range(2):
        e = unit_vector(2, i)
        if by_ray.get(e) != [DilogFactor(e, fd.delta[i])]:
            raise AssertionError(f"incoming ray {e} carries {by_ray.get(e)}")
    walls = []
    for n0 in sorted(by_ray, key=slope):
        factors = tuple(sorted(by_ray[n0], key=lambda f: degree(f.m)))
        walls.append(Wall2(n0, factors, tuple(positive_form(fd, f) for f in factors)))
    return Rank2CSD(fd, level, walls)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _ccw_from(base):
    """Comparator for directions by counterclockwise angle measured from ``base``."""

    def half(v):
        c = _cross(base, v)
        dot = base[0] * v[0] + base[1] * v[1]
        return 0 if c > 0 or (c == 0 and dot > 0) else 1

    def cmp(u, v):
        hu, hv = half(u), half(v)
        if hu != hv:
            return hu - hv
        c = _cross(u, v)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return cmp


def loop_crossings(csd: Rank2CSD) -> list[Crossing]:
    """Wall crossings of a counterclockwise loop based in Int(C^+), in crossing order."""
    fd = csd.fd
    rays = []
    for wi, w in enumerate(csd.walls):
        for v in w.directions(fd):
            rays.append((v, wi))
    cmp = _ccw_from((1, 1))
    rays.sort(key=cmp_to_key(lambda a, b: cmp(a[0], b[0])))
    for (u, _), (v, _) in zip(rays, rays[1:]):
        if cmp(u, v) == 0:
            raise FixedDataError(f"two walls share the ray direction {u}")
    out: list[Crossing] = []
    for v, wi in rays:
        w = csd.walls[wi]
        tangent = (-v[1], v[0])
        q = pairing(fd, w.normal, tangent)
        if q == 0:
            raise FixedDataError(f"loop is tangent to wall {w.normal}")
        sign = 1 if q < 0 else -1
        for fi, f in enumerate(w.factors):
            out.append(Crossing(len(out), wi, fi, sign, f))
    return out


def loop_product(csd: Rank2CSD) -> ProductExpr:
    """Path-ordered product of the loop; leftmost = last crossed."""
    return ProductExpr(tuple((c.phi, c.sign) for c in reversed(loop_crossings(csd))))


def consistency_check(csd: Rank2CSD) -> bool:
    g = evaluate_product(csd.fd, csd.level, loop_product(csd))
    return g.is_identity()


# pentagon-move sorting -----------------------------------------------------------


@dataclass(frozen=True)
class Move:
    kind: str  # pentagon | commute | split | merge | truncate
    position: int
    k: int | None = None

    def to_json(self) -> dict:
        d = {"kind": self.kind, "position": self.position}
        if self.k is not None:
            d["k"] = self.k
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Move":
        return cls(d["kind"], int(d["position"]), d.get("k"))


def apply_move(fd: FixedData, level: int, factors: Sequence[DilogFactor], move: Move) -> list[DilogFactor]:
    fs = list(factors)
    p = move.position
    if not 0 <= p < len(fs):
        raise TraceError(f"move {move} out of range for a product of length {len(fs)}")
    if move.kind == "truncate":
        if fs[p].degree <= level:
            raise TraceError(f"truncate at {p}: {fs[p]} is not above level {level}")
        del fs[p]
    elif move.kind == "split":
        k = move.k
        if not k or k < 1:
            raise TraceError("split needs k >= 1")
        f = fs[p]
        fs[p : p + 1] = [DilogFactor(f.m, f.c / k)] * k
    elif move.kind == "merge":
        if p + 1 >= len(fs) or fs[p].m != fs[p + 1].m:
            raise TraceError(f"merge at {p} needs two neighbouring factors with equal vector")
        fs[p : p + 2] = [DilogFactor(fs[p].m, fs[p].c + fs[p + 1].c)]
    elif move.kind in ("commute", "pentagon"):
        if p + 1 >= len(fs):
            raise TraceError(f"{move.kind} at {p} needs a right neighbour")
        a, b = fs[p], fs[p + 1]
        if move.kind == "commute":
            if skew_form(fd, a.m, b.m) != 0 and degree(a.m) + degree(b.m) <= level:
                raise TraceError(f"commute at {p}: {a} and {b} do not commute modulo level {level}")
            fs[p], fs[p + 1] = b, a
        else:
            c = skew_form(fd, a.m, b.m)
            if c == 0 or a.c != 1 / c or b.c != 1 / c:
                raise TraceError(f"pentagon at {p} needs exponents 1/{{n2,n1}} = 1/{c}: got {a}, {b}")
            n12 = tuple(x + y for x, y in zip(a.m, b.m))
            fs[p : p + 2] = [DilogFactor(b.m, b.c), DilogFactor(n12, b.c), DilogFactor(a.m, a.c)]
    else:
        raise TraceError(f"unknown move kind {move.kind!r}")
    return fs


@dataclass
class MoveTrace:
    fd: FixedData
    level: int
    start: tuple[DilogFactor, ...]
    moves: list[Move] = field(default_factory=list)

    def replay(self) -> list[list[DilogFactor]]:
        """Every intermediate product, starting with ``start``."""
        states = [list(self.start)]
        for mv in self.moves:
            states.append(apply_move(self.fd, self.level, states[-1], mv))
        return states

    def pentagon_stages(self) -> list[list[DilogFactor]]:
        """Product right before the first pentagon move, then right after each one."""
        states = self.replay()
        idx = [i for i, mv in enumerate(self.moves) if mv.kind == "pentagon"]
        if not idx:
            return [states[-1]]
        return [states[idx[0]]] + [states[i + 1] for i in idx]

    def to_json(self) -> dict:
        return {
            "fd": self.fd.to_json(),
            "level": self.level,
            "start": ProductExpr.of(self.start).to_json(),
            "moves": [m.to_json() for m in self.moves],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MoveTrace":
        fd = FixedData.from_json(obj["fd"])
        start = tuple(ProductExpr.from_json(obj["start"]).signed_factors())
        return cls(fd, int(obj["level"]), start, [Move.from_json(m) for m in obj["moves"]])


def _multiple_of(e: Fraction, c: Fraction) -> int | None:
    k = e * c
    return int(k) if k.denominator == 1 and k > 0 else None


def pentagon_sort_trace(
    fd: FixedData, level: int, C_in: ProductExpr, max_moves: int = 200_000
) -> tuple[ProductExpr, MoveTrace]:
    """Order ``C_in`` using only commutation, pentagon, splitting, merging and truncation.

    Among the strictly anti-ordered adjacent pairs that admit a move (product
    above the level, or both exponents positive multiples of 1/{n2,n1}) the one
    of least combined degree is taken, leftmost first.  When no pair admits a
    move, the leftmost run of equal factors is merged.  Finally the pieces on
    each ray are gathered by degree and merged, so the result matches
    :func:`order_product`.
    """
    _require_rank2(fd)
    signs = {s for _, s in C_in}
    if signs - {1}:
        raise TraceError("pentagon sorting expects an unsigned product")
    start = tuple(C_in.signed_factors())
    trace = MoveTrace(fd, level, start)
    fs = list(start)

    def do(move: Move):
        nonlocal fs
        fs = apply_move(fd, level, fs, move)
        trace.moves.append(move)
        if len(trace.moves) > max_moves:
            raise PentagonInapplicable(f"no ordering reached within {max_moves} moves")

    p = 0
    while p < len(fs):
        if fs[p].degree > level:
            do(Move("truncate", p))
        else:
            p += 1

    while True:
        best = None
        blocked = None
        for p in range(len(fs) - 1):
            c = skew_form(fd, fs[p].m, fs[p + 1].m)
            if c <= 0:
                continue
            total = fs[p].degree + fs[p + 1].degree
            if total > level or (_multiple_of(fs[p].c, c) and _multiple_of(fs[p + 1].c, c)):
                if best is None or (total, p) < best:
                    best = (total, p)
            elif blocked is None:
                blocked = p
        if best is None:
            if blocked is None:
                break
            runs = [p for p in range(len(fs) - 1) if fs[p].m == fs[p + 1].m]
            if not runs:
                raise PentagonInapplicable(
                    f"pair {fs[blocked]} {fs[blocked + 1]}: exponents are not positive multiples "
                    f"of 1/{skew_form(fd, fs[blocked].m, fs[blocked + 1].m)} and nothing can be merged"
                )
            do(Move("merge", runs[0]))
            continue
        total, p = best
        if total > level:
            do(Move("commute", p))
            continue
        c = skew_form(fd, fs[p].m, fs[p + 1].m)
        kl = _multiple_of(fs[p].c, c)
        kr = _multiple_of(fs[p + 1].c, c)
        if kl > 1:
            do(Move("split", p, kl))
            p += kl - 1
        if kr > 1:
            do(Move("split", p + 1, kr))
        do(Move("pentagon", p))

    # gather each ray's block by degree (all commute) and merge equal vectors
    changed = True
    while changed:
        changed = False
        for p in range(len(fs) - 1):
            a, b = fs[p], fs[p + 1]
            if a.m == b.m:
                do(Move("merge", p))
                changed = True
                break
            if skew_form(fd, a.m, b.m) == 0 and slope(a.m) == slope(b.m) and a.degree > b.degree:
                do(Move("commute", p))
                changed = True
                break
    return ProductExpr.of(fs), trace
