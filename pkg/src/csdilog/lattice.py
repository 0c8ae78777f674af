"""Fixed data of a cluster scattering diagram: rank, skew-symmetrizers, exchange matrix.

The lattice N has basis e_1..e_r, the sublattice N° has basis delta_i e_i and
the skew form is recovered from B by ``{e_i, e_j} = b_ij / delta_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

NVector = tuple[int, ...]
MVector = tuple[int, ...]


class FixedDataError(ValueError):
    """Raised for malformed or non skew-symmetrizable input data."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class FixedData:
    """Rank ``r``, skew-symmetrizers ``delta`` and exchange matrix ``B``."""

    B: tuple[tuple[int, ...], ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.B)
        delta = tuple(int(d) for d in self.delta)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "delta", delta)
        r = len(delta)
        if r == 0:
            raise FixedDataError("rank must be positive")
        if len(B) != r or any(len(row) != r for row in B):
            raise FixedDataError(f"B must be {r}x{r} to match delta of length {r}")
        if any(d < 1 for d in delta):
            raise FixedDataError("skew-symmetrizers must be positive integers")
        for i in range(r):
            for j in range(r):
                if Fraction(B[i][j], delta[i]) != -Fraction(B[j][i], delta[j]):
                    raise FixedDataError(
                        f"B is not skew-symmetrizable by delta at ({i}, {j}): "
                        f"b_ij/delta_i = {Fraction(B[i][j], delta[i])}, "
                        f"b_ji/delta_j = {Fraction(B[j][i], delta[j])}"
                    )

    @property
    def r(self) -> int:
        return len(self.delta)

    @classmethod
    def from_lists(cls, B: Sequence[Sequence[int]], delta: Sequence[int]) -> "FixedData":
        return cls(tuple(tuple(row) for row in B), tuple(delta))

    def skew_matrix(self) -> list[list[Fraction]]:
        """Matrix of ``{e_i, e_j}``."""
        return [[Fraction(self.B[i][j], self.delta[i]) for j in range(self.r)] for i in range(self.r)]

    def to_json(self) -> dict:
        return {"B": [list(row) for row in self.B], "delta": list(self.delta)}

    @classmethod
    def from_json(cls, obj: dict | str) -> "FixedData":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls.from_lists(obj["B"], obj["delta"])
        except (KeyError, TypeError) as exc:
            raise FixedDataError(f"fixed data JSON needs 'B' and 'delta': {exc}") from exc


def _check_dim(fd: FixedData, *vectors: Sequence[int]) -> None:
    for v in vectors:
        if len(v) != fd.r:
            raise FixedDataError(f"vector {tuple(v)} has length {len(v)}, expected {fd.r}")


def skew_form(fd: FixedData, n: Sequence[int], n2: Sequence[int]) -> Fraction:
    """``{n, n2} = sum_ij n_i n2_j b_ij / delta_i``."""
    _check_dim(fd, n, n2)
    total = Fraction(0)
    for i, ni in enumerate(n):
        if ni == 0:
            continue
        row = fd.B[i]
        acc = sum(row[j] * n2[j] for j in range(fd.r))
        if acc:
            total += Fraction(ni * acc, fd.delta[i])
    return total


def degree(n: Sequence[int]) -> int:
    return sum(n)


def is_positive(n: Sequence[int]) -> bool:
    return all(x >= 0 for x in n) and sum(n) > 0


def content(n: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for x in n:
        g = gcd(g, x)
    return g


def is_primitive(n: Sequence[int]) -> bool:
    return content(n) == 1


def primitive_part(n: Sequence[int]) -> tuple[int, NVector]:
    """Split ``n = t * n0`` with ``n0`` primitive."""
    t = content(n)
    if t == 0:
        raise FixedDataError("zero vector has no primitive part")
    return t, tuple(x // t for x in n)


def normalization_factor(fd: FixedData, n: Sequence[int]) -> Fraction:
    """Smallest positive rational q with ``q * n`` in N°.

    For primitive ``n0`` this is the integer ``lcm_i(delta_i / gcd(delta_i, n0_i))``;
    for ``n = t * n0`` it is that integer divided by ``t``.
    """
    _check_dim(fd, n)
    if not is_positive(n):
        raise FixedDataError(f"normalization factor needs a positive vector, got {tuple(n)}")
    t, n0 = primitive_part(n)
    q = 1
    for d, x in zip(fd.delta, n0):
        q = _lcm(q, d // gcd(d, x))
    return Fraction(q, t)


def p_star(fd: FixedData, n: Sequence[int]) -> MVector:
    """Coordinates of ``{., n}`` in the basis f_1..f_r of M°, i.e. ``B n``."""
    _check_dim(fd, n)
    return tuple(sum(fd.B[i][j] * n[j] for j in range(fd.r)) for i in range(fd.r))


def pairing(fd: FixedData, n: Sequence[int], z: Sequence) -> Fraction:
    """``<n, z>`` for z given in f-coordinates: ``sum_i n_i z_i / delta_i``."""
    _check_dim(fd, n, z)
    return sum((Fraction(ni) * Fraction(zi) / d for ni, zi, d in zip(n, z, fd.delta)), Fraction(0))


def unit_vector(r: int, i: int) -> NVector:
    return tuple(1 if k == i else 0 for k in range(r))


# Named examples used across tests, scripts and the CLI.
A1_1 = FixedData(((0, -2), (2, 0)), (2, 2))
A2_2 = FixedData(((0, -1), (4, 0)), (1, 4))
A2 = FixedData(((0, -1), (1, 0)), (1, 1))
B2 = FixedData(((0, -1), (2, 0)), (1, 2))
