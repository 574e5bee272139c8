"""Numerical intersection data: trilinear form, divisor classes, dimension.

The ambient lattice has rank b; a symmetric trilinear form d_ijk plays the
role of the cup product on divisor classes and a linear form c2 pairs against
them.  All queries are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import Rat, Vec, canonical_vector, frac, primitive_vector, vec, vec_dot


@dataclass(frozen=True)
class Divisor:
    """A divisor class: coordinates in the chosen lattice basis."""

    coords: Vec
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", vec(self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def primitive(self) -> "Divisor":
        return Divisor(primitive_vector(self.coords), self.name)

    def canonical(self) -> "Divisor":
        return Divisor(canonical_vector(self.coords), self.name)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return Divisor(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, s) -> "Divisor":
        s = frac(s)
        return Divisor(tuple(s * c for c in self.coords))

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class LinearClass:
    """A linear functional on divisor classes (e.g. the second Chern class)."""

    coords: Vec
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", vec(self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def pair(self, d: Divisor | Sequence) -> Fraction:
        other = d.coords if isinstance(d, Divisor) else vec(d)
        return vec_dot(self.coords, other)


class IntersectionForm:
    """Symmetric trilinear form with integer structure constants d_ijk.

    Entries are stored once per sorted index triple i <= j <= k; evaluation
    symmetrizes on the fly.
    """

    def __init__(self, rank: int, entries: Mapping[tuple[int, int, int], int]):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        table: dict[tuple[int, int, int], int] = {}
        for key, value in entries.items():
            if len(key) != 3:
                raise ValueError(f"intersection index {key} must have three entries")
            i, j, k = sorted(key)
            if not (0 <= i and k < rank):
                raise ValueError(f"intersection index {key} out of range for rank {rank}")
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"intersection value for {key} must be an integer, got {value!r}")
            if value == 0:
                continue
            if (i, j, k) in table and table[(i, j, k)] != value:
                raise ValueError(f"conflicting values for intersection index {(i, j, k)}")
            table[(i, j, k)] = value
        self.entries = table

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntersectionForm":
        return cls(len(values), {(i, i, i): v for i, v in enumerate(values)})

    def _coords(self, d) -> Vec:
        c = d.coords if isinstance(d, Divisor) else vec(d)
        if len(c) != self.rank:
            raise ValueError(f"divisor has {len(c)} coordinates, expected {self.rank}")
        return c

    def triple(self, a, b, c) -> Fraction:
        """The full trilinear evaluation T(a, b, c)."""
        x, y, z = self._coords(a), self._coords(b), self._coords(c)
        total = Fraction(0)
        for (i, j, k), d in self.entries.items():
            if i == j == k:
                s = x[i] * y[i] * z[i]
            elif i == j:
                s = x[i] * y[i] * z[k] + x[i] * y[k] * z[i] + x[k] * y[i] * z[i]
            elif j == k:
                s = x[i] * y[j] * z[j] + x[j] * y[i] * z[j] + x[j] * y[j] * z[i]
            else:
                s = (
                    x[i] * (y[j] * z[k] + y[k] * z[j])
                    + x[j] * (y[i] * z[k] + y[k] * z[i])
                    + x[k] * (y[i] * z[j] + y[j] * z[i])
                )
            total += d * s
        return total

    def cube(self, d) -> Fraction:
        return self.triple(d, d, d)

    def square_class(self, d) -> LinearClass:
        """The linear functional T(d, d, -) in basis coordinates."""
        basis = [[Fraction(int(i == j)) for j in range(self.rank)] for i in range(self.rank)]
        return LinearClass(tuple(self.triple(d, d, e) for e in basis))

    def numerical_dimension(self, d) -> int:
        """nu(d) in {0,1,2,3}: largest power of d that is nonzero in the ring."""
        c = self._coords(d)
        if self.cube(c) != 0:
            return 3
        if not self.square_class(c).is_zero:
            return 2
        basis = [[Fraction(int(i == j)) for j in range(self.rank)] for i in range(self.rank)]
        for i in range(self.rank):
            for j in range(i, self.rank):
                if self.triple(c, basis[i], basis[j]) != 0:
                    return 1
        return 0


def c2_pair(c2: LinearClass, d: Divisor | Sequence) -> Fraction:
    """The pairing c2 . d."""
    return c2.pair(d)


def nef_threshold(form: IntersectionForm, h: Divisor, d: Divisor) -> Fraction:
    """The positive t0 with cube(h - t0*d) = 0, for d of numerical dimension 1.

    With d^2 = 0 and d.h^2 != 0 the cubic in t collapses to a linear equation,
    so t0 = h^3 / (3 d.h^2) is exact.
    """
    nu = form.numerical_dimension(d)
    if nu != 1:
        raise ValueError(f"numerical dimension of d is {nu}, need exactly 1")
    dh2 = form.triple(d, h, h)
    if dh2 == 0:
        raise ValueError("triple(d, h, h) = 0; the ray h - t*d never leaves the null cone")
    return form.cube(h) / (3 * dh2)


def positivity_flags(form: IntersectionForm, n: Divisor, h: Divisor) -> tuple[bool, bool, bool]:
    """(n^3 > 0, n^2.h > 0, n.h^2 > 0) for a class n against a reference h."""
    return (
        form.cube(n) > 0,
        form.triple(n, n, h) > 0,
        form.triple(n, h, h) > 0,
    )


def validate_input(
    form: IntersectionForm,
    c2: LinearClass,
    nef: Iterable[Divisor] = (),
    ample: Iterable[Divisor] = (),
) -> list[str]:
    """Consistency warnings for asserted positivity data.

    Returns human-readable warnings; hard shape errors raise instead.
    """
    if c2.rank != form.rank:
        raise ValueError(f"c2 has {c2.rank} coordinates, expected {form.rank}")
    warnings: list[str] = []
    if c2.is_zero:
        warnings.append(
            "c2 pairing vanishes identically; c2(X) != 0 is required for a "
            "Calabi-Yau threefold"
        )
    for h in ample:
        if h.rank != form.rank:
            raise ValueError(f"divisor {h.name or h.coords} has wrong rank")
        val = c2.pair(h)
        if val <= 0:
            warnings.append(
                f"divisor {h.name or tuple(map(str, h.coords))} asserted ample "
                f"but c2 pairing is {val}: Miyaoka strictness violated"
            )
    for d in nef:
        if d.rank != form.rank:
            raise ValueError(f"divisor {d.name or d.coords} has wrong rank")
        val = c2.pair(d)
        if val < 0:
            warnings.append(
                f"divisor {d.name or tuple(map(str, d.coords))} asserted nef "
                f"but c2 pairing is {val}: Miyaoka nonnegativity violated"
            )
    return warnings
