"""Shared exact-arithmetic constructions for the test suite.

Everything here is deterministic given the caller's seeded Random instance;
no floating point is used anywhere.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from nullcone.exactmath import Poly, frac, mat_inv
from nullcone.nsring import Divisor, IntersectionForm


def nonzero_vector(rng, n: int, hmax: int) -> tuple[int, ...]:
    """Random integer vector with entries in [-hmax, hmax], not all zero."""
    while True:
        v = tuple(rng.randint(-hmax, hmax) for _ in range(n))
        if any(v):
            return v


def random_linear_poly(rng, n: int, hmax: int) -> Poly:
    return Poly.linear([frac(c) for c in nonzero_vector(rng, n, hmax)])


def random_quadric_poly(rng, n: int, hmax: int) -> Poly:
    """Random nonzero homogeneous quadratic with integer coefficients."""
    while True:
        terms = {}
        for i in range(n):
            for j in range(i, n):
                c = rng.randint(-hmax, hmax)
                if c:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = Fraction(c)
        if terms:
            return Poly(n, terms)


def sorted_triples(n: int):
    return list(itertools.combinations_with_replacement(range(n), 3))


def random_form(rng, n: int, hmax: int) -> IntersectionForm:
    """Random trilinear form; at least one entry is nonzero."""
    while True:
        entries = {}
        for key in sorted_triples(n):
            v = rng.randint(-hmax, hmax)
            if v:
                entries[key] = v
        if entries:
            return IntersectionForm(n, entries)


def plant_null_form(rng, n: int, hmax: int):
    """A random form together with an integer point D with cube(D) = 0 exactly
    and T(D, D, .) not identically zero (so D is a smooth null point)."""
    while True:
        d = [rng.randint(-2, 2) for _ in range(n)]
        d[0] = 1
        entries = {}
        for key in sorted_triples(n):
            if key == (0, 0, 0):
                continue
            v = rng.randint(-hmax, hmax)
            if v:
                entries[key] = v
        partial = IntersectionForm(n, entries)
        # cube(D) is linear in the missing diagonal entry with unit coefficient
        # because d_0 = 1, so one integer choice lands D on the cubic exactly.
        entries[(0, 0, 0)] = -int(partial.cube(d))
        if entries[(0, 0, 0)] == 0:
            del entries[(0, 0, 0)]
        if not entries:
            continue
        form = IntersectionForm(n, entries)
        assert form.cube(d) == 0
        if form.numerical_dimension(d) >= 2:
            return form, tuple(d)


def unimodular_matrix(rng, n: int, steps: int = 3):
    """Product of integer shear operations: determinant exactly 1."""
    u = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        for k in range(n):
            u[i][k] += c * u[j][k]
    return tuple(tuple(row) for row in u)


def change_basis(form: IntersectionForm, u) -> IntersectionForm:
    """The same trilinear form written in the basis whose vectors are the
    columns of u."""
    n = form.rank
    cols = [tuple(u[i][a] for i in range(n)) for a in range(n)]
    entries = {}
    for a, b, c in sorted_triples(n):
        v = form.triple(cols[a], cols[b], cols[c])
        assert v.denominator == 1
        if v:
            entries[(a, b, c)] = int(v)
    return IntersectionForm(n, entries)


def transform_point(u_inv, point):
    """Coordinates of `point` in the new basis (columns of u)."""
    n = len(point)
    return tuple(
        sum(u_inv[a][i] * frac(point[i]) for i in range(n)) for a in range(n)
    )


def plant_nu1_fixture(rng, n: int, hmax: int):
    """(form, D, H): nu(D) = 1 exactly and T(D, H, H) != 0, in a scrambled
    integer basis."""
    while True:
        entries = {}
        for key in sorted_triples(n):
            if key[0] == 0 and key[1] == 0:
                continue  # keep T(e0, e0, .) identically zero
            v = rng.randint(-hmax, hmax)
            if v:
                entries[key] = v
        entries[(0, 1, 1)] = entries.get((0, 1, 1)) or 1
        base = IntersectionForm(n, entries)
        if base.numerical_dimension((1,) + (0,) * (n - 1)) != 1:
            continue
        u = unimodular_matrix(rng, n)
        form = change_basis(form=base, u=u)
        u_inv = mat_inv(u)
        d = transform_point(u_inv, (1,) + (0,) * (n - 1))
        assert all(x.denominator == 1 for x in d)
        d = tuple(int(x) for x in d)
        for _ in range(50):
            h = nonzero_vector(rng, n, 3)
            if form.triple(d, h, h) != 0:
                return form, d, h


def det3(m) -> Fraction:
    """Exact determinant of a 3x3 matrix of rationals."""
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def hessian_det(form: IntersectionForm, point) -> Fraction:
    """det [T(e_i, e_j, P)]_{ij} for a ternary cubic: up to the constant 216
    this is the Hessian determinant of the cubic evaluated at P."""
    assert form.rank == 3
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return det3(
        [[form.triple(basis[i], basis[j], point) for j in range(3)] for i in range(3)]
    )


def on_line(p, q, r) -> bool:
    """Whether r lies on the line spanned by p and q (all rank-2 minors of the
    3 x n coordinate matrix containing r vanish against p, q)."""
    rows = [[frac(x) for x in p], [frac(x) for x in q], [frac(x) for x in r]]
    n = len(rows[0])
    for cols in itertools.combinations(range(n), 3):
        m = [[rows[t][c] for c in cols] for t in range(3)]
        if det3(m) != 0:
            return False
    return True


def divisor_coords(x) -> tuple:
    if isinstance(x, Divisor):
        return tuple(x.coords)
    return tuple(frac(c) for c in x)
