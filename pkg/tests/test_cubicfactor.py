"""Cubic factorization over the rationals."""

from fractions import Fraction
import random

import pytest

from nullcone.cubicfactor import (
    FactorKind,
    Factorization,
    expand_cubic,
    factor_over_Q,
    factor_quadratic_form,
    is_perfect_cube_linear,
)
from nullcone.exactmath import Poly, frac, poly_eval
from nullcone.nsring import IntersectionForm
from nullcone.quadpoints import QuadraticForm

from helpers import nonzero_vector, random_form, random_linear_poly, random_quadric_poly


def lin(coords):
    return Poly.linear([frac(c) for c in coords])


# ---------------------------------------------------------------------------
# expand_cubic


def test_expand_cubic_matches_cube_random():
    rng = random.Random(41)
    for _ in range(25):
        n = rng.randint(2, 5)
        form = random_form(rng, n, 5)
        poly = expand_cubic(form)
        assert poly.is_homogeneous(3)
        for _ in range(5):
            x = nonzero_vector(rng, n, 4)
            assert poly_eval(poly, x) == form.cube(x)


def test_expand_cubic_multiplicity_rule():
    # entry (0,0,1) contributes 3 x0^2 x1; entry (0,1,2) contributes 6 x0x1x2
    form = IntersectionForm(3, {(0, 0, 1): 1, (0, 1, 2): 1})
    poly = expand_cubic(form)
    assert poly.coeff((2, 1, 0)) == 3
    assert poly.coeff((1, 1, 1)) == 6


# ---------------------------------------------------------------------------
# factor_over_Q: each kind, with exact reconstruction


def test_factor_linear_times_quadric():
    n = 3
    f = lin([1, 1, 0]) * (
        Poly.variable(n, 0) ** 2 + Poly.variable(n, 1) ** 2 + Poly.variable(n, 2) ** 2
    )
    r = factor_over_Q(f)
    assert r.kind is FactorKind.LINEAR_TIMES_QUADRIC
    assert r.linears == ((1, 1, 0),)
    assert r.quadric is not None
    assert r.reconstruct(n) == f


def test_factor_three_distinct_linear_no_cube_coefficient():
    # 6 x0 x1 x2 has no x_i^3 monomial: exercises the shear fallback
    n = 3
    f = Poly.constant(n, frac(6))
    for i in range(n):
        f = f * Poly.variable(n, i)
    r = factor_over_Q(f)
    assert r.kind is FactorKind.THREE_LINEAR
    assert r.scalar == 6
    assert sorted(r.linears) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert r.reconstruct(n) == f


def test_factor_square_times_linear_orders_repeated_first():
    f = (lin([1, 1, 0]) ** 2) * lin([1, 0, -1])
    r = factor_over_Q(f)
    assert r.kind is FactorKind.LINEAR_SQUARE_TIMES_LINEAR
    assert r.linears[0] == r.linears[1] == (1, 1, 0)
    assert r.linears[2] == (1, 0, -1)
    assert r.reconstruct(3) == f


def test_factor_cube():
    f = lin([2, -1, 0]) ** 3
    r = factor_over_Q(f)
    assert r.kind is FactorKind.LINEAR_CUBE
    assert r.linears == ((2, -1, 0),) * 3
    assert r.reconstruct(3) == f


def test_factor_irreducible_diagonal():
    for diag in ([1, 1, 1], [1, 1, -2, 3], [1, 2, -3]):
        f = expand_cubic(IntersectionForm.diagonal(diag))
        r = factor_over_Q(f)
        assert r.kind is FactorKind.IRREDUCIBLE
        assert r.linears == () and r.quadric is None
        with pytest.raises(ValueError):
            r.reconstruct(len(diag))


def test_factor_scalar_handling():
    f = Poly.constant(2, frac(-4)) * (lin([1, 0]) ** 3)
    r = factor_over_Q(f)
    assert r.kind is FactorKind.LINEAR_CUBE
    assert r.scalar == -4
    assert r.reconstruct(2) == f


def test_factor_embedded_binary_cubic():
    # x0^3 + x1^3 inside three variables splits as L * Q
    f = Poly.variable(3, 0) ** 3 + Poly.variable(3, 1) ** 3
    r = factor_over_Q(f)
    assert r.kind is FactorKind.LINEAR_TIMES_QUADRIC
    assert r.linears == ((1, 1, 0),)
    assert r.reconstruct(3) == f


def test_factor_rejects_bad_input():
    with pytest.raises(ValueError):
        factor_over_Q(Poly.zero(3))
    with pytest.raises(ValueError):
        factor_over_Q(Poly.linear([1, 2, 3]))


def test_factor_seed_invariant_result():
    n = 4
    f = lin([1, 0, -1, 2]) * lin([0, 1, 1, 0]) * lin([1, 1, 0, -1])
    results = [factor_over_Q(f, seed=s) for s in range(6)]
    for r in results:
        assert r.kind is FactorKind.THREE_LINEAR
        assert r.reconstruct(n) == f
        assert r.linears == results[0].linears and r.scalar == results[0].scalar


def test_factor_random_products_roundtrip():
    rng = random.Random(43)
    for _ in range(30):
        n = rng.randint(3, 5)
        if rng.random() < 0.5:
            f = random_linear_poly(rng, n, 4) * random_quadric_poly(rng, n, 4)
        else:
            f = (
                random_linear_poly(rng, n, 3)
                * random_linear_poly(rng, n, 3)
                * random_linear_poly(rng, n, 3)
            )
        r = factor_over_Q(f)
        assert r.kind is not FactorKind.IRREDUCIBLE
        assert r.reconstruct(n) == f


# ---------------------------------------------------------------------------
# quadratic splitting


def test_factor_quadratic_form_split():
    q = QuadraticForm.from_diagonal([1, -1, 0])
    l1, l2, scalar = factor_quadratic_form(q)
    a = Poly.linear([frac(c) for c in l1])
    b = Poly.linear([frac(c) for c in l2])
    assert Poly.constant(3, scalar) * a * b == q.to_poly()


def test_factor_quadratic_form_rank1():
    q = QuadraticForm.from_diagonal([4, 0])
    l1, l2, scalar = factor_quadratic_form(q)
    assert l1 == l2 == (1, 0) and scalar == 4


def test_factor_quadratic_form_irreducible():
    assert factor_quadratic_form(QuadraticForm.from_diagonal([1, 1, 0])) is None
    assert factor_quadratic_form(QuadraticForm.from_diagonal([1, 1, -2])) is None
    with pytest.raises(ValueError):
        factor_quadratic_form(QuadraticForm.from_diagonal([0, 0]))


# ---------------------------------------------------------------------------
# perfect cube detection


def test_is_perfect_cube_linear():
    got = is_perfect_cube_linear(lin([1, -2, 3]) ** 3)
    assert got is not None
    l, scalar = got
    assert Poly.constant(3, scalar) * Poly.linear([frac(c) for c in l]) ** 3 == lin(
        [1, -2, 3]
    ) ** 3


def test_is_perfect_cube_linear_rejects():
    assert is_perfect_cube_linear(expand_cubic(IntersectionForm.diagonal([1, 1]))) is None
    assert is_perfect_cube_linear(Poly.linear([1, 2])) is None
    f = (lin([1, 1, 0]) ** 2) * lin([1, 0, -1])
    assert is_perfect_cube_linear(f) is None


def test_factorization_is_frozen():
    r = factor_over_Q(lin([1, 0]) ** 3)
    assert isinstance(r, Factorization)
    with pytest.raises(AttributeError):
        r.kind = FactorKind.IRREDUCIBLE
