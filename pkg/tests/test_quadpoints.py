"""Quadratic forms: local-global decisions and rational point machinery."""

from fractions import Fraction
import random

import pytest

from nullcone.exactmath import vec_dot
from nullcone.quadpoints import (
    InsufficientPoints,
    IsotropyKind,
    QuadraticForm,
    SearchExhausted,
    diagonalize,
    factorint,
    hilbert_symbol,
    is_isotropic,
    isotropic_vector,
    radical,
    sample_points,
    second_intersection,
    squarefree_part,
    squarefree_split,
)


# ---------------------------------------------------------------------------
# integer factorization helpers


def test_factorint_small_and_composite():
    assert factorint(1) == {}
    assert factorint(2) == {2: 1}
    assert factorint(360) == {2: 3, 3: 2, 5: 1}
    assert factorint(97) == {97: 1}
    # a product of two larger primes exercises the rho path
    assert factorint(10007 * 10009) == {10007: 1, 10009: 1}


def test_factorint_random_roundtrip():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(2, 10**7)
        fac = factorint(n)
        prod = 1
        for p, e in fac.items():
            prod *= p**e
        assert prod == n


def test_squarefree_split():
    assert squarefree_split(360) == (10, 6)
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(49) == (1, 7)
    assert squarefree_part(-50) == -2
    assert squarefree_part(7) == 7


# ---------------------------------------------------------------------------
# Hilbert symbol


def test_hilbert_symbol_known_values():
    assert hilbert_symbol(-1, -1, "real") == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(2, 3, 2) == -1
    assert hilbert_symbol(5, 5, 5) == 1
    assert hilbert_symbol(3, 5, 5) == -1  # 3 is not a square mod 5
    assert hilbert_symbol(1, 7, 7) == 1


def test_hilbert_symbol_rejects_bad_input():
    with pytest.raises(ValueError):
        hilbert_symbol(0, 3, 2)
    with pytest.raises(ValueError):
        hilbert_symbol(2, 3, 9)  # not a prime place


def test_hilbert_symbol_symmetric_and_bimultiplicative():
    rng = random.Random(29)
    places = ["real", 2, 3, 5, 7, 11]
    for _ in range(40):
        a = rng.choice([x for x in range(-30, 31) if x])
        b = rng.choice([x for x in range(-30, 31) if x])
        c = rng.choice([x for x in range(-30, 31) if x])
        for p in places:
            assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
            assert hilbert_symbol(a * c * c, b, p) == hilbert_symbol(a, b, p)
            assert (
                hilbert_symbol(a * b, c, p)
                == hilbert_symbol(a, c, p) * hilbert_symbol(b, c, p)
            )


def test_hilbert_symbol_squares_are_trivial():
    for p in ("real", 2, 3, 13):
        assert hilbert_symbol(4, -7, p) == 1 or p != "real"
        assert hilbert_symbol(9, 5, p) == 1
        assert hilbert_symbol(1, -11, p) == 1


# ---------------------------------------------------------------------------
# diagonalization


def test_diagonalize_congruence_random():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(2, 5)
        gram = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                gram[i][j] = gram[j][i] = rng.randint(-6, 6)
        q = QuadraticForm(tuple(tuple(Fraction(x) for x in row) for row in gram))
        if q.is_zero:
            continue
        p, diag = diagonalize(q)
        cols = [tuple(p[i][k] for i in range(n)) for k in range(n)]
        for k, col in enumerate(cols):
            assert q.evaluate(col) == diag[k]
        for a in range(n):
            for b in range(a + 1, n):
                assert q.bilinear(cols[a], cols[b]) == 0


def test_diagonalize_zero_diagonal_path():
    # hyperbolic plane: all diagonal entries zero
    q = QuadraticForm(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))
    p, diag = diagonalize(q)
    assert sorted(x > 0 for x in diag) == [False, True]


def test_radical():
    q = QuadraticForm.from_diagonal([1, 1, 0])
    assert radical(q) == [(0, 0, 1)]
    assert radical(QuadraticForm.from_diagonal([1, -1])) == []


# ---------------------------------------------------------------------------
# isotropy verdicts


def test_isotropy_known_ternaries():
    # x^2 + y^2 - 2 z^2 has the obvious zero (1, 1, 1)
    v = is_isotropic(QuadraticForm.from_diagonal([1, 1, -2]))
    assert v.kind is IsotropyKind.ISOTROPIC
    # x^2 + y^2 - 3 z^2 fails at 3 (and 2)
    v = is_isotropic(QuadraticForm.from_diagonal([1, 1, -3]))
    assert v.kind is IsotropyKind.ANISOTROPIC
    assert v.obstruction in (2, 3)
    # definite
    v = is_isotropic(QuadraticForm.from_diagonal([2, 3, 5]))
    assert v.kind is IsotropyKind.ANISOTROPIC
    assert v.obstruction == "real"
    # 13 x^2 + 37 y^2 - 61 z^2: obstruction at an odd prime
    v = is_isotropic(QuadraticForm.from_diagonal([13, 37, -61]))
    assert v.kind is IsotropyKind.ANISOTROPIC
    assert v.obstruction == 13


def test_isotropy_rank4_indefinite_but_anisotropic():
    # x^2 + y^2 + z^2 - 7 w^2 is indefinite yet has no rational zero:
    # 7 is not a sum of three rational squares (obstruction at 2)
    v = is_isotropic(QuadraticForm.from_diagonal([1, 1, 1, -7]))
    assert v.kind is IsotropyKind.ANISOTROPIC
    assert v.obstruction == 2


def test_isotropy_rank5_indefinite_always_isotropic():
    q = QuadraticForm.from_diagonal([1, 1, 1, 1, -7])
    assert is_isotropic(q).kind is IsotropyKind.ISOTROPIC
    v = isotropic_vector(q)
    assert v.kind is IsotropyKind.ISOTROPIC
    assert q.evaluate(v.witness) == 0


def test_isotropy_degenerate_reports_radical():
    v = is_isotropic(QuadraticForm.from_diagonal([1, 1, 0]))
    assert v.kind is IsotropyKind.DEGENERATE
    assert v.radical_basis == ((0, 0, 1),)


def test_isotropy_zero_form_raises():
    with pytest.raises(ValueError):
        is_isotropic(QuadraticForm.from_diagonal([0, 0]))


def test_isotropic_vector_verified_random():
    rng = random.Random(37)
    found = 0
    while found < 25:
        n = rng.randint(3, 5)
        diag = [rng.choice([x for x in range(-12, 13) if x]) for _ in range(n)]
        if all(d > 0 for d in diag) or all(d < 0 for d in diag):
            continue
        q = QuadraticForm.from_diagonal(diag)
        verdict = is_isotropic(q)
        if verdict.kind is not IsotropyKind.ISOTROPIC:
            continue
        w = isotropic_vector(q).witness
        assert w is not None and any(w)
        assert q.evaluate(w) == 0
        found += 1


def test_isotropic_vector_on_anisotropic_returns_verdict():
    q = QuadraticForm.from_diagonal([1, 1, -3])
    v = isotropic_vector(q)
    assert v.kind is IsotropyKind.ANISOTROPIC and v.witness is None


def test_nondiagonal_isotropic():
    # 2 x y: zero at (1, 0)
    q = QuadraticForm(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))
    v = isotropic_vector(q)
    assert v.kind is IsotropyKind.ISOTROPIC
    assert v.witness is not None and q.evaluate(v.witness) == 0


# ---------------------------------------------------------------------------
# secant construction


def test_second_intersection_basic():
    q = QuadraticForm.from_diagonal([1, -1, 0])
    r = second_intersection(q, (1, 1, 0), (1, 0, 0))
    assert r.point == (-1, 1, 0) and r.tangent is False
    assert q.evaluate(r.point) == 0


def test_second_intersection_tangent_flag():
    q = QuadraticForm.from_diagonal([1, 1, -2])
    r = second_intersection(q, (1, 1, 1), (2, 0, 1))
    assert r.tangent is True
    assert r.point == (1, 1, 1)


def test_second_intersection_line_contained():
    q = QuadraticForm.from_diagonal([1, -1, 0])
    assert second_intersection(q, (1, 1, 0), (0, 0, 1)) is None


def test_second_intersection_errors():
    q = QuadraticForm.from_diagonal([1, -1, 0])
    with pytest.raises(ValueError):
        second_intersection(q, (1, 1, 0), (2, 2, 0))  # parallel direction
    with pytest.raises(ValueError):
        second_intersection(q, (1, 0, 0), (0, 1, 0))  # base off the quadric
    with pytest.raises(ValueError):
        second_intersection(q, (0, 0, 0), (1, 0, 0))


def test_sample_points_properties():
    q = QuadraticForm.from_diagonal([1, 1, -2])
    avoid = [(1, 0, 0), (0, 1, 1)]
    pts = sample_points(q, (1, 1, 1), 6, avoid=avoid)
    assert len(pts) == 6
    assert len(set(pts)) == 6  # distinct canonical classes
    for p in pts:
        assert q.evaluate(p) == 0
        for a in avoid:
            assert vec_dot(a, p) != 0


def test_sample_points_insufficient():
    # rank-2 isotropic form has only two rational null rays; asking for five
    # distinct classes must fail with a precise count
    q = QuadraticForm.from_diagonal([1, -1])
    with pytest.raises(InsufficientPoints):
        sample_points(q, (1, 1), 5, max_directions=50)


def test_search_exhausted_is_raisable():
    with pytest.raises(SearchExhausted):
        raise SearchExhausted("marker")
