"""Producing new null classes from old ones along rational lines.

A point on the cubic null cone, a tangent direction, and exact third-root
extraction give a new rational point; iterating this walk while watching the
c2 pairing either finds a class with nonzero pairing or reports precisely
which degeneracy stopped progress.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .cubicfactor import expand_cubic, factor_quadratic_form, is_perfect_cube_linear
from .exactmath import (
    Poly,
    canonical_vector,
    height,
    iter_kernel_primitives,
    iter_primitive_vectors,
    kernel_basis,
    primitive_vector,
    rational_roots,
    rref,
    spiral_key,
    vec,
)
from .nsring import Divisor, IntersectionForm, LinearClass
from .quadpoints import IsotropyKind, QuadraticForm, isotropic_vector, radical


def _as_divisor(d) -> Divisor:
    return d if isinstance(d, Divisor) else Divisor(vec(d))


def third_point_on_line(form: IntersectionForm, p1, p2) -> Divisor | None:
    """Third intersection of the cubic with the line through two null points.

    Returns None when the whole line lies on the cubic.  The output keeps the
    sign produced by the root formula (primitive, not sign-normalized).
    """
    a, b = _as_divisor(p1), _as_divisor(p2)
    if a.is_zero or b.is_zero:
        raise ValueError("line points must be nonzero")
    ca, cb = form.cube(a), form.cube(b)
    if ca != 0:
        raise ValueError(f"first point is not on the cubic: cube = {ca}")
    if cb != 0:
        raise ValueError(f"second point is not on the cubic: cube = {cb}")
    if canonical_vector(a.coords) == canonical_vector(b.coords):
        raise ValueError("points are projectively equal; no line is determined")
    c1 = 3 * form.triple(a, a, b)
    c2 = 3 * form.triple(a, b, b)
    if c1 == 0 and c2 == 0:
        return None
    pt = tuple(c2 * x - c1 * y for x, y in zip(a.coords, b.coords))
    out = Divisor(primitive_vector(pt))
    if form.cube(out) != 0:
        raise AssertionError("third point failed the null-cone check")
    return out


def residual_on_tangent(form: IntersectionForm, d, x) -> Divisor | None:
    """Residual intersection along a tangent direction at a null point.

    The line through d in direction x (with T(d,d,x) = 0) meets the cubic
    doubly at d; the remaining root is cube(x) * d - 3 T(d,x,x) * x.  Returns
    None when the whole line lies on the cubic."""
    dd, xx = _as_divisor(d), _as_divisor(x)
    if dd.is_zero or xx.is_zero:
        raise ValueError("point and direction must be nonzero")
    cd = form.cube(dd)
    if cd != 0:
        raise ValueError(f"base point is not on the cubic: cube = {cd}")
    tangency = form.triple(dd, dd, xx)
    if tangency != 0:
        raise ValueError(f"direction is not tangent: T(d,d,x) = {tangency}")
    if canonical_vector(dd.coords) == canonical_vector(xx.coords):
        raise ValueError("direction is parallel to the base point")
    a = form.cube(xx)
    b = form.triple(dd, xx, xx)
    if a == 0 and b == 0:
        return None
    pt = tuple(a * u - 3 * b * v for u, v in zip(dd.coords, xx.coords))
    out = Divisor(primitive_vector(pt))
    if form.cube(out) != 0:
        raise AssertionError("residual point failed the null-cone check")
    return out


class Degeneracy(str, Enum):
    LINE_CONTAINED = "line_contained"
    SECTION_IS_PERFECT_CUBE = "section_is_perfect_cube"
    POINT_SINGULAR = "point_singular"


@dataclass(frozen=True)
class ChaseEdge:
    source: Divisor
    direction: Divisor
    target: Divisor


@dataclass
class ChaseTrace:
    visited: list[Divisor] = field(default_factory=list)
    edges: list[ChaseEdge] = field(default_factory=list)
    degeneracies: list[tuple[Degeneracy, Divisor]] = field(default_factory=list)
    witness: Divisor | None = None


def _tangent_section(form: IntersectionForm, p: Divisor, sq: LinearClass) -> Poly:
    """The cubic restricted to the tangent hyperplane at p, in kernel coordinates."""
    basis = kernel_basis([list(sq.coords)])
    m = len(basis)
    f = expand_cubic(form)
    images = [
        Poly(m, {tuple(int(r == j) for r in range(m)): Fraction(bv[i])
                 for j, bv in enumerate(basis) if bv[i]})
        for i in range(form.rank)
    ]
    return f.substitute(images)


def chase(
    form: IntersectionForm,
    c2: LinearClass,
    d,
    depth: int = 3,
    budget: int = 500,
) -> ChaseTrace:
    """Breadth-first walk on rational null points along tangent residuals.

    Stops at the first visited class with nonzero c2 pairing (the witness).
    Directions at each point are the primitive vectors of the tangent-plane
    lattice in (height, spiral) order, at most `budget` per point; `depth`
    bounds the number of expansion levels.
    """
    start = _as_divisor(d)
    if start.is_zero:
        raise ValueError("start point must be nonzero")
    c = form.cube(start)
    if c != 0:
        raise ValueError(f"start point is not on the cubic: cube = {c}")
    if depth < 1 or budget < 1:
        raise ValueError("depth and budget must be positive")
    trace = ChaseTrace()
    trace.visited.append(start)
    seen = {canonical_vector(start.coords)}
    queue: deque[tuple[Divisor, int]] = deque([(start, 0)])
    if c2.pair(start) != 0:
        trace.witness = start
        return trace
    while queue:
        point, level = queue.popleft()
        if level >= depth:
            continue
        sq = form.square_class(point)
        if sq.is_zero:
            trace.degeneracies.append((Degeneracy.POINT_SINGULAR, point))
            continue
        point_key = canonical_vector(point.coords)
        examined = 0
        productive = False
        for x in iter_kernel_primitives([list(sq.coords)]):
            if x == point_key:
                continue
            if examined >= budget:
                break
            examined += 1
            direction = Divisor(x)
            residual = residual_on_tangent(form, point, direction)
            if residual is None:
                trace.degeneracies.append((Degeneracy.LINE_CONTAINED, point))
                continue
            res_key = canonical_vector(residual.coords)
            if res_key == point_key:
                continue
            productive = True
            trace.edges.append(ChaseEdge(point, direction, residual))
            if res_key not in seen:
                seen.add(res_key)
                trace.visited.append(residual)
                queue.append((residual, level + 1))
                if c2.pair(residual) != 0:
                    trace.witness = residual
                    return trace
        if examined and not productive:
            section = _tangent_section(form, point, sq)
            if is_perfect_cube_linear(section) is not None:
                trace.degeneracies.append((Degeneracy.SECTION_IS_PERFECT_CUBE, point))
    return trace


def is_singular_at(form: IntersectionForm, p) -> bool:
    """Whether the null point p is singular on the cubic (gradient vanishes)."""
    pp = _as_divisor(p)
    c = form.cube(pp)
    if c != 0:
        raise ValueError(f"point is not on the cubic: cube = {c}")
    return form.square_class(pp).is_zero


def inflection_test(form: IntersectionForm, e, d=None) -> tuple[bool, Divisor]:
    """Whether the smooth null point e is a flex of the plane cubic (rank 3).

    Returns (is_flex, g) where g spans the tangent line at e together with e;
    e is a flex exactly when T(e, g, g) = 0, independent of the choice of g.
    When d is given, g is kept outside the span of d and e if possible.
    """
    if form.rank != 3:
        raise ValueError("the tangent-line test is specific to rank 3")
    ee = _as_divisor(e)
    if ee.is_zero:
        raise ValueError("point must be nonzero")
    c = form.cube(ee)
    if c != 0:
        raise ValueError(f"point is not on the cubic: cube = {c}")
    sq = form.square_class(ee)
    if sq.is_zero:
        raise ValueError("point is singular; the flex test needs a smooth point")
    kb = kernel_basis([list(sq.coords)])
    e_key = canonical_vector(ee.coords)
    candidates = [b for b in kb]
    if len(kb) == 2:
        candidates.append(canonical_vector([u + v for u, v in zip(kb[0], kb[1])]))
        candidates.append(canonical_vector([u - v for u, v in zip(kb[0], kb[1])]))
    candidates = [g for g in candidates if g != e_key]
    if not candidates:
        raise AssertionError("tangent plane collapsed onto the point itself")
    chosen = candidates[0]
    if d is not None:
        dd = _as_divisor(d)
        for g in candidates:
            rows = [list(dd.coords), list(ee.coords), [Fraction(x) for x in g]]
            if len(rref(rows)[1]) == 3:
                chosen = g
                break
    val = form.triple(ee, chosen, chosen)
    return val == 0, Divisor(chosen)


# ---------------------------------------------------------------------------
# singular points of ternary cubics: a complete decision procedure


@dataclass(frozen=True)
class SingularPointSearch:
    """Outcome of the singular-point decision.

    exhaustive=True means the answer is proved (point found, or none exists
    over the rationals); exhaustive=False is a bounded-search fallback that
    found nothing but proves nothing."""

    point: Divisor | None
    exhaustive: bool


def _gradient_quadrics(form: IntersectionForm) -> list[QuadraticForm]:
    n = form.rank
    basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    out = []
    for i in range(n):
        gram = tuple(
            tuple(form.triple(basis[a], basis[b], basis[i]) for b in range(n))
            for a in range(n)
        )
        q = QuadraticForm(gram)
        if not q.is_zero:
            out.append(q)
    return out


def _describe_zero_set(q: QuadraticForm):
    """Classify the rational zero set of a nonzero ternary quadric.

    Returns one of ('empty',), ('point', pt), ('lines', (l1, l2)) with the
    l_i linear forms cutting the lines, or ('conic', witness_point)."""
    split = factor_quadratic_form(q)
    if split is not None:
        l1, l2, _ = split
        return ("lines", (l1, l2))
    rad = radical(q)
    if len(rad) == 1:
        # irreducible of rank 2: the only rational zero is the radical point
        return ("point", rad[0])
    verdict = isotropic_vector(q)
    if verdict.kind is IsotropyKind.ANISOTROPIC:
        return ("empty",)
    if verdict.kind is IsotropyKind.ISOTROPIC:
        return ("conic", verdict.witness)
    raise AssertionError("unexpected degeneracy after radical handling")


def _line_candidates(l: tuple[int, ...], quadrics: list[QuadraticForm]):
    """Points of the line {l = 0} where all quadrics can vanish.

    Returns ('whole', first_point) when every quadric vanishes on the line,
    else ('points', candidates)."""
    v1, v2 = kernel_basis([list(l)])
    restrictions = []
    for q in quadrics:
        a = q.evaluate(v1)
        b = q.bilinear(v1, v2)
        c = q.evaluate(v2)
        restrictions.append((a, b, c))
    live = next(((a, b, c) for a, b, c in restrictions if (a, b, c) != (0, 0, 0)), None)
    if live is None:
        first = next(iter_kernel_primitives([list(l)]))
        return ("whole", first)
    a, b, c = live
    candidates = []
    for r in rational_roots([a, 2 * b, c]):
        candidates.append(primitive_vector([r * u + v for u, v in zip(v1, v2)]))
    if a == 0:
        candidates.append(tuple(v1))
    return ("points", candidates)


def _sylvester_resultant(q1: QuadraticForm, q2: QuadraticForm) -> Poly:
    """Resultant in the last variable of two ternary quadrics, as a binary form."""

    def coeff_polys(q: QuadraticForm) -> list[Poly]:
        g = q.gram
        c2 = Poly(2, {(0, 0): g[2][2]})
        c1 = Poly(2, {(1, 0): 2 * g[0][2], (0, 1): 2 * g[1][2]})
        c0 = Poly(2, {(2, 0): g[0][0], (1, 1): 2 * g[0][1], (0, 2): g[1][1]})
        polys = [c2, c1, c0]
        while polys and polys[0].is_zero:
            polys.pop(0)
        return polys

    a = coeff_polys(q1)
    b = coeff_polys(q2)
    da, db = len(a) - 1, len(b) - 1
    if da < 1 or db < 1:
        raise AssertionError("rank-3 quadric must involve the eliminated variable")
    size = da + db
    rows: list[list[Poly]] = []
    zero = Poly.zero(2)
    for i in range(db):
        rows.append([zero] * i + a + [zero] * (size - da - 1 - i))
    for i in range(da):
        rows.append([zero] * i + b + [zero] * (size - db - 1 - i))

    def det(m: list[list[Poly]]) -> Poly:
        if len(m) == 1:
            return m[0][0]
        total = Poly.zero(2)
        for j, entry in enumerate(m[0]):
            if entry.is_zero:
                continue
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            term = entry * det(minor)
            total = total + term if j % 2 == 0 else total - term
        return total

    return det(rows)


def _conic_pair_candidates(qa: QuadraticForm, qb: QuadraticForm) -> list[tuple[int, ...]]:
    res = _sylvester_resultant(qa, qb)
    if res.is_zero:
        return []
    max_x = max(e[0] for e in res.terms)
    coeffs = [
        sum((c for e, c in res.terms.items() if e[0] == k), Fraction(0))
        for k in range(max_x, -1, -1)
    ]
    rays: list[tuple[Fraction, Fraction]] = []
    if any(c != 0 for c in coeffs):
        for r in sorted(set(rational_roots(coeffs))):
            rays.append((r, Fraction(1)))
    if res.evaluate((1, 0)) == 0:
        rays.append((Fraction(1), Fraction(0)))
    candidates: list[tuple[int, ...]] = [(0, 0, 1)]
    for x0, y0 in rays:
        for q in (qa, qb):
            spec = [
                q.gram[2][2],
                2 * (q.gram[0][2] * x0 + q.gram[1][2] * y0),
                q.evaluate((x0, y0, 0)),
            ]
            if all(c == 0 for c in spec):
                continue
            for z in rational_roots(spec):
                candidates.append(primitive_vector((x0, y0, z)))
            break
    return candidates


def ternary_singular_point(form: IntersectionForm, height_bound: int = 1000) -> SingularPointSearch:
    """Find a rational singular point of a ternary cubic, or prove none exists.

    The singular locus is the common rational zero set of the three gradient
    quadrics; each nonzero quadric's zeros form an empty set, a point, one or
    two lines, or a conic, and every combination is decided exactly."""
    if form.rank != 3:
        raise ValueError("singular-point search is specific to rank 3")
    quadrics = _gradient_quadrics(form)
    if not quadrics:
        raise ValueError("the cubic is identically zero")

    def verified(points) -> Divisor | None:
        good = []
        for p in points:
            key = canonical_vector(p)
            if all(q.evaluate(key) == 0 for q in quadrics):
                good.append(key)
        if not good:
            return None
        best = min(set(good), key=lambda v: (height(v), spiral_key(v)))
        return Divisor(best)

    descriptions = [_describe_zero_set(q) for q in quadrics]
    if any(d[0] == "empty" for d in descriptions):
        return SingularPointSearch(None, True)
    for d in descriptions:
        if d[0] == "point":
            return SingularPointSearch(verified([d[1]]), True)
    for d in descriptions:
        if d[0] == "lines":
            candidates: list[tuple[int, ...]] = []
            for l in dict.fromkeys(d[1]):
                kind, payload = _line_candidates(l, quadrics)
                if kind == "whole":
                    return SingularPointSearch(verified([payload]), True)
                candidates.extend(payload)
            return SingularPointSearch(verified(candidates), True)
    # every gradient quadric is an irreducible conic with rational points
    keys = {}
    for q, d in zip(quadrics, descriptions):
        flat = canonical_vector([x for row in q.gram for x in row])
        keys.setdefault(flat, (q, d))
    distinct = list(keys.values())
    if len(distinct) == 1:
        return SingularPointSearch(verified([distinct[0][1][1]]), True)
    qa, qb = distinct[0][0], distinct[1][0]
    candidates = _conic_pair_candidates(qa, qb)
    if candidates:
        return SingularPointSearch(verified(candidates), True)
    # defensive fallback: the resultant vanished identically (not expected
    # for distinct irreducible conics); search a bounded box
    for v in iter_primitive_vectors(3, max_height=min(height_bound, 30)):
        if all(q.evaluate(v) == 0 for q in quadrics):
            return SingularPointSearch(Divisor(v), False)
    return SingularPointSearch(None, False)
