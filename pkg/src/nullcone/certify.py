"""The decision pipeline: from intersection data to a checkable certificate.

Rules are tried in a fixed order; the first applicable one decides the
conclusion.  Every numeric fact the conclusion relies on is recorded in the
trace as a named check that can be replayed from the raw input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .cubicchase import chase, inflection_test, residual_on_tangent, ternary_singular_point
from .cubicfactor import FactorKind, expand_cubic, factor_over_Q
from .exactmath import (
    canonical_vector,
    height,
    is_perfect_square,
    iter_kernel_primitives,
    iter_primitive_vectors,
    primitive_vector,
    spiral_key,
    vec,
    vec_dot,
)
from .nsring import Divisor, IntersectionForm, LinearClass, validate_input
from .quadpoints import (
    InsufficientPoints,
    IsotropyKind,
    QuadraticForm,
    SearchExhausted,
    is_isotropic,
    isotropic_vector,
    sample_points,
)

SCHEMA_VERSION = "1"


class Conclusion(str, Enum):
    CERTIFIED = "certified"
    INCONCLUSIVE = "inconclusive"
    INPUT_INCONSISTENT = "input_inconsistent"


RULE_NEFPSEF = "nefpsef_contrapositive"
RULE_C2_NU1 = "prop_c2_nu1"
RULE_C2_NONZERO = "prop_c2_nonzero"
RULE_MAIN_REDUCIBLE = "thm_main_reducible"
RULE_MAIN_IRREDUCIBLE = "thm_main_irreducible"
RULE_B4 = "cor_irreducible_b4"
RULE_B3 = "prop_b2_3"
RULE_B2_NULL = "prop_b2_2_null_rational"
RULE_B2_DOUBLE = "prop_b2_2_double_root"
RULE_NONE = "none"

CAVEAT_ASSUMED = (
    "positivity assumptions (nef, non-ample, ample, geometry) are taken as "
    "asserted and are not themselves verified"
)
CAVEAT_QFACTOR = (
    "irreducibility is certified over the rationals only; the cubic may "
    "factor over an extension field"
)

_FACTOR_CODES = {
    FactorKind.IRREDUCIBLE: 0,
    FactorKind.LINEAR_TIMES_QUADRIC: 1,
    FactorKind.THREE_LINEAR: 2,
    FactorKind.LINEAR_SQUARE_TIMES_LINEAR: 3,
    FactorKind.LINEAR_CUBE: 4,
}


@dataclass(frozen=True)
class Check:
    """One replayable numeric fact: op applied to operands gives value."""

    label: str
    op: str
    value: Fraction
    operands: tuple


@dataclass(frozen=True)
class Assumptions:
    d_is_nef_nonample: bool = True
    h_is_ample: bool = True
    x_is_calabi_yau: bool = True


@dataclass(frozen=True)
class Options:
    depth: int = 3
    budget: int = 500
    max_height: int = 1000
    seed: int = 0
    samples: int = 8
    max_directions: int = 5000


@dataclass
class Certificate:
    conclusion: Conclusion
    rule: str
    witnesses: dict[str, Divisor] = field(default_factory=dict)
    trace: list[Check] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    assumptions: Assumptions = field(default_factory=Assumptions)
    caveats: list[str] = field(default_factory=list)


def _as_divisor(x, name=None) -> Divisor:
    if isinstance(x, Divisor):
        return x if x.name == name or name is None else Divisor(x.coords, name)
    return Divisor(vec(x), name)


class _Pipeline:
    def __init__(self, form, c2, d, h, assumptions, options):
        self.form: IntersectionForm = form
        self.c2: LinearClass = c2
        self.d = _as_divisor(d, "D")
        self.h = _as_divisor(h, "H") if h is not None else None
        self.asm = assumptions or Assumptions()
        self.opts = options or Options()
        self.trace: list[Check] = []
        self.warnings: list[str] = []
        self.caveats: list[str] = [CAVEAT_ASSUMED]
        self.witnesses: dict[str, Divisor] = {"D": self.d}
        if self.h is not None:
            self.witnesses["H"] = self.h

    def check(self, label: str, op: str, value, *operands) -> Fraction:
        value = Fraction(value)
        self.trace.append(Check(label, op, value, tuple(operands)))
        return value

    def finish(self, conclusion: Conclusion, rule: str) -> Certificate:
        return Certificate(
            conclusion=conclusion,
            rule=rule,
            witnesses=self.witnesses,
            trace=self.trace,
            warnings=self.warnings,
            assumptions=self.asm,
            caveats=self.caveats,
        )

    # -- rule steps, in pipeline order ------------------------------------

    def run(self) -> Certificate:
        form, c2, d = self.form, self.c2, self.d
        if d.rank != form.rank:
            raise ValueError(f"divisor has {d.rank} coordinates, expected {form.rank}")
        if d.is_zero:
            raise ValueError("the distinguished divisor is zero")
        self.warnings.extend(
            validate_input(form, c2, nef=[d], ample=[self.h] if self.h is not None else [])
        )
        cube_d = self.check("cube(D)", "cube", form.cube(d), d.coords)
        if cube_d != 0:
            return self.finish(Conclusion.CERTIFIED, RULE_NEFPSEF)
        nu = form.numerical_dimension(d)
        self.check("nu(D)", "nu", nu, d.coords)
        if nu == 0:
            self.warnings.append(
                "D is numerically trivial (nu = 0); no nef non-ample divisor on the "
                "intended geometry can satisfy this"
            )
            return self.finish(Conclusion.INPUT_INCONSISTENT, RULE_NONE)
        if nu == 1:
            return self.finish(Conclusion.CERTIFIED, RULE_C2_NU1)
        c2d = self.check("c2(D)", "c2", c2.pair(d), d.coords)
        if c2d != 0:
            return self.finish(Conclusion.CERTIFIED, RULE_C2_NONZERO)
        rank = form.rank
        if rank >= 5:
            return self.rule_high_rank()
        if rank == 4:
            return self.rule_rank4()
        if rank == 3:
            return self.rule_rank3()
        if rank == 2:
            return self.rule_rank2()
        self.warnings.append(
            "rank-1 data cannot carry a nef non-ample class with zero cube"
        )
        return self.finish(Conclusion.INPUT_INCONSISTENT, RULE_NONE)

    def _factorization(self):
        cubic = expand_cubic(self.form)
        fac = factor_over_Q(cubic, self.opts.seed)
        self.check(
            "factor_kind", "factor_kind", _FACTOR_CODES[fac.kind], self.opts.seed
        )
        return fac

    def _chase_witness(self) -> Divisor | None:
        trace = chase(self.form, self.c2, self.d, self.opts.depth, self.opts.budget)
        if trace.witness is not None:
            self.witnesses["E"] = trace.witness
            self.check(
                "c2(E)", "c2", self.c2.pair(trace.witness), trace.witness.coords
            )
            self.check("cube(E)", "cube", self.form.cube(trace.witness), trace.witness.coords)
        return trace.witness

    def rule_high_rank(self) -> Certificate:
        fac = self._factorization()
        if fac.kind is FactorKind.IRREDUCIBLE:
            self.caveats.append(CAVEAT_QFACTOR)
            self._chase_witness()
            return self.finish(Conclusion.CERTIFIED, RULE_MAIN_IRREDUCIBLE)
        if fac.kind is FactorKind.LINEAR_TIMES_QUADRIC:
            return self._reducible_quadric(fac)
        self.warnings.append(
            f"the cubic splits into linear factors ({fac.kind.value}); no geometry "
            "with the asserted positivity has such a degenerate cubic"
        )
        return self.finish(Conclusion.INPUT_INCONSISTENT, RULE_NONE)

    def _reducible_quadric(self, fac) -> Certificate:
        form, c2 = self.form, self.c2
        lin = fac.linears[0]
        quad = fac.quadric
        verdict = is_isotropic(quad)
        if verdict.kind is IsotropyKind.DEGENERATE:
            for r in verdict.radical_basis:
                if form.numerical_dimension(r) == 1:
                    e = Divisor(r)
                    self.witnesses["E"] = e
                    self.check("nu(E)", "nu", 1, e.coords)
                    self.check("cube(E)", "cube", form.cube(e), e.coords)
                    return self.finish(Conclusion.CERTIFIED, RULE_C2_NU1)
            self.warnings.append(
                "the quadric factor is degenerate and no radical class has "
                "numerical dimension 1; the reducible criterion does not apply"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        if verdict.kind is IsotropyKind.ANISOTROPIC:
            if verdict.obstruction == "real":
                self.warnings.append(
                    "the quadric factor is definite; the null cone of the asserted "
                    "geometry cannot contain a definite quadric component"
                )
                return self.finish(Conclusion.INPUT_INCONSISTENT, RULE_NONE)
            self.warnings.append(
                "the quadric factor has no rational points (local obstruction at "
                f"{verdict.obstruction}); no rational class certifies the "
                "reducible criterion"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        try:
            base = isotropic_vector(quad, self.opts.max_height)
            samples = sample_points(
                quad,
                base.witness,
                self.opts.samples,
                avoid=[lin, tuple(c2.coords)],
                max_directions=self.opts.max_directions,
            )
        except (SearchExhausted, InsufficientPoints) as exc:
            self.warnings.append(f"constructive point search gave out: {exc}")
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        best = min(samples, key=lambda s: (height(s), spiral_key(canonical_vector(s))))
        e = Divisor(best)
        self.witnesses["E"] = e
        self.check(
            "Q(E)", "quad", quad.evaluate(e.coords), tuple(quad.gram), e.coords
        )
        self.check("L(E)", "dot", vec_dot(lin, e.coords), tuple(map(Fraction, lin)), e.coords)
        self.check("c2(E)", "c2", c2.pair(e), e.coords)
        self.check("cube(E)", "cube", self.form.cube(e), e.coords)
        return self.finish(Conclusion.CERTIFIED, RULE_MAIN_REDUCIBLE)

    def rule_rank4(self) -> Certificate:
        fac = self._factorization()
        if fac.kind is FactorKind.IRREDUCIBLE:
            self.caveats.append(CAVEAT_QFACTOR)
            self._chase_witness()
            return self.finish(Conclusion.CERTIFIED, RULE_B4)
        self.warnings.append(
            "the rank-4 criterion needs an irreducible cubic; this one factors "
            f"({fac.kind.value})"
        )
        return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)

    def rule_rank3(self) -> Certificate:
        form, c2, d = self.form, self.c2, self.d
        fac = self._factorization()
        if fac.kind is not FactorKind.IRREDUCIBLE:
            self.warnings.append(
                "the rank-3 criterion needs an irreducible cubic; this one factors "
                f"({fac.kind.value})"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        self.caveats.append(CAVEAT_QFACTOR)
        found = ternary_singular_point(form, self.opts.max_height)
        if found.point is not None:
            p = found.point
            self.witnesses["P"] = p
            self.check("cube(P)", "cube", form.cube(p), p.coords)
            self.check("nu(P)", "nu", form.numerical_dimension(p), p.coords)
            p_key = canonical_vector(p.coords)
            examined = 0
            for x in iter_primitive_vectors(form.rank):
                if x == p_key:
                    continue
                if examined >= self.opts.budget:
                    break
                examined += 1
                e = residual_on_tangent(form, p, Divisor(x))
                if e is None or canonical_vector(e.coords) == p_key:
                    continue
                if c2.pair(e) != 0:
                    self.witnesses["E"] = e
                    self.check("cube(E)", "cube", form.cube(e), e.coords)
                    self.check("c2(E)", "c2", c2.pair(e), e.coords)
                    return self.finish(Conclusion.CERTIFIED, RULE_B3)
            self.warnings.append(
                "the cubic is singular but no residual class through the singular "
                "point had nonzero c2 pairing within the budget"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        if not found.exhaustive:
            self.warnings.append(
                "the singular-point decision fell back to a bounded search and "
                "proved nothing; treating the cubic's smoothness as unknown"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        # smooth cubic: walk to the residual of the tangent line at D
        sq = form.square_class(d)
        d_key = canonical_vector(d.coords)
        direction = next(
            (x for x in iter_kernel_primitives([list(sq.coords)]) if x != d_key), None
        )
        if direction is None:
            self.warnings.append("no tangent direction at D exists in the lattice")
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        e = residual_on_tangent(form, d, Divisor(direction))
        if e is None:
            self.warnings.append(
                "the tangent line at D lies on the cubic, contradicting "
                "irreducibility; treating as inconclusive"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        if canonical_vector(e.coords) == d_key:
            self.check(
                "T(D,x,x)", "triple", form.triple(d, direction, direction),
                d.coords, tuple(map(Fraction, direction)), tuple(map(Fraction, direction)),
            )
            self.warnings.append(
                "D is an inflection point of the cubic: the tangent line returns "
                "to D and the residual construction degenerates"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        self.witnesses["E"] = e
        self.check("cube(E)", "cube", form.cube(e), e.coords)
        self.check(
            "T(D,D,E)", "triple", form.triple(d, d, e), d.coords, d.coords, e.coords
        )
        is_flex, g = inflection_test(form, e, d)
        self.witnesses["F"] = g
        val = self.check(
            "T(E,F,F)", "triple", form.triple(e, g, g), e.coords, g.coords, g.coords
        )
        if not is_flex:
            return self.finish(Conclusion.CERTIFIED, RULE_B3)
        self.warnings.append(
            "the residual class E is an inflection point: D, E and the tangent "
            "direction F satisfy T(D,D,E) = T(E,E,F) = T(E,F,F) = cube(E) = 0, "
            "the precise obstruction to the rank-3 criterion"
        )
        return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)

    def rule_rank2(self) -> Certificate:
        form, c2, d = self.form, self.c2, self.d
        d_key = canonical_vector(d.coords)
        basis = [(1, 0), (0, 1)]
        e0 = Divisor(next(b for b in basis if b != d_key))
        a = self.check(
            "cube(E0)", "cube", form.cube(e0), e0.coords
        )
        b = self.check(
            "T(E0,E0,D)", "triple", form.triple(e0, e0, d), e0.coords, e0.coords, d.coords
        )
        c = self.check(
            "T(E0,D,D)", "triple", form.triple(e0, d, d), e0.coords, d.coords, d.coords
        )
        rays: list[tuple[Fraction, Fraction]] = []
        disc = None
        if a == 0:
            rays.append((Fraction(1), Fraction(0)))
            if b != 0 or c != 0:
                rays.append((c, -b))
        else:
            disc = self.check("disc", "b2disc", 9 * b * b - 12 * a * c, e0.coords, d.coords)
            s = is_perfect_square(disc)
            if s is not None:
                self.check("sqrt(disc)", "b2disc_sqrt", s, e0.coords, d.coords)
                rays.append((-3 * b + s, 2 * a))
                rays.append((-3 * b - s, 2 * a))
        seen = set()
        for x, y in rays:
            if x == 0 and y == 0:
                continue
            coords = tuple(x * u + y * v for u, v in zip(e0.coords, d.coords))
            ray = primitive_vector(coords)
            key = canonical_vector(ray)
            if key in seen or key == d_key:
                continue
            seen.add(key)
            if c2.pair(ray) != 0:
                e = Divisor(ray)
                self.witnesses["E"] = e
                self.check("cube(E)", "cube", form.cube(e), e.coords)
                self.check("c2(E)", "c2", c2.pair(e), e.coords)
                return self.finish(Conclusion.CERTIFIED, RULE_B2_NULL)
        if a != 0 and disc == 0:
            dp_coords = tuple(
                -3 * b * u + 2 * a * v for u, v in zip(e0.coords, d.coords)
            )
            dp = Divisor(primitive_vector(dp_coords))
            self.witnesses["Dprime"] = dp
            self.check(
                "T(D',D',D)", "triple", form.triple(dp, dp, d), dp.coords, dp.coords, d.coords
            )
            self.check(
                "T(D',D',E0)", "triple", form.triple(dp, dp, e0),
                dp.coords, dp.coords, e0.coords,
            )
            nu_dp = form.numerical_dimension(dp)
            self.check("nu(D')", "nu", nu_dp, dp.coords)
            if nu_dp == 1:
                return self.finish(Conclusion.CERTIFIED, RULE_B2_DOUBLE)
            self.warnings.append(
                f"the double-root class has numerical dimension {nu_dp}, not 1; "
                "the degenerate-ray criterion does not apply"
            )
            return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)
        if disc is not None and is_perfect_square(disc) is None:
            self.warnings.append(
                "the restricted cubic has no rational null ray besides D "
                "(discriminant is not a rational square)"
            )
        else:
            self.warnings.append(
                "every rational null ray pairs to zero with c2; nothing certifies"
            )
        return self.finish(Conclusion.INCONCLUSIVE, RULE_NONE)


def certify(
    form: IntersectionForm,
    c2: LinearClass,
    d,
    h=None,
    assumptions: Assumptions | None = None,
    options: Options | None = None,
) -> Certificate:
    """Run the rule pipeline and produce a certificate with a replayable trace."""
    return _Pipeline(form, c2, d, h, assumptions, options).run()


def replay_check(form: IntersectionForm, c2: LinearClass, chk: Check) -> Fraction:
    """Recompute the value of a single trace check from the raw input."""
    op, args = chk.op, chk.operands
    if op == "cube":
        return form.cube(args[0])
    if op == "triple":
        return form.triple(args[0], args[1], args[2])
    if op == "c2":
        return c2.pair(args[0])
    if op == "nu":
        return Fraction(form.numerical_dimension(args[0]))
    if op == "dot":
        return vec_dot(args[0], args[1])
    if op == "quad":
        return QuadraticForm(args[0]).evaluate(args[1])
    if op == "b2disc":
        e0, d = args
        bb = form.triple(e0, e0, d)
        return 9 * bb * bb - 12 * form.cube(e0) * form.triple(e0, d, d)
    if op == "b2disc_sqrt":
        e0, d = args
        bb = form.triple(e0, e0, d)
        disc = 9 * bb * bb - 12 * form.cube(e0) * form.triple(e0, d, d)
        s = is_perfect_square(disc)
        if s is None:
            raise ValueError("discriminant is not a perfect square on replay")
        return s
    if op == "factor_kind":
        fac = factor_over_Q(expand_cubic(form), int(args[0]))
        return Fraction(_FACTOR_CODES[fac.kind])
    raise ValueError(f"unknown check op {op!r}")


def replay(form: IntersectionForm, c2: LinearClass, cert: Certificate) -> bool:
    """Re-evaluate every trace check; True when all recorded values match."""
    return all(replay_check(form, c2, chk) == chk.value for chk in cert.trace)
