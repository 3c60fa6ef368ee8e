"""Polarized dynamical systems on embedded projective varieties.

A variety is presented by homogeneous generators of its full ideal; a
self-map enters as the tuple of degree-q forms giving the pullback of the
ambient coordinates.  Validation produces structured violation reports so
the CLI can show witnesses instead of stack traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (ArityError, IndeterminacyError, OffVarietyError,
                     UsageError)
from .fields import Field, Scalar
from .groebner import (GroebnerBasis, GradedPiece, affine_dimension,
                       buchberger, graded_piece, is_member,
                       is_projectively_empty, normal_form)
from .poly import PolyRing, Polynomial, format_polynomial


@dataclass(frozen=True)
class Violation:
    """One failed invariant with a human-readable witness."""

    code: str
    message: str
    witness: str = ""


def validate_variety(ring: PolyRing, generators: Sequence[Polynomial]) -> List[Violation]:
    out: List[Violation] = []
    if not generators:
        return [Violation("generators", "no ideal generators given")]
    for g in generators:
        if g.ring != ring:
            return [Violation("ring", "generator in a different ring",
                              format_polynomial(g))]
        if g.is_zero or not g.is_homogeneous() or g.degree() < 1:
            out.append(Violation(
                "homogeneous_generators",
                "ideal generators must be homogeneous of degree >= 1",
                format_polynomial(g)))
    if out:
        return out
    if is_projectively_empty(buchberger(list(generators))):
        out.append(Violation("nonempty", "the ideal defines the empty variety"))
    return out


class ProjectiveVariety:
    """Subvariety of P^m with its reduced Groebner basis cached."""

    __slots__ = ("ring", "generators", "groebner", "dim_g", "_pieces")

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial]):
        bad = validate_variety(ring, generators)
        if bad:
            raise UsageError("; ".join(v.message for v in bad))
        self.ring = ring
        self.generators = tuple(generators)
        self.groebner = buchberger(list(generators))
        self.dim_g = affine_dimension(self.groebner) - 1
        self._pieces: Dict[int, GradedPiece] = {}

    @property
    def ambient_dim(self) -> int:
        return self.ring.nvars - 1

    def graded_piece(self, n: int) -> GradedPiece:
        # cache is per-instance; confine instances to one thread or guard
        got = self._pieces.get(n)
        if got is None:
            got = graded_piece(self.groebner, n)
            self._pieces[n] = got
        return got

    def contains(self, point: "RationalPoint") -> bool:
        return all(not g.evaluate(point.coords) for g in self.generators)

    def __repr__(self):
        return (f"ProjectiveVariety(dim {self.dim_g} in P^{self.ambient_dim}, "
                f"{len(self.generators)} generators)")


@dataclass(frozen=True)
class PolarizedSystem:
    """(X, O(1), phi) with phi given by degree-q pullback forms."""

    variety: ProjectiveVariety
    q: int
    map_forms: Tuple[Polynomial, ...]

    @property
    def ring(self) -> PolyRing:
        return self.variety.ring


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...]
    system: Optional[PolarizedSystem]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_system(variety: ProjectiveVariety, q: int,
                    map_forms: Sequence[Polynomial]) -> ValidationReport:
    """Check every PolarizedSystem invariant; report all failures with
    witnesses rather than raising."""
    violations: List[Violation] = []
    ring = variety.ring
    if q < 2:
        violations.append(Violation("polarization_degree",
                                    f"polarization degree q={q} violates q >= 2"))
    if len(map_forms) != ring.nvars:
        violations.append(Violation(
            "arity", f"expected {ring.nvars} map forms, got {len(map_forms)}"))
        return ValidationReport(tuple(violations), None)
    for i, g in enumerate(map_forms):
        if g.ring != ring:
            violations.append(Violation("ring", f"map form {i} in a different ring"))
            return ValidationReport(tuple(violations), None)
        if g.is_zero or not g.is_homogeneous(q):
            violations.append(Violation(
                "map_degree",
                f"map form {i} is not homogeneous of degree {q}",
                format_polynomial(g)))
    if violations:
        return ValidationReport(tuple(violations), None)
    for f_k in variety.generators:
        composite = f_k.substitute(list(map_forms))
        nf = normal_form(composite, variety.groebner)
        if nf:
            violations.append(Violation(
                "invariance",
                "the map does not send the variety into itself",
                f"{format_polynomial(f_k)} pulls back to nonzero normal form "
                f"{format_polynomial(nf)}"))
    joint = buchberger(list(variety.generators) + list(map_forms))
    if not is_projectively_empty(joint):
        violations.append(Violation(
            "base_point_free",
            "the map forms share a zero on the variety",
            f"common locus has affine cone dimension {affine_dimension(joint)}"))
    if violations:
        return ValidationReport(tuple(violations), None)
    return ValidationReport((), PolarizedSystem(variety, q, tuple(map_forms)))


def iterate_pullback(sys: PolarizedSystem, r: int) -> Tuple[Polynomial, ...]:
    """Coordinate pullbacks of the r-th iterate, reduced modulo the variety
    ideal after each composition step to bound expression swell."""
    if r < 1:
        raise UsageError("iterate exponent must be >= 1")
    gb = sys.variety.groebner
    current = sys.map_forms
    for _ in range(r - 1):
        current = tuple(normal_form(g.substitute(current), gb)
                        for g in sys.map_forms)
    return current


class RationalPoint:
    """Projective point with canonical homogeneous coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: Field, coords: Sequence):
        vals = [field.of(c) for c in coords]
        if all(not v for v in vals):
            raise UsageError("projective point needs a nonzero coordinate")
        if field.is_rational:
            mult = lcm(*(v.denominator for v in vals))
            ints = [int(v * mult) for v in vals]
            content = gcd(*ints)
            ints = [x // content for x in ints]
            first = next(x for x in ints if x)
            if first < 0:
                ints = [-x for x in ints]
            vals = [Fraction(x) for x in ints]
        else:
            inv = next(v for v in vals if v).inverse()
            vals = [v * inv for v in vals]
        self.field = field
        self.coords = tuple(vals)

    def __eq__(self, other):
        return (isinstance(other, RationalPoint) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field, self.coords))

    def __str__(self):
        return ":".join(str(c) for c in self.coords)

    def __repr__(self):
        return f"RationalPoint({self})"


def evaluate_map(map_forms: Sequence[Polynomial], point: RationalPoint) -> RationalPoint:
    """Image of a point under the rational map given by the forms."""
    values = [g.evaluate(point.coords) for g in map_forms]
    if all(not v for v in values):
        raise IndeterminacyError(
            f"all map forms vanish at {point}; the map is undefined there")
    return RationalPoint(point.field, values)


@dataclass(frozen=True)
class OrbitReport:
    preperiodic: bool
    tail: int = 0
    cycle: int = 0
    steps: int = 0
    trajectory: Tuple[RationalPoint, ...] = ()

    def cycle_points(self) -> frozenset:
        if not self.preperiodic:
            return frozenset()
        return frozenset(self.trajectory[self.tail:self.tail + self.cycle])


def orbit_classify(sys: PolarizedSystem, point: RationalPoint,
                   max_steps: int) -> OrbitReport:
    """Iterate a rational point of X until its normalized form repeats."""
    if not sys.variety.contains(point):
        raise OffVarietyError(f"{point} does not lie on the variety")
    seen = {point: 0}
    path = [point]
    current = point
    for step in range(1, max_steps + 1):
        current = evaluate_map(sys.map_forms, current)
        if current in seen:
            first = seen[current]
            return OrbitReport(True, tail=first, cycle=step - first,
                               steps=step, trajectory=tuple(path))
        seen[current] = step
        path.append(current)
    return OrbitReport(False, steps=max_steps, trajectory=tuple(path))
