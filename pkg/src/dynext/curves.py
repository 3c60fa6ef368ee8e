"""Parametrized rational curves: restriction-map linear algebra, liftability
obstructions, implicitization, and the end-to-end extension pipeline.

This is the second front door to the extension machinery: a self-map that
only exists through a parametrization enters here, and the lift (when the
restriction map reaches the pullbacks) replaces the coordinate-pullback
tuple handed to the inductive build.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import List, Optional, Sequence, Tuple

from .dynsys import ProjectiveVariety, Violation
from .errors import UsageError
from .extension import (AttemptRecord, ExtensionConfig, ExtensionResult,
                        Transcript, VerificationReport, build_psi, certify,
                        verify_with_alphas)
from .fields import Scalar
from .groebner import buchberger, is_projectively_empty
from .linalg import (LinearObstruction, LinearSolution, Matrix, rref,
                     solve_many)
from .poly import (GREVLEX, Monomial, PolyRing, Polynomial, block_elimination,
                   format_polynomial, monomials_of_degree)


def _common_degree(forms: Sequence[Polynomial]) -> int:
    degs = {f.degree() for f in forms}
    return degs.pop() if len(degs) == 1 else -1


def validate_parametrization(param_ring: PolyRing,
                             forms: Sequence[Polynomial]) -> List[Violation]:
    out: List[Violation] = []
    if param_ring.nvars != 2:
        return [Violation("param_ring", "parameter ring must have exactly 2 variables")]
    for f in forms:
        if f.ring != param_ring:
            return [Violation("ring", "parametrization form in a different ring")]
        if f.is_zero or not f.is_homogeneous():
            out.append(Violation("homogeneous", "parametrization forms must be "
                                 "nonzero and homogeneous", format_polynomial(f)))
    if out:
        return out
    if len(forms) < 2:
        return [Violation("arity", "a parametrization needs at least 2 forms")]
    e = _common_degree(forms)
    if e < 1:
        return [Violation("common_degree",
                          "parametrization forms must share a degree >= 1")]
    # base-point-freeness: the forms generate pure powers of both parameters
    if not is_projectively_empty(buchberger(list(forms))):
        out.append(Violation("base_point_free",
                             "the parametrization forms share a projective zero"))
    return out


def validate_curve_selfmap(param_ring: PolyRing, forms: Sequence[Polynomial],
                           q: int) -> List[Violation]:
    out: List[Violation] = []
    if q < 2:
        out.append(Violation("polarization_degree",
                             f"self-map degree q={q} violates q >= 2"))
    if len(forms) != 2:
        out.append(Violation("arity", "a curve self-map needs exactly 2 forms"))
        return out
    for f in forms:
        if f.ring != param_ring:
            return out + [Violation("ring", "self-map form in a different ring")]
        if f.is_zero or not f.is_homogeneous(q):
            out.append(Violation("map_degree",
                                 f"self-map forms must be homogeneous of degree {q}",
                                 format_polynomial(f)))
    if out:
        return out
    if not is_projectively_empty(buchberger(list(forms))):
        out.append(Violation("base_point_free",
                             "the self-map forms share a projective zero"))
    return out


class RationalCurve:
    """P^1 embedded by base-point-free forms of one common degree."""

    __slots__ = ("param_ring", "forms", "degree", "ambient_ring", "_variety")

    def __init__(self, param_ring: PolyRing, forms: Sequence[Polynomial],
                 ambient_ring: Optional[PolyRing] = None):
        bad = validate_parametrization(param_ring, forms)
        if bad:
            raise UsageError("; ".join(v.message for v in bad))
        self.param_ring = param_ring
        self.forms = tuple(forms)
        self.degree = self.forms[0].degree()
        if ambient_ring is None:
            ambient_ring = PolyRing(tuple(f"x{i}" for i in range(len(forms))),
                                    param_ring.field, GREVLEX)
        if ambient_ring.nvars != len(forms):
            raise UsageError("ambient ring size does not match the form count")
        if ambient_ring.field != param_ring.field:
            raise UsageError("ambient and parameter rings use different fields")
        self.ambient_ring = ambient_ring
        self._variety = None

    @property
    def ambient_dim(self) -> int:
        return self.ambient_ring.nvars - 1

    def variety(self) -> ProjectiveVariety:
        # per-instance cache; confine instances to one thread or guard
        if self._variety is None:
            self._variety = ProjectiveVariety(self.ambient_ring, implicitize(self))
        return self._variety

    def __repr__(self):
        return (f"RationalCurve(degree {self.degree} in P^{self.ambient_dim})")


class CurveSelfMap:
    """Degree-q self-map of P^1 given by two base-point-free forms."""

    __slots__ = ("param_ring", "forms", "q")

    def __init__(self, param_ring: PolyRing, forms: Sequence[Polynomial]):
        q = _common_degree(forms) if forms else -1
        bad = validate_curve_selfmap(param_ring, forms, q if q >= 1 else 0)
        if bad:
            raise UsageError("; ".join(v.message for v in bad))
        self.param_ring = param_ring
        self.forms = tuple(forms)
        self.q = q

    def iterate(self, r: int) -> Tuple[Polynomial, Polynomial]:
        if r < 1:
            raise UsageError("iterate exponent must be >= 1")
        current = self.forms
        for _ in range(r - 1):
            current = tuple(c.substitute(current) for c in self.forms)
        return current

    def __repr__(self):
        return f"CurveSelfMap(degree {self.q})"


def pullbacks(curve: RationalCurve, selfmap: CurveSelfMap, r: int) -> Tuple[Polynomial, ...]:
    """Parameter-space pullbacks of the coordinates under the r-th iterate."""
    if curve.param_ring != selfmap.param_ring:
        raise UsageError("curve and self-map use different parameter rings")
    composed = selfmap.iterate(r)
    return tuple(p.substitute(composed) for p in curve.forms)


def restriction_matrix(curve: RationalCurve, d: int):
    """Matrix of the evaluation of degree-d ambient forms along the curve.

    Returns (matrix, row monomials, column monomials): rows are labelled by
    the parameter monomials of degree e*d (descending), columns by the
    ambient monomials of degree d (descending); column j holds the
    coefficients of the j-th monomial restricted to the curve.
    """
    if d < 1:
        raise UsageError("degree must be >= 1")
    rows = monomials_of_degree(curve.param_ring, curve.degree * d)
    cols = monomials_of_degree(curve.ambient_ring, d)
    row_index = {m.exps: i for i, m in enumerate(rows)}
    zero = curve.param_ring.field.zero()
    data = [[zero] * len(cols) for _ in rows]
    for j, cm in enumerate(cols):
        img = curve.ambient_ring.monomial(cm.exps).substitute(curve.forms)
        for e, c in img._terms.items():
            data[row_index[e]][j] = c
    return Matrix(curve.param_ring.field, data), rows, cols


def image_profile(curve: RationalCurve, d: int):
    """(rank, reached, missing): the parameter monomials led by the reduced
    image basis of the degree-d restriction map, and the complement."""
    matrix, rows, _ = restriction_matrix(curve, d)
    red = rref(matrix.transpose())
    reached = [rows[c] for c in red.pivot_columns]
    missing = [rows[c] for c in range(len(rows)) if c not in set(red.pivot_columns)]
    return red.rank, reached, missing


@dataclass(frozen=True)
class Obstruction:
    """A parameter monomial invisible to the restriction map but present in
    the pullback: row zero in the restriction matrix, coefficient nonzero."""

    monomial: Monomial
    coefficient: Scalar


@dataclass(frozen=True)
class CoordinateLift:
    index: int
    liftable: bool
    lift: Optional[Polynomial]
    obstructions: Tuple[Obstruction, ...]
    certificate_row: Optional[int]  # inconsistent row of the reduced system


@dataclass(frozen=True)
class LiftReport:
    r: int
    degree: int                       # q^r
    liftable: bool
    lifts: Optional[Tuple[Polynomial, ...]]
    coordinates: Tuple[CoordinateLift, ...]
    rank: int
    image_monomials: Tuple[Monomial, ...]
    missing_monomials: Tuple[Monomial, ...]

    def obstruction_monomials(self) -> List[Monomial]:
        seen = []
        for c in self.coordinates:
            for ob in c.obstructions:
                if ob.monomial not in seen:
                    seen.append(ob.monomial)
        return seen


def liftability(curve: RationalCurve, selfmap: CurveSelfMap, r: int) -> LiftReport:
    """Decide whether the r-th iterate's pullbacks extend to ambient forms of
    degree q^r; produce either exact lifts or named obstructions."""
    if r < 1:
        raise UsageError("iterate exponent must be >= 1")
    d = selfmap.q ** r
    matrix, rows, cols = restriction_matrix(curve, d)
    pulls = pullbacks(curve, selfmap, r)
    targets = [[p.coefficient(m.exps) for m in rows] for p in pulls]
    outcomes = solve_many(matrix, targets)
    zero_rows = [i for i in range(matrix.rows)
                 if all(not x for x in matrix.data[i])]
    rank, reached, missing = image_profile(curve, d)
    coords: List[CoordinateLift] = []
    lifts: List[Polynomial] = []
    for i, (outcome, pull) in enumerate(zip(outcomes, pulls)):
        if isinstance(outcome, LinearSolution):
            lift = curve.ambient_ring.poly(
                {cols[j].exps: c for j, c in enumerate(outcome.particular) if c})
            if lift.substitute(curve.forms) != pull:
                raise AssertionError("lift does not restrict to the pullback")
            coords.append(CoordinateLift(i, True, lift, (), None))
            lifts.append(lift)
        else:
            assert isinstance(outcome, LinearObstruction)
            obs = tuple(Obstruction(rows[k], pull.coefficient(rows[k].exps))
                        for k in zero_rows if pull.coefficient(rows[k].exps))
            coords.append(CoordinateLift(i, False, None, obs, outcome.row))
    liftable = all(c.liftable for c in coords)
    return LiftReport(r=r, degree=d, liftable=liftable,
                      lifts=tuple(lifts) if liftable else None,
                      coordinates=tuple(coords), rank=rank,
                      image_monomials=tuple(reached),
                      missing_monomials=tuple(missing))


def implicitize(curve: RationalCurve) -> List[Polynomial]:
    """Defining equations of the embedded curve: eliminate the parameters
    from the graph ideal of the parametrization."""
    pr, ar = curve.param_ring, curve.ambient_ring
    graph = PolyRing(pr.names + ar.names, pr.field, block_elimination(pr.nvars))
    pad = (0,) * ar.nvars
    gens = []
    for i, p in enumerate(curve.forms):
        lifted = {m + pad: c for m, c in p._terms.items()}
        var = tuple(0 for _ in pr.names) + tuple(
            1 if j == i else 0 for j in range(ar.nvars))
        poly = Polynomial(graph, dict(lifted))
        gens.append(graph.monomial(var) - poly)
    from .groebner import elimination_ideal
    out = elimination_ideal(gens, pr.nvars)
    for f in out:
        if not f.is_homogeneous():
            raise AssertionError("implicitization produced a non-homogeneous form")
        if f.substitute(curve.forms):
            raise AssertionError("implicit equation does not vanish on the curve")
    return out


@dataclass(frozen=True)
class TrailEntry:
    r: int
    liftable: bool
    obstruction_monomials: Tuple[Monomial, ...]
    extended: bool
    note: str = ""


@dataclass
class CurveExtensionOutcome:
    result: Optional[ExtensionResult]
    trail: List[TrailEntry]
    variety: ProjectiveVariety
    transcript: Transcript

    @property
    def succeeded(self) -> bool:
        return self.result is not None


def end_to_end_extend(curve: RationalCurve, selfmap: CurveSelfMap,
                      config: ExtensionConfig = ExtensionConfig(),
                      variety: Optional[ProjectiveVariety] = None) -> CurveExtensionOutcome:
    """Implicitize, then walk r upward: record the lift obstruction at every
    non-liftable iterate and run the certified inductive build at the first
    liftable ones until an extension is certified."""
    if variety is None:
        variety = curve.variety()
    max_gen_degree = max(g.degree() for g in variety.generators)
    guaranteed = 1
    power = selfmap.q
    while power <= max_gen_degree:
        power *= selfmap.q
        guaranteed += 1
    rng = Random(config.seed)
    transcript = Transcript(seed=config.seed, guaranteed_r=guaranteed)
    trail: List[TrailEntry] = []
    if config.fixed_r is not None:
        iterates: Sequence[int] = [config.fixed_r]
    else:
        iterates = range(1, config.max_r + 1)
    for r in iterates:
        report = liftability(curve, selfmap, r)
        if not report.liftable:
            trail.append(TrailEntry(r, False,
                                    tuple(report.obstruction_monomials()), False,
                                    "pullbacks are outside the restriction image"))
            continue
        psi = build_psi(variety, report.lifts, r, config, rng, transcript)
        if psi is None:
            trail.append(TrailEntry(r, True, (), False,
                                    "inductive build exhausted its retry budget"))
            continue
        certificates = certify(variety, report.lifts, psi)
        if not certificates.all_ok:
            raise AssertionError("accepted tuple failed re-certification")
        result = ExtensionResult(r=r, psi=psi, alphas=report.lifts,
                                 certificates=certificates, transcript=transcript)
        trail.append(TrailEntry(r, True, (), True))
        return CurveExtensionOutcome(result, trail, variety, transcript)
    return CurveExtensionOutcome(None, trail, variety, transcript)


def verify_curve_extension(curve: RationalCurve, selfmap: CurveSelfMap,
                           variety: ProjectiveVariety,
                           result: ExtensionResult) -> VerificationReport:
    """From-scratch verification for parametrized-input results: recompute
    the lifts at the recorded iterate and replay all certificates plus the
    commuting-square identity."""
    report = liftability(curve, selfmap, result.r)
    if not report.liftable:
        raise UsageError("claimed iterate is not liftable on recomputation")
    return verify_with_alphas(variety, report.lifts, result, curve, selfmap)
