"""Construction of ambient self-maps extending an iterate of a polarized system.

The inductive build accepts a candidate form for each coordinate only when
the accumulated forms cut the ambient cone down by exactly one dimension;
rejected candidates are repaired by adding a random scalar multiple of a
random ideal element of matching degree (sample-and-verify in place of a
component decomposition: unmixedness makes the per-step dimension equality
sufficient).  Success is certified from scratch before a result is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from random import Random
from typing import List, Optional, Sequence, Tuple, Union

from .dynsys import (PolarizedSystem, ProjectiveVariety, iterate_pullback,
                     validate_system)
from .errors import UsageError
from .fields import Scalar
from .groebner import (affine_dimension, buchberger, is_member,
                       is_projectively_empty)
from .linalg import Matrix, rref
from .poly import Polynomial, format_polynomial

_CONJUGATION_ATTEMPTS = 4


@dataclass(frozen=True)
class ExtensionConfig:
    """Search policy: r escalation bounds, retry budget, sampling bounds."""

    max_r: int = 8
    fixed_r: Optional[int] = None
    max_retries_per_step: int = 64
    coeff_bound: int = 10
    allow_conjugation: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.max_r < 1 or self.max_retries_per_step < 1 or self.coeff_bound < 1:
            raise UsageError("max_r, retry budget and coeff bound must be >= 1")
        if self.fixed_r is not None and self.fixed_r < 1:
            raise UsageError("fixed r must be >= 1")


@dataclass(frozen=True)
class CandidateRecord:
    step: int
    attempt: int                  # 0 is the unrepaired lift
    scale: Optional[str]          # sampled constant, None for attempt 0
    dimension: int
    expected: int

    @property
    def accepted(self) -> bool:
        return self.dimension == self.expected


@dataclass
class AttemptRecord:
    r: int
    degree: int
    ideal_piece_dim: int
    candidates: List[CandidateRecord]
    outcome: str = "pending"      # success | budget_exhausted
    blocking_step: Optional[int] = None

    def repairs(self) -> int:
        return sum(1 for c in self.candidates if c.attempt > 0)


@dataclass
class Transcript:
    seed: int
    guaranteed_r: Optional[int] = None
    attempts: List[AttemptRecord] = None
    conjugation_attempts: int = 0

    def __post_init__(self):
        if self.attempts is None:
            self.attempts = []


@dataclass(frozen=True)
class Certificates:
    compatibility: bool
    step_codimensions: Tuple[Tuple[int, int, int], ...]  # (step, expected, actual)
    projective_emptiness: bool
    degrees: bool

    @property
    def all_ok(self) -> bool:
        return (self.compatibility and self.projective_emptiness and self.degrees
                and all(e == a for _, e, a in self.step_codimensions))


@dataclass(frozen=True)
class ExtensionResult:
    """Certified extension: psi restricts to the r-th iterate on the variety."""

    r: int
    psi: Tuple[Polynomial, ...]
    alphas: Tuple[Polynomial, ...]
    certificates: Certificates
    transcript: Transcript
    conjugation: Optional[Tuple[Tuple[Scalar, ...], ...]] = None

    def __post_init__(self):
        if not self.certificates.all_ok:
            raise UsageError("refusing to construct an uncertified extension result")


@dataclass(frozen=True)
class ExtensionFailure:
    reason: str
    transcript: Transcript
    blocking_step: Optional[int] = None


ExtensionOutcome = Union[ExtensionResult, ExtensionFailure]


@dataclass(frozen=True)
class RSelection:
    start: int
    guaranteed: int  # least r with q^r strictly above every generator degree


def select_starting_r(sys: PolarizedSystem, config: ExtensionConfig = ExtensionConfig()) -> RSelection:
    """Opportunistic start (r=1, or the fixed policy value); the degree-bound
    threshold is reported so escalation has a recorded target."""
    max_deg = max(g.degree() for g in sys.variety.generators)
    guaranteed = 1
    power = sys.q
    while power <= max_deg:
        power *= sys.q
        guaranteed += 1
    return RSelection(config.fixed_r if config.fixed_r is not None else 1, guaranteed)


def _random_ideal_element(piece, bound: int, rng: Random, ring) -> Polynomial:
    acc = ring.zero()
    for b in piece.basis:
        c = ring.field.random_scalar(bound, rng)
        if c:
            acc = acc + b * c
    return acc


def build_psi(variety: ProjectiveVariety, alphas: Sequence[Polynomial], r: int,
              config: ExtensionConfig, rng: Random,
              transcript: Transcript) -> Optional[Tuple[Polynomial, ...]]:
    """One inductive build at a fixed iterate; returns the accepted tuple or
    None after the per-step budget is exhausted (details in the transcript)."""
    ring = variety.ring
    degree = alphas[0].homogeneous_degree()
    piece = variety.graded_piece(degree)
    record = AttemptRecord(r=r, degree=degree, ideal_piece_dim=piece.dimension,
                           candidates=[])
    transcript.attempts.append(record)
    quarter = max(1, config.max_retries_per_step // 4)
    chosen: List[Polynomial] = []
    for step, base in enumerate(alphas):
        expected = ring.nvars - (step + 1)
        accepted = None
        for attempt in range(config.max_retries_per_step + 1):
            if attempt == 0:
                candidate, scale_str = base, None
            else:
                if not piece.basis:
                    break  # nothing to repair with at this degree
                bound = config.coeff_bound << ((attempt - 1) // quarter)
                mixin = _random_ideal_element(piece, bound, rng, ring)
                scale = ring.field.random_scalar(bound, rng)
                if mixin and not is_member(mixin, variety.groebner):
                    raise AssertionError("sampled repair element left the ideal")
                candidate = base + mixin * scale
                scale_str = str(scale)
            if candidate.is_zero:
                dimension = ring.nvars
            else:
                dimension = affine_dimension(buchberger(chosen + [candidate]))
            record.candidates.append(CandidateRecord(
                step, attempt, scale_str, dimension, expected))
            if dimension == expected:
                accepted = candidate
                break
        if accepted is None:
            record.outcome = "budget_exhausted"
            record.blocking_step = step
            return None
        chosen.append(accepted)
    record.outcome = "success"
    return tuple(chosen)


def certify(variety: ProjectiveVariety, alphas: Sequence[Polynomial],
            psi: Sequence[Polynomial]) -> Certificates:
    """Recompute every certificate from scratch."""
    gb = variety.groebner
    compatibility = all(is_member(h - a, gb) for h, a in zip(psi, alphas))
    degree = alphas[0].homogeneous_degree()
    degrees = all(h and h.is_homogeneous(degree) for h in psi)
    steps = []
    for j in range(len(psi)):
        dim = affine_dimension(buchberger(list(psi[:j + 1])))
        steps.append((j, variety.ring.nvars - (j + 1), dim))
    emptiness = is_projectively_empty(buchberger(list(psi)))
    return Certificates(compatibility, tuple(steps), emptiness, degrees)


def extend(sys: PolarizedSystem, config: ExtensionConfig = ExtensionConfig()) -> ExtensionOutcome:
    """Search for a certified finite self-map of the ambient space extending
    an iterate of the system, escalating the iterate on failure."""
    rng = Random(config.seed)
    selection = select_starting_r(sys, config)
    transcript = Transcript(seed=config.seed, guaranteed_r=selection.guaranteed)
    outcome = _search(sys, config, rng, transcript)
    if isinstance(outcome, ExtensionResult) or not config.allow_conjugation:
        return outcome
    # conjugation fallback: retry on a random linear change of coordinates;
    # the output extends the conjugated iterate and is labelled with A
    for _ in range(_CONJUGATION_ATTEMPTS):
        transcript.conjugation_attempts += 1
        matrix = _random_invertible(sys.ring, rng, config.coeff_bound)
        conjugated = _conjugate_system(sys, matrix)
        result = _search(conjugated, config, rng, transcript)
        if isinstance(result, ExtensionResult):
            return replace(result, conjugation=tuple(tuple(row) for row in matrix.data))
    return ExtensionFailure("budget exhausted (conjugation fallback included)",
                            transcript)


def _search(sys: PolarizedSystem, config: ExtensionConfig, rng: Random,
            transcript: Transcript) -> ExtensionOutcome:
    if config.fixed_r is not None:
        iterates: Sequence[int] = [config.fixed_r]
    else:
        iterates = range(1, config.max_r + 1)
    for r in iterates:
        alphas = iterate_pullback(sys, r)
        psi = build_psi(sys.variety, alphas, r, config, rng, transcript)
        if psi is None:
            continue
        certificates = certify(sys.variety, alphas, psi)
        if not certificates.all_ok:
            raise AssertionError("accepted tuple failed re-certification")
        return ExtensionResult(r=r, psi=psi, alphas=alphas,
                               certificates=certificates, transcript=transcript)
    last = transcript.attempts[-1] if transcript.attempts else None
    return ExtensionFailure(
        "no certified extension within the iterate budget", transcript,
        blocking_step=last.blocking_step if last else None)


def _random_invertible(ring, rng: Random, bound: int) -> Matrix:
    n = ring.nvars
    while True:
        data = [[ring.field.random_scalar(bound, rng) for _ in range(n)]
                for _ in range(n)]
        m = Matrix(ring.field, data)
        if rref(m).rank == n:
            return m


def _inverse(m: Matrix) -> Matrix:
    n = m.rows
    aug = m.augment(Matrix.identity(m.field, n))
    red = rref(aug, pivot_limit=n)
    if red.rank != n:
        raise UsageError("matrix is singular")
    return Matrix(m.field, [row[n:] for row in red.matrix.data])


def _conjugate_system(sys: PolarizedSystem, matrix: Matrix) -> PolarizedSystem:
    ring = sys.ring
    inverse = _inverse(matrix)
    gens = ring.gens()
    inv_images = [sum((gens[l] * inverse.entry(k, l) for l in range(ring.nvars)),
                      ring.zero()) for k in range(ring.nvars)]
    new_gens = [f.substitute(inv_images) for f in sys.variety.generators]
    new_forms = []
    for i in range(ring.nvars):
        mixed = sum((sys.map_forms[j] * matrix.entry(i, j) for j in range(ring.nvars)),
                    ring.zero())
        new_forms.append(mixed.substitute(inv_images))
    variety = ProjectiveVariety(ring, new_gens)
    report = validate_system(variety, sys.q, new_forms)
    if not report.ok:
        raise AssertionError("conjugated system failed validation")
    return report.system


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[VerificationCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_names(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]


def verify_with_alphas(variety: ProjectiveVariety, alphas: Sequence[Polynomial],
                       result: ExtensionResult, parametrization=None,
                       selfmap=None) -> VerificationReport:
    """Replay every certificate from scratch against independently supplied
    reference pullbacks (and, when a parametrization is attached, replay the
    commuting-square identity exactly)."""
    certs = certify(variety, alphas, result.psi)
    checks = [
        VerificationCheck("compatibility", certs.compatibility,
                          "psi_i - alpha_i lies in the ideal for every i"),
        VerificationCheck("step_codimensions",
                          all(e == a for _, e, a in certs.step_codimensions),
                          "; ".join(f"step {j}: dim {a} (want {e})"
                                    for j, e, a in certs.step_codimensions)),
        VerificationCheck("projective_emptiness", certs.projective_emptiness,
                          "the coordinate forms have no common projective zero"),
        VerificationCheck("degrees", certs.degrees,
                          "each coordinate form is homogeneous of the iterate degree"),
    ]
    if parametrization is not None and selfmap is not None:
        composed = selfmap.forms
        for _ in range(result.r - 1):
            composed = tuple(c.substitute(composed) for c in selfmap.forms)
        expected = tuple(p.substitute(composed) for p in parametrization.forms)
        replay = all(h.substitute(parametrization.forms) == e
                     for h, e in zip(result.psi, expected))
        checks.append(VerificationCheck(
            "parametrization_replay", replay,
            "substituting the parametrization into psi reproduces the pullbacks"))
    return VerificationReport(tuple(checks))


def verify_extension(sys: PolarizedSystem, result: ExtensionResult,
                     parametrization=None, selfmap=None) -> VerificationReport:
    """Independent re-check of a result against the system it claims to extend."""
    if result.conjugation is not None:
        matrix = Matrix(sys.ring.field, [list(r) for r in result.conjugation])
        sys = _conjugate_system(sys, matrix)
        parametrization = selfmap = None  # replay identity holds pre-conjugation only
    alphas = iterate_pullback(sys, result.r)
    return verify_with_alphas(sys.variety, alphas, result, parametrization, selfmap)
