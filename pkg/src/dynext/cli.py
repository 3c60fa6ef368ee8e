"""Command-line interface.

Exit codes are a stable contract: 0 success, 2 semantic/validation failure,
3 construction failure within budget, 4 parse error.  With --machine every
command emits line-oriented key=value records; output is byte-identical for
identical (file, flags, seed).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .curves import (CurveSelfMap, RationalCurve, end_to_end_extend,
                     image_profile, implicitize, liftability,
                     validate_curve_selfmap, validate_parametrization)
from .dynsys import (ProjectiveVariety, RationalPoint, Violation,
                     orbit_classify, validate_system, validate_variety)
from .errors import DynextError, ParseError, UsageError
from .extension import ExtensionConfig, ExtensionResult, extend
from .poly import format_monomial, format_polynomial
from .problemfile import ProblemFile, parse_problem_file

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONSTRUCTION = 3
EXIT_PARSE = 4


class _Emitter:
    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: List[str] = []

    def kv(self, key: str, value):
        if self.machine:
            self.lines.append(f"{key}={value}")

    def text(self, line: str = ""):
        if not self.machine:
            self.lines.append(line)

    def flush(self):
        for line in self.lines:
            print(line)


def _mono_str(ring, monomial) -> str:
    return format_monomial(ring.names, monomial.exps)


def _build_curve(pf: ProblemFile) -> Tuple[RationalCurve, CurveSelfMap]:
    if len(pf.param_forms) != pf.ambient + 1:
        raise UsageError(
            f"param block has {len(pf.param_forms)} forms but ambient {pf.ambient} "
            f"needs {pf.ambient + 1}")
    bad = validate_parametrization(pf.param_ring, pf.param_forms)
    bad += validate_curve_selfmap(pf.param_ring, pf.selfmap_forms, pf.selfmap_degree)
    for f in pf.selfmap_forms:
        if f and not f.is_homogeneous(pf.selfmap_degree):
            bad.append(Violation("map_degree",
                                 "self-map form does not match the declared degree",
                                 format_polynomial(f)))
    if bad:
        raise UsageError("; ".join(f"{v.code}: {v.message}" for v in bad))
    curve = RationalCurve(pf.param_ring, pf.param_forms)
    selfmap = CurveSelfMap(pf.param_ring, pf.selfmap_forms)
    return curve, selfmap


def _build_system(pf: ProblemFile):
    bad = validate_variety(pf.ring, pf.ideal_generators)
    if bad:
        raise UsageError("; ".join(f"{v.code}: {v.message}" for v in bad))
    variety = ProjectiveVariety(pf.ring, pf.ideal_generators)
    report = validate_system(variety, pf.map_degree, pf.map_forms)
    if not report.ok:
        raise UsageError("; ".join(f"{v.code}: {v.message}"
                                   for v in report.violations))
    return variety, report.system


# -- validate -----------------------------------------------------------------

_SYSTEM_CHECKS = ("generators_homogeneous", "nonempty", "polarization_degree",
                  "map_degree", "invariance", "base_point_free")
_CURVE_CHECKS = ("homogeneous", "common_degree", "base_point_free", "arity",
                 "polarization_degree", "map_degree",
                 "selfmap_base_point_free")


def cmd_validate(pf: ProblemFile, out: _Emitter) -> int:
    violations: List[Violation] = []
    if pf.door == "system":
        names = _SYSTEM_CHECKS
        violations += validate_variety(pf.ring, pf.ideal_generators)
        if not violations:
            variety = ProjectiveVariety(pf.ring, pf.ideal_generators)
            violations += list(validate_system(variety, pf.map_degree,
                                               pf.map_forms).violations)
    else:
        names = _CURVE_CHECKS
        if len(pf.param_forms) != pf.ambient + 1:
            violations.append(Violation(
                "arity", f"param block has {len(pf.param_forms)} forms but "
                f"ambient {pf.ambient} needs {pf.ambient + 1}"))
        violations += validate_parametrization(pf.param_ring, pf.param_forms)
        sm = validate_curve_selfmap(pf.param_ring, pf.selfmap_forms,
                                    pf.selfmap_degree)
        for v in sm:
            if v.code == "base_point_free":
                v = Violation("selfmap_base_point_free", v.message, v.witness)
            violations.append(v)
    failed = {}
    for v in violations:
        failed.setdefault(v.code, v)
    listed = list(names) + [c for c in failed if c not in names]
    for i, name in enumerate(listed):
        v = failed.get(name)
        status = "fail" if v else "pass"
        out.kv(f"check[{i}].name", name)
        out.kv(f"check[{i}].status", status)
        if v and (v.message or v.witness):
            out.kv(f"check[{i}].witness", v.witness or v.message)
        out.text(f"[{status}] {name}" + (f" ({v.message})" if v else ""))
    ok = not violations
    out.kv("status", "ok" if ok else "invalid")
    out.text("all invariants hold" if ok else "validation failed")
    out.flush()
    return EXIT_OK if ok else EXIT_INVALID


# -- extend -------------------------------------------------------------------

def _emit_certificates(result: ExtensionResult, out: _Emitter):
    certs = result.certificates
    flags = [("compatibility", certs.compatibility),
             ("step_codimensions", all(e == a for _, e, a in certs.step_codimensions)),
             ("projective_emptiness", certs.projective_emptiness),
             ("degrees", certs.degrees)]
    for name, okp in flags:
        out.kv(f"cert.{name}", "pass" if okp else "fail")
    out.text("certificates: " + ", ".join(
        f"{name} {'ok' if okp else 'FAILED'}" for name, okp in flags))


def _emit_result(result: ExtensionResult, out: _Emitter):
    out.kv("r", result.r)
    out.kv("degree", result.psi[0].homogeneous_degree())
    out.text(f"certified extension of the r={result.r} iterate "
             f"(forms of degree {result.psi[0].homogeneous_degree()})")
    for i, h in enumerate(result.psi):
        line = format_polynomial(h)
        out.kv(f"psi[{i}]", line)
        out.text(f"psi[{i}] = {line}")
    _emit_certificates(result, out)
    repairs = sum(a.repairs() for a in result.transcript.attempts)
    out.kv("repairs", repairs)
    out.kv("guaranteed_r", result.transcript.guaranteed_r)
    out.text(f"randomized repairs used: {repairs} "
             f"(degree-bound iterate threshold: {result.transcript.guaranteed_r})")


def cmd_extend(pf: ProblemFile, args, out: _Emitter) -> int:
    config = ExtensionConfig(max_r=args.max_r, max_retries_per_step=args.max_retries,
                             coeff_bound=args.coeff_bound,
                             allow_conjugation=args.allow_conjugation,
                             seed=args.seed)
    out.kv("command", "extend")
    out.kv("seed", args.seed)
    if pf.door == "curve":
        curve, selfmap = _build_curve(pf)
        outcome = end_to_end_extend(curve, selfmap, config)
        for i, entry in enumerate(outcome.trail):
            out.kv(f"trail[{i}].r", entry.r)
            out.kv(f"trail[{i}].liftable", "true" if entry.liftable else "false")
            if entry.obstruction_monomials:
                obs = ",".join(_mono_str(pf.param_ring, m)
                               for m in entry.obstruction_monomials)
                out.kv(f"trail[{i}].obstruction", obs)
                out.text(f"r={entry.r}: not liftable; obstruction at {obs}")
            elif not entry.extended:
                out.text(f"r={entry.r}: liftable, but {entry.note}")
            out.kv(f"trail[{i}].extended", "true" if entry.extended else "false")
        if outcome.result is None:
            out.kv("status", "failed")
            out.text("no certified extension within the iterate budget")
            out.flush()
            return EXIT_CONSTRUCTION
        out.kv("status", "ok")
        _emit_result(outcome.result, out)
        out.flush()
        return EXIT_OK
    variety, system = _build_system(pf)
    result = extend(system, config)
    if isinstance(result, ExtensionResult):
        out.kv("status", "ok")
        if result.conjugation is not None:
            out.kv("conjugated", "true")
            out.text("note: extends a conjugated iterate (random coordinate change)")
        _emit_result(result, out)
        out.flush()
        return EXIT_OK
    out.kv("status", "failed")
    out.kv("reason", result.reason)
    for i, att in enumerate(result.transcript.attempts):
        out.kv(f"attempt[{i}].r", att.r)
        out.kv(f"attempt[{i}].outcome", att.outcome)
        if att.blocking_step is not None:
            out.kv(f"attempt[{i}].blocking_step", att.blocking_step)
        out.text(f"r={att.r}: {att.outcome}"
                 + (f" at step {att.blocking_step}" if att.blocking_step is not None else ""))
    out.text(f"failed: {result.reason}")
    out.flush()
    return EXIT_CONSTRUCTION


# -- curve reports --------------------------------------------------------------

def cmd_liftability(pf: ProblemFile, args, out: _Emitter) -> int:
    curve, selfmap = _build_curve(pf)
    report = liftability(curve, selfmap, args.r)
    out.kv("command", "liftability")
    out.kv("r", report.r)
    out.kv("degree", report.degree)
    out.kv("rank", report.rank)
    out.kv("liftable", "true" if report.liftable else "false")
    out.text(f"r={report.r}: pullbacks have degree "
             f"{curve.degree * report.degree}; restriction rank {report.rank}")
    for i, m in enumerate(report.image_monomials):
        out.kv(f"image[{i}]", _mono_str(pf.param_ring, m))
    out.text("image monomials: " + ", ".join(
        _mono_str(pf.param_ring, m) for m in report.image_monomials))
    for i, m in enumerate(report.missing_monomials):
        out.kv(f"missing[{i}]", _mono_str(pf.param_ring, m))
    if report.missing_monomials:
        out.text("outside the image: " + ", ".join(
            _mono_str(pf.param_ring, m) for m in report.missing_monomials))
    for c in report.coordinates:
        key = f"coordinate[{c.index}]"
        out.kv(f"{key}.liftable", "true" if c.liftable else "false")
        if c.liftable:
            out.kv(f"{key}.lift", format_polynomial(c.lift))
            out.text(f"coordinate {c.index}: lift {format_polynomial(c.lift)}")
        else:
            for k, ob in enumerate(c.obstructions):
                out.kv(f"{key}.obstruction[{k}].monomial",
                       _mono_str(pf.param_ring, ob.monomial))
                out.kv(f"{key}.obstruction[{k}].coefficient", ob.coefficient)
            blockers = ", ".join(
                f"{_mono_str(pf.param_ring, ob.monomial)} (coefficient {ob.coefficient})"
                for ob in c.obstructions)
            out.text(f"coordinate {c.index}: NOT liftable; obstructed at {blockers}")
    out.kv("status", "ok")
    out.flush()
    return EXIT_OK


def cmd_implicitize(pf: ProblemFile, out: _Emitter) -> int:
    curve, _ = _build_curve(pf)
    gens = implicitize(curve)
    out.kv("command", "implicitize")
    out.kv("generators", len(gens))
    for i, g in enumerate(gens):
        out.kv(f"generator[{i}]", format_polynomial(g))
        out.text(format_polynomial(g))
    out.kv("status", "ok")
    out.flush()
    return EXIT_OK


def cmd_image_basis(pf: ProblemFile, args, out: _Emitter) -> int:
    curve, _ = _build_curve(pf)
    rank, reached, missing = image_profile(curve, args.degree)
    out.kv("command", "image_basis")
    out.kv("degree", args.degree)
    out.kv("rank", rank)
    out.text(f"restriction map at degree {args.degree}: rank {rank} of "
             f"{len(reached) + len(missing)}")
    for i, m in enumerate(reached):
        out.kv(f"image[{i}]", _mono_str(pf.param_ring, m))
    out.text("image monomials: " + ", ".join(
        _mono_str(pf.param_ring, m) for m in reached))
    for i, m in enumerate(missing):
        out.kv(f"missing[{i}]", _mono_str(pf.param_ring, m))
    out.text("missing monomials: " + (", ".join(
        _mono_str(pf.param_ring, m) for m in missing) if missing else "none"))
    out.kv("status", "ok")
    out.flush()
    return EXIT_OK


# -- orbit ----------------------------------------------------------------------

def _parse_point(field, text: str) -> RationalPoint:
    coords = []
    for part in text.split(":"):
        part = part.strip()
        try:
            if "/" in part:
                num, den = part.split("/")
                coords.append(Fraction(int(num), int(den)))
            else:
                coords.append(Fraction(int(part)))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad point coordinate {part!r}")
    return RationalPoint(field, [field.of(c) for c in coords])


def cmd_orbit(pf: ProblemFile, args, out: _Emitter) -> int:
    variety, system = _build_system(pf)
    texts = [args.point] if args.point else [t for t, _ in pf.points]
    if not texts:
        raise UsageError("no point given: pass --point or add a points: block")
    out.kv("command", "orbit")
    out.kv("max_steps", args.max_steps)
    for i, text in enumerate(texts):
        point = _parse_point(pf.field_spec, text)
        if len(point.coords) != pf.ring.nvars:
            raise UsageError(f"point {text!r} has {len(point.coords)} coordinates, "
                             f"expected {pf.ring.nvars}")
        report = orbit_classify(system, point, args.max_steps)
        key = f"orbit[{i}]"
        out.kv(f"{key}.point", str(point))
        if report.preperiodic:
            out.kv(f"{key}.preperiodic", "true")
            out.kv(f"{key}.tail", report.tail)
            out.kv(f"{key}.cycle", report.cycle)
            out.text(f"{point}: preperiodic, tail={report.tail} cycle={report.cycle}")
        else:
            out.kv(f"{key}.preperiodic", "false")
            out.kv(f"{key}.steps", report.steps)
            out.text(f"{point}: no repetition within {report.steps} steps")
    out.kv("status", "ok")
    out.flush()
    return EXIT_OK


# -- driver -----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynext",
        description="Extend polarized self-maps of embedded projective "
                    "varieties to certified finite self-maps of the ambient "
                    "projective space.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("file", help="problem file")
        p.add_argument("--machine", action="store_true",
                       help="line-oriented key=value output")
        return p

    add("validate", help="check every input invariant, with witnesses")

    p = add("extend", help="build a certified ambient extension of an iterate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-r", type=int, default=8, dest="max_r")
    p.add_argument("--max-retries", type=int, default=64, dest="max_retries")
    p.add_argument("--coeff-bound", type=int, default=10, dest="coeff_bound")
    p.add_argument("--allow-conjugation", action="store_true",
                   dest="allow_conjugation")

    p = add("liftability", help="decide liftability of the iterate pullbacks")
    p.add_argument("--r", type=int, default=1)

    add("implicitize", help="defining equations of the parametrized curve")

    p = add("image-basis", help="image/missing monomials of the restriction map")
    p.add_argument("--degree", type=int, required=True)

    p = add("orbit", help="classify a rational point orbit")
    p.add_argument("--point", default=None, help='homogeneous coordinates "a:b:c"')
    p.add_argument("--max-steps", type=int, default=100, dest="max_steps")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = _Emitter(args.machine)
    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        pf = parse_problem_file(text)
        if args.command == "validate":
            return cmd_validate(pf, out)
        if args.command == "extend":
            return cmd_extend(pf, args, out)
        if args.command == "liftability":
            _require_door(pf, "curve")
            return cmd_liftability(pf, args, out)
        if args.command == "implicitize":
            _require_door(pf, "curve")
            return cmd_implicitize(pf, out)
        if args.command == "image-basis":
            _require_door(pf, "curve")
            return cmd_image_basis(pf, args, out)
        if args.command == "orbit":
            _require_door(pf, "system")
            return cmd_orbit(pf, args, out)
        raise AssertionError(f"unhandled command {args.command}")
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DynextError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def _require_door(pf: ProblemFile, door: str):
    if pf.door != door:
        kind = "a parametrized curve" if door == "curve" else "an ideal-plus-map system"
        raise UsageError(f"this command needs {kind} input file")


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
