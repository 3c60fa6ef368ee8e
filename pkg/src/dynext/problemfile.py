"""Line-oriented problem file format.

Two input doors share one file grammar: an ideal-plus-map block describes a
polarized system directly; a param-plus-selfmap block describes a
parametrized curve with a self-map of its parameter line.  '#' starts a
comment, blank lines are ignored, block items are indented lines under a
header ending in ':'.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ParseError, UsageError
from .fields import Field
from .poly import GREVLEX, PolyRing, Polynomial


@dataclass
class ProblemFile:
    """Parsed, syntactically valid input; semantic checks happen later."""

    field_spec: Field
    door: str  # "system" | "curve"
    ring: Optional[PolyRing] = None
    ideal_generators: List[Polynomial] = field(default_factory=list)
    map_degree: int = 0
    map_forms: List[Polynomial] = field(default_factory=list)
    param_ring: Optional[PolyRing] = None
    ambient: int = 0
    param_forms: List[Polynomial] = field(default_factory=list)
    selfmap_degree: int = 0
    selfmap_forms: List[Polynomial] = field(default_factory=list)
    points: List[Tuple[str, int]] = field(default_factory=list)  # (text, line)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _physical_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        yield lineno, body[0] in " \t", body.strip()


def parse_problem_file(text: str) -> ProblemFile:
    """Parse the textual format; raises ParseError on any syntax problem."""
    field_spec: Optional[Field] = None
    ring: Optional[PolyRing] = None
    param_ring: Optional[PolyRing] = None
    ambient = 0
    blocks = {}  # header kind -> (declared degree, [(lineno, text)])
    lines = list(_physical_lines(text))
    i = 0
    while i < len(lines):
        lineno, indented, content = lines[i]
        if indented:
            raise ParseError("indented line outside a block", lineno, 1)
        if content.endswith(":"):
            head = content[:-1].strip()
            words = head.split()
            if words[0] == "ideal" and len(words) == 1:
                kind, degree = "ideal", 0
            elif words[0] == "param" and len(words) == 1:
                kind, degree = "param", 0
            elif words[0] == "points" and len(words) == 1:
                kind, degree = "points", 0
            elif words[0] in ("map", "selfmap") and len(words) == 3 and words[1] == "degree":
                kind = words[0]
                try:
                    degree = int(words[2])
                except ValueError:
                    raise ParseError(f"bad degree {words[2]!r}", lineno, 1)
            else:
                raise ParseError(f"unknown block header {head!r}", lineno, 1)
            if kind in blocks:
                raise ParseError(f"duplicate block {kind!r}", lineno, 1)
            items = []
            i += 1
            while i < len(lines) and lines[i][1]:
                items.append((lines[i][0], lines[i][2]))
                i += 1
            if not items:
                raise ParseError(f"empty block {kind!r}", lineno, 1)
            blocks[kind] = (degree, items)
            continue
        words = content.split()
        if words[0] == "field":
            if field_spec is not None:
                raise ParseError("duplicate field declaration", lineno, 1)
            if words[1:] == ["rational"]:
                field_spec = Field.rationals()
            elif len(words) == 3 and words[1] == "prime":
                try:
                    p = int(words[2])
                except ValueError:
                    raise ParseError(f"bad characteristic {words[2]!r}", lineno, 1)
                try:
                    # the user chose the characteristic explicitly, so the
                    # library's large-characteristic default is overridden
                    field_spec = Field.prime(p, allow_small=True)
                except UsageError as exc:
                    raise ParseError(str(exc), lineno, 1)
            else:
                raise ParseError("expected 'field rational' or 'field prime P'",
                                 lineno, 1)
        elif words[0] == "ring":
            if field_spec is None:
                raise ParseError("field must be declared before the ring", lineno, 1)
            if ring is not None:
                raise ParseError("duplicate ring declaration", lineno, 1)
            try:
                ring = PolyRing(tuple(words[1:]), field_spec, GREVLEX)
            except UsageError as exc:
                raise ParseError(str(exc), lineno, 1)
        elif words[0] == "param" and len(words) >= 2 and words[1] == "ring":
            if field_spec is None:
                raise ParseError("field must be declared before the ring", lineno, 1)
            if param_ring is not None:
                raise ParseError("duplicate param ring declaration", lineno, 1)
            if len(words) != 4:
                raise ParseError("param ring needs exactly two variables", lineno, 1)
            try:
                param_ring = PolyRing(tuple(words[2:]), field_spec, GREVLEX)
            except UsageError as exc:
                raise ParseError(str(exc), lineno, 1)
        elif words[0] == "ambient":
            if len(words) != 2:
                raise ParseError("expected 'ambient M'", lineno, 1)
            try:
                ambient = int(words[1])
            except ValueError:
                raise ParseError(f"bad ambient dimension {words[1]!r}", lineno, 1)
            if ambient < 1:
                raise ParseError("ambient dimension must be >= 1", lineno, 1)
        else:
            raise ParseError(f"unknown declaration {words[0]!r}", lineno, 1)
        i += 1

    if field_spec is None:
        raise ParseError("missing field declaration", 1, 1)

    has_system = "ideal" in blocks or "map" in blocks
    has_curve = "param" in blocks or "selfmap" in blocks
    if has_system == has_curve:
        raise ParseError("need exactly one of {ideal+map} or {param+selfmap}", 1, 1)

    def parse_block(target_ring: PolyRing, kind: str) -> List[Polynomial]:
        out = []
        for item_line, item_text in blocks[kind][1]:
            out.append(target_ring.parse(item_text, line_offset=item_line - 1))
        return out

    points = [(t, l) for l, t in blocks["points"][1]] if "points" in blocks else []

    if has_system:
        if "ideal" not in blocks or "map" not in blocks:
            raise ParseError("the system door needs both 'ideal:' and 'map degree q:'",
                             1, 1)
        if ring is None:
            raise ParseError("missing ring declaration", 1, 1)
        return ProblemFile(
            field_spec=field_spec, door="system", ring=ring,
            ideal_generators=parse_block(ring, "ideal"),
            map_degree=blocks["map"][0],
            map_forms=parse_block(ring, "map"),
            points=points)

    if "param" not in blocks or "selfmap" not in blocks:
        raise ParseError("the curve door needs both 'param:' and 'selfmap degree q:'",
                         1, 1)
    if param_ring is None:
        raise ParseError("missing param ring declaration", 1, 1)
    if ambient == 0:
        raise ParseError("missing ambient declaration", 1, 1)
    return ProblemFile(
        field_spec=field_spec, door="curve", param_ring=param_ring,
        ambient=ambient,
        param_forms=parse_block(param_ring, "param"),
        selfmap_degree=blocks["selfmap"][0],
        selfmap_forms=parse_block(param_ring, "selfmap"),
        points=points)
