"""Multivariate polynomials over an exact field.

Terms are kept canonically sorted for the ring's monomial order (grevlex by
default; lex and block elimination orders exist for implicitization).
Exponent vectors are dense tuples; earlier-listed variables are larger.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm
from random import Random
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import (ArityError, FieldMismatchError, NonHomogeneousError,
                     ParseError, RingMismatchError, UnknownVariableError, UsageError)
from .fields import Field, Scalar

Exponents = Tuple[int, ...]


def _grevlex_key(exps: Exponents):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _grevlex_heap_key(exps: Exponents):
    return (-sum(exps), exps[::-1])


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex | lex | block elimination (grevlex within each block)."""

    kind: str
    first_block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise UsageError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.first_block < 1:
            raise UsageError("block order needs first_block >= 1")

    @property
    def is_graded(self) -> bool:
        return self.kind == "grevlex"

    def key(self, exps: Exponents):
        """Ascending comparison key: key(a) < key(b) iff a < b."""
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        if self.kind == "lex":
            return exps
        k = self.first_block
        return (_grevlex_key(exps[:k]), _grevlex_key(exps[k:]))

    def heap_key(self, exps: Exponents):
        """Key whose minimum is the largest monomial (for heapq pops)."""
        if self.kind == "grevlex":
            return _grevlex_heap_key(exps)
        if self.kind == "lex":
            return tuple(-e for e in exps)
        k = self.first_block
        return (_grevlex_heap_key(exps[:k]), _grevlex_heap_key(exps[k:]))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_elimination(first_block_size: int) -> MonomialOrder:
    return MonomialOrder("block", first_block_size)


class Monomial:
    """Exponent vector with its total degree cached."""

    __slots__ = ("exps", "degree")

    def __init__(self, exps: Iterable[int]):
        object.__setattr__(self, "exps", tuple(exps))
        object.__setattr__(self, "degree", sum(self.exps))
        if any(e < 0 for e in self.exps):
            raise UsageError("negative exponent in monomial")

    def __setattr__(self, *_):
        raise AttributeError("Monomial is immutable")

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(a + b for a, b in zip(self.exps, other.exps))

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def __repr__(self):
        return f"Monomial{self.exps}"


def format_monomial(names: Sequence[str], exps: Exponents) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
    return "*".join(parts) if parts else "1"


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring: ordered variable names, coefficient field, term order."""

    names: Tuple[str, ...]
    field: Field
    order: MonomialOrder = GREVLEX

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) < 1:
            raise UsageError("ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise UsageError("duplicate variable names")
        for n in self.names:
            if not _NAME_RE.fullmatch(n):
                raise UsageError(f"invalid variable name {n!r}")
        if self.order.kind == "block" and not (1 <= self.order.first_block < len(self.names)):
            raise UsageError("block size must satisfy 1 <= k < variable count")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.of(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i: int) -> "Polynomial":
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exps: self.field.one()})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps: Iterable[int], coeff=1) -> "Polynomial":
        c = self.field.of(coeff)
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ArityError("exponent vector length != variable count")
        return Polynomial(self, {exps: c} if c else {})

    def poly(self, terms: Dict) -> "Polynomial":
        out: Dict[Exponents, Scalar] = {}
        for m, c in terms.items():
            exps = m.exps if isinstance(m, Monomial) else tuple(m)
            if len(exps) != self.nvars:
                raise ArityError("exponent vector length != variable count")
            c = self.field.of(c)
            if c:
                out[exps] = c
        return Polynomial(self, out)

    def parse(self, text: str, line_offset: int = 0) -> "Polynomial":
        return _parse_polynomial(self, text, line_offset)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.names, self.field, order)

    def __str__(self):
        return f"{self.field}[{', '.join(self.names)}]"


class Polynomial:
    """Immutable polynomial; ``_terms`` maps exponent tuple -> nonzero scalar."""

    __slots__ = ("ring", "_terms", "_lead")

    def __init__(self, ring: PolyRing, terms: Dict[Exponents, Scalar]):
        self.ring = ring
        self._terms = terms
        self._lead = None

    # -- basic queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def num_terms(self) -> int:
        return len(self._terms)

    def lead_exps(self) -> Exponents:
        if not self._terms:
            raise UsageError("zero polynomial has no leading term")
        if self._lead is None:
            self._lead = max(self._terms, key=self.ring.order.key)
        return self._lead

    def lead_monomial(self) -> Monomial:
        return Monomial(self.lead_exps())

    def lead_coeff(self) -> Scalar:
        return self._terms[self.lead_exps()]

    def coefficient(self, m) -> Scalar:
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        return self._terms.get(exps, self.ring.field.zero())

    def terms(self) -> List[Tuple[Monomial, Scalar]]:
        """Term list in strictly descending monomial order."""
        key = self.ring.order.key
        return [(Monomial(m), self._terms[m])
                for m in sorted(self._terms, key=key, reverse=True)]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        if not self._terms:
            return True
        degs = {sum(m) for m in self._terms}
        if len(degs) > 1:
            return False
        return degree is None or degs.pop() == degree

    def homogeneous_degree(self) -> int:
        if not self.is_homogeneous():
            raise NonHomogeneousError(f"{self} is not homogeneous")
        return self.degree()

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"rings differ: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = -c
            else:
                s = s - c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_ring(other)
            a, b = self._terms, other._terms
            if len(a) > len(b):
                a, b = b, a
            out: Dict[Exponents, Scalar] = {}
            for m1, c1 in a.items():
                for m2, c2 in b.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    s = out.get(m)
                    if s is None:
                        out[m] = c1 * c2
                    else:
                        s = s + c1 * c2
                        if s:
                            out[m] = s
                        else:
                            del out[m]
            return Polynomial(self.ring, out)
        c = self.ring.field.of(other)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c for m, v in self._terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def mul_term(self, coeff, exps: Exponents) -> "Polynomial":
        """Multiply by a single term coeff * x^exps."""
        c = self.ring.field.of(coeff)
        if not c or not self._terms:
            return self.ring.zero()
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(m, exps)): v * c
                                      for m, v in self._terms.items()})

    def __pow__(self, e: int):
        if e < 0:
            raise UsageError("negative polynomial power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e > 1
            e >>= 1
            if base_needed:
                base = base * base
        return result

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.ring == other.ring
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    # -- morphisms ----------------------------------------------------------

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Evaluate at polynomial images of the variables (ring morphism)."""
        if len(images) != self.ring.nvars:
            raise ArityError(f"{self.ring.nvars} images required, got {len(images)}")
        if not images:
            raise ArityError("empty image tuple")
        target = images[0].ring
        for g in images:
            if g.ring != target:
                raise RingMismatchError("images live in different rings")
        if target.field != self.ring.field:
            raise FieldMismatchError("cannot substitute across coefficient fields")
        powers: List[Dict[int, Polynomial]] = [{0: target.one()} for _ in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            got = cache.get(e)
            if got is None:
                got = power(i, e - 1) * images[i]
                cache[e] = got
            return got

        acc: Dict[Exponents, Scalar] = {}
        for m, c in self._terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            for tm, tc in term._terms.items():
                s = acc.get(tm)
                if s is None:
                    acc[tm] = tc
                else:
                    s = s + tc
                    if s:
                        acc[tm] = s
                    else:
                        del acc[tm]
        return Polynomial(target, acc)

    def evaluate(self, values: Sequence) -> Scalar:
        if len(values) != self.ring.nvars:
            raise ArityError("value count != variable count")
        field = self.ring.field
        vals = [field.of(v) for v in values]
        total = field.zero()
        for m, c in self._terms.items():
            term = c
            for v, e in zip(vals, m):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    # -- canonical form ------------------------------------------------------

    def content_scale(self) -> Scalar:
        """Scalar s such that s*self is canonical: integer coefficients with
        content 1 and positive leading coefficient over Q; monic over F_p."""
        if not self._terms:
            return self.ring.field.one()
        if self.ring.field.is_rational:
            den = lcm(*(c.denominator for c in self._terms.values()))
            num = gcd(*(c.numerator for c in self._terms.values()))
            s = Fraction(den, num)
            return -s if self._terms[self.lead_exps()] < 0 else s
        return self.lead_coeff().inverse()

    def canonical(self) -> "Polynomial":
        s = self.content_scale()
        return self if s == 1 else self * s

    def __str__(self):
        return format_polynomial(self, canonical=False)

    def __repr__(self):
        return f"<{self}>"


def format_polynomial(f: Polynomial, canonical: bool = True) -> str:
    """Canonical text form: terms descending in grevlex; scaled to integer
    content-1 coefficients with positive lead (monic over a prime field)."""
    if f.is_zero:
        return "0"
    if canonical:
        f = f.canonical()
    names = f.ring.names
    items = sorted(f._terms.items(), key=lambda mc: _grevlex_key(mc[0]), reverse=True)
    pieces: List[str] = []
    for m, c in items:
        mono = format_monomial(names, m)
        cs = str(c)
        neg = cs.startswith("-")
        mag = cs[1:] if neg else cs
        if mono == "1":
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


def monomials_of_degree(ring: PolyRing, n: int) -> List[Monomial]:
    """All degree-n monomials, descending in the ring's order."""
    if n < 0:
        raise UsageError("degree must be >= 0")
    exps = _exponent_vectors(ring.nvars, n)
    return [Monomial(e) for e in sorted(exps, key=ring.order.key, reverse=True)]


@lru_cache(maxsize=None)
def _exponent_vectors(nvars: int, n: int) -> Tuple[Exponents, ...]:
    if nvars == 1:
        return ((n,),)
    out = []
    for e in range(n + 1):
        out.extend((e,) + rest for rest in _exponent_vectors(nvars - 1, n - e))
    assert len(out) == comb(n + nvars - 1, nvars - 1)
    return tuple(out)


def random_homogeneous(ring: PolyRing, n: int, bound: int, rng: Random) -> Polynomial:
    """Homogeneous degree-n polynomial with random_scalar coefficients."""
    terms: Dict[Exponents, Scalar] = {}
    for m in monomials_of_degree(ring, n):
        c = ring.field.random_scalar(bound, rng)
        if c:
            terms[m.exps] = c
    return Polynomial(ring, terms)


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                       r"|(?P<op>[-+*^()/]))")


class _Tokens:
    def __init__(self, text: str, line_offset: int):
        self.toks: List[Tuple[str, str, int, int]] = []
        for lineno, line in enumerate(text.split("\n"), start=1 + line_offset):
            pos = 0
            while pos < len(line):
                m = _TOKEN_RE.match(line, pos)
                if m is None:
                    stripped = line[pos:].strip()
                    if not stripped:
                        break
                    col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                    raise ParseError(f"unexpected character {stripped[0]!r}", lineno, col)
                kind = m.lastgroup
                self.toks.append((kind, m.group(kind), lineno, m.start(kind) + 1))
                pos = m.end()
        self.i = 0
        self.last_line = 1 + line_offset

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is not None:
            self.i += 1
            self.last_line = t[2]
        return t

    def expect_op(self, op: str):
        t = self.next()
        if t is None or t[0] != "op" or t[1] != op:
            self._fail(f"expected {op!r}", t)
        return t

    def _fail(self, msg: str, tok=None):
        if tok is None:
            tok = self.peek()
        if tok is None:
            raise ParseError(f"{msg}, found end of input", self.last_line, 0)
        raise ParseError(f"{msg}, found {tok[1]!r}", tok[2], tok[3])


def _parse_polynomial(ring: PolyRing, text: str, line_offset: int = 0) -> Polynomial:
    toks = _Tokens(text, line_offset)
    index = {n: i for i, n in enumerate(ring.names)}

    def parse_expr() -> Polynomial:
        sign = 1
        t = toks.peek()
        if t and t[0] == "op" and t[1] in "+-":
            toks.next()
            sign = -1 if t[1] == "-" else 1
        acc = parse_term() * sign
        while True:
            t = toks.peek()
            if t and t[0] == "op" and t[1] in "+-":
                toks.next()
                rhs = parse_term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def parse_term() -> Polynomial:
        acc = parse_factor()
        while True:
            t = toks.peek()
            if t and t[0] == "op" and t[1] == "*":
                toks.next()
                acc = acc * parse_factor()
            else:
                return acc

    def parse_factor() -> Polynomial:
        base = parse_atom()
        t = toks.peek()
        if t and t[0] == "op" and t[1] == "^":
            toks.next()
            e = toks.next()
            if e is None or e[0] != "int":
                toks._fail("expected integer exponent after '^'", e)
            return base ** int(e[1])
        return base

    def parse_atom() -> Polynomial:
        t = toks.next()
        if t is None:
            toks._fail("expected a value")
        kind, val, line, col = t
        if kind == "int":
            nxt = toks.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                toks.next()
                den = toks.next()
                if den is None or den[0] != "int":
                    toks._fail("expected integer denominator after '/'", den)
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2], den[3])
                return ring.const(ring.field.fraction(int(val), int(den[1])))
            return ring.const(int(val))
        if kind == "name":
            i = index.get(val)
            if i is None:
                raise UnknownVariableError(f"unknown variable {val!r}", line, col)
            return ring.gen(i)
        if kind == "op" and val == "(":
            inner = parse_expr()
            toks.expect_op(")")
            return inner
        toks._fail("expected number, variable or '('", t)

    result = parse_expr()
    trailing = toks.peek()
    if trailing is not None:
        toks._fail("trailing input", trailing)
    return result
